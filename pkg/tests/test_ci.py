import random

import pytest

from srings.errors import PreconditionFailed
from srings.groups import Section, all_auts, subgroup_span
from srings.permgrp import pmul
from srings.construct import decompositions, group_ring
from srings.morphisms import (cayley_isos, induced_algebraic, is_cayley_minimal,
                              is_cyclotomic, scheme_aut)
from srings.ci import (CIDecider, CIStatus, SectionContext, ci_fastpath,
                       condition_holds, decide_ci, image_sring, is_ci,
                       is_ci_bruteforce, iso_membership, lift_isomorphism,
                       verify_criterion, verify_lift)

from conftest import image_partition_is_sring, make_plain_wreath


def test_cistatus_invariants():
    with pytest.raises(ValueError):
        CIStatus("NotCI")
    with pytest.raises(ValueError):
        CIStatus("Undecided")
    assert CIStatus("CI", "bruteforce").is_ci


def test_iso_membership_translations_and_auts(c8):
    ring = make_plain_wreath(c8, [1, 2], [1])
    for g in (1, 5):
        assert iso_membership(ring.spec.translation(g), ring)
    for aut in all_auts(c8, 10 ** 5)[:20]:
        assert iso_membership(aut.perm, ring)


def test_iso_membership_against_definition_oracle(c8):
    rng = random.Random(3)
    ring = make_plain_wreath(c8, [1, 2], [1])
    hits = 0
    for _ in range(60):
        f = list(range(8))
        rng.shuffle(f)
        f = tuple(f)
        expected = image_partition_is_sring(ring, f)
        assert iso_membership(f, ring) == expected
        hits += expected
    # the sample must exercise both outcomes
    assert 0 < hits < 60


def test_image_sring_of_affine_map(c8):
    ring = make_plain_wreath(c8, [1, 2], [1])
    aut = all_auts(c8, 10 ** 5)[17]
    image = image_sring(ring, aut.perm)
    assert image.cells == tuple(
        sorted((frozenset(aut.perm[x] for x in c) for c in ring.cells),
               key=lambda c: (len(c), min(c))))


def test_is_ci_bruteforce_group_ring(c8):
    assert is_ci_bruteforce(group_ring(c8)).verdict == "CI"


def test_is_ci_matches_bruteforce_everywhere(catalog_c8, c8):
    for entry in catalog_c8.entries:
        ring = entry.ring(c8)
        fast = is_ci(ring)
        slow = is_ci_bruteforce(ring)
        assert fast.verdict == slow.verdict == "CI"


def test_is_ci_all_p_rings_over_c27(catalog_c27_p, c27):
    for entry in catalog_c27_p.entries:
        status = is_ci(entry.ring(c27))
        assert status.verdict == "CI"


def test_condition_u_equals_l(c27):
    ring = make_plain_wreath(c27,
                             [c27.index((1, 0, 0)), c27.index((0, 1, 0))],
                             [c27.index((1, 0, 0)), c27.index((0, 1, 0))])
    section = next(s for s in decompositions(ring)
                   if s.U.order == 9 and s.L.order == 9)
    assert condition_holds(ring, section)


def test_condition_trivial_section_ring(c27, table_rings):
    ring = table_rings[5]
    section = next(s for s in decompositions(ring)
                   if s.U.order == 9 and s.L.order == 3)
    ctx = SectionContext(ring, section)
    assert ctx.sec_ring.rank == 3  # full group ring on the section
    assert condition_holds(ring, section, context=ctx)


def test_condition_computed_both_sides(c27, table_rings):
    ring = table_rings[3]
    for section in decompositions(ring):
        ctx = SectionContext(ring, section)
        top_side, quot_side = ctx.factor_aut_projections()
        sec_group, _ = ctx and __import__("srings.morphisms",
                                          fromlist=["cayley_auts"]
                                          ).cayley_auts(ctx.sec_ring)
        product = {pmul(f, h) for f in top_side for h in quot_side}
        assert product <= set(sec_group.elements())
        assert condition_holds(ring, section, context=ctx) == \
            (product == set(sec_group.elements()))


def test_fastpath_thin(c27, table_rings):
    status = ci_fastpath(table_rings[2], None)
    assert status is not None and status.method == "fastpath-thin"


def test_fastpath_trivial(c27, table_rings):
    ring = table_rings[5]
    section = next(s for s in decompositions(ring)
                   if s.U.order == 9 and s.L.order == 3)
    status = ci_fastpath(ring, section, parts_ci=True)
    assert status is not None
    assert status.method in ("fastpath-trivial", "fastpath-thin")


def test_fastpath_min(c27, table_rings):
    ring = table_rings[3]
    section = next(s for s in decompositions(ring) if s.U.order == 9)
    status = ci_fastpath(ring, section, parts_ci=True)
    assert status is not None and status.verdict == "CI"


def test_decider_strategies(c27, table_rings, catalog_c27_p):
    decider = CIDecider()
    for i in (1, 2, 3, 4, 5, 6):
        assert decider.decide(table_rings[i]).verdict == "CI"
    with_fast = {k: v.method for k, v in decider.cache.items()}
    assert any(m.startswith("fastpath") or m == "section-condition"
               for m in with_fast.values())
    plain = CIDecider(allow_fastpaths=False)
    for i in (1, 2, 3, 4, 5, 6):
        status = plain.decide(table_rings[i])
        assert status.verdict == "CI"
        assert status.method in ("regular-subgroups", "bruteforce")


def test_ci2_direction_sampled(c8, catalog_c8):
    """Whenever a ring is CI, every sampled isomorphism is matched by a
    Cayley isomorphism inducing the same algebraic iso."""
    rng = random.Random(9)
    for entry in catalog_c8.entries[:6]:
        ring = entry.ring(c8)
        aut = scheme_aut(ring)
        for _ in range(5):
            f = pmul(aut.random_element(rng),
                     rng.choice(all_auts(c8, 10 ** 5)).perm)
            target = image_sring(ring, f)
            phi_f = induced_algebraic(ring, target, f)
            assert phi_f is not None
            matches = [c for c in cayley_isos(ring, target)
                       if induced_algebraic(ring, target, c.perm).cell_map
                       == phi_f.cell_map]
            assert matches, "CI ring must admit a matching Cayley iso"


def _random_instances(spec, seed, count, builders):
    rng = random.Random(seed)
    auts = all_auts(spec, 10 ** 5)
    out = []
    while len(out) < count:
        ring, section = builders[rng.randrange(len(builders))]
        aut_group = scheme_aut(ring)
        f = pmul(aut_group.random_element(rng), rng.choice(auts).perm)
        out.append((ring, section, f))
    return out


def test_lift_isomorphism_random_instances(c27, c16):
    """Acceptance-grade randomized check of the constructive lift."""
    builders27 = []
    u_full = [c27.index((1, 0, 0)), c27.index((0, 1, 0))]
    l_gen = [c27.index((1, 0, 0))]
    ring = make_plain_wreath(c27, u_full, l_gen)
    builders27.append((ring, Section(subgroup_span(c27, u_full),
                                     subgroup_span(c27, l_gen))))
    ring2 = make_plain_wreath(c27, u_full, u_full)
    builders27.append((ring2, Section(subgroup_span(c27, u_full),
                                      subgroup_span(c27, u_full))))
    builders16 = []
    ring3 = make_plain_wreath(c16, [1, 2, 4], [1])
    builders16.append((ring3, Section(subgroup_span(c16, [1, 2, 4]),
                                      subgroup_span(c16, [1]))))
    ring4 = make_plain_wreath(c16, [1, 2], [1, 2])
    builders16.append((ring4, Section(subgroup_span(c16, [1, 2]),
                                      subgroup_span(c16, [1, 2]))))

    total = 0
    for spec, builders, count in ((c27, builders27, 60), (c16, builders16, 60)):
        for ring, section, f in _random_instances(spec, 42, count, builders):
            assert condition_holds(ring, section)
            target = image_sring(ring, f)
            alpha = lift_isomorphism(ring, target, f, section)
            assert verify_lift(ring, target, f, alpha)
            total += 1
    assert total == 120


def test_lift_contract_cases(c27, table_rings):
    ring = table_rings[5]
    section = next(s for s in decompositions(ring)
                   if s.U.order == 9 and s.L.order == 3)
    # f already a group automorphism
    aut = next(a for a in all_auts(c27, 10 ** 5)
               if cayley_isos(ring, ring) and a.perm != tuple(range(27)))
    f = cayley_isos(ring, ring)[1].perm
    target = image_sring(ring, f)
    alpha = lift_isomorphism(ring, target, f, section)
    assert verify_lift(ring, target, f, alpha)
    # f a scheme automorphism: the lift induces the trivial algebraic iso
    g = scheme_aut(ring).random_element(random.Random(5))
    alpha = lift_isomorphism(ring, ring, g, section)
    ind = induced_algebraic(ring, ring, alpha.perm)
    assert ind.cell_map == tuple(range(ring.rank))


def test_lift_rejects_non_isomorphism(c27, table_rings):
    ring = table_rings[5]
    other = table_rings[3]
    with pytest.raises(PreconditionFailed):
        lift_isomorphism(ring, other, tuple(range(27)))


def test_lift_rejects_indecomposable(c27, table_rings):
    ring = table_rings[6]
    with pytest.raises(PreconditionFailed):
        lift_isomorphism(ring, ring, tuple(range(27)))


def test_thin_index_p_structure(catalog_c27_p, c27):
    """Thin radical of index p forces: wreath of group rings, cyclotomic,
    Cayley minimal, CI."""
    for entry in catalog_c27_p.entries:
        ring = entry.ring(c27)
        thin = ring.thin_radical()
        if thin.order * 3 != 27:
            continue
        status = ci_fastpath(ring, None)
        assert status is not None and status.method == "fastpath-thin"
        assert is_cyclotomic(ring)
        assert is_cayley_minimal(ring)
        assert is_ci(ring).verdict == "CI"


def test_index_p_subgroup_lemmas(catalog_c27_p, c27):
    """For p-rings: a cell of size |G|/p forces the index-p wreath, every
    cell sits inside a coset of an index-p cell-union subgroup, and the
    thin-radical size bound forces nontrivial radicals."""
    from srings.construct import is_wreath_for
    from srings.sring import radical

    for entry in catalog_c27_p.entries:
        ring = entry.ring(c27)
        big_cells = [c for c in ring.cells if len(c) == 9]
        if big_cells:
            hit = False
            for U in ring.a_subgroups():
                if U.order == 9 and is_wreath_for(ring, Section(U, U)):
                    hit = True
            assert hit
        for U in ring.a_subgroups():
            if U.order != 9:
                continue
            thin = ring.thin_radical()
            for cell in ring.cells:
                # each cell lies inside one U-coset
                cosets = {c27.sub(x, min(cell)) in U.elements for x in cell}
                assert all(U.contains(c27.sub(x, min(cell))) for x in cell)
                inter = thin.meet(U)
                if inter.order * len(cell) > 9:
                    rad = radical(c27, cell)
                    assert thin.meet(rad).order > 1


def test_verify_criterion_small(catalog_c8, c8):
    report = verify_criterion([e.ring(c8) for e in catalog_c8.entries])
    assert not report["soundness_violations"]
    assert report["criterion_every_section"]
    assert report["criterion_some_section"]
    assert not report["undecided_entries"]
