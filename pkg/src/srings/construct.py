"""Constructions of Schur rings: group ring, cyclotomic, schurian, tensor,
quotient, generalized wreath product, and the wreath-decomposition finder."""

from __future__ import annotations

from .errors import IncompatibleOnSection, PartitionError
from .groups import (GroupAut, GroupSpec, Section, Subgroup, full_subgroup,
                     subgroup_span, trivial_subgroup)
from .permgrp import PermGroup
from .sring import SRing, SubgroupChart, radical, validate_partition


def group_ring(spec: GroupSpec) -> SRing:
    """The partition into singletons."""
    return validate_partition(spec, [frozenset([x]) for x in spec.elements()])


def cyclotomic(auts, spec: GroupSpec) -> SRing:
    """Cells are the orbits of the given automorphisms on the group."""
    perms = [a.perm if isinstance(a, GroupAut) else tuple(a) for a in auts]
    seen = [False] * spec.order
    cells = []
    for start in spec.elements():
        if seen[start]:
            continue
        orbit = {start}
        frontier = [start]
        seen[start] = True
        while frontier:
            x = frontier.pop()
            for g in perms:
                y = g[x]
                if not seen[y]:
                    seen[y] = True
                    orbit.add(y)
                    frontier.append(y)
        cells.append(frozenset(orbit))
    return validate_partition(spec, cells)


def schurian(K: PermGroup, spec: GroupSpec) -> SRing:
    """Cells are the orbits of the identity stabilizer of K."""
    if K.degree != spec.order:
        raise ValueError("degree mismatch")
    for b in spec.basis():
        if not K.contains(spec.translation(b)):
            raise ValueError("K does not contain the right translations")
    stab = K.point_stabilizer(spec.identity)
    return validate_partition(spec, stab.orbits())


def tensor(a1: SRing, a2: SRing) -> SRing:
    """Product partition over the direct product of the two groups.

    Shared primes are allowed; their ranks add and the first factor's
    coordinates come first within each prime block.
    """
    s1, s2 = a1.spec, a2.spec
    merged = {}
    for p, n in s1.factors:
        merged[p] = merged.get(p, 0) + n
    for p, n in s2.factors:
        merged[p] = merged.get(p, 0) + n
    spec = GroupSpec(sorted(merged.items()), max_order=None)

    def embed(x1, x2):
        blocks = []
        done1 = {p: s1.coords(x1)[pos:pos + n]
                 for p, n, pos in s1.prime_blocks()}
        done2 = {p: s2.coords(x2)[pos:pos + n]
                 for p, n, pos in s2.prime_blocks()}
        for p, _n in spec.factors:
            blocks.append(tuple(done1.get(p, ())) + tuple(done2.get(p, ())))
        return spec.element_from_blocks(blocks)

    cells = []
    for c1 in a1.cells:
        for c2 in a2.cells:
            cells.append(frozenset(embed(x1, x2) for x1 in c1 for x2 in c2))
    return validate_partition(spec, cells)


def quotient(a: SRing, section: Section) -> SRing:
    """Images of the cells inside U under the section projection."""
    U, L = section.U, section.L
    if not (a.is_a_set(U.elements) and a.is_a_set(L.elements)):
        raise PartitionError("not a section of this Schur ring")
    # distinct cells may project onto the same image; dedup as a set
    out = set()
    for cell in a.cells:
        if cell <= U.elements:
            out.add(frozenset(section.proj[x] for x in cell))
    return validate_partition(section.quotient, out)


def restriction(a: SRing, U: Subgroup):
    return a.restriction(U)


def wreath(a_top: SRing, a_quot: SRing, section: Section) -> SRing:
    """Generalized wreath product along the section U/L.

    a_top lives on U's own spec, a_quot on the spec of G/L.  Inside U the
    cells come from a_top; outside U every cell is the preimage of an
    a_quot cell.  The two factors must agree on the common section.
    """
    spec = section.spec
    U, L = section.U, section.L
    chart = SubgroupChart(U)
    glq = Section(full_subgroup(spec), L)
    if a_top.spec != chart.spec:
        raise ValueError("top factor is not over U's spec")
    if a_quot.spec != glq.quotient:
        raise ValueError("quotient factor is not over the spec of G/L")

    # compatibility: a_top's projection to U/L must match a_quot inside U/L
    sec_in_top = Section(
        full_subgroup(chart.spec),
        Subgroup.from_elements(chart.spec,
                               [chart.to_sub[x] for x in L.elements]))
    try:
        top_on_section = quotient(a_top, sec_in_top)
    except PartitionError:
        raise IncompatibleOnSection(frozenset(L.elements)) from None
    sq_elements = sorted(glq.proj[u] for u in U.elements)
    sq = Subgroup.from_elements(glq.quotient, set(sq_elements))
    try:
        quot_on_section, sq_chart = a_quot.restriction(sq)
    except PartitionError:
        raise IncompatibleOnSection(frozenset(sq.elements)) from None
    # identify S = U/L computed both ways via coset representatives
    iota = {}
    for s in range(sec_in_top.quotient.order):
        u_sub = sec_in_top.lift[s]
        u_amb = chart.from_sub[u_sub]
        iota[s] = sq_chart.to_sub[glq.proj[u_amb]]
    for cell in top_on_section.cells:
        image = frozenset(iota[s] for s in cell)
        if image not in quot_on_section.cells:
            witness = frozenset(chart.from_sub[sec_in_top.lift[s]] for s in cell)
            raise IncompatibleOnSection(witness)

    cells = [frozenset(chart.from_sub[x] for x in cell)
             for cell in a_top.cells]
    preimage = {}
    for x in spec.elements():
        preimage.setdefault(glq.proj[x], []).append(x)
    for cell in a_quot.cells:
        if not (frozenset(cell) <= sq.elements):
            members = []
            for q in cell:
                members.extend(preimage[q])
            cells.append(frozenset(members))
    ring = validate_partition(spec, cells)
    expected = a_top.rank + a_quot.rank - top_on_section.rank
    assert ring.rank == expected, "wreath rank formula violated"
    return ring


def decompositions(a: SRing) -> list:
    """All sections U/L with 1 < |L|, U < G, witnessing a generalized
    wreath decomposition: every cell outside U has L inside its radical.

    Empty exactly when the ring is indecomposable.
    """
    if a._decompositions is not None:
        return list(a._decompositions)
    spec = a.spec
    subs = a.a_subgroups()
    rads = [radical(spec, cell).mask for cell in a.cells]
    out = []
    for U in subs:
        if U.order == spec.order:
            continue
        allowed = (1 << spec.order) - 1
        for i, cell in enumerate(a.cells):
            if not cell <= U.elements:
                allowed &= rads[i]
        for L in subs:
            if L.order > 1 and U.contains_subgroup(L) \
                    and L.mask & ~allowed == 0:
                out.append(Section(U, L))
    out.sort(key=lambda s: (s.L.order, -s.U.order,
                            s.U.sort_key(), s.L.sort_key()))
    a._decompositions = tuple(out)
    return out


def is_wreath_for(a: SRing, section: Section) -> bool:
    """Whether every cell outside U has the section's L in its radical."""
    spec = a.spec
    U, L = section.U, section.L
    if not (a.is_a_set(U.elements) and a.is_a_set(L.elements)):
        return False
    for cell in a.cells:
        if not cell <= U.elements:
            if L.mask & ~radical(spec, cell).mask:
                return False
    return True


def wreath_parts(a: SRing, section: Section):
    """The two factors (top ring over U's spec, quotient ring over G/L)."""
    top, chart = a.restriction(section.U)
    glq = Section(full_subgroup(a.spec), section.L)
    quot = quotient(a, glq)
    return top, chart, quot, glq


def sring_image(a: SRing, perm) -> SRing:
    """The ring with cells mapped through a group automorphism's permutation."""
    cells = [frozenset(perm[x] for x in cell) for cell in a.cells]
    return validate_partition(a.spec, cells)


# -- construction expressions -------------------------------------------------
#
# Small prefix grammar used for catalog labels and the CLI:
#
#   expr     := "ZG"
#             | "wr(" expr "," expr ";U=" gens ";L=" gens ")"
#             | "tensor[" group "," group "](" expr "," expr ")"
#             | "cyc(" gen ("|" gen)* ")"
#   gens     := "[" vec (";" vec)* "]"        basis vectors of the subgroup
#   vec      := "(" int ("," int)* ")"        coordinates in the ambient group
#   gen      := mat ("&" mat)*                one matrix per prime block
#   mat      := "[" vec (";" vec)* "]"        rows
#
# In wr(...) the first expression is over U, the second over G/L.  In
# tensor[g1,g2](...) the two group strings fix how the coordinates split.


def _format_vec(coords):
    return "(" + ",".join(str(c) for c in coords) + ")"


def _format_gens(spec, sub: Subgroup):
    rows = []
    blocks = spec.prime_blocks()
    for (p, n, pos), basis in zip(blocks, sub.bases):
        for row in basis:
            full = [0] * len(spec.radices)
            full[pos:pos + n] = list(row)
            rows.append(_format_vec(full))
    return "[" + ";".join(rows) + "]"


def format_construction(label) -> str:
    return label


def recognize_construction(a: SRing, max_order_for_cyc=100_000) -> str | None:
    """Best-effort structural label for a ring; None if nothing matched."""
    from . import morphisms
    from .groups import format_group

    spec = a.spec
    if a.rank == spec.order:
        return "ZG"
    # tensor over a pair of complementary cell-union subgroups
    subs = [H for H in a.a_subgroups() if 1 < H.order < spec.order]
    for H in subs:
        for K in subs:
            if H.order * K.order == spec.order and \
                    H.meet(K).order == 1:
                try:
                    rh, _ = a.restriction(H)
                    rk, _ = a.restriction(K)
                except PartitionError:
                    continue
                if tensor(rh, rk).cells == a.cells and \
                        _same_coordinate_split(spec, H, K):
                    lh = recognize_construction(rh) or "?"
                    lk = recognize_construction(rk) or "?"
                    return (f"tensor[{format_group(rh.spec)},"
                            f"{format_group(rk.spec)}]({lh},{lk})")
    decs = decompositions(a)
    if decs:
        sec = decs[0]
        top, _chart, quot, _ = wreath_parts(a, sec)
        lt = recognize_construction(top) or "?"
        lq = recognize_construction(quot) or "?"
        return (f"wr({lt},{lq};U={_format_gens(spec, sec.U)}"
                f";L={_format_gens(spec, sec.L)})")
    try:
        group, auts = morphisms.cayley_auts(a)
    except Exception:
        return None
    orbit_ring = cyclotomic(auts, spec) if auts else group_ring(spec)
    if orbit_ring.cells == a.cells:
        gens = _minimal_cyclotomic_gens(a, auts)
        label = "|".join(
            "&".join("[" + ";".join(_format_vec(row) for row in mat) + "]"
                     for mat in mats)
            for mats in gens)
        return f"cyc({label})"
    return None


def _same_coordinate_split(spec, H, K):
    """True if H and K are spanned by disjoint coordinate blocks."""
    used_h = _coordinate_support(spec, H)
    used_k = _coordinate_support(spec, K)
    return not (used_h & used_k)


def _coordinate_support(spec, sub: Subgroup):
    support = set()
    for x in sub.elements:
        for i, c in enumerate(spec.coords(x)):
            if c:
                support.add(i)
    return support


def _minimal_cyclotomic_gens(a: SRing, auts):
    """A small generating subset of the Cayley automorphisms realizing the
    same orbit partition (greedy, deterministic)."""
    chosen = []
    for aut in sorted(auts, key=lambda g: g.sort_key()):
        if aut.mats == GroupAut.identity(a.spec).mats:
            continue
        chosen.append(aut)
        if cyclotomic(chosen, a.spec).cells == a.cells:
            return [g.mats for g in chosen]
    return [g.mats for g in chosen]


def parse_construction(text: str, spec: GroupSpec) -> SRing:
    """Evaluate a construction expression over the given ambient group."""
    text = text.strip()
    ring, rest = _parse_expr(text, spec)
    if rest:
        raise ValueError(f"trailing input {rest!r}")
    return ring


def _parse_expr(text, spec):
    if text.startswith("ZG"):
        return group_ring(spec), text[2:]
    if text.startswith("wr("):
        inner, rest = _match_paren(text[2:])
        body, u_part, l_part = _split_wreath(inner)
        U = _parse_gens(u_part, spec)
        L = _parse_gens(l_part, spec)
        section = Section(U, L)
        chart = SubgroupChart(U)
        glq = Section(full_subgroup(spec), L)
        e1, e2 = _split_top_level(body)
        top = parse_construction(e1, chart.spec)
        quot = parse_construction(e2, glq.quotient)
        return wreath(top, quot, section), rest
    if text.startswith("tensor["):
        close = text.index("]")
        from .groups import parse_group

        g1_text, g2_text = text[len("tensor["):close].split(",")
        g1 = parse_group(g1_text, max_order=None)
        g2 = parse_group(g2_text, max_order=None)
        inner, rest = _match_paren(text[close + 1:])
        e1, e2 = _split_top_level(inner)
        return tensor(parse_construction(e1, g1),
                      parse_construction(e2, g2)), rest
    if text.startswith("cyc("):
        inner, rest = _match_paren(text[3:])
        auts = []
        for gen_text in _split_on(inner, "|"):
            mats = [_parse_matrix(m) for m in _split_on(gen_text, "&")]
            auts.append(GroupAut(spec, mats))
        return cyclotomic(auts, spec), rest
    raise ValueError(f"cannot parse construction {text!r}")


def _match_paren(text):
    assert text[0] == "("
    depth = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0:
                return text[1:i], text[i + 1:]
    raise ValueError("unbalanced parentheses")


def _split_wreath(inner):
    parts = _split_on(inner, ";")
    if len(parts) != 3 or not parts[1].startswith("U=") \
            or not parts[2].startswith("L="):
        raise ValueError(f"bad wreath arguments {inner!r}")
    return parts[0], parts[1][2:], parts[2][2:]


def _split_on(text, sep):
    depth = 0
    parts = []
    cur = []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def _split_top_level(text):
    parts = _split_on(text, ",")
    if len(parts) != 2:
        raise ValueError(f"expected two arguments in {text!r}")
    return parts[0], parts[1]


def _parse_vec(text):
    text = text.strip()
    if not (text.startswith("(") and text.endswith(")")):
        raise ValueError(f"bad vector {text!r}")
    return tuple(int(v) for v in text[1:-1].split(","))


def _parse_gens(text, spec) -> Subgroup:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ValueError(f"bad generator list {text!r}")
    body = text[1:-1]
    gens = []
    if body:
        for vec_text in _split_on(body, ";"):
            gens.append(spec.index(_parse_vec(vec_text)))
    return subgroup_span(spec, gens) if gens else trivial_subgroup(spec)


def _parse_matrix(text):
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ValueError(f"bad matrix {text!r}")
    return tuple(_parse_vec(row) for row in _split_on(text[1:-1], ";"))
