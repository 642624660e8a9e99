"""Shared fixtures and independent oracles.

The oracles deliberately avoid the library's own machinery: subgroup
counting by subset closure, permutation-group order by naive closure,
scheme automorphisms by filtering all of Sym(n), and Schur ring validity
by integer-span membership.
"""

import itertools

import pytest

from srings.groups import Section, full_subgroup, parse_group, subgroup_span
from srings.sring import SubgroupChart, validate_partition
from srings.construct import group_ring, wreath
from srings.catalog import enumerate_srings


@pytest.fixture(scope="session")
def c2():
    return parse_group("2")


@pytest.fixture(scope="session")
def c3():
    return parse_group("3")


@pytest.fixture(scope="session")
def c8():
    return parse_group("2^3")


@pytest.fixture(scope="session")
def c9():
    return parse_group("3^2")


@pytest.fixture(scope="session")
def c12():
    return parse_group("2^2x3")


@pytest.fixture(scope="session")
def c27():
    return parse_group("3^3")


@pytest.fixture(scope="session")
def c16():
    return parse_group("2^4")


def make_plain_wreath(spec, top_gens, bottom_gens):
    """Wreath of two group rings over span(top_gens)/span(bottom_gens)."""
    U = subgroup_span(spec, top_gens)
    L = subgroup_span(spec, bottom_gens)
    chart = SubgroupChart(U)
    glq = Section(full_subgroup(spec), L)
    return wreath(group_ring(chart.spec), group_ring(glq.quotient),
                  Section(U, L))


@pytest.fixture(scope="session")
def table_rings(c27):
    """The six classification templates over C_3^3, keyed by row number."""
    from srings.catalog import rank3_templates

    _spec, templates = rank3_templates(3)
    return {i + 1: ring for i, (_name, ring) in enumerate(templates)}


@pytest.fixture(scope="session")
def catalog_c8(c8):
    return enumerate_srings(c8, "all", label=False)


@pytest.fixture(scope="session")
def catalog_c12(c12):
    return enumerate_srings(c12, "all", label=False)


@pytest.fixture(scope="session")
def catalog_c27_p(c27):
    return enumerate_srings(c27, "p-srings", label=False)


# -- independent oracles -----------------------------------------------------


def closure_subgroups(spec):
    """All subgroups by brute force: subsets containing 0 closed under
    addition.  Only sensible for tiny groups."""
    n = spec.order
    out = []
    elements = list(range(n))
    for r in range(n + 1):
        for subset in itertools.combinations(elements, r):
            if 0 not in subset:
                continue
            s = set(subset)
            if all(spec.add(a, b) in s for a in s for b in s):
                out.append(frozenset(s))
    return out


def naive_perm_closure(gens, degree):
    """All elements of the generated permutation group, by multiplication."""
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    gens = [tuple(g) for g in gens]
    while frontier:
        g = frontier.pop()
        for h in gens:
            prod = tuple(h[x] for x in g)
            if prod not in seen:
                seen.add(prod)
                frontier.append(prod)
    return seen


def op_preserving_bijections(spec):
    """Count bijections f with f(a+b) = f(a)+f(b), by brute force."""
    n = spec.order
    count = 0
    for perm in itertools.permutations(range(1, n)):
        f = (0,) + perm
        good = True
        for a in range(n):
            for b in range(a, n):
                if f[spec.add(a, b)] != spec.add(f[a], f[b]):
                    good = False
                    break
            if not good:
                break
        if good:
            count += 1
    return count


def brute_scheme_aut(ring):
    """All pair-color preserving permutations, by filtering Sym(n)."""
    spec = ring.spec
    n = spec.order
    color = [[ring.cell_of[spec.sub(y, x)] for y in range(n)]
             for x in range(n)]
    out = []
    for f in itertools.permutations(range(n)):
        good = True
        for x in range(n):
            cx = color[x]
            fx = f[x]
            for y in range(n):
                if color[fx][f[y]] != cx[y]:
                    good = False
                    break
            if not good:
                break
        if good:
            out.append(f)
    return out


def span_closure_holds(spec, cells):
    """Integer-span closure oracle: the product of any two cell indicator
    vectors must be an integer combination of cell indicators, i.e.
    constant on every cell with the leftover exactly zero."""
    cells = [sorted(c) for c in cells]
    n = spec.order
    for X in cells:
        for Y in cells:
            vec = [0] * n
            for x in X:
                for y in Y:
                    vec[spec.add(x, y)] += 1
            rebuilt = [0] * n
            for Z in cells:
                coeff = vec[Z[0]]
                for z in Z:
                    rebuilt[z] += coeff
            if rebuilt != vec:
                return False
    return True


def all_partitions(items):
    """Every set partition of the given list (Bell-number many)."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for smaller in all_partitions(rest):
        for i in range(len(smaller)):
            yield smaller[:i] + [[first] + smaller[i]] + smaller[i + 1:]
        yield [[first]] + smaller


def image_partition_is_sring(ring, f):
    """Definition-level isomorphism oracle: the image pair coloring must be
    the coloring of a valid ring, rebuilt from difference sets."""
    from srings.errors import PartitionError

    spec = ring.spec
    n = spec.order
    cells = set()
    for cell in ring.cells:
        image = set()
        for x in cell:
            for g in range(n):
                image.add(spec.sub(f[spec.add(x, g)], f[g]))
        cells.add(frozenset(image))
    if sum(len(c) for c in cells) != n:
        return False
    try:
        candidate = validate_partition(spec, cells)
    except PartitionError:
        return False
    # the induced cell map must be well defined: the image color of a pair
    # may depend only on its source color
    mapping = {}
    for x in range(n):
        for y in range(n):
            src = ring.cell_of[spec.sub(y, x)]
            dst = candidate.cell_of[spec.sub(f[y], f[x])]
            if mapping.setdefault(src, dst) != dst:
                return False
    return len(set(mapping.values())) == ring.rank
