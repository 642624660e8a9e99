"""Isomorphisms of Schur rings in all three senses, automorphism groups,
section restrictions, and the two minimality notions.

The pair coloring of a ring assigns color cell_of[y - x] to the pair
(x, y); combinatorial maps are exactly the color-preserving bijections.
All searches are deterministic: candidates are scanned in ascending order
and branch variables are chosen by smallest candidate set.
"""

from __future__ import annotations

from .config import DEFAULT_BOUNDS
from .errors import (PartitionError, ResourceBoundExceeded,
                     SectionNotPreserved, SRingsError)
from .groups import GroupAut, Section, all_auts, aut_order
from .permgrp import PermGroup, identity_perm, pmul, right_regular
from .sring import SRing


class AlgebraicIso:
    """A structure-constant preserving bijection between cell index sets."""

    __slots__ = ("source", "target", "cell_map")

    def __init__(self, source: SRing, target: SRing, cell_map):
        self.source = source
        self.target = target
        self.cell_map = tuple(cell_map)
        self._check()

    def _check(self):
        a, b = self.source, self.target
        m = self.cell_map
        if sorted(m) != list(range(a.rank)) or a.rank != b.rank:
            raise SRingsError("cell map is not a bijection")
        if m[0] != 0:
            raise SRingsError("identity cell must map to the identity cell")
        for i in range(a.rank):
            if len(a.cells[i]) != len(b.cells[m[i]]):
                raise SRingsError("cell sizes differ")
            if m[a.inverse_cell[i]] != b.inverse_cell[m[i]]:
                raise SRingsError("cell map ignores inverse pairing")
        ca = a.structure_constants()
        cb = b.structure_constants()
        for i in range(a.rank):
            for j in range(a.rank):
                va = ca[(i, j)]
                vb = cb[(m[i], m[j])]
                for k in range(a.rank):
                    if va[k] != vb[m[k]]:
                        raise SRingsError("structure constants differ")

    def apply_cell(self, i: int) -> int:
        return self.cell_map[i]

    def image_set(self, elements):
        """Image of a cell-union set, as a set of target elements."""
        a, b = self.source, self.target
        elements = frozenset(elements)
        if not a.is_a_set(elements):
            raise PartitionError("not a union of cells")
        out = set()
        for i in range(a.rank):
            if a.cells[i] <= elements:
                out |= b.cells[self.cell_map[i]]
        return frozenset(out)

    def image_section(self, section: Section) -> Section:
        from .groups import Subgroup

        u_img = Subgroup.from_elements(self.target.spec,
                                       self.image_set(section.U.elements))
        l_img = Subgroup.from_elements(self.target.spec,
                                       self.image_set(section.L.elements))
        return Section(u_img, l_img)

    def inverse(self) -> "AlgebraicIso":
        inv = [0] * len(self.cell_map)
        for i, j in enumerate(self.cell_map):
            inv[j] = i
        return AlgebraicIso(self.target, self.source, inv)

    def __eq__(self, other):
        return (isinstance(other, AlgebraicIso)
                and self.cell_map == other.cell_map
                and self.source.key() == other.source.key()
                and self.target.key() == other.target.key())

    def __hash__(self):
        return hash(self.cell_map)

    def __repr__(self):
        return f"AlgebraicIso({list(self.cell_map)})"


def algebraic_image(phi: AlgebraicIso, obj):
    """Image of a cell-union set or a section under an algebraic iso."""
    if isinstance(obj, Section):
        return phi.image_section(obj)
    return phi.image_set(obj)


def induced_algebraic(a: SRing, b: SRing, f) -> AlgebraicIso | None:
    """The algebraic iso induced by the point bijection f, or None if f is
    not an isomorphism from a onto b.

    The image cell of X is {f(x+g) - f(g)}; it must not depend on g.
    """
    spec = a.spec
    if b.spec != spec or a.rank != b.rank:
        return None
    add = spec.add_table()
    sub = spec.neg_table()
    cell_map = [-1] * a.rank
    n = spec.order
    bco = b.cell_of
    for i, cell in enumerate(a.cells):
        target = -1
        for x in cell:
            for g in range(n):
                d = add[f[add[x][g]]][sub[f[g]]]
                if target < 0:
                    target = bco[d]
                elif bco[d] != target:
                    return None
        if len(b.cells[target]) != len(cell):
            return None
        cell_map[i] = target
    if sorted(cell_map) != list(range(a.rank)):
        return None
    return AlgebraicIso(a, b, cell_map)


# -- color-consistent point backtracking -------------------------------------


class _PairColoring:
    """Precomputed pair colors and per-point allowed-image masks."""

    __slots__ = ("n", "colors", "row_allowed", "col_allowed")

    def __init__(self, ring: SRing):
        spec = ring.spec
        n = spec.order
        add = spec.add_table()
        neg = spec.neg_table()
        cell_of = ring.cell_of
        self.n = n
        colors = []
        for x in range(n):
            nx = neg[x]
            colors.append(tuple(cell_of[add[y][nx]] for y in range(n)))
        self.colors = colors
        rank = ring.rank
        row_allowed = []
        col_allowed = []
        for w in range(n):
            rows = [0] * rank
            cols = [0] * rank
            for x in range(n):
                rows[colors[w][x]] |= 1 << x
                cols[colors[x][w]] |= 1 << x
            row_allowed.append(rows)
            col_allowed.append(cols)
        self.row_allowed = row_allowed
        self.col_allowed = col_allowed


class _Budget:
    __slots__ = ("left",)

    def __init__(self, nodes):
        self.left = nodes

    def spend(self):
        self.left -= 1
        if self.left < 0:
            raise ResourceBoundExceeded("backtracking nodes", 0)


def _search_maps(src: _PairColoring, dst: _PairColoring, src_colors,
                 fixed, budget, find_all, limit=None):
    """Color-preserving bijections extending the fixed partial map.

    src_colors gives the required target color of each source pair, so the
    same engine covers automorphisms (identity recoloring) and isomorphisms
    along an algebraic iso (relabeled colors).
    """
    n = src.n
    full = (1 << n) - 1
    cand = [full] * n
    assigned = [-1] * n
    used = 0

    def restrict(u, w):
        nonlocal used
        assigned[u] = w
        used |= 1 << w
        row_u = src_colors[u]
        col_allowed = dst.col_allowed[w]
        row_allowed = dst.row_allowed[w]
        touched = []
        for v in range(n):
            if assigned[v] >= 0:
                continue
            old = cand[v]
            new = old & row_allowed[row_u[v]] & col_allowed[src_colors[v][u]]
            if new != old:
                touched.append((v, old))
                cand[v] = new
        return touched

    def undo(u, w, touched):
        nonlocal used
        assigned[u] = -1
        used &= ~(1 << w)
        for v, old in touched:
            cand[v] = old

    stack = []
    for u, w in fixed:
        if not (cand[u] >> w & 1) or (used >> w & 1):
            return
        stack.append((u, w, restrict(u, w)))

    results = 0

    def dfs():
        nonlocal results
        budget.spend()
        best_u = -1
        best_count = n + 1
        for v in range(n):
            if assigned[v] >= 0:
                continue
            options = cand[v] & ~used
            c = options.bit_count()
            if c == 0:
                return
            if c < best_count:
                best_count = c
                best_u = v
                if c == 1:
                    break
        if best_u < 0:
            yield tuple(assigned)
            results += 1
            return
        options = cand[best_u] & ~used
        while options:
            bit = options & -options
            options ^= bit
            w = bit.bit_length() - 1
            touched = restrict(best_u, w)
            for sol in dfs():
                yield sol
                if not find_all:
                    return
                if limit is not None and results >= limit:
                    return
            undo(best_u, w, touched)

    yield from dfs()


def scheme_aut(a: SRing, bounds=DEFAULT_BOUNDS) -> PermGroup:
    """The full automorphism group of the ring's pair coloring.

    Builds strong generators level by level: at level k it looks for an
    automorphism fixing 0..k-1 and moving k to each candidate outside the
    orbit of the group found so far, exactly once per candidate orbit.
    """
    if a._scheme_aut is not None:
        return a._scheme_aut
    spec = a.spec
    n = spec.order
    coloring = _PairColoring(a)
    budget = _Budget(bounds.backtrack_node_budget)
    found = [spec.translation(b) for b in spec.basis()]

    def level_orbit(k, gens):
        seen = {k}
        frontier = [k]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = g[x]
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return seen

    for k in range(n):
        level_gens = [g for g in found
                      if all(g[i] == i for i in range(k))]
        orbit = level_orbit(k, level_gens)
        for y in range(n):
            if y in orbit:
                continue
            fixed = [(i, i) for i in range(k)] + [(k, y)]
            sol = next(_search_maps(coloring, coloring, coloring.colors,
                                    fixed, budget, find_all=False), None)
            if sol is not None:
                found.append(sol)
                level_gens = [g for g in found
                              if all(g[i] == i for i in range(k))]
                orbit = level_orbit(k, level_gens)
    group = PermGroup(n, found)
    a._scheme_aut = group
    return group


def has_combinatorial_iso(a: SRing, b: SRing, phi: AlgebraicIso,
                          bounds=DEFAULT_BOUNDS) -> bool:
    """Whether any point bijection realizes the given algebraic iso."""
    if phi.source.key() != a.key() or phi.target.key() != b.key():
        raise ValueError("algebraic iso does not connect these rings")
    src = _PairColoring(a)
    dst = _PairColoring(b)
    src_colors = [tuple(phi.cell_map[c] for c in row) for row in src.colors]
    budget = _Budget(bounds.backtrack_node_budget)
    return next(_search_maps(src, dst, src_colors, [], budget,
                             find_all=False), None) is not None


def combinatorial_isos(a: SRing, b: SRing, phi: AlgebraicIso,
                       bounds=DEFAULT_BOUNDS, limit=None) -> list:
    """All point bijections realizing the given algebraic iso."""
    if phi.source.key() != a.key() or phi.target.key() != b.key():
        raise ValueError("algebraic iso does not connect these rings")
    src = _PairColoring(a)
    dst = _PairColoring(b)
    src_colors = [tuple(phi.cell_map[c] for c in row) for row in src.colors]
    budget = _Budget(bounds.backtrack_node_budget)
    limit = bounds.iso_list_limit if limit is None else limit
    out = []
    for sol in _search_maps(src, dst, src_colors, [], budget, find_all=True,
                            limit=limit):
        out.append(sol)
        if len(out) >= limit:
            raise ResourceBoundExceeded("isomorphism listing", limit)
    out.sort()
    return out


# -- Cayley isomorphisms -------------------------------------------------------


def cayley_isos(a: SRing, b: SRing, bounds=DEFAULT_BOUNDS) -> list:
    """All group automorphisms carrying the cells of a onto the cells of b."""
    if a.spec != b.spec:
        raise ValueError("rings live over different groups")
    spec = a.spec
    if a.rank != b.rank or sorted(map(len, a.cells)) != sorted(map(len, b.cells)):
        return []
    if aut_order(spec) <= bounds.aut_iteration_threshold:
        out = []
        b_cells = set(b.cells)
        for aut in all_auts(spec, bounds.aut_iteration_threshold):
            perm = aut.perm
            if all(frozenset(perm[x] for x in cell) in b_cells
                   for cell in a.cells):
                out.append(aut)
        return out
    return _cayley_isos_backtrack(a, b, bounds)


def _cayley_isos_backtrack(a: SRing, b: SRing, bounds) -> list:
    """Column-by-column search for cell-compatible automorphisms.

    Basis images are chosen per coordinate; thanks to the little-endian
    element encoding, fixing the first j columns determines the images of
    an index prefix, which must map cells of a consistently onto cells of b.
    """
    spec = a.spec
    n = spec.order
    add = spec.add_table()
    basis = spec.basis()
    blocks = spec.prime_blocks()
    budget = _Budget(bounds.backtrack_node_budget)

    prefix_bounds = []
    w = 1
    for r in spec.radices:
        w *= r
        prefix_bounds.append(w)

    coord_prime = []
    for p, nn, pos in blocks:
        coord_prime.extend([p] * nn)

    out = []
    images = [0] * n

    def block_of(ci):
        pos = 0
        for bi, (p, nn, _pos) in enumerate(blocks):
            if ci < pos + nn:
                return bi, ci - pos
            pos += nn
        raise AssertionError

    def extend(ci, pairing):
        budget.spend()
        if ci == len(basis):
            aut = GroupAut.from_images(spec, [(basis[i], images[basis[i]])
                                              for i in range(len(basis))])
            out.append(aut)
            return
        p = coord_prime[ci]
        lo = prefix_bounds[ci - 1] if ci else 1
        hi = prefix_bounds[ci]
        bi, _ = block_of(ci)
        pblock, pn, ppos = blocks[bi]
        for v in range(n):
            coords = spec.coords(v)
            if any(coords[i] for i in range(len(coords))
                   if coord_prime[i] != p):
                continue
            # linear independence within the block comes out of bijectivity
            new_pairing = dict(pairing)
            ok = True
            for x in range(lo, hi):
                cx = spec.coords(x)
                d = cx[ci]
                base = x - d * (prefix_bounds[ci - 1] if ci else 1)
                img = images[base]
                for _ in range(d):
                    img = add[img][v]
                images[x] = img
                ca = a.cell_of[x]
                cb = b.cell_of[img]
                if len(a.cells[ca]) != len(b.cells[cb]):
                    ok = False
                    break
                prev = new_pairing.get(ca)
                if prev is None:
                    if cb in new_pairing.values():
                        ok = False
                        break
                    new_pairing[ca] = cb
                elif prev != cb:
                    ok = False
                    break
            if not ok:
                continue
            seen = len({images[x] for x in range(hi)})
            if seen != hi:
                continue
            extend(ci + 1, new_pairing)

    images[0] = 0
    extend(0, {0: 0})
    out.sort(key=GroupAut.sort_key)
    return out


def cayley_auts(a: SRing, bounds=DEFAULT_BOUNDS):
    """Group automorphisms fixing every cell setwise, i.e. the group
    automorphisms that are scheme automorphisms.  Returns the permutation
    group together with the matrix forms.

    Note this is smaller than cayley_isos(a, a): a self Cayley isomorphism
    may permute the cells, a Cayley automorphism may not.
    """
    if a._cayley is None:
        cell_of = a.cell_of
        auts = [g for g in cayley_isos(a, a, bounds)
                if all(cell_of[g.perm[x]] == cell_of[x]
                       for x in range(a.spec.order))]
        group = PermGroup(a.spec.order, [g.perm for g in auts])
        assert group.order() == len(auts)
        a._cayley = (group, tuple(auts))
    return a._cayley


def is_cyclotomic(a: SRing, bounds=DEFAULT_BOUNDS) -> bool:
    """Whether the cells are exactly the orbits of the Cayley automorphisms."""
    group, _auts = cayley_auts(a, bounds)
    return set(group.orbits()) == set(a.cells)


def algebraic_isos(a: SRing, b: SRing, bounds=DEFAULT_BOUNDS) -> list:
    """All structure-constant preserving cell bijections."""
    if a.rank != b.rank:
        return []
    ca = a.structure_constants()
    cb = b.structure_constants()
    rank = a.rank
    order = sorted(range(rank), key=lambda i: (len(a.cells[i]), i))
    budget = _Budget(bounds.backtrack_node_budget)
    out = []
    mapping = [-1] * rank
    used = [False] * rank

    def ok_so_far(i, done):
        mi = mapping[i]
        for j in done:
            mj = mapping[j]
            va, vb = ca[(i, j)], cb[(mi, mj)]
            for k in done:
                if va[k] != vb[mapping[k]]:
                    return False
            va, vb = ca[(j, i)], cb[(mj, mi)]
            for k in done:
                if va[k] != vb[mapping[k]]:
                    return False
        return True

    def extend(pos, done):
        budget.spend()
        if pos == rank:
            out.append(AlgebraicIso(a, b, mapping))
            return
        i = order[pos]
        for j in range(rank):
            if used[j] or len(b.cells[j]) != len(a.cells[i]):
                continue
            mapping[i] = j
            used[j] = True
            if ok_so_far(i, done):
                done.append(i)
                extend(pos + 1, done)
                done.pop()
            used[j] = False
            mapping[i] = -1

    extend(0, [])
    out.sort(key=lambda phi: phi.cell_map)
    return out


# -- section restrictions ------------------------------------------------------


def restrict_perm(f, section: Section):
    """The permutation induced on U/L by f; f must stabilize the section."""
    spec = section.spec
    U = section.U
    quotient = section.quotient
    image = [-1] * quotient.order
    for u in U.elements:
        fu = f[u]
        if not U.contains(fu):
            raise SectionNotPreserved("image leaves the top group")
        q = section.proj[u]
        fq = section.proj[fu]
        if image[q] == -1:
            image[q] = fq
        elif image[q] != fq:
            raise SectionNotPreserved("cosets of the bottom group are mixed")
    if sorted(image) != list(range(quotient.order)):
        raise SectionNotPreserved("induced map is not a bijection")
    return tuple(image)


def delta_section(perms, section: Section) -> list:
    """{f^S : f stabilizes S}, deduplicated and sorted."""
    out = set()
    for f in perms:
        if isinstance(f, GroupAut):
            f = f.perm
        try:
            out.add(restrict_perm(f, section))
        except SectionNotPreserved:
            continue
    return sorted(out)


# -- minimality ----------------------------------------------------------------


def is_2_minimal(a: SRing, bounds=DEFAULT_BOUNDS) -> bool:
    """No proper overgroup of the translations below Aut has the same
    orbits on ordered pairs as Aut itself."""
    from .permgrp import subgroups_between

    aut = scheme_aut(a, bounds)
    base = right_regular(a.spec)
    target = aut.orbits_pairs()
    for M in subgroups_between(base, aut, bounds):
        if M.order() < aut.order() and M.orbits_pairs() == target:
            return False
    return True


def is_cayley_minimal(a: SRing, bounds=DEFAULT_BOUNDS) -> bool:
    """No proper subgroup of the Cayley automorphism group has the same
    orbits on the group."""
    group, _ = cayley_auts(a, bounds)
    if group.order() > bounds.cayley_minimal_order_bound:
        raise ResourceBoundExceeded("Cayley minimality",
                                    bounds.cayley_minimal_order_bound,
                                    group.order())
    target = set(group.orbits())
    elements = sorted(group.elements())
    n = group.degree
    ident = identity_perm(n)
    subgroups = {frozenset([ident])}
    frontier = [frozenset([ident])]
    while frontier:
        sub = frontier.pop()
        for g in elements:
            if g in sub:
                continue
            new = _closure(sub | {g})
            if new not in subgroups:
                subgroups.add(new)
                frontier.append(new)
    for sub in subgroups:
        if len(sub) == group.order():
            continue
        if _orbit_partition(sub, n) == target:
            return False
    return True


def _closure(perms):
    perms = set(perms)
    frontier = list(perms)
    while frontier:
        g = frontier.pop()
        for h in list(perms):
            for prod in (pmul(g, h), pmul(h, g)):
                if prod not in perms:
                    perms.add(prod)
                    frontier.append(prod)
    return frozenset(perms)


def _orbit_partition(perms, n):
    seen = [False] * n
    out = set()
    for start in range(n):
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
        out.add(frozenset(orbit))
    return out
