"""Exact arithmetic for direct products of elementary abelian groups.

A group C_{p1}^{n1} x ... x C_{pk}^{nk} (distinct primes) is described by a
GroupSpec.  Elements are plain integers in ``range(order)``: the coordinate
vector lists one residue per coordinate, least significant first, so the
prefix ``range(p1**k)`` is exactly the span of the first k basis vectors.
Subgroups, sections and automorphisms are all built on this encoding.
"""

from __future__ import annotations

import itertools
from functools import reduce

from .errors import GroupSpecError, ResourceBoundExceeded

DEFAULT_MAX_ORDER = 64


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


class GroupSpec:
    """A direct product of elementary abelian groups, elements as ints."""

    __slots__ = ("factors", "order", "radices", "exponent", "_coords", "_add",
                 "_neg", "_index_weights")

    def __init__(self, factors, max_order=DEFAULT_MAX_ORDER):
        factors = tuple((int(p), int(n)) for p, n in factors)
        for p, n in factors:
            if not _is_prime(p):
                raise GroupSpecError(f"{p} is not prime")
            if n < 1:
                raise GroupSpecError(f"rank must be at least 1, got {n}")
        primes = [p for p, _ in factors]
        if len(set(primes)) != len(primes):
            raise GroupSpecError(f"duplicate prime in {factors}")
        self.factors = tuple(sorted(factors))
        order = 1
        for p, n in self.factors:
            order *= p**n
        if max_order is not None and order > max_order:
            raise ResourceBoundExceeded("group order", max_order, order)
        self.order = order
        self.radices = tuple(p for p, n in self.factors for _ in range(n))
        self.exponent = reduce(lambda a, b: a * b, primes, 1) if primes else 1
        weights = []
        w = 1
        for r in self.radices:
            weights.append(w)
            w *= r
        self._index_weights = tuple(weights)
        coords = []
        for x in range(order):
            c = []
            for r in self.radices:
                x, rem = divmod(x, r)
                c.append(rem)
            coords.append(tuple(c))
        self._coords = tuple(coords)
        self._add = None
        self._neg = None

    # -- basic arithmetic ------------------------------------------------

    @property
    def identity(self) -> int:
        return 0

    def elements(self) -> range:
        return range(self.order)

    def coords(self, x: int):
        return self._coords[x]

    def index(self, coords) -> int:
        return sum(c % r * w for c, r, w in
                   zip(coords, self.radices, self._index_weights))

    def _tables(self):
        if self._add is None:
            n = self.order
            coords = self._coords
            radices = self.radices
            add = []
            for a in range(n):
                ca = coords[a]
                row = [self.index([x + y for x, y in zip(ca, coords[b])])
                       for b in range(n)]
                add.append(tuple(row))
            self._add = tuple(add)
            self._neg = tuple(self.index([-c for c in coords[a]])
                              for a in range(n))
        return self._add, self._neg

    def add(self, a: int, b: int) -> int:
        return self._tables()[0][a][b]

    def neg(self, a: int) -> int:
        return self._tables()[1][a]

    def sub(self, a: int, b: int) -> int:
        add, neg = self._tables()
        return add[a][neg[b]]

    def scale(self, m: int, a: int) -> int:
        """The m-th power of a in multiplicative notation."""
        return self.index([m * c for c in self._coords[a]])

    def add_table(self):
        return self._tables()[0]

    def neg_table(self):
        return self._tables()[1]

    def translation(self, g: int):
        """Right translation x -> x + g as an image tuple."""
        add = self._tables()[0]
        return tuple(add[x][g] for x in range(self.order))

    # -- coordinate structure ---------------------------------------------

    def prime_blocks(self):
        """(prime, rank, first coordinate position) per factor."""
        pos = 0
        out = []
        for p, n in self.factors:
            out.append((p, n, pos))
            pos += n
        return out

    def basis(self):
        """Indices of the coordinate unit vectors, in coordinate order."""
        return [self._index_weights[i] for i in range(len(self.radices))]

    def block_coords(self, x: int, block: int):
        p, n, pos = self.prime_blocks()[block]
        return self._coords[x][pos:pos + n]

    def element_from_blocks(self, blocks) -> int:
        coords = []
        for vec in blocks:
            coords.extend(vec)
        return self.index(coords)

    def multipliers(self):
        """Residues coprime to the exponent, one per power map."""
        return [m for m in range(1, self.exponent) if
                all(m % p for p, _ in self.factors)]

    # -- identity/comparison ----------------------------------------------

    def __eq__(self, other):
        return isinstance(other, GroupSpec) and self.factors == other.factors

    def __hash__(self):
        return hash(self.factors)

    def __repr__(self):
        return f"GroupSpec({format_group(self)!r})"


def make_group(factors, max_order=DEFAULT_MAX_ORDER) -> GroupSpec:
    if not factors:
        raise GroupSpecError("at least one factor required")
    return GroupSpec(factors, max_order=max_order)


def parse_group(text: str, max_order=DEFAULT_MAX_ORDER) -> GroupSpec:
    """Parse a spec string like "3^3" or "2^2x3" (no whitespace)."""
    if not text or text != text.strip() or " " in text:
        raise GroupSpecError(f"bad group string {text!r}")
    factors = []
    for token in text.split("x"):
        if "^" in token:
            base, _, exp = token.partition("^")
        else:
            base, exp = token, "1"
        if not base.isdigit() or not exp.isdigit():
            raise GroupSpecError(f"bad group string {text!r}")
        factors.append((int(base), int(exp)))
    return make_group(factors, max_order=max_order)


def format_group(spec: GroupSpec) -> str:
    parts = []
    for p, n in spec.factors:
        parts.append(f"{p}^{n}" if n > 1 else f"{p}")
    return "x".join(parts) if parts else "1"


# -- linear algebra over a prime field -------------------------------------


def rref(rows, p):
    """Reduced row echelon form over F_p; returns a canonical row tuple."""
    mat = [list(r) for r in rows]
    if not mat:
        return ()
    ncols = len(mat[0])
    pivot_row = 0
    for col in range(ncols):
        pivot = next((r for r in range(pivot_row, len(mat)) if mat[r][col] % p), None)
        if pivot is None:
            continue
        mat[pivot_row], mat[pivot] = mat[pivot], mat[pivot_row]
        inv = pow(mat[pivot_row][col], -1, p)
        mat[pivot_row] = [v * inv % p for v in mat[pivot_row]]
        for r in range(len(mat)):
            if r != pivot_row and mat[r][col] % p:
                f = mat[r][col]
                mat[r] = [(a - f * b) % p for a, b in zip(mat[r], mat[pivot_row])]
        pivot_row += 1
        if pivot_row == len(mat):
            break
    return tuple(tuple(r) for r in mat[:pivot_row] if any(r))


def span_vectors(rows, p, ncols):
    """All F_p combinations of the given rows."""
    out = []
    for coeffs in itertools.product(range(p), repeat=len(rows)):
        vec = [0] * ncols
        for c, row in zip(coeffs, rows):
            if c:
                for i, v in enumerate(row):
                    vec[i] = (vec[i] + c * v) % p
        out.append(tuple(vec))
    return sorted(set(out))


def solve_in_basis(rows, vec, p):
    """Coefficients expressing vec in the given independent rows, or None."""
    if not rows:
        return () if not any(vec) else None
    n = len(rows[0])
    aug = [list(r) + [0] * len(rows) for r in rows]
    for i in range(len(rows)):
        aug[i][n + i] = 1
    # Row reduce [rows | I]; then read off combination for vec.
    mat = [row[:] for row in aug]
    pivots = []
    pivot_row = 0
    for col in range(n):
        pivot = next((r for r in range(pivot_row, len(mat)) if mat[r][col] % p), None)
        if pivot is None:
            continue
        mat[pivot_row], mat[pivot] = mat[pivot], mat[pivot_row]
        inv = pow(mat[pivot_row][col], -1, p)
        mat[pivot_row] = [v * inv % p for v in mat[pivot_row]]
        for r in range(len(mat)):
            if r != pivot_row and mat[r][col] % p:
                f = mat[r][col]
                mat[r] = [(a - f * b) % p for a, b in zip(mat[r], mat[pivot_row])]
        pivots.append(col)
        pivot_row += 1
    residual = list(vec)
    coeffs = [0] * len(rows)
    for row_i, col in enumerate(pivots):
        f = residual[col] % p
        if f:
            for i in range(n):
                residual[i] = (residual[i] - f * mat[row_i][i]) % p
            for i in range(len(rows)):
                coeffs[i] = (coeffs[i] + f * mat[row_i][n + i]) % p
    if any(v % p for v in residual):
        return None
    return tuple(coeffs)


def invertible_matrices(p, n):
    """All invertible n x n matrices over F_p, rows independent, sorted."""
    vectors = list(itertools.product(range(p), repeat=n))
    out = []

    def grow(rows, span):
        if len(rows) == n:
            out.append(tuple(rows))
            return
        for v in vectors:
            if v not in span:
                new_span = set()
                for s in span:
                    for c in range(p):
                        new_span.add(tuple((a + c * b) % p for a, b in zip(s, v)))
                grow(rows + [v], new_span)

    grow([], {tuple([0] * n)})
    return out


# -- subgroups --------------------------------------------------------------


class Subgroup:
    """Subgroup in canonical form: one reduced echelon basis per prime."""

    __slots__ = ("spec", "bases", "order", "elements", "mask")

    def __init__(self, spec: GroupSpec, bases):
        self.spec = spec
        self.bases = tuple(rref(b, p) for (p, n), b in zip(spec.factors, bases))
        order = 1
        for (p, _n), basis in zip(spec.factors, self.bases):
            order *= p ** len(basis)
        self.order = order
        blocks = [span_vectors(basis, p, n)
                  for (p, n), basis in zip(spec.factors, self.bases)]
        els = []
        for combo in itertools.product(*blocks) if blocks else [()]:
            els.append(spec.element_from_blocks(combo))
        self.elements = frozenset(els)
        mask = 0
        for e in els:
            mask |= 1 << e
        self.mask = mask

    @classmethod
    def span(cls, spec: GroupSpec, gens) -> "Subgroup":
        blocks = spec.prime_blocks()
        bases = []
        for bi, (p, n, pos) in enumerate(blocks):
            rows = [spec.coords(g)[pos:pos + n] for g in gens]
            bases.append(rref(rows, p))
        return cls(spec, bases)

    @classmethod
    def from_elements(cls, spec: GroupSpec, elements) -> "Subgroup":
        sub = cls.span(spec, list(elements))
        if sub.elements != frozenset(elements):
            raise ValueError("element set is not a subgroup")
        return sub

    def contains(self, x: int) -> bool:
        return bool(self.mask >> x & 1)

    def contains_subgroup(self, other: "Subgroup") -> bool:
        return other.mask & ~self.mask == 0

    def meet(self, other: "Subgroup") -> "Subgroup":
        return Subgroup.from_elements(self.spec, self.elements & other.elements)

    def join(self, other: "Subgroup") -> "Subgroup":
        return Subgroup.span(self.spec, sorted(self.elements | other.elements))

    def sort_key(self):
        return (self.order, tuple(sorted(self.elements)))

    def __eq__(self, other):
        return (isinstance(other, Subgroup) and self.spec == other.spec
                and self.bases == other.bases)

    def __hash__(self):
        return hash((self.spec.factors, self.bases))

    def __repr__(self):
        gens = [list(row) for basis in self.bases for row in basis]
        return f"Subgroup(order={self.order}, basis={gens})"


def trivial_subgroup(spec: GroupSpec) -> Subgroup:
    return Subgroup(spec, [() for _ in spec.factors])


def full_subgroup(spec: GroupSpec) -> Subgroup:
    bases = []
    for p, n in spec.factors:
        bases.append(tuple(tuple(1 if j == i else 0 for j in range(n))
                           for i in range(n)))
    return Subgroup(spec, bases)


def subgroup_span(spec: GroupSpec, gens) -> Subgroup:
    return Subgroup.span(spec, list(gens))


def enumerate_subspaces(p, n):
    """All subspaces of F_p^n as canonical echelon bases."""
    out = [()]
    vectors = list(itertools.product(range(p), repeat=n))
    for k in range(1, n + 1):
        for pivots in itertools.combinations(range(n), k):
            free_positions = []
            for row_i, pc in enumerate(pivots):
                for col in range(pc + 1, n):
                    if col not in pivots:
                        free_positions.append((row_i, col))
            for values in itertools.product(range(p), repeat=len(free_positions)):
                rows = [[0] * n for _ in range(k)]
                for row_i, pc in enumerate(pivots):
                    rows[row_i][pc] = 1
                for (row_i, col), v in zip(free_positions, values):
                    rows[row_i][col] = v
                out.append(tuple(tuple(r) for r in rows))
    del vectors
    return out


def enumerate_subgroups(spec: GroupSpec) -> list:
    """All subgroups, sorted by (order, element list)."""
    per_prime = [enumerate_subspaces(p, n) for p, n in spec.factors]
    subs = [Subgroup(spec, combo) for combo in itertools.product(*per_prime)]
    subs.sort(key=Subgroup.sort_key)
    return subs


def complement(U: Subgroup, spec: GroupSpec) -> Subgroup:
    """Deterministic direct complement: extend U's echelon basis by unit
    vectors and take the added ones."""
    bases = []
    for (p, n), basis in zip(spec.factors, U.bases):
        rows = [list(r) for r in basis]
        added = []
        for i in range(n):
            unit = [1 if j == i else 0 for j in range(n)]
            if solve_in_basis([tuple(r) for r in rows], unit, p) is None:
                rows.append(unit)
                added.append(tuple(unit))
        bases.append(tuple(added))
    return Subgroup(spec, bases)


# -- sections ---------------------------------------------------------------


class Section:
    """A pair of nested subgroups L <= U with the quotient U/L realised as
    its own GroupSpec, a projection from U, and canonical coset lifts."""

    __slots__ = ("spec", "U", "L", "quotient", "proj", "lift")

    def __init__(self, U: Subgroup, L: Subgroup):
        if U.spec != L.spec:
            raise GroupSpecError("subgroups of different groups")
        if not U.contains_subgroup(L):
            raise GroupSpecError("L is not contained in U")
        spec = U.spec
        self.spec = spec
        self.U = U
        self.L = L
        factors = []
        complements = []
        for (p, n), ubasis, lbasis in zip(spec.factors, U.bases, L.bases):
            w_rows = []
            current = [list(r) for r in lbasis]
            for row in ubasis:
                if solve_in_basis([tuple(r) for r in current], row, p) is None:
                    current.append(list(row))
                    w_rows.append(row)
            complements.append((p, tuple(lbasis), tuple(w_rows)))
            if w_rows:
                factors.append((p, len(w_rows)))
        self.quotient = GroupSpec(factors, max_order=None)
        proj = [-1] * spec.order
        blocks = spec.prime_blocks()
        for u in sorted(U.elements):
            digits = []
            for (p, n, pos), (_p, lbasis, wbasis) in zip(blocks, complements):
                vec = spec.coords(u)[pos:pos + n]
                coeffs = solve_in_basis(list(lbasis) + list(wbasis), vec, p)
                digits.extend(coeffs[len(lbasis):])
            proj[u] = self.quotient.index(digits)
        self.proj = tuple(proj)
        lift = [-1] * self.quotient.order
        for u in sorted(U.elements):
            q = proj[u]
            if lift[q] == -1:
                lift[q] = u
        self.lift = tuple(lift)

    def project(self, u: int) -> int:
        q = self.proj[u]
        if q < 0:
            raise ValueError(f"element {u} is outside the section's top group")
        return q

    def __eq__(self, other):
        return (isinstance(other, Section) and self.U == other.U
                and self.L == other.L)

    def __hash__(self):
        return hash((self.U, self.L))

    def __repr__(self):
        return f"Section(|U|={self.U.order}, |L|={self.L.order})"


def section_quotient(section: Section):
    """The quotient spec and total projection map of a section."""
    return section.quotient, section.proj


# -- automorphisms -----------------------------------------------------------


class GroupAut:
    """Group automorphism as one invertible matrix per prime block.

    Acts on the right: the image of x is (row vector of x) * M per block.
    Composition a.compose(b) applies a first, then b.
    """

    __slots__ = ("spec", "mats", "_perm")

    def __init__(self, spec: GroupSpec, mats):
        self.spec = spec
        self.mats = tuple(tuple(tuple(v % p for v in row) for row in m)
                          for (p, _), m in zip(spec.factors, mats))
        self._perm = None

    @classmethod
    def identity(cls, spec: GroupSpec) -> "GroupAut":
        mats = []
        for p, n in spec.factors:
            mats.append(tuple(tuple(1 if i == j else 0 for j in range(n))
                              for i in range(n)))
        return cls(spec, mats)

    @classmethod
    def from_images(cls, spec: GroupSpec, pairs) -> "GroupAut":
        """Automorphism sending src -> dst for (src, dst) pairs whose
        sources form a basis of the group."""
        blocks = spec.prime_blocks()
        mats = []
        for p, n, pos in blocks:
            srcs, dsts = [], []
            for s, d in pairs:
                vec = spec.coords(s)[pos:pos + n]
                if any(vec):
                    srcs.append(vec)
                    dsts.append(spec.coords(d)[pos:pos + n])
            if rref(srcs, p) != rref([tuple(1 if j == i else 0 for j in range(n))
                                      for i in range(n)], p):
                raise GroupSpecError("sources do not span the prime block")
            # Solve M from srcs*M = dsts, row by row of the inverse basis.
            mat_rows = []
            for i in range(n):
                unit = tuple(1 if j == i else 0 for j in range(n))
                coeffs = solve_in_basis(srcs, unit, p)
                img = [0] * n
                for c, d in zip(coeffs, dsts):
                    for j in range(n):
                        img[j] = (img[j] + c * d[j]) % p
                mat_rows.append(tuple(img))
            mats.append(tuple(mat_rows))
        aut = cls(spec, mats)
        if not aut.is_invertible():
            raise GroupSpecError("images do not define an automorphism")
        return aut

    def is_invertible(self) -> bool:
        for (p, n), m in zip(self.spec.factors, self.mats):
            if len(rref(m, p)) != n:
                return False
        return True

    def apply(self, x: int) -> int:
        return self.perm[x]

    @property
    def perm(self):
        if self._perm is None:
            spec = self.spec
            blocks = spec.prime_blocks()
            images = []
            for x in range(spec.order):
                coords = spec.coords(x)
                out = []
                for (p, n, pos), m in zip(blocks, self.mats):
                    vec = coords[pos:pos + n]
                    img = [0] * n
                    for i, c in enumerate(vec):
                        if c:
                            row = m[i]
                            for j in range(n):
                                img[j] = (img[j] + c * row[j]) % p
                    out.extend(img)
                images.append(spec.index(out))
            self._perm = tuple(images)
        return self._perm

    def compose(self, other: "GroupAut") -> "GroupAut":
        """Apply self first, then other."""
        mats = []
        for (p, n), a, b in zip(self.spec.factors, self.mats, other.mats):
            rows = []
            for i in range(n):
                row = [0] * n
                for k in range(n):
                    if a[i][k]:
                        for j in range(n):
                            row[j] = (row[j] + a[i][k] * b[k][j]) % p
                rows.append(tuple(row))
            mats.append(tuple(rows))
        return GroupAut(self.spec, mats)

    def inverse(self) -> "GroupAut":
        mats = []
        for (p, n), m in zip(self.spec.factors, self.mats):
            aug = [list(m[i]) + [1 if j == i else 0 for j in range(n)]
                   for i in range(n)]
            red = rref(aug, p)
            mats.append(tuple(tuple(row[n:]) for row in red))
        return GroupAut(self.spec, mats)

    def sort_key(self):
        return self.mats

    def __eq__(self, other):
        return (isinstance(other, GroupAut) and self.spec == other.spec
                and self.mats == other.mats)

    def __hash__(self):
        return hash((self.spec.factors, self.mats))

    def __repr__(self):
        return f"GroupAut({[list(map(list, m)) for m in self.mats]})"


def _primitive_root(p: int) -> int:
    for g in range(2, p):
        seen = set()
        x = 1
        for _ in range(p - 1):
            x = x * g % p
            seen.add(x)
        if len(seen) == p - 1:
            return g
    return 1


def aut_generators(spec: GroupSpec) -> list:
    """Generators of Aut(G): standard GL generators per prime block."""
    gens = []
    ident = GroupAut.identity(spec)
    for bi, (p, n) in enumerate(spec.factors):
        block_mats = []
        if n >= 2:
            t = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
            t[0][1] = 1
            block_mats.append(t)
            cyc = [[1 if j == (i + 1) % n else 0 for j in range(n)]
                   for i in range(n)]
            block_mats.append(cyc)
        if p > 2:
            d = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
            d[0][0] = _primitive_root(p)
            block_mats.append(d)
        for m in block_mats:
            mats = list(ident.mats)
            mats[bi] = tuple(tuple(row) for row in m)
            gens.append(GroupAut(spec, mats))
    return gens


def aut_order(spec: GroupSpec) -> int:
    total = 1
    for p, n in spec.factors:
        for j in range(n):
            total *= p**n - p**j
    return total


_all_auts_cache: dict = {}


def all_auts(spec: GroupSpec, limit: int | None = None) -> list:
    """Every automorphism, sorted by matrix entries.  Guarded by limit."""
    expected = aut_order(spec)
    if limit is not None and expected > limit:
        raise ResourceBoundExceeded("automorphism enumeration", limit, expected)
    cached = _all_auts_cache.get(spec.factors)
    if cached is None:
        per_prime = [invertible_matrices(p, n) for p, n in spec.factors]
        cached = [GroupAut(spec, combo)
                  for combo in itertools.product(*per_prime)]
        cached.sort(key=GroupAut.sort_key)
        assert len(cached) == expected
        _all_auts_cache[spec.factors] = cached
    return cached


def aut_group(spec: GroupSpec):
    """Aut(G) as a permutation group on element indices."""
    from .permgrp import PermGroup

    gens = [a.perm for a in aut_generators(spec)]
    group = PermGroup(spec.order, gens)
    expected = aut_order(spec)
    if group.order() != expected:
        raise AssertionError(
            f"automorphism generators span order {group.order()}, "
            f"expected {expected}")
    return group
