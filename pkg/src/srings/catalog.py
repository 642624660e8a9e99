"""Exhaustive enumeration of Schur rings up to Cayley isomorphism,
canonical forms, the rank-3 classification, and catalog persistence."""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass

from .config import DEFAULT_BOUNDS
from .errors import (CatalogFormatError, ClassificationMismatch,
                     ResourceBoundExceeded)
from .groups import (GroupAut, GroupSpec, Section, enumerate_subgroups,
                     format_group, full_subgroup, make_group, parse_group,
                     subgroup_span)
from .sring import SRing, SubgroupChart, validate_partition
from .construct import (cyclotomic, decompositions, group_ring,
                        recognize_construction, wreath, tensor)

CATALOG_FORMAT = "srings-catalog"
CATALOG_VERSION = 1


# -- canonical form -----------------------------------------------------------


def canonical_form(a: SRing) -> bytes:
    if a._canonical is None:
        a._canonical = canonical_partition(a.spec, a.cells)[0]
    return a._canonical


def canonical_partition(spec: GroupSpec, cells):
    """Lexicographically least cell labeling over the Aut(G) orbit.

    The labeling of a partition image reads elements in index order and
    numbers cells by first occurrence.  Branch and bound over the images
    of the coordinate basis vectors under the inverse automorphism: fixing
    the first j basis images determines the labeling on the index prefix
    below the j-th mixed-radix weight, which prunes against the best known
    labeling.
    """
    n = spec.order
    cell_of = [0] * n
    cells = sorted((frozenset(c) for c in cells), key=lambda c: (len(c), min(c)))
    for i, c in enumerate(cells):
        for x in c:
            cell_of[x] = i
    ncoords = len(spec.radices)
    add = spec.add_table()

    block_candidates = []
    for p, nn, pos in spec.prime_blocks():
        members = [v for v in range(1, n)
                   if all(c == 0 for i, c in enumerate(spec.coords(v))
                          if not pos <= i < pos + nn)]
        block_candidates.append(members)
    coord_block = []
    for bi, (p, nn, pos) in enumerate(spec.prime_blocks()):
        coord_block.extend([bi] * nn)

    weights = [1]
    for r in spec.radices:
        weights.append(weights[-1] * r)

    def labeling_of_identity():
        remap = {}
        out = []
        for x in range(n):
            c = cell_of[x]
            if c not in remap:
                remap[c] = len(remap)
            out.append(remap[c])
        return out

    best = labeling_of_identity()
    best_images = list(range(n))

    img = [0] * n
    labels = [0] * n
    remap: dict = {0: 0}
    labels[0] = 0

    def rec(ci, used_mask, remap, strictly_better):
        nonlocal best, best_images
        if ci == ncoords:
            if strictly_better:
                best = labels[:]
                best_images = img[:]
            return
        lo, hi = weights[ci], weights[ci + 1]
        w = weights[ci]
        for v in block_candidates[coord_block[ci]]:
            if used_mask >> v & 1:
                continue
            new_used = used_mask
            new_remap = dict(remap)
            better = strictly_better
            ok = True
            for x in range(lo, hi):
                prev = img[x - w]
                y = add[prev][v]
                if new_used >> y & 1:
                    ok = False
                    break
                new_used |= 1 << y
                img[x] = y
                c = cell_of[y]
                lab = new_remap.get(c)
                if lab is None:
                    lab = len(new_remap)
                    new_remap[c] = lab
                labels[x] = lab
                if not better:
                    if lab > best[x]:
                        ok = False
                        break
                    if lab < best[x]:
                        better = True
            if ok:
                rec(ci + 1, new_used, new_remap, better)
        return

    rec(0, 1, remap, False)
    canonical_cells = {}
    for x, lab in enumerate(best):
        canonical_cells.setdefault(lab, set()).add(x)
    cells_out = tuple(frozenset(canonical_cells[i])
                      for i in range(len(canonical_cells)))
    return bytes(best), cells_out


# -- enumeration ---------------------------------------------------------------


def _p_power_sizes(p, limit):
    out = []
    s = 1
    while s <= limit:
        out.append(s)
        s *= p
    return out


class _Enumerator:
    """Depth-first merge search over cell partitions.

    Cells are fixed in increasing order of their least element.  Pruning:
    counts of already-fixed pairs must be constant on every fixed cell and
    induce equal signatures inside any future cell; coprime power maps must
    send fixed cells onto cells, which forces future cells; in p-power
    mode a cell of size |G|/p must be a coset of an index-p subgroup.
    """

    def __init__(self, spec, p_filter, bounds, resume_root=0, on_root=None,
                 on_leaf=None):
        self.spec = spec
        self.n = spec.order
        self.add = spec.add_table()
        self.p_filter = p_filter
        self.bounds = bounds
        self.nodes = 0
        self.leaves = []
        self.resume_root = resume_root
        self.on_root = on_root
        self.on_leaf = on_leaf
        self.multipliers = [m for m in spec.multipliers() if m != 1]
        self.scale_rows = {m: tuple(spec.scale(m, x) for x in range(self.n))
                           for m in self.multipliers}
        if p_filter:
            p = spec.factors[0][0]
            self.prime = p
            self.sizes = _p_power_sizes(p, self.n - 1)
            self.index_p_cosets = self._index_p_cosets()
        else:
            self.prime = None
            self.sizes = None
            self.index_p_cosets = None
        self.fixed: list = []
        self.cell_of_fixed: dict = {}
        self.sig = [[] for _ in range(self.n)]
        self.forced: dict = {}
        self._root_counter = 0

    def _index_p_cosets(self):
        p = self.prime
        cosets = set()
        for H in enumerate_subgroups(self.spec):
            if H.order * p == self.n:
                for rep in range(self.n):
                    if not H.contains(rep):
                        cosets.add(frozenset(self.add[rep][h]
                                             for h in H.elements))
        return cosets

    def run(self):
        ident = self.spec.identity
        self._fix_cell((ident,), check=False)
        unassigned = frozenset(range(1, self.n))
        self._recurse(unassigned, depth=0)
        return self.leaves

    def _spend(self):
        self.nodes += 1
        if self.nodes > self.bounds.enum_node_budget:
            raise ResourceBoundExceeded("enumeration nodes",
                                        self.bounds.enum_node_budget)

    def _recurse(self, unassigned, depth):
        if not unassigned:
            partition = tuple(cell for cell, _ in self.fixed)
            self.leaves.append(partition)
            if self.on_leaf:
                self.on_leaf(partition)
            return
        x = min(unassigned)
        forced_cell = self.forced.get(x)
        if forced_cell is not None:
            candidates = [tuple(sorted(forced_cell))]
        else:
            candidates = self._candidates(x, unassigned)
        at_root = depth == 0
        for count, cand in enumerate(candidates):
            if at_root:
                self._root_counter = count
                if count < self.resume_root:
                    continue
            self._spend()
            journal = self._try_fix(cand, unassigned)
            if journal is None:
                continue
            self._recurse(unassigned - frozenset(cand), depth + 1)
            self._unfix(journal)
            if at_root and self.on_root:
                self.on_root(count)

    def _candidates(self, x, unassigned):
        sig_x = tuple(self.sig[x])
        pool = sorted(y for y in unassigned
                      if y != x and y not in self.forced
                      and tuple(self.sig[y]) == sig_x)
        limit = len(pool) + 1
        sizes = [s for s in (self.sizes or range(1, limit + 1)) if s <= limit]
        for s in sizes:
            if s == 1:
                yield (x,)
            elif self.p_filter and s == self.n // self.prime:
                for coset in sorted(self.index_p_cosets, key=sorted):
                    if x in coset and all(
                            y == x or (y in unassigned and y not in self.forced
                                       and tuple(self.sig[y]) == sig_x)
                            for y in coset):
                        yield tuple(sorted(coset))
            else:
                for combo in itertools.combinations(pool, s - 1):
                    yield (x,) + combo

    def _try_fix(self, cell, unassigned):
        journal = self._fix_cell(cell, check=True,
                                 unassigned=unassigned - frozenset(cell))
        return journal

    def _fix_cell(self, cell, check, unassigned=frozenset()):
        cell_set = frozenset(cell)
        k = len(self.fixed)
        journal = {"index": k, "forced": [], "sig_pairs": 0,
                    "unassigned": unassigned, "ok": True}
        self.fixed.append((cell_set, tuple(sorted(cell_set))))
        for y in cell_set:
            self.cell_of_fixed[y] = k
        if not check:
            return journal
        # power maps must carry the new cell onto a cell
        for m in self.multipliers:
            row = self.scale_rows[m]
            image = frozenset(row[y] for y in cell_set)
            if image == cell_set:
                continue
            hit = self.cell_of_fixed.get(min(image))
            if hit is not None:
                if self.fixed[hit][0] != image:
                    self._rollback(journal)
                    return None
                continue
            if not image <= unassigned:
                self._rollback(journal)
                return None
            conflict = False
            for y in image:
                prev = self.forced.get(y)
                if prev is None:
                    self.forced[y] = image
                    journal["forced"].append(y)
                elif prev != image:
                    conflict = True
                    break
            if conflict:
                self._rollback(journal)
                return None
        # forced cells must stay signature-uniform and intact
        if not self._counts_ok(k, unassigned, journal):
            self._rollback(journal)
            return None
        return journal

    def _counts_ok(self, k, unassigned, journal):
        add = self.add
        pairs = [(k, i) for i in range(k + 1)] + [(i, k) for i in range(k)]
        for (i, j) in pairs:
            X = self.fixed[i][1]
            Y = self.fixed[j][1]
            counts = [0] * self.n
            for xx in X:
                row = add[xx]
                for yy in Y:
                    counts[row[yy]] += 1
            for cell_set, cell_tuple in self.fixed:
                want = counts[cell_tuple[0]]
                for z in cell_tuple[1:]:
                    if counts[z] != want:
                        return False
            for z in unassigned:
                self.sig[z].append(counts[z])
            journal["sig_pairs"] += 1
        return True

    def _rollback(self, journal):
        journal["ok"] = False
        self._unfix(journal)

    def _unfix(self, journal):
        k = journal["index"]
        cell_set, _ = self.fixed.pop()
        assert k == len(self.fixed)
        for y in cell_set:
            del self.cell_of_fixed[y]
        for y in journal["forced"]:
            del self.forced[y]
        npairs = journal["sig_pairs"]
        if npairs:
            for z in journal["unassigned"]:
                del self.sig[z][-npairs:]


@dataclass
class Entry:
    cells: tuple
    canonical: bytes
    rank: int
    thin_radical_order: int
    decomposable: bool
    construction: str | None = None
    ci: dict | None = None
    raw_count: int = 0

    def ring(self, spec) -> SRing:
        return validate_partition(spec, self.cells)


@dataclass
class Catalog:
    spec: GroupSpec
    sring_filter: str
    entries: list
    raw_total: int = 0

    def rings(self):
        return [validate_partition(self.spec, e.cells) for e in self.entries]

    def __len__(self):
        return len(self.entries)


def enumerate_srings(spec: GroupSpec, sring_filter: str = "all",
                     bounds=DEFAULT_BOUNDS, label: bool = True,
                     progress=None, checkpoint=None,
                     checkpoint_interval: float = 60.0) -> Catalog:
    """All Schur rings over the group, one canonical representative per
    Cayley isomorphism class.

    sring_filter "p-srings" keeps only partitions with prime-power cell
    sizes (the group must be a p-group); "all" enumerates everything.
    checkpoint names a progress file: finished top-level branches are
    recorded there at most every checkpoint_interval seconds, and a fresh
    run resumes from it.
    """
    import os
    import time

    if sring_filter not in ("all", "p-srings"):
        raise ValueError(f"unknown filter {sring_filter!r}")
    p_filter = sring_filter == "p-srings"
    if p_filter and len(spec.factors) != 1:
        raise ValueError("p-power filter needs a p-group")
    cap = bounds.enum_p_order if p_filter else bounds.enum_all_order
    if spec.order > cap:
        raise ResourceBoundExceeded("enumeration order", cap, spec.order)

    classes: dict = {}
    raw_total = 0
    resume_root = 0
    if checkpoint and os.path.exists(checkpoint):
        with open(checkpoint, encoding="utf-8") as fh:
            data = json.load(fh)
        if data.get("group") == format_group(spec) \
                and data.get("filter") == sring_filter:
            resume_root = data["root_done"]
            raw_total = data["raw_total"]
            for item in data["classes"]:
                cells = tuple(frozenset(c) for c in item["cells"])
                classes[bytes.fromhex(item["form"])] = [cells, item["raw"]]

    def on_leaf(partition):
        nonlocal raw_total
        raw_total += 1
        key, cells = canonical_partition(spec, partition)
        if key in classes:
            classes[key][1] += 1
        else:
            classes[key] = [cells, 1]
        if progress and raw_total % 50 == 0:
            progress(raw_total, len(classes))

    last_write = time.monotonic()

    def on_root(index):
        nonlocal last_write
        if checkpoint is None:
            return
        now = time.monotonic()
        if now - last_write < checkpoint_interval:
            return
        last_write = now
        _write_checkpoint(checkpoint, spec, sring_filter, index + 1,
                          raw_total, classes)

    enum = _Enumerator(spec, p_filter, bounds, resume_root=resume_root,
                       on_root=on_root, on_leaf=on_leaf)
    enum.run()
    if checkpoint and os.path.exists(checkpoint):
        os.remove(checkpoint)

    entries = []
    for key in sorted(classes):
        cells, raw_count = classes[key]
        ring = validate_partition(spec, cells)
        construction = None
        if label:
            try:
                construction = recognize_construction(ring)
            except ResourceBoundExceeded:
                construction = None
        entries.append(Entry(
            cells=ring.cells,
            canonical=key,
            rank=ring.rank,
            thin_radical_order=ring.thin_radical().order,
            decomposable=bool(decompositions(ring)),
            construction=construction,
            raw_count=raw_count,
        ))
    return Catalog(spec, sring_filter, entries, raw_total)


def _write_checkpoint(path, spec, sring_filter, root_done, raw_total, classes):
    data = {
        "group": format_group(spec),
        "filter": sring_filter,
        "root_done": root_done,
        "raw_total": raw_total,
        "classes": [{"form": key.hex(),
                     "cells": [sorted(c) for c in cells],
                     "raw": raw}
                    for key, (cells, raw) in sorted(classes.items())],
    }
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(data, fh, sort_keys=True)
    import os

    os.replace(tmp, path)


# -- persistence ----------------------------------------------------------------


def _entry_record(entry: Entry) -> dict:
    rec = {
        "cells": [sorted(c) for c in entry.cells],
        "rank": entry.rank,
        "thin_radical_order": entry.thin_radical_order,
        "decomposable": entry.decomposable,
        "construction": entry.construction,
        "raw_count": entry.raw_count,
    }
    if entry.ci is not None:
        rec["ci"] = entry.ci
    return rec


def save_catalog(catalog: Catalog, path) -> None:
    lines = []
    for i, entry in enumerate(catalog.entries):
        rec = _entry_record(entry)
        rec["id"] = i
        lines.append(json.dumps(rec, sort_keys=True, separators=(",", ":")))
    digest = hashlib.sha256("\n".join(lines).encode()).hexdigest()
    header = json.dumps({
        "format": CATALOG_FORMAT,
        "version": CATALOG_VERSION,
        "group": format_group(catalog.spec),
        "filter": catalog.sring_filter,
        "count": len(catalog.entries),
        "raw_total": catalog.raw_total,
        "digest": digest,
    }, sort_keys=True, separators=(",", ":"))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(header + "\n")
        for line in lines:
            fh.write(line + "\n")


def load_catalog(path, max_order=None) -> Catalog:
    with open(path, encoding="utf-8") as fh:
        raw = fh.read().splitlines()
    if not raw:
        raise CatalogFormatError("empty catalog file")
    header = json.loads(raw[0])
    if header.get("format") != CATALOG_FORMAT:
        raise CatalogFormatError("not a catalog file")
    if header.get("version") != CATALOG_VERSION:
        raise CatalogFormatError(
            f"version {header.get('version')} unsupported "
            f"(expected {CATALOG_VERSION})")
    lines = raw[1:]
    digest = hashlib.sha256("\n".join(lines).encode()).hexdigest()
    if digest != header.get("digest"):
        raise CatalogFormatError("catalog digest mismatch")
    spec = parse_group(header["group"], max_order=max_order)
    entries = []
    for line in lines:
        rec = json.loads(line)
        # every entry re-validates on load
        ring = validate_partition(spec,
                                  [frozenset(c) for c in rec["cells"]])
        entries.append(Entry(
            cells=ring.cells,
            canonical=canonical_form(ring),
            rank=rec["rank"],
            thin_radical_order=rec["thin_radical_order"],
            decomposable=rec["decomposable"],
            construction=rec.get("construction"),
            ci=rec.get("ci"),
            raw_count=rec.get("raw_count", 0),
        ))
        if entries[-1].rank != ring.rank:
            raise CatalogFormatError("rank annotation mismatch")
    return Catalog(spec, header["filter"], entries, header.get("raw_total", 0))


# -- rank-3 classification -------------------------------------------------------


def rank3_templates(p: int):
    """The six standard p-power Schur rings over the rank-3 group, with
    construction labels, in classification order."""
    spec = make_group([(p, 3)], max_order=max(DEFAULT_BOUNDS.max_group_order,
                                              p ** 3))
    e1 = spec.basis()[0]
    e2 = spec.basis()[1]
    U = subgroup_span(spec, [e1, e2])
    L = subgroup_span(spec, [e1])
    full = full_subgroup(spec)

    def plain_wreath(top_sub, bottom_sub):
        chart = SubgroupChart(top_sub)
        glq = Section(full, bottom_sub)
        return wreath(group_ring(chart.spec), group_ring(glq.quotient),
                      Section(top_sub, bottom_sub))

    z_g = group_ring(spec)
    row2 = plain_wreath(U, U)
    row3 = plain_wreath(L, L)
    chart_u = SubgroupChart(U)
    inner = subgroup_span(chart_u.spec, [chart_u.spec.basis()[0]])
    top5 = wreath(group_ring(SubgroupChart(inner).spec),
                  group_ring(Section(full_subgroup(chart_u.spec),
                                     inner).quotient),
                  Section(inner, inner))
    glq = Section(full, L)
    uq = subgroup_span(glq.quotient, [glq.quotient.basis()[0]])
    quot5 = wreath(group_ring(SubgroupChart(uq).spec),
                   group_ring(Section(full_subgroup(glq.quotient),
                                      uq).quotient),
                   Section(uq, uq))
    row5 = wreath(top5, quot5, Section(U, L))
    spec2 = make_group([(p, 2)], max_order=None)
    u2 = subgroup_span(spec2, [spec2.basis()[0]])
    wr2 = wreath(group_ring(SubgroupChart(u2).spec),
                 group_ring(Section(full_subgroup(spec2), u2).quotient),
                 Section(u2, u2))
    row4 = tensor(wr2, group_ring(make_group([(p, 1)], max_order=None)))
    jordan = GroupAut(spec, [((1, 1, 0), (0, 1, 1), (0, 0, 1))])
    row6 = cyclotomic([jordan], spec)
    return spec, [
        ("ZG", z_g),
        ("wr(Z(p^2),Z(p))", row2),
        ("wr(Z(p),Z(p^2))", row3),
        ("tensor(wr(Z(p),Z(p)),Z(p))", row4),
        ("wr(wr(Z(p),Z(p)),wr(Z(p),Z(p)))", row5),
        ("cyc(unitriangular)", row6),
    ]


def rank3_classification(p: int, bounds=DEFAULT_BOUNDS, progress=None) -> dict:
    """Enumerate the p-power Schur rings over the rank-3 elementary abelian
    group and match each class against the six templates.

    Raises ClassificationMismatch when the classes differ from the
    templates in any way.
    """
    if p == 2 or p < 2:
        raise ValueError("the classification needs an odd prime")
    spec, templates = rank3_templates(p)
    from dataclasses import replace

    run_bounds = bounds
    if spec.order > bounds.enum_p_order:
        run_bounds = replace(bounds, enum_p_order=spec.order)
    catalog = enumerate_srings(spec, "p-srings", run_bounds,
                               label=(p == 3), progress=progress)
    template_forms = {}
    for idx, (name, ring) in enumerate(templates):
        template_forms[canonical_form(ring)] = (idx, name, ring)
    if len(template_forms) != len(templates):
        raise ClassificationMismatch("templates are not pairwise distinct")
    rows = [None] * len(templates)
    unmatched = []
    for entry in catalog.entries:
        hit = template_forms.get(entry.canonical)
        if hit is None:
            unmatched.append(entry)
            continue
        idx, name, _ring = hit
        rows[idx] = {
            "row": idx + 1,
            "template": name,
            "rank": entry.rank,
            "decomposable": entry.decomposable,
            "thin_radical_order": entry.thin_radical_order,
            "raw_count": entry.raw_count,
        }
    if unmatched:
        raise ClassificationMismatch(
            f"{len(unmatched)} classes match no template; first has cells "
            f"{[sorted(c) for c in unmatched[0].cells]}")
    if any(r is None for r in rows):
        missing = [i + 1 for i, r in enumerate(rows) if r is None]
        raise ClassificationMismatch(f"template rows {missing} not realized")
    expected_dec = (False, True, True, True, True, False)
    expected_thin = (p ** 3, p ** 2, p, p ** 2, p, p)
    for row, dec, thin in zip(rows, expected_dec, expected_thin):
        if row["decomposable"] != dec:
            raise ClassificationMismatch(
                f"row {row['row']}: decomposable flag {row['decomposable']}")
        if row["thin_radical_order"] != thin:
            raise ClassificationMismatch(
                f"row {row['row']}: thin radical {row['thin_radical_order']}")
    return {
        "prime": p,
        "classes": len(catalog.entries),
        "rows": rows,
        "raw_total": catalog.raw_total,
        "catalog": catalog,
    }
