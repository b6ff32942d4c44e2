"""Sparse exact linear algebra over Q.

Vectors are dicts {index: Fraction}. A linear map is a list of images,
one sparse vector per source basis element.
"""

from __future__ import annotations

from fractions import Fraction


def _size(c: Fraction) -> int:
    return c.numerator.bit_length() + c.denominator.bit_length()


def add_scaled(target: dict, vec: dict, c) -> None:
    """target += c * vec, in place, dropping zeros."""
    for k, v in vec.items():
        x = target.get(k, 0) + c * v
        if x:
            target[k] = x
        else:
            target.pop(k, None)


class Echelon:
    """Incrementally built echelon basis of a subspace.

    Each stored row has a pivot column; row i vanishes on the pivot
    columns of all rows added before it. The pivot of a new row is its
    entry of smallest bit size (ties broken by column), so the result is
    deterministic for a fixed insertion order.
    """

    def __init__(self, pivot="size"):
        # pivot: "size" (smallest entry), "first" or "last" (column order)
        self.pivot = pivot
        self.rows = []
        self.pivots = []
        self.pivot_set = {}

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec: dict) -> dict:
        row = {k: Fraction(v) for k, v in vec.items() if v}
        for r, p in zip(self.rows, self.pivots):
            c = row.get(p)
            if c:
                add_scaled(row, r, -c)
        return row

    def add(self, vec: dict) -> bool:
        row = self.reduce(vec)
        if not row:
            return False
        if self.pivot == "first":
            p = min(row)
        elif self.pivot == "last":
            p = max(row)
        else:
            p = min(row, key=lambda k: (_size(row[k]), k))
        c = row[p]
        if c != 1:
            row = {k: v / c for k, v in row.items()}
        self.pivot_set[p] = len(self.rows)
        self.rows.append(row)
        self.pivots.append(p)
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def reduced_rows(self):
        """Fully reduced basis: each row is zero on every other pivot."""
        rows = [dict(r) for r in self.rows]
        for i in range(len(rows) - 1, -1, -1):
            p = self.pivots[i]
            for j in range(i):
                c = rows[j].get(p)
                if c:
                    add_scaled(rows[j], rows[i], -c)
        return list(zip(self.pivots, rows))


def rank(vectors) -> int:
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    return len(ech)


def normalize(vec: dict) -> dict:
    """Scale so the entry at the smallest index is 1."""
    if not vec:
        return vec
    first = vec[min(vec)]
    return {k: v / first for k, v in vec.items()}


def transpose(images, ntarget=None):
    rows = {}
    for j, img in enumerate(images):
        for t, c in img.items():
            rows.setdefault(t, {})[j] = c
    return [rows[t] for t in sorted(rows)]


def nullspace(rows, ncols: int):
    """Basis of {x : row . x = 0 for all rows}, each normalized."""
    ech = Echelon()
    for r in rows:
        ech.add(r)
    reduced = ech.reduced_rows()
    pivot_cols = {p for p, _ in reduced}
    basis = []
    for f in range(ncols):
        if f in pivot_cols:
            continue
        x = {f: Fraction(1)}
        for p, r in reduced:
            c = r.get(f)
            if c:
                x[p] = -c
        basis.append(normalize(x))
    return basis


def kernel(images, ndomain: int):
    """Kernel of the map j -> images[j]."""
    return nullspace(transpose(images), ndomain)


def map_rank(images) -> int:
    return rank(images)


def homology(d_in, d_out, dim: int):
    """Homology at a space of dimension dim.

    d_in: images (in this space) of the incoming basis; d_out: images of
    this space's basis under the outgoing map. Returns (betti, reps),
    reps being cycles whose classes form a basis.
    """
    cycles = kernel(d_out, dim) if d_out is not None else [
        {i: Fraction(1)} for i in range(dim)]
    bnd = Echelon()
    for v in d_in or []:
        bnd.add(v)
    reps = []
    for z in cycles:
        if bnd.add(z):
            reps.append(z)
    return len(reps), reps


def compose(f_images, g_images):
    """Images of g o f, given images of f and of g."""
    out = []
    for img in f_images:
        acc = {}
        for k, c in img.items():
            add_scaled(acc, g_images[k], c)
        out.append(acc)
    return out
