"""Koszul dual coalgebras, Koszul complexes, cobar constructions and iota.

Algebra words are tuples of generator ids; the weight-zero idempotent at
a vertex v is the one-letter word ("@v",).
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .linalg import Echelon, homology, nullspace
from .presentations import CoalgebraPresentation, GradedSymbol, PresentationError, QuadraticPresentation


class TruncationError(ValueError):
    pass


def idempotent(v) -> tuple:
    return ("@" + v,)


def is_idempotent(word) -> bool:
    return len(word) == 1 and word[0].startswith("@")


def _clean(vec):
    return {k: v for k, v in vec.items() if v}


def suspension_sign(degrees) -> int:
    """Sign of s^{⊗m}(v1 ⊗ ... ⊗ vm) = ± s v1 ⊗ ... ⊗ s vm."""
    m = len(degrees)
    e = sum(d * (m - 1 - k) for k, d in enumerate(degrees))
    return -1 if e % 2 else 1


class QuadraticAlgebra:
    """T(V)/<R> truncated at max_weight, with a normal-word basis.

    The ideal in weight m is row reduced with pivots on the largest words;
    the remaining words form the basis.
    """

    def __init__(self, pres: QuadraticPresentation, max_weight: int):
        self.pres = pres
        self.max_weight = max_weight
        self.symbols = pres.symbols
        self.gen_order = {g.id: i for i, g in enumerate(pres.generators)}
        self._words = {}
        self._reducer = {}
        self._normal = {}
        _check_homogeneous(pres)

    def ends(self, word):
        if is_idempotent(word):
            v = word[0][1:]
            return v, v
        return self.symbols[word[0]].tail, self.symbols[word[-1]].head

    def degree(self, word) -> int:
        if is_idempotent(word):
            return 0
        return sum(self.symbols[x].degree for x in word)

    def weight(self, word) -> int:
        return 0 if is_idempotent(word) else len(word)

    def words(self, m):
        if m not in self._words:
            if m == 0:
                out = [idempotent(v) for v in self.pres.vertices]
            else:
                gens = [g.id for g in self.pres.generators]
                out = []
                for w in itertools.product(gens, repeat=m):
                    if all(self.symbols[x].head == self.symbols[y].tail for x, y in zip(w, w[1:])):
                        out.append(w)
            self._words[m] = out
        return self._words[m]

    def _ideal(self, m):
        if m in self._reducer:
            return self._reducer[m]
        if m > self.max_weight:
            raise TruncationError(f"weight {m} exceeds the truncation {self.max_weight}")
        index = {w: i for i, w in enumerate(self.words(m))}
        ech = Echelon(pivot="last")
        if m >= 2:
            for i in range(m - 1):
                for u in (self.words(i) if i else [()]):
                    for v in (self.words(m - 2 - i) if m - 2 - i else [()]):
                        for rel in self.pres.relations:
                            row = {}
                            for (x, y), c in rel.items():
                                w = u + (x, y) + v
                                if w in index:
                                    row[index[w]] = row.get(index[w], 0) + c
                            if any(row.values()):
                                ech.add(row)
        words = self.words(m)
        reducer = {words[p]: {words[k]: c for k, c in row.items() if k != p}
                   for p, row in ech.reduced_rows()}
        self._reducer[m] = reducer
        self._normal[m] = [w for w in words if w not in reducer]
        return reducer

    def basis(self, m):
        self._ideal(m)
        return self._normal[m]

    def dim(self, m) -> int:
        return len(self.basis(m))

    def reduce(self, vec: dict) -> dict:
        out = {}
        for w, c in vec.items():
            if not c:
                continue
            red = self._ideal(self.weight(w))
            if w in red:
                for k, d in red[w].items():
                    out[k] = out.get(k, 0) - c * d
            else:
                out[w] = out.get(w, 0) + c
        return _clean(out)

    def concat(self, w1, w2):
        """Concatenation of two words, or None if they do not compose."""
        if self.ends(w1)[1] != self.ends(w2)[0]:
            return None
        if is_idempotent(w1):
            return w2
        if is_idempotent(w2):
            return w1
        return w1 + w2

    def multiply(self, w1, w2) -> dict:
        w = self.concat(w1, w2)
        if w is None:
            return {}
        return self.reduce({w: Fraction(1)})

    def unit_words(self):
        return self.words(0)


def _check_homogeneous(pres):
    sym = pres.symbols
    for i, rel in enumerate(pres.relations):
        keys = {(sym[x].degree + sym[y].degree, sym[x].tail, sym[y].head) for (x, y) in rel}
        if len(keys) > 1:
            raise PresentationError(f"relation {i} is not homogeneous")


class KoszulDual(CoalgebraPresentation):
    """Coalgebra with basis vectors inside the tensor coalgebra on sV.

    vectors[id] is {word: coeff} in suspended coordinates; words are tuples
    of generator ids (the weight-zero elements have the empty word).
    """

    vectors: dict
    max_weight: int


def _unit_name(pres, v):
    return "1" if pres.vertices == ["*"] else f"1_{v}"


def koszul_dual(pres: QuadraticPresentation, max_weight: int) -> KoszulDual:
    """Weight-truncated Koszul dual coalgebra of a quadratic presentation."""
    if max_weight < 2:
        raise ValueError("max_weight must be at least 2")
    _check_homogeneous(pres)
    sym = pres.symbols
    gens = [g.id for g in pres.generators]
    alg = QuadraticAlgebra(pres, max_weight)

    # annihilator of R, block by block
    pair_blocks = {}
    for x in gens:
        for y in gens:
            if sym[x].head == sym[y].tail:
                key = (sym[x].degree + sym[y].degree, sym[x].tail, sym[y].head)
                pair_blocks.setdefault(key, []).append((x, y))
    annihilator = []
    for key, pairs in pair_blocks.items():
        index = {p: i for i, p in enumerate(pairs)}
        rows = [{index[p]: c for p, c in rel.items() if p in index} for rel in pres.relations]
        rows = [r for r in rows if r]
        for f in nullspace(rows, len(pairs)):
            annihilator.append({pairs[i]: c for i, c in f.items()})

    basis, vectors, weight_basis = [], {}, {}
    for v in pres.vertices:
        name = _unit_name(pres, v)
        basis.append(GradedSymbol(name, 0, 0, v, v))
        vectors[name] = {(): Fraction(1)}
        weight_basis.setdefault(0, []).append(name)
    for x in gens:
        name = "s" + x
        g = sym[x]
        basis.append(GradedSymbol(name, g.degree + 1, 1, g.tail, g.head))
        vectors[name] = {(x,): Fraction(1)}
        weight_basis.setdefault(1, []).append(name)

    for m in range(2, max_weight + 1):
        words = alg.words(m)
        blocks = {}
        for w in words:
            key = (alg.degree(w), *alg.ends(w))
            blocks.setdefault(key, []).append(w)
        count = 0
        for key in sorted(blocks, key=lambda k: (k[0], str(k[1]), str(k[2]))):
            bw = blocks[key]
            index = {w: i for i, w in enumerate(bw)}
            rows = []
            for i in range(m - 1):
                for u in (alg.words(i) if i else [()]):
                    for v in (alg.words(m - 2 - i) if m - 2 - i else [()]):
                        for f in annihilator:
                            row = {}
                            for (x, y), c in f.items():
                                w = u + (x, y) + v
                                if w in index:
                                    row[index[w]] = c
                            if row:
                                rows.append(row)
            kern = nullspace(rows, len(bw))
            ech = Echelon(pivot="first")
            for vec in kern:
                susp = {}
                for i, c in vec.items():
                    w = bw[i]
                    susp[i] = c * suspension_sign([sym[x].degree for x in w])
                ech.add(susp)
            for _, row in sorted(ech.reduced_rows()):
                name = f"w{m}.{count}"
                count += 1
                basis.append(GradedSymbol(name, key[0] + m, m, key[1], key[2]))
                vectors[name] = {bw[i]: c for i, c in row.items()}
                weight_basis.setdefault(m, []).append(name)

    pivots = {name: min(vec) for name, vec in vectors.items()}
    symbols = {b.id: b for b in basis}
    coproduct, counit = {}, {}
    for v in pres.vertices:
        u = _unit_name(pres, v)
        coproduct[u] = {(u, u): Fraction(1)}
        counit[u] = Fraction(1)
    for b in basis:
        if b.weight == 0:
            continue
        vec = vectors[b.id]
        m = b.weight
        delta = {(_unit_name(pres, b.tail), b.id): Fraction(1),
                 (b.id, _unit_name(pres, b.head)): Fraction(1)}
        for i in range(1, m):
            left = weight_basis.get(i, [])
            right = weight_basis.get(m - i, [])
            slice_ = {}
            for w, c in vec.items():
                slice_[(w[:i], w[i:])] = c
            rebuilt = {}
            for k in left:
                for l in right:
                    if symbols[k].head != symbols[l].tail:
                        continue
                    c = vec.get(pivots[k] + pivots[l])
                    if c:
                        delta[(k, l)] = c
                        for w1, a in vectors[k].items():
                            for w2, d in vectors[l].items():
                                rebuilt[(w1, w2)] = rebuilt.get((w1, w2), 0) + c * a * d
            if _clean(rebuilt) != _clean(slice_):
                raise ArithmeticError(f"deconcatenation of {b.id} leaves the computed subspace")
        coproduct[b.id] = delta
    out = KoszulDual(basis, coproduct, counit, None, None, "koszul dual")
    out.vectors = vectors
    out.max_weight = max_weight
    out.algebra = pres
    out.weight_basis = weight_basis
    return out.validate()


def dimension_table(coalg: CoalgebraPresentation) -> dict:
    """{(weight, degree): dimension}."""
    out = {}
    for b in coalg.basis:
        key = (b.weight, b.degree)
        out[key] = out.get(key, 0) + 1
    return out


# --- Koszul complex --------------------------------------------------------

def koszul_differential(x: dict, alg: QuadraticAlgebra, dual: KoszulDual) -> dict:
    """d(a ⊗ c) = sum over c' = s v of weight one of (-1)^{|a|} a v ⊗ c''.

    x is {(algebra word, dual basis id): coeff}.
    """
    out = {}
    for (a, c), coeff in x.items():
        if dual.weight(c) == 0:
            continue
        sign = -1 if alg.degree(a) % 2 else 1
        for (c1, c2), d in dual.coproduct[c].items():
            if dual.weight(c1) != 1:
                continue
            v = next(iter(dual.vectors[c1]))
            for w, e in alg.multiply(a, v).items():
                key = (w, c2)
                out[key] = out.get(key, 0) + sign * coeff * d * e
    return _clean(out)


def koszul_complex(alg: QuadraticAlgebra, dual: KoszulDual, weight: int):
    """Chain groups K_m = A_{weight-m} ⊗ dual_m and the differential images."""
    chains = {}
    for m in range(weight + 1):
        chains[m] = [(a, c) for c in dual.weight_basis.get(m, []) for a in alg.basis(weight - m)
                     if alg.ends(a)[1] == dual.symbols[c].tail]
    diffs = {}
    for m in range(1, weight + 1):
        index = {k: i for i, k in enumerate(chains[m - 1])}
        images = []
        for key in chains[m]:
            img = koszul_differential({key: Fraction(1)}, alg, dual)
            images.append({index[k]: c for k, c in img.items()})
        diffs[m] = images
    return chains, diffs


def koszul_acyclicity_check(pres: QuadraticPresentation, max_weight: int) -> dict:
    """Homology of the Koszul complex in weights 1..max_weight."""
    alg = QuadraticAlgebra(pres, max_weight)
    dual = koszul_dual(pres, max(max_weight, 2))
    table = {}
    square_zero = True
    for n in range(1, max_weight + 1):
        chains, diffs = koszul_complex(alg, dual, n)
        for m in range(2, n + 1):
            for img in diffs[m]:
                acc = {}
                for k, c in img.items():
                    for j, d in diffs[m - 1][k].items():
                        acc[j] = acc.get(j, 0) + c * d
                if _clean(acc):
                    square_zero = False
        dims = []
        for m in range(n + 1):
            betti, _ = homology(diffs.get(m + 1), diffs.get(m), len(chains[m]))
            dims.append(betti)
        table[n] = dims
    acyclic = all(not any(d) for d in table.values())
    return {"acyclic": acyclic and square_zero, "square_zero": square_zero,
            "homology": table,
            "nonzero": [(n, m, d) for n, ds in table.items() for m, d in enumerate(ds) if d]}


# --- cobar -----------------------------------------------------------------

class DGAlgebra:
    """Free graded algebra over the base ring with a differential on generators."""

    def __init__(self, generators: dict, differential: dict, weights=None, ends=None):
        self.generators = generators  # id -> degree
        self.differential = differential  # id -> {word: coeff}
        self.weights = weights or {g: 1 for g in generators}
        self.ends = ends or {g: ("*", "*") for g in generators}

    def apply(self, vec: dict) -> dict:
        """Extend the differential to words as a derivation."""
        out = {}
        for word, c in vec.items():
            before = 0
            for i, g in enumerate(word):
                sign = -1 if before % 2 else 1
                for w, d in self.differential.get(g, {}).items():
                    key = word[:i] + w + word[i + 1:]
                    out[key] = out.get(key, 0) + sign * c * d
                before += self.generators[g]
        return _clean(out)

    def square_zero_failures(self):
        return [g for g in self.generators if self.apply(self.differential.get(g, {}))]

    def words(self, weight):
        gens = sorted(self.generators)
        out = []

        def grow(prefix, w):
            if w == weight:
                out.append(prefix)
                return
            for g in gens:
                gw = self.weights[g]
                if w + gw > weight:
                    continue
                if prefix and self.ends[prefix[-1]][1] != self.ends[g][0]:
                    continue
                grow(prefix + (g,), w + gw)
        grow((), 0)
        return [w for w in out if w]

    def degree(self, word):
        return sum(self.generators[g] for g in word)

    def homology(self, weight) -> dict:
        """{degree: betti} in a fixed weight."""
        by_deg = {}
        for w in self.words(weight):
            by_deg.setdefault(self.degree(w), []).append(w)
        out = {}
        for d in sorted(by_deg):
            dim = len(by_deg[d])
            index_lo = {w: i for i, w in enumerate(by_deg.get(d - 1, []))}
            d_out = [{index_lo[k]: c for k, c in self.apply({w: Fraction(1)}).items()} for w in by_deg[d]]
            index_here = {w: i for i, w in enumerate(by_deg[d])}
            d_in = [{index_here[k]: c for k, c in self.apply({w: Fraction(1)}).items()}
                    for w in by_deg.get(d + 1, [])]
            out[d], _ = homology(d_in, d_out, dim)
        return out


def cobar(coalg: CoalgebraPresentation, weight_bound=None) -> DGAlgebra:
    """Cobar construction: generators s^{-1}x for x of positive weight.

    d(s^{-1} x) = - sum (-1)^{|x'|} s^{-1}x' s^{-1}x'' over the reduced
    coproduct. Generator ids are the basis ids themselves.
    """
    gens, diff, weights, ends = {}, {}, {}, {}
    for b in coalg.basis:
        if b.weight == 0 or (weight_bound is not None and b.weight > weight_bound):
            continue
        gens[b.id] = b.degree - 1
        weights[b.id] = b.weight
        ends[b.id] = (b.tail, b.head)
        d = {}
        for (x1, x2), c in coalg.reduced_coproduct(b.id).items():
            sign = 1 if coalg.degree(x1) % 2 else -1
            d[(x1, x2)] = d.get((x1, x2), 0) + sign * c
        diff[b.id] = _clean(d)
    return DGAlgebra(gens, diff, weights, ends)


def iota(coalg: CoalgebraPresentation, x: str, depth=None) -> dict:
    """c + Δ̄(c) + Δ̄²(c) + ... as {tuple of basis ids: coeff}."""
    depth = coalg.weight(x) if depth is None else depth
    if depth < coalg.weight(x) and coalg.weight(x) > 0:
        raise ValueError("depth must be at least the weight of x")
    total = {(x,): Fraction(1)}
    layer = dict(total)
    for _ in range(depth):
        nxt = {}
        for word, c in layer.items():
            # split every letter in turn would overcount; split the last one
            for (a, b), d in coalg.reduced_coproduct(word[-1]).items():
                key = word[:-1] + (a, b)
                nxt[key] = nxt.get(key, 0) + c * d
        layer = _clean(nxt)
        if not layer:
            break
        for k, c in layer.items():
            total[k] = total.get(k, 0) + c
    return _clean(total)
