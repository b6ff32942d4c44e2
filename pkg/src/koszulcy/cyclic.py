"""Mixed Hochschild complexes, Connes cyclic complexes and their homology.

A chain of CH(A) = A ⊗ B(A) is a tuple of algebra words (a0, a1, ..., an);
a chain of CH(C) = C ⊗ Ω(C) is a tuple of coalgebra basis ids. Linear
combinations are dicts {tuple: Fraction}. The mixed complexes are the
normalized models: bracket entries of weight zero are set to zero.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .koszul import QuadraticAlgebra, idempotent, is_idempotent
from .linalg import compose, homology as _homology
from .scalar import koszul_sign


def _clean(vec):
    return {k: v for k, v in vec.items() if v}


def _add(out, key, c):
    out[key] = out.get(key, 0) + c


def rotation_sign(degrees, k) -> int:
    """Sign of moving the first k items (in order) behind the rest."""
    n = len(degrees)
    k %= n if n else 1
    perm = [(i - k) % n for i in range(n)]
    return koszul_sign(perm, degrees)


def rotate(word, k):
    k %= len(word)
    return word[k:] + word[:k]


# --- algebra side ------------------------------------------------------------

def _products(alg, entries):
    """Expand a tuple whose entries are {word: coeff} into {tuple: coeff}."""
    out = {(): Fraction(1)}
    for e in entries:
        nxt = {}
        for pre, c in out.items():
            for w, d in e.items():
                _add(nxt, pre + (w,), c * d)
        out = nxt
    return out


def _single(w):
    return {w: Fraction(1)}


def _composes(alg, word) -> bool:
    """Consecutive entries and the wrap-around compose over the base ring."""
    for x, y in zip(word, word[1:] + word[:1]):
        if alg.ends(x)[1] != alg.ends(y)[0]:
            return False
    return True


def b_algebra(x: dict, alg: QuadraticAlgebra) -> dict:
    """Hochschild boundary on a0 ⊗ [a1, ..., an]."""
    out = {}
    for word, coeff in x.items():
        n = len(word) - 1
        if n == 0:
            continue
        deg = [alg.degree(a) for a in word]
        # a0 a1 ⊗ [a2, ...]
        s = -1 if deg[0] % 2 else 1
        for key, c in _products(alg, [alg.multiply(word[0], word[1])] + [_single(a) for a in word[2:]]).items():
            _add(out, key, s * coeff * c)
        for i in range(1, n):
            s = -1 if (sum(deg[:i + 1]) + i) % 2 else 1
            entries = [_single(a) for a in word[:i]] + [alg.multiply(word[i], word[i + 1])] + \
                [_single(a) for a in word[i + 2:]]
            for key, c in _products(alg, entries).items():
                _add(out, key, s * coeff * c)
        # wrap: move a_n to the front, then multiply a_n a_0
        s = -rotation_sign([deg[0]] + [d + 1 for d in deg[1:n]] + [deg[n] + 1], n)
        entries = [alg.multiply(word[n], word[0])] + [_single(a) for a in word[1:n]]
        for key, c in _products(alg, entries).items():
            _add(out, key, s * coeff * c)
    return _clean(out)


def B_algebra(x: dict, alg: QuadraticAlgebra) -> dict:
    """Connes operator on the normalized complex."""
    out = {}
    for word, coeff in x.items():
        if any(is_idempotent(a) for a in word):
            continue  # a unit would land in the bracket
        deg = [alg.degree(a) + 1 for a in word]
        for i in range(len(word)):
            s = rotation_sign(deg, i)
            rot = rotate(word, i)
            unit = idempotent(alg.ends(rot[0])[0])
            _add(out, (unit,) + rot, s * coeff)
    return _clean(out)


def algebra_degree(alg, word) -> int:
    return sum(alg.degree(a) for a in word) + len(word) - 1


def algebra_weight(alg, word) -> int:
    return sum(alg.weight(a) for a in word)


def cyclic_t_algebra(word, alg) -> tuple:
    """t(a0, ..., an) = ± (an, a0, ..., a_{n-1}); returns (sign, word)."""
    deg = [alg.degree(a) + 1 for a in word]
    n = len(word) - 1
    return rotation_sign(deg, n), rotate(word, n)


# --- coalgebra side -----------------------------------------------------------

def shifted(coalg, c) -> int:
    return coalg.degree(c) - 1


def b_coalgebra(x: dict, coalg, reduced=True) -> dict:
    """Boundary of C ⊗ Ω(C) on c0 ⊗ [c1, ..., cn].

    With reduced=True, outputs with a weight-zero letter in the bracket are
    dropped (normalized model).
    """
    out = {}
    deg = coalg.degree
    for word, coeff in x.items():
        c0, rest = word[0], word[1:]
        n = len(rest)
        for (p, q), c in coalg.coproduct.get(c0, {}).items():
            s = -1 if deg(p) % 2 else 1
            _add(out, (p, q) + rest, s * coeff * c)
            # wrap: c0' moves to the far end
            s = -rotation_sign([deg(p) - 1, deg(q)] + [deg(r) - 1 for r in rest], 1)
            _add(out, (q,) + rest + (p,), s * coeff * c)
        before = deg(c0)
        for i in range(1, n + 1):
            ci = word[i]
            for (p, q), c in coalg.coproduct.get(ci, {}).items():
                s = -1 if (before + deg(p) - i) % 2 else 1
                _add(out, word[:i] + (p, q) + word[i + 1:], s * coeff * c)
            before += deg(ci)
    out = _clean(out)
    if reduced:
        out = {w: c for w, c in out.items() if all(coalg.weight(r) > 0 for r in w[1:])}
    return out


def B_coalgebra(x: dict, coalg, reduced=True) -> dict:
    out = {}
    for word, coeff in x.items():
        eps = coalg.counit.get(word[0], 0)
        if not eps:
            continue
        rest = word[1:]
        deg = [shifted(coalg, r) for r in rest]
        for i in range(len(rest)):
            s = rotation_sign(deg, i)
            _add(out, rotate(rest, i), s * eps * coeff)
    out = _clean(out)
    if reduced:
        out = {w: c for w, c in out.items() if all(coalg.weight(r) > 0 for r in w[1:])}
    return out


def coalgebra_degree(coalg, word) -> int:
    return coalg.degree(word[0]) + sum(shifted(coalg, r) for r in word[1:])


def coalgebra_weight(coalg, word) -> int:
    return sum(coalg.weight(r) for r in word)


def cyclic_t_coalgebra(word, coalg) -> tuple:
    """t(c0, ..., cn) = ± (c1, ..., cn, c0); returns (sign, word)."""
    return rotation_sign([shifted(coalg, c) for c in word], 1), rotate(word, 1)


def cyclic_N(word, t) -> dict:
    """N = 1 + t + ... + t^n applied to a word; t returns (sign, word)."""
    out = {}
    sign, cur = 1, word
    for _ in range(len(word)):
        _add(out, cur, sign)
        s, cur = t(cur)
        sign *= s
    return _clean(out)


def apply_t(vec, t):
    out = {}
    for w, c in vec.items():
        s, r = t(w)
        _add(out, r, s * c)
    return _clean(out)


# --- complexes --------------------------------------------------------------

@dataclass
class Complex:
    """Chain groups by homological degree and differentials between them.

    diffs[d] holds, for each basis element of degree d, its image in
    degree d + step (as {index: Fraction}); step is -1 for chain
    complexes and +1 for the tensor-index grading of N-images.
    """

    basis: dict
    diffs: dict
    meta: dict = field(default_factory=dict)
    step: int = -1  # degree change of the differential

    def dims(self):
        return {d: len(b) for d, b in sorted(self.basis.items())}

    def square_zero(self) -> bool:
        for d in self.diffs:
            if d + self.step in self.diffs:
                for img in compose(self.diffs[d], self.diffs[d + self.step]):
                    if img:
                        return False
        return True


def homology(cx: Complex, degrees=None) -> dict:
    """{degree: (betti, representative cycles)}."""
    out = {}
    for d in sorted(degrees if degrees is not None else cx.basis):
        dim = len(cx.basis.get(d, []))
        d_in = cx.diffs.get(d - cx.step)
        d_out = cx.diffs.get(d)
        out[d] = _homology(d_in, d_out, dim)
    return out


def betti(cx: Complex, degrees=None) -> dict:
    return {d: v[0] for d, v in homology(cx, degrees).items()}


def _orbit_rep(word, t, key):
    """Canonical rotation of a word: returns (sign, rep, degenerate).

    word ≡ sign * rep; degenerate means the orbit sums to zero.
    """
    best, best_sign = word, 1
    sign, cur = 1, word
    degenerate = False
    for _ in range(len(word)):
        s, cur = t(cur)
        sign *= s
        if cur == word and sign == -1:
            degenerate = True
        if key(cur) < key(best):
            best, best_sign = cur, sign
    # word = best_sign^{-1} * best in the quotient
    return best_sign, best, degenerate


def _alg_key(alg):
    order = alg.gen_order
    verts = {v: i for i, v in enumerate(alg.pres.vertices)}

    def entry(a):
        if is_idempotent(a):
            return (0, (verts[a[0][1:]],))
        return (len(a), tuple(order[x] for x in a))

    return lambda word: tuple(entry(a) for a in word)


def _coalg_key(coalg):
    return lambda word: tuple(coalg.order[c] for c in word)


def _algebra_tensor_words(alg, weight, length):
    """Tuples of `length` normal words with total weight `weight`."""
    out = []
    for comp in itertools.product(range(weight + 1), repeat=length):
        if sum(comp) != weight:
            continue
        for word in itertools.product(*[alg.basis(w) for w in comp]):
            if _composes(alg, word):
                out.append(word)
    return out


def connes_complex_algebra(alg: QuadraticAlgebra, weight: int, degree_bound: int) -> Complex:
    """A^{⊗n+1}/(1-t) in a fixed weight, degrees 0..degree_bound+1."""
    t = lambda w: cyclic_t_algebra(w, alg)
    key = _alg_key(alg)
    basis = {}
    for n in range(degree_bound + 2):
        for word in _algebra_tensor_words(alg, weight, n + 1):
            sign, rep, degen = _orbit_rep(word, t, key)
            if degen or rep != word:
                continue
            d = algebra_degree(alg, word)
            if d <= degree_bound + 1:
                basis.setdefault(d, []).append(word)
    basis = {d: sorted(v, key=key) for d, v in sorted(basis.items())}
    index = {d: {w: i for i, w in enumerate(v)} for d, v in basis.items()}
    diffs = {}
    for d, words in basis.items():
        images = []
        for w in words:
            img = {}
            for v, c in b_algebra({w: Fraction(1)}, alg).items():
                sign, rep, degen = _orbit_rep(v, t, key)
                if degen:
                    continue
                j = index[d - 1][rep]
                img[j] = img.get(j, 0) + sign * c
            images.append(_clean(img))
        diffs[d] = images
    return Complex(basis, diffs, {"side": "algebra", "weight": weight})


def _coalgebra_words(coalg, weight, length_bound, letters):
    out = []

    def grow(prefix, w):
        if prefix and w == weight:
            out.append(prefix)
        if len(prefix) >= length_bound:
            return
        for c in letters:
            cw = coalg.weight(c)
            if w + cw > weight:
                continue
            if prefix and coalg.symbols[prefix[-1]].head != coalg.symbols[c].tail:
                continue
            grow(prefix + (c,), w + cw)
    grow((), 0)
    return out


def necklace_words(coalg, weight, length, letters=None):
    """Canonical, non-degenerate cyclic words of a given weight and length."""
    t = lambda w: cyclic_t_coalgebra(w, coalg)
    key = _coalg_key(coalg)
    letters = letters or [b.id for b in coalg.basis]
    out = []
    for word in _coalgebra_words(coalg, weight, length, letters):
        if len(word) != length:
            continue
        if coalg.symbols[word[-1]].head != coalg.symbols[word[0]].tail:
            continue
        sign, rep, degen = _orbit_rep(word, t, key)
        if not degen and rep == word:
            out.append(word)
    return sorted(out, key=key)


def n_image_coordinates(vec, coalg):
    """Write an element of C^{⊗n+1} as a combination of N-images of
    canonical words; raises if it is not N-invariant."""
    t = lambda w: cyclic_t_coalgebra(w, coalg)
    key = _coalg_key(coalg)
    coords = {}
    for v, c in vec.items():
        sign, rep, degen = _orbit_rep(v, t, key)
        if degen:
            raise ArithmeticError(f"{v} lies in a degenerate orbit")
        if rep == v:
            stab = sum(1 for k in range(len(rep)) if rotate(rep, k) == rep)
            coords[rep] = c / stab
    rebuilt = {}
    for r, c in coords.items():
        for w, d in cyclic_N(r, t).items():
            _add(rebuilt, w, c * d)
    if _clean(rebuilt) != _clean(vec):
        raise ArithmeticError("vector is not in the span of N-images")
    return _clean(coords)


def connes_complex_coalgebra(coalg, weight: int, degree_bound: int) -> Complex:
    """N(C^{⊗n+1}) in a fixed weight, graded by the tensor index n.

    Basis elements are N-images of canonical words; b raises n by one.
    Groups are built for n = 0..degree_bound+1.
    """
    basis = {n: necklace_words(coalg, weight, n + 1) for n in range(degree_bound + 2)}
    index = {n: {w: i for i, w in enumerate(v)} for n, v in basis.items()}
    t = lambda w: cyclic_t_coalgebra(w, coalg)
    diffs = {}
    for n in range(degree_bound + 1):
        images = []
        for w in basis[n]:
            coords = n_image_coordinates(b_coalgebra(cyclic_N(w, t), coalg, reduced=False), coalg)
            images.append({index[n + 1][r]: c for r, c in coords.items()})
        diffs[n] = images
    return Complex(basis, diffs, {"side": "coalgebra", "weight": weight}, step=1)


def mixed_chains_coalgebra(coalg, weight, degree):
    """Normalized CH(C) basis words of a given weight and degree."""
    out = []
    reduced = coalg.reduced_basis
    for c0 in [b.id for b in coalg.basis]:
        w0 = coalg.weight(c0)
        if w0 > weight:
            continue
        tails = [()] if w0 == weight else []
        if weight > w0:
            tails = tails + _coalgebra_words(coalg, weight - w0, weight - w0, reduced)
        for tail in tails:
            word = (c0,) + tail
            if coalgebra_degree(coalg, word) != degree:
                continue
            if len(word) > 1 and not all(coalg.symbols[x].head == coalg.symbols[y].tail
                                         for x, y in zip(word, word[1:] + word[:1])):
                continue
            if len(word) == 1 and coalg.symbols[c0].head != coalg.symbols[c0].tail:
                continue
            out.append(word)
    return out


def total_complex_coalgebra(coalg, weight: int, degree_bound: int) -> Complex:
    """Tot_d = ⊕_{p ≥ 0} CH_{d-2p} with differential b + B."""
    ch = {}
    for m in range(0, degree_bound + 2):
        ch[m] = mixed_chains_coalgebra(coalg, weight, m)
    basis = {}
    for d in range(0, degree_bound + 2):
        basis[d] = [(p, w) for p in range(d // 2 + 1) for w in ch.get(d - 2 * p, [])]
    index = {d: {k: i for i, k in enumerate(v)} for d, v in basis.items()}
    diffs = {}
    for d, keys in basis.items():
        images = []
        for p, w in keys:
            img = {}
            for v, c in b_coalgebra({w: Fraction(1)}, coalg).items():
                j = index[d - 1][(p, v)]
                img[j] = img.get(j, 0) + c
            if p > 0:
                for v, c in B_coalgebra({w: Fraction(1)}, coalg).items():
                    j = index[d - 1][(p - 1, v)]
                    img[j] = img.get(j, 0) + c
            images.append(_clean(img))
        diffs[d] = images
    return Complex(basis, diffs, {"side": "coalgebra-total", "weight": weight})


def mixed_chains_algebra(alg, weight, degree):
    """Normalized CH(A) basis words of a given weight and degree."""
    out = []
    for n in range(degree + 1):
        for w0 in range(weight + 1):
            for a0 in alg.basis(w0):
                rest = weight - w0
                if n == 0:
                    if rest == 0 and algebra_degree(alg, (a0,)) == degree and _composes(alg, (a0,)):
                        out.append((a0,))
                    continue
                for comp in itertools.product(range(1, rest + 1), repeat=n):
                    if sum(comp) != rest:
                        continue
                    for tail in itertools.product(*[alg.basis(w) for w in comp]):
                        word = (a0,) + tail
                        if algebra_degree(alg, word) == degree and _composes(alg, word):
                            out.append(word)
    return out


def total_complex_algebra(alg, weight: int, degree_bound: int) -> Complex:
    ch = {m: mixed_chains_algebra(alg, weight, m) for m in range(degree_bound + 2)}
    basis = {d: [(p, w) for p in range(d // 2 + 1) for w in ch.get(d - 2 * p, [])]
             for d in range(degree_bound + 2)}
    index = {d: {k: i for i, k in enumerate(v)} for d, v in basis.items()}
    diffs = {}
    for d, keys in basis.items():
        images = []
        for p, w in keys:
            img = {}
            for v, c in b_algebra({w: Fraction(1)}, alg).items():
                j = index[d - 1][(p, v)]
                img[j] = img.get(j, 0) + c
            if p > 0:
                for v, c in B_algebra({w: Fraction(1)}, alg).items():
                    j = index[d - 1][(p - 1, v)]
                    img[j] = img.get(j, 0) + c
            images.append(_clean(img))
        diffs[d] = images
    return Complex(basis, diffs, {"side": "algebra-total", "weight": weight})


def connes_complex(pres, side: str, weight_bound: int, degree_bound: int) -> dict:
    """{weight: Complex} for weights 0..weight_bound.

    side "algebra": pres is a QuadraticPresentation or QuadraticAlgebra;
    side "coalgebra": pres is a CoalgebraPresentation.
    """
    out = {}
    if side == "algebra":
        alg = pres if isinstance(pres, QuadraticAlgebra) else QuadraticAlgebra(pres, weight_bound)
        for w in range(weight_bound + 1):
            out[w] = connes_complex_algebra(alg, w, degree_bound)
    elif side == "coalgebra":
        for w in range(weight_bound + 1):
            out[w] = connes_complex_coalgebra(pres, w, degree_bound)
    else:
        raise ValueError(f"unknown side {side!r}")
    return out


def hc_table_algebra(alg, weight_bound, degree_bound) -> dict:
    """{(weight, degree): dim HC} from the algebra Connes complex."""
    out = {}
    for w in range(weight_bound + 1):
        cx = connes_complex_algebra(alg, w, degree_bound)
        for d, b in betti(cx, range(degree_bound + 1)).items():
            out[(w, d)] = b
    return out


def hc_table_coalgebra(coalg, weight_bound, degree_bound) -> dict:
    """{(weight, degree): dim HC} from the total complex of CH(C)."""
    out = {}
    for w in range(weight_bound + 1):
        cx = total_complex_coalgebra(coalg, w, degree_bound)
        for d, b in betti(cx, range(degree_bound + 1)).items():
            out[(w, d)] = b
    return out
