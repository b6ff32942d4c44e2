"""Matrix Lie (co)algebras, their Chevalley-Eilenberg complexes, and the
trace maps to cyclic complexes.

A matrix letter is (row, col, entry) with indices 1..r; the entry is an
algebra basis word (tuple) or a coalgebra basis id. A chain is a dict
{wedge: coefficient}, a wedge being a tuple of letters in canonical order.
Wedges are graded antisymmetric in the shifted entry degree (|a|+1 for
algebras, |c|-1 for coalgebras; both have the parity of |a|+1).
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, permutations, product

from .cyclic import _alg_key, _orbit_rep, b_algebra, connes_complex_coalgebra, cyclic_t_algebra, homology
from .linalg import kernel, rank
from .necklace import NecklaceAlgebra
from .scalar import reorder_sign


class StabilityError(ValueError):
    """The matrix rank is too small for the invariant-theory statements."""


def _add(out, key, c):
    v = out.get(key, 0) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def _exact(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


class Wedges:
    """Canonical forms in the exterior algebra on matrix letters."""

    def __init__(self, entry_degree, entry_key):
        self.entry_degree = entry_degree  # shifted degree of an entry
        self.entry_key = entry_key

    def degree(self, letter) -> int:
        return self.entry_degree(letter[2])

    def key(self, letter):
        return (letter[0], letter[1], self.entry_key(letter[2]))

    def canonical(self, letters):
        """(sign, wedge) with the letters sorted; sign 0 if it vanishes."""
        letters = tuple(letters)
        order = sorted(range(len(letters)), key=lambda i: self.key(letters[i]))
        out = tuple(letters[i] for i in order)
        for x, y in zip(out, out[1:]):
            if x == y and self.degree(x) % 2:
                return 0, out
        return reorder_sign(order, [self.degree(x) for x in letters]), out

    def add_into(self, out, letters, c):
        s, w = self.canonical(letters)
        if s:
            _add(out, w, s * c)

    def wedge(self, x: dict, y: dict) -> dict:
        out = {}
        for a, c in x.items():
            for b, d in y.items():
                self.add_into(out, a + b, c * d)
        return out


# --- algebra side ---------------------------------------------------------------

def algebra_wedges(alg) -> Wedges:
    order = alg.gen_order

    def key(a):
        if a and a[0].startswith("@"):
            return (0, (a[0],))
        return (len(a), tuple(order[x] for x in a))

    return Wedges(lambda a: alg.degree(a) + 1, key)


def matrix_bracket(x, y, alg) -> dict:
    """[E_ij^a, E_kl^b] = δ_jk E_il^{ab} - ± δ_li E_kj^{ba}, as {letter: c}."""
    (i, j, a), (k, l, b) = x, y
    out = {}
    if j == k:
        for w, c in alg.multiply(a, b).items():
            _add(out, (i, l, w), _exact(c))
    if l == i:
        s = -1 if alg.degree(a) * alg.degree(b) % 2 else 1
        for w, c in alg.multiply(b, a).items():
            _add(out, (k, j, w), -s * _exact(c))
    return out


def ce_differential_lie(x: dict, alg) -> dict:
    """Σ_{p<q} ± [x_p, x_q] ∧ (rest), Koszul signs in shifted degrees.

    With x_p, x_q moved to the front, s(x)∧s(y) goes to (-1)^{|x|} s[x,y];
    this global sign makes Tr∘θ a chain map onto the Hochschild b.
    """
    wd = algebra_wedges(alg)
    out = {}
    for word, coeff in x.items():
        n = len(word)
        degs = [wd.degree(l) for l in word]
        for p, q in combinations(range(n), 2):
            rest = [k for k in range(n) if k not in (p, q)]
            s = reorder_sign([p, q] + rest, degs)
            s *= -1 if alg.degree(word[p][2]) % 2 else 1
            for z, c in matrix_bracket(word[p], word[q], alg).items():
                wd.add_into(out, (z,) + tuple(word[k] for k in rest), s * c * coeff)
    return out


def theta_trace(x: dict, alg) -> dict:
    """Tr∘θ: wedges a0∧...∧an to classes in A^{⊗n+1}/(1-t), as {rep: c}."""
    wd = algebra_wedges(alg)
    t = lambda w: cyclic_t_algebra(w, alg)
    key = _alg_key(alg)
    out = {}
    for word, coeff in x.items():
        n = len(word) - 1
        degs = [wd.degree(l) for l in word[1:]]
        for sigma in permutations(range(n)):
            seq = (word[0],) + tuple(word[1 + k] for k in sigma)
            # the trace keeps only matching index cycles
            if any(seq[k][1] != seq[(k + 1) % len(seq)][0] for k in range(len(seq))):
                continue
            s = reorder_sign(list(sigma), degs)
            sign, rep, degen = _orbit_rep(tuple(l[2] for l in seq), t, key)
            if not degen:
                _add(out, rep, s * sign * coeff)
    return out


def cyclic_classes(vec: dict, alg) -> dict:
    t = lambda w: cyclic_t_algebra(w, alg)
    key = _alg_key(alg)
    out = {}
    for w, c in vec.items():
        sign, rep, degen = _orbit_rep(w, t, key)
        if not degen:
            _add(out, rep, sign * c)
    return out


def check_trace_chain_map(alg, r, max_length, samples=200, seed=0, max_weight=None):
    """Tr∘θ∘d = b∘Tr∘θ on seeded random wedges; returns failing wedges.

    Entries are drawn so that all products stay inside the truncation.
    """
    rng = random.Random(seed)
    wd = algebra_wedges(alg)
    top = max_weight if max_weight is not None else alg.max_weight
    failures = []
    for _ in range(samples):
        n = rng.randint(1, max_length)
        budget = top
        letters = []
        for _ in range(n):
            m = rng.randint(0, budget)
            budget -= m
            a = rng.choice(alg.basis(m))
            letters.append((rng.randint(1, r), rng.randint(1, r), a))
        s, w = wd.canonical(letters)
        if not s:
            continue
        x = {w: 1}
        lhs = theta_trace(ce_differential_lie(x, alg), alg)
        rhs = cyclic_classes(b_algebra(theta_trace(x, alg), alg), alg)
        if lhs != rhs:
            failures.append(w)
    return failures


# --- coalgebra side -------------------------------------------------------------

def coalgebra_wedges(coalg) -> Wedges:
    return Wedges(lambda c: coalg.degree(c) - 1, lambda c: coalg.order[c])


def matrix_coproduct(letter, coalg, r) -> dict:
    """Δ(E_ij^a) = Σ_k Σ E_ik^{a'} ⊗ E_kj^{a''}."""
    i, j, a = letter
    out = {}
    for (p, q), c in coalg.coproduct.get(a, {}).items():
        for k in range(1, r + 1):
            _add(out, ((i, k, p), (k, j, q)), _exact(c))
    return out


def matrix_cobracket(letter, coalg, r, raw=False):
    """ν = Δ - Δ^op, the flip carrying the Koszul sign of the entry degrees.

    raw=True returns the list of terms before cancellation.
    """
    terms = []
    for (x, y), c in matrix_coproduct(letter, coalg, r).items():
        terms.append(((x, y), c))
        s = -1 if coalg.degree(x[2]) * coalg.degree(y[2]) % 2 else 1
        terms.append(((y, x), -s * c))
    if raw:
        return terms
    out = {}
    for k, c in terms:
        _add(out, k, c)
    return out


def ce_differential_colie(x: dict, coalg, r) -> dict:
    """Replace one letter l by l'∧l'' (the image of Δ(l) = ν(l)/2 in Λ²),
    with sign (-1)^{shifted degrees before + |l'|}."""
    wd = coalgebra_wedges(coalg)
    out = {}
    for word, coeff in x.items():
        before = 0
        for i, l in enumerate(word):
            for (p, q), c in matrix_coproduct(l, coalg, r).items():
                s = -1 if (before + coalg.degree(p[2])) % 2 else 1
                wd.add_into(out, word[:i] + (p, q) + word[i + 1:], s * c * coeff)
            before += wd.degree(l)
    return out


def theta_star(word, r, coalg, sigma=None) -> dict:
    """Σ_i E^{c1}_{i1 i_σ(1)} ∧ ... ∧ E^{cn}_{in i_σ(n)}; σ defaults to the
    cycle k -> k+1, giving the necklace map."""
    n = len(word)
    if sigma is None:
        sigma = [(k + 1) % n for k in range(n)]
    wd = coalgebra_wedges(coalg)
    out = {}
    for idx in product(range(1, r + 1), repeat=n):
        wd.add_into(out, tuple((idx[k], idx[sigma[k]], word[k]) for k in range(n)), 1)
    return out


def check_theta_star_chain_map(coalg, r, max_length) -> list:
    """Θ*∘b = d∘Θ* on every necklace up to max_length; returns failures."""
    nk = NecklaceAlgebra(coalg)
    failures = []
    for w in nk.necklaces(max_length):
        lhs = {}
        for v, c in nk.boundary({w: 1}).items():
            for k, d in theta_star(v, r, coalg).items():
                _add(lhs, k, c * d)
        if lhs != ce_differential_colie(theta_star(w, r, coalg), coalg, r):
            failures.append(w)
    return failures


def check_product(coalg, r, samples=20, seed=0, max_length=2) -> list:
    """Θ*(σ, b)∧Θ*(ς, c) = Θ*(σς', b + c) on seeded samples."""
    rng = random.Random(seed)
    ids = [b.id for b in coalg.basis]
    wd = coalgebra_wedges(coalg)
    failures = []
    for _ in range(samples):
        m, n = rng.randint(1, max_length), rng.randint(1, max_length)
        if m + n >= r:
            m, n = 1, 1
        b = tuple(rng.choice(ids) for _ in range(m))
        c = tuple(rng.choice(ids) for _ in range(n))
        sigma = rng.sample(range(m), m)
        vs = rng.sample(range(n), n)
        joined = sigma + [m + k for k in vs]
        lhs = wd.wedge(theta_star(b, r, coalg, sigma), theta_star(c, r, coalg, vs))
        if lhs != theta_star(b + c, r, coalg, joined):
            failures.append((b, tuple(sigma), c, tuple(vs)))
    return failures


# --- invariants -----------------------------------------------------------------

def mu_invariant(sigma, r) -> dict:
    """Σ_i E_{i1 i_σ(1)} ⊗ ... ⊗ E_{in i_σ(n)} in gl_r(k)^{⊗n}."""
    n = len(sigma)
    if r <= n:
        raise StabilityError(f"rank {r} must exceed the tensor length {n}")
    return {tuple((idx[k], idx[sigma[k]]) for k in range(n)): 1
            for idx in product(range(1, r + 1), repeat=n)}


def gl_action(p, q, tensor: dict) -> dict:
    """E_pq acting on ⊗ E_ij by f ↦ f·h^T - h^T·f in each factor."""
    out = {}
    for t, c in tensor.items():
        for k, (i, j) in enumerate(t):
            if j == q:
                _add(out, t[:k] + ((i, p),) + t[k + 1:], c)
            if i == p:
                _add(out, t[:k] + ((q, j),) + t[k + 1:], -c)
    return out


def _act_on_wedge(p, q, word, wd) -> dict:
    out = {}
    for k, (i, j, c) in enumerate(word):
        if j == q:
            wd.add_into(out, word[:k] + ((i, p, c),) + word[k + 1:], 1)
        if i == p:
            wd.add_into(out, word[:k] + ((q, j, c),) + word[k + 1:], -1)
    return out


def zero_weight_wedges(coalg, r, weight, length):
    """Wedges of the given weight and length with matching row and column
    index multisets (the zero weight space of the diagonal torus)."""
    wd = coalgebra_wedges(coalg)
    letters = [(i, j, b.id) for i in range(1, r + 1) for j in range(1, r + 1) for b in coalg.basis]
    letters.sort(key=wd.key)
    out = []
    for combo in combinations_with_replacement(letters, length):
        if sum(coalg.weight(l[2]) for l in combo) != weight:
            continue
        if sorted(l[0] for l in combo) != sorted(l[1] for l in combo):
            continue
        s, w = wd.canonical(combo)
        if s:
            out.append(w)
    return out


def invariant_basis(coalg, r, weight, length):
    """Basis of the gl_r(k)-invariants in Λ^length, as {wedge: c} vectors."""
    wd = coalgebra_wedges(coalg)
    basis = zero_weight_wedges(coalg, r, weight, length)
    if length == 0:
        return [{(): 1}] if weight == 0 else []
    index = {}
    images = []
    for w in basis:
        img = {}
        # E_{p,p+1} and E_{p+1,p} generate sl_r; the torus is handled above
        for p in range(1, r):
            for gen in ((p, p + 1), (p + 1, p)):
                for z, c in _act_on_wedge(gen[0], gen[1], w, wd).items():
                    key = (gen, z)
                    if key not in index:
                        index[key] = len(index)
                    img[index[key]] = c
        images.append(img)
    return [{basis[i]: c for i, c in v.items()} for v in kernel(images, len(basis))]


def invariant_homology(coalg, r, max_length) -> dict:
    """{(weight, length): dim} for the invariant CE model, length ≤ max_length."""
    top = max((b.weight for b in coalg.basis), default=0)
    out = {}
    for w in range(top * max_length + 1):
        ranks = {}
        dims = {}
        for L in range(max_length + 1):
            basis = invariant_basis(coalg, r, w, L)
            dims[L] = len(basis)
            ranks[L] = rank([ce_differential_colie(v, coalg, r) for v in basis]) if basis else 0
        for L in range(max_length + 1):
            h = dims[L] - ranks[L] - (ranks[L - 1] if L else 0)
            if h:
                out[(w, L)] = h
    return out


def exterior_on_cyclic(coalg, max_length) -> dict:
    """{(weight, length): dim} of the free graded-commutative algebra on
    HC(C)[1], a class of tensor length n sitting in length n."""
    top = max((b.weight for b in coalg.basis), default=0)
    gens = {}  # (weight, length, parity) -> dim
    for w in range(top * max_length + 1):
        cx = connes_complex_coalgebra(coalg, w, max_length)
        for n, (b, reps) in homology(cx, range(max_length)).items():
            for rep in reps:
                parities = {sum(coalg.degree(c) - 1 for c in cx.basis[n][i]) % 2 for i in rep}
                if len(parities) != 1:
                    raise ArithmeticError("cyclic class of mixed parity")
                key = (w, n + 1, parities.pop())
                gens[key] = gens.get(key, 0) + 1
    # multiply out generating functions, truncated at max_length
    series = {(0, 0): 1}
    for (w, l, par), d in sorted(gens.items()):
        for _ in range(d):
            new = dict(series)
            for (a, b), c in series.items():
                k = 1
                while b + k * l <= max_length and (par == 0 or k == 1):
                    key = (a + k * w, b + k * l)
                    new[key] = new.get(key, 0) + c
                    k += 1
            series = new
    return {k: v for k, v in series.items() if v}


def verify_lqt(coalg, r, degree_bound, alg=None, seed=0) -> dict:
    """Chain-map checks, invariant homology against Λ(HC[1]) per
    (weight, wedge length ≤ degree_bound), and the product check."""
    if r <= degree_bound:
        raise StabilityError(f"rank {r} must exceed the degree bound {degree_bound}")
    report = {
        "theta_star_chain_map": [str(w) for w in check_theta_star_chain_map(coalg, r, degree_bound + 1)],
        "product": [str(x) for x in check_product(coalg, r, seed=seed)],
    }
    if alg is not None:
        report["trace_chain_map"] = [str(w) for w in check_trace_chain_map(alg, r, degree_bound + 1, seed=seed)]
    lhs = invariant_homology(coalg, r, degree_bound)
    rhs = exterior_on_cyclic(coalg, degree_bound)
    report["invariant_homology"] = {f"{w},{L}": d for (w, L), d in sorted(lhs.items())}
    report["exterior_cyclic"] = {f"{w},{L}": d for (w, L), d in sorted(rhs.items())}
    report["dimension_mismatch"] = [f"{k}" for k in sorted(set(lhs) | set(rhs)) if lhs.get(k) != rhs.get(k)]
    return report


def lqt_passes(report) -> bool:
    keys = ("theta_star_chain_map", "product", "trace_chain_map", "dimension_mismatch")
    return all(not report.get(k) for k in keys)
