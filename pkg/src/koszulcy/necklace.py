"""Necklace Lie bialgebra on cyclic words over a co-Frobenius coalgebra,
and the quotient of the tensor algebra on necklaces by a⊗b - ±b⊗a - h{a,b}.

A necklace is stored as its canonical word (a tuple of basis ids). Letters
carry the shifted degree |c| - 1, and rotations follow the Koszul rule in
those degrees. The empty tuple is the unit 1. Elements are dicts
{word: coefficient}; tensors are dicts {(word, word): coefficient}.
"""

from __future__ import annotations

import json
from fractions import Fraction
from itertools import product

from .cyclic import (_coalg_key, _orbit_rep, b_coalgebra, cyclic_N, cyclic_t_coalgebra,
                     n_image_coordinates, necklace_words, shifted)
from .presentations import PresentationError
from .scalar import Scalar, koszul_sign, reorder_sign

UNIT = ()


def _exact(c):
    # plain ints are much faster than Fractions and just as exact
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


def _add(out, key, c):
    v = out.get(key, 0) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


class NecklaceAlgebra:
    """Bracket, cobracket and boundary on necklaces over one coalgebra."""

    def __init__(self, coalg, cy_dimension=None):
        if coalg.pairing is None:
            raise PresentationError("necklace operations need a pairing")
        self.coalg = coalg
        self.n = cy_dimension if cy_dimension is not None else (coalg.pairing_degree or 2)
        # the contraction by the pairing has degree 2 - n on shifted letters
        self.op_degree = 2 - self.n
        self.key = _coalg_key(coalg)
        self._t = lambda w: cyclic_t_coalgebra(w, coalg)
        self._canon = {}
        self._bracket = {}
        self._cobracket = {}

    # --- words -------------------------------------------------------------

    def letter_degree(self, c) -> int:
        return shifted(self.coalg, c)

    def degree(self, word) -> int:
        return sum(self.letter_degree(c) for c in word)

    def lie_degree(self, word) -> int:
        # degree used by the graded antisymmetry of {-,-} and δ
        return self.degree(word) + self.op_degree

    def canonical(self, word):
        """(sign, rep) with word = sign * rep; sign 0 for degenerate words."""
        word = tuple(word)
        if not word:
            return 1, UNIT
        if word not in self._canon:
            sign, rep, degen = _orbit_rep(word, self._t, self.key)
            self._canon[word] = (0, rep) if degen else (sign, rep)
        return self._canon[word]

    def element(self, word, c=1) -> dict:
        sign, rep = self.canonical(word)
        return {rep: sign * c} if sign else {}

    def order_key(self, word):
        # length first, then lexicographic in the basis order
        return (len(word), self.key(word))

    def necklaces(self, max_length, weight=None):
        """All canonical non-degenerate necklaces of length 1..max_length."""
        top = max((b.weight for b in self.coalg.basis), default=0)
        weights = [weight] if weight is not None else range(top * max_length + 1)
        out = []
        for w in weights:
            for n in range(1, max_length + 1):
                out.extend(necklace_words(self.coalg, w, n))
        return sorted(set(out), key=self.order_key)

    def to_string(self, word) -> str:
        return "1" if not word else "[" + ",".join(word) + "]"

    # --- bracket -----------------------------------------------------------

    def _bracket_words(self, x, y) -> dict:
        if (x, y) in self._bracket:
            return self._bracket[(x, y)]
        out = {}
        n, m = len(x), len(y)
        degs = [self.op_degree] + [self.letter_degree(c) for c in x + y]
        for i in range(n):
            for j in range(m):
                p = _exact(self.coalg.pair(x[i], y[j]))
                if not p:
                    continue
                # X = x[i+1:] + x[:i], then op, x[i], y[j], then Y
                xs = [1 + (i + k) % n for k in range(1, n)]
                ys = [1 + n + (j + k) % m for k in range(1, m)]
                order = xs + [0, 1 + i, 1 + n + j] + ys
                s = reorder_sign(order, degs)
                word = tuple(x[(i + k) % n] for k in range(1, n)) + tuple(
                    y[(j + k) % m] for k in range(1, m))
                sign, rep = self.canonical(word)
                if sign:
                    _add(out, rep, s * sign * p)
        self._bracket[(x, y)] = out
        return out

    def bracket(self, a: dict, b: dict) -> dict:
        out = {}
        for x, c in a.items():
            if not x:
                continue  # the unit is central
            for y, d in b.items():
                if not y:
                    continue
                for z, e in self._bracket_words(x, y).items():
                    _add(out, z, c * d * e)
        return out

    # --- cobracket ---------------------------------------------------------

    def _cobracket_word(self, x) -> dict:
        if x in self._cobracket:
            return self._cobracket[x]
        out = {}
        n = len(x)
        degs = [self.op_degree] + [self.letter_degree(c) for c in x]
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                p = _exact(self.coalg.pair(x[i], x[j]))
                if not p:
                    continue
                # rotate to x[i] P x[j] Q, contract x[i] with x[j]
                gap = (j - i) % n
                ps = [(i + k) % n for k in range(1, gap)]
                qs = [(i + k) % n for k in range(gap + 1, n)]
                order = [0, 1 + i, 1 + j] + [1 + k for k in ps] + [1 + k for k in qs]
                s = reorder_sign(order, degs)
                sp, left = self.canonical(tuple(x[k] for k in ps))
                sq, right = self.canonical(tuple(x[k] for k in qs))
                if sp and sq:
                    _add(out, (left, right), s * sp * sq * p)
        self._cobracket[x] = out
        return out

    def cobracket(self, a: dict) -> dict:
        out = {}
        for x, c in a.items():
            if not x:
                continue
            for k, d in self._cobracket_word(x).items():
                _add(out, k, c * d)
        return out

    # --- boundary ----------------------------------------------------------

    def boundary(self, a: dict) -> dict:
        """b on necklaces: split one letter by the coproduct, Koszul signs."""
        out = {}
        deg = self.coalg.degree
        for x, c in a.items():
            before = 0
            for i, ci in enumerate(x):
                for (p, q), d in self.coalg.coproduct.get(ci, {}).items():
                    s = -1 if (before + deg(p)) % 2 else 1
                    sign, rep = self.canonical(x[:i] + (p, q) + x[i + 1:])
                    if sign:
                        _add(out, rep, c * _exact(d) * s * sign)
                before += self.letter_degree(ci)
        return out

    def boundary_via_images(self, a: dict) -> dict:
        """b computed on N-images with the mixed-complex formula."""
        out = {}
        for x, c in a.items():
            if not x:
                continue
            img = b_coalgebra(cyclic_N(x, self._t), self.coalg, reduced=False)
            for rep, d in n_image_coordinates(img, self.coalg).items():
                _add(out, rep, c * d)
        return out

    # --- tensors -----------------------------------------------------------

    def swap(self, t: dict) -> dict:
        out = {}
        for (x, y), c in t.items():
            s = -1 if self.lie_degree(x) * self.lie_degree(y) % 2 else 1
            _add(out, (y, x), s * c)
        return out

    def export_tables(self, words) -> str:
        """JSON tables of brackets and cobrackets keyed by necklace strings."""
        st = self.to_string
        fmt = lambda v: {k: str(c) for k, c in sorted(v.items())}
        br = {}
        for x, y in product(words, repeat=2):
            v = self._bracket_words(x, y)
            if v:
                br[st(x) + " " + st(y)] = fmt({st(z): c for z, c in v.items()})
        co = {}
        for x in words:
            v = self._cobracket_word(x)
            if v:
                co[st(x)] = fmt({st(l) + " " + st(r): c for (l, r), c in v.items()})
        return json.dumps({"bracket": br, "cobracket": co}, indent=2, sort_keys=True)


# --- verification ------------------------------------------------------------

def _sgn(k):
    return -1 if k % 2 else 1


def _tensor_left(nk, x, t):
    """x · (u ⊗ v) = {x,u} ⊗ v + ± u ⊗ {x,v}."""
    out = {}
    lx = nk.lie_degree(x)
    for (u, v), c in t.items():
        for z, d in nk.bracket({x: 1}, {u: 1}).items():
            _add(out, (z, v), c * d)
        s = _sgn(lx * nk.lie_degree(u))
        for z, d in nk.bracket({x: 1}, {v: 1}).items():
            _add(out, (u, z), s * c * d)
    return out


def _combine(*terms):
    out = {}
    for sign, vec in terms:
        for k, c in vec.items():
            _add(out, k, sign * c)
    return out


def cocycle_defect(nk, x, y) -> dict:
    lhs = nk.cobracket(nk.bracket({x: 1}, {y: 1}))
    s = _sgn(nk.lie_degree(x) * nk.lie_degree(y))
    return _combine((1, lhs), (-1, _tensor_left(nk, x, nk.cobracket({y: 1}))),
                    (s, _tensor_left(nk, y, nk.cobracket({x: 1}))))


def literal_cocycle_defect(nk, x, y) -> dict:
    """The one-sided form a'⊗{a'',b} + ± b'⊗{a,b''}."""
    out = dict(nk.cobracket(nk.bracket({x: 1}, {y: 1})))
    for (u, v), c in nk.cobracket({x: 1}).items():
        for z, d in nk.bracket({v: 1}, {y: 1}).items():
            _add(out, (u, z), -c * d)
    for (u, v), c in nk.cobracket({y: 1}).items():
        s = _sgn(nk.degree(x) * nk.degree(u))
        for z, d in nk.bracket({x: 1}, {v: 1}).items():
            _add(out, (u, z), -s * c * d)
    return out


def co_jacobi_defect(nk, x) -> dict:
    out = {}
    for (u, v), c in nk.cobracket({x: 1}).items():
        for (p, q), d in nk.cobracket({u: 1}).items():
            trip = (p, q, v)
            degs = [nk.lie_degree(w) for w in trip]
            for k in range(3):
                # cyclic rotation moving the last factor to the front
                rot = trip[3 - k:] + trip[:3 - k]
                perm = [(i + k) % 3 for i in range(3)]
                _add(out, rot, koszul_sign(perm, degs) * c * d)
    return out


def verify_lie_bialgebra(coalg, max_length, cy_dimension=None, jacobi_length=None) -> dict:
    """Check every Lie bialgebra identity on necklaces up to max_length.

    Returns {check: [witness, ...]} with empty lists for passing checks,
    plus "unit_outputs" listing inputs whose output involves the unit.
    """
    nk = NecklaceAlgebra(coalg, cy_dimension)
    words = nk.necklaces(max_length)
    st = nk.to_string
    L = nk.lie_degree
    report = {k: [] for k in ("antisymmetry", "jacobi", "co_jacobi", "cocycle", "involutivity",
                              "b_derivation", "b_coderivation", "b_routes", "unit_central")}
    report["literal_cocycle"] = []
    report["unit_outputs"] = []
    one = lambda w: {w: 1}

    for x in words:
        co = nk.cobracket(one(x))
        if any(not l or not r for l, r in co):
            report["unit_outputs"].append(st(x))
        if co != _combine((-1, nk.swap(co))):
            report["co_jacobi"].append(f"δ{st(x)} not antisymmetric")
        if co_jacobi_defect(nk, x):
            report["co_jacobi"].append(st(x))
        inv = {}
        for (u, v), c in co.items():
            for z, d in nk.bracket(one(u), one(v)).items():
                _add(inv, z, c * d)
        if inv:
            report["involutivity"].append(st(x))
        bx = nk.boundary(one(x))
        if bx != nk.boundary_via_images(one(x)):
            report["b_routes"].append(st(x))
        lhs = nk.cobracket(bx)
        rhs = {}
        for (u, v), c in co.items():
            for z, d in nk.boundary(one(u)).items():
                _add(rhs, (z, v), c * d)
            for z, d in nk.boundary(one(v)).items():
                _add(rhs, (u, z), _sgn(L(u)) * c * d)
        if lhs != rhs:
            report["b_coderivation"].append(st(x))
        if nk.bracket({UNIT: 1}, one(x)) or nk.bracket(one(x), {UNIT: 1}):
            report["unit_central"].append(st(x))
    if nk.cobracket({UNIT: 1}):
        report["unit_central"].append("δ(1)")

    for x in words:
        for y in words:
            xy = nk.bracket(one(x), one(y))
            if UNIT in xy and st(x) + " " + st(y) not in report["unit_outputs"]:
                report["unit_outputs"].append(st(x) + " " + st(y))
            yx = nk.bracket(one(y), one(x))
            if _combine((1, xy), (_sgn(L(x) * L(y)), yx)):
                report["antisymmetry"].append(f"{st(x)} {st(y)}")
            if cocycle_defect(nk, x, y):
                report["cocycle"].append(f"{st(x)} {st(y)}")
            if literal_cocycle_defect(nk, x, y):
                report["literal_cocycle"].append(f"{st(x)} {st(y)}")
            lhs = nk.boundary(xy)
            rhs = _combine((1, nk.bracket(nk.boundary(one(x)), one(y))),
                           (_sgn(L(x)), nk.bracket(one(x), nk.boundary(one(y)))))
            if lhs != rhs:
                report["b_derivation"].append(f"{st(x)} {st(y)}")

    jwords = [w for w in words if len(w) <= (jacobi_length or max_length)]
    for i, x in enumerate(jwords):
        for j in range(i, len(jwords)):
            y = jwords[j]
            xy = nk.bracket(one(x), one(y))
            for z in jwords[j:]:
                yz = nk.bracket(one(y), one(z))
                xz = nk.bracket(one(x), one(z))
                if not (xy or yz or xz):
                    continue
                jac = _combine((1, nk.bracket(one(x), yz)), (-1, nk.bracket(xy, one(z))),
                               (-_sgn(L(x) * L(y)), nk.bracket(one(y), xz)))
                if jac:
                    report["jacobi"].append(f"{st(x)} {st(y)} {st(z)}")
    return report


def report_passes(report) -> bool:
    informational = ("literal_cocycle", "unit_outputs")
    return all(not v for k, v in report.items() if k not in informational)


# --- the quotient V_{h hbar} ---------------------------------------------------

H = Scalar.monomial(1, 0)
HBAR = Scalar.monomial(0, 1)


class Vhh:
    """Tensor algebra on necklaces modulo ab - ±ba - h{a,b}.

    Elements are dicts {(necklace, ...): Scalar}; the empty product is 1.
    Normal forms have factors nondecreasing in length-lex order, and odd
    factors appear at most once in a row (xx = h/2 {x,x} for odd x).
    """

    def __init__(self, nk: NecklaceAlgebra):
        self.nk = nk
        self._nf = {}

    def _odd(self, x):
        return self.nk.lie_degree(x) % 2

    def generator(self, word) -> dict:
        sign, rep = self.nk.canonical(word)
        if not sign:
            return {}
        return {(rep,) if rep else (): Scalar.const(sign)}

    def _rewrite(self, mono):
        """One rewriting step on the first bad spot, or None if normal."""
        key = self.nk.order_key
        for i in range(len(mono) - 1):
            x, y = mono[i], mono[i + 1]
            kx, ky = key(x), key(y)
            if kx < ky or (kx == ky and not self._odd(x)):
                continue
            pre, post = mono[:i], mono[i + 2:]
            br = self.nk.bracket({x: 1}, {y: 1})
            out = {}
            if kx == ky:
                # xx = -xx + h{x,x}
                for z, c in br.items():
                    _add(out, pre + ((z,) if z else ()) + post, H * Fraction(c, 2))
                return out
            # xy = ±yx + h{x,y}
            s = _sgn(self.nk.lie_degree(x) * self.nk.lie_degree(y))
            out[pre + (y, x) + post] = Scalar.const(s)
            for z, c in br.items():
                _add(out, pre + ((z,) if z else ()) + post, H * c)
            return out
        return None

    def _normal_mono(self, mono) -> dict:
        if mono in self._nf:
            return self._nf[mono]
        step = self._rewrite(mono)
        if step is None:
            out = {mono: Scalar.const(1)}
        else:
            out = {}
            for m, c in step.items():
                for m2, d in self._normal_mono(m).items():
                    _add(out, m2, c * d)
        self._nf[mono] = out
        return out

    def normal_form(self, x: dict) -> dict:
        out = {}
        for m, c in x.items():
            for m2, d in self._normal_mono(tuple(f for f in m if f)).items():
                _add(out, m2, c * d)
        return out

    def multiply(self, x: dict, y: dict) -> dict:
        return self.normal_form({a + b: c * d for a, c in x.items() for b, d in y.items()})

    def degree(self, mono) -> int:
        return sum(self.nk.lie_degree(f) for f in mono)

    # --- coproduct and cobracket on V, valued in V ⊗ V -----------------

    def coproduct(self, x: dict) -> dict:
        """Shuffle coproduct, necklaces primitive; keeps factor order."""
        out = {}
        for m, c in x.items():
            degs = [self.nk.lie_degree(f) for f in m]
            for mask in range(1 << len(m)):
                left = [i for i in range(len(m)) if mask >> i & 1]
                right = [i for i in range(len(m)) if not mask >> i & 1]
                s = reorder_sign(left + right, degs)
                _add(out, (tuple(m[i] for i in left), tuple(m[i] for i in right)), c * s)
        return out

    def tensor_multiply(self, t: dict, u: dict) -> dict:
        """(a⊗b)(c⊗d) = ± ac ⊗ bd, both sides normal-formed."""
        out = {}
        for (a, b), c in t.items():
            for (p, q), d in u.items():
                s = _sgn(self.degree(b) * self.degree(p))
                for l, e in self._normal_mono(a + p).items():
                    for r, f in self._normal_mono(b + q).items():
                        _add(out, (l, r), c * d * e * f * s)
        return out

    def cobracket_generator(self, word) -> dict:
        out = {}
        for (l, r), c in self.nk.cobracket({word: 1}).items():
            _add(out, ((l,) if l else (), (r,) if r else ()), HBAR * c)
        return out

    def cobracket(self, x: dict) -> dict:
        """ν on products by ν(ab) = ν(a)Δ(b) + Δ(a)ν(b), factor by factor.

        The input is used as given (not normal-formed first), so comparing
        ν(x) with ν(normal_form(x)) tests that ν respects the relations.
        """
        out = {}
        for m, c in x.items():
            for k, d in self._cobracket_mono(tuple(f for f in m if f)).items():
                _add(out, k, c * d)
        return out

    def _cobracket_mono(self, mono) -> dict:
        if not mono:
            return {}
        head, rest = mono[0], mono[1:]
        first = self.cobracket_generator(head)
        if not rest:
            return first
        rest_v = {rest: Scalar.const(1)}
        out = self.tensor_multiply(first, self.coproduct(rest_v))
        for k, c in self.tensor_multiply(self.coproduct({(head,): Scalar.const(1)}),
                                         self._cobracket_mono(rest)).items():
            _add(out, k, c)
        return out


def vhh_normal_form(vhh: Vhh, x: dict) -> dict:
    return vhh.normal_form(x)


def vhh_verify_copoisson(coalg, max_length, max_factors=2, cy_dimension=None) -> list:
    """Check ν(x) = ν(normal_form(x)) on all products of up to max_factors
    necklaces of length ≤ max_length (three factors use length ≤ 2).
    Returns the failing products."""
    vhh = Vhh(NecklaceAlgebra(coalg, cy_dimension))
    words = vhh.nk.necklaces(max_length)
    short = [w for w in words if len(w) <= 2]
    monos = [(w,) for w in words] + list(product(words, repeat=2))
    if max_factors >= 3:
        monos += list(product(short, repeat=3))
    failures = []
    for m in monos:
        raw = vhh.cobracket({m: Scalar.const(1)})
        nf = vhh.cobracket(vhh.normal_form({m: Scalar.const(1)}))
        if raw != nf:
            failures.append(" ".join(vhh.nk.to_string(w) for w in m))
    return failures
