"""Height words over a co-Frobenius coalgebra and the Hopf algebra they span.

A height word is a product of cyclic components whose letters are pairs
(basis id, height), all heights distinct. Only the relative order of
heights matters. Two letters with adjacent heights may exchange heights at
the cost of a correction term: pairing them either merges their two
components (coefficient h) or splits their common component in two
(coefficient hbar). Straightening applies these rewrites until every word
is a PBW word: components sorted as necklaces, heights increasing along
each component and across components.

Words are tuples of components, a component is a tuple of (letter, height)
pairs, and () is the unit. An empty component is not the unit: it is the
empty necklace E, even, central and primitive. Elements are dicts {(word, p, q): coeff} for
the coefficient of h^p hbar^q word; tensors use a tuple of words in place
of the word. Signs follow the Koszul rule in the shifted letter degrees
|c| - 1.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .cyclic import _orbit_rep, rotate, rotation_sign
from .necklace import NecklaceAlgebra, UNIT, _add, _exact
from .presentations import PresentationError, UnsupportedInput
from .scalar import Scalar, reorder_sign

UNBOUNDED = 1 << 30


class MalformedWord(PresentationError):
    pass


class InvariantViolation(RuntimeError):
    pass


def _sgn(k):
    return -1 if k % 2 else 1


def word_letters(word) -> int:
    return sum(len(c) for c in word)


def word_size(word) -> int:
    """Letters plus empty components; relations never raise it."""
    return sum(len(c) or 1 for c in word)


def word_to_string(word) -> str:
    if not word:
        return "1"
    return " • ".join("[" + ",".join(f"({c},{h})" for c, h in comp) + "]" for comp in word)


def as_scalars(elem) -> dict:
    """{word: Scalar} view of an element (or {tuple of words: Scalar} of a tensor)."""
    out = {}
    for (w, p, q), c in elem.items():
        out[w] = out.get(w, Scalar()) + Scalar.monomial(p, q, c)
    return {w: s for w, s in out.items() if s}


def from_scalars(vec) -> dict:
    out = {}
    for w, s in vec.items():
        for (p, q), c in Scalar.coerce(s).terms.items():
            _add(out, (w, p, q), _exact(c))
    return out


def _scale(out, elem, c, dp=0, dq=0, order=UNBOUNDED):
    for (w, p, q), d in elem.items():
        if p + dp + q + dq <= order:
            _add(out, (w, p + dp, q + dq), c * d)


def truncate(elem, order):
    return {k: c for k, c in elem.items() if k[1] + k[2] <= order}


class HopfAlgebra:
    """Height-word Hopf algebra over the basis of one co-Frobenius coalgebra.

    HBAR_SIGN orients hbar: it multiplies every hbar in the split relation
    and in the coproduct. With +1 the cocommutator of a lift comes out as
    minus the necklace cobracket, so we use -1 (the substitution
    hbar -> -hbar, an isomorphism of the whole structure).
    """

    HBAR_SIGN = -1

    def __init__(self, coalg, cy_dimension=None):
        self.nk = NecklaceAlgebra(coalg, cy_dimension)
        if self.nk.op_degree % 2:
            raise UnsupportedInput("odd Calabi-Yau dimension: h and hbar would be odd")
        self.coalg = coalg
        self._deg = {b.id: (b.degree - 1) for b in coalg.basis}
        self._rep = {}
        self._orders = {}
        self._normal = {}
        self._counit = {}
        self._antipode = {}

    # --- words -------------------------------------------------------------

    def letter_degree(self, c) -> int:
        return self._deg[c]

    def degree(self, word) -> int:
        return sum(self._deg[c] for comp in word for c, _ in comp)

    def weight(self, word) -> int:
        return sum(self.coalg.weight(c) for comp in word for c, _ in comp)

    def _necklace(self, letters):
        if letters not in self._rep:
            _, rep, _ = _orbit_rep(letters, self.nk._t, self.nk.key)
            self._rep[letters] = rep
        return self._rep[letters]

    def _comp_key(self, comp):
        letters = tuple(c for c, _ in comp)
        return self.nk.order_key(self._necklace(letters)), tuple(h for _, h in comp)

    def canonicalize(self, raw):
        """(sign, word): heights relabeled 1..N, each component rotated to
        start at its lowest height, components sorted."""
        heights = [h for comp in raw for _, h in comp]
        if len(set(heights)) != len(heights):
            raise MalformedWord(f"repeated height in {raw!r}")
        relabel = {h: i + 1 for i, h in enumerate(sorted(heights))}
        sign = 1
        comps = []
        for comp in raw:
            comp = tuple((c, relabel[h]) for c, h in comp)
            k = min(range(len(comp)), key=lambda i: comp[i][1]) if comp else 0
            if k:
                sign *= rotation_sign([self._deg[c] for c, _ in comp], k)
                comp = rotate(comp, k)
            comps.append(comp)
        order = sorted(range(len(comps)), key=lambda i: self._comp_key(comps[i]))
        sign *= reorder_sign(order, [sum(self._deg[c] for c, _ in comp) for comp in comps])
        return sign, tuple(comps[i] for i in order)

    def element(self, raw, c=1) -> dict:
        sign, word = self.canonicalize(raw)
        return {(word, 0, 0): sign * c}

    def lift(self, necklace):
        """The PBW word of a necklace: heights 1..n along its letters."""
        return (tuple((c, i + 1) for i, c in enumerate(necklace)),)

    # --- target orders and the inversion measure ---------------------------

    def target_orders(self, word):
        """All position orders along which a PBW word would have increasing
        heights: components sorted as necklaces, each read from a rotation
        equal to its canonical necklace."""
        rots, reps = [], []
        for comp in word:
            letters = tuple(c for c, _ in comp)
            rep = self._necklace(letters)
            reps.append(rep)
            rots.append([k for k in range(len(letters)) if rotate(letters, k) == rep] or [0])
        by_rep = {}
        for i in sorted(range(len(word)), key=lambda i: self.nk.order_key(reps[i])):
            by_rep.setdefault(reps[i], []).append(i)
        groups = list(by_rep.values())
        out = []
        for ks in itertools.product(*rots):
            for perms in itertools.product(*[itertools.permutations(g) for g in groups]):
                order = []
                for g in perms:
                    for ci in g:
                        n = len(word[ci])
                        order.extend((ci, (ks[ci] + t) % n) for t in range(n))
                out.append(order)
        return out

    @staticmethod
    def inversions(word, order) -> int:
        hs = [word[ci][k][1] for ci, k in order]
        return sum(1 for i in range(len(hs)) for j in range(i + 1, len(hs)) if hs[i] > hs[j])

    def measure(self, word):
        """(d, order): the least inversion count over target orders."""
        if word not in self._orders:
            best = None
            for order in self.target_orders(word):
                d = self.inversions(word, order)
                if best is None or d < best[0]:
                    best = (d, order)
            self._orders[word] = best
        return self._orders[word]

    # --- relations ---------------------------------------------------------

    def relation_term(self, comps, lo, hi):
        """Correction term for exchanging the heights of positions lo < hi
        (lo holds the lower height): (coeff, p, q, raw word) or None."""
        (ci, pi), (cj, pj) = lo, hi
        a, b = comps[ci][pi][0], comps[cj][pj][0]
        pairing = _exact(self.coalg.pair(a, b))
        if not pairing:
            return None
        if ci != cj:
            na, nb = len(comps[ci]), len(comps[cj])
            new = [[(ci, (pi + t) % na) for t in range(1, na)] + [(cj, (pj + t) % nb) for t in range(1, nb)]]
            p, q, s0 = 1, 0, 1
        else:
            n = len(comps[ci])
            gap = (pj - pi) % n
            new = [[(ci, (pi + t) % n) for t in range(1, gap)],
                   [(ci, (pi + t) % n) for t in range(gap + 1, n)]]
            p, q, s0 = 0, 1, self.HBAR_SIGN
        new += [[(ck, t) for t in range(len(comp))] for ck, comp in enumerate(comps) if ck not in (ci, cj)]
        flat = [(ck, t) for ck, comp in enumerate(comps) for t in range(len(comp))]
        index = {x: i for i, x in enumerate(flat)}
        degs = [self._deg[comps[ck][t][0]] for ck, t in flat]
        order = [index[lo], index[hi]] + [index[x] for comp in new for x in comp]
        s = reorder_sign(order, degs)
        raw = tuple(tuple(comps[ck][t] for ck, t in comp) for comp in new)
        return s0 * s * pairing, p, q, raw

    def rewrite_step(self, comps, order, strategy="smallest"):
        """One rewrite along a fixed position order, or None if there is no
        inversion. Returns (swapped raw word, relation term or None)."""
        hs = {x: comps[x[0]][x[1]][1] for x in order}
        rank = {x: i for i, x in enumerate(order)}
        by_height = {h: x for x, h in hs.items()}
        heights = sorted(by_height)
        cands = [(h, h2) for h, h2 in zip(heights, heights[1:])
                 if rank[by_height[h2]] < rank[by_height[h]]]
        if not cands:
            return None
        h, h2 = cands[0] if strategy == "smallest" else cands[-1]
        lo, hi = by_height[h], by_height[h2]
        swapped = [list(comp) for comp in comps]
        swapped[lo[0]][lo[1]] = (swapped[lo[0]][lo[1]][0], h2)
        swapped[hi[0]][hi[1]] = (swapped[hi[0]][hi[1]][0], h)
        return tuple(tuple(c) for c in swapped), self.relation_term(comps, lo, hi)

    def _symmetry_defect(self, word, order):
        """For a word with no inversions, find another target order whose
        increasing relabeling equals -word (an odd symmetry). Returns that
        order or None."""
        for other in self.target_orders(word):
            if other == order:
                continue
            relabeled = [list(comp) for comp in word]
            for h, (ci, k) in enumerate(other, 1):
                relabeled[ci][k] = (relabeled[ci][k][0], h)
            sign, canon = self.canonicalize(tuple(tuple(c) for c in relabeled))
            if canon != word:
                raise InvariantViolation(f"target orders of {word_to_string(word)} disagree")
            if sign == -1:
                return other
        return None

    # --- straightening ------------------------------------------------------

    def normal_form(self, word, order=UNBOUNDED, strategy="smallest") -> dict:
        """PBW normal form of a canonical word, dropping terms of total
        (h, hbar)-degree above order."""
        key = (word, order, strategy)
        if key in self._normal:
            return self._normal[key]
        d, target = self.measure(word)
        out = {}
        if d == 0:
            other = self._symmetry_defect(word, target)
            if other is None:
                out = {(word, 0, 0): 1}
            else:
                # word = -word + (corrections), so word = corrections / 2
                comps = word
                terms = []
                while True:
                    step = self.rewrite_step(comps, other, strategy)
                    if step is None:
                        break
                    comps, term = step
                    if term:
                        terms.append(term)
                sign, canon = self.canonicalize(comps)
                if canon != word or sign != -1:
                    raise InvariantViolation(f"symmetry of {word_to_string(word)} not odd")
                for c, p, q, raw in terms:
                    self._add_term(out, raw, Fraction(c, 2), p, q, order, strategy)
        else:
            swapped, term = self.rewrite_step(word, target, strategy)
            sign, canon = self.canonicalize(swapped)
            if self.measure(canon)[0] >= d:
                raise InvariantViolation(f"inversion measure did not drop at {word_to_string(word)}")
            _scale(out, self.normal_form(canon, order, strategy), sign)
            if term:
                c, p, q, raw = term
                self._add_term(out, raw, c, p, q, order, strategy)
        out = {k: _exact(v) for k, v in out.items()}
        self._normal[key] = out
        return out

    def _add_term(self, out, raw, c, p, q, order, strategy):
        if p + q > order:
            return
        sign, canon = self.canonicalize(raw)
        _scale(out, self.normal_form(canon, order - p - q, strategy), sign * c, p, q, order)

    def straighten(self, elem, order=UNBOUNDED, strategy="smallest") -> dict:
        """Normal form of an element whose words may be raw."""
        out = {}
        for (w, p, q), c in elem.items():
            self._add_term(out, w, c, p, q, order, strategy)
        return out

    def is_pbw(self, word) -> bool:
        return self.normal_form(word) == {(word, 0, 0): 1}

    def pbw_basis(self, max_letters):
        """PBW words of size at most max_letters: sorted products of
        necklaces (the empty one included) without repeated odd factors."""
        necks = sorted([UNIT] + self.nk.necklaces(max_letters), key=self.nk.order_key)
        out = [()]

        def grow(start, prefix, used):
            for i in range(start, len(necks)):
                x = necks[i]
                if used + (len(x) or 1) > max_letters:
                    continue
                odd = self.nk.lie_degree(x) % 2
                if odd and prefix and prefix[-1] == x:
                    continue
                nxt = prefix + [x]
                raw, h = [], 0
                for y in nxt:
                    raw.append(tuple((c, h + k + 1) for k, c in enumerate(y)))
                    h += len(y)
                out.append(self.canonicalize(tuple(raw))[1])
                grow(i + 1 if odd else i, nxt, used + (len(x) or 1))
        grow(0, [], 0)
        return out

    def to_symmetric(self, word) -> tuple:
        """Heightless image of a PBW word: its sorted tuple of necklaces."""
        return tuple(tuple(c for c, _ in comp) for comp in word)

    # --- product and differential ------------------------------------------

    def multiply_words(self, x, y):
        """Raw product: heights of y shifted above those of x."""
        top = max((h for comp in x for _, h in comp), default=0)
        low = min((h for comp in y for _, h in comp), default=0)
        shift = 1 + top - low
        return x + tuple(tuple((c, h + shift) for c, h in comp) for comp in y)

    def product(self, a, b, order=UNBOUNDED) -> dict:
        out = {}
        for (x, p, q), c in a.items():
            for (y, p2, q2), d in b.items():
                if p + p2 + q + q2 <= order:
                    self._add_term(out, self.multiply_words(x, y), c * d, p + p2, q + q2, order, "smallest")
        return out

    def differential_raw(self, word) -> dict:
        """b on one word, before straightening: split one letter by the
        coproduct, raising every higher height by one."""
        out = {}
        before = 0
        for ci, comp in enumerate(word):
            for k, (c, h) in enumerate(comp):
                for (a, b), d in self.coalg.coproduct.get(c, {}).items():
                    s = _sgn(before + self.coalg.degree(a))
                    bump = lambda comp2: tuple((x, y + 1 if y > h else y) for x, y in comp2)
                    new = [bump(cc) for cc in word]
                    new[ci] = new[ci][:k] + ((a, h), (b, h + 1)) + new[ci][k + 1:]
                    _add(out, (tuple(new), 0, 0), s * _exact(d))
                before += self._deg[c]
        return out

    def differential(self, elem) -> dict:
        out = {}
        for (w, p, q), c in elem.items():
            for (raw, _, _), d in self.differential_raw(w).items():
                self._add_term(out, raw, c * d, p, q, UNBOUNDED, "smallest")
        return out

    # --- colorings and the coproduct ----------------------------------------

    @staticmethod
    def _next(word, u):
        ci, k = u
        return ci, (k + 1) % len(word[ci])

    def enumerate_colorings(self, word, m):
        """All m-colorings (I, phi, c) whose pairing product is nonzero.

        I is a frozenset of positions (component, index), phi a dict on I,
        c a dict on all positions with values 1..m. An empty component ci
        is colored as a whole, under the key (ci, None).
        """
        if m < 2:
            raise ValueError("colorings need m >= 2")
        positions = [(ci, k) for ci, comp in enumerate(word) for k in range(len(comp))]
        empties = [(ci, None) for ci, comp in enumerate(word) if not comp]
        letter = {u: word[u[0]][u[1]][0] for u in positions}
        height = {u: word[u[0]][u[1]][1] for u in positions}
        out = []
        for phi in self._matchings(positions, letter):
            parent = {u: u for u in positions + empties}

            def find(u):
                while parent[u] != u:
                    parent[u] = parent[parent[u]]
                    u = parent[u]
                return u

            for u in positions:
                parent[find(u)] = find(self._next(word, phi[u]) if u in phi else self._next(word, u))
            less = []
            for u, v in phi.items():
                if height[u] < height[v]:
                    less.append((find(u), find(v)))
            if any(a == b for a, b in less):
                continue
            classes = sorted({find(u) for u in positions + empties}, key=repr)
            for colors in self._assign(classes, less, m):
                c = {u: colors[find(u)] for u in positions + empties}
                out.append((frozenset(phi), dict(phi), c))
        return out

    def _matchings(self, positions, letter):
        """Partial fixed-point-free involutions pairing letters with nonzero pairing."""
        def rec(rest):
            if not rest:
                yield {}
                return
            u, rest = rest[0], rest[1:]
            yield from rec(rest)
            for i, v in enumerate(rest):
                if self.coalg.pair(letter[u], letter[v]):
                    for phi in rec(rest[:i] + rest[i + 1:]):
                        yield {**phi, u: v, v: u}
        yield from rec(list(positions))

    @staticmethod
    def _assign(classes, less, m):
        """Color assignments with color[a] < color[b] for every (a, b) in less."""
        out = []
        colors = {}

        def rec(i):
            if i == len(classes):
                out.append(dict(colors))
                return
            cl = classes[i]
            for col in range(1, m + 1):
                colors[cl] = col
                if all(colors[a] < colors[b] for a, b in less if a in colors and b in colors):
                    rec(i + 1)
                del colors[cl]
        rec(0)
        return out

    def coloring_summand(self, word, coloring, m):
        """(coeff, p, q, factors) of one coloring; factors are raw words.

        Each orbit of f becomes one output component made of its unpaired
        letters; an orbit of paired letters only gives an empty component.
        """
        I, phi, c = coloring
        positions = [(ci, k) for ci, comp in enumerate(word) for k in range(len(comp))]
        f = {u: self._next(word, phi[u]) if u in phi else self._next(word, u) for u in positions}
        seen, orbits = set(), []
        for u in positions:
            if u in seen:
                continue
            orbit = []
            while u not in seen:
                seen.add(u)
                orbit.append(u)
                u = f[u]
            # start at an unpaired letter so the g-orbit reads in order
            starts = [i for i, v in enumerate(orbit) if v not in I]
            if starts:
                orbit = orbit[starts[0]:] + orbit[:starts[0]]
            orbits.append((c[orbit[0]], [v for v in orbit if v not in I]))
        orbits += [(c[(ci, None)], []) for ci, comp in enumerate(word) if not comp]
        n_excess = len(word) - len(orbits)
        if (len(I) + 2 * n_excess) % 4 or (len(I) - 2 * n_excess) % 4:
            raise InvariantViolation(f"non-integral exponent for {word_to_string(word)}, coloring {coloring}")
        p, q = (len(I) + 2 * n_excess) // 4, (len(I) - 2 * n_excess) // 4
        if p < 0 or q < 0:
            raise InvariantViolation(f"negative exponent for {word_to_string(word)}, coloring {coloring}")
        coeff = self.HBAR_SIGN ** q
        head = []
        for u in positions:
            v = phi.get(u)
            if v is not None and c[u] < c[v]:
                coeff *= _exact(self.coalg.pair(word[u[0]][u[1]][0], word[v[0]][v[1]][0]))
                head += [u, v]
        factors = [[] for _ in range(m)]
        for col, orb in orbits:
            factors[col - 1].append(orb)
        index = {u: i for i, u in enumerate(positions)}
        degs = [self._deg[word[ci][k][0]] for ci, k in positions]
        order = [index[u] for u in head] + [index[u] for fac in factors for orb in fac for u in orb]
        coeff *= reorder_sign(order, degs)
        raw = tuple(tuple(tuple(word[ci][k] for ci, k in orb) for orb in fac) for fac in factors)
        return coeff, p, q, raw

    def coproduct_summands(self, word, m=2):
        return [(col, *self.coloring_summand(word, col, m)) for col in self.enumerate_colorings(word, m)]

    def coproduct_word(self, word, m=2, order=UNBOUNDED) -> dict:
        """Delta_m of one word, each tensor factor straightened."""
        out = {}
        for _, coeff, p, q, raw in self.coproduct_summands(word, m):
            if p + q > order:
                continue
            parts = [{((), p, q): coeff}]
            for fac in raw:
                sign, canon = self.canonicalize(fac)
                nf = self.normal_form(canon, order)
                nxt = []
                for part in parts:
                    acc = {}
                    for (ws, p1, q1), c1 in part.items():
                        for (w, p2, q2), c2 in nf.items():
                            if p1 + p2 + q1 + q2 <= order:
                                _add(acc, (ws + (w,), p1 + p2, q1 + q2), sign * c1 * c2)
                    nxt.append(acc)
                parts = nxt
            for k, c in parts[0].items():
                _add(out, k, c)
        return out

    def coproduct(self, elem, m=2, order=UNBOUNDED) -> dict:
        out = {}
        for (w, p, q), c in elem.items():
            _scale(out, self.coproduct_word(w, m, order), c, p, q, order)
        return out

    # --- tensors -----------------------------------------------------------

    def tensor_apply(self, tensor, slot, fn) -> dict:
        """Apply a linear map (word -> element, even or odd) to one slot.

        fn returns (element, degree of the map)."""
        out = {}
        for (ws, p, q), c in tensor.items():
            img, deg = fn(ws[slot])
            s = _sgn(deg * sum(self.degree(w) for w in ws[:slot]))
            for (w, p2, q2), d in img.items():
                _add(out, (ws[:slot] + (w,) + ws[slot + 1:], p + p2, q + q2), s * c * d)
        return out

    def tensor_expand(self, tensor, slot, m=2) -> dict:
        """Replace slot by its m-fold coproduct."""
        out = {}
        for (ws, p, q), c in tensor.items():
            for (parts, p2, q2), d in self.coproduct_word(ws[slot], m).items():
                _add(out, (ws[:slot] + parts + ws[slot + 1:], p + p2, q + q2), c * d)
        return out

    def tensor_product(self, s, t) -> dict:
        """(x1 ⊗ x2)(y1 ⊗ y2) = ± x1 y1 ⊗ x2 y2, slotwise with Koszul signs."""
        out = {}
        for (xs, p, q), c in s.items():
            for (ys, p2, q2), d in t.items():
                sign = 1
                for i in range(len(xs)):
                    sign *= _sgn(self.degree(ys[i]) * sum(self.degree(x) for x in xs[i + 1:]))
                parts = [{((), 0, 0): 1}]
                for x, y in zip(xs, ys):
                    nf = self.product({(x, 0, 0): 1}, {(y, 0, 0): 1})
                    acc = {}
                    for (ws, a1, b1), e1 in parts[0].items():
                        for (w, a2, b2), e2 in nf.items():
                            _add(acc, (ws + (w,), a1 + a2, b1 + b2), e1 * e2)
                    parts = [acc]
                for (ws, a, b), e in parts[0].items():
                    _add(out, (ws, p + p2 + a, q + q2 + b), sign * c * d * e)
        return out

    def flip(self, tensor) -> dict:
        out = {}
        for ((x, y), p, q), c in tensor.items():
            _add(out, ((y, x), p, q), _sgn(self.degree(x) * self.degree(y)) * c)
        return out

    # --- counit and antipode -----------------------------------------------

    def counit_word(self, word) -> dict:
        """epsilon(word) as {(p, q): coeff}, from (epsilon ⊗ id) Delta = id."""
        if word in self._counit:
            return self._counit[word]
        if not word:
            return {(0, 0): 1}
        rest = {}
        for ((w1, w2), p, q), c in self.coproduct_word(word).items():
            if w1 == word and w2 == () and (p, q) == (0, 0):
                continue
            for (p2, q2), e in self.counit_word(w1).items():
                _add(rest, (w2, p + p2, q + q2), c * e)
        _add(rest, (word, 0, 0), -1)
        if any(w for w, _, _ in rest):
            raise InvariantViolation(f"counit of {word_to_string(word)} is not a scalar")
        out = {(p, q): -c for (_, p, q), c in rest.items()}
        self._counit[word] = out
        return out

    def counit(self, elem) -> dict:
        out = {}
        for (w, p, q), c in elem.items():
            for (p2, q2), e in self.counit_word(w).items():
                _add(out, ((), p + p2, q + q2), c * e)
        return out

    def antipode_word(self, word) -> dict:
        """S(word) from m (S ⊗ id) Delta = epsilon, recursively."""
        if word in self._antipode:
            return self._antipode[word]
        out = {((), p, q): c for (p, q), c in self.counit_word(word).items()}
        if word:
            for ((w1, w2), p, q), c in self.coproduct_word(word).items():
                if w1 == word and w2 == () and (p, q) == (0, 0):
                    continue
                prod = self.product(self.antipode_word(w1), {(w2, 0, 0): 1})
                _scale(out, prod, -c, p, q)
        self._antipode[word] = out
        return out

    def antipode(self, elem) -> dict:
        out = {}
        for (w, p, q), c in elem.items():
            _scale(out, self.antipode_word(w), c, p, q)
        return out

    def multiply_tensor(self, tensor) -> dict:
        out = {}
        for ((x, y), p, q), c in tensor.items():
            _scale(out, self.product({(x, 0, 0): 1}, {(y, 0, 0): 1}), c, p, q)
        return out


# --- verification ------------------------------------------------------------

def _diff(a, b):
    out = dict(a)
    for k, c in b.items():
        _add(out, k, -c)
    return out


def raw_words(hopf, max_letters, letters=None):
    """Canonical words (all height orders) with 1..max_letters letters."""
    letters = letters or [b.id for b in hopf.coalg.basis]
    out = set()
    for n in range(1, max_letters + 1):
        for seq in itertools.product(letters, repeat=n):
            for cuts in itertools.product([0, 1], repeat=n - 1):
                comps, cur = [], [seq[0]]
                for x, cut in zip(seq[1:], cuts):
                    if cut:
                        comps.append(cur)
                        cur = []
                    cur.append(x)
                comps.append(cur)
                for hs in itertools.permutations(range(1, n + 1)):
                    it = iter(hs)
                    raw = tuple(tuple((c, next(it)) for c in comp) for comp in comps)
                    out.add(hopf.canonicalize(raw)[1])
    return sorted(out, key=lambda w: (word_letters(w), repr(w)))


def _symmetric_dims(hopf, max_letters):
    """dim of the symmetric algebra on necklaces per (size, weight, degree),
    by the generating function prod (1 + x) over odd and 1/(1 - x) over even."""
    nk = hopf.nk
    series = {(0, 0, 0): 1}
    for x in [UNIT] + nk.necklaces(max_letters):
        n, w = len(x) or 1, sum(hopf.coalg.weight(c) for c in x)
        d = sum(hopf.letter_degree(c) for c in x)
        odd = d % 2
        nxt = dict(series)
        for (l0, w0, d0), c in series.items():
            k = 1
            while l0 + k * n <= max_letters and (k == 1 or not odd):
                key = (l0 + k * n, w0 + k * w, d0 + k * d)
                nxt[key] = nxt.get(key, 0) + c
                k += 1
        series = nxt
    return series


def check_commutators(hopf, max_length):
    """(x̃ỹ - ±ỹx̃)/h against {x,y} mod (h, hbar); returns failures."""
    nk = hopf.nk
    necks = nk.necklaces(max_length)
    bad = []
    for x in necks:
        for y in necks:
            xt, yt = {(hopf.lift(x), 0, 0): 1}, {(hopf.lift(y), 0, 0): 1}
            s = _sgn(nk.lie_degree(x) * nk.lie_degree(y))
            comm = _diff(hopf.product(xt, yt, order=1), {k: s * c for k, c in hopf.product(yt, xt, order=1).items()})
            got, stray = {}, []
            for (w, p, q), c in comm.items():
                if (p, q) == (1, 0) and len(w) == 1:
                    _add(got, hopf.to_symmetric(w)[0], c)
                else:
                    stray.append((w, p, q))
            want = nk.bracket({x: 1}, {y: 1})
            if stray or got != want:
                bad.append({"x": nk.to_string(x), "y": nk.to_string(y),
                            "got": {nk.to_string(k): str(v) for k, v in got.items()},
                            "want": {nk.to_string(k): str(v) for k, v in want.items()},
                            "stray": len(stray)})
    return bad


def check_cocommutators(hopf, max_length):
    """(Delta - Delta^op)(x̃)/hbar against delta(x) mod (h, hbar)."""
    nk = hopf.nk
    bad = []
    for x in nk.necklaces(max_length):
        d = hopf.coproduct_word(hopf.lift(x), order=1)
        co = _diff(d, hopf.flip(d))
        got, stray = {}, []
        for ((w1, w2), p, q), c in co.items():
            if (p, q) == (0, 1) and len(w1) == 1 and len(w2) == 1:
                _add(got, (hopf.to_symmetric(w1)[0], hopf.to_symmetric(w2)[0]), c)
            else:
                stray.append((w1, w2, p, q))
        want = nk.cobracket({x: 1})
        if stray or got != want:
            bad.append({"x": nk.to_string(x),
                        "got": {f"{nk.to_string(a)} {nk.to_string(b)}": str(v) for (a, b), v in got.items()},
                        "want": {f"{nk.to_string(a)} {nk.to_string(b)}": str(v) for (a, b), v in want.items()},
                        "stray": len(stray)})
    return bad


def verify_quantization(coalg, max_letters, cy_dimension=None, necklace_length=None) -> dict:
    """Hopf axioms, relation compatibility, PBW and the quantization
    conditions on words with at most max_letters letters.

    Each entry is a list of witnesses (empty when the check passes);
    "pbw_dimensions" maps grading keys to (PBW count, symmetric count).
    """
    hopf = HopfAlgebra(coalg, cy_dimension)
    basis = hopf.pbw_basis(max_letters)
    words = [w for w in basis if w]
    one = lambda w: {(w, 0, 0): 1}
    report = {k: [] for k in ("straightening", "pbw_fixed", "coassociativity", "bialgebra", "counit",
                              "antipode", "differential_square", "derivation", "coderivation",
                              "relations", "degree", "commutator", "cocommutator")}
    ws = word_to_string

    # straightening is idempotent onto PBW words, degree-preserving
    raws = raw_words(hopf, max_letters)
    for w in raws:
        nf = hopf.normal_form(w)
        for (v, p, q), c in nf.items():
            if not hopf.is_pbw(v):
                report["straightening"].append(ws(w))
            if hopf.degree(v) + (p + q) * (hopf.nk.n - 2) != hopf.degree(w):
                report["degree"].append(ws(w))
    for w in basis:
        if not hopf.is_pbw(w):
            report["pbw_fixed"].append(ws(w))
    images = [hopf.to_symmetric(w) for w in basis]
    pbw_independent = len(set(images)) == len(images)

    counts = {}
    for w in basis:
        key = (word_size(w), hopf.weight(w), hopf.degree(w))
        counts[key] = counts.get(key, 0) + 1
    sym = _symmetric_dims(hopf, max_letters)
    dims = {f"{k}": (counts.get(k, 0), sym.get(k, 0)) for k in sorted(set(counts) | set(sym))}
    dims_match = all(a == b for a, b in dims.values())

    for w in words:
        d2 = hopf.coproduct_word(w)
        left = hopf.tensor_expand(d2, 0)
        right = hopf.tensor_expand(d2, 1)
        d3 = hopf.coproduct_word(w, 3)
        if left != d3 or right != d3:
            report["coassociativity"].append(ws(w))
        # counit on both sides
        lhs = {}
        rhs = {}
        for ((a, b), p, q), c in d2.items():
            for (p2, q2), e in hopf.counit_word(a).items():
                _add(lhs, (b, p + p2, q + q2), c * e)
            for (p2, q2), e in hopf.counit_word(b).items():
                _add(rhs, (a, p + p2, q + q2), c * e)
        if lhs != one(w) or rhs != one(w):
            report["counit"].append(ws(w))
        # antipode on both sides
        eps = hopf.counit(one(w))
        s_left = hopf.multiply_tensor(hopf.tensor_apply(d2, 0, lambda v: (hopf.antipode_word(v), 0)))
        s_right = hopf.multiply_tensor(hopf.tensor_apply(d2, 1, lambda v: (hopf.antipode_word(v), 0)))
        if s_left != eps or s_right != eps:
            report["antipode"].append(ws(w))
        # differential
        bw = hopf.differential(one(w))
        if hopf.differential(bw):
            report["differential_square"].append(ws(w))
        lhs = hopf.coproduct(bw)
        rhs = hopf.tensor_apply(d2, 0, lambda v: (hopf.differential(one(v)), 1))
        for k, c in hopf.tensor_apply(d2, 1, lambda v: (hopf.differential(one(v)), 1)).items():
            _add(rhs, k, c)
        if lhs != rhs:
            report["coderivation"].append(ws(w))

    for x in basis:
        for y in basis:
            if word_size(x) + word_size(y) > max_letters:
                continue
            xy = hopf.product(one(x), one(y))
            if hopf.coproduct(xy) != hopf.tensor_product(hopf.coproduct_word(x), hopf.coproduct_word(y)):
                report["bialgebra"].append(f"{ws(x)} ; {ws(y)}")
            lhs = hopf.differential(xy)
            rhs = hopf.product(hopf.differential(one(x)), one(y))
            s = _sgn(hopf.degree(x))
            for k, c in hopf.product(one(x), hopf.differential(one(y))).items():
                _add(rhs, k, s * c)
            if lhs != rhs:
                report["derivation"].append(f"{ws(x)} ; {ws(y)}")

    # b and Delta are well defined on the quotient: raw word vs its normal form
    for w in raws:
        nf = hopf.normal_form(w)
        if hopf.differential(one(w)) != hopf.differential(nf):
            report["relations"].append(f"b {ws(w)}")
        if hopf.coproduct_word(w) != hopf.coproduct(nf):
            report["relations"].append(f"Delta {ws(w)}")

    length = necklace_length if necklace_length is not None else max_letters
    report["commutator"] = check_commutators(hopf, length)
    report["cocommutator"] = check_cocommutators(hopf, length)
    report["pbw_independent"] = pbw_independent
    report["pbw_dimensions"] = dims
    report["pbw_dimensions_match"] = dims_match
    report["basis_size"] = len(basis)
    return report


def quantization_passes(report) -> bool:
    for k, v in report.items():
        if k in ("pbw_dimensions", "basis_size"):
            continue
        if isinstance(v, bool):
            if not v:
                return False
        elif v:
            return False
    return True
