"""Exact coefficients in Q[h, hbar] and the Koszul sign rule."""

from __future__ import annotations

import re
from fractions import Fraction

# session-level Calabi-Yau dimension; h and hbar carry degree n - 2
CY_DIMENSION = 2


class Scalar:
    """Polynomial in h, hbar with rational coefficients.

    Stored as {(p, q): Fraction} with no zero coefficients, where (p, q)
    are the powers of h and hbar.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for key, c in terms.items():
                c = Fraction(c)
                if c:
                    p, q = key
                    if p < 0 or q < 0:
                        raise ValueError(f"negative exponent in {key}")
                    clean[(int(p), int(q))] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def const(cls, c) -> Scalar:
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, p: int, q: int, c=1) -> Scalar:
        return cls({(p, q): c})

    @staticmethod
    def coerce(x) -> Scalar:
        if isinstance(x, Scalar):
            return x
        return Scalar.const(x)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar.const(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __add__(self, other):
        other = Scalar.coerce(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return Scalar(out)

    __radd__ = __add__

    def __neg__(self):
        return Scalar({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-Scalar.coerce(other))

    def __rsub__(self, other):
        return Scalar.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Scalar({k: c * other for k, c in self.terms.items()})
        other = Scalar.coerce(other)
        out = {}
        for (p1, q1), c1 in self.terms.items():
            for (p2, q2), c2 in other.terms.items():
                k = (p1 + p2, q1 + q2)
                out[k] = out.get(k, 0) + c1 * c2
        return Scalar(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Scalar.const(1)
        for _ in range(n):
            out = out * self
        return out

    def coefficient(self, p: int, q: int) -> Fraction:
        return self.terms.get((p, q), Fraction(0))

    def divide_monomial(self, p: int, q: int) -> Scalar:
        """Exact division by h^p hbar^q; raises if a term is not divisible."""
        out = {}
        for (a, b), c in self.terms.items():
            if a < p or b < q:
                raise ValueError(f"{self} is not divisible by h^{p}*hbar^{q}")
            out[(a - p, b - q)] = c
        return Scalar(out)

    def degree(self, n: int | None = None) -> set:
        """Homological degrees of the monomials present."""
        n = CY_DIMENSION if n is None else n
        return {(p + q) * (n - 2) for p, q in self.terms}

    def __str__(self):
        return to_string(self)

    def __repr__(self):
        return f"Scalar({to_string(self)!r})"


def reduce_mod_params(s) -> Fraction:
    """Coefficient of h^0 hbar^0."""
    return Scalar.coerce(s).coefficient(0, 0)


def to_string(s: Scalar) -> str:
    if not s.terms:
        return "0"
    parts = []
    for (p, q) in sorted(s.terms):
        parts.append(f"{s.terms[(p, q)]}*h^{p}*hbar^{q}")
    return " + ".join(parts)


_TERM = re.compile(r"^(-?\d+(?:/\d+)?)\*h\^(\d+)\*hbar\^(\d+)$")


def parse_scalar(text: str) -> Scalar:
    """Inverse of to_string. Also accepts a bare rational like "3/4"."""
    text = text.strip()
    if text == "0":
        return Scalar()
    terms = {}
    for part in text.split(" + "):
        part = part.strip()
        m = _TERM.match(part)
        if m:
            key = (int(m.group(2)), int(m.group(3)))
            if key in terms:
                raise ValueError(f"repeated monomial in {text!r}")
            terms[key] = Fraction(m.group(1))
        else:
            try:
                c = Fraction(part)
            except ValueError:
                raise ValueError(f"cannot parse scalar term {part!r}") from None
            terms[(0, 0)] = terms.get((0, 0), 0) + c
    return Scalar(terms)


def koszul_sign(permutation, degrees) -> int:
    """Sign of moving the item at position i to position permutation[i].

    Product over inversions (i < j, permutation[i] > permutation[j]) of
    (-1)^(degrees[i] * degrees[j]).
    """
    k = len(permutation)
    if len(degrees) != k:
        raise ValueError(f"permutation has length {k} but {len(degrees)} degrees given")
    if sorted(permutation) != list(range(k)):
        raise ValueError(f"{list(permutation)} is not a permutation of 0..{k - 1}")
    odd = [i for i in range(k) if degrees[i] % 2]
    sign = 1
    for x in range(len(odd)):
        i = odd[x]
        for j in odd[x + 1:]:
            if permutation[i] > permutation[j]:
                sign = -sign
    return sign


def reorder_sign(order, degrees) -> int:
    """Sign for producing the sequence [items[o] for o in order].

    Convenience wrapper: order lists old positions in their new order.
    """
    perm = [0] * len(order)
    for new, old in enumerate(order):
        perm[old] = new
    return koszul_sign(perm, degrees)
