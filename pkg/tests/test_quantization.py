import random

import pytest
from hypothesis import given, settings, strategies as st

import coloring_oracle as oracle
from koszulcy.presentations import QuiverSpec, UnsupportedInput, preprojective_from_quiver
from koszulcy.quantization import (HopfAlgebra, MalformedWord, check_commutators, quantization_passes,
                                   raw_words, verify_quantization, word_to_string)

E = ((),)


def one(w):
    return {(w, 0, 0): 1}


@pytest.fixture(scope="module")
def hopf(jordan):
    return HopfAlgebra(jordan)


def random_word(rng, letters, n):
    seq = [rng.choice(letters) for _ in range(n)]
    heights = rng.sample(range(1, 10 * n + 1), n)
    comps, cur = [], []
    for c, hgt in zip(seq, heights):
        cur.append((c, hgt))
        if rng.random() < 0.4:
            comps.append(tuple(cur))
            cur = []
    if cur:
        comps.append(tuple(cur))
    return tuple(comps)


# --- words ------------------------------------------------------------------

def test_canonicalize_examples(hopf):
    assert hopf.canonicalize(((("a", 7),),)) == (1, ((("a", 1),),))
    assert hopf.canonicalize(((("a", 5), ("a*", 2)),)) == (1, ((("a*", 1), ("a", 2)),))


def test_canonicalize_idempotent(hopf):
    rng = random.Random(7)
    letters = [b.id for b in hopf.coalg.basis]
    for _ in range(500):
        w = random_word(rng, letters, rng.randint(1, 6))
        s, c = hopf.canonicalize(w)
        assert hopf.canonicalize(c) == (1, c)


def test_repeated_height_rejected(hopf):
    with pytest.raises(MalformedWord):
        hopf.canonicalize(((("a", 1), ("a*", 1)),))


def test_word_to_string():
    assert word_to_string(()) == "1"
    assert word_to_string(((("a", 1),), (("a*", 2),))) == "[(a,1)] • [(a*,2)]"


def test_odd_dimension_unsupported(dual_numbers):
    with pytest.raises(UnsupportedInput):
        HopfAlgebra(dual_numbers)


# --- straightening -------------------------------------------------------------

def test_split_and_merge_examples(hopf):
    # split: both arcs empty, two copies of the empty necklace
    assert hopf.straighten(one(((("a", 2), ("a*", 1)),))) == {
        (((("a", 1), ("a*", 2)),), 0, 0): 1, (((), ()), 0, 1): 1}
    # merge: the merged component is empty
    assert hopf.straighten(one(((("a", 2),), (("a*", 1),)))) == {
        (((("a", 1),), (("a*", 2),)), 0, 0): 1, (E, 1, 0): -1}
    w = ((("a", 1), ("a*", 2)),)
    assert hopf.normal_form(w) == one(w)


def test_straightening_strategies_agree(hopf):
    rng = random.Random(11)
    letters = [b.id for b in hopf.coalg.basis]
    for _ in range(300):
        _, w = hopf.canonicalize(random_word(rng, letters, rng.randint(1, 5)))
        assert hopf.normal_form(w, strategy="smallest") == hopf.normal_form(w, strategy="largest")


def test_three_letter_reversal_confluent(hopf):
    # every three-letter word whose target order reads heights 3, 2, 1
    for w in raw_words(hopf, 3):
        if len([c for comp in w for c in comp]) != 3:
            continue
        d, order = hopf.measure(w)
        if d == 3:
            assert hopf.normal_form(w, strategy="smallest") == hopf.normal_form(w, strategy="largest")


def test_measure_drops_each_step(hopf):
    rng = random.Random(3)
    letters = [b.id for b in hopf.coalg.basis]
    for _ in range(200):
        _, w = hopf.canonicalize(random_word(rng, letters, rng.randint(2, 5)))
        d, order = hopf.measure(w)
        if d:
            swapped, _ = hopf.rewrite_step(w, order)
            assert hopf.measure(hopf.canonicalize(swapped)[1])[0] < d


def test_normal_forms_are_pbw(hopf):
    for w in raw_words(hopf, 3):
        for (v, _, _), _ in hopf.normal_form(w).items():
            assert hopf.is_pbw(v)


def test_truncation(hopf):
    w = hopf.canonicalize(((("a", 2), ("a*", 1)),))[1]
    assert hopf.normal_form(w, order=0) == {(((("a", 1), ("a*", 2)),), 0, 0): 1}


class ZeroPairing:
    """A coalgebra seen through a pairing that vanishes identically."""

    def __init__(self, coalg):
        self._coalg = coalg

    def __getattr__(self, name):
        return getattr(self._coalg, name)

    def pair(self, x, y):
        return 0


@settings(max_examples=80, deadline=None)
@given(st.randoms(use_true_random=False))
def test_zero_pairing_gives_symmetric_algebra(jordan, rng):
    hopf = HopfAlgebra(ZeroPairing(jordan))
    letters = [b.id for b in jordan.basis]
    _, x = hopf.canonicalize(random_word(rng, letters, rng.randint(1, 3)))
    _, y = hopf.canonicalize(random_word(rng, letters, rng.randint(1, 3)))
    xy = hopf.product(one(x), one(y))
    yx = hopf.product(one(y), one(x))
    assert all((p, q) == (0, 0) for _, p, q in xy)
    sign = -1 if hopf.degree(x) * hopf.degree(y) % 2 else 1
    assert xy == {k: sign * c for k, c in yx.items()}


def test_zero_pairing_commutators_vanish(jordan):
    assert check_commutators(HopfAlgebra(ZeroPairing(jordan)), 2) == []


# --- product and differential -------------------------------------------------

def test_product_example(hopf):
    assert hopf.product(one(((("a", 1),),)), one(((("a*", 1),),))) == one(((("a", 1),), (("a*", 2),)))
    x = one(((("a", 1),),))
    assert hopf.product(x, one(())) == x == hopf.product(one(()), x)


def test_differential_of_o(hopf):
    raw = {word_to_string(w): c for (w, _, _), c in hopf.differential_raw(((("o", 1),),)).items()}
    assert raw == {"[(o,1),(e,2)]": 1, "[(a,1),(a*,2)]": -1, "[(a*,1),(a,2)]": 1, "[(e,1),(o,2)]": 1}
    # the four terms cancel in the quotient
    assert hopf.differential(one(((("o", 1),),))) == {}


def test_differential_squares_to_zero(hopf):
    for w in hopf.pbw_basis(3):
        assert hopf.differential(hopf.differential(one(w))) == {}


# --- colorings ----------------------------------------------------------------

def test_coloring_counts(hopf):
    assert len(hopf.enumerate_colorings(((("a", 1),),), 2)) == 2
    cols = hopf.enumerate_colorings(((("a", 1), ("a*", 2)),), 2)
    assert len(cols) == 3
    paired = [c for c in cols if c[0]]
    assert len(paired) == 1 and paired[0][2] == {(0, 0): 1, (0, 1): 2}


def test_zero_pairing_letters_have_no_pairs(hopf):
    w = ((("a", 1), ("a", 2)), (("a", 3),))
    assert all(not I for I, _, _ in hopf.enumerate_colorings(w, 3))


def _key(col):
    I, phi, c = col
    return tuple(sorted(I)), tuple(sorted(phi.items())), tuple(sorted(c.items()))


@pytest.mark.parametrize("m", [2, 3])
def test_colorings_match_brute_force(hopf, m):
    limit = 4 if m == 2 else 3
    for w in raw_words(hopf, limit):
        got = sorted(map(_key, hopf.enumerate_colorings(w, m)))
        want = sorted(map(_key, oracle.colorings(hopf.coalg, w, m)))
        assert got == want, word_to_string(w)


def test_colorings_match_brute_force_six_letters(hopf):
    rng = random.Random(5)
    for _ in range(15):
        _, w = hopf.canonicalize(random_word(rng, ["a", "a*", "e", "o"], 6))
        got = sorted(map(_key, hopf.enumerate_colorings(w, 2)))
        want = sorted(map(_key, oracle.colorings(hopf.coalg, w, 2)))
        assert got == want, word_to_string(w)


def test_summands_match_brute_force(hopf):
    # a and a* are even after the shift, so no Koszul signs: the coefficient is
    # the pairing product times the hbar orientation
    for w in raw_words(hopf, 4, letters=["a", "a*"]):
        for col in hopf.enumerate_colorings(w, 2):
            coeff, p, q, raw = hopf.coloring_summand(w, col, 2)
            eps, p2, q2, factors = oracle.summand(hopf.coalg, w, col, 2)
            assert (p, q) == (p2, q2)
            assert coeff == eps * hopf.HBAR_SIGN ** q
            for got, want in zip(raw, factors):
                # the oracle drops orbits with no unpaired letter; they are E here
                got = [comp for comp in got if comp]
                assert hopf.canonicalize(tuple(got)) == hopf.canonicalize(tuple(want))


def test_two_component_cross_pairs_summand(hopf):
    # x1 pairs with y3 and x3 with y1, h(x1) < h(y3), h(x3) > h(y1); the odd
    # letters e, o in the middle exercise the Koszul sign
    x = (("a", 1), ("e", 2), ("a", 5), ("a", 6))
    y = (("a*", 3), ("o", 4), ("a*", 7), ("a", 8))
    I = frozenset([(0, 0), (1, 2), (0, 2), (1, 0)])
    hits = [(coeff, p, q, raw) for col, coeff, p, q, raw in hopf.coproduct_summands((x, y), 2)
            if col[0] == I and col[1][(0, 0)] == (1, 2)]
    assert len(hits) == 1
    coeff, p, q, (left, right) = hits[0]
    assert (p, q) == (1, 1)
    assert abs(coeff) == 1
    assert left == ((y[3], x[3]),)
    assert right == ((x[1], y[1]),)


# --- coproduct, counit, antipode -------------------------------------------------

def test_coproduct_examples(hopf):
    a = ((("a", 1),),)
    assert hopf.coproduct_word(a) == {((a, ()), 0, 0): 1, (((), a), 0, 0): 1}
    X = ((("a", 1), ("a*", 2)),)
    assert hopf.coproduct_word(X) == {((X, ()), 0, 0): 1, (((), X), 0, 0): 1, ((E, E), 0, 1): -1}
    assert hopf.coproduct_word(E) == {((E, ()), 0, 0): 1, (((), E), 0, 0): 1}


def test_coproduct_truncation(hopf):
    X = ((("a", 1), ("a*", 2)),)
    assert hopf.coproduct_word(X, order=0) == {((X, ()), 0, 0): 1, (((), X), 0, 0): 1}


def test_counit_and_antipode_examples(hopf):
    assert hopf.antipode(one(())) == one(())
    a = ((("a", 1),),)
    assert hopf.antipode(one(a)) == {(a, 0, 0): -1}
    X = ((("a", 1), ("a*", 2)),)
    assert hopf.counit_word(X) == {}
    assert hopf.antipode(one(X)) == {(X, 0, 0): -1, (((), ()), 0, 1): -1}
    assert hopf.counit_word(()) == {(0, 0): 1}


# --- verification -------------------------------------------------------------------

def test_verify_jordan_small(jordan):
    report = verify_quantization(jordan, 2)
    assert quantization_passes(report), report


def test_verify_kronecker(kronecker):
    report = verify_quantization(kronecker, 2)
    assert quantization_passes(report), report


def test_two_loops_fail_coderivation():
    # b[o] straightens to hbar E•E, which is not primitive
    coalg = preprojective_from_quiver(QuiverSpec(["1"], [("x", "1", "1"), ("y", "1", "1")]))[1]
    report = verify_quantization(coalg, 2)
    assert report["coderivation"]
    assert not report["relations"] and not report["coassociativity"]


def test_pbw_dimensions(jordan):
    report = verify_quantization(jordan, 2)
    assert report["pbw_independent"] and report["pbw_dimensions_match"]
    assert report["basis_size"] == 27


def test_dropping_the_split_term_is_detected(jordan, monkeypatch):
    original = HopfAlgebra.relation_term

    def no_split(self, comps, lo, hi):
        return None if lo[0] == hi[0] else original(self, comps, lo, hi)

    monkeypatch.setattr(HopfAlgebra, "relation_term", no_split)
    report = verify_quantization(jordan, 2)
    assert not quantization_passes(report)
    assert report["relations"] or report["coassociativity"] or report["cocommutator"]
