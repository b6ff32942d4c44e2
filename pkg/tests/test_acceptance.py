"""Acceptance suite: one test per criterion, each with a wall-clock bound.

Every test prints one line "ACCEPTANCE <n> PASS|FAIL ..." straight to the
terminal, then asserts exact equality and the time bound.
"""

import itertools
import random
import time
from fractions import Fraction

import pytest

from koszulcy.cyclic import B_coalgebra, b_coalgebra, hc_table_algebra, hc_table_coalgebra
from koszulcy.koszul import QuadraticAlgebra, koszul_acyclicity_check, koszul_dual
from koszulcy.lqt import (check_theta_star_chain_map, check_trace_chain_map, exterior_on_cyclic,
                          invariant_homology)
from koszulcy.necklace import report_passes, verify_lie_bialgebra, vhh_verify_copoisson
from koszulcy.quantization import (HopfAlgebra, check_cocommutators, check_commutators,
                                   verify_quantization)


@pytest.fixture
def judge(capsys):
    def run(number, title, bound, check):
        start = time.perf_counter()
        ok, detail = check()
        elapsed = time.perf_counter() - start
        verdict = "PASS" if ok and elapsed < bound else "FAIL"
        with capsys.disabled():
            print(f"\nACCEPTANCE {number} {verdict}: {title} ({elapsed:.1f}s, bound {bound}s)"
                  + ("" if ok else f" -- {detail}"))
        assert ok, detail
        assert elapsed < bound, f"took {elapsed:.1f}s"
    return run


def _add(*vecs):
    out = {}
    for v in vecs:
        for k, c in v.items():
            out[k] = out.get(k, 0) + c
    return {k: c for k, c in out.items() if c}


def test_01_mixed_complex(judge, jordan, kx):
    def check():
        bad = []
        for name, c in (("jordan", jordan), ("k[x]", koszul_dual(kx, 6))):
            ids = [b.id for b in c.basis]
            for n in range(5):
                for c0 in ids:
                    for rest in itertools.product(c.reduced_basis, repeat=n):
                        x = {(c0,) + rest: Fraction(1)}
                        bx, Bx = b_coalgebra(x, c), B_coalgebra(x, c)
                        if b_coalgebra(bx, c) or B_coalgebra(Bx, c) or _add(b_coalgebra(Bx, c), B_coalgebra(bx, c)):
                            bad.append((name, (c0,) + rest))
        return not bad, bad[:5]
    judge(1, "b² = B² = bB + Bb = 0 on words of length ≤ 5", 30, check)


def test_02_koszulness(judge, kx, kxy, jordan_algebra):
    def check():
        bad = {}
        for name, pres in (("k[x]", kx), ("k[x,y]", kxy), ("jordan", jordan_algebra)):
            report = koszul_acyclicity_check(pres, 6)
            if not report["acyclic"]:
                bad[name] = report["nonzero"]
        return not bad, bad
    judge(2, "Koszul complexes exact in weights 1-6", 60, check)


def test_03_hc_duality(judge, kx, kxy):
    def check():
        bad = {}
        for name, pres in (("k[x]", kx), ("k[x,y]", kxy)):
            lhs = hc_table_algebra(QuadraticAlgebra(pres, 5), 4, 4)
            rhs = hc_table_coalgebra(koszul_dual(pres, 4), 4, 4)
            diff = {k: (lhs.get(k), rhs.get(k)) for k in set(lhs) | set(rhs) if lhs.get(k) != rhs.get(k)}
            if diff:
                bad[name] = diff
        return not bad, bad
    judge(3, "dim HC(A) = dim HC(A¡) for weight, degree ≤ 4", 120, check)


def test_04_necklace_lie_bialgebra(judge, jordan):
    def check():
        report = verify_lie_bialgebra(jordan, 4)
        return report_passes(report), {k: v[:3] for k, v in report.items() if v}
    judge(4, "necklace Lie bialgebra identities, length ≤ 4", 60, check)


def test_05_lqt_chain_maps(judge, kx, jordan):
    def check():
        alg = QuadraticAlgebra(kx, 6)
        bad = {}
        for r in range(1, 5):
            trace = check_trace_chain_map(alg, r, 3, seed=r)
            theta = check_theta_star_chain_map(jordan, r, 3)
            if trace or theta:
                bad[r] = (trace[:3], theta[:3])
        return not bad, bad
    judge(5, "Tr∘θ and Θ* are chain maps, r ≤ 4, length ≤ 3", 120, check)


def test_06_lqt_dimensions(judge, jordan):
    def check():
        want = exterior_on_cyclic(jordan, 2)
        got = {r: invariant_homology(jordan, r, 2) for r in (3, 4, 5)}
        bad = {r: g for r, g in got.items() if g != want}
        return not bad, bad
    judge(6, "invariant CE homology = Λ(HC[1]) for degree ≤ 2, r = 3, 4, 5", 300, check)


HOPF_CHECKS = ("straightening", "pbw_fixed", "coassociativity", "bialgebra", "counit", "antipode",
               "differential_square", "derivation", "coderivation", "relations", "degree")


def test_07_hopf_axioms(judge, jordan):
    def check():
        report = verify_quantization(jordan, 3, necklace_length=1)
        bad = {k: report[k][:3] for k in HOPF_CHECKS if report[k]}
        return not bad, bad
    judge(7, "Hopf axioms, b² = 0, (co)derivation on words ≤ 3 letters", 300, check)


def test_08_pbw(judge, jordan):
    def check():
        hopf = HopfAlgebra(jordan)
        rng = random.Random(2024)
        letters = [b.id for b in jordan.basis]
        bad = []
        for _ in range(1000):
            n = rng.randint(1, 5)
            seq = [rng.choice(letters) for _ in range(n)]
            heights = rng.sample(range(1, 100), n)
            cuts = sorted(rng.sample(range(1, n), rng.randint(0, n - 1))) if n > 1 else []
            bounds = [0] + cuts + [n]
            raw = tuple(tuple(zip(seq[a:b], heights[a:b])) for a, b in zip(bounds, bounds[1:]))
            _, word = hopf.canonicalize(raw)
            # walk the rewriting chain and watch the measure
            current = word
            while True:
                d, order = hopf.measure(current)
                if d == 0:
                    break
                swapped, _ = hopf.rewrite_step(current, order)
                nxt = hopf.canonicalize(swapped)[1]
                if hopf.measure(nxt)[0] >= d:
                    bad.append(("measure", raw))
                    break
                current = nxt
            nf = hopf.normal_form(word)
            if any(not hopf.is_pbw(v) for v, _, _ in nf):
                bad.append(("not pbw", raw))
            if n <= 3 and nf != hopf.normal_form(word, strategy="largest"):
                bad.append(("confluence", raw))
        # the three-letter pattern with heights read 3, 2, 1
        for raw in [((("a", 3), ("a*", 2), ("o", 1)),), ((("a", 3),), (("a*", 2),), (("a", 1),)),
                    ((("a*", 3), ("a", 2)), (("a*", 1),)), ((("e", 3),), (("o", 2), ("a", 1)))]:
            _, word = hopf.canonicalize(raw)
            if hopf.normal_form(word) != hopf.normal_form(word, strategy="largest"):
                bad.append(("critical pattern", raw))
        basis = hopf.pbw_basis(4)
        images = [hopf.to_symmetric(w) for w in basis]
        if len(set(images)) != len(images) or any(hopf.normal_form(w) != {(w, 0, 0): 1} for w in basis):
            bad.append(("pbw independence", None))
        return not bad, bad[:5]
    judge(8, "straightening terminates, is confluent, PBW words independent", 120, check)


def test_09_quantization_conditions(judge, jordan):
    def check():
        hopf = HopfAlgebra(jordan)
        comm = check_commutators(hopf, 4)
        cocomm = check_cocommutators(hopf, 4)
        return not comm and not cocomm, {"commutator": comm[:3], "cocommutator": cocomm[:3]}
    judge(9, "(x̃ỹ − ỹx̃)/h = {x,y} and (Δ − Δop)(x̃)/ħ = δ(x), length ≤ 4", 120, check)


def test_10_two_component_summand(judge, jordan):
    def check():
        hopf = HopfAlgebra(jordan)
        # x1 pairs with y3, x3 with y1; h(x1) < h(y3), h(x3) > h(y1).
        # Heights tell the letters apart in the output.
        x = (("a", 1), ("a", 2), ("a", 5), ("a", 6))
        y = (("a*", 3), ("a", 4), ("a*", 7), ("a", 8))
        pairs = {(0, 0): (1, 2), (0, 2): (1, 0)}
        want_scalar = jordan.pair("a", "a*") * jordan.pair("a", "a*")
        found = []
        for col, coeff, p, q, raw in hopf.coproduct_summands((x, y), 2):
            if len(col[0]) == 4 and all(col[1].get(u) == v for u, v in pairs.items()):
                found.append((coeff, p, q, raw))
        want = [(want_scalar, 1, 1, (((y[3], x[3]),), ((x[1], y[1]),)))]
        return found == want, found
    judge(10, "two-component case: <x1,y3><x3,y1> h hbar [y4,x4] ⊗ [x2,y2]", 10, check)


def test_11_copoisson(judge, jordan):
    def check():
        bad = vhh_verify_copoisson(jordan, 3, max_factors=3)
        return not bad, bad[:5]
    judge(11, "ν(ab) = ν(a)Δ(b) + Δ(a)ν(b) on generators of length ≤ 3", 60, check)
