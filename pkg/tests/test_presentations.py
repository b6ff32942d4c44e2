from fractions import Fraction

import pytest

from koszulcy.presentations import (
    CoalgebraPresentation, PresentationError, QuadraticPresentation, QuiverSpec,
    UnsupportedInput, induced_product, is_dynkin, load_presentation,
    preprojective_from_quiver, product_compatibility_failure, read_presentation)


def mult(table, u, v):
    out = {}
    for x, a in u.items():
        for y, b in v.items():
            for w, c in table.get((x, y), {}).items():
                out[w] = out.get(w, 0) + a * b * c
    return {k: c for k, c in out.items() if c}


def test_free_algebra(data_dir):
    p = read_presentation(data_dir / "kx.toml")
    assert isinstance(p, QuadraticPresentation)
    assert [g.id for g in p.generators] == ["x"] and p.relations == []


def test_commuting_plane(data_dir):
    p = read_presentation(data_dir / "kxy.toml")
    assert p.relations == [{("x", "y"): 1, ("y", "x"): -1}]


def test_coassociativity_failure_names_element(data_dir):
    with pytest.raises(PresentationError, match="coassociativity fails on basis element o"):
        read_presentation(data_dir / "bad_coassoc.toml")


def test_parse_errors():
    with pytest.raises(PresentationError, match="parse error"):
        load_presentation("[generators\nx = 1")
    with pytest.raises(PresentationError):
        load_presentation('[presentation]\nkind = "algebra"\n[generators]\nx = {degree = 0}\n')
    with pytest.raises(PresentationError, match="dependent"):
        load_presentation('[generators]\nx = {degree = 0, weight = 1}\n'
                          '[relations]\nr1 = {"x|x" = "1"}\nr2 = {"x|x" = "2"}\n')


def test_counit_failure():
    text = '''
[presentation]
kind = "coalgebra"
[generators]
e = {degree = 0, weight = 0}
a = {degree = 1, weight = 1}
[coproduct]
e = {"e|e" = "1"}
a = {"e|a" = "1"}
[counit]
e = "1"
'''
    with pytest.raises(PresentationError, match="counit axiom fails on basis element a"):
        load_presentation(text)


def test_pairing_symmetry_checked(data_dir):
    text = (data_dir / "jordan_coalgebra.toml").read_text()
    bad = text.replace('"a*|a" = "-1"', '"a*|a" = "1"')
    with pytest.raises(PresentationError, match="graded symmetric"):
        load_presentation(bad)


def test_jordan_coalgebra(jordan, data_dir):
    assert [b.id for b in jordan.basis] == ["e", "a", "a*", "o"]
    assert [b.degree for b in jordan.basis] == [0, 1, 1, 2]
    assert jordan.coproduct["o"] == {("o", "e"): 1, ("e", "o"): 1, ("a", "a*"): 1, ("a*", "a"): -1}
    written = read_presentation(data_dir / "jordan_coalgebra.toml")
    assert written.coproduct == jordan.coproduct
    assert written.pairing == jordan.pairing


def test_kronecker_dimension(kronecker):
    # two vertices, four arrows of the double quiver, two circles
    assert len(kronecker.basis) == 8
    assert sorted(b.degree for b in kronecker.basis) == [0, 0] + [1] * 4 + [2, 2]


def test_quiver_document(data_dir):
    q = read_presentation(data_dir / "jordan.toml")
    assert isinstance(q, QuiverSpec)
    alg, coalg = preprojective_from_quiver(q)
    assert alg.relations == [{("a", "a*"): 1, ("a*", "a"): -1}]


def test_dynkin_rejected(data_dir):
    with pytest.raises(UnsupportedInput):
        preprojective_from_quiver(read_presentation(data_dir / "a2.toml"))


def test_dynkin_classifier():
    def path(n):
        return QuiverSpec([str(i) for i in range(n)], [(f"x{i}", str(i), str(i + 1)) for i in range(n - 1)])
    assert is_dynkin(path(1)) and is_dynkin(path(5))
    star = lambda arms: QuiverSpec(
        ["c"] + [f"{k}_{i}" for k, m in enumerate(arms) for i in range(m)],
        [(f"y{k}_{i}", "c" if i == 0 else f"{k}_{i - 1}", f"{k}_{i}") for k, m in enumerate(arms) for i in range(m)])
    assert is_dynkin(star([1, 1, 5]))  # D
    assert is_dynkin(star([1, 2, 4]))  # E8
    assert not is_dynkin(star([1, 2, 5]))  # affine E8
    assert not is_dynkin(star([2, 2, 2]))  # affine E6
    assert not is_dynkin(star([1, 1, 1, 1]))  # affine D4
    assert not is_dynkin(QuiverSpec(["1"], [("a", "1", "1")]))
    cycle = QuiverSpec(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3"), ("c", "3", "1")])
    assert not is_dynkin(cycle)


def test_generated_coalgebras_validate():
    for q in [QuiverSpec(["1"], [("a", "1", "1"), ("b", "1", "1")]),
              QuiverSpec(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3"), ("c", "3", "1")])]:
        alg, coalg = preprojective_from_quiver(q)
        coalg.validate()
        assert len(alg.relations) == len(q.vertices)


@pytest.mark.parametrize("name", ["jordan", "kronecker"])
def test_induced_product_axioms(name, request):
    c = request.getfixturevalue(name)
    table = induced_product(c)
    ids = [b.id for b in c.basis]
    assert product_compatibility_failure(c, table) is None
    for x in ids:
        for y in ids:
            for z in ids:
                xy_z = mult(table, mult(table, {x: 1}, {y: 1}), {z: 1})
                x_yz = mult(table, {x: 1}, mult(table, {y: 1}, {z: 1}))
                assert xy_z == x_yz
                lhs = sum(k * c.pair(w, z) for w, k in mult(table, {x: 1}, {y: 1}).items())
                rhs = sum(k * c.pair(x, w) for w, k in mult(table, {y: 1}, {z: 1}).items())
                assert lhs == rhs


def test_jordan_product_values(jordan):
    table = induced_product(jordan)
    for x in ["e", "a", "a*", "o"]:
        # the top class o is the unit of the induced product
        assert mult(table, {"o": 1}, {x: 1}) == {x: 1}
        assert mult(table, {x: 1}, {"o": 1}) == {x: 1}
    assert mult(table, {"a": 1}, {"a": 1}) == {}
    assert mult(table, {"a": 1}, {"a*": 1}) == {"e": 1}


def test_degenerate_pairing(data_dir):
    text = (data_dir / "jordan_coalgebra.toml").read_text()
    text = text.replace('"e|o" = "1", "o|e" = "1", ', "")
    c = load_presentation(text)
    with pytest.raises(PresentationError, match="degenerate"):
        induced_product(c)
