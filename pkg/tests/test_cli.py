import json

import pytest
from click.testing import CliRunner

from koszulcy.cli import main


def run(*args):
    result = CliRunner().invoke(main, [str(a) for a in args])
    return result.exit_code, result.output


def report(output):
    return json.loads(output)


def test_quiver_quantize_verify(data_dir):
    code, out = run("quiver", data_dir / "jordan.toml", "--quantize", "--verify", "--max-letters", 3)
    assert code == 0
    doc = report(out)
    assert doc["passed"] and doc["header"]["seed"] == 0
    assert doc["quantize"]["report"]["basis_size"] == 116


def test_homology_kx(data_dir):
    code, out = run("homology", data_dir / "kx.toml", "--side", "alg", "--max-weight", 4, "--max-degree", 4)
    assert code == 0
    hc = report(out)["hc"]
    # k[x]: one class in each weight at degree 0, and the even degrees of weight 0
    assert [hc[f"{w},0"] for w in range(5)] == [1] * 5
    assert [hc[f"0,{d}"] for d in range(5)] == [1, 0, 1, 0, 1]


def test_homology_sides_agree(data_dir):
    alg = report(run("homology", data_dir / "kxy.toml", "--side", "alg", "--max-weight", 3, "--max-degree", 3)[1])
    co = report(run("homology", data_dir / "kxy.toml", "--side", "coalg", "--max-weight", 3, "--max-degree", 3)[1])
    assert alg["hc"] == co["hc"]


def test_malformed_file(tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text("generators = [")
    code, out = run("homology", bad)
    assert code == 2
    assert "parse error" in out


def test_missing_file(tmp_path):
    code, _ = run("necklace", tmp_path / "nope.toml")
    assert code == 2


def test_odd_dimension_is_input_error(data_dir):
    code, out = run("quantize", data_dir / "dual_numbers.toml")
    assert code == 2 and "odd" in out


def test_non_coassociative_file_rejected(data_dir):
    # the coassociativity check of the loader rejects this file outright
    code, _ = run("necklace", data_dir / "bad_coassoc.toml")
    assert code == 2


def test_two_loop_quantization_fails(tmp_path):
    f = tmp_path / "two_loops.toml"
    f.write_text('[presentation]\nkind = "quiver"\n[quiver]\nvertices = ["1"]\n'
                 'arrows = [["x", "1", "1"], ["y", "1", "1"]]\n')
    code, out = run("quantize", f, "--verify", "--max-letters", 2)
    assert code == 1
    assert report(out)["report"]["coderivation"]


def test_koszul_dual(data_dir):
    code, out = run("koszul-dual", data_dir / "kxy.toml", "--max-weight", 4)
    assert code == 0
    doc = report(out)
    assert doc["acyclicity"]["acyclic"]
    assert doc["coalgebra"]["dimensions"] == {"0,0": 1, "1,1": 2, "2,2": 1}


def test_necklace_and_lqt(data_dir):
    code, out = run("necklace", data_dir / "jordan_coalgebra.toml", "--verify", "--max-length", 2)
    assert code == 0 and report(out)["tables"]["bracket"]
    code, out = run("lqt", data_dir / "jordan_coalgebra.toml", "--rank", 3, "--max-degree", 2)
    assert code == 0 and report(out)["dimension_mismatch"] == []
    code, _ = run("lqt", data_dir / "jordan_coalgebra.toml", "--rank", 2, "--max-degree", 2)
    assert code == 2


def test_deterministic_output(data_dir):
    args = ("--seed", 5, "quiver", data_dir / "kronecker.toml", "--necklace", "--lqt", "--rank", 3)
    first, second = run(*args), run(*args)
    assert first == second
    assert report(first[1])["header"]["seed"] == 5


def test_csv_format(data_dir):
    code, out = run("--format", "csv", "homology", data_dir / "kx.toml", "--max-weight", 1, "--max-degree", 1)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "key,value"
    assert '"hc/1,0",1' in lines


@pytest.mark.parametrize("cmd", ["koszul-dual", "homology", "necklace", "lqt", "quantize", "quiver"])
def test_help(cmd):
    code, out = run(cmd, "--help")
    assert code == 0 and "Usage" in out
