"""Command line: load a presentation file, compute, verify, print a report.

Reports go to stdout as JSON (or flattened CSV rows). Exit status is 0 when
every requested verification passes, 1 when one fails and 2 when the input
cannot be used.
"""

import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

import click

from . import __version__
from .koszul import QuadraticAlgebra, dimension_table, koszul_acyclicity_check, koszul_dual
from .cyclic import hc_table_algebra, hc_table_coalgebra
from .lqt import StabilityError, lqt_passes, verify_lqt
from .necklace import NecklaceAlgebra, report_passes, verify_lie_bialgebra
from .presentations import (CoalgebraPresentation, PresentationError, QuadraticPresentation, QuiverSpec,
                            cy_dimension_of, load_presentation, preprojective_from_quiver)
from .quantization import HopfAlgebra, quantization_passes, verify_quantization, word_to_string
from .scalar import Scalar

PASS, FAIL, BAD_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def jsonable(x):
    """Plain JSON data: tuple keys joined by spaces, exact numbers as strings."""
    if isinstance(x, dict):
        return {_key(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x, key=repr) if isinstance(x, (set, frozenset)) else x
        return [jsonable(v) for v in items]
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    if isinstance(x, Scalar):
        return str(x)
    return x


def _key(k):
    if isinstance(k, tuple):
        return " ".join(_key(x) for x in k) if k else "()"
    return str(k)


def _rows(prefix, x):
    if isinstance(x, dict):
        for k, v in x.items():
            yield from _rows(prefix + [str(k)], v)
    elif isinstance(x, list) and any(isinstance(v, (dict, list)) for v in x):
        for i, v in enumerate(x):
            yield from _rows(prefix + [str(i)], v)
    else:
        yield "/".join(prefix), json.dumps(x, sort_keys=True, ensure_ascii=False)


def emit(ctx, command, body, passed=True):
    cfg = ctx.obj
    doc = {"header": {"command": command, "seed": cfg["seed"], "version": __version__,
                      "input": cfg.get("input"), "cy_dimension": cfg.get("cy_dimension")},
           "passed": passed, **jsonable(body)}
    if cfg["format"] == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["key", "value"])
        for row in _rows([], doc):
            writer.writerow(row)
        click.echo(buf.getvalue(), nl=False)
    else:
        click.echo(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False))
    ctx.exit(PASS if passed else FAIL)


def load(ctx, path):
    """(presentation, cy dimension) from a file; exits 2 on any input problem."""
    try:
        text = Path(path).read_text(encoding="utf-8")
        pres = load_presentation(text)
    except (OSError, UnicodeDecodeError, PresentationError) as exc:
        raise InputError(f"{path}: {exc}") from None
    n = ctx.obj["cy_override"] or cy_dimension_of(text)
    ctx.obj["input"] = Path(path).name
    ctx.obj["cy_dimension"] = n
    return pres, n


def as_coalgebra(pres, max_weight=4):
    """(algebra or None, coalgebra) for any kind of presentation."""
    if isinstance(pres, QuiverSpec):
        return preprojective_from_quiver(pres)
    if isinstance(pres, CoalgebraPresentation):
        return None, pres
    return pres, koszul_dual(pres, max(max_weight, 2))


def require_pairing(coalg):
    if not coalg.pairing:
        raise InputError("this command needs a co-Frobenius coalgebra (a quiver or a coalgebra with [pairing])")


def dump_coalgebra(coalg):
    return {
        "basis": [{"id": b.id, "degree": b.degree, "weight": b.weight, "tail": b.tail, "head": b.head}
                  for b in coalg.basis],
        "coproduct": {x: {f"{a}|{b}": c for (a, b), c in t.items()} for x, t in coalg.coproduct.items()},
        "counit": dict(coalg.counit),
        "pairing": {f"{a}|{b}": c for (a, b), c in (coalg.pairing or {}).items()},
        "pairing_degree": coalg.pairing_degree,
        "dimensions": {f"{w},{d}": n for (w, d), n in sorted(dimension_table(coalg).items())},
    }


def dump_algebra(pres: QuadraticPresentation):
    return {
        "generators": [{"id": g.id, "degree": g.degree, "weight": g.weight, "tail": g.tail, "head": g.head}
                       for g in pres.generators],
        "relations": [{f"{a}{b}": c for (a, b), c in rel.items()} for rel in pres.relations],
        "vertices": list(pres.vertices),
    }


# --- sections shared by the subcommands and the quiver pipeline -------------

def koszul_section(pres, max_weight):
    if not isinstance(pres, QuadraticPresentation):
        raise InputError("koszul-dual needs an algebra presentation")
    dual = koszul_dual(pres, max_weight)
    check = koszul_acyclicity_check(pres, max_weight)
    body = {"coalgebra": dump_coalgebra(dual),
            "acyclicity": {"acyclic": check["acyclic"], "square_zero": check["square_zero"],
                           "homology": {str(n): d for n, d in check["homology"].items()},
                           "nonzero": check["nonzero"]}}
    return body, check["acyclic"]


def homology_section(alg, coalg, side, max_weight, max_degree):
    if side == "alg":
        if alg is None:
            raise InputError("--side alg needs an algebra or quiver presentation")
        table = hc_table_algebra(QuadraticAlgebra(alg, max_weight), max_weight, max_degree)
    else:
        table = hc_table_coalgebra(coalg, max_weight, max_degree)
    return {"side": side, "hc": {f"{w},{d}": n for (w, d), n in sorted(table.items())}}


def necklace_section(coalg, n, verify, max_length):
    require_pairing(coalg)
    nk = NecklaceAlgebra(coalg, n)
    body = {"tables": json.loads(nk.export_tables(nk.necklaces(max_length)))}
    passed = True
    if verify:
        report = verify_lie_bialgebra(coalg, max_length, n)
        body["report"] = report
        passed = report_passes(report)
    return body, passed


def lqt_section(alg, coalg, rank, max_degree, seed):
    try:
        report = verify_lqt(coalg, rank, max_degree, alg=QuadraticAlgebra(alg, max_degree + 2) if alg else None,
                            seed=seed)
    except StabilityError as exc:
        raise InputError(str(exc)) from None
    return report, lqt_passes(report)


def quantize_section(coalg, n, verify, max_letters):
    require_pairing(coalg)
    try:
        hopf = HopfAlgebra(coalg, n)
    except PresentationError as exc:
        raise InputError(str(exc)) from None
    body = {"pbw_basis": [word_to_string(w) for w in hopf.pbw_basis(max_letters)]}
    passed = True
    if verify:
        report = verify_quantization(coalg, max_letters, n)
        body["report"] = report
        passed = quantization_passes(report)
    return body, passed


# --- commands -----------------------------------------------------------------

class Group(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except InputError as exc:
            click.echo(json.dumps({"error": str(exc)}, ensure_ascii=False))
            click.echo(f"error: {exc}", err=True)
            sys.exit(BAD_INPUT)


@click.group(cls=Group)
@click.version_option(__version__)
@click.option("--seed", default=0, show_default=True, help="Seed for randomized sweeps (echoed in the header).")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@click.option("--cy-dimension", type=int, default=None, help="Override the Calabi-Yau dimension of the input.")
@click.pass_context
def main(ctx, seed, fmt, cy_dimension):
    """Koszul duality, cyclic homology, necklace Lie bialgebras and their quantization."""
    ctx.obj = {"seed": seed, "format": fmt, "cy_override": cy_dimension}


@main.command("koszul-dual")
@click.argument("file", type=click.Path())
@click.option("--max-weight", type=click.IntRange(2), default=4, show_default=True)
@click.pass_context
def koszul_dual_cmd(ctx, file, max_weight):
    """Koszul dual coalgebra and the acyclicity of the Koszul complex."""
    pres, _ = load(ctx, file)
    if isinstance(pres, QuiverSpec):
        pres = preprojective_from_quiver(pres)[0]
    body, passed = koszul_section(pres, max_weight)
    emit(ctx, "koszul-dual", body, passed)


@main.command()
@click.argument("file", type=click.Path())
@click.option("--side", type=click.Choice(["alg", "coalg"]), default="alg", show_default=True)
@click.option("--max-weight", type=click.IntRange(0), default=4, show_default=True)
@click.option("--max-degree", type=click.IntRange(0), default=4, show_default=True)
@click.pass_context
def homology(ctx, file, side, max_weight, max_degree):
    """Cyclic homology dimensions per (weight, degree)."""
    pres, _ = load(ctx, file)
    alg, coalg = as_coalgebra(pres, max_weight)
    emit(ctx, "homology", homology_section(alg, coalg, side, max_weight, max_degree))


@main.command()
@click.argument("file", type=click.Path())
@click.option("--verify", is_flag=True, help="Check the Lie bialgebra identities.")
@click.option("--max-length", type=click.IntRange(1), default=3, show_default=True)
@click.pass_context
def necklace(ctx, file, verify, max_length):
    """Bracket and cobracket tables of the necklace Lie bialgebra."""
    pres, n = load(ctx, file)
    _, coalg = as_coalgebra(pres)
    body, passed = necklace_section(coalg, n, verify, max_length)
    emit(ctx, "necklace", body, passed)


@main.command()
@click.argument("file", type=click.Path())
@click.option("--rank", type=click.IntRange(1), default=4, show_default=True)
@click.option("--max-degree", type=click.IntRange(0), default=2, show_default=True)
@click.pass_context
def lqt(ctx, file, rank, max_degree):
    """Chain maps to matrices and the stable dimension comparison."""
    pres, _ = load(ctx, file)
    alg, coalg = as_coalgebra(pres, max_degree + 2)
    body, passed = lqt_section(alg, coalg, rank, max_degree, ctx.obj["seed"])
    emit(ctx, "lqt", body, passed)


@main.command()
@click.argument("file", type=click.Path())
@click.option("--verify", is_flag=True, help="Check the Hopf axioms and the quantization conditions.")
@click.option("--max-letters", type=click.IntRange(1), default=3, show_default=True)
@click.pass_context
def quantize(ctx, file, verify, max_letters):
    """PBW basis of the height-word Hopf algebra, optionally verified."""
    pres, n = load(ctx, file)
    _, coalg = as_coalgebra(pres)
    body, passed = quantize_section(coalg, n, verify, max_letters)
    emit(ctx, "quantize", body, passed)


@main.command()
@click.argument("file", type=click.Path())
@click.option("--koszul", "do_koszul", is_flag=True, help="Koszul acyclicity of the preprojective algebra.")
@click.option("--homology", "do_homology", type=click.Choice(["alg", "coalg"]), default=None)
@click.option("--necklace", "do_necklace", is_flag=True)
@click.option("--lqt", "do_lqt", is_flag=True)
@click.option("--quantize", "do_quantize", is_flag=True)
@click.option("--verify", is_flag=True, help="Verify the necklace and quantization sections.")
@click.option("--max-weight", type=click.IntRange(2), default=4, show_default=True)
@click.option("--max-degree", type=click.IntRange(0), default=2, show_default=True)
@click.option("--max-length", type=click.IntRange(1), default=3, show_default=True)
@click.option("--max-letters", type=click.IntRange(1), default=3, show_default=True)
@click.option("--rank", type=click.IntRange(1), default=4, show_default=True)
@click.pass_context
def quiver(ctx, file, do_koszul, do_homology, do_necklace, do_lqt, do_quantize, verify,
           max_weight, max_degree, max_length, max_letters, rank):
    """Preprojective presentation and dual coalgebra of a quiver, plus any sections."""
    pres, n = load(ctx, file)
    if not isinstance(pres, QuiverSpec):
        raise InputError("quiver needs a quiver presentation")
    try:
        alg, coalg = preprojective_from_quiver(pres)
    except PresentationError as exc:
        raise InputError(str(exc)) from None
    body = {"algebra": dump_algebra(alg), "coalgebra": dump_coalgebra(coalg)}
    passed = True
    if do_koszul:
        body["koszul"], ok = koszul_section(alg, max_weight)
        passed &= ok
    if do_homology:
        body["homology"] = homology_section(alg, coalg, do_homology, max_weight, max_degree)
    if do_necklace:
        body["necklace"], ok = necklace_section(coalg, n, verify, max_length)
        passed &= ok
    if do_lqt:
        body["lqt"], ok = lqt_section(alg, coalg, rank, max_degree, ctx.obj["seed"])
        passed &= ok
    if do_quantize:
        body["quantize"], ok = quantize_section(coalg, n, verify, max_letters)
        passed &= ok
    emit(ctx, "quiver", body, passed)


if __name__ == "__main__":
    main()
