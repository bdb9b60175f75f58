"""Command line interface.

Exit codes: 0 success or agreement, 1 disagreement (or an unexpected outcome of
``counterexample``), 2 invalid input.
"""

from __future__ import annotations

import json
import os
import sys
from importlib import resources
from pathlib import Path

import click

from .grcore import GrIndex, ShapeError, all_indices, coerce_index
from .kring import LaurentPoly, expand_in_z, z_form_text
from .oracle import anchor_value, oracle_coeffs
from .puzzle import enumerate_puzzles, enumerate_puzzles_free_bottom, puzzle_weight
from .render import FORMATS, render_puzzle
from .tableau import GenomicTableau, enumerate_tableaux, tableau_sum, tableau_weight, validate
from .tracks import TrackError, extract_tracks, puzzle_to_tableau, tableau_to_puzzle, verify_bijection

OUTPUT_ENV = "KPUZZLE_OUTPUT_DIR"
METHODS = ("puzzle", "tableau", "oracle")
COUNTEREXAMPLE = ("01001", "00101", "10010")


def _fail_input(message: str) -> None:
    raise click.UsageError(message)


def _index(value: str | None, name: str, n: int | None, k: int | None) -> GrIndex:
    if value is None:
        _fail_input(f"--{name} is required")
    try:
        idx = coerce_index(value, n, k)
    except ShapeError as exc:
        _fail_input(f"--{name}: {exc}")
    if n is not None and idx.n != n:
        _fail_input(f"--{name}: {value!r} has length {idx.n}, expected {n}")
    if k is not None and idx.k != k:
        _fail_input(f"--{name}: {value!r} has {idx.k} ones, expected {k}")
    return idx


def _triple(n, k, lam, mu, nu, need_target=True):
    first = _index(lam, "lambda", n, k)
    n, k = first.n, first.k
    second = _index(mu, "mu", n, k)
    target = _index(nu, "nu", n, k) if need_target else None
    return first, second, target


def _poly_json(p: LaurentPoly) -> dict:
    z = expand_in_z(p)
    return {"poly": p.to_json(), "z_form": None if z is None else z_form_text(z)}


def _emit(data: dict) -> None:
    click.echo(json.dumps(data, indent=2, sort_keys=True))


def _compute(method: str, first: GrIndex, second: GrIndex, target: GrIndex, mode: str) -> LaurentPoly:
    if method == "puzzle":
        total = LaurentPoly.zero(first.n)
        for p in enumerate_puzzles(first, second, target, mode):
            total = total + puzzle_weight(p)
        return total
    if method == "tableau":
        return tableau_sum(first, second, target)
    return oracle_coeffs(first, second)[target.bits]


def _all_coeffs(method: str, first: GrIndex, second: GrIndex, mode: str) -> dict[str, LaurentPoly]:
    pts = [g.bits for g in all_indices(first.n, first.k)]
    if method == "puzzle":
        found = enumerate_puzzles_free_bottom(first, second, mode)
        out = {}
        for b in pts:
            total = LaurentPoly.zero(first.n)
            for p in found.get(b, []):
                total = total + puzzle_weight(p)
            out[b] = total
        return out
    if method == "tableau":
        return {b: tableau_sum(first, second, GrIndex.parse(b)) for b in pts}
    return oracle_coeffs(first, second)


triple_options = [
    click.option("--n", type=click.IntRange(min=1), default=None, help="Ambient dimension."),
    click.option("--k", type=click.IntRange(min=0), default=None, help="Subspace dimension."),
    click.option("--lambda", "lam", default=None, help="First class: bit string, or comma separated partition."),
    click.option("--mu", default=None, help="Second class."),
    click.option("--nu", default=None, help="Target class."),
]
mode_option = click.option("--mode", type=click.Choice(["modified", "original"]), default="modified", show_default=True)
json_option = click.option("--json", "as_json", is_flag=True, help="Machine readable output.")


def with_triple(f):
    for opt in reversed(triple_options):
        f = opt(f)
    return f


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def main() -> None:
    """Equivariant K-theory structure constants of Grassmannians."""


@main.command()
@with_triple
@click.option("--method", type=click.Choice(METHODS + ("all",)), default="all", show_default=True)
@mode_option
@json_option
def coeff(n, k, lam, mu, nu, method, mode, as_json):
    """One structure constant, by one or all methods."""
    first, second, target = _triple(n, k, lam, mu, nu)
    methods = METHODS if method == "all" else (method,)
    values = {m: _compute(m, first, second, target, mode) for m in methods}
    agree = len(set(values.values())) == 1
    if as_json:
        data = {"lambda": first.bits, "mu": second.bits, "nu": target.bits, "method": method, "mode": mode}
        data.update(_poly_json(values[methods[-1]]))
        if method == "all":
            data["values"] = {m: v.to_json() for m, v in values.items()}
            data["agree"] = agree
        _emit(data)
    else:
        for m, v in values.items():
            click.echo(f"{m}: {v}")
        if method == "all":
            click.echo("agreement: " + ("OK" if agree else "MISMATCH"))
    if not agree:
        sys.exit(1)


@main.command()
@with_triple
@click.option("--method", type=click.Choice(METHODS + ("all",)), default="oracle", show_default=True)
@mode_option
@json_option
def expand(n, k, lam, mu, nu, method, mode, as_json):
    """Every nonzero coefficient of a product of two classes."""
    first, second, _ = _triple(n, k, lam, mu, None, need_target=False)
    methods = METHODS if method == "all" else (method,)
    tables = {m: _all_coeffs(m, first, second, mode) for m in methods}
    ref = tables[methods[-1]]
    agree = all(t == ref for t in tables.values())
    rows = [(b, v) for b, v in ref.items() if not v.is_zero()]
    if as_json:
        _emit({
            "lambda": first.bits,
            "mu": second.bits,
            "method": method,
            "mode": mode,
            "agree": agree,
            "terms": [{"nu": b, **_poly_json(v)} for b, v in rows],
        })
    else:
        for b, v in rows:
            click.echo(f"{b}: {v}")
        if method == "all":
            click.echo("agreement: " + ("OK" if agree else "MISMATCH"))
    if not agree:
        sys.exit(1)


@main.command(name="enumerate")
@with_triple
@click.option("--object", "kind", type=click.Choice(["puzzles", "tableaux"]), default="puzzles", show_default=True)
@mode_option
@json_option
def enumerate_cmd(n, k, lam, mu, nu, kind, mode, as_json):
    """List the puzzles or tableaux of a triple with their weights."""
    first, second, target = _triple(n, k, lam, mu, nu)
    items = []
    if kind == "puzzles":
        for p in enumerate_puzzles(first, second, target, mode):
            items.append({"weight": str(puzzle_weight(p)), "pieces": [str(pl) for pl in p.placements]})
    else:
        for t in enumerate_tableaux(first.n, first.partition(), second.partition(), target.partition()):
            items.append({"weight": str(tableau_weight(t)), "text": t.to_text(), "tableau": t.to_json()})
    if as_json:
        _emit({"lambda": first.bits, "mu": second.bits, "nu": target.bits, "object": kind, "mode": mode, "items": items})
        return
    click.echo(f"{len(items)} {kind}")
    for i, item in enumerate(items):
        click.echo(f"[{i}] weight {item['weight']}")
        click.echo("    " + (" ".join(item["pieces"]) if kind == "puzzles" else item["text"].replace("\n", "\n    ")))


def _load_tableau(path: str | None, builtin: bool) -> GenomicTableau:
    if builtin:
        text = resources.files("kpuzzle").joinpath("data/large_example.json").read_text()
    else:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            _fail_input(f"cannot read {path}: {exc}")
    try:
        return GenomicTableau.from_json(json.loads(text))
    except (ValueError, KeyError, ShapeError) as exc:
        _fail_input(f"bad tableau file: {exc}")


@main.command()
@with_triple
@click.option("--tableau", "tableau_path", type=click.Path(), default=None, help="Run the round trip on a tableau JSON file.")
@click.option("--large-example", is_flag=True, help="Use the packaged n=20 example tableau.")
@json_option
def biject(n, k, lam, mu, nu, tableau_path, large_example, as_json):
    """Check the puzzle and tableau correspondence on a triple or a single tableau."""
    if tableau_path or large_example:
        tab = _load_tableau(tableau_path, large_example)
        problems = [str(v) for v in validate(tab)]
        word = None
        try:
            puz = tableau_to_puzzle(tab)
            back = puzzle_to_tableau(puz)
            if back.key() != tab.key():
                problems.append("round trip changed the tableau")
            same_weight = puzzle_weight(puz) == tableau_weight(tab)
            if not same_weight:
                problems.append("weights differ")
            word = [t.word_text() for t in extract_tracks(puz)]
        except TrackError as exc:
            problems.append(str(exc))
        if as_json:
            _emit({"tableau": tab.to_json(), "ok": not problems, "problems": problems, "track_words": word})
        else:
            click.echo(tab.to_text())
            for i, w in enumerate(word or []):
                click.echo(f"track {i + 1}: {w}")
            click.echo("round trip: " + ("OK" if not problems else "; ".join(problems)))
        if problems:
            sys.exit(1)
        return
    first, second, target = _triple(n, k, lam, mu, nu)
    rep = verify_bijection(first, second, target)
    if as_json:
        _emit(rep.to_json())
    else:
        click.echo(f"{rep.puzzle_count} puzzles, {rep.tableau_count} tableaux, {rep.matched} matched")
        for p in rep.problems:
            click.echo(f"problem: {p}")
        click.echo("bijection: " + ("OK" if rep.ok else "FAILED"))
    if not rep.ok:
        sys.exit(1)


@main.command()
@click.option("--n", type=click.IntRange(min=1), required=True)
@click.option("--k", type=click.IntRange(min=0), required=True)
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True, help="Worker processes.")
@click.option("--sums-only", is_flag=True, help="Skip the bijection and structural checks.")
@json_option
def verify(n, k, jobs, sums_only, as_json):
    """Compare all methods on every triple of Gr(k, n)."""
    from .sweep import run_sweep

    if k > n:
        _fail_input("--k must not exceed --n")
    results = run_sweep(n, k, jobs=jobs, bijection=not sums_only, structure=not sums_only)
    bad = [r for r in results if not r.ok]
    if as_json:
        _emit({
            "n": n,
            "k": k,
            "triples": len(results),
            "mismatches": [
                {"triple": list(r.triple), "puzzle": str(r.puzzle), "tableau": str(r.tableau),
                 "oracle": str(r.oracle), "problems": r.problems}
                for r in bad
            ],
        })
    else:
        for r in bad:
            click.echo(f"mismatch {' '.join(r.triple)}: puzzle {r.puzzle} | tableau {r.tableau} | oracle {r.oracle}")
            for p in r.problems[:5]:
                click.echo(f"  {p}")
        click.echo(f"{len(results)} triples, {len(bad)} mismatches")
    if bad:
        sys.exit(1)


@main.command()
@json_option
def counterexample(as_json):
    """The five-dimensional instance where the earlier puzzle rule fails."""
    first, second, target = (GrIndex.parse(b) for b in COUNTEREXAMPLE)
    oracle = oracle_coeffs(first, second)[target.bits]
    report = {}
    totals = {}
    for mode in ("original", "modified"):
        weights = [puzzle_weight(p) for p in enumerate_puzzles(first, second, target, mode)]
        totals[mode] = sum(weights, LaurentPoly.zero(5))
        report[mode] = {
            "weights": [str(w) for w in weights],
            "sum": str(totals[mode]),
            "matches_oracle": totals[mode] == oracle,
        }
    expected = not report["original"]["matches_oracle"] and report["modified"]["matches_oracle"]
    discrepancy = str(totals["original"] - oracle)
    if as_json:
        _emit({"triple": list(COUNTEREXAMPLE), "oracle": str(oracle), "modes": report,
               "discrepancy": discrepancy, "listed_weights_sum": str(anchor_value()), "expected_outcome": expected})
    else:
        click.echo(f"triple: {' '.join(COUNTEREXAMPLE)}")
        click.echo(f"oracle: {oracle}")
        for mode, r in report.items():
            click.echo(f"{mode}: {len(r['weights'])} puzzles")
            for w in r["weights"]:
                click.echo(f"  {w}")
            click.echo(f"  sum {r['sum']} ({'equals' if r['matches_oracle'] else 'differs from'} oracle)")
        click.echo(f"original minus oracle: {discrepancy}")
    if not expected:
        sys.exit(1)


@main.command()
@with_triple
@mode_option
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="svg", show_default=True)
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None,
              help=f"Output directory; defaults to ${OUTPUT_ENV} or the current directory.")
@click.option("--stdout", "to_stdout", is_flag=True, help="Print drawings instead of writing files.")
def render(n, k, lam, mu, nu, mode, fmt, out_dir, to_stdout):
    """Draw every puzzle of a triple, one file per puzzle."""
    first, second, target = _triple(n, k, lam, mu, nu)
    puzzles = enumerate_puzzles(first, second, target, mode)
    if to_stdout:
        for i, p in enumerate(puzzles):
            click.echo(f"# puzzle {i} weight {puzzle_weight(p)}")
            click.echo(render_puzzle(p, fmt), nl=False)
        return
    base = Path(out_dir or os.environ.get(OUTPUT_ENV) or ".")
    base.mkdir(parents=True, exist_ok=True)
    ext = "svg" if fmt == "svg" else "txt"
    stem = f"{first.bits}-{second.bits}-{target.bits}-{mode}"
    for i, p in enumerate(puzzles):
        path = base / f"{stem}-{i:03d}.{ext}"
        path.write_text(render_puzzle(p, fmt))
        click.echo(str(path))
    click.echo(f"{len(puzzles)} files written")


if __name__ == "__main__":
    main()
