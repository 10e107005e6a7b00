"""Batch command line: gen | compress | eval | compare | serve.

Exit codes: 0 success, 1 validation error, 2 I/O error.
"""

from __future__ import annotations

import json
import statistics
import sys

import click

from .core import (
    Valuation,
    bundle_size,
    evaluate_bundle,
    parse_bundle,
    serialize_bundle,
    valuation_from_obj,
)
from .errors import EvaluationError, ParseError, ValidationError
from .generator import GenConfig, generate
from .optimizer import diagnostics_obj, optimize
from .tree import (
    apply_abstraction,
    default_meta_valuation,
    induced_valuation,
    parse_tree,
    validate_cut,
)

TIMING_REPEATS = 5


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _dump_json(obj: object) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _load_valuation(path: str | None) -> Valuation:
    if path is None:
        return Valuation({}, 1.0)
    obj = json.loads(_read(path))
    return valuation_from_obj(obj)


@click.group()
def cli() -> None:
    """Provenance compression and what-if evaluation workbench."""


@cli.command()
@click.option("--customers", type=int, required=True)
@click.option("--months", type=int, required=True)
@click.option("--zips", type=int, required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", required=True, help="bundle JSON output path")
@click.option("--tree-out", "tree_out", default=None, help="abstraction tree JSON output path")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json")
def gen(customers: int, months: int, zips: int, seed: int, out_path: str, tree_out: str | None, fmt: str) -> None:
    """Generate a synthetic telephony bundle (and its plans tree)."""
    bundle, tree, _ = generate(GenConfig(customers=customers, months=months, zips=zips, seed=seed))
    _write(out_path, serialize_bundle(bundle, fmt))
    if tree_out:
        _write(tree_out, _dump_json(tree.to_obj()))
    click.echo(f"wrote {bundle_size(bundle)} monomials to {out_path}")


@cli.command()
@click.option("-p", "--provenance", required=True, help="bundle file")
@click.option("-t", "--tree", "tree_path", required=True, help="abstraction tree JSON")
@click.option("-b", "--bound", type=int, required=True)
@click.option("-o", "--out", "out_path", default=None, help="result JSON output path")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json")
@click.option("--compressed-out", default=None, help="also write the compressed bundle here")
@click.option("--diagnostics-out", default=None, help="write DP diagnostics JSON here")
def compress(provenance, tree_path, bound, out_path, fmt, compressed_out, diagnostics_out) -> None:
    """Pick the optimal cut under the size bound and report it."""
    if bound < 1:
        raise ValidationError("bound must be ≥ 1")
    bundle = parse_bundle(_read(provenance), fmt)
    tree = parse_tree(_read(tree_path))
    result = optimize(bundle, tree, bound)
    payload = result.to_obj()
    payload["original_size"] = result.diagnostics.full_size
    payload["min_size"] = result.diagnostics.min_size
    if out_path:
        _write(out_path, _dump_json(payload))
    if compressed_out:
        _write(compressed_out, serialize_bundle(result.compressed, fmt))
    if diagnostics_out:
        _write(diagnostics_out, _dump_json(diagnostics_obj(result)))
    status = "" if result.feasible else " (INFEASIBLE bound; showing the coarsest cut)"
    click.echo(
        f"cut {{{', '.join(result.cut.nodes)}}}: size {result.size}, "
        f"expressiveness {result.expressiveness}{status}"
    )


@cli.command("eval")
@click.option("-p", "--provenance", required=True)
@click.option("-v", "--valuation", "valuation_path", default=None, help="valuation JSON")
@click.option("-o", "--out", "out_path", default=None, help="values JSON output path")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json")
def eval_cmd(provenance, valuation_path, out_path, fmt) -> None:
    """Evaluate a bundle under a valuation; prints key=value lines."""
    bundle = parse_bundle(_read(provenance), fmt)
    val = _load_valuation(valuation_path)
    values, _ = evaluate_bundle(bundle, val)
    for key, value in values.items():
        click.echo(f"{key}={value:g}")
    if out_path:
        _write(out_path, _dump_json(values))


@cli.command()
@click.option("-p", "--provenance", required=True)
@click.option("-t", "--tree", "tree_path", required=True)
@click.option("-c", "--compression-result", "result_path", required=True, help="result JSON from compress")
@click.option("-v", "--valuation", "valuation_path", default=None, help="meta-variable valuation JSON")
@click.option("--baseline", "baseline_path", default=None, help="baseline valuation JSON (default: all ones)")
@click.option("-o", "--out", "out_path", default=None, help="machine-readable comparison JSON")
@click.option("--report", "report_dir", default=None, help="write comparison.csv plus figures here")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json")
def compare(provenance, tree_path, result_path, valuation_path, baseline_path, out_path, report_dir, fmt) -> None:
    """Evaluate a scenario on full vs. compressed provenance and compare."""
    bundle = parse_bundle(_read(provenance), fmt)
    tree = parse_tree(_read(tree_path))
    result_obj = json.loads(_read(result_path))
    cut = validate_cut(tree, result_obj.get("cut", []))
    mapping = {leaf: meta for leaf, meta in result_obj.get("mapping", {}).items()}
    if not mapping:
        from .tree import cut_mapping

        mapping = cut_mapping(tree, cut)
    baseline = _load_valuation(baseline_path)
    scenario = _load_valuation(valuation_path)

    compressed = apply_abstraction(bundle, tree, cut)
    meta_val = default_meta_valuation(bundle, mapping, baseline)
    meta_val = meta_val.with_overrides(scenario.assignments)
    full_val = induced_valuation(meta_val, mapping)

    baseline_values, _ = evaluate_bundle(bundle, baseline)

    def timed(b, v):
        durations = []
        values = {}
        for _ in range(TIMING_REPEATS):
            values, d = evaluate_bundle(b, v)
            durations.append(d)
        return values, statistics.median(durations)

    full_values, t_full = timed(bundle, full_val)
    comp_values, t_comp = timed(compressed, meta_val)
    speedup = 100.0 * (1.0 - t_comp / t_full) if t_full > 0 else 0.0

    rows = [
        {
            "key": key,
            "baseline": baseline_values[key],
            "full": full_values[key],
            "compressed": comp_values[key],
            "delta": full_values[key] - baseline_values[key],
        }
        for key in full_values
    ]

    header = f"{'key':<12}{'baseline':>14}{'full':>14}{'compressed':>14}{'delta':>14}"
    click.echo(header)
    click.echo("-" * len(header))
    for r in rows:
        click.echo(
            f"{r['key']:<12}{r['baseline']:>14.4f}{r['full']:>14.4f}"
            f"{r['compressed']:>14.4f}{r['delta']:>14.4f}"
        )
    click.echo("")
    click.echo(f"size: full {bundle_size(bundle)}, compressed {bundle_size(compressed)}")
    click.echo(f"median evaluation time: full {t_full:.6f}s, compressed {t_comp:.6f}s")
    click.echo(f"speedup: {speedup:.1f}%")

    summary = {
        "rows": rows,
        "sizes": {"full": bundle_size(bundle), "compressed": bundle_size(compressed)},
        "timings": {"full": t_full, "compressed": t_comp},
        "speedup_pct": speedup,
    }
    if out_path:
        _write(out_path, _dump_json(summary))
    if report_dir:
        from .report import write_report

        paths = write_report(report_dir, rows, summary["sizes"], summary["timings"], speedup)
        for p in paths:
            click.echo(f"wrote {p}")


@cli.command()
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--static", "static_dir", default=None, help="directory with the dashboard build")
def serve(port: int, host: str, static_dir: str | None) -> None:
    """Run the HTTP API (and optionally serve the dashboard)."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(static_dir=static_dir), host=host, port=port)


def main(argv: list[str] | None = None) -> int:
    """Entry point with the documented exit-code contract."""
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return 1
    except (ParseError, ValidationError, EvaluationError, json.JSONDecodeError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except OSError as exc:
        click.echo(f"I/O error: {exc}", err=True)
        return 2
    except click.exceptions.Exit as exc:  # --help and friends
        return int(exc.exit_code)
    except click.Abort:
        return 1


if __name__ == "__main__":
    sys.exit(main())
