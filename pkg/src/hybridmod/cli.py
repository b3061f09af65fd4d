"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 domain error, 3 calibration required.
"""

from __future__ import annotations

import csv
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import click

from . import dse
from .costs import CostTable, calibrate_cost_table, default_cost_table, load_table1
from .errors import CalibrationError, CalibrationRequiredError, HybridModError
from .hybrid import HybridSplit, balanced_m, reduce_hybrid
from .iterative import IterConfig, reduce_iterative
from .lut import DEFAULT_CAPACITY_BITS, LutGeometry, max_k, reduce_lut
from .modmath import Modulus, Operand, to_hex
from .perf import ThroughputSpec, as_fraction
from .reproduce import FIELDS as TABLE_FIELDS, reproduce

EXIT_USAGE, EXIT_DOMAIN, EXIT_CALIBRATION = 1, 2, 3
TP_SWEEP = (Fraction(1, 16), Fraction(1, 8), Fraction(1, 4), Fraction(1, 2))


class Settings:
    def __init__(self):
        self.capacity_bits = DEFAULT_CAPACITY_BITS
        self.cost_table = None
        self.fmt = "csv"
        self.out = None


def _global_options(f):
    f = click.option("--capacity-bits", type=click.IntRange(min=1), default=None,
                     help="Storage block capacity in bits (default 36864).")(f)
    f = click.option("--cost-table", type=click.Path(dir_okay=False), default=None,
                     help="Cost table file (default: shipped calibration).")(f)
    f = click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default=None)(f)
    f = click.option("--out", type=click.Path(), default=None, help="Output path.")(f)
    return f


def _settings(ctx, capacity_bits, cost_table, fmt, out) -> Settings:
    s = ctx.ensure_object(Settings)
    if capacity_bits is not None:
        s.capacity_bits = capacity_bits
    if cost_table is not None:
        s.cost_table = cost_table
    if fmt is not None:
        s.fmt = fmt
    if out is not None:
        s.out = out
    return s


def _costs(s: Settings) -> CostTable:
    return CostTable.load(s.cost_table) if s.cost_table else default_cost_table()


@click.group()
@_global_options
@click.pass_context
def cli(ctx, capacity_bits, cost_table, fmt, out):
    """Modular reduction models: reduce, tables, explore, calibrate, trace."""
    _settings(ctx, capacity_bits, cost_table, fmt, out)


def _reduce(s, method, n, a_hex, m_hex, k, m, width_tree):
    M = Modulus.from_hex(m_hex, n)
    A = Operand.from_hex(a_hex, 2 * n)
    k = k if k is not None else max_k(n, s.capacity_bits)
    if method == "lut":
        res, trace = reduce_lut(A, M, LutGeometry(n, k, s.capacity_bits))
        value = res.value
    elif method == "iter":
        value, trace = reduce_iterative(A, M, IterConfig(2 * n, n))
    else:
        split = HybridSplit(n, k, balanced_m(n, k) if m is None else m, width_tree)
        res, trace = reduce_hybrid(A, M, split)
        value = res.value
    return value, trace


def _reduce_options(f):
    f = click.option("--width-tree", type=click.IntRange(min=0), default=0, help="Hybrid adder-tree width.")(f)
    f = click.option("--m", "m", type=click.IntRange(min=0), default=None, help="Hybrid split (default: balanced).")(f)
    f = click.option("--k", type=click.IntRange(min=1), default=None, help="Table input width (default: max that fits).")(f)
    f = click.option("--M", "m_hex", required=True, help="Modulus, hex.")(f)
    f = click.option("--A", "a_hex", required=True, help="Operand (2n bits), hex.")(f)
    f = click.option("--n", type=click.IntRange(min=2), required=True, help="Modulus width in bits.")(f)
    return f


def _emit_reduce(s, value, trace, n, show_trace):
    if s.fmt == "json":
        doc = {"residue": to_hex(value, n), "total_cycles": trace.total_cycles}
        if show_trace:
            doc["events"] = [{"cycle": e.cycle, "unit": e.unit.value, "note": e.note} for e in trace.events]
        _write_text(s.out, json.dumps(doc, indent=1) + "\n")
        return
    text = to_hex(value, n) + "\n"
    if show_trace:
        text += trace.format() + "\n"
    _write_text(s.out, text)


def _write_text(path, text):
    if path:
        Path(path).write_text(text)
    else:
        click.echo(text, nl=False)


@cli.command()
@click.option("--method", type=click.Choice(["lut", "iter", "hybrid"]), default="hybrid")
@_reduce_options
@click.option("--trace", "show_trace", is_flag=True, help="Print cycle-annotated events.")
@_global_options
@click.pass_context
def reduce(ctx, method, n, a_hex, m_hex, k, m, width_tree, show_trace, capacity_bits, cost_table, fmt, out):
    """Reduce A mod M with one of the datapath models; prints the residue in hex."""
    s = _settings(ctx, capacity_bits, cost_table, fmt, out)
    value, trace = _reduce(s, method, n, a_hex, m_hex, k, m, width_tree)
    _emit_reduce(s, value, trace, n, show_trace)


@cli.command()
@click.option("--method", type=click.Choice(["lut", "iter", "hybrid"]), default="hybrid")
@_reduce_options
@_global_options
@click.pass_context
def trace(ctx, method, n, a_hex, m_hex, k, m, width_tree, capacity_bits, cost_table, fmt, out):
    """Like ``reduce --trace``."""
    s = _settings(ctx, capacity_bits, cost_table, fmt, out)
    value, tr = _reduce(s, method, n, a_hex, m_hex, k, m, width_tree)
    _emit_reduce(s, value, tr, n, True)


@cli.command()
@_global_options
@click.pass_context
def tables(ctx, capacity_bits, cost_table, fmt, out):
    """Regenerate the published comparison table with model-minus-printed diffs."""
    s = _settings(ctx, capacity_bits, cost_table, fmt, out)
    rows = reproduce(_costs(s), capacity_bits=s.capacity_bits)
    if s.fmt == "json":
        _write_text(s.out, json.dumps(rows, indent=1) + "\n")
        return
    fh = open(s.out, "w", newline="") if s.out else sys.stdout
    try:
        w = csv.DictWriter(fh, TABLE_FIELDS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    finally:
        if s.out:
            fh.close()


def _limit(x):
    return math.inf if x is None else x


@cli.command()
@click.option("--n", type=click.IntRange(min=2), required=True)
@click.option("--k", type=click.IntRange(min=1), default=None)
@click.option("--tp", default="1/2", help="Target throughput, e.g. 0.5 or 1/4.")
@click.option("--latency-req", type=click.FloatRange(min=0), default=None)
@click.option("--area-req", type=click.FloatRange(min=0), default=None)
@click.option("--tp-sweep", is_flag=True, help="Also write frontier.csv for tp = 1/16 .. 1/2.")
@click.option("--pareto-only", is_flag=True, help="Skip the full feasible-set file.")
@_global_options
@click.pass_context
def explore(ctx, n, k, tp, latency_req, area_req, tp_sweep, pareto_only, capacity_bits, cost_table, fmt, out):
    """Enumerate design points, write feasible and Pareto scheme files into --out."""
    s = _settings(ctx, capacity_bits, cost_table, fmt, out)
    k = k if k is not None else max_k(n, s.capacity_bits)
    LutGeometry(n, k, s.capacity_bits)
    costs = _costs(s)
    c = dse.Constraints(_limit(latency_req), _limit(area_req), ThroughputSpec(_parse_tp(tp)))
    outdir = Path(s.out or f"explore_n{n}")
    outdir.mkdir(parents=True, exist_ok=True)

    count, front = dse.frontier(n, k, c, costs)
    keys = {(f.m, f.width_tree) for f in front}
    ext = s.fmt
    if s.fmt == "json":
        dse.write_schemes_json(outdir / "pareto.json", n, k, c, front, keys)
        if not pareto_only:
            dse.write_schemes_json(outdir / "feasible.json", n, k, c, dse.search(n, k, c, costs), keys)
    else:
        dse.write_schemes_csv(outdir / "pareto.csv", front, keys)
        if not pareto_only:
            dse.write_blocks_csv(outdir / "feasible.csv", n, k, c, costs, keys)
    if tp_sweep:
        _write_frontier(outdir / "frontier.csv", dse.frontier_report(n, k, TP_SWEEP, costs, c.latency_req, c.area_req))

    if count == 0:
        click.echo("warning: no feasible scheme under the given constraints", err=True)
    click.echo(f"n={n} k={k} tp={c.tp.tp} feasible={count} pareto={len(front)}")
    if front:
        best_eff = min(front, key=lambda f: (f.area, f.latency))
        best_lat = front[0]
        click.echo(f"best efficiency: m={best_eff.m} width_tree={best_eff.width_tree} "
                   f"latency={best_eff.latency} area={best_eff.area:g} efficiency={best_eff.efficiency:.2f}")
        click.echo(f"best latency:    m={best_lat.m} width_tree={best_lat.width_tree} "
                   f"latency={best_lat.latency} area={best_lat.area:g} efficiency={best_lat.efficiency:.2f}")
    click.echo(f"wrote {outdir}/pareto.{ext}" + ("" if pareto_only else f" and {outdir}/feasible.{ext}"))


def _write_frontier(path, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["tp"] + dse.CSV_FIELDS)
        for r in rows:
            w.writerow([str(r.tp)] + dse.scheme_row(r.scheme, True))


def _parse_tp(text: str) -> Fraction:
    try:
        return as_fraction(float(text)) if "/" not in text else Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise click.BadParameter(f"not a throughput: {text!r}", param_hint="--tp") from None


@cli.command()
@click.option("--table1", "table1_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Published results CSV (default: shipped asset).")
@_global_options
@click.pass_context
def calibrate(ctx, table1_path, capacity_bits, cost_table, fmt, out):
    """Fit per-width BRAM/adder/subtractor areas to the published efficiencies."""
    s = _settings(ctx, capacity_bits, cost_table, fmt, out)
    table, reports = calibrate_cost_table(load_table1(table1_path))
    for r in reports:
        click.echo(r.note(), err=True)
    _write_text(s.out, table.dumps())


def main(argv=None) -> int:
    try:
        cli.main(args=argv, prog_name="hybridmod", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.Abort:
        return EXIT_USAGE
    except click.UsageError as exc:
        exc.show()
        return EXIT_USAGE
    except CalibrationRequiredError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_CALIBRATION
    except CalibrationError as exc:
        click.echo(f"error: calibration failed for row n={exc.n}: {exc} {exc.diagnostics}", err=True)
        return EXIT_DOMAIN
    except HybridModError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_DOMAIN
    return 0


if __name__ == "__main__":
    sys.exit(main())
