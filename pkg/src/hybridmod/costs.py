"""Per-width area cost tables and their calibration from published results.

The published comparison gives, for each width, three methods' efficiencies
and resource breakdowns at tp = 1/2. Since efficiency = tp / area, every row
yields three linear equations in the three unit costs (BRAM, adder,
subtractor), which are solved directly. At large widths the efficiencies are
printed with one or two significant digits and the direct solve can return a
negative BRAM cost; those rows fall back to the median BRAM cost of the
well-conditioned rows (a BRAM is the same physical block at every width) and a
least-squares fit, in relative error, of a single adder/subtractor cost.
"""

from __future__ import annotations

import csv
import io
import statistics
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import CalibrationError, CalibrationRequiredError, ConfigurationError
from .perf import MAX_TP, ResourceCount

PRINT_STEP = 0.01  # efficiencies are printed to two decimals
METHODS = ("lut", "iter", "hybrid")


@dataclass(frozen=True)
class CostEntry:
    area_bram: float
    area_adder: float
    area_subtractor: float

    def __post_init__(self):
        if min(self.area_bram, self.area_adder, self.area_subtractor) <= 0:
            raise ConfigurationError(f"cost entries must be positive: {self}")

    def as_tuple(self):
        return (self.area_bram, self.area_adder, self.area_subtractor)


class CostTable:
    """Read-only mapping from width n to unit areas in LUT-equivalents."""

    def __init__(self, entries: dict[int, CostEntry | tuple], notes: Iterable[str] = ()):
        table = {}
        for n, e in sorted(entries.items()):
            table[int(n)] = e if isinstance(e, CostEntry) else CostEntry(*e)
        widths = sorted(table)
        for lo, hi in zip(widths, widths[1:]):
            if table[hi].area_adder < table[lo].area_adder or table[hi].area_subtractor < table[lo].area_subtractor:
                raise ConfigurationError(f"adder/subtractor costs decrease between n={lo} and n={hi}")
        self._entries = table
        self.notes = list(notes)

    def entry(self, n: int) -> CostEntry:
        try:
            return self._entries[n]
        except KeyError:
            raise CalibrationRequiredError(
                f"no cost entry for n={n}; run `calibrate` or pass --cost-table"
            ) from None

    def __contains__(self, n):
        return n in self._entries

    def widths(self) -> list[int]:
        return list(self._entries)

    def __eq__(self, other):
        return isinstance(other, CostTable) and self._entries == other._entries

    def __repr__(self):
        return f"CostTable({self._entries!r})"

    @classmethod
    def uniform(cls, widths: Iterable[int], area_bram=512, area_adder=768, area_subtractor=768) -> "CostTable":
        return cls({n: CostEntry(area_bram, area_adder, area_subtractor) for n in widths})

    # -- text format: "n, area_bram, area_adder, area_subtractor", '#' comments
    def dumps(self) -> str:
        out = io.StringIO()
        for line in self.notes:
            out.write(f"# {line}\n")
        out.write("# n, area_bram, area_adder, area_subtractor\n")
        for n, e in self._entries.items():
            out.write(f"{n}, {_num(e.area_bram)}, {_num(e.area_adder)}, {_num(e.area_subtractor)}\n")
        return out.getvalue()

    def save(self, path) -> None:
        Path(path).write_text(self.dumps())

    @classmethod
    def loads(cls, text: str) -> "CostTable":
        entries, notes = {}, []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                note = line[1:].strip()
                if note != "n, area_bram, area_adder, area_subtractor":
                    notes.append(note)
                continue
            parts = [p.strip() for p in line.split(",")]
            if len(parts) != 4:
                raise ConfigurationError(f"cost table line {lineno}: expected 4 fields, got {len(parts)}")
            try:
                entries[int(parts[0])] = CostEntry(*(float(p) for p in parts[1:]))
            except ValueError as exc:
                raise ConfigurationError(f"cost table line {lineno}: {exc}") from None
        return cls(entries, notes)

    @classmethod
    def load(cls, path) -> "CostTable":
        p = Path(path)
        if not p.exists():
            raise CalibrationRequiredError(f"cost table {p} does not exist; run `calibrate` first")
        return cls.loads(p.read_text())


def _num(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def default_cost_table() -> CostTable:
    """The cost table calibrated from the shipped published-results asset."""
    return CostTable.loads(resources.files("hybridmod.data").joinpath("costs.csv").read_text())


# -- published results asset ---------------------------------------------------

def _triple(text: str) -> ResourceCount:
    return ResourceCount(*(int(x) for x in text.split(";")))


@dataclass(frozen=True)
class Table1Row:
    n: int
    efficiency: dict          # method -> printed efficiency
    improvement: float
    latency: dict             # method -> printed cycles
    printed_breakdown: dict   # method -> ResourceCount as printed
    breakdown: dict           # method -> ResourceCount with errata applied
    workloads: tuple[int, int]
    errata: dict = field(default_factory=dict)


def parse_table1(text: str) -> list[Table1Row]:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    rows = []
    for rec in csv.DictReader(lines):
        printed = {m: _triple(rec[f"bd_{m}"]) for m in METHODS}
        errata = {}
        for item in filter(None, (rec.get("errata") or "").split("|")):
            key, val = item.split("=")
            errata[key.strip()] = int(val)
        fixed = dict(printed)
        if "lut_adders" in errata:
            b = printed["lut"]
            fixed["lut"] = ResourceCount(b.brams, errata["lut_adders"], b.subtractors)
        hi, lo = rec["workloads"].split(":")
        rows.append(
            Table1Row(
                n=int(rec["n"]),
                efficiency={m: float(rec[f"eff_{m}"]) for m in METHODS},
                improvement=float(rec["improvement"]),
                latency={m: int(rec[f"lat_{m}"]) for m in METHODS},
                printed_breakdown=printed,
                breakdown=fixed,
                workloads=(int(hi), int(lo)),
                errata=errata,
            )
        )
    return rows


def load_table1(path=None) -> list[Table1Row]:
    if path is None:
        text = resources.files("hybridmod.data").joinpath("table1.csv").read_text()
    else:
        text = Path(path).read_text()
    return parse_table1(text)


# -- calibration ---------------------------------------------------------------

@dataclass(frozen=True)
class CalibrationReport:
    n: int
    method: str                  # "exact" or "pinned"
    raw_solution: tuple          # direct 3x3 solve before rounding
    costs: CostEntry
    model_efficiency: dict
    residual: dict               # model - printed efficiency per method

    @property
    def max_residual_steps(self) -> float:
        """Largest residual in units of the printed precision (0.01)."""
        return max(abs(r) for r in self.residual.values()) / PRINT_STEP

    def note(self) -> str:
        res = " ".join(f"{m}={self.residual[m]:+.4g}" for m in METHODS)
        return f"n={self.n} method={self.method} residual[{res}] max_steps={self.max_residual_steps:.3f}"


def _system(row: Table1Row, tp: Fraction):
    A = np.array([row.breakdown[m].as_tuple() for m in METHODS], dtype=float)
    rhs = np.array([float(tp) * 1e9 / row.efficiency[m] for m in METHODS])
    return A, rhs


def _model_eff(row: Table1Row, entry: CostEntry, tp: Fraction) -> dict:
    out = {}
    for m in METHODS:
        b = row.breakdown[m]
        area = b.brams * entry.area_bram + b.adders * entry.area_adder + b.subtractors * entry.area_subtractor
        out[m] = float(tp) / area * 1e9
    return out


def calibrate_cost_table(rows: list[Table1Row], tp=MAX_TP) -> tuple[CostTable, list[CalibrationReport]]:
    tp = Fraction(tp)
    solved = {}
    for row in rows:
        if min(row.efficiency.values()) <= 0:
            raise CalibrationError(f"row n={row.n}: efficiencies must be positive", n=row.n)
        A, rhs = _system(row, tp)
        cond = np.linalg.cond(A)
        if not np.isfinite(cond) or cond > 1e12:
            raise CalibrationError(
                f"row n={row.n}: singular calibration system", n=row.n,
                diagnostics={"condition": float(cond), "matrix": A.tolist()},
            )
        solved[row.n] = np.linalg.solve(A, rhs)

    exact_bram = [float(x[0]) for x in solved.values() if (x > 0).all()]
    entries, reports = {}, []
    for row in rows:
        x = solved[row.n]
        if (x > 0).all():
            method = "exact"
            entry = CostEntry(*(float(round(v)) for v in x))
        else:
            if not exact_bram:
                raise CalibrationError(
                    f"row n={row.n}: direct solve gives non-positive costs {x.tolist()} "
                    "and no well-conditioned row exists to pin the BRAM cost",
                    n=row.n, diagnostics={"solution": x.tolist()},
                )
            method = "pinned"
            bram = float(round(statistics.median(exact_bram)))
            A, rhs = _system(row, tp)
            fixed = A[:, 0] * bram / rhs
            slope = (A[:, 1] + A[:, 2]) / rhs
            unit = float(np.dot(slope, 1.0 - fixed) / np.dot(slope, slope))
            if unit <= 0:
                raise CalibrationError(f"row n={row.n}: fitted adder cost {unit} is not positive", n=row.n)
            entry = CostEntry(bram, float(round(unit)), float(round(unit)))
        eff = _model_eff(row, entry, tp)
        reports.append(
            CalibrationReport(
                n=row.n, method=method, raw_solution=tuple(float(v) for v in x), costs=entry,
                model_efficiency=eff, residual={m: eff[m] - row.efficiency[m] for m in METHODS},
            )
        )
        entries[row.n] = entry
    notes = ["calibrated from published efficiencies at tp=%s" % tp] + [r.note() for r in reports]
    return CostTable(entries, notes), reports
