"""Figure rendering for experiment CSV tables.

Reads only the pinned CSV schemas (slots, runs, bounds); no coupling to the
simulator package.  Three figure kinds:

area-vs-slot: mean normalized area per slot, one curve per slots csv.
    Runs that finished early carry their final value forward so the mean
    stays comparable across the whole horizon.
area-cdf: empirical CDF of each vehicle's final normalized area.
tau-cdf: empirical CDF of slots-to-completion over connected runs, with a
    vertical line at each lower bound taken from a bounds csv.

Renders are pure functions of the inputs: fixed style, no timestamps.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

AREA_VS_SLOT = "area-vs-slot"
AREA_CDF = "area-cdf"
TAU_CDF = "tau-cdf"
KINDS = (AREA_VS_SLOT, AREA_CDF, TAU_CDF)

SLOTS_COLUMNS = ("run", "seed", "slot", "vehicle", "normalized_area", "m_tau", "failures")
RUNS_COLUMNS = (
    "run",
    "seed",
    "nv",
    "tau_end",
    "connected",
    "complete",
    "scheduled",
    "failed",
    "skipped",
    "violations",
    "area_all_m2",
)
BOUNDS_COLUMNS = ("nv", "lower", "upper")

_STYLE = {
    "figure.figsize": (6.4, 4.2),
    "figure.dpi": 110,
    "savefig.dpi": 110,
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "svg.hashsalt": "beamshare-plots",
}


class PlotError(ValueError):
    """Unusable input or spec; the CLI maps this to a nonzero exit."""


@dataclass(frozen=True)
class FigureSpec:
    inputs: tuple[Path, ...]
    kind: str
    out: Path
    labels: tuple[str, ...] = field(default=())


def read_table(path: Path) -> tuple[tuple[str, ...], list[dict]]:
    """CSV as (header, row dicts); empty or header-only files are errors."""
    try:
        with Path(path).open(newline="") as f:
            reader = csv.reader(f)
            try:
                header = tuple(next(reader))
            except StopIteration:
                raise PlotError(f"{path}: empty csv, nothing to plot") from None
            rows = [dict(zip(header, r)) for r in reader]
    except OSError as e:
        raise PlotError(f"cannot read {path}: {e}") from None
    if not rows:
        raise PlotError(f"{path}: no data rows, nothing to plot")
    return header, rows


def require_columns(path: Path, header: tuple[str, ...], needed: tuple[str, ...]) -> None:
    missing = [c for c in needed if c not in header]
    if missing:
        raise PlotError(f"{path}: csv schema mismatch, missing column(s) {', '.join(missing)}")


def empirical_cdf(values) -> list[tuple[float, float]]:
    xs = sorted(float(v) for v in values)
    n = len(xs)
    points = []
    for i, x in enumerate(xs, start=1):
        if i == n or xs[i] != x:
            points.append((x, i / n))
    return points


def area_series(rows: list[dict]) -> dict[tuple[int, int], list[float]]:
    """(run, vehicle) -> per-slot normalized areas, in slot order."""
    series: dict[tuple[int, int], list[tuple[int, float]]] = {}
    for r in rows:
        key = (int(r["run"]), int(r["vehicle"]))
        series.setdefault(key, []).append((int(r["slot"]), float(r["normalized_area"])))
    return {k: [a for _, a in sorted(pts)] for k, pts in series.items()}


def mean_curve(rows: list[dict]) -> list[tuple[int, float]]:
    """Mean area per slot; shorter series repeat their final value."""
    series = area_series(rows)
    horizon = max(len(s) for s in series.values())
    curve = []
    for t in range(horizon):
        vals = [s[t] if t < len(s) else s[-1] for s in series.values()]
        curve.append((t, sum(vals) / len(vals)))
    return curve


def final_areas(rows: list[dict]) -> list[float]:
    return [s[-1] for s in area_series(rows).values()]


def completion_slots(rows: list[dict]) -> list[int]:
    """tau_end of connected runs (disconnected runs never complete)."""
    return [int(r["tau_end"]) for r in rows if int(r["connected"]) == 1]


def lower_bound_lines(bounds_rows: list[dict], nv_seen: set[int]) -> list[int]:
    """Lower bounds to mark: the fleet sizes present in the data, or every
    row of the bounds table when none of them match."""
    matched = sorted(int(r["lower"]) for r in bounds_rows if int(r["nv"]) in nv_seen)
    if matched:
        return matched
    return sorted(int(r["lower"]) for r in bounds_rows)


def _series_labels(paths: list[Path], labels: tuple[str, ...]) -> list[str]:
    if labels:
        if len(labels) != len(paths):
            raise PlotError(
                f"got {len(labels)} label(s) for {len(paths)} data input(s)"
            )
        return list(labels)
    names = [p.stem for p in paths]
    if len(set(names)) < len(names):
        names = [str(Path(p.parent.name) / p.stem) if p.parent.name else p.stem for p in paths]
    return names


def _plot_cdf(ax, points, label):
    xs = [x for x, _ in points]
    ys = [y for _, y in points]
    ax.step(xs, ys, where="post", label=label)
    ax.set_ylim(0.0, 1.05)


def render(spec: FigureSpec) -> Path:
    """Render one figure; raises PlotError before any file is written."""
    if spec.kind not in KINDS:
        raise PlotError(f"unknown figure kind {spec.kind!r}, expected one of {KINDS}")
    if not spec.inputs:
        raise PlotError("no input csv files given")
    tables = [(Path(p), *read_table(Path(p))) for p in spec.inputs]

    if spec.kind == TAU_CDF:
        data, bounds = [], []
        for path, header, rows in tables:
            if all(c in header for c in BOUNDS_COLUMNS) and "tau_end" not in header:
                bounds.extend(rows)
            else:
                require_columns(path, header, ("nv", "tau_end", "connected"))
                data.append((path, rows))
        if not data:
            raise PlotError("tau-cdf needs at least one runs csv")
        if not bounds:
            raise PlotError("tau-cdf needs the bounds table (nv,lower,upper csv)")
    else:
        data = []
        for path, header, rows in tables:
            require_columns(path, header, ("run", "slot", "vehicle", "normalized_area"))
            data.append((path, rows))

    names = _series_labels([p for p, _ in data], spec.labels)

    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        if spec.kind == AREA_VS_SLOT:
            for (path, rows), label in zip(data, names):
                curve = mean_curve(rows)
                ax.plot([t for t, _ in curve], [a for _, a in curve], label=label)
            ax.set_xlabel("time slot")
            ax.set_ylabel("mean normalized perceivable area")
            ax.set_ylim(0.0, 1.05)
        elif spec.kind == AREA_CDF:
            for (path, rows), label in zip(data, names):
                _plot_cdf(ax, empirical_cdf(final_areas(rows)), label)
            ax.set_xlabel("final normalized perceivable area")
            ax.set_ylabel("cumulative fraction of vehicles")
        else:
            nv_seen: set[int] = set()
            for path, rows in data:
                nv_seen.update(int(r["nv"]) for r in rows if int(r["connected"]) == 1)
            for (path, rows), label in zip(data, names):
                taus = completion_slots(rows)
                if not taus:
                    raise PlotError(f"{path}: no connected runs, nothing to plot")
                _plot_cdf(ax, empirical_cdf(taus), label)
            for xb in lower_bound_lines(bounds, nv_seen):
                ax.axvline(xb, color="black", linestyle="--", linewidth=1.0)
            ax.set_xlabel("slots to completion")
            ax.set_ylabel("cumulative fraction of runs")
        if len(names) > 1:
            ax.legend()
        fig.tight_layout()
        out = Path(spec.out)
        metadata = {"Date": None} if out.suffix == ".svg" else {"Software": "beamshare-plots"}
        try:
            fig.savefig(out, metadata=metadata)
        finally:
            plt.close(fig)
    return out
