"""Experiment harness: Monte-Carlo runs over random intersection scenarios,
CSV outputs, and a plain-text summary.

Config files are line-oriented ``key = value`` documents ('#' starts a
comment).  Unknown keys are rejected so typos fail loudly.  Replication r
draws its scenario from seed ``seed + r`` and that seed is recorded in every
output row, making each row reproducible in isolation.

Output schemas are pinned (golden-tested, consumed by the plotting tool):

slots.csv: run, seed, slot, vehicle, normalized_area, m_tau, failures
    One row per (run, elapsed slot, vehicle).  Slot 0 is the pre-sharing
    state, so m_tau and failures are 0 there; slot t reflects the dataset
    after t slots, with that slot's planned transmission count and failed
    reception count.

runs.csv: run, seed, nv, tau_end, connected, complete, scheduled, failed,
    skipped, violations, area_all_m2
    One row per run; flags are 0/1; area_all_m2 is the area of the union of
    every vehicle's sensor region in square meters.

bounds output: nv, lower, upper
"""

from __future__ import annotations

import argparse
import csv
import statistics
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from .coverage import empirical_cdf
from .geometry import ScenarioConfig, build_scenario
from .mwis import GREEDY_RULES, GWMIN
from .propagation import RadioConfig
from .schedgraph import CONFLICT_MODES, MAX_TRANSMISSION, MMWAVE_D_PRIME, WEIGHT_MODES
from .simulator import run_interval, tau_bounds


class ConfigError(ValueError):
    """Bad config file, key, value, or flag combination (exit code 2)."""


SLOTS_HEADER = ("run", "seed", "slot", "vehicle", "normalized_area", "m_tau", "failures")
RUNS_HEADER = (
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
BOUNDS_HEADER = ("nv", "lower", "upper")


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: ScenarioConfig = ScenarioConfig()
    radio: RadioConfig = RadioConfig()
    mode: str = MMWAVE_D_PRIME
    weight: str = MAX_TRANSMISSION
    tau_max: int | None = 380
    reps: int = 1
    seed_base: int = 0
    grid_res: float = 0.25
    rule: str = GWMIN
    workers: int = 1
    out: str | None = None

    def validated(self) -> "ExperimentConfig":
        if self.mode not in CONFLICT_MODES:
            raise ConfigError(f"mode must be one of {CONFLICT_MODES}, got {self.mode!r}")
        if self.weight not in WEIGHT_MODES:
            raise ConfigError(f"weight must be one of {WEIGHT_MODES}, got {self.weight!r}")
        if self.rule not in GREEDY_RULES:
            raise ConfigError(f"rule must be one of {GREEDY_RULES}, got {self.rule!r}")
        if self.reps < 1:
            raise ConfigError("reps must be at least 1")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        if self.tau_max is not None and self.tau_max < 0:
            raise ConfigError("tau_max must be nonnegative or none")
        if self.grid_res <= 0:
            raise ConfigError("grid_res must be positive")
        return self


def _cast_int(v: str) -> int:
    try:
        return int(v)
    except ValueError:
        raise ConfigError(f"expected an integer, got {v!r}") from None


def _cast_float(v: str) -> float:
    try:
        return float(v)
    except ValueError:
        raise ConfigError(f"expected a number, got {v!r}") from None


def _cast_tau_max(v: str):
    if v.lower() in ("none", "inf", "unbounded"):
        return None
    return _cast_int(v)


_SCENARIO_KEYS = {
    "lanes_per_road": _cast_int,
    "lane_width": _cast_float,
    "sidewalk_width": _cast_float,
    "sensor_range": _cast_float,
    "avg_gap": _cast_float,
    "num_vehicles": _cast_int,
    "vehicle_length": _cast_float,
    "vehicle_width": _cast_float,
    "road_extent": _cast_float,
}

_RADIO_KEYS = {
    "bandwidth_hz": _cast_float,
    "noise_density_dbm_hz": _cast_float,
    "rate_bps": _cast_float,
    "tx_power_dbm": _cast_float,
    "beamwidth_deg": _cast_float,
    "sidelobe_floor_dbi": _cast_float,
    "pathloss_exponent": _cast_float,
    "pathloss_ref_db": _cast_float,
    "per_blocker_loss_db": _cast_float,
}

_EXPERIMENT_KEYS = {
    "mode": str,
    "weight": str,
    "tau_max": _cast_tau_max,
    "reps": _cast_int,
    "seed": _cast_int,
    "grid_res": _cast_float,
    "rule": str,
    "workers": _cast_int,
    "out": str,
}


def parse_config_text(text: str) -> dict:
    """Parse a key = value document into typed values; reject unknown or
    duplicate keys."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        caster = _SCENARIO_KEYS.get(key) or _RADIO_KEYS.get(key) or _EXPERIMENT_KEYS.get(key)
        if caster is None:
            raise ConfigError(f"line {lineno}: unknown config key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate config key {key!r}")
        if not val:
            raise ConfigError(f"line {lineno}: empty value for {key!r}")
        values[key] = caster(val)
    return values


def config_from_values(values: dict, base: ExperimentConfig | None = None) -> ExperimentConfig:
    cfg = base if base is not None else ExperimentConfig()
    scen_kwargs = {k: v for k, v in values.items() if k in _SCENARIO_KEYS}
    radio_kwargs = {k: v for k, v in values.items() if k in _RADIO_KEYS}
    if scen_kwargs:
        cfg = replace(cfg, scenario=replace(cfg.scenario, **scen_kwargs))
    if radio_kwargs:
        cfg = replace(cfg, radio=replace(cfg.radio, **radio_kwargs))
    exp_map = {"seed": "seed_base"}
    for k, v in values.items():
        if k in _EXPERIMENT_KEYS:
            cfg = replace(cfg, **{exp_map.get(k, k): v})
    return cfg


def load_config(path: str | Path, base: ExperimentConfig | None = None) -> ExperimentConfig:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config file {p}: {e}") from None
    return config_from_values(parse_config_text(text), base)


def run_replication(cfg: ExperimentConfig, r: int):
    """One seeded scenario end to end; returns (slot rows, run row)."""
    seed = cfg.seed_base + r
    scen_cfg = replace(cfg.scenario, rng_seed=seed)
    s = build_scenario(scen_cfg, grid_res=cfg.grid_res)
    _, res = run_interval(
        s, cfg.radio, cfg.mode, cfg.weight, cfg.tau_max, rule=cfg.rule, coverage=True
    )
    n = len(s.vehicles)
    slot_rows = []
    for t in range(res.tau_end + 1):
        m_tau = 0 if t == 0 else res.m_counts[t - 1]
        fails = 0 if t == 0 else len(res.slots[t - 1].failed)
        for v in range(n):
            slot_rows.append((r, seed, t, v, float(res.areas[t, v]), m_tau, fails))
    run_row = (
        r,
        seed,
        n,
        res.tau_end,
        int(res.connected),
        int(res.complete),
        res.scheduled_total,
        res.failed_total,
        res.skipped_total,
        res.pairwise_violations,
        float(res.area_all_m2),
    )
    return slot_rows, run_row


def _collect(cfg: ExperimentConfig):
    if cfg.workers == 1:
        results = [run_replication(cfg, r) for r in range(cfg.reps)]
    else:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            # map preserves submission order, keeping rows sorted by run
            results = list(pool.map(run_replication, [cfg] * cfg.reps, range(cfg.reps)))
    slot_rows = [row for slots, _ in results for row in slots]
    run_rows = [run for _, run in results]
    return slot_rows, run_rows


def run_experiment(cfg: ExperimentConfig) -> dict[str, Path]:
    """Run all replications and write slots.csv, runs.csv, and summary.txt."""
    cfg = cfg.validated()
    if not cfg.out:
        raise ConfigError("run needs an output directory (--out or 'out' in the config)")
    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    slot_rows, run_rows = _collect(cfg)

    paths = {
        "slots": out_dir / "slots.csv",
        "runs": out_dir / "runs.csv",
        "summary": out_dir / "summary.txt",
    }
    written = []
    try:
        with paths["slots"].open("w", newline="") as f:
            written.append(paths["slots"])
            w = csv.writer(f)
            w.writerow(SLOTS_HEADER)
            for run, seed, t, v, area, m_tau, fails in slot_rows:
                w.writerow([run, seed, t, v, f"{area:.6f}", m_tau, fails])
        with paths["runs"].open("w", newline="") as f:
            written.append(paths["runs"])
            w = csv.writer(f)
            w.writerow(RUNS_HEADER)
            for row in run_rows:
                w.writerow(list(row[:-1]) + [f"{row[-1]:.4f}"])
        with paths["summary"].open("w") as f:
            written.append(paths["summary"])
            f.write(summarize_tables(slot_rows, run_rows))
    except BaseException:
        for p in written:
            p.unlink(missing_ok=True)
        raise
    return paths


def summarize_tables(slot_rows, run_rows) -> str:
    """Plain-text rollup: totals, bound checks, mean area curve, CDFs.

    Mean areas carry each run's last value forward so runs that finished
    early still contribute their (constant) final coverage at later slots.
    """
    lines = ["beamshare summary"]
    if run_rows:
        runs = len(run_rows)
        connected = sum(r[4] for r in run_rows)
        complete = sum(r[5] for r in run_rows)
        scheduled = sum(r[6] for r in run_rows)
        failed = sum(r[7] for r in run_rows)
        skipped = sum(r[8] for r in run_rows)
        violations = sum(r[9] for r in run_rows)
        bound_violations = 0
        for r in run_rows:
            if r[4] and r[2] >= 2:
                lo, hi = tau_bounds(r[2])
                if not lo <= r[3] <= hi:
                    bound_violations += 1
        lines += [
            f"runs = {runs}",
            f"connected_runs = {connected}",
            f"complete_runs = {complete}",
            f"scheduled = {scheduled}",
            f"failed = {failed}",
            f"failure_rate = {failed / scheduled if scheduled else 0.0:.6f}",
            f"skipped = {skipped}",
            f"pairwise_violations = {violations}",
            f"bound_violations = {bound_violations}",
        ]
        taus = [r[3] for r in run_rows if r[4]]
        if taus:
            lines += [
                f"tau_end_mean = {statistics.fmean(taus):.4f}",
                f"tau_end_median = {statistics.median(taus):.1f}",
                f"tau_end_min = {min(taus)}",
                f"tau_end_max = {max(taus)}",
            ]
        else:
            lines.append("tau_end_mean = n/a (no connected runs)")
    if slot_rows:
        lines.append("")
        lines.append("[mean normalized area by slot]")
        lines.append("slot,mean_area")
        for t, mean in mean_area_by_slot(slot_rows):
            lines.append(f"{t},{mean:.6f}")
        lines.append("")
        lines.append("[final area cdf]")
        lines.append("value,cum_frac")
        for v, frac in empirical_cdf(final_areas(slot_rows)):
            lines.append(f"{v:.6f},{frac:.6f}")
    if run_rows:
        taus = [r[3] for r in run_rows if r[4]]
        if taus:
            lines.append("")
            lines.append("[tau_end cdf (connected runs)]")
            lines.append("value,cum_frac")
            for v, frac in empirical_cdf(taus):
                lines.append(f"{v:.0f},{frac:.6f}")
    return "\n".join(lines) + "\n"


def _series_by_run(slot_rows):
    """(run, vehicle) -> list of areas indexed by slot."""
    series: dict[tuple[int, int], list[float]] = {}
    for run, _, t, v, area, _, _ in slot_rows:
        series.setdefault((run, v), []).append((t, area))
    out = {}
    for key, pts in series.items():
        pts.sort()
        out[key] = [a for _, a in pts]
    return out


def mean_area_by_slot(slot_rows) -> list[tuple[int, float]]:
    series = _series_by_run(slot_rows)
    horizon = max(len(v) for v in series.values())
    curve = []
    for t in range(horizon):
        vals = [s[t] if t < len(s) else s[-1] for s in series.values()]
        curve.append((t, sum(vals) / len(vals)))
    return curve


def final_areas(slot_rows) -> list[float]:
    series = _series_by_run(slot_rows)
    return [s[-1] for s in series.values()]


def read_csv_rows(path: Path):
    with path.open(newline="") as f:
        reader = csv.reader(f)
        try:
            header = tuple(next(reader))
        except StopIteration:
            raise ValueError(f"{path}: empty file, expected a csv header") from None
        rows = list(reader)
    return header, rows


def parse_output_csv(path: Path):
    """Classify a CSV as slots or runs by its pinned header."""
    header, rows = read_csv_rows(path)
    if header == SLOTS_HEADER:
        parsed = [
            (int(r[0]), int(r[1]), int(r[2]), int(r[3]), float(r[4]), int(r[5]), int(r[6]))
            for r in rows
        ]
        return "slots", parsed
    if header == RUNS_HEADER:
        parsed = [
            tuple(int(x) for x in r[:-1]) + (float(r[-1]),)
            for r in rows
        ]
        return "runs", parsed
    for expected in (SLOTS_HEADER, RUNS_HEADER):
        missing = [c for c in expected if c not in header]
        if len(missing) < len(expected):
            raise ValueError(
                f"{path}: csv schema mismatch, missing column(s) {', '.join(missing)}"
            )
    raise ValueError(
        f"{path}: unrecognized csv schema {list(header)}; "
        f"expected {list(SLOTS_HEADER)} or {list(RUNS_HEADER)}"
    )


def bounds_table(n_values) -> str:
    lines = [",".join(BOUNDS_HEADER)]
    for n in n_values:
        try:
            lo, hi = tau_bounds(n)
        except ValueError as e:
            raise ConfigError(str(e)) from None
        lines.append(f"{n},{lo},{hi}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="beamshare", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    run = sub.add_parser("run", help="run a Monte-Carlo experiment")
    run.add_argument("--config", help="key = value config file")
    run.add_argument("--out", help="output directory")
    run.add_argument("--seed", type=int, help="seed base (replication r uses seed+r)")
    run.add_argument("--reps", type=int, help="replication count")
    run.add_argument("--mode", choices=CONFLICT_MODES, help="conflict rule set")
    run.add_argument("--weight", choices=WEIGHT_MODES, help="scheduling weight mode")

    summ = sub.add_parser("summarize", help="summarize experiment CSVs")
    summ.add_argument("csvs", nargs="+", help="slots.csv and/or runs.csv paths")
    summ.add_argument("--out", help="write the summary here instead of stdout")

    bounds = sub.add_parser("bounds", help="print slot-count bounds per fleet size")
    bounds.add_argument("nv", nargs="*", type=int, default=[10, 15, 20])
    bounds.add_argument("--out", help="write the table here instead of stdout")
    return p


def cmd_run(args) -> None:
    cfg = ExperimentConfig()
    if args.config:
        cfg = load_config(args.config, cfg)
    overrides = {
        "out": args.out,
        "seed_base": args.seed,
        "reps": args.reps,
        "mode": args.mode,
        "weight": args.weight,
    }
    cfg = replace(cfg, **{k: v for k, v in overrides.items() if v is not None})
    paths = run_experiment(cfg)
    for name in ("slots", "runs", "summary"):
        print(f"wrote {paths[name]}")


def cmd_summarize(args) -> None:
    slot_rows: list = []
    run_rows: list = []
    for raw in args.csvs:
        kind, rows = parse_output_csv(Path(raw))
        (slot_rows if kind == "slots" else run_rows).extend(rows)
    text = summarize_tables(slot_rows, run_rows)
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}")
    else:
        print(text, end="")


def cmd_bounds(args) -> None:
    text = bounds_table(args.nv)
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}")
    else:
        print(text, end="")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.cmd == "run":
            cmd_run(args)
        elif args.cmd == "summarize":
            cmd_summarize(args)
        else:
            cmd_bounds(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except Exception as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
