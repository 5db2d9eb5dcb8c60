"""Parameter sweeps producing drift reports and plot data."""
from __future__ import annotations

import csv
import logging
import math
import time
from dataclasses import dataclass
from pathlib import Path

from .config import ExperimentConfig
from .cycles import write_cycles_csv
from .errors import EppError
from .estimators import (
    REPORT_COLUMNS,
    DriftReport,
    EstimateWithCI,
    cycle_drift_estimator,
    direct_variance_estimator,
    half_cycle_estimator,
    relative_error_pct,
)
from .montecarlo import direct_integrals, sample_cycles
from .params import OscillatorParams
from .pde import make_grid, pde_summary

log = logging.getLogger(__name__)

MISSING = EstimateWithCI(math.nan, math.nan, 0, math.nan, math.nan)

PDE_COLUMNS = ("Y", "c0", "k", "L", "Ny", "Nz", "E_tau1", "v_plus_y", "m2", "sigma2_pde",
               "tau_gap_pct", "sigma2_gap_pct")


class RowError(EppError):
    """A module error tagged with the parameter set that raised it."""


@dataclass
class RowResult:
    params: OscillatorParams
    report: DriftReport | None = None
    pde: dict | None = None
    direct_seconds: float = 0.0
    cycle_seconds: float = 0.0
    pde_seconds: float = 0.0


def run_row(cfg: ExperimentConfig, row: int, params: OscillatorParams, out: Path | None = None) -> RowResult:
    res = RowResult(params)
    lhs = rhs = simplified = tau = MISSING
    if cfg.mode in ("mc_direct", "all"):
        t0 = time.perf_counter()
        X = direct_integrals(params, cfg.T, cfg.dt, cfg.master_seed, cfg.MC, row, cfg.threads)
        lhs = direct_variance_estimator(X[:, 0], cfg.T)
        res.direct_seconds = time.perf_counter() - t0
    if cfg.mode in ("mc_cycles", "all"):
        t0 = time.perf_counter()
        cycles = sample_cycles(params, cfg.dt, cfg.master_seed, cfg.MC, row, cfg.threads,
                               cfg.start, cfg.cycles_per_seed)
        rhs, tau = cycle_drift_estimator(cycles)
        simplified = half_cycle_estimator(cycles)
        res.cycle_seconds = time.perf_counter() - t0
        if out is not None:
            write_cycles_csv(cycles, out / f"cycles_row{row}.csv")
    if cfg.runs_mc:
        res.report = DriftReport(params.c0, params.k, params.Y, cfg.T, cfg.dt, cfg.MC,
                                 lhs, rhs, simplified, tau)
    if cfg.mode in ("pde", "all"):
        t0 = time.perf_counter()
        summary = pde_summary(params, make_grid(params, cfg.Ny, cfg.Nz, cfg.L))
        res.pde_seconds = time.perf_counter() - t0
        res.pde = summary.as_dict()
        res.pde["tau_gap_pct"] = (
            relative_error_pct(summary.E_tau1, tau.value) if tau is not MISSING else math.nan
        )
        res.pde["sigma2_gap_pct"] = (
            relative_error_pct(summary.sigma2_pde, rhs.value) if rhs is not MISSING else math.nan
        )
        if out is not None:
            summary.write(out / f"pde_row{row}.txt")
    return res


def _header(fh, cfg: ExperimentConfig) -> None:
    for line in cfg.echo_lines():
        fh.write(f"# {line}\n")


def write_report(results: list[RowResult], cfg: ExperimentConfig, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        _header(fh, cfg)
        w = csv.writer(fh)
        w.writerow(REPORT_COLUMNS)
        for r in results:
            if r.report is not None:
                w.writerow(r.report.csv_row())


def write_pde_report(results: list[RowResult], cfg: ExperimentConfig, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        _header(fh, cfg)
        w = csv.writer(fh)
        w.writerow(PDE_COLUMNS)
        for r in results:
            if r.pde is None:
                continue
            p = r.params
            d = r.pde
            w.writerow([repr(p.Y), repr(p.c0), repr(p.k)] + [repr(d[c]) for c in PDE_COLUMNS[3:]])


def read_report(path: str | Path) -> list[dict]:
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    return [{k: float(v) for k, v in row.items()} for row in csv.DictReader(lines)]


def emit_plot_data(reports: list[DriftReport], outdir: str | Path) -> list[Path]:
    """Write ``Y value ci_low ci_high`` files for lhs, rhs and the mean cycle time."""
    if not reports:
        raise ValueError("empty report: nothing to plot")
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, attr in (("lhs", "lhs"), ("rhs", "rhs"), ("tau", "tau_mean")):
        path = outdir / f"{name}_vs_Y.dat"
        with open(path, "w") as fh:
            fh.write(f"# columns: Y {name} ci_low ci_high\n")
            for rep in reports:
                est = getattr(rep, attr)
                fh.write(f"{rep.Y!r} {est.value!r} {est.ci_low!r} {est.ci_high!r}\n")
        paths.append(path)
    return paths


def run_experiment(cfg: ExperimentConfig, out: str | Path | None = None) -> list[RowResult]:
    """Run every parameter set of the sweep and write the report files into ``out``."""
    cfg.validate()
    outdir = Path(out if out is not None else cfg.out)
    outdir.mkdir(parents=True, exist_ok=True)
    results = []
    t_total = time.perf_counter()
    for row, params in enumerate(cfg.sweep()):
        try:
            res = run_row(cfg, row, params, outdir)
        except EppError as exc:
            raise RowError(f"row {row} (c0={params.c0}, k={params.k}, Y={params.Y}): {exc}") from exc
        log.info(
            "row %d Y=%g: direct %.2fs, cycles %.2fs, pde %.2fs",
            row, params.Y, res.direct_seconds, res.cycle_seconds, res.pde_seconds,
        )
        results.append(res)
    if cfg.runs_mc:
        write_report(results, cfg, outdir / "report.csv")
        reports = [r.report for r in results if r.report is not None]
        if reports:
            emit_plot_data(reports, outdir)
    if cfg.mode in ("pde", "all"):
        write_pde_report(results, cfg, outdir / "pde.csv")
    log.info("total %.2fs", time.perf_counter() - t_total)
    return results
