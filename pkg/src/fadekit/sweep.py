"""Sweep engine: evaluate a scenario over its SNR grid and emit CSV rows.

Grid points are independent; they are dispatched to a thread pool (capped by
the FADEKIT_THREADS environment variable) and re-assembled in grid order, so
the CSV bytes never depend on scheduling.  Monte-Carlo seeds are derived per
point from the configured seed and the point index.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import metrics
from .config import Scenario
from .errors import ConvergenceError, FadekitError
from .mc import Estimate, McConfig, estimate_metric

__all__ = ["SweepResult", "run_sweep", "worker_count"]


@dataclass(frozen=True)
class SweepResult:
    """Column names plus one row of floats per sweep point."""

    columns: tuple[str, ...]
    rows: tuple[tuple[float, ...], ...]

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="\n") as fh:
            fh.write(",".join(self.columns) + "\n")
            for row in self.rows:
                fh.write(",".join(format(v, ".12g") for v in row) + "\n")


def worker_count(points: int) -> int:
    env = os.environ.get("FADEKIT_THREADS")
    if env:
        try:
            cap = max(1, int(env))
        except ValueError:
            cap = 1
        return min(points, cap)
    return min(points, os.cpu_count() or 1)


def _columns(scenario: Scenario) -> tuple[str, ...]:
    cols = ["snr_db"]
    if scenario.metric == "capacity" and scenario.capacity_scheme == "all":
        cols += ["value_opra", "value_ora", "value_tifr", "value_cifr"]
    else:
        cols.append("value")
    if scenario.mc["enabled"]:
        cols += ["mc_value", "mc_stderr"]
    if scenario.asymptotic["enabled"]:
        cols.append("asymptotic_value")
    return tuple(cols)


def _analytic_values(scenario: Scenario, chain) -> list[float]:
    metric = scenario.metric
    bw = scenario.bandwidth
    if metric == "af":
        return [metrics.amount_of_fading(chain)]
    if metric == "op":
        return [metrics.outage_probability(chain, scenario.gamma_th)]
    if metric == "ber":
        mod = scenario.get_modulation()
        if mod.coherent:
            return [metrics.ber_coherent(chain, mod)]
        return [metrics.ber_noncoherent(chain, mod)]
    scheme = scenario.capacity_scheme
    if scheme == "all":
        opra = metrics.capacity_opra(chain, bw)
        ora = metrics.capacity_ora(chain, bw)
        tifr = metrics.capacity_tifr(chain, bw, opra.cutoff)
        cifr = metrics.capacity_cifr(chain, bw)
        return [opra.value, ora.value, tifr.value, cifr.value]
    fn = {
        "ora": metrics.capacity_ora,
        "opra": metrics.capacity_opra,
        "cifr": metrics.capacity_cifr,
        "tifr": metrics.capacity_tifr,
    }[scheme]
    return [fn(chain, bw).value]


def _mc_estimate(scenario: Scenario, chain, index: int) -> Estimate:
    mc = scenario.mc
    cfg = McConfig(trials=mc["trials"], seed=mc["seed"] + index, streams=mc["streams"])
    metric = scenario.metric
    if metric == "capacity":
        return estimate_metric(chain, cfg, "ora", bandwidth=scenario.bandwidth)
    if metric == "ber":
        return estimate_metric(chain, cfg, "ber", mod=scenario.get_modulation())
    if metric == "op":
        return estimate_metric(chain, cfg, "op", threshold=scenario.gamma_th)
    return estimate_metric(chain, cfg, "af")


def _evaluate_point(scenario: Scenario, index: int, snr_db: float) -> tuple[float, ...]:
    try:
        chain = scenario.chain_at(snr_db)
        row = [snr_db]
        row += _analytic_values(scenario, chain)
        if scenario.mc["enabled"]:
            est = _mc_estimate(scenario, chain, index)
            row += [est.mean, est.std_error]
        if scenario.asymptotic["enabled"]:
            row.append(
                metrics.ber_asymptotic(
                    chain, scenario.get_modulation(), scenario.asymptotic["order"]
                )
            )
        return tuple(row)
    except FadekitError as exc:
        raise type(exc)(
            f"{scenario.metric} sweep failed at point {index} ({snr_db:g} dB): {exc}"
        ) from exc
    except OverflowError as exc:
        raise ConvergenceError(
            f"{scenario.metric} sweep overflowed at point {index} ({snr_db:g} dB): {exc}"
        ) from exc


def run_sweep(scenario: Scenario) -> SweepResult:
    grid = scenario.sweep_grid
    workers = worker_count(len(grid))
    if workers == 1:
        rows = [_evaluate_point(scenario, i, db) for i, db in enumerate(grid)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda ix: _evaluate_point(scenario, *ix), enumerate(grid)))
    return SweepResult(_columns(scenario), tuple(rows))
