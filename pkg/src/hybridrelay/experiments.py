"""Monte Carlo sweeps over average transmit power and relay position.

Realization ``i`` of a sweep always uses the unit-mean fading of block ``i``
in the stream keyed by the sweep seed; the gains for a particular geometry
are that fading times the geometry's mean link gains.  Every protocol,
``mu`` and sweep value therefore sees the same fading (paired samples), and
results do not depend on how blocks are split between worker processes.
"""

from __future__ import annotations

import csv
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from hybridrelay.channel import NetworkConfig, sample_unit_gains
from hybridrelay.solver_dc import optimize_dc_batch
from hybridrelay.solver_ec import optimize_ec_batch

log = logging.getLogger(__name__)

POWER_SWEEP = "power-sweep"
DISTANCE_SWEEP = "distance-sweep"
PROTOCOLS = ("EC", "DC")

DEFAULT_P_AVG = (0.05, 0.1, 0.2, 0.4, 0.8, 1.2, 1.6, 2.0, 3.0, 5.0)
DEFAULT_MU = (0.35, 0.5, 0.8)
DEFAULT_D_SR = (1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0)

CSV_HEADER = ("sweep_value", "mu", "protocol", "mean_throughput", "std_error", "n", "seed")

# fixed, so the split into work items never depends on the worker count
BLOCK_CHUNK = 250


@dataclass(frozen=True)
class SweepSpec:
    """One sweep.  Peak powers are always derived as ``p_avg / mu``.

    For a power sweep ``sweep_values`` are the common average powers of the
    AP and relay (watts).  For a distance sweep they are source-relay
    distances (metres) and ``p_avg`` fixes the average power.
    """

    kind: str
    sweep_values: tuple
    mu_values: tuple = (0.5,)
    base: NetworkConfig = field(default_factory=NetworkConfig)
    n_realizations: int = 5000
    seed: int = 0
    p_avg: float = 2.0

    def __post_init__(self):
        object.__setattr__(self, "sweep_values", tuple(float(v) for v in self.sweep_values))
        object.__setattr__(self, "mu_values", tuple(float(m) for m in self.mu_values))
        if self.kind not in (POWER_SWEEP, DISTANCE_SWEEP):
            raise ValueError(f"unknown sweep kind {self.kind!r}")
        vals = self.sweep_values
        if not vals or any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError("sweep_values must be non-empty and strictly increasing")
        if self.n_realizations < 1:
            raise ValueError("n_realizations must be at least 1")
        if not self.mu_values or any(not 0 < m <= 1 for m in self.mu_values):
            raise ValueError("every mu must lie in (0, 1]")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.kind == POWER_SWEEP and vals[0] <= 0:
            raise ValueError("average powers must be positive")
        if self.kind == DISTANCE_SWEEP:
            if not self.p_avg > 0:
                raise ValueError("p_avg must be positive")
            if vals[0] <= 0 or vals[-1] >= self.base.d_AS:
                raise ValueError(
                    f"relay distances must lie in (0, d_AS={self.base.d_AS:g}), got {vals}"
                )

    def configs(self):
        """``(mu_index, value_index, NetworkConfig)`` for every sweep point."""
        for i, mu in enumerate(self.mu_values):
            for j, v in enumerate(self.sweep_values):
                if self.kind == POWER_SWEEP:
                    cfg = replace(self.base, mu=mu, p_a_max=v / mu, p_r_max=v / mu)
                else:
                    p = self.p_avg / mu
                    cfg = replace(self.base, d_SR=v, mu=mu, p_a_max=p, p_r_max=p)
                yield i, j, cfg


@dataclass(frozen=True)
class SweepRow:
    sweep_value: float
    mu: float
    protocol: str
    mean_throughput: float
    std_error: float
    n: int
    seed: int


def _solve_blocks(spec: SweepSpec, blocks: np.ndarray) -> np.ndarray:
    """Optimal throughputs, shape ``(n_mu, n_values, 2, len(blocks))``."""
    unit = sample_unit_gains(spec.seed, blocks, spec.base.reciprocal_channels)
    out = np.empty((len(spec.mu_values), len(spec.sweep_values), 2, len(blocks)))
    for i, j, cfg in spec.configs():
        gains = unit * cfg.link_means()
        out[i, j, 0] = optimize_ec_batch(cfg, gains)[0]
        out[i, j, 1] = optimize_dc_batch(cfg, gains)["objective"]
    return out


def simulate(spec: SweepSpec, workers: int = 1) -> np.ndarray:
    """Per-realization optimal throughputs, shape ``(n_mu, n_values, 2, n)``."""
    blocks = np.arange(spec.n_realizations)
    chunks = [blocks[k:k + BLOCK_CHUNK] for k in range(0, len(blocks), BLOCK_CHUNK)]
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_solve_blocks, [spec] * len(chunks), chunks))
    else:
        parts = []
        for k, c in enumerate(chunks):
            parts.append(_solve_blocks(spec, c))
            log.debug("chunk %d/%d done", k + 1, len(chunks))
    return np.concatenate(parts, axis=-1)


def summarize(spec: SweepSpec, samples: np.ndarray) -> list[SweepRow]:
    n = samples.shape[-1]
    rows = []
    for i, mu in enumerate(spec.mu_values):
        for j, v in enumerate(spec.sweep_values):
            for p, proto in enumerate(PROTOCOLS):
                x = samples[i, j, p]
                se = float(np.std(x, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
                rows.append(SweepRow(v, mu, proto, float(np.mean(x)), se, n, spec.seed))
    return sorted(rows, key=_row_key)


def _run(spec: SweepSpec, kind: str, workers: int) -> list[SweepRow]:
    if spec.kind != kind:
        raise ValueError(f"expected a {kind} spec, got {spec.kind!r}")
    return summarize(spec, simulate(spec, workers))


def run_power_sweep(spec: SweepSpec, workers: int = 1) -> list[SweepRow]:
    """Mean optimal throughput of both protocols against average power."""
    return _run(spec, POWER_SWEEP, workers)


def run_distance_sweep(spec: SweepSpec, workers: int = 1) -> list[SweepRow]:
    """Mean optimal throughput of both protocols against source-relay distance."""
    return _run(spec, DISTANCE_SWEEP, workers)


def _row_key(row: SweepRow):
    return (row.protocol, row.mu, row.sweep_value)


def _fmt(x: float) -> str:
    return format(x, ".17g")


def write_csv(rows: Sequence[SweepRow], path) -> None:
    """Write rows sorted by ``(protocol, mu, sweep_value)`` with 17 significant digits."""
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_HEADER)
            for r in sorted(rows, key=_row_key):
                w.writerow([_fmt(r.sweep_value), _fmt(r.mu), r.protocol,
                            _fmt(r.mean_throughput), _fmt(r.std_error), r.n, r.seed])
    except OSError as exc:
        raise OSError(f"cannot write sweep CSV to {path}: {exc}") from exc


def read_csv(path) -> list[SweepRow]:
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != CSV_HEADER:
            raise ValueError(f"{path}: unexpected header {header}")
        return [
            SweepRow(float(v), float(mu), proto, float(m), float(se), int(n), int(seed))
            for v, mu, proto, m, se, n, seed in reader
        ]


def select(rows: Sequence[SweepRow], protocol: str, mu: float) -> list[SweepRow]:
    """Rows of one curve, ordered by sweep value."""
    return sorted((r for r in rows if r.protocol == protocol and r.mu == mu),
                  key=lambda r: r.sweep_value)
