"""Brute-force grid searches used to check the analytic solvers.

Everything here goes through the plain throughput formulas in
:mod:`hybridrelay.protocols` and none of the structure the solvers exploit.
The E-C search does not assume the block is fully used or that the nodes
transmit at peak power.  The D-C search fixes ``tau2 = 1 - tau1`` (longer
phases never hurt, which :func:`oracle_dc_full` lets tests spot-check) but
is otherwise exhaustive over the powers.

Grid points are ``hi * k / (n - 1)``; a grid of ``2n - 1`` points therefore
contains the ``n``-point grid exactly, bit for bit.  Ties go to the first
point in lexicographic grid order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from hybridrelay.channel import ChannelRealization, NetworkConfig
from hybridrelay.protocols import (
    POWER_RTOL,
    TIME_TOL,
    DcAllocation,
    EcAllocation,
    OptimResult,
    dc_rate,
    ec_rate,
)


@dataclass(frozen=True)
class GridSpec:
    """Grid resolution: points per time axis, per power axis, and a cap for
    unbounded split ratios in :func:`scan_split`."""

    n_tau: int = 101
    n_power: int = 41
    t_cap: float = 1e4

    def __post_init__(self):
        if self.n_tau < 2 or self.n_power < 2:
            raise ValueError("grids need at least two points per axis")
        if not self.t_cap > 0:
            raise ValueError("t_cap must be positive")

    def refined(self) -> "GridSpec":
        """The nested grid with ``2n - 1`` points per axis."""
        return GridSpec(2 * self.n_tau - 1, 2 * self.n_power - 1, self.t_cap)


def grid(hi: float, n: int) -> np.ndarray:
    return hi * np.arange(n) / (n - 1)


def _le(x, bound):
    return x <= bound * (1.0 + POWER_RTOL)


def oracle_ec(config: NetworkConfig, ch: ChannelRealization, spec: GridSpec = GridSpec()) -> OptimResult:
    """Best E-C allocation on the grid ``tau1 x tau2 x P_A x P_R``."""
    taus = grid(1.0, spec.n_tau)
    pa = grid(config.p_a_max, spec.n_power)[:, None]
    pr = grid(config.p_r_max, spec.n_power)[None, :]
    best, arg, n_feasible = -np.inf, None, 0
    for i, t1 in enumerate(taus):
        t2 = taus[taus + t1 <= 1.0 + TIME_TOL]
        power_ok = _le(t1 * pa, config.p_a_avg) & _le(t1 * pr, config.p_r_avg)
        if t2.size == 0 or not power_ok.any():
            continue
        rate = ec_rate(config.eta, config.n0, pa[None], pr[None], t1, t2[:, None, None],
                       ch.h_AS, ch.h_RS, ch.h_SA)
        rate = np.where(power_ok[None], rate, -np.inf)
        n_feasible += int(power_ok.sum()) * t2.size
        k = int(np.argmax(rate))
        if rate.flat[k] > best:
            best = float(rate.flat[k])
            j, ia, ir = np.unravel_index(k, rate.shape)
            arg = (t1, t2[j], pa[ia, 0], pr[0, ir])
    t1, t2, p_a, p_r = (float(x) for x in arg)
    return OptimResult(
        alloc=EcAllocation(p_a=p_a, p_r=p_r, tau1=t1, tau2=t2),
        throughput=best,
        diagnostics={"n_feasible": n_feasible, "grid": spec},
    )


def _dc_search(config, ch, spec, tau2_options):
    taus = grid(1.0, spec.n_tau)
    pa = grid(config.p_a_max, spec.n_power)[:, None, None]
    prd = grid(config.p_r_max, spec.n_power)[None, :, None]
    pru = grid(config.p_r_max, spec.n_power)[None, None, :]
    best, arg, n_feasible = -np.inf, None, 0
    for t1 in taus:
        for t2 in tau2_options(t1, taus):
            ok = (
                _le(t1 * pa, config.p_a_avg)
                & _le(t1 * prd + 0.5 * t2 * pru, config.p_r_avg)
            )
            if not ok.any():
                continue
            rate = dc_rate(config.eta, config.n0, pa, prd, pru, t1, t2,
                           ch.h_AS, ch.h_RS, ch.h_SA, ch.h_SR, ch.h_RA)
            rate = np.where(ok, rate, -np.inf)
            n_feasible += int(ok.sum())
            k = int(np.argmax(rate))
            if rate.flat[k] > best:
                best = float(rate.flat[k])
                ia, ird, iru = np.unravel_index(k, rate.shape)
                arg = (t1, t2, pa[ia, 0, 0], prd[0, ird, 0], pru[0, 0, iru])
    t1, t2, p_a, p_rd, p_ru = (float(x) for x in arg)
    return OptimResult(
        alloc=DcAllocation(p_a=p_a, p_r_d=p_rd, p_r_u=p_ru, tau1=t1, tau2=t2),
        throughput=best,
        diagnostics={"n_feasible": n_feasible, "grid": spec},
    )


def oracle_dc(config: NetworkConfig, ch: ChannelRealization, spec: GridSpec = GridSpec()) -> OptimResult:
    """Best D-C allocation on the grid ``tau1 x P_A x P_RD x P_RU`` with ``tau2 = 1 - tau1``."""
    return _dc_search(config, ch, spec, lambda t1, taus: (1.0 - t1,))


def oracle_dc_full(config: NetworkConfig, ch: ChannelRealization, spec: GridSpec) -> OptimResult:
    """Five-dimensional D-C search that also scans ``tau2``; keep the grid coarse."""
    return _dc_search(config, ch, spec, lambda t1, taus: taus[taus + t1 <= 1.0 + TIME_TOL])


def scan_split(a, b, c, d, e, t_lo, t_hi, n: int = 10_000, t_cap: float = 1e4):
    """Dense scan of the relay-split SNR over ``[t_lo, min(t_hi, t_cap)]``.

    Half the points are spaced linearly, half geometrically (when ``t_lo > 0``)
    so both short and long intervals are resolved.  Returns ``(max, argmax)``.
    The SNR is rebuilt from its per-hop parts rather than the solver's
    closed form.
    """
    hi = min(t_hi, t_cap)
    ts = np.linspace(t_lo, hi, n // 2)
    if t_lo > 0:
        ts = np.union1d(ts, np.geomspace(t_lo, hi, n - n // 2))
    else:
        ts = np.union1d(ts, t_lo + np.geomspace(1e-9, hi - t_lo, n - n // 2))
    dl_share = 1.0 / (ts + 1.0)
    snr_direct = a + b * dl_share
    snr_sr = c + d * dl_share
    snr_ra = e * (1.0 - dl_share)
    snr = snr_direct + snr_sr * snr_ra / (snr_sr + snr_ra + 1.0)
    k = int(np.argmax(snr))
    return float(snr[k]), float(ts[k])
