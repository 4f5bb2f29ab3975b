"""SNR and throughput of the E-C and D-C protocols for a given allocation.

Time is normalised to a unit block, so an energy ``tau * P`` has the same
numeric scale as a power.  The source spends everything it harvested during
the downlink in the uplink that follows; nothing carries over between blocks.

The ``*_rate`` functions are the array core: they broadcast over numpy
inputs and are what the grid-search oracle evaluates.  The dataclass-based
functions wrap them for single allocations and add feasibility checking.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, NamedTuple, Optional

import numpy as np

from hybridrelay.channel import ChannelRealization, NetworkConfig

TIME_TOL = 1e-9
POWER_RTOL = 1e-9


class FeasibilityError(ValueError):
    """Raised when an allocation violates a power or time constraint."""

    def __init__(self, tag: str, message: str = ""):
        self.tag = tag
        super().__init__(message or f"infeasible allocation: {tag}")


class Feasibility(NamedTuple):
    ok: bool
    tag: Optional[str] = None

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class EcAllocation:
    p_a: float
    p_r: float
    tau1: float
    tau2: float


@dataclass(frozen=True)
class DcAllocation:
    p_a: float
    p_r_d: float
    p_r_u: float
    tau1: float
    tau2: float


@dataclass
class OptimResult:
    """An allocation, its throughput and free-form solver diagnostics."""

    alloc: Any
    throughput: float
    diagnostics: dict = field(default_factory=dict)


def _safe_ratio(num, den):
    num, den = np.broadcast_arrays(np.asarray(num, dtype=float), np.asarray(den, dtype=float))
    out = np.zeros(num.shape)
    np.divide(num, den, out=out, where=den > 0)
    return out


def _finish(x):
    return float(x) if np.ndim(x) == 0 else x


_INV_LN2 = 1.0 / np.log(2.0)


def _tlog(k, tau):
    """``tau * log2(1 + k / tau)`` (0 where ``tau <= 0``), finite even when
    ``k / tau`` overflows."""
    k = np.asarray(k, dtype=float)
    tau = np.asarray(tau, dtype=float)
    pos = tau > 0
    t = np.where(pos, tau, 1.0)
    with np.errstate(over="ignore"):
        ratio = k / t
    if np.isfinite(ratio).all():
        nat = np.log1p(ratio)
    else:
        big = ~np.isfinite(ratio)
        with np.errstate(divide="ignore", invalid="ignore"):
            nat = np.where(big, np.log(np.where(big, k, 1.0)) - np.log(t),
                           np.log1p(np.where(big, 0.0, ratio)))
    nat *= t * _INV_LN2
    if not pos.all():
        nat = np.where(pos, nat, 0.0)
    return nat


def ec_rate(eta, n0, p_a, p_r, tau1, tau2, h_as, h_rs, h_sa):
    """E-C throughput in bps/Hz, broadcasting over array arguments.

    Zero whenever either phase has zero length.
    """
    k = eta * np.asarray(tau1, dtype=float) * (p_a * h_as + p_r * h_rs) * (h_sa / n0)
    rate = _tlog(k, tau2)
    if not np.all(np.asarray(tau1) > 0):
        rate = np.where(np.asarray(tau1) > 0, rate, 0.0)
    return _finish(rate)


def _relayed(k_sr, tau2, snr_ra):
    """Relayed SNR ``x y / (x + y + 1)`` with ``x = k_sr / tau2``, safe as ``tau2 -> 0``."""
    num = k_sr * snr_ra
    den = k_sr + np.asarray(tau2) * (snr_ra + 1.0)
    return _safe_ratio(num, den)


def dc_snrs(eta, n0, p_a, p_r_d, p_r_u, tau1, tau2, h_as, h_rs, h_sa, h_sr, h_ra):
    """``(snr_sa, snr_sr, snr_ra, snr_sra)`` of the D-C uplink, broadcasting.

    The source talks for half of the uplink phase, hence the factor 2.
    """
    energy = eta * tau1 * (p_a * h_as + p_r_d * h_rs)
    live = np.asarray(tau2) > 0
    with np.errstate(over="ignore"):
        snr_sa = _safe_ratio(2.0 * energy * h_sa, tau2 * n0)
        snr_sr = _safe_ratio(2.0 * energy * h_sr, tau2 * n0)
    snr_ra = np.where(live, p_r_u * h_ra / n0, 0.0)
    snr_sra = _relayed(2.0 * energy * h_sr / n0, tau2, snr_ra)
    return tuple(_finish(np.where(live, s, 0.0)) for s in (snr_sa, snr_sr, snr_ra, snr_sra))


def dc_rate(eta, n0, p_a, p_r_d, p_r_u, tau1, tau2, h_as, h_rs, h_sa, h_sr, h_ra):
    """D-C throughput in bps/Hz with MRC of the direct and relayed copies."""
    energy = eta * tau1 * (p_a * h_as + p_r_d * h_rs)
    tau2 = np.asarray(tau2, dtype=float)
    snr_ra = p_r_u * h_ra / n0
    snr_sra = _relayed(2.0 * energy * h_sr / n0, tau2, snr_ra)
    # tau2 * (snr_sa + snr_sra) with snr_sa = k_sa / tau2
    k = 2.0 * energy * h_sa / n0 + tau2 * snr_sra
    live = (np.asarray(tau1) > 0) & (tau2 > 0)
    return _finish(np.where(live, 0.5 * _tlog(k, tau2), 0.0))


def harvested_energy(
    config: NetworkConfig, ch: ChannelRealization, p_a: float, p_r_dl: float, tau1: float
) -> float:
    """Energy collected by the source during a downlink phase of length ``tau1``."""
    return config.eta * tau1 * (p_a * ch.h_AS + p_r_dl * ch.h_RS)


def _above(x, bound) -> bool:
    return x > bound * (1.0 + POWER_RTOL)


def _check_time(tau1, tau2) -> Optional[str]:
    if tau1 < -TIME_TOL or tau2 < -TIME_TOL:
        return "negative"
    if tau1 + tau2 > 1.0 + TIME_TOL:
        return "time-budget"
    return None


def ec_feasible(config: NetworkConfig, alloc: EcAllocation) -> Feasibility:
    """Check an E-C allocation against the peak, average and time constraints."""
    tag = _check_time(alloc.tau1, alloc.tau2)
    if tag is None and (alloc.p_a < 0 or alloc.p_r < 0):
        tag = "negative"
    if tag is None:
        if _above(alloc.p_a, config.p_a_max):
            tag = "ap-peak-power"
        elif _above(alloc.p_r, config.p_r_max):
            tag = "relay-peak-power"
        elif _above(alloc.tau1 * alloc.p_a, config.p_a_avg):
            tag = "ap-average-power"
        elif _above(alloc.tau1 * alloc.p_r, config.p_r_avg):
            tag = "relay-average-power"
    return Feasibility(tag is None, tag)


def dc_feasible(config: NetworkConfig, alloc: DcAllocation) -> Feasibility:
    """Check a D-C allocation; the relay's budget covers both of its phases."""
    tag = _check_time(alloc.tau1, alloc.tau2)
    if tag is None and min(alloc.p_a, alloc.p_r_d, alloc.p_r_u) < 0:
        tag = "negative"
    if tag is None:
        relay_energy = alloc.tau1 * alloc.p_r_d + 0.5 * alloc.tau2 * alloc.p_r_u
        if _above(alloc.p_a, config.p_a_max):
            tag = "ap-peak-power"
        elif _above(alloc.p_r_d, config.p_r_max) or _above(alloc.p_r_u, config.p_r_max):
            tag = "relay-peak-power"
        elif _above(alloc.tau1 * alloc.p_a, config.p_a_avg):
            tag = "ap-average-power"
        elif _above(relay_energy, config.p_r_avg):
            tag = "relay-average-power"
    return Feasibility(tag is None, tag)


def _require(feas: Feasibility):
    if not feas.ok:
        raise FeasibilityError(feas.tag)


def ec_throughput(config: NetworkConfig, ch: ChannelRealization, alloc: EcAllocation) -> float:
    """Uplink throughput (bps/Hz) of an E-C allocation.

    Raises
    ------
    FeasibilityError
        If the allocation breaks a constraint; ``.tag`` names which one.
    """
    _require(ec_feasible(config, alloc))
    return ec_rate(
        config.eta, config.n0, alloc.p_a, alloc.p_r, alloc.tau1, alloc.tau2,
        ch.h_AS, ch.h_RS, ch.h_SA,
    )


def dc_snr_components(config: NetworkConfig, ch: ChannelRealization, alloc: DcAllocation):
    """Return ``(gamma_SA, gamma_SR, gamma_RA, gamma_SRA)`` for a D-C allocation.

    All four are zero when the uplink phase is empty.
    """
    return dc_snrs(
        config.eta, config.n0, alloc.p_a, alloc.p_r_d, alloc.p_r_u, alloc.tau1, alloc.tau2,
        ch.h_AS, ch.h_RS, ch.h_SA, ch.h_SR, ch.h_RA,
    )


def dc_throughput(config: NetworkConfig, ch: ChannelRealization, alloc: DcAllocation) -> float:
    """Uplink throughput (bps/Hz) of a D-C allocation; see :func:`ec_throughput`."""
    _require(dc_feasible(config, alloc))
    return dc_rate(
        config.eta, config.n0, alloc.p_a, alloc.p_r_d, alloc.p_r_u, alloc.tau1, alloc.tau2,
        ch.h_AS, ch.h_RS, ch.h_SA, ch.h_SR, ch.h_RA,
    )
