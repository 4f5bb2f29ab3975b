"""Closed-form optimum of the E-C protocol.

With the AP and relay at peak power the throughput only depends on the
downlink share ``tau1`` (the uplink takes the rest of the block)::

    T(tau1) = (1 - tau1) * log2(1 + A * tau1 / (1 - tau1)),
    A = eta * (P_A_max * h_AS + P_R_max * h_RS) * h_SA / N0.

Its maximiser is ``tau1 = (z - 1) / (A + z - 1)`` where ``z >= 1`` solves
``z ln z - z + 1 = A``.  When that share exceeds ``mu`` the average power
budgets bind and the downlink is cut back to exactly ``mu``; the nodes still
transmit at peak power in both branches.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from hybridrelay.channel import ChannelRealization, NetworkConfig
from hybridrelay.protocols import EcAllocation, ec_throughput


def _zlogz_gap(w):
    """``z ln z - z + 1`` at ``z = 1 + w``, accurate for small ``w``."""
    w = np.asarray(w, dtype=float)
    series = w * w * (0.5 + w * (-1.0 / 6.0 + w * (1.0 / 12.0 - w / 20.0)))
    direct = (1.0 + w) * np.log1p(w) - w
    return np.where(w < 1e-3, series, direct)


def solve_z(a_const, rtol: float = 1e-12, max_iter: int = 200):
    """Root ``z >= 1`` of ``z ln z - z + 1 = a_const`` by bracketed bisection.

    Works elementwise on arrays.  Bisection is done on ``w = z - 1`` until
    its bracket is ``rtol`` wide relative to ``w``, so roots close to 1 keep
    their digits.
    """
    a = np.asarray(a_const, dtype=float)
    if np.any(a < 0) or np.any(np.isnan(a)):
        raise ValueError("a_const must be non-negative")
    # the gap function is at most w**2/2, so w >= sqrt(2a)
    lo = np.sqrt(2.0 * a)
    hi = 2.0 * lo + 1.0
    while True:
        short = _zlogz_gap(hi) <= a
        if not np.any(short):
            break
        hi = np.where(short, 2.0 * hi, hi)
    for _ in range(max_iter):
        # converged entries are frozen so a result never depends on its batch
        active = (hi - lo > rtol * hi) & (a > 0)
        if not np.any(active):
            break
        mid = 0.5 * (lo + hi)
        below = _zlogz_gap(mid) < a
        lo = np.where(active & below, mid, lo)
        hi = np.where(active & ~below, mid, hi)
    w = np.where(a == 0, 0.0, 0.5 * (lo + hi))
    z = 1.0 + w
    return float(z) if z.ndim == 0 else z


def _tau1_free(a):
    """Unconstrained optimal downlink share for SNR constant ``a`` (0 when ``a`` is 0)."""
    a = np.asarray(a, dtype=float)
    w = np.asarray(solve_z(a)) - 1.0
    den = a + w
    out = np.zeros_like(a)
    np.divide(w, den, out=out, where=den > 0)
    return out


def snr_constant(config: NetworkConfig, gains) -> np.ndarray:
    """``A`` for each row of a gain array in ``GAIN_LINKS`` order."""
    g = np.asarray(gains, dtype=float)
    h_as, h_rs, h_sa = g[..., 0], g[..., 1], g[..., 2]
    return config.eta * (config.p_a_max * h_as + config.p_r_max * h_rs) * h_sa / config.n0


def optimize_ec_batch(config: NetworkConfig, gains):
    """Vectorised E-C optimum over many realizations.

    Returns ``(throughput, tau1, z, capped)`` arrays.  Realizations with
    ``A = 0`` get the canonical ``tau1 = 0`` and zero throughput.
    """
    a = snr_constant(config, gains)
    z = np.asarray(solve_z(a))
    tau1_free = _tau1_free(a)
    capped = tau1_free > config.mu
    tau1 = np.where(capped, config.mu, tau1_free)
    tau2 = 1.0 - tau1
    snr = np.zeros_like(a)
    np.divide(a * tau1, tau2, out=snr, where=tau2 > 0)
    thr = np.where((tau1 > 0) & (tau2 > 0), tau2 * np.log2(1.0 + snr), 0.0)
    return thr, tau1, z, capped


@dataclass(frozen=True)
class EcOptimum:
    alloc: EcAllocation
    throughput: float
    z_star: float
    capped: bool
    tau1_free: float


def optimize_ec(config: NetworkConfig, ch: ChannelRealization) -> EcOptimum:
    """Globally optimal E-C allocation for one realization."""
    a = float(snr_constant(config, ch.as_array()))
    z = solve_z(a)
    tau1_free = float(_tau1_free(a))
    capped = tau1_free > config.mu
    tau1 = config.mu if capped else tau1_free
    # E_X / tau1 with E_X = tau1 * P_max or P_avg = mu * P_max: peak either way
    alloc = EcAllocation(p_a=config.p_a_max, p_r=config.p_r_max, tau1=tau1, tau2=1.0 - tau1)
    return EcOptimum(
        alloc=alloc,
        throughput=ec_throughput(config, ch, alloc),
        z_star=z,
        capped=capped,
        tau1_free=tau1_free,
    )
