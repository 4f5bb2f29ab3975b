"""Network geometry and block-fading channel model.

The three nodes sit on a line: AP -- relay -- source, with the relay between
the other two.  Every link gain is exponentially distributed (Rayleigh
amplitude) with mean ``1e-3 * d**-alpha``, i.e. 30 dB attenuation at 1 m.

Random draws come from a counter-based Philox stream keyed by ``seed`` with
the block index in the counter, so realization ``k`` never depends on which
other blocks were drawn, in what order, or in which process.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

#: Column order of gain arrays returned by :func:`sample_unit_gains` and
#: accepted by the batched solvers.
GAIN_LINKS = ("h_AS", "h_RS", "h_SA", "h_SR", "h_RA")

REFERENCE_GAIN = 1e-3


def mean_gain(d: float, alpha: float) -> float:
    """Mean power gain ``1e-3 * d**-alpha`` of a link of length ``d`` metres."""
    if not d > 0:
        raise ValueError(f"link distance must be positive, got {d!r}")
    if not 2.0 <= alpha <= 5.0:
        raise ValueError(f"path-loss exponent must lie in [2, 5], got {alpha!r}")
    return REFERENCE_GAIN * d ** (-alpha)


def noise_watts(n0_dbm: float) -> float:
    """Convert a noise power from dBm to watts."""
    if not math.isfinite(n0_dbm):
        raise ValueError(f"noise power must be finite, got {n0_dbm!r}")
    return 10.0 ** ((n0_dbm - 30.0) / 10.0)


@dataclass(frozen=True)
class NetworkConfig:
    """Geometry, propagation and power budgets of one AP/relay/source network.

    ``mu`` is the common average-to-peak power ratio of the AP and the relay,
    so ``p_a_avg = mu * p_a_max`` and likewise for the relay.  ``mu = 0`` is
    accepted and describes nodes with no energy budget at all.
    """

    d_AS: float = 10.0
    d_SR: float = 5.0
    alpha: float = 2.0
    eta: float = 0.5
    n0_dbm: float = -80.0
    p_a_max: float = 2.0
    p_r_max: float = 2.0
    mu: float = 0.5
    reciprocal_channels: bool = True

    def __post_init__(self):
        if not self.d_AS > 0:
            raise ValueError(f"d_AS must be positive, got {self.d_AS!r}")
        if not 0 < self.d_SR < self.d_AS:
            raise ValueError(
                f"d_SR must lie strictly between 0 and d_AS={self.d_AS!r}, got {self.d_SR!r}"
            )
        if not 2.0 <= self.alpha <= 5.0:
            raise ValueError(f"alpha must lie in [2, 5], got {self.alpha!r}")
        if not 0 < self.eta < 1:
            raise ValueError(f"eta must lie in (0, 1), got {self.eta!r}")
        if not math.isfinite(self.n0_dbm):
            raise ValueError(f"n0_dbm must be finite, got {self.n0_dbm!r}")
        if not (self.p_a_max > 0 and self.p_r_max > 0):
            raise ValueError("peak powers must be positive")
        if not 0 <= self.mu <= 1:
            raise ValueError(f"mu must lie in [0, 1], got {self.mu!r}")

    @property
    def d_AR(self) -> float:
        return self.d_AS - self.d_SR

    @property
    def p_a_avg(self) -> float:
        return self.mu * self.p_a_max

    @property
    def p_r_avg(self) -> float:
        return self.mu * self.p_r_max

    @property
    def n0(self) -> float:
        """Noise power in watts."""
        return noise_watts(self.n0_dbm)

    def link_means(self) -> np.ndarray:
        """Mean gains in :data:`GAIN_LINKS` order."""
        g_as = mean_gain(self.d_AS, self.alpha)
        g_sr = mean_gain(self.d_SR, self.alpha)
        g_ra = mean_gain(self.d_AR, self.alpha)
        return np.array([g_as, g_sr, g_as, g_sr, g_ra])


@dataclass(frozen=True)
class ChannelRealization:
    """Channel power gains of one transmission block."""

    h_AS: float
    h_RS: float
    h_SA: float
    h_SR: float
    h_RA: float

    def __post_init__(self):
        for name in GAIN_LINKS:
            value = getattr(self, name)
            if not value >= 0:
                raise ValueError(f"{name} must be non-negative, got {value!r}")

    @classmethod
    def from_array(cls, gains) -> "ChannelRealization":
        return cls(*(float(g) for g in gains))

    def as_array(self) -> np.ndarray:
        return np.array([self.h_AS, self.h_RS, self.h_SA, self.h_SR, self.h_RA])

    def scaled(self, factor: float) -> "ChannelRealization":
        return ChannelRealization.from_array(self.as_array() * factor)


def _block_uniforms(seed: int, block_index: int) -> np.ndarray:
    if seed < 0 or block_index < 0:
        raise ValueError("seed and block_index must be non-negative")
    # The block index occupies the second counter word, so neighbouring
    # blocks are 2**64 increments apart and never share output.
    bitgen = np.random.Philox(key=seed, counter=[0, block_index, 0, 0])
    return np.random.Generator(bitgen).random(5)


def sample_unit_gains(seed: int, block_indices, reciprocal: bool = True) -> np.ndarray:
    """Unit-mean exponential fading for a set of blocks.

    Returns an ``(n, 5)`` array in :data:`GAIN_LINKS` order.  Multiplying by
    :meth:`NetworkConfig.link_means` yields physical gains; keeping the unit
    draws separate lets several geometries share the same fading.
    """
    blocks = np.atleast_1d(np.asarray(block_indices, dtype=np.int64))
    u = np.array([_block_uniforms(int(seed), int(k)) for k in blocks]).reshape(-1, 5)
    # inverse CDF of Exp(1)
    x = -np.log1p(-u)
    # draws: 0 -> A-S, 1 -> S-R, 2 -> R-A, 3 -> S->A, 4 -> R->S
    out = np.empty_like(x)
    out[:, 0] = x[:, 0]
    out[:, 3] = x[:, 1]
    out[:, 4] = x[:, 2]
    if reciprocal:
        out[:, 2] = x[:, 0]
        out[:, 1] = x[:, 1]
    else:
        out[:, 2] = x[:, 3]
        out[:, 1] = x[:, 4]
    return out


def sample_gains(config: NetworkConfig, seed: int, block_indices) -> np.ndarray:
    """Physical gains ``(n, 5)`` for ``config`` over the given blocks."""
    unit = sample_unit_gains(seed, block_indices, config.reciprocal_channels)
    return unit * config.link_means()


def sample_realization(config: NetworkConfig, seed: int, block_index: int) -> ChannelRealization:
    """Draw the gains of block ``block_index`` of the stream keyed by ``seed``."""
    return ChannelRealization.from_array(sample_gains(config, seed, [block_index])[0])
