"""Optimal time and power allocation for the D-C protocol.

Working in block energies ``E_A = tau1 P_A``, ``E_RD = tau1 P_RD`` and
``E_RU = (tau2 / 2) P_RU`` with ``tau2 = 1 - tau1``, the problem is solved in
two layers.

For a fixed downlink share ``tau1`` the best energies follow from which
constraints bind:

* ``tau1 <= 2 mu - 1`` (only possible for ``mu >= 1/2``): the relay's average
  budget is slack and every energy sits at its peak bound;
* ``2 mu - 1 < tau1 <= mu``: the AP is at peak and the relay spends exactly
  its average budget, split between downlink and uplink by the ratio
  ``t = E_RU / E_RD``;
* ``tau1 > mu``: both average budgets bind.  Never better than ``tau1 = mu``,
  but evaluated here so that claim can be checked.

With the relay budget binding the end-to-end SNR in terms of ``t`` is::

    g(t) = a + b/(t+1) + (c + d/(t+1)) (e t/(t+1)) / (c + d/(t+1) + e t/(t+1) + 1)

whose derivative has the sign of ``A t**2 + B t + C``.  The maximiser over an
interval is therefore one of its end points or one of the (at most two) real
roots inside it.  The outer problem over ``tau1 in [0, mu]`` is a
one-dimensional search: a uniform grid followed by golden-section refinement
around the best grid point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from hybridrelay.channel import ChannelRealization, NetworkConfig
from hybridrelay.protocols import DcAllocation, OptimResult, dc_throughput

N_GRID = 1001
REFINE_WIDTH = 1e-6
CAP_RTOL = 1e-9

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


class CaseDispatchError(ValueError):
    """Raised when a per-case solver is called outside its ``tau1`` range."""


# --------------------------------------------------------------------------
# relay split: g(t) and its stationary points


def split_slope_coeffs(a, b, c, d, e):
    """Coefficients ``(A, B, C)`` of the quadratic that carries the sign of ``g'(t)``."""
    A = (c * e - 2 * b * c - 2 * b * e - b - d * e - b * c**2 - b * e**2
         + c**2 * e - d * e**2 - 2 * b * c * e)
    B = (2 * c * e - 4 * b * c - 2 * b * d - 2 * b * e - 2 * b - 2 * b * c**2
         + 2 * c**2 * e - 2 * b * c * d - 2 * b * c * e - 2 * b * d * e + 2 * c * d * e)
    C = (c * e - 2 * b * c - 2 * b * d - b + d * e - b * c**2 - b * d**2
         + c**2 * e + d**2 * e - 2 * b * c * d + 2 * c * d * e)
    return A, B, C


def split_gamma(a, b, c, d, e, t):
    """End-to-end SNR ``g(t)`` for a relay split ratio ``t`` (``inf`` allowed)."""
    t = np.asarray(t, dtype=float)
    inf = np.isinf(t)
    tt = np.where(inf, 0.0, t)
    u = np.where(inf, 0.0, 1.0 / (tt + 1.0))
    v = np.where(inf, 1.0, tt / (tt + 1.0))
    x = c + d * u
    y = e * v
    return a + b * u + x * y / (x + y + 1.0)


def quadratic_roots(A, B, C):
    """Real roots of ``A t**2 + B t + C`` as two arrays, ``nan`` where absent.

    Degrades to the linear root when ``A == 0``.
    """
    A, B, C = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (A, B, C)))
    delta = B * B - 4.0 * A * C
    with np.errstate(invalid="ignore", divide="ignore"):
        sq = np.sqrt(np.where(delta >= 0, delta, np.nan))
        q = -0.5 * (B + np.where(B >= 0, sq, -sq))
        r1 = np.where(q != 0, C / q, np.where(C == 0, 0.0, np.nan))
        r2 = q / A
        lin = np.where(B != 0, -C / B, np.nan)
    quad = A != 0
    r1 = np.where(quad, r1, lin)
    r2 = np.where(quad, r2, np.nan)
    if np.ndim(r1) == 0:
        return float(r1), float(r2)
    return r1, r2


def best_split(a, b, c, d, e, t_lo, t_hi):
    """Maximise ``g`` over ``[t_lo, t_hi]`` by checking the candidate set.

    ``t_hi`` may be ``inf``; the candidate there is the limit value.  Returns
    ``(gamma, t)`` with ties going to the smallest ``t``.
    """
    A, B, C = split_slope_coeffs(a, b, c, d, e)
    r1, r2 = quadratic_roots(A, B, C)
    t_lo = np.asarray(t_lo, dtype=float)
    t_hi = np.asarray(t_hi, dtype=float)
    cands = [t_lo, np.asarray(r1), np.asarray(r2), t_hi]
    ts, vals = [], []
    for k, t in enumerate(cands):
        if k in (1, 2):
            ok = np.isfinite(t) & (t >= t_lo) & (t <= t_hi)
            t = np.where(ok, t, t_lo)
        else:
            ok = np.ones(np.shape(t), dtype=bool)
        val = split_gamma(a, b, c, d, e, t)
        ts.append(np.broadcast_to(t, np.shape(val)))
        vals.append(np.where(ok, val, -np.inf))
    ts = np.stack(np.broadcast_arrays(*ts))
    vals = np.stack(np.broadcast_arrays(*vals))
    best = vals.max(axis=0)
    t_best = np.where(vals == best, ts, np.inf).min(axis=0)
    return best, t_best


# --------------------------------------------------------------------------
# inner problem at fixed tau1 (vectorised)


def _split_snrs(config: NetworkConfig, gains, tau1, e_a):
    """The five SNR constants ``a..e`` with the relay budget binding."""
    g = np.asarray(gains, dtype=float)
    h_as, h_rs, h_sa, h_sr, h_ra = (g[..., k] for k in range(5))
    with np.errstate(divide="ignore"):
        s = 2.0 / ((1.0 - tau1) * config.n0)
    pr = config.p_r_avg
    eta = config.eta
    a = s * eta * e_a * h_as * h_sa
    b = s * eta * pr * h_rs * h_sa
    c = s * eta * e_a * h_as * h_sr
    d = s * eta * pr * h_rs * h_sr
    e = s * pr * h_ra
    return a, b, c, d, e


def _energy_snr(config: NetworkConfig, gains, tau1, e_a, e_rd, e_ru):
    g = np.asarray(gains, dtype=float)
    h_as, h_rs, h_sa, h_sr, h_ra = (g[..., k] for k in range(5))
    with np.errstate(divide="ignore"):
        s = 2.0 / ((1.0 - tau1) * config.n0)
    harvest = config.eta * (e_a * h_as + e_rd * h_rs)
    x = s * harvest * h_sr
    y = s * e_ru * h_ra
    return s * harvest * h_sa + x * y / (x + y + 1.0)


def _split_inner(config: NetworkConfig, gains, tau1):
    """Relay budget binding: best split ratio for ``0 < tau1 < 1``."""
    mu = config.mu
    e_a = np.minimum(tau1, mu) * config.p_a_max
    a, b, c, d, e = _split_snrs(config, gains, tau1, e_a)
    t_lo = np.maximum(0.0, (mu - tau1) / tau1)
    den = 2.0 * mu - 1.0 + tau1
    t_hi = np.where(den > 0, (1.0 - tau1) / np.where(den > 0, den, 1.0), np.inf)
    gamma, t = best_split(a, b, c, d, e, t_lo, t_hi)
    t_inf = np.isinf(t)
    tf = np.where(t_inf, 0.0, t)
    return {
        "gamma": gamma,
        "t": t,
        "e_a": e_a,
        "e_rd": np.where(t_inf, 0.0, config.p_r_avg / (tf + 1.0)),
        "e_ru": np.where(t_inf, config.p_r_avg, config.p_r_avg * tf / (tf + 1.0)),
    }


def inner_solve(config: NetworkConfig, gains, tau1):
    """Best energies for each downlink share ``tau1`` (any value in ``[0, 1]``).

    ``gains`` has a trailing axis of length 5 and must broadcast against
    ``tau1``.  Returns a dict of arrays: ``objective`` (bps/Hz), ``gamma``,
    ``e_a``, ``e_rd``, ``e_ru``, ``t`` (``nan`` in case 1, ``inf`` when the
    whole relay budget goes to the uplink) and ``case`` (1, 2 or 3; 0 for
    a degenerate empty phase).
    """
    tau1 = np.asarray(tau1, dtype=float)
    g = np.asarray(gains, dtype=float)
    shape = np.broadcast_shapes(g.shape[:-1], tau1.shape)
    tau1 = np.broadcast_to(tau1, shape)
    mu = config.mu
    pa, pr = config.p_a_max, config.p_r_max

    live = (tau1 > 0) & (tau1 < 1)
    tl = np.where(live, tau1, 0.5)  # placeholder keeps the arithmetic finite

    # case 1: relay average budget slack
    c1_ea = tl * pa
    c1_erd = tl * pr
    c1_eru = 0.5 * (1.0 - tl) * pr
    c1_gamma = _energy_snr(config, g, tl, c1_ea, c1_erd, c1_eru)

    # cases 2 and 3: relay budget binding, optimise the split ratio
    split = _split_inner(config, g, tl)
    case1 = tl <= 2.0 * mu - 1.0
    case = np.where(case1, 1, np.where(tl <= mu, 2, 3))
    gamma = np.where(case1, c1_gamma, split["gamma"])
    # empty downlink: nothing harvested, the relay may still hold its uplink
    # peak in case 1.  Empty uplink: nothing is sent, budgets go to the downlink.
    empty_dl = tau1 <= 0
    dead_e_ru = np.where(empty_dl & (2.0 * mu - 1.0 >= 0), 0.5 * pr, 0.0)
    gamma = np.where(live, gamma, 0.0)
    return {
        "gamma": gamma,
        "objective": np.where(live, 0.5 * (1.0 - tl) * np.log2(1.0 + gamma), 0.0),
        "e_a": np.where(live, np.where(case1, c1_ea, split["e_a"]),
                        np.where(empty_dl, 0.0, mu * pa)),
        "e_rd": np.where(live, np.where(case1, c1_erd, split["e_rd"]),
                         np.where(empty_dl, 0.0, config.p_r_avg)),
        "e_ru": np.where(live, np.where(case1, c1_eru, split["e_ru"]), dead_e_ru),
        "t": np.where(live & ~case1, split["t"], np.nan),
        "case": np.where(live, case, 0),
    }


# --------------------------------------------------------------------------
# outer search over tau1


def _golden_max(f, lo, hi, width):
    """Vectorised golden-section maximisation of ``f`` on ``[lo, hi]``."""
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    x1 = hi - _INVPHI * (hi - lo)
    x2 = lo + _INVPHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while True:
        # converged entries are frozen so a result never depends on its batch
        active = hi - lo > width
        if not np.any(active):
            break
        left = f1 >= f2  # keep [lo, x2]
        shrink_left = active & left
        shrink_right = active & ~left
        lo = np.where(shrink_right, x1, lo)
        hi = np.where(shrink_left, x2, hi)
        new_x = np.where(left, hi - _INVPHI * (hi - lo), lo + _INVPHI * (hi - lo))
        f_new = f(new_x)
        x1, x2, f1, f2 = (
            np.where(shrink_left, new_x, np.where(shrink_right, x2, x1)),
            np.where(shrink_left, x1, np.where(shrink_right, new_x, x2)),
            np.where(shrink_left, f_new, np.where(shrink_right, f2, f1)),
            np.where(shrink_left, f1, np.where(shrink_right, f_new, f2)),
        )
    x = 0.5 * (lo + hi)
    return x, f(x)


def optimize_dc_batch(config: NetworkConfig, gains, n_grid: int = N_GRID,
                      refine_width: float = REFINE_WIDTH, chunk: int = 256):
    """Optimal D-C downlink share and energies for each row of ``gains``.

    Returns the :func:`inner_solve` dict evaluated at the optimal ``tau1``,
    with the extra key ``tau1``.
    """
    g = np.atleast_2d(np.asarray(gains, dtype=float))
    n = g.shape[0]
    mu = config.mu
    grid = mu * np.arange(n_grid) / (n_grid - 1)
    tau_best = np.zeros(n)
    for start in range(0, n, chunk):
        gc = g[start:start + chunk]
        obj = inner_solve(config, gc[:, None, :], grid[None, :])["objective"]
        k = np.argmax(obj, axis=1)
        best_val = obj[np.arange(len(k)), k]
        lo = grid[np.maximum(k - 1, 0)]
        hi = grid[np.minimum(k + 1, n_grid - 1)]
        if mu > 0:
            x, fx = _golden_max(lambda t: inner_solve(config, gc, t)["objective"],
                                lo, hi, refine_width)
            tau_best[start:start + chunk] = np.where(fx > best_val, x, grid[k])
        else:
            tau_best[start:start + chunk] = 0.0
    sol = inner_solve(config, g, tau_best)
    sol["tau1"] = tau_best
    return sol


# --------------------------------------------------------------------------
# scalar API


@dataclass(frozen=True)
class QuadraticCoeffs:
    """SNR constants of the relay-split problem and the derivative quadratic."""

    a: float
    b: float
    c: float
    d: float
    e: float
    A: float = field(init=False)
    B: float = field(init=False)
    C: float = field(init=False)
    delta: float = field(init=False)

    def __post_init__(self):
        A, B, C = split_slope_coeffs(self.a, self.b, self.c, self.d, self.e)
        object.__setattr__(self, "A", float(A))
        object.__setattr__(self, "B", float(B))
        object.__setattr__(self, "C", float(C))
        object.__setattr__(self, "delta", float(B * B - 4 * A * C))

    @classmethod
    def at(cls, config: NetworkConfig, ch: ChannelRealization, tau1: float) -> "QuadraticCoeffs":
        e_a = min(tau1, config.mu) * config.p_a_max
        return cls(*(float(x) for x in _split_snrs(config, ch.as_array(), tau1, e_a)))

    def gamma(self, t):
        return split_gamma(self.a, self.b, self.c, self.d, self.e, t)

    def derivative_sign_poly(self, t):
        return (self.A * t + self.B) * t + self.C

    def roots(self):
        return quadratic_roots(self.A, self.B, self.C)

    def limit(self) -> float:
        """``g`` as ``t`` goes to infinity."""
        return self.a + self.c * self.e / (self.c + self.e + 1.0)

    def best(self, t_lo: float, t_hi: float):
        gamma, t = best_split(self.a, self.b, self.c, self.d, self.e, t_lo, t_hi)
        return float(gamma), float(t)


@dataclass(frozen=True)
class DcInnerSolution:
    tau1: float
    e_a: float
    e_r_d: float
    e_r_u: float
    t_star: Optional[float]
    case_id: int
    gamma: float
    objective: float
    t_lo: Optional[float] = None
    t_hi: Optional[float] = None


def _split_bounds(mu: float, tau1: float):
    t_lo = max(0.0, (mu - tau1) / tau1)
    den = 2.0 * mu - 1.0 + tau1
    t_hi = (1.0 - tau1) / den if den > 0 else math.inf
    return t_lo, t_hi


def _finite_cap(coeffs: QuadraticCoeffs, t_lo: float) -> float:
    """Smallest doubling of ``t`` whose ``g`` is within ``CAP_RTOL`` of the limit."""
    sup = coeffs.limit()
    t = max(t_lo, 1.0)
    while sup - float(coeffs.gamma(t)) > CAP_RTOL * abs(sup) and t < 1e300:
        t *= 2.0
    return t


def _scalar_inner(config, ch, tau1, force_split=False) -> DcInnerSolution:
    if force_split:
        sol = _split_inner(config, ch.as_array(), np.float64(tau1))
        gamma = float(sol["gamma"])
        sol["objective"] = 0.5 * (1.0 - tau1) * math.log2(1.0 + gamma)
        sol["case"] = 2 if tau1 <= config.mu else 3
    else:
        sol = inner_solve(config, ch.as_array(), tau1)
    case = int(sol["case"])
    t = float(sol["t"])
    t_lo = t_hi = None
    if case in (2, 3):
        t_lo, t_hi = _split_bounds(config.mu, tau1)
        if math.isinf(t):
            t = _finite_cap(QuadraticCoeffs.at(config, ch, tau1), t_lo)
    return DcInnerSolution(
        tau1=float(tau1),
        e_a=float(sol["e_a"]),
        e_r_d=float(sol["e_rd"]),
        e_r_u=float(sol["e_ru"]),
        t_star=None if math.isnan(t) else t,
        case_id=case,
        gamma=float(sol["gamma"]),
        objective=float(sol["objective"]),
        t_lo=t_lo,
        t_hi=t_hi,
    )


def dc_inner_case1(config: NetworkConfig, ch: ChannelRealization, tau1: float) -> DcInnerSolution:
    """Inner optimum when the relay's average budget cannot bind (``tau1 <= 2 mu - 1``)."""
    if not 0 <= tau1 <= 2.0 * config.mu - 1.0:
        raise CaseDispatchError(
            f"case 1 needs 0 <= tau1 <= 2*mu-1 = {2 * config.mu - 1:g}, got {tau1:g}"
        )
    sol = inner_solve(config, ch.as_array(), tau1)
    return DcInnerSolution(
        tau1=float(tau1),
        e_a=tau1 * config.p_a_max,
        e_r_d=tau1 * config.p_r_max,
        e_r_u=0.5 * (1.0 - tau1) * config.p_r_max,
        t_star=None,
        case_id=1,
        gamma=float(sol["gamma"]),
        objective=float(sol["objective"]),
    )


def dc_inner_case2(config: NetworkConfig, ch: ChannelRealization, tau1: float) -> DcInnerSolution:
    """Inner optimum with the relay budget binding and ``2 mu - 1 < tau1 <= mu``.

    The closed end ``tau1 = 2 mu - 1`` is accepted too, where the split
    interval collapses to a point and the result must agree with case 1.
    At ``tau1 = 0`` (reachable when ``mu < 1/2``) nothing is harvested and
    a zero solution is returned.  When the best split sends the whole relay
    budget to the uplink, ``t_star`` is a finite ratio whose SNR is within
    ``1e-9`` (relative) of that limit.
    """
    mu = config.mu
    if tau1 == 0 and mu < 0.5:
        return DcInnerSolution(tau1=0.0, e_a=0.0, e_r_d=0.0, e_r_u=0.0, t_star=None,
                               case_id=2, gamma=0.0, objective=0.0,
                               t_lo=math.inf, t_hi=math.inf)
    if not (0.0 < tau1 <= mu and tau1 >= 2.0 * mu - 1.0):
        raise CaseDispatchError(
            f"case 2 needs max(0, 2*mu-1) < tau1 <= mu = {mu:g}, got {tau1:g}"
        )
    if tau1 == 1.0:
        # mu = 1: no uplink time left
        return DcInnerSolution(tau1=1.0, e_a=config.p_a_max, e_r_d=config.p_r_max, e_r_u=0.0,
                               t_star=0.0, case_id=2, gamma=0.0, objective=0.0,
                               t_lo=0.0, t_hi=0.0)
    return _scalar_inner(config, ch, tau1, force_split=True)


def dc_inner_saturated(config: NetworkConfig, ch: ChannelRealization, tau1: float) -> DcInnerSolution:
    """Inner optimum for ``mu < tau1 <= 1``, where both average budgets bind.

    Not used by :func:`optimize_dc`, which never searches beyond ``mu``;
    provided to check that doing so cannot help.
    """
    if not config.mu < tau1 <= 1.0:
        raise CaseDispatchError(f"needs mu < tau1 <= 1, got tau1={tau1:g}")
    return _scalar_inner(config, ch, tau1)


def dc_inner(config: NetworkConfig, ch: ChannelRealization, tau1: float) -> DcInnerSolution:
    """Inner optimum at any ``tau1`` in ``[0, 1]``, dispatching on the case."""
    if not 0 <= tau1 <= 1:
        raise CaseDispatchError(f"tau1 must lie in [0, 1], got {tau1:g}")
    return _scalar_inner(config, ch, tau1)


def optimize_dc(config: NetworkConfig, ch: ChannelRealization, n_grid: int = N_GRID) -> OptimResult:
    """Optimal D-C allocation for one realization.

    ``diagnostics`` carries the inner solution at the optimum
    (``"inner"``), and the inner objective (``"objective"``) which must match
    the returned throughput.
    """
    sol = optimize_dc_batch(config, ch.as_array()[None, :], n_grid=n_grid)
    tau1 = float(sol["tau1"][0])
    objective = float(sol["objective"][0])
    if tau1 <= 0 or objective <= 0:
        tau1 = 0.0
        alloc = DcAllocation(p_a=config.p_a_max, p_r_d=config.p_r_max, p_r_u=0.0,
                             tau1=0.0, tau2=1.0)
    else:
        tau2 = 1.0 - tau1
        alloc = DcAllocation(
            p_a=float(sol["e_a"][0]) / tau1,
            p_r_d=float(sol["e_rd"][0]) / tau1,
            p_r_u=2.0 * float(sol["e_ru"][0]) / tau2,
            tau1=tau1,
            tau2=tau2,
        )
    return OptimResult(
        alloc=alloc,
        throughput=dc_throughput(config, ch, alloc),
        diagnostics={
            "objective": objective if tau1 > 0 else 0.0,
            "inner": dc_inner(config, ch, tau1),
            "n_grid": n_grid,
        },
    )
