"""Command line interface: ``hybridrelay {optimize,sweep-power,sweep-distance,validate}``."""

from __future__ import annotations

import argparse
import sys
import time


from hybridrelay.channel import NetworkConfig, sample_realization
from hybridrelay.experiments import (
    DEFAULT_D_SR,
    DEFAULT_MU,
    DEFAULT_P_AVG,
    DISTANCE_SWEEP,
    POWER_SWEEP,
    SweepSpec,
    run_distance_sweep,
    run_power_sweep,
    write_csv,
)
from hybridrelay.oracle import GridSpec, oracle_dc, oracle_ec
from hybridrelay.solver_dc import optimize_dc
from hybridrelay.solver_ec import optimize_ec

EC_GAP_RTOL = 1e-3
DC_GAP_RTOL = 1e-3


def _single(values, default, name):
    if not values:
        return default
    if len(values) > 1:
        raise ValueError(f"{name} takes a single value for this command")
    return values[0]


def _add_network_flags(p: argparse.ArgumentParser):
    p.add_argument("--d-as", type=float, default=10.0, help="AP-source distance [m]")
    p.add_argument("--d-sr", type=float, action="append",
                   help="source-relay distance [m]; repeatable for sweep-distance")
    p.add_argument("--alpha", type=float, default=2.0, help="path-loss exponent")
    p.add_argument("--eta", type=float, default=0.5, help="harvesting efficiency")
    p.add_argument("--n0-dbm", type=float, default=-80.0, help="noise power [dBm]")
    p.add_argument("--mu", type=float, action="append", help="average-to-peak ratio (repeatable)")
    p.add_argument("--p-avg", type=float, action="append",
                   help="average power of AP and relay [W] (repeatable)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--non-reciprocal", action="store_true",
                   help="draw all five links independently")


def _config(args, d_sr=None, mu=None, p_avg=None) -> NetworkConfig:
    d_sr = d_sr if d_sr is not None else _single(args.d_sr, 5.0, "--d-sr")
    mu = mu if mu is not None else _single(args.mu, 0.5, "--mu")
    p_avg = p_avg if p_avg is not None else _single(args.p_avg, 1.0, "--p-avg")
    if not mu > 0:
        raise ValueError("--mu must be positive to derive peak powers from --p-avg")
    return NetworkConfig(
        d_AS=args.d_as, d_SR=d_sr, alpha=args.alpha, eta=args.eta, n0_dbm=args.n0_dbm,
        p_a_max=p_avg / mu, p_r_max=p_avg / mu, mu=mu,
        reciprocal_channels=not args.non_reciprocal,
    )


def cmd_optimize(args) -> int:
    cfg = _config(args)
    ch = sample_realization(cfg, args.seed, args.block)
    print(f"protocol: {args.protocol.upper()}")
    for name in ("h_AS", "h_RS", "h_SA", "h_SR", "h_RA"):
        print(f"{name}: {getattr(ch, name):.17g}")
    if args.protocol == "ec":
        res = optimize_ec(cfg, ch)
        extra = {"z_star": res.z_star, "capped": res.capped}
    else:
        res = optimize_dc(cfg, ch)
        inner = res.diagnostics["inner"]
        extra = {"case": inner.case_id, "split_ratio": inner.t_star}
    for k, v in vars(res.alloc).items():
        print(f"{k}: {v:.17g}")
    print(f"throughput: {res.throughput:.17g}")
    for k, v in extra.items():
        print(f"{k}: {v}")
    return 0


def _sweep(args, kind) -> int:
    base = _config(args, d_sr=5.0 if kind == DISTANCE_SWEEP else None, mu=1.0, p_avg=1.0)
    if kind == POWER_SWEEP:
        spec = SweepSpec(POWER_SWEEP, tuple(args.p_avg or DEFAULT_P_AVG),
                         tuple(args.mu or DEFAULT_MU), base, args.realizations, args.seed)
        rows = run_power_sweep(spec, workers=args.workers)
    else:
        spec = SweepSpec(DISTANCE_SWEEP, tuple(args.d_sr or DEFAULT_D_SR),
                         tuple(args.mu or (0.5,)), base, args.realizations, args.seed,
                         p_avg=_single(args.p_avg, 2.0, "--p-avg"))
        rows = run_distance_sweep(spec, workers=args.workers)
    write_csv(rows, args.out)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def cmd_validate(args) -> int:
    cfg = _config(args)
    grid = GridSpec(n_tau=args.grid_tau, n_power=args.grid_power)
    failures = 0
    worst_ec = worst_dc = 0.0
    t0 = time.perf_counter()
    for k in range(args.n):
        ch = sample_realization(cfg, args.seed, k)
        ec, oec = optimize_ec(cfg, ch).throughput, oracle_ec(cfg, ch, grid).throughput
        gap_ec = (ec - oec) / ec if ec > 0 else 0.0
        worst_ec = max(worst_ec, gap_ec)
        if ec < oec * (1 - 1e-12) or gap_ec > EC_GAP_RTOL:
            failures += 1
            print(f"block {k}: E-C solver {ec:.10g} vs grid {oec:.10g}")
        if not args.skip_dc:
            dc, odc = optimize_dc(cfg, ch).throughput, oracle_dc(cfg, ch, grid).throughput
            worst_dc = max(worst_dc, (odc - dc) / odc if odc > 0 else 0.0)
            if dc < odc * (1 - DC_GAP_RTOL):
                failures += 1
                print(f"block {k}: D-C solver {dc:.10g} below grid {odc:.10g}")
    print(f"realizations: {args.n}")
    print(f"E-C max (solver - grid)/solver: {worst_ec:.3e}")
    if not args.skip_dc:
        print(f"D-C max (grid - solver)/grid: {worst_dc:.3e}")
    print(f"failures: {failures}")
    print(f"elapsed: {time.perf_counter() - t0:.1f} s")
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hybridrelay", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("optimize", help="optimal allocation for one channel realization")
    _add_network_flags(p)
    p.add_argument("--protocol", choices=("ec", "dc"), required=True)
    p.add_argument("--block", type=int, default=0, help="block index of the realization")
    p.set_defaults(func=cmd_optimize)

    for name, kind in (("sweep-power", POWER_SWEEP), ("sweep-distance", DISTANCE_SWEEP)):
        p = sub.add_parser(name, help=f"Monte Carlo {kind} to CSV")
        _add_network_flags(p)
        p.add_argument("--realizations", type=int, default=5000)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--out", required=True)
        p.set_defaults(func=lambda a, kind=kind: _sweep(a, kind))

    p = sub.add_parser("validate", help="compare the solvers with brute-force grids")
    _add_network_flags(p)
    p.add_argument("--n", type=int, default=200, help="number of realizations")
    p.add_argument("--grid-tau", type=int, default=101)
    p.add_argument("--grid-power", type=int, default=41)
    p.add_argument("--workers", type=int, default=1, help="accepted for symmetry; unused")
    p.add_argument("--skip-dc", action="store_true", help="only check E-C")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
