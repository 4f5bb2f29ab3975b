"""
Checking the solvers against brute force
========================================

The oracles search plain grids over the phase lengths and powers and only
call the throughput formulas.  The analytic solvers should never lose to
them by more than the grid resolution.
"""

from hybridrelay import (
    GridSpec,
    NetworkConfig,
    optimize_dc,
    optimize_ec,
    oracle_dc,
    oracle_ec,
    sample_realization,
)

cfg = NetworkConfig(p_a_max=2.0, p_r_max=2.0, mu=0.5)
spec = GridSpec(n_tau=51, n_power=21)
for k in range(5):
    ch = sample_realization(cfg, seed=11, block_index=k)
    ec, oec = optimize_ec(cfg, ch).throughput, oracle_ec(cfg, ch, spec).throughput
    dc, odc = optimize_dc(cfg, ch).throughput, oracle_dc(cfg, ch, spec).throughput
    print(f"block {k}: E-C {ec:.5f} vs grid {oec:.5f} | D-C {dc:.5f} vs grid {odc:.5f}")
