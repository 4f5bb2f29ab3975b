"""
D-C optimum
===========

For a fixed downlink share the best energies depend on which budget binds.
When the relay's average budget binds, its split between downlink charging
and uplink forwarding is a one-dimensional problem whose optimum lies at an
end point or a root of a quadratic.  The downlink share itself is found by
a grid plus golden-section search.
"""

import numpy as np

from hybridrelay import NetworkConfig, optimize_dc, sample_realization
from hybridrelay.solver_dc import QuadraticCoeffs, dc_inner

cfg = NetworkConfig(p_a_max=2.0, p_r_max=2.0, mu=0.5)
ch = sample_realization(cfg, seed=5, block_index=0)

for tau1 in (0.1, 0.3, 0.5, 0.7):
    s = dc_inner(cfg, ch, tau1)
    print(f"tau1={tau1}: case {s.case_id}, split t={s.t_star}, objective={s.objective:.4f}")

# %%
# The split problem at tau1 = 0.3: candidates versus a scan.
q = QuadraticCoeffs.at(cfg, ch, 0.3)
sol = dc_inner(cfg, ch, 0.3)
ts = np.linspace(sol.t_lo, sol.t_hi, 5001)
print("roots:", q.roots(), " best t:", q.best(sol.t_lo, sol.t_hi)[1],
      " scan:", ts[int(np.argmax(q.gamma(ts)))])

# %%
# Full optimum.  Powers are recovered from the optimal energies.
res = optimize_dc(cfg, ch)
print(res.alloc)
print("throughput:", res.throughput)
