"""
E-C optimum in closed form
==========================

Both nodes always send at peak power; only the downlink share is chosen.
It comes from the root of ``z ln z - z + 1 = A`` and is cut back to ``mu``
when the average budgets would be exceeded.
"""

import numpy as np

from hybridrelay import NetworkConfig, optimize_ec, sample_realization, solve_z
from hybridrelay.protocols import EcAllocation, ec_throughput

print("z for A = 1:", solve_z(1.0), "(e =", np.e, ")")

for mu in (0.2, 0.5, 1.0):
    cfg = NetworkConfig(p_a_max=1.0 / mu, p_r_max=1.0 / mu, mu=mu)
    ch = sample_realization(cfg, seed=3, block_index=0)
    res = optimize_ec(cfg, ch)
    print(f"mu={mu}: tau1={res.alloc.tau1:.4f} free={res.tau1_free:.4f} "
          f"capped={res.capped} throughput={res.throughput:.4f}")

# %%
# A sweep over tau1 confirms the analytic choice at mu = 1.
cfg = NetworkConfig(p_a_max=1.0, p_r_max=1.0, mu=1.0)
ch = sample_realization(cfg, seed=3, block_index=0)
taus = np.linspace(0.001, 0.999, 999)
curve = [ec_throughput(cfg, ch, EcAllocation(1.0, 1.0, t, 1 - t)) for t in taus]
print("grid best tau1:", taus[int(np.argmax(curve))], " analytic:", optimize_ec(cfg, ch).alloc.tau1)
