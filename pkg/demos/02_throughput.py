"""
Throughput of the two protocols
===============================

A block of unit length is split into a downlink phase where the AP and relay
charge the source, and an uplink phase where the source sends.  In E-C the
source talks straight to the AP; in D-C the relay also forwards what it
hears and the AP adds the two copies.
"""

from hybridrelay import (
    DcAllocation,
    EcAllocation,
    NetworkConfig,
    dc_feasible,
    dc_throughput,
    ec_feasible,
    ec_throughput,
    sample_realization,
)
from hybridrelay.protocols import dc_snr_components

cfg = NetworkConfig(p_a_max=2.0, p_r_max=2.0, mu=0.5)
ch = sample_realization(cfg, seed=1, block_index=0)

ec = EcAllocation(p_a=2.0, p_r=2.0, tau1=0.4, tau2=0.6)
print("E-C feasible:", bool(ec_feasible(cfg, ec)), " throughput:", ec_throughput(cfg, ch, ec))

# %%
# In D-C the relay's uplink power is spent over half the uplink phase.
dc = DcAllocation(p_a=2.0, p_r_d=1.0, p_r_u=2.0, tau1=0.4, tau2=0.6)
print("D-C feasible:", bool(dc_feasible(cfg, dc)), " throughput:", dc_throughput(cfg, ch, dc))
for name, v in zip(("direct", "S->R", "R->A", "relayed"), dc_snr_components(cfg, ch, dc)):
    print(f"  SNR {name}: {v:.3f}")

# %%
# Average-power violations are reported by name.
too_long = EcAllocation(p_a=2.0, p_r=2.0, tau1=0.7, tau2=0.3)
print("E-C with tau1 = 0.7:", ec_feasible(cfg, too_long))
