"""
Monte Carlo sweeps
==================

Average throughput against transmit power and against relay position.  D-C
wins at low power, where the relay's forwarding matters, and E-C wins at
high power, where D-C's halved uplink time costs more than it gains.
Raise ``N`` for smoother curves.
"""

from hybridrelay import SweepSpec, run_distance_sweep, run_power_sweep
from hybridrelay.experiments import DISTANCE_SWEEP, POWER_SWEEP, select

N = 300

spec = SweepSpec(POWER_SWEEP, (0.1, 0.4, 1.0, 2.0, 5.0), mu_values=(0.5,), n_realizations=N)
rows = run_power_sweep(spec)
print("P_avg    E-C      D-C")
for e, d in zip(select(rows, "EC", 0.5), select(rows, "DC", 0.5)):
    print(f"{e.sweep_value:5.2f}  {e.mean_throughput:.4f}  {d.mean_throughput:.4f}")

# %%
# Moving the relay away from the source at 2 W average power.
spec = SweepSpec(DISTANCE_SWEEP, (1.0, 3.0, 5.0, 7.0, 9.0), n_realizations=N, p_avg=2.0)
rows = run_distance_sweep(spec)
print("d_SR    E-C      D-C")
for e, d in zip(select(rows, "EC", 0.5), select(rows, "DC", 0.5)):
    print(f"{e.sweep_value:4.1f}  {e.mean_throughput:.4f}  {d.mean_throughput:.4f}")
