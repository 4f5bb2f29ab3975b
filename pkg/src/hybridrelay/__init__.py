"""Wireless-powered cooperative communications through a hybrid relay.

A hybrid access point (AP) and a hybrid relay, both mains-powered, charge an
energy-harvesting source over the downlink; the source then sends its data
back to the AP on the uplink.  Two relay behaviours are modelled:

* energy cooperation (E-C): the relay only helps with downlink charging;
* dual cooperation (D-C): the relay also amplifies-and-forwards the uplink.

The package evaluates both protocols, computes their optimal joint
time/power allocations, checks those against brute-force grid searches and
runs Monte Carlo sweeps over transmit power and relay position.
"""

from hybridrelay.channel import (
    ChannelRealization,
    NetworkConfig,
    mean_gain,
    noise_watts,
    sample_realization,
    sample_unit_gains,
)
from hybridrelay.protocols import (
    DcAllocation,
    EcAllocation,
    Feasibility,
    FeasibilityError,
    OptimResult,
    dc_feasible,
    dc_snr_components,
    dc_throughput,
    ec_feasible,
    ec_throughput,
    harvested_energy,
)
from hybridrelay.solver_ec import EcOptimum, optimize_ec, solve_z
from hybridrelay.solver_dc import (
    DcInnerSolution,
    QuadraticCoeffs,
    dc_inner_case1,
    dc_inner_case2,
    dc_inner_saturated,
    optimize_dc,
)
from hybridrelay.oracle import GridSpec, oracle_dc, oracle_ec
from hybridrelay.experiments import (
    SweepRow,
    SweepSpec,
    read_csv,
    run_distance_sweep,
    run_power_sweep,
    write_csv,
)

__version__ = "0.1.0"

__all__ = [
    "ChannelRealization",
    "DcAllocation",
    "DcInnerSolution",
    "EcAllocation",
    "EcOptimum",
    "Feasibility",
    "FeasibilityError",
    "GridSpec",
    "NetworkConfig",
    "OptimResult",
    "QuadraticCoeffs",
    "SweepRow",
    "SweepSpec",
    "dc_feasible",
    "dc_inner_case1",
    "dc_inner_case2",
    "dc_inner_saturated",
    "dc_snr_components",
    "dc_throughput",
    "ec_feasible",
    "ec_throughput",
    "harvested_energy",
    "mean_gain",
    "noise_watts",
    "optimize_dc",
    "optimize_ec",
    "oracle_dc",
    "oracle_ec",
    "read_csv",
    "run_distance_sweep",
    "run_power_sweep",
    "sample_realization",
    "sample_unit_gains",
    "solve_z",
    "write_csv",
]
