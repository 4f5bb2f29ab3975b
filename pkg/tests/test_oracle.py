import numpy as np
import pytest

from hybridrelay.channel import ChannelRealization, NetworkConfig, sample_realization
from hybridrelay.oracle import GridSpec, grid, oracle_dc, oracle_dc_full, oracle_ec
from hybridrelay.protocols import dc_feasible, dc_throughput, ec_feasible, ec_throughput
from hybridrelay.solver_dc import optimize_dc
from hybridrelay.solver_ec import optimize_ec

SMALL = GridSpec(n_tau=21, n_power=11)


def test_grid_spec_validation():
    with pytest.raises(ValueError):
        GridSpec(n_tau=1)
    with pytest.raises(ValueError):
        GridSpec(t_cap=0.0)
    assert GridSpec(11, 5).refined() == GridSpec(21, 9)


def test_grids_nest_exactly():
    coarse, fine = grid(0.7, 41), grid(0.7, 81)
    assert np.array_equal(fine[::2], coarse)


def test_ec_grid_best_uses_block_and_peak(paper_config):
    spec = GridSpec()
    for k in range(3):
        ch = sample_realization(paper_config, 3, k)
        res = oracle_ec(paper_config, ch, spec)
        a = res.alloc
        step_t = 1.0 / (spec.n_tau - 1)
        assert a.tau1 + a.tau2 >= 1.0 - step_t - 1e-12
        assert a.p_a >= paper_config.p_a_max * (1 - 1.0 / (spec.n_power - 1)) - 1e-12
        assert a.p_r >= paper_config.p_r_max * (1 - 1.0 / (spec.n_power - 1)) - 1e-12
        assert ec_feasible(paper_config, a)
        assert ec_throughput(paper_config, ch, a) == res.throughput


def test_ec_solver_dominates_grid(paper_config):
    for k in range(3):
        ch = sample_realization(paper_config, 4, k)
        best = optimize_ec(paper_config, ch).throughput
        grid_best = oracle_ec(paper_config, ch).throughput
        assert best >= grid_best * (1 - 1e-12)
        assert (best - grid_best) / best <= 1e-3


def test_zero_gains_give_zero(paper_config):
    ch = ChannelRealization(0.0, 0.0, 0.0, 0.0, 0.0)
    assert oracle_ec(paper_config, ch, SMALL).throughput == 0.0
    assert oracle_dc(paper_config, ch, SMALL).throughput == 0.0


def test_zero_mu_gives_zero():
    cfg = NetworkConfig(mu=0.0)
    ch = sample_realization(cfg, 0, 0)
    assert oracle_ec(cfg, ch, SMALL).throughput == 0.0
    assert oracle_dc(cfg, ch, SMALL).throughput == 0.0


def test_dc_grid_without_relay_matches_direct_link(paper_config):
    ch = ChannelRealization(h_AS=1e-5, h_RS=0.0, h_SA=1e-5, h_SR=0.0, h_RA=0.0)
    spec = GridSpec(n_tau=201, n_power=5)
    res = oracle_dc(paper_config, ch, spec)
    taus = grid(1.0, spec.n_tau)
    taus = taus[(taus > 0) & (taus <= paper_config.mu)]
    snr = 2 * paper_config.eta * taus * paper_config.p_a_max * 1e-10 / ((1 - taus) * paper_config.n0)
    assert res.throughput == pytest.approx(np.max((1 - taus) / 2 * np.log2(1 + snr)), rel=1e-12)
    assert dc_feasible(paper_config, res.alloc)
    assert dc_throughput(paper_config, ch, res.alloc) == res.throughput


def test_refined_grid_never_worse(paper_config):
    ch = sample_realization(paper_config, 5, 0)
    for fn in (oracle_ec, oracle_dc):
        coarse = fn(paper_config, ch, SMALL).throughput
        fine = fn(paper_config, ch, SMALL.refined()).throughput
        assert fine >= coarse


def test_full_dc_grid_agrees_with_full_block(paper_config):
    spec = GridSpec(n_tau=11, n_power=9)
    for k in range(2):
        ch = sample_realization(paper_config, 7, k)
        full = oracle_dc_full(paper_config, ch, spec)
        fixed = oracle_dc(paper_config, ch, spec)
        assert full.throughput == pytest.approx(fixed.throughput, rel=1e-12)


def test_dc_solver_dominates_grid(paper_config):
    ch = sample_realization(paper_config, 8, 0)
    assert optimize_dc(paper_config, ch).throughput >= oracle_dc(paper_config, ch).throughput * (1 - 1e-3)


def test_deterministic(paper_config):
    ch = sample_realization(paper_config, 9, 0)
    assert oracle_dc(paper_config, ch, SMALL).alloc == oracle_dc(paper_config, ch, SMALL).alloc
    assert oracle_ec(paper_config, ch, SMALL).alloc == oracle_ec(paper_config, ch, SMALL).alloc
