import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hybridrelay.channel import ChannelRealization, NetworkConfig
from hybridrelay.protocols import (
    DcAllocation,
    EcAllocation,
    FeasibilityError,
    dc_feasible,
    dc_snr_components,
    dc_throughput,
    ec_feasible,
    ec_throughput,
    harvested_energy,
)

gain = st.floats(min_value=0.0, max_value=1e-3, allow_nan=False)
frac = st.floats(min_value=0.0, max_value=1.0)
channels = st.builds(ChannelRealization, gain, gain, gain, gain, gain)


def test_harvested_energy(unit_config, flat_channel):
    cfg = NetworkConfig(p_a_max=1.0, p_r_max=1.0, eta=0.5)
    assert harvested_energy(cfg, flat_channel, 1.0, 1.0, 0.5) == pytest.approx(5e-6, rel=1e-14)
    assert harvested_energy(cfg, flat_channel, 1.0, 1.0, 0.0) == 0.0
    assert harvested_energy(cfg, flat_channel, 0.0, 0.0, 0.5) == 0.0


def test_ec_throughput_hand_value(unit_config, flat_channel):
    # eta*tau1*(P_A h + P_R h)*h_SA / (tau2 N0) = 0.5*0.5*2e-5*1e-5 / (0.5e-11) = 10
    alloc = EcAllocation(1.0, 1.0, 0.5, 0.5)
    assert ec_throughput(unit_config, flat_channel, alloc) == pytest.approx(
        0.5 * math.log2(11.0), rel=1e-13
    )
    assert ec_throughput(unit_config, flat_channel, alloc) == pytest.approx(1.7297158093186485)


def test_ec_throughput_zero_cases(unit_config, flat_channel):
    assert ec_throughput(unit_config, flat_channel, EcAllocation(1, 1, 0.0, 1.0)) == 0.0
    assert ec_throughput(unit_config, flat_channel, EcAllocation(1, 1, 1.0, 0.0)) == 0.0
    dead_ul = ChannelRealization(1e-5, 1e-5, 0.0, 1e-5, 1e-5)
    assert ec_throughput(unit_config, dead_ul, EcAllocation(1, 1, 0.5, 0.5)) == 0.0


def test_ec_throughput_rejects_infeasible(unit_config, flat_channel):
    with pytest.raises(FeasibilityError) as err:
        ec_throughput(unit_config, flat_channel, EcAllocation(1, 1, 0.6, 0.41))
    assert err.value.tag == "time-budget"


def test_dc_snr_components_hand_values(unit_config, flat_channel):
    alloc = DcAllocation(1.0, 1.0, 0.0, 0.5, 0.5)
    sa, sr, ra, sra = dc_snr_components(unit_config, flat_channel, alloc)
    assert sa == pytest.approx(20.0, rel=1e-13)
    assert sr == pytest.approx(20.0, rel=1e-13)
    assert ra == 0.0 and sra == 0.0
    _, sr, ra, sra = dc_snr_components(
        unit_config, ChannelRealization(1e-5, 1e-5, 1e-5, 0.0, 1e-5), DcAllocation(1, 1, 1, 0.5, 0.5)
    )
    assert sr == 0.0 and ra > 0 and sra == 0.0


def test_dc_snr_sra_unit_values(unit_config):
    # choose gains giving gamma_SR = gamma_RA = 1: sra = 1/3
    n0 = unit_config.n0
    h_sr = n0 / (2 * 0.5 * 0.5 * 1.0 * 1.0 / 0.5)  # 2*eta*tau1*P_A*h_AS*h_SR/(tau2 N0) with h_AS=1
    ch = ChannelRealization(1.0, 0.0, 0.0, h_sr, n0)
    _, sr, ra, sra = dc_snr_components(unit_config, ch, DcAllocation(1.0, 0.0, 1.0, 0.5, 0.5))
    assert sr == pytest.approx(1.0, rel=1e-12)
    assert ra == pytest.approx(1.0, rel=1e-12)
    assert sra == pytest.approx(1.0 / 3.0, rel=1e-12)


def test_dc_snr_degenerate_uplink(unit_config, flat_channel):
    assert dc_snr_components(unit_config, flat_channel, DcAllocation(1, 1, 1, 1.0, 0.0)) == (
        0.0, 0.0, 0.0, 0.0,
    )


def test_dc_throughput_hand_value(unit_config, flat_channel):
    alloc = DcAllocation(1.0, 1.0, 0.0, 0.5, 0.5)
    assert dc_throughput(unit_config, flat_channel, alloc) == pytest.approx(
        0.25 * math.log2(21.0), rel=1e-13
    )
    assert dc_throughput(unit_config, flat_channel, alloc) == pytest.approx(1.0980793556946902)
    assert dc_throughput(unit_config, flat_channel, DcAllocation(1, 1, 1, 0.0, 1.0)) == 0.0


def test_feasibility_tags():
    cfg = NetworkConfig(p_a_max=2.0, p_r_max=2.0, mu=0.5)
    assert ec_feasible(cfg, EcAllocation(1, 1, 0.5, 0.51)).tag == "time-budget"
    assert ec_feasible(cfg, EcAllocation(2.0, 2.0, 0.5, 0.5)).ok  # tau1*p_a == P_avg exactly
    assert ec_feasible(cfg, EcAllocation(2.1, 1, 0.1, 0.5)).tag == "ap-peak-power"
    assert ec_feasible(cfg, EcAllocation(1, 2.1, 0.1, 0.5)).tag == "relay-peak-power"
    assert ec_feasible(cfg, EcAllocation(2.0, 0, 0.6, 0.4)).tag == "ap-average-power"
    assert ec_feasible(cfg, EcAllocation(0, 2.0, 0.6, 0.4)).tag == "relay-average-power"
    assert ec_feasible(cfg, EcAllocation(-1, 0, 0.1, 0.1)).tag == "negative"
    # tau1 p_rd + tau2/2 p_ru = 1.001 P_avg
    over = DcAllocation(1.0, 2.0, 2 * (1.001 - 0.6) / 0.7, 0.3, 0.7)
    assert not dc_feasible(cfg, over)
    assert dc_feasible(cfg, over).tag == "relay-average-power"
    assert dc_feasible(cfg, DcAllocation(1.0, 2.0, 2 * 0.4 / 0.7, 0.3, 0.7)).ok
    assert dc_feasible(cfg, DcAllocation(1, 1, 2.5, 0.1, 0.1)).tag == "relay-peak-power"
    assert dc_feasible(cfg, DcAllocation(1, 1, 1, 0.5, 0.5 + 2e-9)).tag == "time-budget"
    assert dc_feasible(cfg, DcAllocation(1, 1, 1, 0.5, 0.5 + 5e-10)).ok


@settings(max_examples=300, deadline=None)
@given(st.floats(0, 1e9), st.floats(0, 1e9))
def test_relay_snr_below_both_hops(x, y):
    sra = x * y / (x + y + 1.0)
    assert sra <= min(x, y)


@settings(max_examples=200, deadline=None)
@given(channels, frac, frac, st.integers(0, 4), st.floats(1.0, 10.0))
def test_throughputs_monotone_in_gains(ch, t1, share, link, factor):
    cfg = NetworkConfig(p_a_max=1.0, p_r_max=1.0, mu=1.0)
    tau1 = t1
    tau2 = (1.0 - tau1) * share
    g = ch.as_array()
    g2 = g.copy()
    g2[link] *= factor
    ch2 = ChannelRealization.from_array(g2)
    ec = EcAllocation(1.0, 0.7, tau1, tau2)
    dc = DcAllocation(0.8, 0.5, 1.0, tau1, tau2)
    e1, e2 = ec_throughput(cfg, ch, ec), ec_throughput(cfg, ch2, ec)
    d1, d2 = dc_throughput(cfg, ch, dc), dc_throughput(cfg, ch2, dc)
    assert e2 >= e1 * (1 - 1e-12)
    assert d2 >= d1 * (1 - 1e-12)
    assert min(e1, d1) >= 0


@settings(max_examples=200, deadline=None)
@given(channels, st.floats(0.01, 0.99))
def test_dc_without_relay_power_is_direct_link(ch, tau1):
    cfg = NetworkConfig(p_a_max=1.5, p_r_max=1.0, mu=1.0)
    tau2 = 1.0 - tau1
    got = dc_throughput(cfg, ch, DcAllocation(1.5, 0.0, 0.0, tau1, tau2))
    snr = 2 * cfg.eta * tau1 * 1.5 * ch.h_AS * ch.h_SA / (tau2 * cfg.n0)
    assert got == pytest.approx(tau2 / 2 * math.log1p(snr) / math.log(2), rel=1e-12, abs=1e-300)


@settings(max_examples=100, deadline=None)
@given(channels, frac)
def test_zero_downlink_means_zero_throughput(ch, p):
    cfg = NetworkConfig(p_a_max=1.0, p_r_max=1.0, mu=1.0)
    assert ec_throughput(cfg, ch, EcAllocation(p, p, 0.0, 1.0)) == 0.0
    assert dc_throughput(cfg, ch, DcAllocation(p, p, p, 0.0, 1.0)) == 0.0


def test_scaling_gains_with_squared_noise_keeps_harvest_snrs():
    # harvest-then-transmit SNRs are (gain x gain) / N0, so gains * s with
    # N0 * s**2 leaves them unchanged while the relay hop R->A drops by s
    base = ChannelRealization(2e-5, 3e-5, 1e-5, 4e-5, 5e-6)
    alloc_ec = EcAllocation(1.0, 1.0, 0.3, 0.7)
    alloc_dc = DcAllocation(1.0, 0.5, 0.8, 0.3, 0.7)
    cfg0 = NetworkConfig(p_a_max=1, p_r_max=1, mu=1)
    ref_ec = ec_throughput(cfg0, base, alloc_ec)
    ref = dc_snr_components(cfg0, base, alloc_dc)
    for k in range(1, 5):
        s = 10.0 ** k
        cfg = NetworkConfig(p_a_max=1, p_r_max=1, mu=1, n0_dbm=-80.0 + 20 * k)
        ch = base.scaled(s)
        assert ec_throughput(cfg, ch, alloc_ec) == pytest.approx(ref_ec, rel=1e-12)
        sa, sr, ra, _ = dc_snr_components(cfg, ch, alloc_dc)
        assert sa == pytest.approx(ref[0], rel=1e-12)
        assert sr == pytest.approx(ref[1], rel=1e-12)
        assert ra == pytest.approx(ref[2] / s, rel=1e-12)


def test_relay_snr_approaches_harmonic_form_at_high_snr():
    # lowering N0 by k multiplies every hop SNR by k; the "+1" in the relayed
    # SNR then matters less and less
    ch = ChannelRealization(2e-5, 3e-5, 1e-5, 4e-5, 5e-6)
    alloc = DcAllocation(1.0, 0.5, 0.8, 0.3, 0.7)
    ratios = []
    for k in range(0, 8):
        cfg = NetworkConfig(p_a_max=1, p_r_max=1, mu=1, n0_dbm=-60.0 - 10 * k)
        _, sr, ra, sra = dc_snr_components(cfg, ch, alloc)
        ratios.append(sra / (sr * ra / (sr + ra)))
    assert all(r <= 1.0 for r in ratios)
    assert all(b > a for a, b in zip(ratios, ratios[1:]))
    assert ratios[-1] == pytest.approx(1.0, abs=1e-6)


def test_array_core_broadcasts():
    from hybridrelay.protocols import dc_rate, ec_rate

    taus = np.linspace(0, 1, 11)
    r = ec_rate(0.5, 1e-11, 1.0, 1.0, taus, 1 - taus, 1e-5, 1e-5, 1e-5)
    assert r.shape == (11,) and r[0] == 0.0 and r[-1] == 0.0
    d = dc_rate(0.5, 1e-11, 1.0, 1.0, 1.0, taus, 1 - taus, 1e-5, 1e-5, 1e-5, 1e-5, 1e-5)
    assert d.shape == (11,) and np.all(d >= 0)
