import math

import numpy as np
import pytest
from structlog.testing import capture_logs

from bc.scheduler import (
    assign_and_rate,
    gamma_log_law,
    in_analyzed_regime,
    sandwich_maxima,
    sandwich_tables,
    secondary_tx_power,
    sinr,
    sinr_matrix,
    sinr_sandwich,
    theta_for,
)
from core.exceptions import ConfigurationError
from core.sampling import RandomStream, sample_haar_beams
from network.schemas import PrimaryMode, SecondaryMode, SystemConfig
from network.utils import draw_channels, interference_on_primary


def brute_sinr(h, beams, power, g_s, q_p, i, j):
    m = beams.shape[1]
    gains = [abs(np.vdot(beams[:, k].conj(), h[i])) ** 2 for k in range(m)]
    cross = sum(abs(x) ** 2 for x in g_s[i])
    interference = sum(gains[k] for k in range(m) if k != j)
    return (power / m) * gains[j] / (1.0 + (power / m) * interference + q_p * cross)


def test_power_is_capped_by_the_tightest_row(bc_cfg):
    g_p = np.array([[1.0, 1.0, 0.0, 0.0], [0.0, 0.0, 0.0, 0.5]])
    # caps 4*2/2 = 4 and 4*2/0.25 = 32
    assert secondary_tx_power(g_p, bc_cfg) == pytest.approx(4.0)
    assert secondary_tx_power(g_p * 0.01, bc_cfg) == bc_cfg.P_s


def test_power_uses_per_constraint_tolerances(bc_cfg):
    cfg = bc_cfg.model_copy(update={"tolerances": [0.5, 2.0]})
    g_p = np.array([[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]])
    assert secondary_tx_power(g_p, cfg) == pytest.approx(2.0)


def test_zero_cross_row_is_logged(bc_cfg):
    g_p = np.zeros((2, 4))
    with capture_logs() as logs:
        power = secondary_tx_power(g_p, bc_cfg)
    assert power == bc_cfg.P_s
    assert any(entry["event"] == "degenerate_cross_row" for entry in logs)


def test_power_keeps_interference_within_tolerance(bc_cfg):
    for index in range(50):
        chan = draw_channels(bc_cfg, RandomStream(2, index))
        power = secondary_tx_power(chan.G_p, bc_cfg)
        q_s = np.full(bc_cfg.m, power / bc_cfg.m)
        interference = interference_on_primary(chan.G_p, q_s)
        assert np.all(interference <= bc_cfg.gamma * (1 + 1e-12))


def test_sinr_matches_brute_force(bc_cfg, stream):
    chan = draw_channels(bc_cfg, stream.child("channels"))
    beams = sample_haar_beams(stream.child("beams"), bc_cfg.m)
    power, q_p = 3.0, bc_cfg.primary_stream_power
    table = sinr_matrix(chan.H, beams, power, chan.G_s, q_p)
    assert table.shape == (bc_cfg.n, bc_cfg.m)
    for i in (0, 17, 199):
        for j in range(bc_cfg.m):
            expected = brute_sinr(chan.H, beams, power, chan.G_s, q_p, i, j)
            assert table[i, j] == pytest.approx(expected, rel=1e-10)
            assert sinr(i, j, chan.H, beams, power, chan.G_s, q_p) == pytest.approx(expected)


def test_sinr_needs_positive_power(bc_cfg, stream):
    chan = draw_channels(bc_cfg, stream)
    beams = sample_haar_beams(stream, bc_cfg.m)
    with pytest.raises(ConfigurationError):
        sinr(0, 0, chan.H, beams, 0.0, chan.G_s, 2.5)


def test_assign_and_rate_picks_best_user(bc_cfg, stream):
    chan = draw_channels(bc_cfg, stream.child("channels"))
    schedule, rate = assign_and_rate(bc_cfg, chan, stream.child("beams"))
    beams = sample_haar_beams(stream.child("beams"), bc_cfg.m)
    np.testing.assert_allclose(schedule.beams, beams)
    table = sinr_matrix(chan.H, beams, schedule.power, chan.G_s, bc_cfg.primary_stream_power)
    np.testing.assert_array_equal(schedule.winners, table.argmax(axis=0))
    np.testing.assert_allclose(schedule.winning_sinr, table.max(axis=0))
    assert rate == pytest.approx(np.sum(np.log1p(table.max(axis=0))))
    assert len(schedule.assignments()) == bc_cfg.m


def test_assign_and_rate_needs_secondary_broadcast(mac_cfg, stream):
    chan = draw_channels(mac_cfg, stream)
    with pytest.raises(ConfigurationError):
        assign_and_rate(mac_cfg, chan, stream)


def test_theta_and_regime():
    cfg = SystemConfig(secondary_mode=SecondaryMode.BROADCAST)
    assert theta_for(cfg, cfg.P_s) == pytest.approx(2.0)
    assert in_analyzed_regime(cfg)
    weak = cfg.model_copy(update={"P_p": 1.0})
    assert theta_for(weak, weak.P_s) == pytest.approx(0.4)
    assert not in_analyzed_regime(weak)
    mac_primary = cfg.model_copy(update={"primary_mode": PrimaryMode.MAC, "rho_p": 2.0})
    assert theta_for(mac_primary, 4.0) == pytest.approx(2.0)


def test_sandwich_orders_every_user(bc_cfg, stream):
    chan = draw_channels(bc_cfg, stream.child("channels"))
    beams = sample_haar_beams(stream.child("beams"), bc_cfg.m)
    power = secondary_tx_power(chan.G_p, bc_cfg)
    lower, exact, upper = sandwich_tables(bc_cfg, chan, beams, power)
    assert np.all(lower <= exact) and np.all(exact <= upper)

    point = sinr_sandwich(3, 1, chan, beams, power, bc_cfg)
    assert point.ordered
    assert point.S == pytest.approx(exact[3, 1])
    assert point.theta == pytest.approx(theta_for(bc_cfg, power))

    low_max, exact_max, high_max = sandwich_maxima(bc_cfg, chan, beams, power)
    np.testing.assert_allclose(exact_max, exact.max(axis=0))
    assert np.all(low_max <= exact_max) and np.all(exact_max <= high_max)


def test_gamma_log_law():
    assert gamma_log_law(2.0, 0.5, 10_000) == pytest.approx(0.6587, abs=1e-3)
    assert gamma_log_law(2.0, 0.0, 100) == 2.0
    assert gamma_log_law(1.0, 0.5, 3) == pytest.approx(1 / math.sqrt(math.log(3)))
    with pytest.raises(ConfigurationError):
        gamma_log_law(2.0, 0.5, 2)
    with pytest.raises(ConfigurationError):
        gamma_log_law(2.0, 1.0, 100)


def test_beams_are_statistically_symmetric(bc_cfg):
    cfg = bc_cfg.with_users(50)
    rates = []
    for index in range(600):
        stream = RandomStream(31, index)
        chan = draw_channels(cfg, stream.child("channels"))
        schedule, _ = assign_and_rate(cfg, chan, stream.child("beams"))
        rates.append(np.log1p(schedule.winning_sinr))
    rates = np.array(rates)
    pooled = rates.mean()
    for beam in range(cfg.m):
        column = rates[:, beam]
        stderr = column.std(ddof=1) / np.sqrt(column.size)
        assert abs(column.mean() - pooled) <= 3 * stderr, beam


def test_extra_users_never_lower_any_beam(bc_cfg):
    large = bc_cfg.with_users(300)
    for index in range(20):
        stream = RandomStream(32, index)
        chan = draw_channels(large, stream.child("channels"))
        beams = sample_haar_beams(stream.child("beams"), large.m)
        power = secondary_tx_power(chan.G_p, large)
        q_p = large.primary_stream_power
        full = sinr_matrix(chan.H, beams, power, chan.G_s, q_p).max(axis=0)
        for n in (1, 50, 299):
            subset = sinr_matrix(chan.H[:n], beams, power, chan.G_s[:n], q_p).max(axis=0)
            assert np.all(subset <= full * (1 + 1e-12))
