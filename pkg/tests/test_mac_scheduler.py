import math

import numpy as np
import pytest

from core.exceptions import ConfigurationError
from core.sampling import RandomStream, sample_cn_matrix
from mac.scheduler import (
    design_quota,
    eligibility_probability,
    eligible_set,
    gamma_power_law,
    mac_sum_rate,
    schedule_and_rate,
    select_active,
)
from network.schemas import PrimaryCovariance, PrimaryMode, SecondaryMode, SystemConfig
from network.utils import draw_channels, interference_on_primary, primary_covariance


def test_design_quota_reference_values():
    cfg = SystemConfig(n=10_000)
    quota = design_quota(cfg)
    k_bar = (2.0 / 5.0) ** (2 / 3) * 10_000 ** (1 / 3)
    assert quota.k_bar == pytest.approx(k_bar)
    assert quota.alpha == pytest.approx(2.0 / k_bar)
    assert quota.cap == math.floor(k_bar)
    # designed cap never exceeds Γ/α
    assert quota.cap * quota.alpha <= cfg.gamma


def test_design_quota_uses_tightest_tolerance():
    loose = design_quota(SystemConfig(gamma=2.0, tolerances=[1.0, 4.0]))
    tight = design_quota(SystemConfig(gamma=1.0))
    assert loose.k_bar == pytest.approx(tight.k_bar)


def test_design_quota_needs_secondary_mac():
    with pytest.raises(ConfigurationError):
        design_quota(SystemConfig(secondary_mode=SecondaryMode.BROADCAST))


def test_eligibility_probability():
    assert eligibility_probability(0.3, 5.0, 2) == pytest.approx((1 - math.exp(-0.06)) ** 2)
    assert eligibility_probability(1e-12, 1.0, 1) == pytest.approx(1e-12, rel=1e-6)


def test_eligible_set_is_strict():
    g_p = np.array([[1.0 + 0j, 0.5, 0.1], [0.1, 0.1, 2.0]])
    np.testing.assert_array_equal(eligible_set(g_p, alpha=1.0, rho_s=1.0), [1])


def test_eligible_set_rejects_non_positive_quota():
    with pytest.raises(ConfigurationError):
        eligible_set(np.ones((1, 3)), alpha=0.0, rho_s=1.0)


def test_select_active_small_pool_keeps_everyone(stream):
    np.testing.assert_array_equal(select_active(np.array([7, 2, 5]), 5, stream), [2, 5, 7])
    assert select_active(np.array([], dtype=int), 3, stream).size == 0


def test_select_active_subset_and_reproducible(stream):
    pool = np.arange(0, 100, 3)
    chosen = select_active(pool, 10, stream)
    assert chosen.size == 10
    assert set(chosen) <= set(pool)
    assert np.all(np.diff(chosen) > 0)
    np.testing.assert_array_equal(chosen, select_active(pool, 10, stream))


def test_select_active_is_uniform():
    pool = np.arange(5)
    counts = np.zeros(5)
    draws = 2000
    for i in range(draws):
        counts[select_active(pool, 2, RandomStream(3, i))] += 1
    np.testing.assert_allclose(counts / draws, 0.4, atol=0.05)


def test_mac_sum_rate_empty_selection():
    g_s = np.ones((4, 2), dtype=complex)
    assert mac_sum_rate(np.zeros((4, 0)), 5.0, g_s, PrimaryCovariance(dim=2, scale=2.5)) == 0.0


def test_mac_sum_rate_matches_slogdet(stream):
    h = sample_cn_matrix(stream.child("h"), 4, 3)
    g_s = sample_cn_matrix(stream.child("g"), 4, 2)
    q_p = PrimaryCovariance(dim=2, scale=2.5)
    background = np.eye(4) + g_s @ q_p.matrix() @ g_s.conj().T
    signal = background + 5.0 * h @ h.conj().T
    expected = np.linalg.slogdet(signal)[1] - np.linalg.slogdet(background)[1]
    assert mac_sum_rate(h, 5.0, g_s, q_p) == pytest.approx(expected, rel=1e-9)
    assert expected > 0


@pytest.mark.parametrize("primary", [PrimaryMode.BROADCAST, PrimaryMode.MAC])
def test_schedule_respects_interference_limit(primary):
    cfg = SystemConfig(n=2000, primary_mode=primary)
    quota = design_quota(cfg)
    for index in range(20):
        stream = RandomStream(11, index)
        chan = draw_channels(cfg, stream.child("channels"))
        schedule, rate = schedule_and_rate(cfg, chan, stream.child("selection"))
        assert schedule.active_count <= quota.cap
        assert set(schedule.active) <= set(schedule.eligible)
        q_s = np.full(schedule.active_count, cfg.rho_s)
        assert np.all(interference_on_primary(chan.G_p[:, schedule.active], q_s) < cfg.gamma)
        expected = mac_sum_rate(
            chan.H[:, schedule.active], cfg.rho_s, chan.G_s, primary_covariance(cfg)
        )
        assert rate == pytest.approx(expected)


def test_gamma_power_law():
    assert gamma_power_law(2.0, 0.2, 1000) == pytest.approx(2.0 * 1000 ** -0.2)
    assert gamma_power_law(2.0, 0.0, 1000) == 2.0
    with pytest.raises(ConfigurationError):
        gamma_power_law(2.0, -0.1, 10)


def test_larger_gamma_never_shrinks_the_selection():
    cfg = SystemConfig(n=2000)
    for index in range(10):
        stream = RandomStream(21, index)
        chan = draw_channels(cfg, stream.child("channels"))
        previous = None
        for gamma in (0.25, 0.5, 1.0, 2.0, 4.0, 8.0):
            scaled = cfg.with_gamma(gamma)
            quota = design_quota(scaled)
            schedule, _ = schedule_and_rate(scaled, chan, stream.child("selection"))
            if previous is not None:
                cap, eligible, active = previous
                assert quota.cap >= cap
                assert set(eligible) <= set(schedule.eligible)
                assert schedule.active_count >= active
            previous = (quota.cap, schedule.eligible, schedule.active_count)


def test_selected_users_have_unit_forward_power():
    # selection reads only G_p, so chosen columns of H stay CN(0,1)
    cfg = SystemConfig(n=2000)
    powers = []
    for index in range(300):
        stream = RandomStream(22, index)
        chan = draw_channels(cfg, stream.child("channels"))
        schedule, _ = schedule_and_rate(cfg, chan, stream.child("selection"))
        powers.append(np.abs(chan.H[:, schedule.active]).ravel() ** 2)
    powers = np.concatenate(powers)
    assert powers.size > 1000
    sigma = powers.std(ddof=1) / np.sqrt(powers.size)
    assert abs(powers.mean() - 1.0) <= 4 * sigma
