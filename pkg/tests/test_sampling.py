import numpy as np
import pytest
from scipy import stats

from bc.scheduler import beam_gains
from core.sampling import (
    RandomStream,
    derive_stream_id,
    sample_cn_matrix,
    sample_haar_beams,
)
from montecarlo.stats import ks_critical_value, ks_distance


def test_stream_id_is_stable_and_label_sensitive():
    assert derive_stream_id("trial", 100, 3) == derive_stream_id("trial", 100, 3)
    assert derive_stream_id("trial", 100, 3) != derive_stream_id("trial", 100, 4)
    assert derive_stream_id("1") != derive_stream_id(1)
    assert 0 <= derive_stream_id("x") < 2**64


def test_same_key_gives_same_draws(stream):
    a = stream.generator().standard_normal(16)
    b = RandomStream(stream.seed, stream.stream_id).generator().standard_normal(16)
    np.testing.assert_array_equal(a, b)


def test_child_streams_are_distinct(stream):
    a = stream.child("channels").generator().standard_normal(8)
    b = stream.child("beams").generator().standard_normal(8)
    assert not np.allclose(a, b)
    assert stream.child("channels") == stream.child("channels")


def test_seed_is_masked_to_64_bits():
    assert RandomStream(-1).seed == 2**64 - 1


def test_cn_matrix_shape_and_moments(stream):
    z = sample_cn_matrix(stream, 200, 200)
    assert z.shape == (200, 200)
    assert z.dtype == np.complex128
    assert abs(np.mean(np.abs(z) ** 2) - 1.0) < 0.03
    assert abs(np.var(z.real) - 0.5) < 0.03
    assert abs(np.var(z.imag) - 0.5) < 0.03
    assert abs(np.mean(z)) < 0.02


def test_cn_matrix_empty_and_negative(stream):
    assert sample_cn_matrix(stream, 0, 3).shape == (0, 3)
    with pytest.raises(ValueError):
        sample_cn_matrix(stream, -1, 3)


@pytest.mark.parametrize("m", [1, 2, 4, 7])
def test_haar_beams_are_unitary(stream, m):
    beams = sample_haar_beams(stream, m)
    assert beams.shape == (m, m)
    np.testing.assert_allclose(beams.conj().T @ beams, np.eye(m), atol=1e-12)


def test_haar_beams_reject_empty(stream):
    with pytest.raises(ValueError):
        sample_haar_beams(stream, 0)


def test_haar_entry_power_is_uniform():
    # |U_11|^2 ~ Beta(1, m - 1) for a Haar unitary, mean 1/m
    m = 4
    values = np.array([
        abs(sample_haar_beams(RandomStream(5, i), m)[0, 0]) ** 2 for i in range(2000)
    ])
    assert abs(values.mean() - 1.0 / m) < 0.02


def test_beam_gain_is_unit_exponential():
    # h ~ CN(0, I) against any unit-norm beam gives |h^H φ|^2 ~ Exp(1)
    m = 4
    samples = np.concatenate([
        beam_gains(
            sample_cn_matrix(RandomStream(12, i), 1, m),
            sample_haar_beams(RandomStream(11, i), m),
        ).ravel()
        for i in range(1500)
    ])
    distance = ks_distance(samples, stats.expon.cdf)
    assert distance < ks_critical_value(samples.size)
