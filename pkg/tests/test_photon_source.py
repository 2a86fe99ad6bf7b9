import math

import numpy as np
import pytest
from scipy.stats import poisson

from app.exceptions import InvalidPair
from app.models.source import IntensityErrorDistribution
from app.services.photon_source import PhotonSourceService


def _c(mu):
    return 1 - math.exp(-mu) - mu * math.exp(-mu)


def test_vacuum_source_emits_vacuum():
    assert PhotonSourceService.poisson_pmf(0, 0) == 1.0
    assert PhotonSourceService.poisson_pmf(0, 3) == 0.0


def test_single_photon_probability():
    assert PhotonSourceService.poisson_pmf(0.3, 1) == pytest.approx(0.3 * math.exp(-0.3), abs=1e-12)
    assert PhotonSourceService.poisson_pmf(0.3, 1) == pytest.approx(0.222245, abs=1e-6)


def test_negative_photon_number_has_no_weight():
    assert PhotonSourceService.poisson_pmf(0.3, -1) == 0.0


@pytest.mark.parametrize("mu", [0.1, 0.3, 0.5, 1.0, 1.5, 2.0])
def test_truncated_law_is_normalized(mu):
    assert PhotonSourceService.pmf_vector(mu).sum() == pytest.approx(1.0, abs=1e-12)


def test_sum_to_sixty_photons():
    total = sum(PhotonSourceService.poisson_pmf(0.3, n) for n in range(61))
    assert total == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("mu", [0.0, 0.05, 0.3, 2.0])
def test_tail_cutoff_leaves_negligible_tail(mu):
    n_max = PhotonSourceService.tail_cutoff(mu)
    assert n_max >= 2
    if mu > 0:
        assert poisson.sf(n_max, mu) < 1e-15


def test_decompose_vacuum():
    dec = PhotonSourceService.decompose(0)
    assert (dec.p0, dec.p1, dec.c) == (1.0, 0.0, 0.0)


def test_decompose_values():
    dec = PhotonSourceService.decompose(0.3)
    assert dec.p0 == pytest.approx(0.740818, abs=1e-6)
    assert dec.p1 == pytest.approx(0.222245, abs=1e-6)
    assert dec.c == pytest.approx(0.036936, abs=1e-6)
    assert PhotonSourceService.decompose(0.25).c == pytest.approx(0.026499, abs=1e-6)


def test_multi_photon_weight_keeps_precision_at_small_mu():
    mu = 1e-6
    assert PhotonSourceService.multi_photon_weight(mu) == pytest.approx(mu * mu / 2, rel=1e-5)


def test_residual_weight():
    res = PhotonSourceService.residual_decompose(0.3, 0.45)
    assert res.d == pytest.approx(0.00391, abs=1e-5)


def test_residual_vanishes_as_intensities_merge():
    res = PhotonSourceService.residual_decompose(0.3, 0.3 + 1e-7)
    assert res.d < 1e-7


def test_residual_weights_sum_to_one(rng):
    pairs = [(0.2, 0.34)]
    for _ in range(100):
        mu = rng.uniform(0.01, 0.95)
        pairs.append((mu, rng.uniform(mu + 1e-3, 1.0)))
    for mu, mup in pairs:
        res = PhotonSourceService.residual_decompose(mu, mup)
        assert min(res.p0p, res.p1p, res.c_coeff, res.d) >= 0
        assert res.p0p + res.p1p + res.c_coeff + res.d == pytest.approx(1.0, abs=1e-12)


def test_residual_rejects_bad_pair():
    with pytest.raises(InvalidPair):
        PhotonSourceService.residual_decompose(0.3, 3.0)


@pytest.mark.parametrize("mu, mup, expected", [
    (0.3, 0.45, True),
    (0.3, 0.3, False),
    (0.3, 3.0, False),
    (0.0, 0.45, False),
    (0.3, float("inf"), False),
])
def test_validate_pair(mu, mup, expected):
    assert PhotonSourceService.validate_pair(mu, mup) is expected


@pytest.mark.parametrize("mu, mup", [(0.2, 0.34), (0.3, 0.45), (0.1, 0.7)])
def test_mu_prime_dominates_scaled_multi_photon_terms(mu, mup):
    scale = PhotonSourceService.rho_c_scale(mu, mup)
    for n in range(2, 31):
        assert PhotonSourceService.poisson_pmf(mup, n) >= scale * PhotonSourceService.poisson_pmf(mu, n) * (1 - 1e-12)


def test_epsilon_bounds_zero_beta():
    eps = PhotonSourceService.epsilon_bounds(0.3, 0.0)
    assert (eps.eps0, eps.eps1, eps.epsc) == (0.0, 0.0, 0.0)


def test_epsilon_bounds_endpoints():
    eps = PhotonSourceService.epsilon_bounds(0.3, 0.02)
    assert eps.eps0 == pytest.approx(math.exp(0.006) - 1, abs=1e-12)
    expected_c = max(abs(_c(0.3 * 1.02) / _c(0.3) - 1), abs(_c(0.3 * 0.98) / _c(0.3) - 1))
    assert eps.epsc == pytest.approx(expected_c, rel=1e-9)


def test_epsilon_bounds_rejects_beta_out_of_range():
    with pytest.raises(ValueError):
        PhotonSourceService.epsilon_bounds(0.3, 1.0)


def test_epsilon_bounds_monotone_in_beta(rng):
    for _ in range(50):
        mu = rng.uniform(0.05, 0.8)
        small, large = sorted(rng.uniform(0, 0.3, size=2))
        lo = PhotonSourceService.epsilon_bounds(mu, small)
        hi = PhotonSourceService.epsilon_bounds(mu, large)
        assert lo.eps0 <= hi.eps0 + 1e-15
        assert lo.eps1 <= hi.eps1 + 1e-15
        assert lo.epsc <= hi.epsc + 1e-15


def test_population_epsilon():
    eps = PhotonSourceService.population_epsilon(0.2, 1e9, coefficient=10)
    assert eps.epsc == pytest.approx(10 * math.sqrt(1 / (1e9 * _c(0.2))))
    assert eps.epsc < 0.003


def test_combined_caps_add_population_term():
    intensity_only = PhotonSourceService.combined_epsilon_caps(0.3, 0.45, 0.02)
    signal = PhotonSourceService.epsilon_bounds(0.3, 0.02)
    assert intensity_only.eps1 == signal.eps1

    with_counts = PhotonSourceService.combined_epsilon_caps(0.3, 0.45, 0.02, 1e10, 1e10)
    assert with_counts.epsc > intensity_only.epsc
    assert with_counts.epscp > intensity_only.epscp


def test_mixed_law_without_error_is_poisson():
    np.testing.assert_allclose(
        PhotonSourceService.mixed_pmf_vector(0.3, 0.0, n_max=20),
        PhotonSourceService.pmf_vector(0.3, 20),
    )


@pytest.mark.parametrize("distribution", list(IntensityErrorDistribution))
def test_mixed_law_keeps_mean_intensity(distribution):
    law = PhotonSourceService.mixed_pmf_vector(0.3, 0.1, distribution)
    assert law.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.dot(np.arange(len(law)), law) == pytest.approx(0.3, abs=1e-12)


def test_endpoint_law_is_average_of_endpoints():
    law = PhotonSourceService.mixed_pmf_vector(0.3, 0.1, IntensityErrorDistribution.ENDPOINTS, n_max=20)
    expected = 0.5 * (poisson.pmf(np.arange(21), 0.27) + poisson.pmf(np.arange(21), 0.33))
    np.testing.assert_allclose(law, expected)
