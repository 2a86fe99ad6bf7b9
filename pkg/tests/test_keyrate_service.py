import pytest
from pydantic import ValidationError

from app.models.bounds import BoundMethod, BoundResult
from app.models.keyrate import DistillationInput
from app.services.keyrate_service import KeyRateService


@pytest.mark.parametrize("t, expected", [(0.5, 1.0), (0.0, 0.0), (1.0, 0.0), (0.05, 0.286397)])
def test_binary_entropy(t, expected):
    assert KeyRateService.binary_entropy(t) == pytest.approx(expected, abs=1e-6)


def test_binary_entropy_rejects_out_of_range():
    with pytest.raises(ValueError):
        KeyRateService.binary_entropy(1.5)


def test_costs_without_errors():
    costs = KeyRateService.distillation_costs(DistillationInput(t_b=0, t_p=0, delta=0, n_r=1000))
    assert (costs.ec_bits, costs.pa_bits) == (0.0, 0.0)


def test_costs_with_errors():
    costs = KeyRateService.distillation_costs(DistillationInput(t_b=0.05, t_p=0.05, delta=0, n_r=10**6))
    assert costs.ec_bits == pytest.approx(286397, abs=1)
    assert costs.pa_bits == pytest.approx(286397, abs=1)


def test_costs_at_phase_error_boundary():
    costs = KeyRateService.distillation_costs(DistillationInput(t_b=0, t_p=0.4, delta=0.2, n_r=100))
    assert costs.pa_bits == pytest.approx(100 * (0.2 + 0.8 * 1.0))


def test_costs_beyond_boundary_consume_everything():
    costs = KeyRateService.distillation_costs(DistillationInput(t_b=0, t_p=0.45, delta=0.2, n_r=100))
    assert costs.pa_bits == 100.0


@pytest.mark.parametrize("t_b, t_p, delta, expected", [
    (0.0, 0.0, 0.0, 1.0),
    (0.05, 0.05, 0.25, 0.19859),
    (0.05, 0.05, 0.0, 0.42720),
    (0.05, 0.05, 1.0, 0.0),
    (0.12, 0.12, 0.0, 0.0),
])
def test_key_fraction(t_b, t_p, delta, expected):
    value = KeyRateService.key_fraction(DistillationInput(t_b=t_b, t_p=t_p, delta=delta))
    assert value == pytest.approx(expected, abs=1e-5)


def test_no_tagging_reduces_to_two_entropies(rng):
    for t_b, t_p in rng.uniform(0, 0.1, size=(50, 2)):
        value = KeyRateService.key_fraction(DistillationInput(t_b=t_b, t_p=t_p, delta=0))
        expected = 1 - KeyRateService.binary_entropy(t_b) - KeyRateService.binary_entropy(t_p)
        assert value == pytest.approx(max(expected, 0.0), abs=1e-15)


def test_key_fraction_monotone_and_bounded(rng):
    for _ in range(1000):
        t_b, t_p = rng.uniform(0, 0.5, size=2)
        delta = rng.uniform(0, 1)
        base = KeyRateService.key_fraction(DistillationInput(t_b=t_b, t_p=t_p, delta=delta))
        assert 0.0 <= base <= 1.0

        step = rng.uniform(0, 0.05)
        worse = [
            DistillationInput(t_b=min(t_b + step, 0.5), t_p=t_p, delta=delta),
            DistillationInput(t_b=t_b, t_p=min(t_p + step, 0.5), delta=delta),
            DistillationInput(t_b=t_b, t_p=t_p, delta=min(delta + step, 1.0)),
        ]
        for data in worse:
            assert KeyRateService.key_fraction(data) <= base + 1e-12


def test_key_bits():
    data = DistillationInput(t_b=0.05, t_p=0.05, delta=0.0, n_r=10**6)
    assert KeyRateService.key_bits(data) == pytest.approx(427206, abs=1)


def test_per_source_fractions():
    bound = BoundResult(
        method=BoundMethod.ASYMPTOTIC_3, mu=0.3, mu_prime=0.45,
        delta=0.25, delta_prime=0.4, s1_lower=1e-3, sc_upper=1e-3,
    )
    fractions = KeyRateService.source_key_fractions(0.05, 0.05, bound)
    assert fractions.signal == pytest.approx(0.19859, abs=1e-5)
    assert fractions.decoy < fractions.signal


def test_per_source_fractions_without_decoy_bound():
    bound = BoundResult(method=BoundMethod.HWANG, mu=0.3, mu_prime=0.45, delta=0.0, s1_lower=0.0, sc_upper=0.0)
    assert KeyRateService.source_key_fractions(0.0, 0.0, bound).decoy is None


def test_input_ranges_enforced():
    with pytest.raises(ValidationError):
        DistillationInput(t_b=0.6, t_p=0.0, delta=0.0)
    with pytest.raises(ValidationError):
        DistillationInput(t_b=0.0, t_p=0.0, delta=1.2)
