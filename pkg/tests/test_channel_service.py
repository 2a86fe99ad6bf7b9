import math

import pytest
from pydantic import ValidationError

from app.exceptions import ZeroRate
from app.models.channel import ChannelModel, ObservedRates
from app.services.channel_service import ChannelService

OPAQUE = ChannelModel.uniform(0.0)


def test_vacuum_clicks_at_dark_count_rate():
    ch = ChannelModel.uniform(1e-3, s0=2e-6)
    assert ChannelService.click_probability(0, ch) == 2e-6


def test_opaque_channel_never_clicks():
    assert ChannelService.click_probability(3, OPAQUE) == 0.0


def test_two_photon_click_probability():
    ch = ChannelModel.uniform(1e-3)
    assert ChannelService.click_probability(2, ch) == pytest.approx(1 - 0.999 ** 2, rel=1e-12)


def test_dark_count_composes_as_independent_or():
    ch = ChannelModel.uniform(0.1, s0=0.01)
    assert ChannelService.click_probability(2, ch) == pytest.approx(1 - 0.99 * 0.9 ** 2, rel=1e-12)


def test_fully_transparent_photon_number():
    ch = ChannelModel(eta_per_fock={1: 0.0, 2: 1.0})
    assert ChannelService.click_probability(1, ch) == 0.0
    assert ChannelService.click_probability(2, ch) == 1.0
    assert ChannelService.click_probability(7, ch) == 1.0


def test_expected_rate_matches_closed_form():
    ch = ChannelModel.uniform(1e-3)
    assert ChannelService.expected_rate(0.3, ch) == pytest.approx(-math.expm1(-3e-4), abs=1e-12)
    assert ChannelService.expected_rate(0.3, ch) == pytest.approx(2.99955e-4, rel=1e-5)


def test_vacuum_source_rate_is_dark_count():
    assert ChannelService.expected_rate(0, ChannelModel.uniform(0.5, s0=3e-6)) == 3e-6


@pytest.mark.parametrize("eta", [1e-4, 1e-3, 0.1, 0.9])
@pytest.mark.parametrize("mu", [0.05, 0.3, 1.0, 2.0])
def test_closed_form_agreement(mu, eta):
    rate = ChannelService.expected_rate(mu, ChannelModel.uniform(eta))
    assert rate == pytest.approx(-math.expm1(-eta * mu), abs=1e-12)


def test_normal_case_ratio():
    ch = ChannelModel.uniform(1e-3)
    ratio = ChannelService.expected_rate(0.45, ch) / ChannelService.expected_rate(0.3, ch)
    assert ratio == pytest.approx(0.45 / 0.3, rel=1e-3)


def test_expected_rate_is_monotone(rng):
    for _ in range(30):
        etas = {n: float(rng.uniform(0, 1)) for n in range(1, 6)}
        base = ChannelModel(eta_per_fock=etas, s0=float(rng.uniform(0, 1e-4)))
        mu = float(rng.uniform(0.05, 1.0))
        rate = ChannelService.expected_rate(mu, base)

        assert ChannelService.expected_rate(mu * 1.1, base) >= rate
        bumped = dict(etas)
        n = int(rng.integers(1, 6))
        bumped[n] = min(1.0, bumped[n] + 0.05)
        assert ChannelService.expected_rate(mu, ChannelModel(eta_per_fock=bumped, s0=base.s0)) >= rate
        assert ChannelService.expected_rate(mu, ChannelModel(eta_per_fock=etas, s0=base.s0 + 1e-5)) >= rate


@pytest.mark.parametrize("mu, expected", [(0.25, 0.2212), (0.35, 0.2953)])
def test_true_tagged_fraction_small_eta(mu, expected):
    value = ChannelService.expected_tagged_fraction(mu, ChannelModel.uniform(1e-9))
    assert value == pytest.approx(expected, abs=1e-4)


@pytest.mark.parametrize("eta", [1e-3, 1e-4])
@pytest.mark.parametrize("mu", [0.1, 0.2, 0.3, 0.4, 0.5])
def test_true_tagged_fraction_close_to_limit(mu, eta):
    value = ChannelService.expected_tagged_fraction(mu, ChannelModel.uniform(eta))
    assert abs(value - (1 - math.exp(-mu))) < 1e-3


def test_blind_multi_photon_channel_has_no_tagged_clicks():
    ch = ChannelModel(eta_per_fock={1: 1e-3, 2: 0.0})
    assert ChannelService.expected_tagged_fraction(0.3, ch) == 0.0


def test_extreme_pns_tags_everything():
    assert ChannelService.expected_tagged_fraction(0.3, ChannelService.extreme_pns()) == pytest.approx(1.0)


def test_tagged_fraction_without_clicks():
    with pytest.raises(ZeroRate):
        ChannelService.expected_tagged_fraction(0.3, OPAQUE)


def test_expected_rates_bundle():
    ch = ChannelModel.uniform(1e-3, s0=1e-6)
    rates = ChannelService.expected_rates(0.3, 0.45, ch)
    assert rates.S0 == 1e-6
    assert rates.S_mup > rates.S_mu > rates.S0


def test_normal_rates_ratio_is_exact():
    rates = ChannelService.normal_rates(0.2, 1.0)
    assert rates.S_mup / rates.S_mu == pytest.approx(5.0, rel=1e-15)
    assert rates.S0 == 0.0


def test_fill_value_defaults_to_last_entry():
    ch = ChannelModel(eta_per_fock={1: 0.1, 3: 0.4})
    assert ch.eta(2) == 0.4
    assert ch.eta(9) == 0.4
    assert ChannelModel(eta_per_fock={1: 0.1}, fill=0.7).eta(4) == 0.7


def test_channel_rejects_bad_entries():
    with pytest.raises(ValidationError):
        ChannelModel(eta_per_fock={0: 0.1})
    with pytest.raises(ValidationError):
        ChannelModel(eta_per_fock={1: 1.5})
    with pytest.raises(ValidationError):
        ChannelModel.uniform(0.1, s0=1.0)


def test_rates_from_counts():
    rates = ObservedRates.from_counts(n_0=4, N_0=4_000_000, n_mu=300, N_mu=1_000_000, n_mup=450, N_mup=1_000_000)
    assert rates.S_mu == 3e-4
    assert rates.has_counts


def test_rates_must_match_counts():
    with pytest.raises(ValidationError):
        ObservedRates(S0=0.0, S_mu=0.5, S_mup=0.5, n_mu=1, N_mu=10)
