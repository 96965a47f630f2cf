"""Tests for the loss-only and realistic key-rate variants."""

import math

import numpy as np
import pytest

from src.analysis.presets import get_preset
from src.analysis.rates import (
    NO_CONCLUSIVE_EVENTS,
    NO_SNS_EVENTS,
    ROW_COLUMNS,
    VARIANTS,
    RatePoint,
    aopp_transform,
    conclusive_probability,
    rate,
    rate_loss_only,
    rate_loss_only_randomized,
    rate_randomized,
    rate_realistic,
    rate_realistic_aopp,
    signal_error_rate,
    signal_probs,
)
from src.protocol.entropy import binary_entropy, holevo_from_overlap
from src.protocol.errors import NoConclusiveEventsError, ParameterDomainError
from src.protocol.params import ProtocolParams


def fig4_at(L):
    return get_preset("fig4").params.with_updates(L=L)


def ideal_params(**updates):
    """Realistic model with every imperfection switched off."""
    fields = dict(mu=0.1, alpha=0.2, eta_det=1.0, p_dark=0.0, V=1.0, delta=0.0,
                  f_EC=1.0, epsilon_profile=0.05)
    fields.update(updates)
    return ProtocolParams.from_mapping(fields)


class TestLossOnly:
    def test_known_value(self):
        assert rate_loss_only(0.1, 0.05, 1.0) == pytest.approx(9.667e-3, abs=1e-5)

    def test_randomized_is_half(self):
        assert rate_loss_only_randomized(0.1, 0.05, 0.3) == pytest.approx(
            0.5 * rate_loss_only(0.1, 0.05, 0.3)
        )

    @pytest.mark.parametrize("eps", [0.0, 1.0])
    def test_trivial_epsilon(self, eps):
        assert rate_loss_only(0.1, eps, 0.5) == 0.0

    def test_vanishes_with_transmittance(self):
        assert rate_loss_only(0.1, 0.05, 1e-30) < 1e-15
        assert rate_loss_only(0.1, 0.05, 0.0) == 0.0

    def test_decreasing_in_distance(self):
        params = ProtocolParams(mu=0.1, epsilon_profile=0.2)
        values = [rate(params.with_updates(L=L), "loss").R for L in range(0, 1000, 100)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_positive_everywhere(self):
        params = ProtocolParams(mu=0.1, epsilon_profile=0.05)
        assert rate(params.with_updates(L=1500.0), "loss").R > 0.0

    def test_bad_inputs(self):
        with pytest.raises(ParameterDomainError):
            rate_loss_only(0.0, 0.05, 0.5)
        with pytest.raises(ParameterDomainError):
            rate_loss_only(0.1, 1.5, 0.5)
        with pytest.raises(ParameterDomainError):
            rate_loss_only(0.1, 0.05, 1.5)

    def test_no_events_flagged(self):
        point = rate(ProtocolParams(), "loss", epsilon=0.0)
        assert point.R == 0.0
        assert NO_CONCLUSIVE_EVENTS in point.flags
        assert math.isnan(point.e_signal)


class TestSignalErrorRate:
    def test_components(self):
        errors = signal_error_rate(0.01, 0.002, 1e-4, 0.3)
        D = conclusive_probability(0.01, 0.002, 1e-4, 0.3)
        assert errors.D == pytest.approx(D)
        assert errors.e1 == pytest.approx(0.09 * 0.002 / D)
        assert errors.e2 == pytest.approx(0.49 * 1e-4 / D)
        assert errors.e == pytest.approx(errors.e1 + errors.e2)

    def test_symmetric_case(self):
        assert signal_error_rate(0.01, 0.01, 0.01, 0.5).e == pytest.approx(0.5)

    def test_error_free_without_noise(self):
        assert signal_error_rate(0.1, 0.0, 0.0, 0.2).e == 0.0

    def test_no_events_raises(self):
        with pytest.raises(NoConclusiveEventsError):
            signal_error_rate(0.0, 0.0, 0.0, 0.3)
        with pytest.raises(NoConclusiveEventsError):
            signal_error_rate(0.1, 0.1, 0.0, 0.0)


class TestAopp:
    def test_error_free(self):
        assert aopp_transform(0.0) == (0.5, 0.0)

    def test_half(self):
        kept, e = aopp_transform(0.5)
        assert kept == pytest.approx(0.25)
        assert e == pytest.approx(0.5)

    def test_known_value(self):
        kept, e = aopp_transform(0.1)
        assert kept == pytest.approx(0.41)
        assert e == pytest.approx(0.0121951, abs=1e-6)

    def test_pairing_reduces_error(self):
        for e in (0.01, 0.05, 0.2, 0.4):
            assert aopp_transform(e)[1] < e

    def test_out_of_range(self):
        with pytest.raises(ParameterDomainError):
            aopp_transform(1.2)


class TestSignalProbabilities:
    def test_dark_count_term(self):
        probs = signal_probs(fig4_at(100.0))
        assert probs.P_nn == pytest.approx(8e-8 * (1.0 - 8e-8))

    def test_ss_vanishes_without_mismatch(self):
        probs = signal_probs(ideal_params(L=50.0))
        assert probs.P_ss == 0.0
        assert probs.ss_intensity == 0.0

    def test_randomized_uses_worst_case_output(self):
        params = fig4_at(100.0)
        fixed = signal_probs(params, "real")
        randomized = signal_probs(params, "rand")
        assert randomized.ss_intensity == pytest.approx(0.38994, abs=1e-5)
        assert randomized.P_ss > fixed.P_ss

    def test_force_zero_ss(self):
        assert signal_probs(fig4_at(100.0), "rand", force_zero_ss=True).P_ss == 0.0

    def test_summed_is_twice_per_ordering(self):
        params = fig4_at(200.0)
        summed = signal_probs(params)
        per_ordering = signal_probs(params.with_updates(sns_weighting="per_ordering"))
        assert summed.P_sns == pytest.approx(2.0 * per_ordering.P_sns, rel=1e-12)
        assert summed.P_ss == per_ordering.P_ss

    def test_unknown_variant(self):
        with pytest.raises(ParameterDomainError):
            signal_probs(fig4_at(0.0), "quantum")


class TestRealistic:
    def test_point_identities(self):
        params = fig4_at(100.0)
        point = rate_realistic(params)
        eps = params.epsilon
        D = 2 * eps * (1 - eps) * point.P_sns + eps ** 2 * point.P_ss + (1 - eps) ** 2 * point.P_nn
        e = (eps ** 2 * point.P_ss + (1 - eps) ** 2 * point.P_nn) / D
        assert point.p_conclusive == pytest.approx(D, rel=1e-12)
        assert point.e_signal == pytest.approx(e, rel=1e-12)
        assert point.R == pytest.approx(D * (1 - point.chi - 1.15 * binary_entropy(e)), rel=1e-10)
        assert point.R > 0.0
        assert point.flags == ()

    def test_row_columns(self):
        row = rate_realistic(fig4_at(10.0)).to_row()
        assert tuple(row) == ROW_COLUMNS
        assert row["variant"] == "real"

    def test_to_dict_lists_flags(self):
        point = RatePoint(1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, "real", 0.1, 0.0, ("x",))
        assert point.to_dict()["flags"] == ["x"]
        assert not point.positive

    def test_no_conclusive_events(self):
        point = rate_realistic(ideal_params(L=10.0), epsilon=0.0)
        assert point.R == 0.0
        assert math.isnan(point.e_signal)
        assert point.flags == (NO_CONCLUSIVE_EVENTS,)

    @pytest.mark.parametrize("eps", [0.0, 1.0])
    def test_no_key_without_sending_mixture(self, eps):
        point = rate_realistic(fig4_at(50.0), epsilon=eps)
        assert point.R == 0.0
        assert point.flags == (NO_SNS_EVENTS,)
        assert point.e_signal == pytest.approx(1.0)

    def test_epsilon_override(self):
        params = fig4_at(100.0)
        assert rate_realistic(params, epsilon=0.3).epsilon == 0.3
        with pytest.raises(ParameterDomainError):
            rate_realistic(params, epsilon=1.3)

    def test_positive_inside_band(self):
        assert rate_realistic(fig4_at(430.0)).R > 0.0

    def test_negative_past_band(self):
        assert rate_realistic(fig4_at(452.0)).R <= 0.0


class TestRegimeCollapse:
    L_GRID = np.linspace(0.0, 500.0, 50)

    def test_per_ordering_matches_loss_only(self):
        params = ideal_params(sns_weighting="per_ordering")
        for L in self.L_GRID:
            p = params.with_updates(L=float(L))
            expected = rate_loss_only(p.mu, p.epsilon, p.eta)
            assert rate_realistic(p).R == pytest.approx(expected, abs=1e-10)

    def test_summed_is_twice_loss_only(self):
        params = ideal_params()
        for L in self.L_GRID[::5]:
            p = params.with_updates(L=float(L))
            expected = 2.0 * rate_loss_only(p.mu, p.epsilon, p.eta)
            assert rate_realistic(p).R == pytest.approx(expected, rel=1e-9)

    def test_overlap_matches_loss_only(self):
        p = ideal_params(L=300.0)
        chi = holevo_from_overlap(math.exp(-4 * p.mu * (1 - p.sqrt_eta) - 2 * p.mu * p.sqrt_eta))
        assert rate_realistic(p).chi == pytest.approx(chi, rel=1e-10)

    def test_randomized_without_ss_is_half(self):
        p = ideal_params(L=120.0)
        assert rate_randomized(p, force_zero_ss=True).R == pytest.approx(
            0.5 * rate_realistic(p).R, rel=1e-12
        )

    def test_aopp_without_errors_is_half(self):
        p = ideal_params(L=120.0)
        point = rate_realistic_aopp(p)
        assert point.e_key == 0.0
        assert point.R == pytest.approx(0.5 * rate_realistic(p).R, rel=1e-12)


class TestDispatch:
    @pytest.mark.parametrize("variant", VARIANTS)
    def test_every_variant(self, variant):
        point = rate(fig4_at(100.0), variant)
        assert point.variant == variant
        assert point.L == 100.0

    def test_randomized_costs_rate(self):
        params = fig4_at(100.0)
        assert rate(params, "rand").R < rate(params, "real").R

    def test_aopp_extends_reach(self):
        params = fig4_at(460.0)
        assert rate(params, "real").R <= 0.0
        assert rate(params, "real_aopp").R > 0.0

    def test_unknown_variant(self):
        with pytest.raises(ParameterDomainError):
            rate(fig4_at(0.0), "quantum")
