"""Tests for binary entropy, the Holevo term and EC leakage."""

import math

import pytest

from src.protocol.entropy import (
    binary_entropy,
    clamp_probability,
    ec_leakage,
    holevo_from_overlap,
)
from src.protocol.errors import ParameterDomainError


class TestBinaryEntropy:
    def test_endpoints(self):
        assert binary_entropy(0.0) == 0.0
        assert binary_entropy(1.0) == 0.0

    def test_maximum(self):
        assert binary_entropy(0.5) == pytest.approx(1.0)

    def test_known_value(self):
        assert binary_entropy(0.11) == pytest.approx(0.49992, abs=1e-4)

    def test_symmetric(self):
        for p in (0.01, 0.2, 0.37):
            assert binary_entropy(p) == pytest.approx(binary_entropy(1.0 - p))

    def test_slop_is_clamped(self):
        assert binary_entropy(-5e-13) == 0.0
        assert binary_entropy(1.0 + 5e-13) == 0.0

    def test_out_of_range_raises(self):
        with pytest.raises(ParameterDomainError):
            binary_entropy(-1e-6)
        with pytest.raises(ParameterDomainError):
            binary_entropy(1.1)

    def test_nan_raises(self):
        with pytest.raises(ParameterDomainError):
            binary_entropy(math.nan)


class TestClamp:
    def test_inside_untouched(self):
        assert clamp_probability(0.3) == 0.3

    def test_custom_tolerance(self):
        assert clamp_probability(-1e-9, tol=1e-8) == 0.0
        with pytest.raises(ParameterDomainError) as excinfo:
            clamp_probability(-1e-9, name="overlap")
        assert excinfo.value.parameter == "overlap"


class TestHolevo:
    def test_identical_states_leak_nothing(self):
        assert holevo_from_overlap(1.0) == 0.0

    def test_orthogonal_states_leak_a_bit(self):
        assert holevo_from_overlap(0.0) == pytest.approx(1.0)

    def test_known_overlap(self):
        assert holevo_from_overlap(math.exp(-0.2)) == pytest.approx(0.4386, abs=1e-4)

    def test_decreasing_in_overlap(self):
        values = [holevo_from_overlap(m) for m in (0.1, 0.4, 0.7, 0.95)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_overlap_above_one_raises(self):
        with pytest.raises(ParameterDomainError):
            holevo_from_overlap(1.01)


class TestLeakage:
    def test_zero_error(self):
        assert ec_leakage(0.0, 1.1) == 0.0

    def test_half(self):
        assert ec_leakage(0.5, 1.1) == pytest.approx(1.1)

    def test_scaled_entropy(self):
        assert ec_leakage(0.11, 1.16) == pytest.approx(0.57991, abs=1e-4)

    def test_efficiency_below_one_raises(self):
        with pytest.raises(ParameterDomainError):
            ec_leakage(0.1, 0.99)
