import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import eval_legendre

from dickeqfi.ladder import build_dicke
from dickeqfi.metrology import (
    parity_curve,
    parity_expectation,
    parity_phase_variance,
    qfi_general,
    qfi_lossy_lower_bound,
    qfi_mixed_number,
    qfi_twin,
)
from dickeqfi.oracle import ExchangeIntegral, oracle_integral

X4 = 11.0 / 12.0


def integral(value, n_total=4, exchanged=1):
    return ExchangeIntegral(
        value=value, total_photons=n_total, method="oracle", exchanged_count=exchanged
    )


class TestGeneralQfi:
    def test_two_photon_unit_overlap(self):
        report = qfi_general(1, 1, integral(1.0, 2))
        assert report.qfi == 4.0
        assert report.phase_variance == 0.25

    def test_vacuum_port(self):
        assert qfi_general(5, 0, integral(0.3)).qfi == 5.0

    def test_four_photon_collective(self):
        assert qfi_general(2, 2, integral(X4)).qfi == pytest.approx(8 * X4 + 4)

    @given(
        m=st.integers(0, 40),
        n=st.integers(0, 40),
        value=st.floats(0.0, 1.0),
    )
    @settings(max_examples=50, deadline=None)
    def test_symmetric_in_arm_exchange(self, m, n, value):
        a = qfi_general(m, n, integral(value, m + n))
        b = qfi_general(n, m, integral(value, m + n))
        assert a.qfi == pytest.approx(b.qfi, rel=1e-14)

    def test_rejects_wrong_exchange_count(self):
        with pytest.raises(ValueError):
            qfi_general(2, 2, integral(1.0, exchanged=0))


class TestTwinQfi:
    def test_unit_overlap_reference(self):
        assert qfi_twin(4, integral(1.0)).qfi == 12.0

    def test_zero_overlap_is_shot_noise(self):
        for n in (2, 10, 64):
            report = qfi_twin(n, integral(0.0, n))
            assert report.qfi == float(n)
            assert report.snl_ratio == 1.0

    def test_collective_hundred_photons(self):
        report = qfi_twin(100, integral(0.82, 100))
        assert report.qfi == pytest.approx(0.41 * 100**2 + 100)
        assert report.hl_ratio == pytest.approx(0.42, abs=0.01)

    @given(values=st.tuples(st.floats(0.0, 1.0), st.floats(0.0, 1.0)))
    @settings(max_examples=40, deadline=None)
    def test_monotone_in_overlap(self, values):
        low, high = sorted(values)
        assert qfi_twin(8, integral(low, 8)).qfi <= qfi_twin(8, integral(high, 8)).qfi

    @given(n_half=st.integers(1, 50), value=st.floats(0.0, 1.0))
    @settings(max_examples=40, deadline=None)
    def test_photon_number_states_are_the_twin_optimum(self, n_half, value):
        n = 2 * n_half
        assert qfi_twin(n, integral(value, n)).qfi <= n * (n + 2) / 2.0 + 1e-9

    def test_negative_qfi_rejected(self):
        # an overlap of -1 drives the formula negative, which no valid
        # input state can produce; the report constructor refuses it
        with pytest.raises(ValueError):
            qfi_twin(8, integral(-1.0, 8))

    def test_rejects_odd_totals(self):
        with pytest.raises(ValueError):
            qfi_twin(5, integral(1.0, 5))


class TestMixedNumberQfi:
    def test_vacuum_component_only(self):
        assert qfi_mixed_number(3, [(1.0, 0, None)]).qfi == 3.0

    def test_single_component_reduces_to_general(self):
        report = qfi_mixed_number(2, [(1.0, 3, integral(0.7, 5))])
        assert report.qfi == pytest.approx(qfi_general(2, 3, integral(0.7, 5)).qfi)

    def test_two_component_example(self):
        report = qfi_mixed_number(
            2, [(0.5, 0, None), (0.5, 2, integral(1.0))]
        )
        assert report.qfi == pytest.approx(7.0)

    def test_rejects_unnormalised_weights(self):
        with pytest.raises(ValueError):
            qfi_mixed_number(2, [(0.6, 0, None), (0.5, 2, integral(1.0))])
        with pytest.raises(ValueError):
            qfi_mixed_number(2, [(-0.5, 0, None), (1.5, 2, integral(1.0))])

    def test_missing_integral(self):
        with pytest.raises(ValueError):
            qfi_mixed_number(2, [(1.0, 2, None)])


class TestLossyLowerBound:
    def test_unit_collection(self):
        pure = qfi_twin(4, integral(X4))
        assert qfi_lossy_lower_bound(1.0, pure).qfi == pure.qfi

    def test_zero_collection(self):
        pure = qfi_twin(4, integral(X4))
        report = qfi_lossy_lower_bound(0.0, pure)
        assert report.qfi == 0.0
        assert report.input_kind == "lossy_lower_bound"

    def test_quadratic_in_collection(self):
        pure = qfi_twin(100, integral(0.82, 100))
        assert qfi_lossy_lower_bound(0.9, pure).qfi == pytest.approx(
            0.81 * pure.qfi
        )

    def test_rejects_bad_probability(self):
        pure = qfi_twin(4, integral(X4))
        with pytest.raises(ValueError):
            qfi_lossy_lower_bound(1.2, pure)

    def test_composition_with_cascade_collection(self):
        # hundred collective photons against a rate ratio of a thousand
        from dickeqfi.dickesim import LossModel, dicke_collection_probability

        p = dicke_collection_probability(100, LossModel(1.0, 1e-3)).exact
        assert 1.0 - p == pytest.approx(4.6e-3, rel=0.15)
        pure = qfi_twin(100, integral(0.82, 100))
        bound = qfi_lossy_lower_bound(p, pure)
        assert bound.qfi == pytest.approx(p * p * (0.41 * 100**2 + 100))


class TestReports:
    def test_variance_identity(self):
        report = qfi_twin(6, integral(0.5, 6), repetitions=7)
        assert report.phase_variance * report.qfi * report.repetitions == pytest.approx(
            1.0, rel=1e-14
        )

    def test_serialisation_round_trip(self):
        report = qfi_twin(4, integral(X4))
        data = json.loads(report.to_json())
        assert data["qfi"] == report.qfi
        assert data["input_kind"] == "twin"


class TestParity:
    def test_zero_phase_is_unity(self):
        assert parity_expectation(3, [1.0, 0.9, 0.8, 0.7], 0.0) == pytest.approx(1.0)

    @pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
    def test_single_mode_is_legendre(self, m):
        # independent reference: the fringe of indistinguishable photons
        # is the Legendre polynomial in cos(2 phi)
        phis = np.linspace(-1.5, 1.5, 31)
        ones = [1.0] * (m + 1)
        for phi in phis:
            assert parity_expectation(m, ones, phi) == pytest.approx(
                float(eval_legendre(m, math.cos(2 * phi))), abs=1e-12
            )

    def test_values_stay_in_unit_interval(self):
        arm = build_dicke(2, 1.0)
        integrals = [oracle_integral(arm, arm, l=l).value for l in range(3)]
        for phi in np.linspace(-math.pi, math.pi, 101):
            assert -1.0 - 1e-12 <= parity_expectation(2, integrals, phi) <= 1.0 + 1e-12

    def test_missing_integrals_rejected(self):
        with pytest.raises(ValueError):
            parity_expectation(3, [1.0, 0.9], 0.1)

    @pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
    def test_numeric_curvature_single_mode(self, m):
        h = 1e-4
        ones = [1.0] * (m + 1)
        second = (
            parity_expectation(m, ones, h)
            - 2.0 * parity_expectation(m, ones, 0.0)
            + parity_expectation(m, ones, -h)
        ) / h**2
        assert -second == pytest.approx(2.0 * m * (m + 1.0), rel=1e-6)

    def test_numeric_curvature_multimode(self):
        arm = build_dicke(2, 1.0)
        integrals = [oracle_integral(arm, arm, l=l).value for l in range(3)]
        h = 1e-4
        second = (
            parity_expectation(2, integrals, h)
            - 2.0 * parity_expectation(2, integrals, 0.0)
            + parity_expectation(2, integrals, -h)
        ) / h**2
        expected = 2.0 * 2 * (2 * integrals[1] + integrals[0])
        assert -second == pytest.approx(expected, rel=1e-6)

    def test_first_derivative_vanishes_at_origin(self):
        arm = build_dicke(2, 1.0)
        integrals = [oracle_integral(arm, arm, l=l).value for l in range(3)]
        h = 1e-4
        slope = (
            parity_expectation(2, integrals, h)
            - parity_expectation(2, integrals, -h)
        ) / (2 * h)
        assert abs(slope) <= 1e-8


class TestParityVariance:
    def test_two_photon_reference(self):
        assert parity_phase_variance(1, integral(1.0, 2)) == 0.25

    @pytest.mark.parametrize("m", [1, 2, 3, 5])
    def test_single_mode_matches_fock_scaling(self, m):
        n = 2 * m
        variance = parity_phase_variance(m, integral(1.0, n))
        assert variance == pytest.approx(2.0 / (n * (n + 2)), rel=1e-14)
        # fringe curvature = 4 * endpoint derivative of the Legendre polynomial
        assert 4.0 * (m * (m + 1) / 2.0) == pytest.approx(1.0 / variance, rel=1e-14)

    def test_four_photon_collective(self):
        assert parity_phase_variance(2, integral(X4)) == pytest.approx(
            1.0 / (8 * X4 + 4), rel=1e-14
        )

    @given(m=st.integers(1, 30), value=st.floats(0.0, 1.0))
    @settings(max_examples=50, deadline=None)
    def test_saturates_cramer_rao(self, m, value):
        variance = parity_phase_variance(m, integral(value, 2 * m))
        qfi = qfi_twin(2 * m, integral(value, 2 * m)).qfi
        assert variance * qfi == pytest.approx(1.0, rel=1e-12)


class TestParityCurve:
    def test_curve_summary(self):
        arm = build_dicke(2, 1.0)
        integrals = [oracle_integral(arm, arm, l=l).value for l in range(3)]
        curve = parity_curve(2, integrals, np.linspace(-0.5, 0.5, 21))
        assert curve.expectation[10] == pytest.approx(1.0)
        assert -curve.curvature == pytest.approx(
            qfi_twin(4, integral(integrals[1])).qfi, rel=1e-9
        )
        rows = curve.to_rows()
        assert rows[0].keys() == {"phi", "expectation"}
