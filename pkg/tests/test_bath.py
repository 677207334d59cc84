from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from xxrect.bath import (
    INFINITE,
    ZERO,
    BathPair,
    bose,
    check_temperature,
    chi,
    chi_times_dfdT,
    dchi_dT_times_dfdT,
    fermi,
    fermi_difference,
    gamma_rate,
    parse_temperature,
)
from xxrect.errors import TemperatureError

energies = st.floats(-30.0, 30.0, allow_nan=False).filter(lambda x: abs(x) > 1e-3)
temps = st.floats(0.05, 50.0)


def test_reference_values():
    assert fermi(1.0, 1.0) == pytest.approx(0.2689414213699951, rel=1e-14)
    assert chi(2.0, 1.0) == pytest.approx(1.3130352854993315, rel=1e-14)
    assert gamma_rate(1.0, 1.0, 1.0) == pytest.approx(1.5819767068693262, rel=1e-14)
    assert gamma_rate(-1.0, 1.0, 1.0) == pytest.approx(0.5819767068693263, rel=1e-14)
    assert chi_times_dfdT(1.0, 1.0) == pytest.approx(0.4254590641196608, rel=1e-14)
    assert dchi_dT_times_dfdT(1.0, 1.0) == pytest.approx(0.36203083048315526, rel=1e-14)


def test_limits():
    assert fermi(1.0, ZERO) == 0.0 and fermi(-1.0, ZERO) == 1.0 and fermi(0.0, ZERO) == 0.5
    assert fermi(3.0, INFINITE) == 0.5
    assert chi(0.0, ZERO) == math.inf
    assert chi(2.0, ZERO) == 1.0
    assert chi(2.0, INFINITE) == math.inf
    assert chi_times_dfdT(0.0, 1.0) == 0.5
    assert chi_times_dfdT(-0.0, 1.0) == -0.5
    assert bose(1.0, ZERO) == 0.0


def test_no_overflow_at_large_ratio():
    assert fermi(1e5, 1e-3) == 0.0
    assert fermi(-1e5, 1e-3) == 1.0
    assert chi(1e5, 1e-3) == 1.0
    assert chi_times_dfdT(1e5, 1e-3) == 0.0
    assert gamma_rate(1e5, 1e-3, 2.0) == 2.0


def test_gamma_rate_rejects_zero_frequency():
    with pytest.raises(ValueError):
        gamma_rate(0.0, 1.0, 1.0)


def test_temperature_parsing():
    assert parse_temperature("inf") == INFINITE
    assert parse_temperature("zero") == ZERO
    assert parse_temperature("2.5") == 2.5
    for bad in (-1.0, float("nan"), "warm"):
        with pytest.raises(TemperatureError):
            parse_temperature(bad)
    with pytest.raises(TemperatureError):
        check_temperature(-0.1)
    with pytest.raises(TemperatureError):
        BathPair(1.0, -2.0)


def test_bath_pair_helpers():
    b = BathPair.from_mean(3.0, 2.0)
    assert (b.T_L, b.T_R) == (4.0, 2.0)
    assert b.swapped() == BathPair(2.0, 4.0)


@given(energies, temps)
def test_detailed_balance(eps, T):
    w = abs(eps)
    up, down = gamma_rate(w, T, 1.0), gamma_rate(-w, T, 1.0)
    if w / T < 600:
        assert up / down == pytest.approx(math.exp(w / T), rel=1e-9)


@given(energies, temps)
def test_chi_is_two_n_plus_one(eps, T):
    assert chi(eps, T) == pytest.approx(2 * bose(abs(eps), T) + 1, rel=1e-12)
    assert chi(eps, T) >= 1.0


@given(energies, temps)
def test_fermi_symmetry(eps, T):
    assert fermi(eps, T) + fermi(-eps, T) == pytest.approx(1.0, abs=1e-15)


@given(energies, temps, temps)
def test_fermi_difference_matches_direct(eps, T1, T2):
    direct = fermi(eps, T1) - fermi(eps, T2)
    assert fermi_difference(eps, T1, T2) == pytest.approx(direct, abs=1e-15)


def test_fermi_difference_small_energy_accuracy():
    eps, T1, T2 = 1e-9, 2.0, 1.0
    exact = 0.5 * (math.tanh(eps / (2 * T2)) - math.tanh(eps / (2 * T1)))
    assert fermi_difference(eps, T1, T2) == pytest.approx(exact, rel=1e-12)


@pytest.mark.parametrize("eps", [-4.0, -1.0, -0.1, 0.1, 0.5, 1.0, 3.0, 10.0])
@pytest.mark.parametrize("T", [0.3, 1.0, 2.0, 7.0])
def test_kernels_match_finite_differences(eps, T):
    d = 1e-4 * T
    dfdT = (fermi(eps, T + d) - fermi(eps, T - d)) / (2 * d)
    dchidT = (chi(eps, T + d) - chi(eps, T - d)) / (2 * d)
    ref1 = chi(eps, T) * dfdT
    ref2 = dchidT * dfdT
    assert chi_times_dfdT(eps, T) == pytest.approx(ref1, rel=1e-6, abs=1e-14)
    assert dchi_dT_times_dfdT(eps, T) == pytest.approx(ref2, rel=1e-6, abs=1e-14)


def test_vectorised_forms_agree_with_scalars():
    eps = np.array([-2.0, -0.5, 0.3, 4.0])
    np.testing.assert_allclose(fermi(eps, 1.5), [fermi(e, 1.5) for e in eps])
    np.testing.assert_allclose(chi(eps, 1.5), [chi(e, 1.5) for e in eps])


def test_kernels_reject_limit_temperatures():
    for T in (ZERO, INFINITE):
        with pytest.raises(TemperatureError):
            chi_times_dfdT(1.0, T)
