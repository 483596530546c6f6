import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncdirac.errors import DomainError, GridTooCoarse
from ncdirac.radial import (
    QuantumState,
    dlambda_de,
    kappa_to_lj,
    s_coefficients,
    s_equation_residual,
)

from conftest import P0, PM


@pytest.mark.parametrize("kappa,l,j", [(-1, 0, 0.5), (1, 1, 0.5), (-2, 1, 1.5), (2, 2, 1.5)])
def test_kappa_mapping(kappa, l, j):
    assert kappa_to_lj(kappa) == (l, j)


def test_kappa_zero_rejected():
    with pytest.raises(DomainError):
        kappa_to_lj(0)


def test_state_defaults_and_validation():
    st_ = QuantumState.from_nl(1, 2, m_l=-2)
    assert (st_.kappa, st_.j) == (-3, 2.5)
    with pytest.raises(DomainError):
        QuantumState.from_nl(0, 1, m_l=2)
    with pytest.raises(DomainError):
        QuantumState.from_nl(-1, 0)
    with pytest.raises(DomainError):
        QuantumState.from_nl(0, 1, kappa=-1)


@given(st.floats(-0.99, 0.99), st.integers(0, 3))
def test_coefficients_structure(E, l):
    sc = s_coefficients(E, PM, l)
    assert sc.xi3 == sc.Lambda
    assert sc.Aleph == pytest.approx(-sc.xi1)
    # the angular exponent of the normal form does not depend on E
    a4 = PM.alpha**4
    assert sc.Xi_nu ** 2 == pytest.approx(0.25 - 4 * a4 * l * (l + 1), abs=1e-12)
    assert sc.Xi ** 2 == pytest.approx(-a4 * l * (l + 1), abs=1e-14)


def test_printed_exponent_is_imaginary_for_l_positive():
    sc = s_coefficients(0.1, PM, 1)
    assert sc.Xi.real == 0 and sc.Xi.imag > 0
    assert sc.Xi_nu.imag == 0


@given(st.floats(-0.99, 0.99))
def test_dlambda_de(E):
    h = 1e-6
    fd = (s_coefficients(E + h, P0, 0).Lambda - s_coefficients(E - h, P0, 0).Lambda) / (2 * h)
    assert fd.real == pytest.approx(dlambda_de(E, P0), rel=1e-7, abs=1e-9)


def exact_l0_solution(E, p):
    # phi = s^sqrt(Lambda) (1-s) solves the equation whenever (1 + sqrt(Lambda))^2 = xi1
    sc = s_coefficients(E, p, 0)
    return sc, lambda s: s ** sc.sqrt_lambda * (1 - s)


def test_residual_of_constructed_solution(pm_states):
    bs = pm_states[(0, 0)]
    s = np.linspace(0.05, 0.95, 2000)
    assert s_equation_residual(bs.phi_s(s), bs.energy, PM, 0, s) < 1e-6


def test_residual_detects_wrong_energy(pm_states):
    bs = pm_states[(0, 0)]
    s = np.linspace(0.05, 0.95, 2000)
    assert s_equation_residual(bs.phi_s(s), bs.energy + 0.05, PM, 0, s) > 1e-3


def test_residual_zero_function():
    s = np.linspace(0.05, 0.95, 300)
    assert s_equation_residual(np.zeros_like(s), 0.1, PM, 0, s) == 0.0


def test_residual_grid_checks():
    with pytest.raises(GridTooCoarse):
        s_equation_residual(np.ones(50), 0.1, PM, 0, np.linspace(0.1, 0.9, 50))
    with pytest.raises(DomainError):
        s_equation_residual(np.ones(300), 0.1, PM, 0, np.linspace(0.0, 0.9, 300))
    with pytest.raises(ValueError):
        s = np.linspace(0.1, 0.9, 300) ** 2
        s_equation_residual(np.ones(300), 0.1, PM, 0, s)
