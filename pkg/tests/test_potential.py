import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncdirac import potential as pot
from ncdirac.errors import DomainError

from conftest import P0, PM


def naive_v(r, p):
    u = np.exp(-(r - p.r_c) / p.alpha)
    return (p.V0 / p.b) * (p.g + p.a * u) / (1 + u)


@pytest.mark.parametrize("p", [P0, PM])
def test_v_matches_direct_formula(p):
    r = np.linspace(p.r_c, p.r_c + 20 * p.alpha, 101)
    assert np.allclose(pot.v_hylleraas(r, p), naive_v(r, p), rtol=1e-14, atol=1e-15)


def test_v_limits():
    p = PM
    assert np.isclose(pot.v_hylleraas(p.r_c, p), p.V0 * (p.g + p.a) / (2 * p.b))
    assert np.isclose(pot.v_hylleraas(p.r_c + 200 * p.alpha, p), p.v_inf)


def test_no_overflow_far_inside_and_outside():
    p = PM
    vals = pot.v_hylleraas(np.array([-1e4, 1e4]), p)
    assert np.all(np.isfinite(vals))


@pytest.mark.parametrize("p", [P0, PM])
def test_dv_dr_against_central_difference(p):
    r = np.linspace(p.r_c, p.r_c + 10 * p.alpha, 400)
    h = 1e-5 * p.alpha
    fd = (pot.v_hylleraas(r + h, p) - pot.v_hylleraas(r - h, p)) / (2 * h)
    an = pot.dv_dr(r, p)
    assert np.max(np.abs(fd - an)) <= 1e-6 * np.max(np.abs(an))


@given(st.floats(0.0, 1.0), st.integers(-3, 3), st.floats(0.51, 30.0))
def test_bopp_identity(theta, m, r):
    nc = pot.NCParams(theta, m)
    lhs = pot.v_nc_term(r, P0, nc)
    rhs = -(theta * m / (2 * r)) * pot.dv_dr(r, P0)
    assert lhs == pytest.approx(rhs, rel=1e-15, abs=0)


def test_nc_term_vanishes_without_theta():
    r = np.linspace(0.6, 5, 11)
    assert np.all(pot.v_nc_term(r, P0, pot.NCParams(0.0, 2)) == 0)


def test_nc_term_requires_positive_r():
    with pytest.raises(DomainError):
        pot.v_nc_term(0.0, P0, pot.NCParams(0.1, 1))


def test_pekeris_variants():
    p = PM
    r = np.linspace(p.r_c + 0.1, p.r_c + 4, 9)
    u = np.exp(-(r - p.r_c) / p.alpha)
    assert np.allclose(pot.pekeris_inv_r2(r, p, "as_printed"), 4 * p.alpha**2 * u / (1 + u) ** 2)
    assert np.allclose(pot.pekeris_inv_r2(r, p, "conventional"), u / (p.alpha**2 * (1 - u) ** 2))
    with pytest.raises(ValueError):
        pot.pekeris_inv_r2(r, p, "other")


def test_efield_terms():
    f = pot.FieldParams(2.0, 3.0, 0.5)
    nc = pot.NCParams(0.1, -1)
    assert f.coupling == 3.0
    assert pot.v_efield(2.0, f) == pytest.approx(-1.5)
    assert pot.v_efield_nc(2.0, f, nc) == pytest.approx(3.0 * 0.1 / 16)


@given(st.floats(0.0, 40.0))
def test_s_map_round_trip(x):
    r = P0.r_c + x * P0.alpha
    s = pot.to_s(r, P0)
    assert 0 < s <= 1
    assert pot.to_r(s, P0) == pytest.approx(r, rel=1e-12, abs=1e-12)


def test_s_map_domain():
    with pytest.raises(DomainError):
        pot.to_s(P0.r_c - 0.1, P0)
    with pytest.raises(DomainError):
        pot.to_r(0.0, P0)


def test_s_image_is_hylleraas_with_u_reflected():
    p = PM
    r = np.linspace(p.r_c + 0.05, p.r_c + 5, 17)
    u = np.exp(-(r - p.r_c) / p.alpha)
    assert np.allclose(pot.v_s_image(r, p), (p.V0 / p.b) * (p.g - p.a * u) / (1 - u))
    assert np.allclose(pot.centrifugal_s_image(r, p), -4 * p.alpha**2 * u / (1 - u) ** 2)
    with pytest.raises(DomainError):
        pot.v_s_image(p.r_c, p)


@pytest.mark.parametrize("kw", [{"b": 0.0}, {"alpha": 0.0}, {"M": -1.0}, {"r_c": -0.1},
                                {"V0": float("nan")}])
def test_params_validation(kw):
    with pytest.raises(DomainError):
        P0.replace(**kw)


def test_nc_params_validation():
    with pytest.raises(DomainError):
        pot.NCParams(-1.0, 0)
    with pytest.raises(DomainError):
        pot.NCParams(0.1, 2).check_state(1)
