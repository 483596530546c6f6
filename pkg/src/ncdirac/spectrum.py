"""
Unperturbed bound states from the closed-form (NU) solution.

Two quantization conditions are available:

``paper_printed``
    2n + 1/2 + (2n+1) Xi + n(n-1) - 4 alpha^4 l(l+1)
    + (2 Xi + 2n + 1) sqrt(Lambda) + 2 alpha^2 V0 (E+M)(g-a) / b,
    typeset verbatim with the printed Xi = sqrt(-alpha^4 l(l+1)).

``parametric_nu`` (default)
    The parametric Nikiforov-Uvarov energy relation for
    phi'' + (1-s)/(s(1-s)) phi' + (-xi1 s^2 + xi2 s - xi3)/(s(1-s))^2 phi = 0,
    i.e. with alpha1 = alpha2 = alpha3 = 1:

        n + (2n+1)/2 + (2n+1)(Xi_nu + sqrt(xi3)) + n(n-1)
        - xi2 + 2 xi3 + 2 sqrt(xi3) Xi_nu = 0.

    It coincides with the printed relation once Xi is replaced by
    Xi_nu = sqrt(1/4 + xi1 - xi2 + xi3).

For l = 0 the parametric relation collapses to (n + 1 + sqrt(Lambda))^2 = xi1,
so a bound state needs xi1 > (n+1)^2, i.e. V0 a / b > 0 large enough.
"""

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import potential as pot
from .errors import DomainError, MultipleRoots, NonNormalizable, NoRoot
from .oracle import exact_poly_beta_integral, poly_multiply, quad_integrate
from .radial import QuantumState, s_coefficients
from .specfun import (
    beta,
    gamma_ratio,
    hyp2f1_coefficients,
    hyp3f2_unit_terminating,
    polyval,
)

CONDITIONS = ("paper_printed", "parametric_nu")
XI_MODES = ("nu", "printed")


def quantization_residual_printed(E, n, l, p):
    """Left-hand side of the printed quantization condition (complex)."""
    sc = s_coefficients(E, p, l)
    xi = sc.Xi
    a4 = p.alpha**4
    return (
        2 * n + 0.5 + (2 * n + 1) * xi + n * (n - 1) - 4.0 * a4 * l * (l + 1)
        + (2 * xi + 2 * n + 1) * sc.sqrt_lambda
        + 2.0 * p.alpha**2 * p.V0 * (E + p.M) * (p.g - p.a) / p.b
    )


def quantization_residual_nu(E, n, l, p):
    """Parametric-NU energy relation evaluated on the s-space coefficients (complex)."""
    sc = s_coefficients(E, p, l)
    root3 = sc.sqrt_lambda
    root9 = sc.Xi_nu
    return (
        n + 0.5 * (2 * n + 1) + (2 * n + 1) * (root9 + root3) + n * (n - 1)
        - sc.xi2 + 2.0 * sc.xi3 + 2.0 * root3 * root9
    )


_RESIDUALS = {
    "paper_printed": quantization_residual_printed,
    "parametric_nu": quantization_residual_nu,
}


def bound_window(p):
    """Energies for which the state decays at large r: (-M, M + 2 min(0, V0 g/b))."""
    return -p.M, p.M + 2.0 * min(0.0, p.v_inf)


def default_bracket(p):
    lo, hi = bound_window(p)
    eps = 1e-6 * p.M
    return lo + eps, hi - eps


def scan_residual(n, l, p, condition="parametric_nu", points=10001, bracket=None):
    """Tabulate the residual over the bracket; returns (E, real part, imag part)."""
    func = _RESIDUALS[condition]
    lo, hi = bracket or default_bracket(p)
    Es = np.linspace(lo, hi, points)
    vals = np.array([func(E, n, l, p) for E in Es])
    return Es, vals.real, vals.imag


def sign_changes(values):
    v = np.asarray(values)
    return int(np.count_nonzero(np.sign(v[:-1]) * np.sign(v[1:]) < 0))


def solve_energy(n, l, p, condition="parametric_nu", bracket=None, panels=2000,
                 tol=None, require_real=True):
    """Bound-state energy from the chosen quantization condition.

    The real part of the residual is scanned on ``panels`` equal panels and each
    sign change is refined with Brent's method to ``tol`` (default 1e-12 M).
    Sign changes caused by a jump rather than a zero, and (if
    ``require_real``) roots whose residual keeps an imaginary part, are
    discarded.

    Raises
    ------
    NoRoot
        No acceptable root; ``extrema`` carries the scanned residual range.
    MultipleRoots
        More than one acceptable root; all are attached.
    """
    if condition not in _RESIDUALS:
        raise ValueError(f"condition must be one of {CONDITIONS}")
    func = _RESIDUALS[condition]
    tol = 1e-12 * p.M if tol is None else tol
    lo, hi = bracket or default_bracket(p)

    if lo == hi:
        res = func(lo, n, l, p)
        if abs(res) <= 1e-9 * (1.0 + abs(lo)):
            return float(lo)
        raise NoRoot(f"residual {res:.3e} at the degenerate bracket", (res.real, res.real))

    Es = np.linspace(lo, hi, panels + 1)
    vals = np.array([func(E, n, l, p) for E in Es])
    re = vals.real
    extrema = (float(np.min(re)), float(np.max(re)))
    roots = []
    rejected = []
    for i in range(panels):
        if re[i] == 0.0:
            cand = Es[i]
        elif re[i] * re[i + 1] < 0:
            cand = brentq(lambda E: func(E, n, l, p).real, Es[i], Es[i + 1],
                          xtol=tol, rtol=4 * np.finfo(float).eps)
        else:
            continue
        res = func(cand, n, l, p)
        scale = 1.0 + max(abs(vals[i]), abs(vals[min(i + 1, panels)]))
        if abs(res.real) > 1e-6 * scale:
            rejected.append((cand, "jump"))
            continue
        if require_real and abs(res.imag) > 1e-9 * scale:
            rejected.append((cand, f"imaginary residual {res.imag:.3e}"))
            continue
        if not roots or abs(cand - roots[-1]) > 10 * tol:
            roots.append(float(cand))
    if not roots:
        detail = f"; rejected: {rejected}" if rejected else ""
        raise NoRoot(
            f"{condition}: no root for n={n}, l={l} in [{lo:.6g}, {hi:.6g}], "
            f"residual real part spans [{extrema[0]:.6g}, {extrema[1]:.6g}]{detail}",
            extrema,
        )
    if len(roots) > 1:
        raise MultipleRoots(f"{condition}: {len(roots)} roots for n={n}, l={l}", roots)
    return roots[0]


@dataclass
class BoundState:
    """Normalized closed-form radial state at a fixed energy.

    phi(s) = Nprime s^sqrt(Lambda) (1-s)^(1/2 + xi) 2F1(-n, n + 2 sqrt(Lambda)
    + 2 xi + 1; 1 + 2 sqrt(Lambda); s), with xi = Xi_nu or the printed Xi.
    ``Nprime`` comes from the exact Beta-sum integral; ``Nprime_3f2`` is the
    single-3F2 route (complex, may be None) and ``norm_quad`` the post-build
    quadrature of |phi(r)|^2 over [r_c, r_c + span alpha].
    """

    state: QuantumState
    energy: float
    Nprime: float
    scoef: object
    params: pot.PotentialParams
    condition_used: str = "parametric_nu"
    xi_mode: str = "nu"
    Nprime_3f2: complex = None
    norm_quad: float = float("nan")
    span: float = 60.0
    hyp_coeffs: list = field(default_factory=list, repr=False)

    @property
    def sqrt_lambda(self):
        return self.scoef.sqrt_lambda

    @property
    def xi(self):
        return self.scoef.Xi_nu if self.xi_mode == "nu" else self.scoef.Xi

    @property
    def lambda_positive(self):
        return self.scoef.lambda_positive

    def phi_s(self, s):
        s = np.asarray(s, dtype=float)
        shape = _cpow(s, self.sqrt_lambda) * _cpow(1.0 - s, 0.5 + self.xi)
        return self.Nprime * shape * polyval(self.hyp_coeffs, s)

    def phi_r(self, r):
        return self.phi_s(pot.to_s(r, self.params))

    def density_r(self, r):
        return np.abs(self.phi_r(r)) ** 2

    def normalization_quadrature(self, tol=1e-13, rel_tol=1e-12):
        """Independent quadrature of |phi(r)|^2 dr over [r_c, r_c + span alpha]."""
        p = self.params
        return quad_integrate(self.density_r, (p.r_c, p.r_c + self.span * p.alpha),
                              tol=tol, rel_tol=rel_tol)


def _cpow(base, expo):
    # base**expo for base >= 0 and Re expo > 0, with 0**expo = 0
    pos = base > 0
    logb = np.log(np.where(pos, base, 1.0))
    return np.where(pos, np.exp(expo * logb), 0.0)


def _unit_norm_integral(sqrt_lam, xi, coeffs, alpha):
    poly = poly_multiply(coeffs, np.conj(coeffs))
    val = exact_poly_beta_integral(2.0 * sqrt_lam.real, 2.0 + 2.0 * xi.real, poly)
    return alpha * val.real


def build_wavefunction(E, n, l, p, xi_mode="nu", condition_used="parametric_nu",
                       m_l=0, kappa=None, span=60.0, check=True):
    """Assemble and normalize the closed-form radial wavefunction at energy E.

    Raises
    ------
    NonNormalizable
        If Re sqrt(Lambda) <= 0 or the (1-s) exponent makes the integral diverge.
    """
    if xi_mode not in XI_MODES:
        raise ValueError(f"xi_mode must be one of {XI_MODES}")
    state = QuantumState.from_nl(n, l, m_l=m_l, kappa=kappa)
    sc = s_coefficients(E, p, l)
    sq = sc.sqrt_lambda
    xi = sc.Xi_nu if xi_mode == "nu" else sc.Xi
    if sq.real <= 0:
        raise NonNormalizable(f"Re sqrt(Lambda) = {sq.real:.3e} <= 0 at E = {E!r}")
    if 2.0 + 2.0 * xi.real <= 0:
        raise NonNormalizable("(1-s) exponent makes the normalization integral diverge")
    b2 = n + 2.0 * sq + 2.0 * xi + 1.0
    c = 1.0 + 2.0 * sq
    coeffs = hyp2f1_coefficients(n, b2, c)
    integral = _unit_norm_integral(sq, xi, coeffs, p.alpha)
    if not integral > 0:
        raise NonNormalizable(f"normalization integral {integral!r} is not positive")
    nprime = 1.0 / math.sqrt(integral)

    try:
        single = (
            p.alpha * beta(2.0 * sq, 2.0 * xi + 2.0)
            * hyp3f2_unit_terminating(n, b2, 2.0 * xi + 2.0, c, 2.0 * sq + 2.0 * xi + 2.0)
        )
        nprime_3f2 = 1.0 / cmath.sqrt(single)
    except (ArithmeticError, ZeroDivisionError):
        nprime_3f2 = None

    bs = BoundState(
        state=state,
        energy=float(E),
        Nprime=nprime,
        scoef=sc,
        params=p,
        condition_used=condition_used,
        xi_mode=xi_mode,
        Nprime_3f2=nprime_3f2,
        span=span,
        hyp_coeffs=coeffs,
    )
    if check:
        bs.norm_quad = bs.normalization_quadrature()
    return bs


def solve_state(n, l, p, condition="parametric_nu", xi_mode="nu", m_l=0,
                require_real=True, **solver_options):
    """solve_energy followed by build_wavefunction."""
    E = solve_energy(n, l, p, condition=condition, require_real=require_real, **solver_options)
    return build_wavefunction(E, n, l, p, xi_mode=xi_mode, condition_used=condition, m_l=m_l)


def nprime_gamma_factor(n, sqrt_lam):
    """Gamma(n + 2 sqrt(Lambda) + 1) / (n! Gamma(2 sqrt(Lambda) + 1))."""
    return gamma_ratio((n + 2.0 * sqrt_lam + 1.0,), (2.0 * sqrt_lam + 1.0,)) / math.factorial(n)


def interior_nodes(bs, points=20001):
    """Sign changes of Re phi(s) strictly inside (0, 1)."""
    s = np.linspace(0.0, 1.0, points)[1:-1]
    vals = bs.phi_s(s)
    if np.max(np.abs(vals.imag)) > 1e-8 * np.max(np.abs(vals)):
        raise DomainError("node counting needs a real wavefunction")
    v = vals.real
    v = v[np.abs(v) > 1e-12 * np.max(np.abs(v))]
    return int(np.count_nonzero(np.diff(np.sign(v)) != 0))
