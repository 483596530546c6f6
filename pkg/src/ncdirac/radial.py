"""
Quantum-number bookkeeping and the s-space radial equation.

With s = exp(-(r - r_c)/alpha) on (0, 1], the unperturbed (theta = 0) radial
equation in the S = V case reads

    phi'' + (1/s) phi' + (-xi1 s^2 + xi2 s - xi3) / (s^2 (1 - s)^2) phi = 0

which is the parametric Nikiforov-Uvarov normal form with
alpha1 = alpha2 = alpha3 = 1. The coefficients, as printed in the source
derivation::

    s^2 term: -alpha^2 [2 V0 a (E+M) - b (E^2 - M^2)] s^2 / b
    s^1 term: +2 alpha^2 [2 alpha^2 b l(l+1) + V0 (g+a)(E+M) + b (M^2 - E^2)] s / b
    s^0 term: +alpha^2 [2 V0 g (E+M) - b (E^2 - M^2)] / b

Frozen reading used here::

    xi1 = alpha^2 [2 V0 a (E+M) - b (E^2 - M^2)] / b
    xi2 = 2 alpha^2 [2 alpha^2 b l(l+1) + V0 (g+a)(E+M) + b (M^2 - E^2)] / b
    xi3 = Lambda = alpha^2 [2 V0 g (E+M) - b (E^2 - M^2)] / b

The s^0 term therefore enters with a minus sign (-xi3). Taken literally the
printed plus sign gives indicial exponents +-i sqrt(Lambda) at s = 0, which
contradicts the printed wavefunction factor s^sqrt(Lambda); the minus sign is
also what the substitution produces from the radial equation.

Two angular exponents are carried. ``Xi`` is the printed
sqrt(-alpha^4 l(l+1)). ``Xi_nu`` is sqrt(1/4 + xi1 - xi2 + xi3)
= sqrt(1/4 - 4 alpha^4 l(l+1)), the exponent the normal form actually
produces at s = 1; it equals 1/2 for l = 0.
"""

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, GridTooCoarse


@dataclass(frozen=True)
class QuantumState:
    """Radial index n, spin-orbit number kappa, l, j and m_l."""

    n: int
    kappa: int
    l: int
    j: float
    m_l: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise DomainError("n must be nonnegative")
        l, j = kappa_to_lj(self.kappa)
        if (l, j) != (self.l, self.j):
            raise DomainError(f"kappa={self.kappa} implies (l, j) = ({l}, {j})")
        if abs(self.m_l) > self.l:
            raise DomainError(f"|m_l| must not exceed l = {self.l}")

    @classmethod
    def from_nl(cls, n, l, m_l=0, kappa=None):
        """Build a state from (n, l); kappa defaults to -(l+1), i.e. j = l + 1/2."""
        if kappa is None:
            kappa = -(l + 1)
        kl, j = kappa_to_lj(kappa)
        if kl != l:
            raise DomainError(f"kappa={kappa} is incompatible with l={l}")
        return cls(n=n, kappa=kappa, l=l, j=j, m_l=m_l)


def kappa_to_lj(kappa):
    """Map kappa to (l, j): kappa > 0 has j = l - 1/2, kappa < 0 has j = l + 1/2."""
    kappa = int(kappa)
    if kappa == 0:
        raise DomainError("kappa must be nonzero")
    if kappa > 0:
        j = kappa - 0.5
        return int(j + 0.5), j
    j = -kappa - 0.5
    return int(j - 0.5), j


@dataclass(frozen=True)
class SCoefficients:
    """s-space equation coefficients at a given energy (all complex)."""

    Lambda: complex
    Xi: complex
    Aleph: complex
    xi1: complex
    xi2: complex
    xi3: complex
    Xi_nu: complex

    @property
    def sqrt_lambda(self):
        return cmath.sqrt(self.Lambda)

    @property
    def lambda_positive(self):
        return self.Lambda.real > 0 and self.Lambda.imag == 0


def s_coefficients(E, p, l):
    E = float(E)
    a2 = p.alpha**2
    coupling = E + p.M
    eps = E**2 - p.M**2
    ll = l * (l + 1)
    lam = a2 * (2.0 * p.V0 * p.g * coupling - p.b * eps) / p.b
    xi1 = a2 * (2.0 * p.V0 * p.a * coupling - p.b * eps) / p.b
    xi2 = 2.0 * a2 * (2.0 * a2 * p.b * ll + p.V0 * (p.g + p.a) * coupling - p.b * eps) / p.b
    aleph = (-2.0 * a2 * p.V0 * coupling * p.a + p.b * a2 * eps) / p.b
    xi_printed = cmath.sqrt(-(p.alpha**4) * ll)
    xi_nu = cmath.sqrt(0.25 + xi1 - xi2 + lam)
    return SCoefficients(
        Lambda=complex(lam),
        Xi=complex(xi_printed),
        Aleph=complex(aleph),
        xi1=complex(xi1),
        xi2=complex(xi2),
        xi3=complex(lam),
        Xi_nu=complex(xi_nu),
    )


def dlambda_de(E, p):
    """Analytic dLambda/dE = alpha^2 (2 V0 g / b - 2E)."""
    return p.alpha**2 * (2.0 * p.V0 * p.g / p.b - 2.0 * E)


def s_equation_coefficient(s, sc):
    """The zeroth-order coefficient (-xi1 s^2 + xi2 s - xi3) / (s (1-s))^2."""
    s = np.asarray(s)
    return (-sc.xi1 * s**2 + sc.xi2 * s - sc.xi3) / (s * (1.0 - s)) ** 2


def _fd_weights(offsets, order):
    # weights w with sum_j w_j f(x + o_j h) = h^order f^(order)(x) + O(h^len-order)
    offsets = np.asarray(offsets, dtype=float)
    m = len(offsets)
    A = np.vander(offsets, m, increasing=True).T
    rhs = np.zeros(m)
    rhs[order] = float(np.prod(np.arange(1, order + 1)))
    return np.linalg.solve(A, rhs)


def _derivatives(phi, h):
    """4th-order first and second derivatives on a uniform grid."""
    n = len(phi)
    d1 = np.empty_like(phi)
    d2 = np.empty_like(phi)
    c1 = _fd_weights([-2, -1, 0, 1, 2], 1)
    c2 = _fd_weights([-2, -1, 0, 1, 2], 2)
    inner = slice(2, n - 2)
    d1[inner] = sum(c1[k] * phi[k : n - 4 + k] for k in range(5)) / h
    d2[inner] = sum(c2[k] * phi[k : n - 4 + k] for k in range(5)) / h**2
    # one-sided bands: 5 points for phi', 6 points for phi''
    for i in (0, 1):
        off1 = np.arange(5) - i
        off2 = np.arange(6) - i
        d1[i] = _fd_weights(off1, 1) @ phi[:5] / h
        d2[i] = _fd_weights(off2, 2) @ phi[:6] / h**2
        j = n - 1 - i
        d1[j] = _fd_weights(-off1, 1) @ phi[::-1][:5] / h
        d2[j] = _fd_weights(-off2, 2) @ phi[::-1][:6] / h**2
    return d1, d2


def s_equation_residual(phi, E, p, l, grid):
    """Scaled max-norm residual of the s-space equation.

    Parameters
    ----------
    phi : array_like
        Wavefunction samples on ``grid`` (real or complex).
    E : float
        Energy at which the coefficients are formed.
    p : PotentialParams
    l : int
    grid : array_like
        Uniform s-grid strictly inside (0, 1), at least 200 points.

    Returns
    -------
    float
        max_i |R_i| / (|phi''_i| + |phi'_i / s_i| + |q_i phi_i| + eps max|phi|),
        where R is the discrete residual and q the zeroth-order coefficient.
        Zero for phi identically zero.
    """
    s = np.asarray(grid, dtype=float)
    phi = np.asarray(phi)
    if s.ndim != 1 or len(s) < 200:
        raise GridTooCoarse("residual needs at least 200 grid points")
    if phi.shape != s.shape:
        raise ValueError("phi and grid must have the same shape")
    if s[0] <= 0 or s[-1] >= 1:
        raise DomainError("grid must lie strictly inside (0, 1)")
    h = np.diff(s)
    if not np.allclose(h, h[0], rtol=1e-9, atol=0):
        raise ValueError("grid must be uniform")
    scale = np.max(np.abs(phi))
    if scale == 0:
        return 0.0
    h = (s[-1] - s[0]) / (len(s) - 1)
    sc = s_coefficients(E, p, l)
    q = s_equation_coefficient(s, sc)
    d1, d2 = _derivatives(phi.astype(complex), h)
    resid = d2 + d1 / s + q * phi
    denom = np.abs(d2) + np.abs(d1 / s) + np.abs(q * phi) + np.finfo(float).eps * scale
    return float(np.max(np.abs(resid) / denom))
