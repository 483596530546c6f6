"""
Modified Hylleraas potential and its companions.

All functions accept floats or numpy arrays for ``r`` (or ``s``) and use
natural units (hbar = c = 1). With ``x = (r - r_c) / alpha`` and
``u = exp(-x)``, the potential is

    V(r) = (V0 / b) * (g + a u) / (1 + u)

u / (1 + u) is the logistic function of -x, and combinations such as
u / (1 + u)**2 are evaluated through hyperbolic functions of x/2, so that
large |x| neither overflows nor loses precision.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .errors import DomainError

PEKERIS_VARIANTS = ("as_printed", "conventional")


@dataclass(frozen=True)
class PotentialParams:
    """Hylleraas well (V0, a, b, g, alpha, r_c) and fermion mass M."""

    V0: float
    a: float
    b: float
    g: float
    alpha: float
    r_c: float
    M: float

    def __post_init__(self):
        for name in ("V0", "a", "b", "g", "alpha", "r_c", "M"):
            if not np.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if self.b == 0:
            raise DomainError("b must be nonzero")
        if self.alpha <= 0:
            raise DomainError("alpha must be positive")
        if self.r_c < 0:
            raise DomainError("r_c must be nonnegative")
        if self.M <= 0:
            raise DomainError("M must be positive")

    @property
    def v_inf(self):
        """Asymptotic value V0 g / b of the potential."""
        return self.V0 * self.g / self.b

    def replace(self, **changes):
        fields = {k: getattr(self, k) for k in ("V0", "a", "b", "g", "alpha", "r_c", "M")}
        fields.update(changes)
        return PotentialParams(**fields)


@dataclass(frozen=True)
class NCParams:
    """Noncommutativity strength theta and the magnetic quantum number m_l.

    theta . L is taken as theta * m_l (theta along the quantization axis).
    """

    theta: float = 0.0
    m_l: int = 0

    def __post_init__(self):
        if not np.isfinite(self.theta) or self.theta < 0:
            raise DomainError("theta must be finite and nonnegative")
        if int(self.m_l) != self.m_l:
            raise DomainError("m_l must be an integer")

    @property
    def theta_dot_l(self):
        return self.theta * self.m_l

    def check_state(self, l):
        if abs(self.m_l) > l:
            raise DomainError(f"|m_l| = {abs(self.m_l)} exceeds l = {l}")


@dataclass(frozen=True)
class FieldParams:
    """Weak radial field E = k q / r^2 acting on a particle of charge e."""

    e_charge: float = 0.0
    k_const: float = 0.0
    q_source: float = 0.0

    def __post_init__(self):
        for name in ("e_charge", "k_const", "q_source"):
            if not np.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")

    @property
    def coupling(self):
        """The product e k q."""
        return self.e_charge * self.k_const * self.q_source


def _x(r, p):
    return (np.asarray(r, dtype=float) - p.r_c) / p.alpha


def _sech2_quarter(x):
    # u / (1 + u)^2 with u = exp(-x)
    return 0.25 / np.cosh(0.5 * x) ** 2


def _require_positive_r(r, what):
    if np.any(np.asarray(r) <= 0):
        raise DomainError(f"{what} requires r > 0")


def v_hylleraas(r, p):
    x = _x(r, p)
    frac = expit(-x)  # u / (1 + u), accurate in both tails
    return (p.V0 / p.b) * (p.g + (p.a - p.g) * frac)


def dv_dr(r, p):
    """Exact radial derivative V0 (g - a) u / (b alpha (1 + u)^2)."""
    x = _x(r, p)
    return p.V0 * (p.g - p.a) * _sech2_quarter(x) / (p.b * p.alpha)


def v_nc_term(r, p, nc):
    """First-order Bopp-shift correction -(theta m_l / 2r) dV/dr."""
    _require_positive_r(r, "v_nc_term")
    r = np.asarray(r, dtype=float)
    return -(nc.theta_dot_l / (2.0 * r)) * dv_dr(r, p)


def pekeris_inv_r2(r, p, variant="as_printed"):
    """Exponential stand-in for 1/r^2.

    ``as_printed``: 4 alpha^2 u / (1 + u)^2. Its prefactor carries dimension
    length^2 rather than 1/length^2; kept verbatim because the closed-form
    spectrum is built on it.

    ``conventional``: u / (alpha^2 (1 - u)^2), the Greene-Aldrich form about
    r_c. Singular at r = r_c.
    """
    x = _x(r, p)
    if variant == "as_printed":
        return 4.0 * p.alpha**2 * _sech2_quarter(x)
    if variant == "conventional":
        with np.errstate(divide="ignore"):
            return 0.25 / (p.alpha**2 * np.sinh(0.5 * x) ** 2)
    raise ValueError(f"unknown pekeris variant {variant!r}; expected one of {PEKERIS_VARIANTS}")


def v_efield(r, f):
    """Coulomb piece -e k q / r of the weak-field potential."""
    _require_positive_r(r, "v_efield")
    return -f.coupling / np.asarray(r, dtype=float)


def v_efield_nc(r, f, nc):
    """Noncommutative piece -e k q theta m_l / (2 r^3)."""
    _require_positive_r(r, "v_efield_nc")
    r = np.asarray(r, dtype=float)
    return -f.coupling * nc.theta_dot_l / (2.0 * r**3)


def to_s(r, p):
    """s = exp(-(r - r_c)/alpha), mapping [r_c, inf) onto (0, 1]."""
    r = np.asarray(r, dtype=float)
    if np.any(r < p.r_c):
        raise DomainError("to_s requires r >= r_c")
    return np.exp(-(r - p.r_c) / p.alpha)


def to_r(s, p):
    s = np.asarray(s, dtype=float)
    if np.any((s <= 0) | (s > 1)):
        raise DomainError("to_r requires s in (0, 1]")
    return p.r_c - p.alpha * np.log(s)


# The closed-form spectrum solves the s-space equation with (1 - s) factors on
# s in (0, 1). Pulled back to r with s = exp(-(r - r_c)/alpha) that equation is
# -phi'' + [2(E+M) V~(r) + l(l+1) C~(r)] phi = (E^2 - M^2) phi with the two
# functions below; they are the Hylleraas forms with u replaced by -u.

def v_s_image(r, p):
    """(V0/b) (g - a u) / (1 - u): the potential the closed form actually solves."""
    x = _x(r, p)
    if np.any(x <= 0):
        raise DomainError("v_s_image requires r > r_c")
    # u / (1 - u) = 1 / (exp(x) - 1)
    frac = 1.0 / np.expm1(x)
    return (p.V0 / p.b) * (p.g + (p.g - p.a) * frac)


def centrifugal_s_image(r, p):
    """-4 alpha^2 u / (1 - u)^2, the s-image of the as-printed Pekeris term."""
    x = _x(r, p)
    if np.any(x <= 0):
        raise DomainError("centrifugal_s_image requires r > r_c")
    return -p.alpha**2 / np.sinh(0.5 * x) ** 2
