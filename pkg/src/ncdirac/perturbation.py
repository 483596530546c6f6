"""
First-order energy corrections from the noncommutative terms and a weak field.

The radial operator's spectral parameter is eps = E^2 - M^2, so a first-order
shift of the effective potential by dU gives d(eps) = <dU> and
dE = d(eps) / (2 E). Quadrature results report dE as primary and keep the
raw d(eps).

Perturbing operators (theta . L -> theta m_l):

    dU_theta(r) = l(l+1) theta m_l P(r)^2 + 2(E+M) v_nc_term(r)
    dU_E(r)     = 2(E+M) [-e k q / r - e k q theta m_l / (2 r^3)]

where P is the Pekeris stand-in for 1/r^2, so P^2 stands in for 1/r^4.

Each expectation value is assembled from four unit integrals (one per term)
so that the result is exactly linear in theta m_l and in e k q.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import potential as pot
from .errors import PoleError
from .oracle import quad_integrate
from .specfun import gamma_ratio, hyp3f2_unit_terminating

TERM_NAMES = ("centrifugal_theta", "potential_theta", "coulomb", "coulomb_theta")


def perturbing_operator_theta(r, bs, p, nc, pekeris_variant="as_printed"):
    l = bs.state.l
    cent = l * (l + 1) * nc.theta_dot_l * pot.pekeris_inv_r2(r, p, pekeris_variant) ** 2
    return cent + 2.0 * (bs.energy + p.M) * pot.v_nc_term(r, p, nc)


def perturbing_operator_efield(r, bs, p, nc, f):
    return 2.0 * (bs.energy + p.M) * (pot.v_efield(r, f) + pot.v_efield_nc(r, f, nc))


@dataclass(frozen=True)
class UnitIntegrals:
    """<phi| . |phi> of the four operator shapes with unit couplings.

    centrifugal = <l(l+1) P^2>, potential = <2(E+M) (-dV/dr / 2r)>,
    coulomb = <2(E+M) (-1/r)>, coulomb_theta = <2(E+M) (-1/(2 r^3))>.
    """

    centrifugal: float
    potential: float
    coulomb: float
    coulomb_theta: float


def unit_integrals(bs, p, pekeris_variant="as_printed", tol=1e-12, rel_tol=1e-10):
    l = bs.state.l
    coupling = 2.0 * (bs.energy + p.M)
    dens = bs.density_r
    dom = (p.r_c, p.r_c + bs.span * p.alpha)

    def q(shape):
        return quad_integrate(lambda r: dens(r) * shape(r), dom, tol=tol, rel_tol=rel_tol)

    cent = 0.0
    if l > 0:
        cent = l * (l + 1) * q(lambda r: pot.pekeris_inv_r2(r, p, pekeris_variant) ** 2)
    return UnitIntegrals(
        centrifugal=cent,
        potential=coupling * q(lambda r: -pot.dv_dr(r, p) / (2.0 * r)),
        coulomb=coupling * q(lambda r: -1.0 / r),
        coulomb_theta=coupling * q(lambda r: -0.5 / r**3),
    )


@dataclass
class QuadCorrection:
    """Quadrature correction with its per-term breakdown (all in d(eps) units)."""

    d_eps_terms: dict
    energy: float

    @property
    def d_eps(self):
        return math.fsum(self.d_eps_terms.values())

    @property
    def dE(self):
        return self.d_eps / (2.0 * self.energy)

    @property
    def dE_terms(self):
        return {k: v / (2.0 * self.energy) for k, v in self.d_eps_terms.items()}


def _combine(units, bs, nc, f):
    tl = nc.theta_dot_l
    ekq = 0.0 if f is None else f.coupling
    terms = {
        "centrifugal_theta": tl * units.centrifugal,
        "potential_theta": tl * units.potential,
        "coulomb": ekq * units.coulomb,
        "coulomb_theta": ekq * tl * units.coulomb_theta,
    }
    return QuadCorrection(terms, bs.energy)


def delta_e_theta_quad(bs, p, nc, pekeris_variant="as_printed", units=None):
    """First-order theta correction dE = <dU_theta> / (2E) by adaptive quadrature.

    Returns a QuadCorrection; ``.dE`` is the converted shift and ``.d_eps``
    the raw expectation value.
    """
    nc.check_state(bs.state.l)
    units = units or unit_integrals(bs, p, pekeris_variant)
    return _combine(units, bs, nc, None)


def delta_e_efield_quad(bs, p, nc, f, pekeris_variant="as_printed", units=None):
    """Same as delta_e_theta_quad for dU_theta + dU_E."""
    nc.check_state(bs.state.l)
    units = units or unit_integrals(bs, p, pekeris_variant)
    return _combine(units, bs, nc, f)


# Closed forms, transcribed term by term. A term is skipped (zero) only when
# its coupling constant vanishes: theta for the theta terms, e k q for the
# field terms, and l(l+1) for term 1. Otherwise its Gamma factors are
# evaluated even if theta m_l = 0, so the printed pole structure is reported
# as PoleError("term k: ...").

def _closed_terms(bs, p, theta, m_l, ekq):
    n = bs.state.n
    l = bs.state.l
    sq = bs.scoef.sqrt_lambda
    xi = bs.scoef.Xi
    N2 = bs.Nprime**2
    a = p.alpha
    em = bs.energy + p.M
    tl = theta * m_l
    upper = n + 2 * sq + 2 * xi + 1
    lower = 1 + 2 * sq

    def term(idx, fn):
        try:
            return complex(fn())
        except PoleError as exc:
            raise PoleError(f"term {idx}: {exc}") from exc

    terms = dict.fromkeys(TERM_NAMES, 0j)
    if theta != 0 and l > 0:
        terms["centrifugal_theta"] = term(1, lambda: (
            -16.0 * N2 * a**7 * l * (l + 1) * tl
            * hyp3f2_unit_terminating(n, upper, 2 * xi - 2, lower, 2 * xi - 2 + 2 * sq)
            * gamma_ratio((2 * sq, 2 * xi - 2), (2 * sq + 2 * xi - 2,))
        ))
    if theta != 0:
        terms["potential_theta"] = term(2, lambda: (
            -2j * N2 * a**3 * em * p.V0 * (p.g - p.a) * tl / p.b
            * hyp3f2_unit_terminating(n, upper, 2 * xi - 1, lower, 2 * xi + 2 * sq - 1.5)
            * gamma_ratio((2 * sq - 0.5, 2 * xi - 1), (2 * sq + 2 * xi - 1.5,))
        ))
    if ekq != 0:
        terms["coulomb"] = term(3, lambda: (
            4j * ekq * a**4 * em * N2
            * gamma_ratio((2 * sq - 1.5, 2 * xi + 1), (2 * sq + 2 * xi - 0.5,))
            * hyp3f2_unit_terminating(n, upper, 2 * xi + 1, lower, 2 * xi + 2 * sq - 0.5)
        ))
    if ekq != 0 and theta != 0:
        terms["coulomb_theta"] = term(4, lambda: (
            -8j * a**6 * ekq * tl * em * N2
            * gamma_ratio((2 * sq - 0.5, 2 * xi - 1), (2 * sq + 2 * xi - 1.5,))
            * hyp3f2_unit_terminating(n, upper, 2 * xi - 1, lower, 2 * xi + 2 * sq - 1.5)
        ))
    return terms


def delta_e_theta_closed(bs, p, nc, breakdown=False):
    """Printed closed-form theta correction (complex).

    Uses the printed Xi and the state's Nprime. Raises PoleError("term k: ...")
    when a Gamma factor of a contributing term sits on a pole; for l = 0 that
    is term 2, through Gamma(2 Xi - 1) = Gamma(-1).
    """
    full = _closed_terms(bs, p, nc.theta, nc.m_l, 0.0)
    terms = {k: full[k] for k in ("centrifugal_theta", "potential_theta")}
    total = sum(terms.values(), 0j)
    return (total, terms) if breakdown else total


def delta_e_efield_closed(bs, p, nc, f, breakdown=False):
    """Printed four-term closed form for theta plus weak field (complex)."""
    terms = _closed_terms(bs, p, nc.theta, nc.m_l, f.coupling)
    total = sum(terms.values(), 0j)
    return (total, terms) if breakdown else total


@dataclass
class CorrectionReport:
    state: object
    theta: float
    m_l: int
    field: pot.FieldParams
    dE_closed: complex
    dE_quad: float
    d_eps_quad: float
    discrepancy: float
    terms_quad: dict
    terms_closed: dict = field(default_factory=dict)
    closed_error: str = ""


def correction_report(bs, p, nc, f, pekeris_variant="as_printed", units=None):
    """Closed form and quadrature side by side; closed-form failures are recorded."""
    units = units or unit_integrals(bs, p, pekeris_variant)
    quad = delta_e_efield_quad(bs, p, nc, f, pekeris_variant, units=units)
    closed = None
    terms_closed = {}
    err = ""
    try:
        closed, terms_closed = delta_e_efield_closed(bs, p, nc, f, breakdown=True)
    except (PoleError, ArithmeticError) as exc:
        err = f"{type(exc).__name__}: {exc}"
    disc = float("nan") if closed is None else abs(closed.real - quad.dE)
    return CorrectionReport(
        state=bs.state,
        theta=nc.theta,
        m_l=nc.m_l,
        field=f,
        dE_closed=closed,
        dE_quad=quad.dE,
        d_eps_quad=quad.d_eps,
        discrepancy=disc,
        terms_quad=quad.dE_terms,
        terms_closed=terms_closed,
        closed_error=err,
    )


def split_spectrum(bs, p, theta, f, pekeris_variant="as_printed"):
    """E0 + dE (theta and field) for every m_l in -l..l.

    Returns a list of (m_l, energy, QuadCorrection).
    """
    units = unit_integrals(bs, p, pekeris_variant)
    rows = []
    for m in range(-bs.state.l, bs.state.l + 1):
        corr = delta_e_efield_quad(bs, p, pot.NCParams(theta, m), f, units=units)
        rows.append((m, bs.energy + corr.dE, corr))
    return rows


def relative_size(corr, bs):
    """|dE| / |E0|."""
    return abs(corr.dE) / abs(bs.energy) if bs.energy != 0 else float(np.inf)
