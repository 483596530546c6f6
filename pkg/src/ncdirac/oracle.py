"""
Independent numerical ground truth.

* ``quad_integrate``: adaptive Gauss-Kronrod (7/15) quadrature.
* ``exact_poly_beta_integral``: exact s-integrals of polynomial times
  s^(xi-1) (1-s)^(sigma-1) as finite Beta sums.
* ``grid_eigensolve`` / ``self_consistent_energy``: finite-difference
  eigensolver for -phi'' + W(r; E) phi = (E^2 - M^2) phi with Dirichlet walls,
  the energy dependence of W resolved self-consistently.
* ``jacobi_recurrence``: Jacobi polynomials by the three-term recurrence.
"""

import heapq
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal
from scipy.optimize import brentq

from . import potential as pot
from .errors import (
    ConvergenceFailure,
    DivergentIntegral,
    NoBoundState,
    QuadratureFailure,
)
from .specfun import beta

# Kronrod 15-point nodes (nonnegative half) with Kronrod and embedded Gauss weights
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_WK = np.concatenate([_WGK[:-1], _WGK[::-1]])
# Gauss nodes are the odd-indexed Kronrod nodes
_WG15 = np.zeros(15)
_WG15[[1, 3, 5]] = _WG[:3]
_WG15[7] = _WG[3]
_WG15[[9, 11, 13]] = _WG[2::-1]


def _gk15(f, lo, hi):
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    vals = np.asarray(f(mid + half * _NODES), dtype=float)
    if vals.shape != (15,):
        vals = np.broadcast_to(vals, (15,))
    if not np.all(np.isfinite(vals)):
        raise QuadratureFailure(f"integrand not finite on [{lo}, {hi}]")
    kron = half * float(vals @ _WK)
    gauss = half * float(vals @ _WG15)
    return kron, abs(kron - gauss)


def quad_integrate(f, domain, tol=1e-12, rel_tol=1e-10, panels=8, max_intervals=5000):
    """Adaptive Gauss-Kronrod quadrature of a vectorized integrand.

    Parameters
    ----------
    f : callable
        Maps a 1-d array of abscissae to integrand values.
    domain : (float, float)
        Finite integration limits.
    tol, rel_tol : float
        Stop once the summed error estimate is below max(tol, rel_tol * |I|).
    panels : int
        Number of equal panels to start from.

    Raises
    ------
    QuadratureFailure
        If the tolerance is not met within ``max_intervals`` subintervals.
    """
    lo, hi = map(float, domain)
    if lo == hi:
        return 0.0
    edges = np.linspace(lo, hi, panels + 1)
    heap = []
    total = 0.0
    err = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        val, e = _gk15(f, a, b)
        heapq.heappush(heap, (-e, a, b, val))
        total += val
        err += e
    while err > max(tol, rel_tol * abs(total)):
        if len(heap) >= max_intervals:
            raise QuadratureFailure(
                f"error estimate {err:.3e} above tolerance after {len(heap)} intervals"
            )
        neg_e, a, b, val = heapq.heappop(heap)
        m = 0.5 * (a + b)
        v1, e1 = _gk15(f, a, m)
        v2, e2 = _gk15(f, m, b)
        heapq.heappush(heap, (-e1, a, m, v1))
        heapq.heappush(heap, (-e2, m, b, v2))
        total += v1 + v2 - val
        err += e1 + e2 + neg_e
    # resum in a fixed order so the result does not depend on heap history
    return math.fsum(item[3] for item in sorted(heap, key=lambda t: t[1]))


def poly_multiply(p, q):
    """Coefficient list of the product of two polynomials (lowest order first)."""
    return list(np.convolve(np.asarray(p, dtype=complex), np.asarray(q, dtype=complex)))


def exact_poly_beta_integral(xi, sigma, poly):
    """Exact int_0^1 s^(xi-1) (1-s)^(sigma-1) sum_k c_k s^k ds = sum_k c_k B(xi+k, sigma)."""
    xi = complex(xi)
    sigma = complex(sigma)
    if xi.real <= 0 or sigma.real <= 0:
        raise DivergentIntegral(f"need Re xi > 0 and Re sigma > 0, got {xi}, {sigma}")
    return sum((complex(c) * beta(xi + k, sigma) for k, c in enumerate(poly) if c != 0), 0j)


def jacobi_recurrence(n, a, b, x):
    """P_n^(a,b)(x) by the classical three-term recurrence."""
    p0 = 1.0 + 0.0 * x
    if n == 0:
        return p0
    p1 = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0
    for k in range(2, n + 1):
        s = 2 * k + a + b
        c1 = 2 * k * (k + a + b) * (s - 2)
        c2 = (s - 1) * (s * (s - 2) * x + a * a - b * b)
        c3 = 2 * (k + a - 1) * (k + b - 1) * s
        p0, p1 = p1, (c2 * p1 - c3 * p0) / c1
    return p1


@dataclass(frozen=True)
class RadialGrid:
    """Uniform grid of ``n_points`` interior nodes between Dirichlet walls."""

    r_min: float
    r_max: float
    n_points: int = 6000

    def __post_init__(self):
        if self.r_max <= self.r_min:
            raise ValueError("r_max must exceed r_min")
        if self.n_points < 3:
            raise ValueError("need at least 3 interior points")

    @classmethod
    def for_params(cls, p, n_points=6000, span=60.0):
        return cls(p.r_c, p.r_c + span * p.alpha, n_points)

    @property
    def h(self):
        return (self.r_max - self.r_min) / (self.n_points + 1)

    @property
    def r(self):
        return self.r_min + self.h * np.arange(1, self.n_points + 1)

    def refined(self):
        """Grid with half the spacing and the same walls."""
        return RadialGrid(self.r_min, self.r_max, 2 * self.n_points + 1)


def _fix_sign(vec):
    k = int(np.argmax(np.abs(vec) > 1e-8 * np.max(np.abs(vec))))
    return -vec if vec[k] < 0 else vec


def grid_eigensolve(W, grid, count=1):
    """Lowest ``count`` eigenpairs of -d^2/dr^2 + W on ``grid``.

    Second-order central differences; eigenvectors normalized so that
    h * sum(phi^2) = 1, with the first significant component positive.
    """
    W = np.asarray(W, dtype=float)
    if W.shape != (grid.n_points,) or not np.all(np.isfinite(W)):
        raise ValueError("W must be finite and sampled on every grid node")
    h = grid.h
    diag = 2.0 / h**2 + W
    off = np.full(grid.n_points - 1, -1.0 / h**2)
    try:
        vals, vecs = eigh_tridiagonal(diag, off, select="i", select_range=(0, count - 1))
    except LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    vecs = vecs / math.sqrt(h)
    return [(float(vals[k]), _fix_sign(vecs[:, k])) for k in range(count)]


def count_nodes(phi, rel=1e-7):
    """Sign changes of phi, ignoring samples below rel * max|phi|."""
    phi = np.asarray(phi, dtype=float)
    sig = phi[np.abs(phi) > rel * np.max(np.abs(phi))]
    return int(np.count_nonzero(np.diff(np.sign(sig)) != 0))


CENTRIFUGAL_MODES = ("exact", "pekeris")
POTENTIAL_FORMS = ("hylleraas", "s_image")


def effective_operator(p, l, grid, centrifugal="exact", potential_form="hylleraas",
                       pekeris_variant="as_printed"):
    """Return (C, V) sampled on the grid so that W(E) = l(l+1) C + 2(E+M) V.

    ``potential_form='s_image'`` selects the pull-back of the closed-form
    s-space equation; its centrifugal part is fixed (``centrifugal`` must be
    'pekeris').
    """
    r = grid.r
    if potential_form == "hylleraas":
        V = pot.v_hylleraas(r, p)
        if centrifugal == "exact":
            C = 1.0 / r**2
        elif centrifugal == "pekeris":
            C = pot.pekeris_inv_r2(r, p, pekeris_variant)
        else:
            raise ValueError(f"centrifugal must be one of {CENTRIFUGAL_MODES}")
    elif potential_form == "s_image":
        if centrifugal != "pekeris":
            raise ValueError("the s_image form carries its own (Pekeris-image) centrifugal term")
        V = pot.v_s_image(r, p)
        C = pot.centrifugal_s_image(r, p)
    else:
        raise ValueError(f"potential_form must be one of {POTENTIAL_FORMS}")
    return C, V


@dataclass
class OracleResult:
    energy: float
    wavefunction: np.ndarray
    node_count: int
    iterations: int
    converged: bool
    grid: RadialGrid
    eigenvalue: float = float("nan")
    candidates: list = field(default_factory=list)


def _window(p):
    return -p.M, p.M + 2.0 * min(0.0, p.v_inf)


def self_consistent_energy(n, l, p, grid=None, centrifugal="exact",
                           potential_form="hylleraas", pekeris_variant="as_printed",
                           method="bracket", eta=0.5, max_iter=500, scan_points=81):
    """Bound-state energy of the energy-dependent radial operator.

    Solves lambda_n(E) = E^2 - M^2, where lambda_n(E) is the n-th eigenvalue
    of -phi'' + [l(l+1) C(r) + 2(E+M) V(r)] phi on ``grid``.

    ``method='bracket'`` scans F(E) = lambda_n(E) - (E^2 - M^2) over the
    bound-state window and refines the sign change with Brent's method.
    ``method='fixed_point'`` runs the damped iteration
    E <- E + eta (sign * sqrt(lambda_n(E) + M^2) - E), seeded from the scan.
    If several self-consistent energies exist the lowest is returned and all
    are listed in ``candidates``.
    """
    if grid is None:
        grid = RadialGrid.for_params(p)
    C, V = effective_operator(p, l, grid, centrifugal, potential_form, pekeris_variant)
    base = l * (l + 1) * C
    M = p.M
    calls = [0]

    def lam(E):
        calls[0] += 1
        return grid_eigensolve(base + 2.0 * (E + M) * V, grid, n + 1)[n]

    def F(E):
        return lam(E)[0] - (E * E - M * M)

    lo, hi = _window(p)
    eps = 1e-6 * M
    Es = np.linspace(lo + eps, hi - eps, scan_points)
    Fs = np.array([F(E) for E in Es])
    brackets = [(Es[i], Es[i + 1]) for i in range(len(Es) - 1) if Fs[i] * Fs[i + 1] < 0]
    if not brackets:
        raise NoBoundState(
            f"no self-consistent energy for n={n}, l={l} in ({lo:g}, {hi:g})"
        )
    tol = 1e-12 * M
    candidates = [brentq(F, a, b, xtol=tol, rtol=4 * np.finfo(float).eps) for a, b in brackets]
    iterations = calls[0]

    if method == "bracket":
        E = candidates[0]
    elif method == "fixed_point":
        E = 0.5 * sum(brackets[0])
        sign = 1.0 if E >= 0 else -1.0
        for it in range(1, max_iter + 1):
            val = lam(E)[0] + M * M
            if val < 0:
                raise ConvergenceFailure(f"lambda_n + M^2 < 0 at step {it}: the iteration diverged")
            E_new = E + eta * (sign * math.sqrt(val) - E)
            if not (lo < E_new < hi):
                raise ConvergenceFailure(f"iterate left the window at step {it}: E={E_new:g}")
            if abs(E_new - E) < 1e-10 * M:
                E = E_new
                break
            E = E_new
        else:
            raise ConvergenceFailure(f"damped fixed point did not converge in {max_iter} steps")
        iterations = calls[0]
    else:
        raise ValueError("method must be 'bracket' or 'fixed_point'")

    val, vec = lam(E)
    return OracleResult(
        energy=float(E),
        wavefunction=vec,
        node_count=count_nodes(vec),
        iterations=iterations,
        converged=True,
        grid=grid,
        eigenvalue=val,
        candidates=[float(c) for c in candidates],
    )


def richardson_energy(n, l, p, grid=None, **kwargs):
    """Second-order Richardson extrapolation over grid spacings h and h/2.

    Returns (E_extrapolated, E_coarse, E_fine).
    """
    if grid is None:
        grid = RadialGrid.for_params(p)
    coarse = self_consistent_energy(n, l, p, grid, **kwargs).energy
    fine = self_consistent_energy(n, l, p, grid.refined(), **kwargs).energy
    return fine + (fine - coarse) / 3.0, coarse, fine
