"""
Invariant suites for every module plus the diagnostic sections of the report.

Each suite returns a list of Check records. A check is "pass", "fail" or
"skipped" (the quantity does not exist for the configured well, e.g. no
closed-form root). Diagnostics carry numbers only and never fail.
"""

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import potential as pot
from . import specfun
from .errors import NCDiracError
from .oracle import (
    RadialGrid,
    exact_poly_beta_integral,
    grid_eigensolve,
    jacobi_recurrence,
    quad_integrate,
    richardson_energy,
    self_consistent_energy,
)
from .perturbation import (
    correction_report,
    delta_e_efield_quad,
    delta_e_theta_quad,
    split_spectrum,
    unit_integrals,
)
from .radial import dlambda_de, s_coefficients, s_equation_residual
from .spectrum import (
    build_wavefunction,
    interior_nodes,
    scan_residual,
    sign_changes,
    solve_energy,
)

REPORT_SCHEMA = "ncdirac.validation/1"
SPECFUN_TOL = 1e-10
RESIDUAL_TOL = 1e-6
NORM_TOL = 1e-8
ORACLE_TOL = 1e-4
LINEAR_TOL = 1e-12


@dataclass
class Check:
    module: str
    name: str
    status: str
    value: float = None
    tolerance: float = None
    detail: str = ""


def _check(module, name, value, tol, detail=""):
    ok = value is not None and np.isfinite(value) and value <= tol
    return Check(module, name, "pass" if ok else "fail", _num(value), tol, detail)


def _skip(module, name, detail):
    return Check(module, name, "skipped", None, None, detail)


def _num(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else repr(x)


def _err(exc):
    return f"{type(exc).__name__}: {exc}"


# -- specfun ---------------------------------------------------------------

def specfun_suite(rng):
    out = []
    xs = rng.uniform(0.1, 20.0, 200)
    zs = rng.uniform(0.1, 10.0, 100) + 1j * rng.uniform(-5.0, 5.0, 100)
    worst = 0.0
    for z in list(xs) + list(zs):
        lhs = specfun.gamma(z + 1)
        rhs = z * specfun.gamma(z)
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
    out.append(_check("specfun", "gamma_recurrence", worst, SPECFUN_TOL,
                      "Gamma(z+1) = z Gamma(z), 200 real and 100 complex points"))

    worst = 0.0
    for z in rng.uniform(-4.9, 4.9, 100):
        if abs(z - round(z)) < 1e-3:
            continue
        lhs = specfun.gamma(z) * specfun.gamma(1 - z)
        rhs = math.pi / math.sin(math.pi * z)
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
    out.append(_check("specfun", "gamma_reflection", worst, SPECFUN_TOL,
                      "Gamma(z) Gamma(1-z) = pi / sin(pi z)"))

    half = abs(specfun.gamma(0.5) - math.sqrt(math.pi)) / math.sqrt(math.pi)
    out.append(_check("specfun", "gamma_half", half, SPECFUN_TOL, "Gamma(1/2) = sqrt(pi)"))

    worst = 0.0
    for n in range(0, 11):
        b, c = rng.uniform(-3.0, 3.0), rng.uniform(0.5, 6.0)
        lhs = specfun.hyp2f1_terminating(n, b, c, 1.0)
        rhs = specfun.pochhammer(c - b, n) / specfun.pochhammer(c, n)
        worst = max(worst, abs(lhs - rhs) / max(abs(rhs), 1e-300))
    out.append(_check("specfun", "chu_vandermonde", worst, SPECFUN_TOL,
                      "2F1(-n, b; c; 1) = (c-b)_n / (c)_n, n <= 10"))

    worst = 0.0
    for n in range(0, 9):
        a, b = rng.uniform(-0.9, 3.0, 2)
        for x in rng.uniform(-1.0, 1.0, 5):
            lhs = specfun.jacobi_p(n, a, b, (1.0 - x) / 2.0)
            rhs = jacobi_recurrence(n, a, b, x)
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
    out.append(_check("specfun", "jacobi_recurrence", worst, SPECFUN_TOL,
                      "Gauss-series Jacobi polynomial vs three-term recurrence, n <= 8"))

    out.append(_check("specfun", "euler_3f2_identity", euler_identity_error(rng), 1e-12,
                      "int s^(xi-1)(1-s)^(sigma-1) 2F1 ds = B(xi, sigma) 3F2(...; 1), n <= 6, "
                      "scaled by the sum of absolute Beta terms"))
    return out


def euler_identity_error(rng, n_max=6, samples=4):
    """Worst |lhs - rhs| / sum_k |c_k B(xi+k, sigma)| over random parameters.

    The Beta sum alternates in sign, so the error is scaled by the sum of
    absolute terms (its condition number) rather than by the result.
    """
    worst = 0.0
    for n in range(n_max + 1):
        for _ in range(samples):
            xi, sigma = rng.uniform(0.5, 4.0, 2)
            b2, c = rng.uniform(0.5, 5.0), rng.uniform(1.0, 5.0)
            coeffs = specfun.hyp2f1_coefficients(n, b2, c)
            lhs = exact_poly_beta_integral(xi, sigma, coeffs)
            rhs = specfun.beta(xi, sigma) * specfun.hyp3f2_unit_terminating(
                n, b2, xi, c, xi + sigma)
            scale = math.fsum(abs(complex(ck) * specfun.beta(xi + k, sigma))
                              for k, ck in enumerate(coeffs))
            worst = max(worst, abs(lhs - rhs) / scale)
    return worst


# -- potential ---------------------------------------------------------------

def potential_suite(p, theta, rng):
    out = []
    grid = RadialGrid.for_params(p, n_points=2000).r
    worst = 0.0
    for m in (-2, -1, 1, 2):
        nc = pot.NCParams(theta if theta > 0 else 1e-3, m)
        lhs = pot.v_nc_term(grid, p, nc)
        rhs = -(nc.theta * m / (2.0 * grid)) * pot.dv_dr(grid, p)
        scale = np.max(np.abs(rhs))
        if scale > 0:
            worst = max(worst, np.max(np.abs(lhs - rhs)) / scale)
    out.append(_check("potential", "bopp_identity", worst, 8 * np.finfo(float).eps,
                      "v_nc_term = -(theta m_l / 2r) dv_dr"))

    h = 1e-4 * p.alpha
    fd = (pot.v_hylleraas(grid + h, p) - pot.v_hylleraas(grid - h, p)) / (2 * h)
    an = pot.dv_dr(grid, p)
    scale = np.max(np.abs(an))
    val = np.max(np.abs(fd - an)) / scale if scale > 0 else 0.0
    out.append(_check("potential", "dv_dr_central_difference", val, 1e-6,
                      "central difference, h = 1e-4 alpha, relative to max|dV/dr|"))

    v = pot.v_hylleraas(grid, p)
    sign = np.sign(p.V0 * (p.g - p.a) / p.b)
    steps = np.diff(v) * sign
    out.append(_check("potential", "monotone", float(max(0.0, -np.min(steps))), 0.0,
                      "V is monotone with the sign of V0 (g - a) / b"))
    return out


# -- radial ------------------------------------------------------------------

def radial_suite(p, rng):
    out = []
    worst = 0.0
    for E in rng.uniform(-0.9 * p.M, 0.9 * p.M, 20):
        sc = s_coefficients(E, p, 0)
        worst = max(worst, abs(sc.Xi_nu - 0.5), abs(sc.Xi))
    out.append(_check("radial", "l0_angular_exponents", worst, 1e-14,
                      "Xi_nu = 1/2 and printed Xi = 0 for l = 0"))
    worst = 0.0
    for E in rng.uniform(-0.9 * p.M, 0.9 * p.M, 20):
        h = 1e-6
        fd = (s_coefficients(E + h, p, 0).Lambda - s_coefficients(E - h, p, 0).Lambda) / (2 * h)
        worst = max(worst, abs(fd - dlambda_de(E, p)) / max(1.0, abs(dlambda_de(E, p))))
    out.append(_check("radial", "dlambda_de", worst, 1e-8, "analytic vs central difference"))
    return out


# -- spectrum and oracle -----------------------------------------------------

def _unique_nl(states):
    seen = []
    for n, l, _ in states:
        if (n, l) not in seen:
            seen.append((n, l))
    return seen


def solve_states(cfg):
    """{(n, l): BoundState or error string} for the configured states."""
    out = {}
    for n, l in _unique_nl(cfg.states):
        try:
            E = solve_energy(n, l, cfg.potential, condition=cfg.solver.condition,
                             bracket=cfg.solver.bracket, panels=cfg.solver.scan_panels,
                             tol=cfg.solver.tol)
            out[(n, l)] = build_wavefunction(E, n, l, cfg.potential,
                                             xi_mode=cfg.solver.xi_mode,
                                             condition_used=cfg.solver.condition,
                                             span=cfg.oracle.span)
        except NCDiracError as exc:
            out[(n, l)] = _err(exc)
    return out


def _oracle_kwargs(cfg):
    o = cfg.oracle
    return {"centrifugal": o.centrifugal, "potential_form": o.potential_form,
            "pekeris_variant": o.pekeris_variant}


def spectrum_suite(cfg, solved):
    out = []
    p = cfg.potential
    for (n, l), bs in solved.items():
        tag = f"n={n},l={l}"
        if isinstance(bs, str):
            for name in ("nodes", "normalization", "s_residual"):
                out.append(_skip("spectrum", f"{name}[{tag}]", bs))
            continue
        out.append(_check("spectrum", f"nodes[{tag}]", abs(interior_nodes(bs) - n), 0,
                          "interior sign changes of phi equal n"))
        out.append(_check("spectrum", f"normalization[{tag}]", abs(bs.norm_quad - 1.0),
                          NORM_TOL, "adaptive quadrature of |phi(r)|^2"))
        s = np.linspace(0.05, 0.95, 2000)
        res = s_equation_residual(bs.phi_s(s), bs.energy, p, l, s)
        out.append(_check("spectrum", f"s_residual[{tag}]", res, RESIDUAL_TOL,
                          "scaled residual of the s-space equation, 2000 points"))

    ground = solved.get((0, 0))
    if ground is not None and not isinstance(ground, str):
        try:
            deeper = solve_energy(0, 0, p.replace(V0=1.1 * p.V0), condition=cfg.solver.condition,
                                  panels=cfg.solver.scan_panels)
            out.append(_check("spectrum", "deeper_well_lowers_E", max(0.0, deeper - ground.energy),
                              0.0, "V0 -> 1.1 V0 lowers the ground state"))
        except NCDiracError as exc:
            out.append(_skip("spectrum", "deeper_well_lowers_E", _err(exc)))
    return out


def oracle_suite(cfg, solved):
    out = []
    p = cfg.potential
    # free particle in a box: eigenvalues (k pi / L)^2 at second order
    box = RadialGrid(0.0, 1.0, 2000)
    pairs = grid_eigensolve(np.zeros(box.n_points), box, 3)
    worst = max(abs(val - ((k + 1) * math.pi) ** 2) / ((k + 1) * math.pi) ** 2
                for k, (val, _) in enumerate(pairs))
    out.append(_check("oracle", "particle_in_box", worst, 1e-5, "2000 nodes, three levels"))

    poly = [1.0, -2.0, 0.5, 0.25]
    xi, sigma = 1.7, 2.3
    exact = exact_poly_beta_integral(xi, sigma, poly).real
    num = quad_integrate(lambda s: s ** (xi - 1) * (1 - s) ** (sigma - 1) * np.polyval(poly[::-1], s),
                         (0.0, 1.0))
    out.append(_check("oracle", "beta_sum_vs_quadrature", abs(exact - num) / abs(exact), 1e-9,
                      "polynomial times Beta weight"))

    grid = RadialGrid.for_params(p, cfg.oracle.n_points, cfg.oracle.span)
    for (n, l), bs in solved.items():
        tag = f"n={n},l={l}"
        if l != 0:
            continue
        if isinstance(bs, str):
            out.append(_skip("oracle", f"nu_vs_oracle[{tag}]", bs))
            continue
        try:
            E_r, coarse, fine = richardson_energy(n, l, p, grid, **_oracle_kwargs(cfg))
            res = self_consistent_energy(n, l, p, grid, **_oracle_kwargs(cfg))
        except NCDiracError as exc:
            out.append(_skip("oracle", f"nu_vs_oracle[{tag}]", _err(exc)))
            continue
        out.append(_check("oracle", f"nu_vs_oracle[{tag}]", abs(bs.energy - E_r) / p.M,
                          ORACLE_TOL, f"Richardson oracle {E_r!r}, coarse-fine {coarse - fine:.3e}"))
        out.append(_check("oracle", f"oracle_nodes[{tag}]", abs(res.node_count - n), 0,
                          "grid eigenvector sign changes"))
    return out


# -- perturbation --------------------------------------------------------------

def _linear_fit_residual(xs, ys):
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    c = np.dot(xs, ys) / np.dot(xs, xs)
    scale = np.max(np.abs(ys))
    return float(np.max(np.abs(ys - c * xs)) / scale) if scale > 0 else 0.0


def perturbation_suite(cfg, solved):
    out = []
    p = cfg.potential
    f = cfg.field
    theta = cfg.theta if cfg.theta > 0 else 1e-3
    usable = [(k, bs) for k, bs in solved.items() if not isinstance(bs, str)]
    if not usable:
        return [_skip("perturbation", "all", "no closed-form state was solved")]
    with_l = [item for item in usable if item[0][1] > 0]
    (n, l), bs = (with_l or usable)[0]
    tag = f"n={n},l={l}"
    units = unit_integrals(bs, p, cfg.oracle.pekeris_variant)
    m = l if l > 0 else 0

    if m != 0:
        ths = [theta * k for k in (1, 2, 4, 8)]
        ys = [delta_e_theta_quad(bs, p, pot.NCParams(t, m), units=units).dE for t in ths]
        out.append(_check("perturbation", f"linear_in_theta[{tag}]",
                          _linear_fit_residual(ths, ys), LINEAR_TOL, "fit through the origin"))
        plus = delta_e_theta_quad(bs, p, pot.NCParams(theta, m), units=units).dE
        minus = delta_e_theta_quad(bs, p, pot.NCParams(theta, -m), units=units).dE
        out.append(_check("perturbation", f"odd_in_m[{tag}]",
                          abs(plus + minus) / max(abs(plus), 1e-300), LINEAR_TOL,
                          "dE_theta(m) = -dE_theta(-m)"))
    else:
        out.append(_skip("perturbation", "linear_in_theta", "no l > 0 state solved"))

    qs = [f.q_source * k for k in (1, 2, 4, 8)] if f.q_source else [0.1, 0.2, 0.4, 0.8]
    ys = [delta_e_efield_quad(bs, p, pot.NCParams(0.0, 0),
                              pot.FieldParams(f.e_charge, f.k_const, q), units=units).dE
          for q in qs]
    ekq = [f.e_charge * f.k_const * q for q in qs]
    out.append(_check("perturbation", f"linear_in_ekq[{tag}]", _linear_fit_residual(ekq, ys),
                      LINEAR_TOL, "field correction at theta = 0"))

    coul = [delta_e_efield_quad(bs, p, pot.NCParams(theta, mm), f, units=units).d_eps_terms["coulomb"]
            for mm in range(-l, l + 1)]
    spread = (max(coul) - min(coul)) / max(abs(coul[0]), 1e-300)
    out.append(_check("perturbation", f"coulomb_m_independent[{tag}]", spread, LINEAR_TOL, ""))

    zero = delta_e_efield_quad(bs, p, pot.NCParams(0.0, m),
                               pot.FieldParams(f.e_charge, f.k_const, 0.0), units=units).dE
    out.append(_check("perturbation", f"vanishes_at_zero[{tag}]", abs(zero), 0.0,
                      "theta = 0 and q = 0"))

    table = split_spectrum(bs, p, theta, f, cfg.oracle.pekeris_variant)
    with_c = np.array([e for _, e, _ in table])
    without_c = np.array([e - c.dE_terms["coulomb"] for _, e, c in table])
    if len(table) > 1:
        gaps_c, gaps_0 = np.diff(with_c), np.diff(without_c)
        val = float(np.max(np.abs(gaps_c - gaps_0)) / max(np.max(np.abs(gaps_0)), 1e-300))
        out.append(_check("perturbation", f"gap_invariance[{tag}]", val, 1e-9,
                          "m_l gaps unchanged by adding the Coulomb term"))
    return out


# -- diagnostics ---------------------------------------------------------------

def pekeris_diagnostic(cfg):
    p = cfg.potential
    grid = RadialGrid.for_params(p, cfg.oracle.n_points, cfg.oracle.span)
    r = np.linspace(p.r_c + 0.05 * p.alpha, p.r_c + 5 * p.alpha, 6)
    table = []
    for variant in pot.PEKERIS_VARIANTS:
        approx = pot.pekeris_inv_r2(r, p, variant)
        table.append({"variant": variant, "r": r.tolist(),
                      "relative_error": ((approx - 1 / r**2) * r**2).tolist()})
    energies = {}
    for label, kw in (("exact", {"centrifugal": "exact"}),
                      ("pekeris_as_printed", {"centrifugal": "pekeris", "pekeris_variant": "as_printed"}),
                      ("pekeris_conventional", {"centrifugal": "pekeris", "pekeris_variant": "conventional"})):
        try:
            energies[label] = self_consistent_energy(0, 1, p, grid, **kw).energy
        except NCDiracError as exc:
            energies[label] = _err(exc)
    gaps = {}
    if isinstance(energies["exact"], float):
        for k in ("pekeris_as_printed", "pekeris_conventional"):
            if isinstance(energies[k], float):
                gaps[k] = energies[k] - energies["exact"]
    return {"state": {"n": 0, "l": 1}, "pointwise": table, "oracle_energies": energies,
            "gap_vs_exact": gaps}


def paper_condition_scan(cfg, points=2001):
    rows = []
    for n, l in _unique_nl(cfg.states):
        Es, re, im = scan_residual(n, l, cfg.potential, "paper_printed", points)
        try:
            root = solve_energy(n, l, cfg.potential, condition="paper_printed")
            status = "ok"
        except NCDiracError as exc:
            root, status = None, type(exc).__name__
        rows.append({"n": n, "l": l, "sign_changes_real": sign_changes(re),
                     "real_min": float(np.min(re)), "real_max": float(np.max(re)),
                     "imag_max_abs": float(np.max(np.abs(im))),
                     "status": status, "energy": root})
    return rows


def squared_3f2_discrepancy(solved):
    rows = []
    for (n, l), bs in solved.items():
        if isinstance(bs, str):
            rows.append({"n": n, "l": l, "status": bs})
            continue
        single = bs.Nprime_3f2
        row = {"n": n, "l": l, "status": "ok", "Nprime_beta_sum": bs.Nprime,
               "Nprime_single_3f2_re": None, "Nprime_single_3f2_im": None,
               "relative_discrepancy": None}
        if single is not None:
            row.update(Nprime_single_3f2_re=single.real, Nprime_single_3f2_im=single.imag,
                       relative_discrepancy=abs(single - bs.Nprime) / bs.Nprime)
        rows.append(row)
    return rows


def closed_vs_quadrature(cfg, solved):
    rows = []
    p = cfg.potential
    for n, l, m in cfg.states:
        bs = solved[(n, l)]
        if isinstance(bs, str):
            rows.append({"n": n, "l": l, "m_l": m, "status": bs})
            continue
        rep = correction_report(bs, p, pot.NCParams(cfg.theta, m), cfg.field,
                                cfg.oracle.pekeris_variant)
        closed = rep.dE_closed
        rows.append({"n": n, "l": l, "m_l": m, "status": "ok",
                     "dE_quad": rep.dE_quad,
                     "dE_closed_re": None if closed is None else closed.real,
                     "dE_closed_im": None if closed is None else closed.imag,
                     "discrepancy": None if closed is None else rep.discrepancy,
                     "closed_error": rep.closed_error})
    return rows


def oracle_l_positive(cfg, solved):
    rows = []
    grid = RadialGrid.for_params(cfg.potential, cfg.oracle.n_points, cfg.oracle.span)
    for (n, l), bs in solved.items():
        if l == 0 or isinstance(bs, str):
            continue
        try:
            E_r, coarse, fine = richardson_energy(n, l, cfg.potential, grid, **_oracle_kwargs(cfg))
            rows.append({"n": n, "l": l, "E_nu": bs.energy, "E_oracle": E_r,
                         "difference": bs.energy - E_r, "coarse_minus_fine": coarse - fine})
        except NCDiracError as exc:
            rows.append({"n": n, "l": l, "E_nu": bs.energy, "status": _err(exc)})
    return rows


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def run_validation(cfg, rng):
    """Full report as a JSON-ready dict; ``report['passed']`` is the verdict."""
    solved = solve_states(cfg)
    checks = []
    checks += specfun_suite(rng)
    checks += potential_suite(cfg.potential, cfg.theta, rng)
    checks += radial_suite(cfg.potential, rng)
    checks += spectrum_suite(cfg, solved)
    checks += oracle_suite(cfg, solved)
    checks += perturbation_suite(cfg, solved)
    report = {
        "schema": REPORT_SCHEMA,
        "passed": all(c.status != "fail" for c in checks),
        "counts": {s: sum(c.status == s for c in checks) for s in ("pass", "fail", "skipped")},
        "checks": [asdict(c) for c in checks],
        "diagnostics": {
            "pekeris_error": pekeris_diagnostic(cfg),
            "paper_condition_scan": paper_condition_scan(cfg),
            "squared_3f2_discrepancy": squared_3f2_discrepancy(solved),
            "closed_vs_quadrature": closed_vs_quadrature(cfg, solved),
            "oracle_l_positive": oracle_l_positive(cfg, solved),
        },
    }
    return _clean(report)
