"""
Special functions over complex scalars.

Gamma, Beta, Pochhammer symbols, terminating Gauss and unit-argument
generalized hypergeometric series, and Jacobi polynomials. Every routine
accepts Python ``complex`` (or anything ``complex()`` accepts) and returns
``complex``, because the angular exponent of the closed-form wavefunction is
imaginary for l >= 1.

Gamma uses the Lanczos approximation with g = 7 and nine coefficients
(Godfrey's set), accurate to roughly 1e-15 relative for Re z >= 1/2. Points
with Re z < 1/2 are mapped through the reflection formula.
"""

import cmath
import math

from .errors import DegenerateDenominator, NonFiniteResult, PoleError

LANCZOS_G = 7.0
LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_LOG_PI = math.log(math.pi)


def _check_finite(z, what):
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise NonFiniteResult(f"{what} is not finite: {z!r}")
    return z


def is_nonpositive_integer(z):
    z = complex(z)
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


def _wrap_phase(z):
    # principal value: imaginary part in (-pi, pi]
    im = math.remainder(z.imag, 2.0 * math.pi)
    if im == -math.pi:
        im = math.pi
    return complex(z.real, im)


def _lanczos_log(z):
    # log Gamma(z) for Re z >= 1/2, branch not yet wrapped
    w = z - 1.0
    coeffs = LANCZOS_COEFFS
    acc = complex(coeffs[0])
    for k in range(1, len(coeffs)):
        acc += coeffs[k] / (w + k)
    t = w + LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (w + 0.5) * cmath.log(t) - t + cmath.log(acc)


def _log_sin_pi(z):
    # log sin(pi z) with the real part of z reduced to [-1/2, 1/2]
    k = round(z.real)
    val = cmath.sin(math.pi * (z - k))
    if k % 2:
        val = -val
    return cmath.log(val)


def ln_gamma(z):
    """Principal logarithm of Gamma(z).

    The imaginary part is reduced to (-pi, pi], so that
    ``exp(ln_gamma(z)) == gamma(z)``; this is the log of the value, not the
    analytic continuation ``loggamma`` used by some libraries.

    Raises
    ------
    PoleError
        If z is zero or a negative integer.
    """
    z = complex(z)
    if is_nonpositive_integer(z):
        raise PoleError(f"Gamma has a pole at z = {z.real:g}")
    if z.real < 0.5:
        val = _LOG_PI - _log_sin_pi(z) - _lanczos_log(1.0 - z)
    else:
        val = _lanczos_log(z)
    return _check_finite(_wrap_phase(val), "ln_gamma")


def gamma(z):
    """Gamma(z) as a complex number; real inputs give an exactly real result."""
    z = complex(z)
    lg = ln_gamma(z)
    if z.imag == 0.0:
        sign = -1.0 if abs(lg.imag) > 1.0 else 1.0
        try:
            val = complex(sign * math.exp(lg.real), 0.0)
        except OverflowError as exc:
            raise NonFiniteResult(f"Gamma({z.real:g}) overflows") from exc
        return val
    try:
        return _check_finite(cmath.exp(lg), "gamma")
    except OverflowError as exc:
        raise NonFiniteResult(f"Gamma({z}) overflows") from exc


def gamma_ratio(num, den):
    """prod Gamma(num) / prod Gamma(den), formed in log space."""
    acc = 0j
    for z in num:
        acc += ln_gamma(z)
    for z in den:
        acc -= ln_gamma(z)
    try:
        return _check_finite(cmath.exp(acc), "gamma_ratio")
    except OverflowError as exc:
        raise NonFiniteResult("Gamma ratio overflows") from exc


def beta(x, y):
    """Euler Beta function B(x, y) = Gamma(x) Gamma(y) / Gamma(x + y)."""
    x = complex(x)
    y = complex(y)
    return gamma_ratio((x, y), (x + y,))


def pochhammer(x, k):
    """Rising factorial (x)_k as an explicit product; (x)_0 = 1."""
    if k < 0 or int(k) != k:
        raise ValueError("k must be a nonnegative integer")
    x = complex(x)
    acc = complex(1.0)
    for i in range(int(k)):
        acc *= x + i
    return acc


def _terminating_coefficients(n, upper, lower):
    # coefficients t_k of sum_k t_k s^k for pFq(-n, *upper; *lower; s)
    if n < 0 or int(n) != n:
        raise ValueError("n must be a nonnegative integer")
    n = int(n)
    upper = [complex(a) for a in upper]
    lower = [complex(b) for b in lower]
    coeffs = [complex(1.0)]
    term = complex(1.0)
    for k in range(n):
        num = complex(-n + k)
        for a in upper:
            num *= a + k
        if num == 0:
            break
        den = complex(k + 1)
        for b in lower:
            den *= b + k
        if den == 0:
            raise DegenerateDenominator(
                f"lower parameter reaches zero at series index {k}"
            )
        term = term * num / den
        coeffs.append(term)
    coeffs.extend([0j] * (n + 1 - len(coeffs)))
    return coeffs


def hyp2f1_coefficients(n, b2, c):
    """Power-series coefficients of 2F1(-n, b2; c; s), lowest order first."""
    return _terminating_coefficients(n, (b2,), (c,))


def polyval(coeffs, s):
    """Horner evaluation of sum_k coeffs[k] s**k (s scalar or ndarray)."""
    acc = 0j * s
    for ck in reversed(coeffs):
        acc = acc * s + ck
    return acc


def hyp2f1_terminating(n, b2, c, s):
    """Finite sum sum_{k<=n} (-n)_k (b2)_k / ((c)_k k!) s^k.

    Raises DegenerateDenominator when c is one of 0, -1, ..., -(n-1) and the
    numerator has not already terminated the series.
    """
    coeffs = hyp2f1_coefficients(n, b2, c)
    s = complex(s)
    acc = 0j
    power = complex(1.0)
    for ck in coeffs:
        acc += ck * power
        power *= s
    return _check_finite(acc, "hyp2f1_terminating")


def hyp3f2_unit_terminating(n, a2, a3, b1, b2):
    """3F2(-n, a2, a3; b1, b2; 1) summed term by term."""
    coeffs = _terminating_coefficients(n, (a2, a3), (b1, b2))
    return _check_finite(sum(coeffs, 0j), "hyp3f2_unit_terminating")


def jacobi_p(n, a, b, s):
    """Jacobi polynomial P_n^(a,b)(1 - 2s) via its Gauss series.

    Uses Gamma(n+a+1) / (n! Gamma(a+1)) * 2F1(-n, n+a+b+1; 1+a; s), so a pole
    of Gamma(a + 1) propagates as PoleError.
    """
    a = complex(a)
    b = complex(b)
    pref = gamma_ratio((n + a + 1.0,), (a + 1.0,)) / math.factorial(n)
    return pref * hyp2f1_terminating(n, n + a + b + 1.0, 1.0 + a, s)
