"""Special functions needed by the closed-form solution catalog.

Only what the catalog uses, nothing more: the gamma function (Lanczos),
Bessel J of real order nu >= 0, and Legendre P on (-1, 1] for real degree or
conical degree lambda = -1/2 + i*mu.  Everything returns real floats; the
conical case is real-valued on (-1, 1) even though the degree is complex.

Method selection
----------------
bessel_j uses the ascending power series for x <= max(12, 2 nu) and Miller's
backward recurrence beyond.  The series term count stays below ~40 on its
side of the seam; on the far side the downward recurrence is stable where the
alternating series would cancel catastrophically.  (A Hankel-type asymptotic
expansion truncates near 1e-10 at x ~ 12, too coarse here, which is why the
large-x branch recurs instead.)  Full accuracy is delivered for nu up to ~5;
beyond that the series side of the pinned seam slowly loses digits to
cancellation.

legendre_p sums the Gauss hypergeometric series about x = 1 in the variable
(1 - x)/2 for x > 0.  For x <= 0 that series converges too slowly, so the
function is continued through x = 0 with the pair of quadratically
transformed series in x^2 (the even/odd solutions of the Legendre equation),
joined with the exact values of P and dP/dx at 0 built from gamma factors.
Both series have real coefficients driven only by lambda*(lambda+1), so the
conical case never leaves real arithmetic.  Intended accuracy 1e-10 relative
for |x| <= 0.99; the x -> -1 endpoint is logarithmically singular and out of
scope.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = ["gamma", "bessel_j", "LegendreDegree", "legendre_p", "legendre_p_dx"]

_LANCZOS_G = 7.0
_LANCZOS_COEF = (
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


def _gamma_real(x: float) -> float:
    if x < 0.5:
        s = math.sin(math.pi * x)
        if s == 0.0:  # pole at 0, -1, -2, ...
            return math.inf
        return math.pi / (s * _gamma_real(1.0 - x))
    x -= 1.0
    acc = _LANCZOS_COEF[0]
    for i in range(1, 9):
        acc += _LANCZOS_COEF[i] / (x + i)
    t = x + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (x + 0.5) * math.exp(-t) * acc


def _gamma_complex(z: complex) -> complex:
    if z.real < 0.5:
        return cmath.pi / (cmath.sin(cmath.pi * z) * _gamma_complex(1.0 - z))
    z -= 1.0
    acc = complex(_LANCZOS_COEF[0])
    for i in range(1, 9):
        acc += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * cmath.exp(-t) * acc


def gamma(z):
    """Gamma via the Lanczos approximation (g=7, 9 coefficients), ~1e-13 relative.

    Real in, real out (inf at the poles); complex in, complex out.
    """
    if isinstance(z, complex):
        return _gamma_complex(z)
    return _gamma_real(float(z))


def _recip_gamma_real(x: float) -> float:
    """1/Gamma as an entire function: exactly 0.0 at the poles."""
    if x > 0.5:
        return 1.0 / _gamma_real(x)
    return math.sin(math.pi * x) * _gamma_real(1.0 - x) / math.pi


def _bessel_series(nu: float, x: float) -> float:
    # ascending series; compensated summation keeps the alternating
    # cancellation at the seam near the roundoff floor
    half = 0.5 * x
    t0 = half ** nu / _gamma_real(nu + 1.0)
    terms = [t0]
    term = t0
    k = 1
    while True:
        term *= -(half * half) / (k * (k + nu))
        terms.append(term)
        if abs(term) < 1e-18 * abs(t0) and k > half:
            break
        if k > 400:
            raise DomainError(f"bessel series failed to converge at nu={nu}, x={x}")
        k += 1
    return math.fsum(terms)


def _bessel_miller(nu: float, x: float) -> float:
    # downward recurrence from well above the turning point, normalized by
    # sum_k (nu+2k) Gamma(nu+k)/k! * J_{nu+2k}(x) = (x/2)^nu
    m_top = int(math.ceil(x + 2.5 * math.sqrt(x) + 34.0))
    if m_top % 2:
        m_top += 1
    yp = 0.0           # order nu + m + 1
    yc = 1e-300        # order nu + m
    ys = [0.0] * (m_top + 1)
    ys[m_top] = yc
    for m in range(m_top, 0, -1):
        yn = (2.0 * (nu + m) / x) * yc - yp
        yp, yc = yc, yn
        ys[m - 1] = yc
        if abs(yc) > 1e250:
            scale = 1e-250
            yp *= scale
            yc *= scale
            for i in range(m - 1, m_top + 1):
                ys[i] *= scale
    c = _gamma_real(nu + 1.0)
    total = c * ys[0]
    for k in range(1, m_top // 2 + 1):
        if k == 1:
            c = (nu + 2.0) * _gamma_real(nu + 1.0)
        else:
            c *= (nu + 2.0 * k) * (nu + k - 1.0) / ((nu + 2.0 * k - 2.0) * k)
        total += c * ys[2 * k]
    return ys[0] * (0.5 * x) ** nu / total


def bessel_j(nu: float, x: float) -> float:
    """J_nu(x) for real order nu >= 0 and x >= 0.

    Series for x <= max(12, 2 nu), Miller backward recurrence beyond; see the
    module docstring for why and for the accuracy envelope.
    """
    if not (math.isfinite(nu) and nu >= 0.0):
        raise DomainError(f"order must be finite and >= 0, got nu={nu}")
    if not (math.isfinite(x) and x >= 0.0):
        raise DomainError(f"argument must be finite and >= 0, got x={x}")
    if x == 0.0:
        return 1.0 if nu == 0.0 else 0.0
    if x <= max(12.0, 2.0 * nu):
        return _bessel_series(nu, x)
    return _bessel_miller(nu, x)


@dataclass(frozen=True)
class LegendreDegree:
    """Degree of a Legendre function: real nu, or conical -1/2 + i*mu.

    Exactly one flavor is active.  Everything downstream only consumes
    lambda*(lambda+1), which is real in both cases.
    """

    kind: str    # "real" or "conical"
    param: float  # nu, or mu

    @classmethod
    def real(cls, nu: float) -> "LegendreDegree":
        if not math.isfinite(nu):
            raise DomainError("degree must be finite")
        return cls("real", float(nu))

    @classmethod
    def conical(cls, mu: float) -> "LegendreDegree":
        if not math.isfinite(mu):
            raise DomainError("conical parameter must be finite")
        return cls("conical", float(mu))

    @property
    def lam_lam1(self) -> float:
        """lambda*(lambda+1)."""
        if self.kind == "real":
            return self.param * (self.param + 1.0)
        return -(self.param * self.param + 0.25)

    def half_degree_gammas(self) -> tuple[float, float]:
        """(P(0), P'(0)) of this degree, from the standard gamma-factor values."""
        root_pi = math.sqrt(math.pi)
        if self.kind == "conical":
            # arguments come in conjugate pairs, so both products are |.|^2
            g_even = _gamma_complex(complex(0.75, 0.5 * self.param))
            g_odd = _gamma_complex(complex(0.25, 0.5 * self.param))
            p0 = root_pi / (g_even.real ** 2 + g_even.imag ** 2)
            dp0 = -2.0 * root_pi / (g_odd.real ** 2 + g_odd.imag ** 2)
            return p0, dp0
        nu = self.param
        p0 = root_pi * _recip_gamma_real(0.5 * nu + 1.0) * _recip_gamma_real(0.5 - 0.5 * nu)
        dp0 = -2.0 * root_pi * _recip_gamma_real(0.5 * nu + 0.5) * _recip_gamma_real(-0.5 * nu)
        return p0, dp0


_MAX_TERMS = 200000


def _series_about_one(L: float, z: float, shifted: bool) -> float:
    """F(-lam, lam+1; 1; z), or F(1-lam, lam+2; 2; z) when shifted (for dP/dx)."""
    term = 1.0
    total = 1.0
    for k in range(_MAX_TERMS):
        if shifted:
            num = (k + 1.0) * (k + 2.0) - L
            den = (k + 2.0) * (k + 1.0)
        else:
            num = k * (k + 1.0) - L
            den = (k + 1.0) * (k + 1.0)
        term *= num * z / den
        total += term
        if abs(term) <= 1e-17 * abs(total) and k > 4:
            return total
    raise DomainError(f"legendre series about x=1 did not converge (z={z})")


def legendre_p(degree: LegendreDegree, x: float) -> float:
    """Legendre/conical P_degree(x) on (-1, 1]."""
    _check_x(x)
    if x == 1.0:
        return 1.0
    L = degree.lam_lam1
    if x > 0.0:
        return _series_about_one(L, 0.5 * (1.0 - x), shifted=False)
    return _about_zero(degree, x, derivative=False)


def legendre_p_dx(degree: LegendreDegree, x: float) -> float:
    """d/dx of P_degree at x, same domain and method split as legendre_p."""
    _check_x(x)
    L = degree.lam_lam1
    if x > 0.0:
        return 0.5 * L * _series_about_one(L, 0.5 * (1.0 - x), shifted=True)
    return _about_zero(degree, x, derivative=True)


def _check_x(x: float):
    if not (-1.0 < x <= 1.0):
        raise DomainError(f"argument must lie in (-1, 1], got x={x}")


def _about_zero(degree: LegendreDegree, x: float, derivative: bool) -> float:
    L = degree.lam_lam1
    p0, dp0 = degree.half_degree_gammas()
    if x == 0.0:
        return dp0 if derivative else p0
    x2 = x * x
    # even solution E = F(-lam/2, (lam+1)/2; 1/2; x^2)
    # odd solution  O = x F((1-lam)/2, lam/2+1; 3/2; x^2)
    # iteration k turns term k into term k+1, i.e. the coefficient of x^(2k+2)
    e_term = 1.0
    e_sum = 1.0
    e_dsum = 0.0   # dE/dx, with one power of x divided out at the end
    o_term = 1.0
    o_sum = 1.0
    o_dsum = 1.0   # dO/dx = sum (2k+1) o_k x^(2k)
    for k in range(_MAX_TERMS):
        e_num = k * k + 0.5 * k - 0.25 * L
        o_num = k * k + 1.5 * k + 0.25 * (2.0 - L)
        e_term *= e_num * x2 / ((k + 0.5) * (k + 1.0))
        o_term *= o_num * x2 / ((k + 1.5) * (k + 1.0))
        e_sum += e_term
        o_sum += o_term
        e_dsum += 2.0 * (k + 1.0) * e_term
        o_dsum += (2.0 * k + 3.0) * o_term
        if abs(e_term) <= 1e-17 * abs(e_sum) and abs(o_term) <= 1e-17 * max(abs(o_sum), 1e-300) and k > 4:
            break
    else:
        raise DomainError(f"legendre series about x=0 did not converge (x={x})")
    if derivative:
        return p0 * e_dsum / x + dp0 * o_dsum
    return p0 * e_sum + dp0 * x * o_sum
