"""Exact propagator of the driven oscillator from one classical solution.

Two equivalent routes to K(q_b, t_b; q_a, t_a):

  * kernel_eq17 — the solution-scaled form.  Any classical solution f with no
    zeros in the window works; it needs the accumulated quadrature
    W = int dt / f(t)^2 over the window.  Algebraically the result is
    independent of which f is used (the combination f_a f_b W and the
    boundary ratios conspire), which compare-against-kernel_robust tests
    exercise numerically.
  * kernel_robust — the endpoint form in terms of the fundamental pair:

        K = sqrt(mu / (2 pi i v_b)) *
            exp{ i mu/(2 v_b) (vdot_b q_b^2 + u_b q_a^2 - 2 q_a q_b) }

    No quadrature and no zero-free requirement away from the endpoint; the
    only breakdown is v_b = 0, the focal point, where the kernel degenerates
    to a delta function and we refuse to evaluate (CausticAtEndpoint).

Branch convention: the principal square root.  For v_b > 0 the prefactor
carries e^{-i pi/4}; after v_b changes sign it carries e^{+i pi/4}.  No
attempt is made to count focal points and accumulate Maslov phases — when v
has interior zeros the result is marked caustic_flag=True and the phase
(not the modulus) should be treated as unverified.

Reported phases are "unwrapped": -pi/4 (or +pi/4 past a caustic) plus the
full quadratic form divided by 2 v_b, NOT reduced mod 2 pi, so phase
differences between nearby arguments are smooth.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .classical import (FundamentalPair, SolutionCurve, solve_fundamental,
                        spot_check_solution)
from .errors import CausticAtEndpoint, CausticInWindow, DomainError
from .freq_profile import FrequencyProfile

__all__ = [
    "KernelValue", "compute_W", "kernel_eq17", "kernel_robust",
    "kernel", "kernel_batch", "schrodinger_residual",
]

_ENDPOINT_CAUSTIC_REL = 1e-12


@dataclass
class KernelValue:
    k: complex
    modulus: float
    phase: float               # unwrapped, see module docstring
    caustic_flag: bool = False  # True: past an interior focal point, phase unverified
    diagnostics: dict = field(default_factory=dict)


def _zero_scan_grid(profile: FrequencyProfile, t_a: float, t_b: float) -> np.ndarray:
    # at least ~40 samples per oscillation period so no zero slips between nodes
    span = t_b - t_a
    probe = np.linspace(t_a, t_b, 33)
    w2max = 0.0
    for t in probe:
        try:
            w2max = max(w2max, abs(profile.smooth_omega_squared(t)))
        except DomainError:
            continue
    n = max(400, int(40.0 * span * math.sqrt(w2max) / (2.0 * math.pi)) + 1)
    return np.linspace(t_a, t_b, n)


def _locate_zeros(fvals: np.ndarray, ts: np.ndarray,
                  f: Callable[[float], float]) -> list[float]:
    zeros = []
    sign = np.sign(fvals)
    flips = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    for i in flips:
        zeros.append(float(brentq(f, ts[i], ts[i + 1], xtol=1e-14)))
    exact = np.nonzero(fvals == 0.0)[0]
    zeros.extend(float(ts[i]) for i in exact)
    # grazing minima: |f| collapses without a sign flip
    scale = np.max(np.abs(fvals))
    if scale > 0:
        tiny = np.nonzero(np.abs(fvals) < 1e-8 * scale)[0]
        zeros.extend(float(ts[i]) for i in tiny if i not in exact)
    return sorted(set(zeros))


def compute_W(f: Callable[[float], float], t_a: float, t_b: float,
              profile: FrequencyProfile | None = None,
              epsrel: float = 1e-10) -> tuple[float, float]:
    """Quadrature W = int_{t_a}^{t_b} dt / f(t)^2, with a zero pre-scan.

    Returns (W, abserr).  Raises CausticInWindow at the first zero of f
    (the integrand is non-integrable there and the solution-scaled kernel
    form does not apply).  profile, when given, supplies jump times that are
    passed to the quadrature as known kink locations, plus the frequency
    scale for the scan density.
    """
    if not (t_b > t_a):
        raise DomainError(f"need t_b > t_a, got [{t_a}, {t_b}]")
    if profile is not None:
        ts = _zero_scan_grid(profile, t_a, t_b)
        kinks = [e.time for e in profile.jump_events(t_a, t_b) if e.time < t_b]
    else:
        ts = np.linspace(t_a, t_b, 1000)
        kinks = []
    fvals = np.array([f(t) for t in ts])
    zeros = _locate_zeros(fvals, ts, f)
    if zeros:
        raise CausticInWindow(zeros[0])

    val, err = quad(lambda t: 1.0 / f(t) ** 2, t_a, t_b,
                    points=kinks or None, epsrel=epsrel, epsabs=0.0, limit=200)
    return val, err


def _finish(pref_arg: complex, quad_part: float, caustic_flag: bool,
            diagnostics: dict) -> KernelValue:
    pref = cmath.sqrt(pref_arg)
    k = pref * cmath.exp(1j * quad_part)
    base = math.copysign(math.pi / 4.0, cmath.phase(pref))
    return KernelValue(k=k, modulus=abs(pref), phase=base + quad_part,
                       caustic_flag=caustic_flag, diagnostics=diagnostics)


def kernel_eq17(profile: FrequencyProfile, sol: SolutionCurve,
                t_a: float, t_b: float, q_a: float, q_b: float,
                mu: float = 1.0, check: bool = True) -> KernelValue:
    """Solution-scaled kernel form from a caller-provided zero-free solution.

    check=True spot-probes that sol actually solves the classical equation
    (SolutionMismatch otherwise).  A zero of sol in the window raises
    CausticInWindow; use kernel_robust to cross a focal point.
    """
    if mu <= 0:
        raise DomainError(f"mu must be positive, got {mu}")
    if check:
        spot_check_solution(profile, sol, t_a, t_b, rel_tol=1e-3)
    w, w_err = compute_W(sol.f, t_a, t_b, profile)
    f_a, f_b = sol.f(t_a), sol.f(t_b)
    fd_a, fd_b = sol.fdot(t_a), sol.fdot(t_b)

    quad_part = 0.5 * mu * (fd_b / f_b * q_b ** 2 - fd_a / f_a * q_a ** 2)
    quad_part += 0.5 * mu / w * (q_b / f_b - q_a / f_a) ** 2
    pref_arg = mu / (2.0 * math.pi * 1j * (f_a * f_b * w))
    return _finish(pref_arg, quad_part, caustic_flag=False,
                   diagnostics={"W": w, "W_abserr": w_err,
                                "f_a": f_a, "f_b": f_b,
                                "fdot_a": fd_a, "fdot_b": fd_b})


def _interior_v_zeros(pair: FundamentalPair, t_end: float) -> int:
    ts = np.linspace(pair.t_a, t_end, 800)[1:-1]  # v(t_a) = 0 by construction
    v = pair.state(ts)[2]
    return int(np.count_nonzero(np.sign(v[:-1]) * np.sign(v[1:]) < 0))


def kernel_robust(pair: FundamentalPair, q_a: float, q_b: float,
                  mu: float = 1.0, t_end: float | None = None) -> KernelValue:
    """Endpoint kernel form from the fundamental pair; valid across caustics.

    t_end defaults to the pair's right endpoint; any time inside the pair's
    window works, which makes finite-difference probes in t_b cheap.  Raises
    CausticAtEndpoint when v(t_end) vanishes to within 1e-12 of the window
    span (focal point: the kernel is a delta function there).
    """
    if mu <= 0:
        raise DomainError(f"mu must be positive, got {mu}")
    tb = pair.t_b if t_end is None else float(t_end)
    u_b, ud_b, v_b, vd_b = (float(x) for x in pair.state(tb))
    span = tb - pair.t_a
    if abs(v_b) < _ENDPOINT_CAUSTIC_REL * span:
        raise CausticAtEndpoint(tb, v_b)

    n_zeros = _interior_v_zeros(pair, tb)
    quad_part = 0.5 * mu / v_b * (vd_b * q_b ** 2 + u_b * q_a ** 2 - 2.0 * q_a * q_b)
    pref_arg = mu / (2.0 * math.pi * 1j * v_b)
    return _finish(pref_arg, quad_part, caustic_flag=n_zeros > 0,
                   diagnostics={"u_b": u_b, "udot_b": ud_b,
                                "v_b": v_b, "vdot_b": vd_b,
                                "interior_v_zeros": n_zeros})


def kernel(profile: FrequencyProfile, t_a: float, t_b: float,
           q_a: float, q_b: float, mu: float = 1.0,
           tol: float = 1e-10) -> KernelValue:
    """One-call propagator: solve the fundamental pair, apply the endpoint form."""
    pair = solve_fundamental(profile, t_a, t_b, tol)
    return kernel_robust(pair, q_a, q_b, mu)


def kernel_batch(pair: FundamentalPair, q_a: np.ndarray, q_b: np.ndarray,
                 mu: float = 1.0) -> tuple[np.ndarray, np.ndarray, np.ndarray, bool]:
    """Vectorized endpoint form over paired endpoint arrays.

    Returns (k, modulus, phase, caustic_flag); the pair is solved once and
    the per-point work is elementwise arithmetic.
    """
    qa = np.asarray(q_a, dtype=float)
    qb = np.asarray(q_b, dtype=float)
    if qa.shape != qb.shape:
        raise DomainError(f"q_a shape {qa.shape} != q_b shape {qb.shape}")
    probe = kernel_robust(pair, 0.0, 0.0, mu)
    d = probe.diagnostics
    u_b, v_b, vd_b = d["u_b"], d["v_b"], d["vdot_b"]
    quad_part = 0.5 * mu / v_b * (vd_b * qb ** 2 + u_b * qa ** 2 - 2.0 * qa * qb)
    pref = cmath.sqrt(mu / (2.0 * math.pi * 1j * v_b))
    k = pref * np.exp(1j * quad_part)
    base = math.copysign(math.pi / 4.0, cmath.phase(pref))
    return k, np.full_like(qa, abs(pref)), base + quad_part, probe.caustic_flag


def schrodinger_residual(profile: FrequencyProfile, t_a: float, t_b: float,
                         q_a: float, q_b: float, mu: float = 1.0,
                         h_t: float = 1e-2, h_q: float = 1e-2,
                         tol: float = 1e-12) -> float:
    """Normalized defect of K in the time-dependent Schrodinger equation.

    Central differences in t_b and q_b of the endpoint-form kernel:

        | i dK/dt_b + (1/2mu) d^2K/dq_b^2 - (mu/2) omega^2(t_b) q_b^2 K | / |K|

    evaluated at one step size; an exact kernel leaves an O(h^2) remainder,
    so halving h_t and h_q should shrink the result fourfold.  Keep t_b away
    from jump events (the t-derivative straddles the kick otherwise).
    """
    pair = solve_fundamental(profile, t_a, t_b + h_t, tol)
    for e in pair.event_times:
        if abs(e - t_b) <= h_t:
            raise DomainError(f"t_b within h_t of jump event at {e}")

    def K(qb: float, te: float) -> complex:
        return kernel_robust(pair, q_a, qb, mu, t_end=te).k

    k0 = K(q_b, t_b)
    dt = (K(q_b, t_b + h_t) - K(q_b, t_b - h_t)) / (2.0 * h_t)
    d2q = (K(q_b + h_q, t_b) - 2.0 * k0 + K(q_b - h_q, t_b)) / (h_q * h_q)
    w2 = profile.smooth_omega_squared(t_b)
    defect = 1j * dt + d2q / (2.0 * mu) - 0.5 * mu * w2 * q_b ** 2 * k0
    return abs(defect) / abs(k0)
