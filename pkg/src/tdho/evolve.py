"""Wavepacket evolution: the kernel route and two independent checks.

propagate_kernel applies the exact propagator as an integral operator,

    psi_out(q_b) = int K(q_b, t_b; q, t_a) psi(q) dq
                 = P e^{i C q_b^2} int e^{i A q^2} e^{i B(q_b) q} psi(q) dq

with A = mu u_b/(2 v_b), B = -mu q_b/v_b, C = mu vdot_b/(2 v_b) and
P = sqrt(mu/(2 pi i v_b)).  Gaussian inputs integrate in closed form.  For
everything else the oscillatory factor e^{iBq} is handled with a Filon-type
rule: g(q) = psi(q) e^{iAq^2} is interpolated by piecewise cubics while the
exponential is integrated exactly, giving a composite rule

    int g e^{iBq} dq  ~=  h W(theta) sum_n e^{i B q_n} g_n,   theta = B h,

whose interior weight W(theta) -> 1 as theta -> 0 (plain Riemann) and stays
O(1) accurate for |theta| >> 1 where a naive rule aliases.  Boundary weight
corrections are dropped: inputs must be negligible near the grid edges
anyway (GridTooNarrow enforces it), so the missing corrections act on
amplitudes below 1e-8.

crank_nicolson marches i dpsi/dt = H(t) psi directly (unitary, O(dt^2),
Dirichlet walls); time_sliced_oracle applies the short-time kernel composition
that defines the path integral, with O(1/n) convergence.  The three routes
share no mechanism, which is the point: agreement is evidence.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import fft
from scipy.linalg import solve_banded

from .classical import solve_fundamental
from .errors import DomainError, GridMismatch, GridTooNarrow, StabilityWarning
from .freq_profile import FrequencyProfile
from .kernel import kernel_robust

__all__ = [
    "WavePacket", "GaussianState", "propagate_kernel", "crank_nicolson",
    "time_sliced_oracle", "time_sliced", "compare", "uniform_grid",
]

_EDGE_BAND = 4       # grid points on each side treated as "edge"
_EDGE_AMPLITUDE = 1e-8


@dataclass(frozen=True)
class GaussianState:
    """Normalized Gaussian (2 pi sigma^2)^{-1/4} exp(-(q-qbar)^2/(4 sigma^2) + i kbar q)."""
    qbar: float = 0.0
    kbar: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        if not (self.sigma > 0):
            raise DomainError(f"sigma must be positive, got {self.sigma}")

    def psi(self, q: np.ndarray) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        norm = (2.0 * math.pi * self.sigma ** 2) ** -0.25
        return norm * np.exp(-((q - self.qbar) ** 2) / (4.0 * self.sigma ** 2)
                             + 1j * self.kbar * q)

    def on_grid(self, q: np.ndarray, t: float = 0.0) -> "WavePacket":
        return WavePacket(q=np.asarray(q, dtype=float), psi=self.psi(q), t=t,
                          gaussian=self)


@dataclass
class WavePacket:
    """State sampled on a uniform grid at one instant.

    gaussian, when set, certifies that psi is exactly that Gaussian; the
    kernel propagator then uses the closed-form integral instead of
    quadrature.  Propagation outputs never carry the tag.
    """
    q: np.ndarray
    psi: np.ndarray
    t: float
    gaussian: GaussianState | None = None

    def __post_init__(self):
        self.q = np.asarray(self.q, dtype=float)
        self.psi = np.asarray(self.psi, dtype=complex)
        if self.q.ndim != 1 or self.q.shape != self.psi.shape:
            raise DomainError("q and psi must be 1-d arrays of equal length")
        if self.q.size < 2 * _EDGE_BAND + 4:
            raise DomainError(f"grid too small ({self.q.size} points)")
        d = np.diff(self.q)
        if d[0] <= 0 or np.max(np.abs(d - d[0])) > 1e-9 * d[0]:
            raise DomainError("grid must be uniform and increasing")

    @property
    def dq(self) -> float:
        return float(self.q[1] - self.q[0])

    def norm(self) -> float:
        return math.sqrt(float(np.trapezoid(np.abs(self.psi) ** 2, self.q)))

    def mean_q(self) -> float:
        w = np.abs(self.psi) ** 2
        return float(np.trapezoid(w * self.q, self.q) / np.trapezoid(w, self.q))

    def mean_q2(self) -> float:
        w = np.abs(self.psi) ** 2
        return float(np.trapezoid(w * self.q ** 2, self.q) / np.trapezoid(w, self.q))


def uniform_grid(q_min: float, q_max: float, n: int) -> np.ndarray:
    if not (q_max > q_min and n >= 16):
        raise DomainError("need q_max > q_min and n >= 16")
    return np.linspace(q_min, q_max, n)


def _check_edges(packet: WavePacket) -> None:
    amp = np.abs(packet.psi)
    scale = float(np.max(amp))
    if scale == 0.0:
        raise DomainError("zero state")
    edge = max(float(np.max(amp[:_EDGE_BAND])), float(np.max(amp[-_EDGE_BAND:])))
    if edge > _EDGE_AMPLITUDE * scale:
        raise GridTooNarrow(
            f"|psi| reaches {edge:.2e} of peak near the grid edge; "
            f"widen the window (limit {_EDGE_AMPLITUDE:.0e})")


# moments c_k(theta) = int_0^1 u^k e^{i theta u} du for k = 0..3
def _filon_moments(theta: float) -> np.ndarray:
    c = np.empty(4, dtype=complex)
    if abs(theta) <= 1.0:
        # series sum_j (i theta)^j / (j! (k+j+1)); upward recursion in 1/theta
        # cancels badly here, the series does not
        for k in range(4):
            total = 0.0 + 0.0j
            term = 1.0 + 0.0j  # (i theta)^j / j!
            j = 0
            while True:
                contrib = term / (k + j + 1.0)
                total += contrib
                if abs(contrib) < 1e-18:
                    break
                j += 1
                term *= 1j * theta / j
            c[k] = total
        return c
    e = cmath.exp(1j * theta)
    it = 1j * theta
    c[0] = (e - 1.0) / it
    for k in range(1, 4):
        c[k] = (e - k * c[k - 1]) / it
    return c


# cubic Lagrange coefficients on nodes u = -1, 0, 1, 2 (rows: powers u^0..u^3)
_LAGRANGE = np.array([
    [0.0, -1.0 / 3.0, 0.5, -1.0 / 6.0],   # node -1
    [1.0, -0.5, -1.0, 0.5],               # node  0
    [0.0, 1.0, 0.5, -0.5],                # node  1
    [0.0, -1.0 / 6.0, 0.0, 1.0 / 6.0],    # node  2
])


def _filon_weight(theta: float) -> complex:
    """Interior sample weight W(theta); W(0) = 1."""
    c = _filon_moments(theta)
    m = _LAGRANGE @ c  # M_r for r = -1, 0, 1, 2
    r = np.array([-1.0, 0.0, 1.0, 2.0])
    return complex(np.sum(m * np.exp(-1j * theta * r)))


def propagate_kernel(profile: FrequencyProfile, packet: WavePacket, t_b: float,
                     mu: float = 1.0, tol: float = 1e-10) -> WavePacket:
    """Evolve packet from its own time to t_b through the exact kernel."""
    _check_edges(packet)
    pair = solve_fundamental(profile, packet.t, t_b, tol)
    probe = kernel_robust(pair, 0.0, 0.0, mu)  # endpoint caustic check happens here
    d = probe.diagnostics
    u_b, v_b, vd_b = d["u_b"], d["v_b"], d["vdot_b"]

    a_coef = 0.5 * mu * u_b / v_b
    c_coef = 0.5 * mu * vd_b / v_b
    pref = cmath.sqrt(mu / (2.0 * math.pi * 1j * v_b))
    q = packet.q

    if packet.gaussian is not None:
        g = packet.gaussian
        a = 1j * a_coef - 1.0 / (4.0 * g.sigma ** 2)
        b_const = g.qbar / (2.0 * g.sigma ** 2) + 1j * g.kbar
        bq = b_const + 1j * (-mu / v_b) * q          # b as a function of q_b
        c0 = -g.qbar ** 2 / (4.0 * g.sigma ** 2)
        amp = pref * (2.0 * math.pi * g.sigma ** 2) ** -0.25 * cmath.sqrt(math.pi / -a)
        psi_out = amp * np.exp(1j * c_coef * q ** 2 + c0 - bq ** 2 / (4.0 * a))
        return WavePacket(q=q, psi=psi_out, t=t_b)

    g_samples = packet.psi * np.exp(1j * a_coef * q ** 2)
    h = packet.dq
    psi_out = np.empty_like(packet.psi)
    for jb, qb in enumerate(q):
        b_coef = -mu * qb / v_b
        w = _filon_weight(b_coef * h)
        psi_out[jb] = pref * cmath.exp(1j * c_coef * qb * qb) * h * w * \
            np.sum(np.exp(1j * b_coef * q) * g_samples)
    return WavePacket(q=q, psi=psi_out, t=t_b)


def _cn_segment(psi: np.ndarray, q: np.ndarray, lo: float, hi: float,
                omega2: Callable[[float], float], mu: float, dt: float,
                warned: list) -> np.ndarray:
    n_steps = max(1, math.ceil((hi - lo) / dt))
    step = (hi - lo) / n_steps
    n = q.size
    dq2 = (q[1] - q[0]) ** 2
    off = -1.0 / (2.0 * mu * dq2)
    kin = 1.0 / (mu * dq2)

    ab = np.zeros((3, n), dtype=complex)
    ab[0, 1:] = 0.5j * step * off
    ab[2, :-1] = 0.5j * step * off
    ab[0, 1] = ab[2, n - 2] = 0.0  # decouple the Dirichlet walls exactly

    t = lo
    qmax2 = float(np.max(q ** 2))
    for _ in range(n_steps):
        w2 = omega2(t + 0.5 * step)
        v = 0.5 * mu * w2 * q ** 2
        h_diag = kin + v
        # the scheme is unconditionally stable; warn when the potential phase
        # per step is order one, since accuracy is gone well before stability
        if not warned and step * abs(w2) * qmax2 > 1.0:
            warnings.warn(StabilityWarning(
                "time step does not resolve the potential phase at the grid "
                "edges; results will be inaccurate (though not unstable)"))
            warned.append(True)
        rhs = (1.0 - 0.5j * step * h_diag) * psi
        rhs[1:] -= 0.5j * step * off * psi[:-1]
        rhs[:-1] -= 0.5j * step * off * psi[1:]
        rhs[0] = rhs[-1] = 0.0  # Dirichlet walls
        ab[1, :] = 1.0 + 0.5j * step * h_diag
        ab[1, 0] = ab[1, -1] = 1.0
        psi = solve_banded((1, 1), ab, rhs)
        t += step
    return psi


def crank_nicolson(profile: FrequencyProfile, packet: WavePacket, t_b: float,
                   mu: float = 1.0, dt: float = 1e-3) -> WavePacket:
    """Unitary O(dt^2) finite-difference evolution on the packet's grid.

    The march is split at jump events; each impulse of strength s applies
    the exact phase exp(-i mu s q^2 / 2) between segments.  Walls are
    Dirichlet, so the grid must stay wide enough that nothing reaches them.
    """
    _check_edges(packet)
    if not (t_b > packet.t):
        raise DomainError(f"need t_b > packet time {packet.t}")
    if not (dt > 0):
        raise DomainError("dt must be positive")

    events = profile.jump_events(packet.t, t_b)
    strength = {e.time: e.strength for e in events}
    cuts = [packet.t] + sorted(strength) + ([t_b] if t_b not in strength else [])

    psi = packet.psi.copy()
    warned: list = []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        psi = _cn_segment(psi, packet.q, lo, hi, profile.smooth_omega_squared,
                          mu, dt, warned)
        if hi in strength:
            psi = psi * np.exp(-0.5j * mu * strength[hi] * packet.q ** 2)
    return WavePacket(q=packet.q, psi=psi, t=t_b)


def time_sliced_oracle(profile: FrequencyProfile, packet: WavePacket, t_b: float,
                       n_slices: int, mu: float = 1.0) -> WavePacket:
    """Short-time kernel composition (the path-integral definition).

    n_slices kernel applications with eps = (t_b - t)/n_slices; slice j
    carries the free spreading factor and the potential phase sampled at the
    slice's right edge t_j (right Riemann), so the error is O(1/n).  An
    impulse at t0 applies its exact phase with the slice containing t0.

    Each free hop is the grid sum psi(q) <- sum_m K_eps(q, q_m) psi(q_m) h,
    evaluated as an FFT convolution (the sum is Toeplitz in q - q_m).  The
    chirp K_eps must be resolved by the grid: its phase advances by
    mu L h / eps radians per sample at the largest separation L, and once
    that exceeds pi the aliased tails feed back coherently and grow
    exponentially with the slice count.  DomainError enforces the bound
    rather than returning garbage — refine the grid or lower n_slices.
    """
    _check_edges(packet)
    if n_slices < 1:
        raise DomainError("n_slices must be >= 1")
    if not (t_b > packet.t):
        raise DomainError(f"need t_b > packet time {packet.t}")
    eps = (t_b - packet.t) / n_slices
    q = packet.q
    h = packet.dq
    n = q.size

    span = q[-1] - q[0]
    rate = mu * span * h / eps  # chirp phase advance per sample, worst case
    if rate > math.pi:
        raise DomainError(
            f"grid cannot resolve the slice kernel: mu*span*dq/eps = {rate:.2f} "
            f"> pi; use at most n_slices = {int(math.pi * (t_b - packet.t) / (mu * span * h))} "
            f"on this grid, or at least {int(mu * span ** 2 * n_slices / (math.pi * (t_b - packet.t)))} points")

    pref = cmath.sqrt(mu / (2.0 * math.pi * 1j * eps))
    offsets = np.arange(-(n - 1), n) * h
    kern = pref * h * np.exp(0.5j * mu * offsets ** 2 / eps)
    m = fft.next_fast_len(3 * n - 2)
    kern_hat = fft.fft(kern, m)

    events = profile.jump_events(packet.t, t_b)
    impulse_slice: dict[int, float] = {}
    for e in events:
        j = max(1, math.ceil((e.time - packet.t) / eps - 1e-12))
        impulse_slice[j] = impulse_slice.get(j, 0.0) + e.strength

    psi = packet.psi
    for j in range(1, n_slices + 1):
        t_j = packet.t + j * eps
        conv = fft.ifft(fft.fft(psi, m) * kern_hat)
        psi = conv[n - 1:2 * n - 1]
        psi = psi * np.exp(-0.5j * eps * mu * profile.smooth_omega_squared(t_j) * q ** 2)
        if j in impulse_slice:
            psi = psi * np.exp(-0.5j * mu * impulse_slice[j] * q ** 2)
    return WavePacket(q=q, psi=psi, t=t_b)


time_sliced = time_sliced_oracle  # shorthand


def compare(p1: WavePacket, p2: WavePacket) -> dict:
    """L2 and sup distances plus overlap; the packets must share a grid."""
    if p1.q.shape != p2.q.shape or not np.allclose(p1.q, p2.q, rtol=0, atol=1e-12):
        raise GridMismatch("packets live on different grids")
    diff = p1.psi - p2.psi
    return {
        "l2_error": math.sqrt(float(np.trapezoid(np.abs(diff) ** 2, p1.q))),
        "max_error": float(np.max(np.abs(diff))),
        "norm_ratio": p1.norm() / p2.norm(),
        "overlap": complex(np.trapezoid(np.conj(p1.psi) * p2.psi, p1.q)),
    }
