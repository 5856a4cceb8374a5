"""Time-dependent frequency profiles omega^2(t).

Seven variants: five analytic families (constant, exponential decay, power
law, delta impulse with a step, sech^2 well), tabulated data, and parsed
expressions.  A profile answers three questions:

  * omega_squared(t): the pointwise value.  Raises EvalAtImpulse exactly at a
    delta impulse, DomainError outside the profile's domain.
  * jump_events(t_a, t_b): delta impulses inside the window, as (time,
    strength) pairs.  An impulse contributes strength*delta(t - time) to
    omega^2 and kicks any solution of f'' + omega^2 f = 0 by
    df'(time) = -strength * f(time).
  * to_json()/profile_from_json(): config round trip.

Step discontinuities are right-continuous: theta(0) = 1.  Events land in the
half-open window (t_a, t_b], so composing adjacent windows counts each
impulse exactly once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import omega_expr
from .errors import DomainError, EvalAtImpulse
from .omega_expr import ExprNode

__all__ = [
    "JumpEvent", "FrequencyProfile", "Constant", "ExpDecay", "PowerLaw",
    "DeltaPulse", "SechSquared", "Tabulated", "Expression",
    "omega_squared_at", "jump_events", "profile_from_json",
]


@dataclass(frozen=True)
class JumpEvent:
    """A delta impulse in omega^2: strength * delta(t - time)."""
    time: float
    strength: float


class FrequencyProfile:
    """Base class; concrete profiles implement omega_squared."""

    def omega_squared(self, t: float) -> float:
        raise NotImplementedError

    def smooth_omega_squared(self, t: float) -> float:
        """omega^2 with delta terms dropped (steps kept, right-continuous).

        Solvers integrate this between impulses and apply the impulses
        separately, so unlike omega_squared it is defined at impulse times.
        """
        return self.omega_squared(t)

    def jump_events(self, t_a: float, t_b: float) -> list[JumpEvent]:
        if not t_a < t_b:
            raise DomainError(f"empty window [{t_a}, {t_b}]")
        return []

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Constant(FrequencyProfile):
    omega0: float

    def __post_init__(self):
        if not (math.isfinite(self.omega0) and self.omega0 >= 0):
            raise DomainError(f"omega0 must be finite and >= 0, got {self.omega0}")

    def omega_squared(self, t: float) -> float:
        return self.omega0 ** 2

    def to_json(self) -> dict:
        return {"type": "constant", "omega0": self.omega0}


@dataclass(frozen=True)
class ExpDecay(FrequencyProfile):
    """omega^2(t) = omega0^2 * exp(-alpha t)."""
    omega0: float
    alpha: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise DomainError(f"alpha must be > 0, got {self.alpha}")
        if not (math.isfinite(self.omega0) and self.omega0 >= 0):
            raise DomainError(f"omega0 must be finite and >= 0, got {self.omega0}")

    def omega_squared(self, t: float) -> float:
        return self.omega0 ** 2 * math.exp(-self.alpha * t)

    def to_json(self) -> dict:
        return {"type": "exp_decay", "omega0": self.omega0, "alpha": self.alpha}


@dataclass(frozen=True)
class PowerLaw(FrequencyProfile):
    """omega^2(t) = (omega0 * alpha^beta)^2 * t^beta  on t >= 0.

    beta > -2 keeps the t=0 singularity mild enough for the oscillator
    equation; for beta < 0 the value itself still diverges at t=0, so the
    domain there is t > 0.
    """
    omega0: float
    alpha: float
    beta: float

    def __post_init__(self):
        if not (math.isfinite(self.beta) and self.beta > -2):
            raise DomainError(f"beta must be > -2, got {self.beta}")
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise DomainError(f"alpha must be > 0, got {self.alpha}")
        if not (math.isfinite(self.omega0) and self.omega0 >= 0):
            raise DomainError(f"omega0 must be finite and >= 0, got {self.omega0}")

    def omega_squared(self, t: float) -> float:
        if t < 0 or (t == 0 and self.beta < 0):
            raise DomainError(f"power-law profile needs t >= 0 (t > 0 for beta < 0), got t={t}")
        c = self.omega0 * self.alpha ** self.beta
        return c * c * t ** self.beta

    def to_json(self) -> dict:
        return {"type": "power_law", "omega0": self.omega0, "alpha": self.alpha, "beta": self.beta}


@dataclass(frozen=True)
class DeltaPulse(FrequencyProfile):
    """omega^2(t) = omega0^2 delta(t - t0) + omega0^4 theta(t - t0)."""
    omega0: float
    t0: float

    def __post_init__(self):
        if not (math.isfinite(self.omega0) and self.omega0 >= 0):
            raise DomainError(f"omega0 must be finite and >= 0, got {self.omega0}")
        if not math.isfinite(self.t0):
            raise DomainError(f"t0 must be finite, got {self.t0}")

    def omega_squared(self, t: float) -> float:
        if t == self.t0 and self.omega0 != 0.0:
            raise EvalAtImpulse(t)
        return self.smooth_omega_squared(t)

    def smooth_omega_squared(self, t: float) -> float:
        return self.omega0 ** 4 if t >= self.t0 else 0.0

    def jump_events(self, t_a: float, t_b: float) -> list[JumpEvent]:
        super().jump_events(t_a, t_b)
        if self.omega0 != 0.0 and t_a < self.t0 <= t_b:
            return [JumpEvent(self.t0, self.omega0 ** 2)]
        return []

    def to_json(self) -> dict:
        return {"type": "delta_pulse", "omega0": self.omega0, "t0": self.t0}


@dataclass(frozen=True)
class SechSquared(FrequencyProfile):
    """omega^2(t) = alpha^2 / cosh^2(beta (t - t0))."""
    alpha: float
    beta: float
    t0: float = 0.0

    def __post_init__(self):
        for name in ("alpha", "beta", "t0"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")

    def omega_squared(self, t: float) -> float:
        # sech via exp(-|x|) to avoid cosh overflow far from the well
        x = self.beta * (t - self.t0)
        e = math.exp(-abs(x))
        sech = 2.0 * e / (1.0 + e * e)
        return self.alpha ** 2 * sech ** 2

    def to_json(self) -> dict:
        return {"type": "sech_squared", "alpha": self.alpha, "beta": self.beta, "t0": self.t0}


@dataclass
class Tabulated(FrequencyProfile):
    """Sampled omega^2 on a strictly increasing time grid.

    interp: "cubic" (default) or "linear".  Interpolation reproduces the
    samples exactly at the nodes; evaluation outside [t[0], t[-1]] raises
    DomainError rather than extrapolating.
    """
    t: np.ndarray
    omega2: np.ndarray
    interp: str = "cubic"
    _spline: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.omega2 = np.asarray(self.omega2, dtype=float)
        if self.t.ndim != 1 or self.t.shape != self.omega2.shape:
            raise DomainError("t and omega2 must be 1-d arrays of equal length")
        if len(self.t) < 2:
            raise DomainError("need at least two samples")
        if not np.all(np.diff(self.t) > 0):
            raise DomainError("t must be strictly increasing")
        if not (np.all(np.isfinite(self.t)) and np.all(np.isfinite(self.omega2))):
            raise DomainError("samples must be finite")
        if self.interp not in ("cubic", "linear"):
            raise DomainError(f"interp must be 'cubic' or 'linear', got {self.interp!r}")
        if self.interp == "cubic" and len(self.t) >= 3:
            from scipy.interpolate import CubicSpline
            bc = "not-a-knot" if len(self.t) >= 4 else "natural"
            self._spline = CubicSpline(self.t, self.omega2, bc_type=bc)

    def omega_squared(self, t: float) -> float:
        if t < self.t[0] or t > self.t[-1]:
            raise DomainError(f"t={t} outside tabulated range [{self.t[0]}, {self.t[-1]}]")
        if self._spline is not None:
            return float(self._spline(t))
        return float(np.interp(t, self.t, self.omega2))

    def to_json(self) -> dict:
        return {"type": "tabulated", "t": self.t.tolist(),
                "omega2": self.omega2.tolist(), "interp": self.interp}


@dataclass
class Expression(FrequencyProfile):
    """omega^2(t) given by a parsed expression in t (constants already inlined)."""
    node: ExprNode
    source: str = ""

    def __post_init__(self):
        if isinstance(self.node, str):
            src = self.node
            self.node = omega_expr.parse(src)
            if not self.source:
                self.source = src
        if not self.source:
            self.source = omega_expr.to_string(self.node)

    def omega_squared(self, t: float) -> float:
        return omega_expr.evaluate(self.node, t)

    def to_json(self) -> dict:
        return {"type": "expression", "expr": omega_expr.to_string(self.node)}


def omega_squared_at(profile: FrequencyProfile, t: float) -> float:
    return profile.omega_squared(t)


def jump_events(profile: FrequencyProfile, t_a: float, t_b: float) -> list[JumpEvent]:
    return profile.jump_events(t_a, t_b)


def profile_from_json(data: dict) -> FrequencyProfile:
    """Build a profile from its dict form.  Inverse of to_json."""
    if not isinstance(data, dict) or "type" not in data:
        raise DomainError("profile config must be a dict with a 'type' key")
    kind = data["type"]
    extra = {k: v for k, v in data.items() if k != "type"}
    try:
        if kind == "constant":
            return Constant(**extra)
        if kind == "exp_decay":
            return ExpDecay(**extra)
        if kind == "power_law":
            return PowerLaw(**extra)
        if kind == "delta_pulse":
            return DeltaPulse(**extra)
        if kind == "sech_squared":
            return SechSquared(**extra)
        if kind == "tabulated":
            return Tabulated(np.asarray(extra.pop("t")), np.asarray(extra.pop("omega2")), **extra)
        if kind == "expression":
            constants = extra.get("constants") or {}
            return Expression(omega_expr.parse(extra["expr"], constants), source=extra["expr"])
    except TypeError as exc:
        raise DomainError(f"bad fields for profile type {kind!r}: {exc}") from exc
    except KeyError as exc:
        raise DomainError(f"missing field for profile type {kind!r}: {exc}") from exc
    raise DomainError(f"unknown profile type {kind!r}")
