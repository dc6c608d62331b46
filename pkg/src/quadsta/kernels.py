"""Scalar sliding-mode control kernels.

Three per-axis control laws share the proxy structure: the control acts on a
virtual second-order "proxy" state that is dragged toward the sliding
variable, so the discontinuous part of the law never reaches the plant
directly.

``psta_step``
    One implicit-Euler step of the proxy-based super-twisting law. The
    set-valued sign terms of the discrete inclusion are resolved exactly by
    projecting a drive term onto an interval, which is what removes
    chattering: the returned input is a continuous function of the inputs.

``psmc_step``
    Same implicit machinery applied to the plain proxy sliding-mode law
    (relay term only, no super-twisting integral).

``smc_step``
    Conventional first-order sliding-mode control with a boundary layer,
    kept as the chattering-prone baseline.

All kernels are pure scalar float functions so a cascade can run six of them
per tick without array overhead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class NonFiniteInputError(ValueError):
    """Raised when a kernel receives NaN or infinity.

    Controller state derived from such a call is poisoned and must be reset
    before stepping again.
    """


def sgn_pow(x, xi):
    """Signed power |x|^xi * sign(x) with sign(0) == 0."""
    if x > 0.0:
        return x ** xi
    if x < 0.0:
        return -((-x) ** xi)
    return 0.0


def proj_interval(x, bound):
    """Project x onto the interval [-bound, bound]; bound must be >= 0."""
    if bound < 0.0:
        raise ValueError(f"projection bound must be nonnegative, got {bound}")
    if x > bound:
        return bound
    if x < -bound:
        return -bound
    return x


def _check_finite(name, value):
    if not math.isfinite(value):
        raise NonFiniteInputError(
            f"{name} is {value!r}; controller state is poisoned and must be reset"
        )


def _positive(name, value):
    if not (value > 0.0) or not math.isfinite(value):
        raise ValueError(f"gain {name} must be a positive finite number, got {value}")


@dataclass(frozen=True)
class PstaGains:
    """Gains of the proxy super-twisting kernel.

    B   proxy inertia (scales the derivative feedback)
    K   proxy stiffness (DC gain from sliding variable to input)
    H   sliding-surface time constant
    F1  gain of the square-root term
    F2  gain of the integral (sign) term
    F   saturation bound on the returned input
    h   controller step, seconds
    """

    B: float
    K: float
    H: float
    F1: float
    F2: float
    F: float
    h: float

    def __post_init__(self):
        for name in ("B", "K", "H", "F1", "F2", "F", "h"):
            _positive(name, getattr(self, name))

    @classmethod
    def from_mapping(cls, m, h=None):
        d = dict(m)
        if h is not None:
            d.setdefault("h", h)
        return cls(**{k: float(v) for k, v in d.items()})

    def as_dict(self):
        return {k: getattr(self, k) for k in ("B", "K", "H", "F1", "F2", "F", "h")}


@dataclass(frozen=True)
class PstaState:
    """Kernel memory carried between steps: proxy velocity and integral."""

    a2: float = 0.0
    v: float = 0.0


def psta_step(gains: PstaGains, state: PstaState, sigma: float):
    """Advance the proxy super-twisting law by one step.

    Returns ``(u, new_state)`` where u is the saturated input. The implicit
    update solves the step's sign inclusion in closed form: the solution of
    y + kap3*SGN(y) = rho is y = rho - proj(rho, kap3), so the new proxy
    velocity needs no iteration and the input inherits no switching.

    Raises NonFiniteInputError on NaN/inf inputs; the caller must then drop
    the state.
    """
    _check_finite("sigma", sigma)
    _check_finite("state.a2", state.a2)
    _check_finite("state.v", state.v)

    B, K, H = gains.B, gains.K, gains.H
    h = gains.h
    c = K / B
    kap1 = gains.F1 / B
    kap2 = gains.F2 / B

    lam1 = (H + h) / (1.0 + h * c)
    lam2 = 1.0 / (H + h)
    # The drive is the distance of the running proxy from the current
    # sliding variable, in y-coordinates; without the shift term the update
    # is expansive whenever the projection saturates and the iteration can
    # run away under a large constant sigma.
    shift = h * sigma + H * state.a2
    rho = lam1 * (state.a2 + h * state.v) - shift
    # kap3 >= lam1*h*kap2 > 0, so the rho/kap3 ratio below is always defined
    kap3 = lam1 * (kap1 * math.sqrt(abs(rho)) + h * kap2)
    proj_rho = proj_interval(rho, kap3)

    z = shift + rho
    a2 = lam2 * (z - proj_rho)

    y = rho - proj_rho
    if not (abs(y) <= abs(rho)):
        # only reachable through NaN leaking past the guards or a logic bug
        raise AssertionError(
            f"projection identity violated: |y|={abs(y)} > |rho|={abs(rho)}"
        )

    u_raw = K * a2 + B * (a2 - state.a2) / h
    u = proj_interval(u_raw, gains.F)
    if abs(u_raw) <= gains.F:
        v = state.v - kap2 * (proj_rho / kap3)
    else:
        # anti-windup branch: pull the integral toward the value consistent
        # with the saturated input, at most h*kap2 per step
        v = state.v - proj_interval(state.v - u / B, h * kap2)

    return u, PstaState(a2, v)


@dataclass(frozen=True)
class PsmcGains:
    """Gains of the proxy sliding-mode kernel (relay bound F, no integral)."""

    K: float
    B: float
    H: float
    F: float
    h: float

    def __post_init__(self):
        for name in ("K", "B", "H", "F", "h"):
            _positive(name, getattr(self, name))

    @classmethod
    def from_mapping(cls, m, h=None):
        d = dict(m)
        if h is not None:
            d.setdefault("h", h)
        return cls(**{k: float(v) for k, v in d.items()})

    def as_dict(self):
        return {k: getattr(self, k) for k in ("K", "B", "H", "F", "h")}


@dataclass(frozen=True)
class PsmcState:
    """Proxy position and velocity memory of the PSMC kernel."""

    a1: float = 0.0
    a2: float = 0.0


def psmc_step(gains: PsmcGains, state: PsmcState, sigma: float):
    """One implicit-Euler step of the proxy sliding-mode law.

    The relay is resolved by the same interval projection as in psta_step,
    so the input is continuous and automatically bounded by F.
    """
    _check_finite("sigma", sigma)
    _check_finite("state.a1", state.a1)
    _check_finite("state.a2", state.a2)

    K, B, H, F, h = gains.K, gains.B, gains.H, gains.F, gains.h
    c = K / B
    lam1 = (H + h) / (1.0 + h * c)
    lam2 = 1.0 / (H + h)

    shift = h * sigma + H * state.a2
    rho = lam1 * state.a2 - shift
    kap3 = lam1 * h * F / B
    y = rho - proj_interval(rho, kap3)

    a2 = lam2 * (y + shift)
    u_raw = K * a2 + B * (a2 - state.a2) / h
    # algebraically |u_raw| <= F already; the projection only trims roundoff
    u = proj_interval(u_raw, F)
    a1 = state.a1 + h * a2
    return u, PsmcState(a1, a2)


@dataclass(frozen=True)
class SmcGains:
    """Gains of the boundary-layer sliding-mode baseline.

    lam             damping on the sliding-variable rate
    eta             relay amplitude
    boundary_layer  half-width of the linear zone; 0 gives a pure relay
    F               saturation bound on the returned input
    h               controller step (kept for config symmetry; the law is
                    static and does not use it)
    """

    lam: float
    eta: float
    F: float
    h: float
    boundary_layer: float = 0.0

    def __post_init__(self):
        for name in ("eta", "F", "h"):
            _positive(name, getattr(self, name))
        if self.lam < 0.0 or not math.isfinite(self.lam):
            raise ValueError(f"gain lam must be >= 0, got {self.lam}")
        if self.boundary_layer < 0.0 or not math.isfinite(self.boundary_layer):
            raise ValueError(
                f"boundary_layer must be >= 0, got {self.boundary_layer}"
            )

    @classmethod
    def from_mapping(cls, m, h=None):
        d = {("lam" if k == "lambda" else k): float(v) for k, v in dict(m).items()}
        if h is not None:
            d.setdefault("h", h)
        return cls(**d)

    def as_dict(self):
        return {
            "lam": self.lam,
            "eta": self.eta,
            "F": self.F,
            "h": self.h,
            "boundary_layer": self.boundary_layer,
        }


def smc_step(gains: SmcGains, sigma: float, sigma_dot: float):
    """Conventional first-order SMC with boundary layer; stateless.

    Sign convention: sigma measured actual-minus-desired, so the relay
    opposes it. Returns the input saturated to [-F, F].
    """
    _check_finite("sigma", sigma)
    _check_finite("sigma_dot", sigma_dot)
    bl = gains.boundary_layer
    if bl > 0.0:
        sw = proj_interval(sigma / bl, 1.0)
    else:
        sw = 1.0 if sigma > 0.0 else (-1.0 if sigma < 0.0 else 0.0)
    u_raw = -gains.lam * sigma_dot - gains.eta * sw
    return proj_interval(u_raw, gains.F)
