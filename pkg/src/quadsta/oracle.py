"""Independent brute-force checkers for the sliding-mode kernels.

The kernels in :mod:`quadsta.kernels` resolve their set-valued sign terms in
closed form through interval projection. The functions here solve the same
scalar inclusions numerically, by bisection over a monotone residual, and
rebuild the step outputs from that solution. They share no algebra with the
closed-form route beyond the problem statement, so agreement between the two
is a meaningful check. ``quadsta validate`` and the test suite both run them.

Also provided is a fine-step reference integrator for the continuous-time
proxy super-twisting dynamics, used to check that the discrete kernel
converges to the continuous solution as the step shrinks.
"""

from __future__ import annotations

import math

from .kernels import PsmcGains, PsmcState, PstaGains, PstaState


def solve_sign_inclusion(drive, bound):
    """Solve y + bound*SGN(y) = drive for y by bisection, SGN(0) = [-1, 1].

    The residual is strictly increasing with a jump of 2*bound at zero, so
    there is exactly one solution: zero when |drive| <= bound, otherwise a
    point on the smooth branch. Bisection is run to float exhaustion and
    never relies on the projection shortcut.
    """
    if bound < 0.0:
        raise ValueError("bound must be nonnegative")

    def residual(y):
        if y > 0.0:
            return y + bound - drive
        if y < 0.0:
            return y - bound - drive
        return -drive

    span = abs(drive) + bound + 1.0
    lo, hi = -span, span
    if residual(lo) > 0.0 or residual(hi) < 0.0:
        raise AssertionError("bisection bracket failed to straddle the root")
    while True:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if residual(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    y = 0.5 * (lo + hi)
    # the jump case converges onto y = 0; snap the leftover half-ulp
    if abs(y) <= span * 1e-12 and abs(drive) <= bound:
        y = 0.0
    return y


def psta_step_oracle(gains: PstaGains, state: PstaState, sigma: float):
    """Recompute one proxy super-twisting step via numeric inclusion solves.

    Mirrors the contract of :func:`quadsta.kernels.psta_step` but obtains y
    from bisection and, on the saturated branch, obtains the integral update
    from a second bisection instead of the projection formula.
    """
    B, K, H, h = gains.B, gains.K, gains.H, gains.h
    c = K / B
    kap1 = gains.F1 / B
    kap2 = gains.F2 / B
    lam1 = (H + h) / (1.0 + h * c)
    lam2 = 1.0 / (H + h)

    shift = h * sigma + H * state.a2
    rho = lam1 * (state.a2 + h * state.v) - shift
    kap3 = lam1 * (kap1 * math.sqrt(abs(rho)) + h * kap2)

    y = solve_sign_inclusion(rho, kap3)
    a2 = lam2 * (y + shift)

    u_raw = K * a2 + B * (a2 - state.a2) / h
    F = gains.F
    u = min(F, max(-F, u_raw))
    if abs(u_raw) <= F:
        # selection of SGN(y) realized by the solved inclusion
        xi = (rho - y) / kap3
        xi = min(1.0, max(-1.0, xi))
        v = state.v - kap2 * xi
    else:
        w = solve_sign_inclusion(state.v - u / B, h * kap2)
        v = u / B + w
    return u, PstaState(a2, v)


def psmc_step_oracle(gains: PsmcGains, state: PsmcState, sigma: float):
    """Recompute one proxy sliding-mode step via a numeric inclusion solve."""
    K, B, H, F, h = gains.K, gains.B, gains.H, gains.F, gains.h
    c = K / B
    lam1 = (H + h) / (1.0 + h * c)
    lam2 = 1.0 / (H + h)

    shift = h * sigma + H * state.a2
    rho = lam1 * state.a2 - shift
    kap3 = lam1 * h * F / B

    y = solve_sign_inclusion(rho, kap3)
    a2 = lam2 * (y + shift)
    u_raw = K * a2 + B * (a2 - state.a2) / h
    u = min(F, max(-F, u_raw))
    a1 = state.a1 + h * a2
    return u, PsmcState(a1, a2)


def _continuous_step_branches(a2, v, sigma, c, kap1, kap2, H, eta):
    """One consistent implicit-Euler step of the continuous proxy STA.

    Solves, exactly, the coupled step

        (A - a2)/eta = -c*A + kap1*sgnpow(s, 1/2) + v_new
        v_new = v + eta*kap2*xi,  xi in SGN(s),  s = sigma - A - H*(A - a2)/eta

    by branching on the sign of s; each branch reduces to a quadratic in
    sqrt(|s|). Used as the truth trajectory for step-size convergence tests.
    """
    P = sigma + H * a2 / eta
    Q = 1.0 + H / eta
    alpha = (1.0 / eta + c) / Q
    # input drive needed to sit exactly on s = 0
    D = alpha * P - a2 / eta - v
    lim = eta * kap2
    if D > lim:
        beta0 = D - lim
        r = (-kap1 + math.sqrt(kap1 * kap1 + 4.0 * alpha * beta0)) / (2.0 * alpha)
        s = r * r
        A = (P - s) / Q
        xi = 1.0
    elif D < -lim:
        beta1 = D + lim
        r = (-kap1 + math.sqrt(kap1 * kap1 - 4.0 * alpha * beta1)) / (2.0 * alpha)
        s = -r * r
        A = (P + r * r) / Q
        xi = -1.0
    else:
        A = P / Q
        s = 0.0
        xi = D / lim if lim > 0.0 else 0.0
    v_new = v + lim * xi
    return A, v_new, s


def _continuous_step_bisect(a2, v, sigma, c, kap1, kap2, H, eta):
    """Bisection form of :func:`_continuous_step_branches` (cross-check)."""

    def residual(A):
        s = sigma - A - H * (A - a2) / eta
        if s > 0.0:
            xi = 1.0
        elif s < 0.0:
            xi = -1.0
        else:
            xi = 0.0
        r = math.sqrt(abs(s))
        root = r if s >= 0.0 else -r
        return (A - a2) / eta + c * A - v - eta * kap2 * xi - kap1 * root

    span = (abs(sigma) + abs(a2) + abs(v) + 1.0) * 4.0 + eta * kap2 + kap1
    lo, hi = a2 - span, a2 + span
    for _ in range(64):
        if residual(lo) <= 0.0 <= residual(hi):
            break
        span *= 4.0
        lo, hi = a2 - span, a2 + span
    while True:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if residual(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    A = 0.5 * (lo + hi)
    s = sigma - A - H * (A - a2) / eta
    if abs(s) > 1e-9 * (abs(sigma) + abs(A) + 1.0):
        xi = 1.0 if s > 0.0 else -1.0
    else:
        root = math.sqrt(abs(s)) if s >= 0.0 else -math.sqrt(abs(s))
        need = (A - a2) / eta + c * A - v - kap1 * root
        lim = eta * kap2
        xi = min(1.0, max(-1.0, need / lim)) if lim > 0.0 else 0.0
    return A, v + eta * kap2 * xi, s


def reference_sta_trajectory(gains: PstaGains, sigma_fn, t_end, eta, sample_dt):
    """Integrate the continuous proxy STA finely; sample a2 and u.

    ``sigma_fn(t)`` supplies the sliding variable. The integrator is the
    consistent implicit-Euler scheme at step ``eta`` (much smaller than any
    controller step under test), so the returned trajectory stands in for
    the continuous-time solution. Returns (times, a2_samples, u_samples).
    """
    B, K, H = gains.B, gains.K, gains.H
    c = K / B
    kap1 = gains.F1 / B
    kap2 = gains.F2 / B

    n = int(round(t_end / eta))
    every = max(1, int(round(sample_dt / eta)))
    a2, v = 0.0, 0.0
    times, a2s, us = [0.0], [a2], [K * a2]
    for k in range(1, n + 1):
        t = k * eta
        a2_new, v, _ = _continuous_step_branches(
            a2, v, sigma_fn(t), c, kap1, kap2, H, eta
        )
        if k % every == 0:
            u = K * a2_new + B * (a2_new - a2) / eta
            times.append(t)
            a2s.append(a2_new)
            us.append(u)
        a2 = a2_new
    return times, a2s, us
