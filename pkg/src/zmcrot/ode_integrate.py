"""Integrate the zero-mean-curvature profile ODE in arclength.

Both surface families reduce to one equation in the generic pair ``(P, S)``
(``(y, w)`` for M1, ``(z, x)`` for M2).  On a unit-speed profile with
``P'^2 - S'^2 = sigma`` the second-order system is linear in ``(P'', S'')``:

    P' P'' - S' S'' = 0
    S' P'' - P' S'' = R,    R = -sigma (b^2 P S' - S P') / (S^2 - b^2 P^2)

with determinant ``-sigma``.  The secondary path integrates the square-root
form ``P'^2 = (a + sigma b^2 P^2)/(b^2 P^2 - S^2)``,
``S'^2 = (a + sigma S^2)/(b^2 P^2 - S^2)`` with a fixed sign state.

The stepper is a Dormand-Prince 5(4) pair with error-per-step control.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadParameter,
    HitSingularity,
    RadicandNegative,
    SingularStart,
    ToleranceNotMet,
    TurningPoint,
)
from .profiles import TAU_REG, ProfileCurve, check_kind, from_generic, sampled_curve, to_generic

SINGULAR_BAND = 10 * TAU_REG
DEFAULT_TOL = 1e-9
DEFAULT_MAX_STEP = 1e-2


# Dormand-Prince tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])


def dopri_step(f, t, y, h, k1=None):
    """One Dormand-Prince step; returns ``(y5, err_vec, k7)`` (FSAL: k7 = f(t+h, y5))."""
    ks = [f(t, y) if k1 is None else k1]
    for i in range(1, 7):
        yi = y + h * sum(a * k for a, k in zip(_A[i], ks))
        ks.append(f(t + _C[i] * h, yi))
    K = np.array(ks)
    y5 = y + h * (_B5 @ K)
    err = h * ((_B5 - _B4) @ K)
    return y5, err, ks[-1]


@dataclass
class StepperStats:
    accepted: int = 0
    rejected: int = 0
    max_defect: float = 0.0


def _error_norm(err, y_old, y_new, tol):
    scale = tol + tol * np.maximum(np.abs(y_old), np.abs(y_new))
    return float(np.max(np.abs(err) / scale))


def adaptive_dopri(f, y0, length, *, tol, max_step, stop=None, project=None, min_step=1e-14):
    """Integrate ``y' = f(t, y)`` on ``[0, length]``.

    ``project(y) -> (y_projected, defect)`` is applied to every accepted state
    (invariant projection); the defects are accumulated in ``stats``.

    ``stop(y)`` returns True when a state is no longer admissible; the step
    that first produces such a state is bisected down to the boundary and
    integration ends there.  Returns ``(ts, ys, stats, boundary)`` where
    ``boundary`` is the first inadmissible time, or None for a full run.
    """
    t, y = 0.0, np.asarray(y0, float)
    ts, ys = [t], [y]
    stats = StepperStats()
    h = min(max_step, length, 1e-3)
    k1 = f(t, y)
    while t < length * (1 - 1e-15):
        h = min(h, length - t)
        if h < min_step:
            raise ToleranceNotMet(f"step size underflow at t = {t:.6g}")
        try:
            y_new, err, k7 = dopri_step(f, t, y, h, k1)
            ok = np.all(np.isfinite(y_new))
        except (FloatingPointError, ZeroDivisionError, ValueError):
            ok = False
        if not ok:
            hit = _bisect_boundary(f, t, y, h, k1, stop) if stop is not None else None
            if hit is not None:
                # the step left the admissible region before blowing up
                return _close(ts, ys, stats, hit, project)
            stats.rejected += 1
            h *= 0.25
            continue
        en = _error_norm(err, y, y_new, tol)
        if en <= 1.0:
            if stop is not None and stop(y_new):
                hit = _bisect_boundary(f, t, y, h, k1, stop)
                if hit is not None:
                    return _close(ts, ys, stats, hit, project)
            if project is not None:
                y_new, defect = project(y_new)
                stats.max_defect = max(stats.max_defect, defect)
                k7 = f(t + h, y_new)
            t, y, k1 = t + h, y_new, k7
            ts.append(t)
            ys.append(y)
            stats.accepted += 1
            fac = 5.0 if en == 0 else min(5.0, 0.9 * en ** -0.2)
            h = min(max_step, h * fac)
        else:
            stats.rejected += 1
            h *= max(0.2, 0.9 * en ** -0.2)
    return np.array(ts), np.array(ys), stats, None


def _bisect_boundary(f, t, y, h, k1, stop, iters=60):
    """Bisect the step fraction at which the state leaves the admissible region.

    Returns ``(t_in, y_in, t_out)``: the last admissible state found and the
    first inadmissible time, ``h * 2^-iters`` apart; None if the full step is
    admissible after all.
    """
    def probe(theta):
        with np.errstate(all="ignore"):
            yt, _, _ = dopri_step(f, t, y, theta * h, k1)
        return yt, bool(np.all(np.isfinite(yt)) and not stop(yt))

    if probe(1.0)[1]:
        return None
    lo, hi, y_lo = 0.0, 1.0, y
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        ym, good = probe(mid)
        if good:
            lo, y_lo = mid, ym
        else:
            hi = mid
    return t + lo * h, y_lo, t + hi * h


def _close(ts, ys, stats, hit, project=None):
    t_in, y_in, t_out = hit
    if project is not None:
        y_in, defect = project(y_in)
        stats.max_defect = max(stats.max_defect, defect)
    if t_in > ts[-1] + 1e-12:
        ts, ys = ts + [t_in], ys + [y_in]
    return np.array(ts), np.array(ys), stats, t_out


# ---------------------------------------------------------------------------
# second-order path


@dataclass(frozen=True)
class IntegrationState:
    u: float
    p: float
    s: float
    dp: float
    ds: float
    speed_drift: float
    first_integral_drift: float


@dataclass
class IntegrationResult:
    curve: ProfileCurve
    final: IntegrationState
    max_speed_drift: float
    first_integral_spread: float | None
    accepted_steps: int
    rejected_steps: int
    boundary: float | None = None
    max_step_defect: float = 0.0


def _rhs_generic(b, sigma):
    b2 = b * b

    def f(_t, y):
        P, S, dP, dS = y
        R = -sigma * (b2 * P * dS - S * dP) / (S * S - b2 * P * P)
        # [S', -P'; P', -S'] [P''; S''] = [R; 0]
        ddP = -sigma * dS * R
        ddS = -sigma * dP * R
        return np.array([dP, dS, ddP, ddS])

    return f


def first_integral_generic(b, P, S, dP, dS):
    """``(b^2 - 1)(b^2 P^2 S'^2 - S^2 P'^2)`` on a unit-speed profile."""
    return (b * b - 1) * (b * b * P**2 * dS**2 - S**2 * dP**2)


def _finish(kind, b, sigma, ts, ys, rhs, stats, boundary):
    P, S, dP, dS = ys.T
    acc = np.array([rhs(0.0, y) for y in ys])
    ddP, ddS = acc[:, 2], acc[:, 3]
    p, s = from_generic(kind, P, S)
    dp, ds = from_generic(kind, dP, dS)
    ddp, dds = from_generic(kind, ddP, ddS)
    speed = np.abs(dP**2 - dS**2 - sigma)
    fi = first_integral_generic(b, P, S, dP, dS) if b != 1 else None
    fi_spread = float(np.max(fi) - np.min(fi)) if fi is not None else None
    final = IntegrationState(
        float(ts[-1]), float(p[-1]), float(s[-1]), float(dp[-1]), float(ds[-1]),
        float(speed[-1]), float(abs(fi[-1] - fi[0])) if fi is not None else 0.0,
    )
    curve = sampled_curve(ts, p, s, dp, ds, ddp, dds)
    return IntegrationResult(
        curve, final, float(np.max(speed)), fi_spread, stats.accepted, stats.rejected,
        None if boundary is None else float(boundary), stats.max_defect,
    )


def _q2(b, P, S):
    return S * S - b * b * P * P


def integrate_profile(
    kind: str,
    b: float,
    start,
    direction: int = 1,
    length: float = 1.0,
    tol: float = DEFAULT_TOL,
    max_step: float = DEFAULT_MAX_STEP,
    constrain: bool = True,
) -> IntegrationResult:
    """Integrate a ZMC profile from a unit-speed 1-jet ``start = (p, s, dp, ds)``.

    The returned curve is parametrized by arclength from the start point.
    With ``constrain`` the velocity is projected back onto the unit-speed
    constraint after every step; ``max_step_defect`` records the largest
    correction.
    Raises SingularStart if the start is not regular, HitSingularity (with the
    partial result and the bisected boundary) if the trajectory reaches the
    singular band ``|S^2 - b^2 P^2| <= 10 tau_reg``.
    """
    check_kind(kind)
    if not (b > 0 and math.isfinite(b)):
        raise BadParameter(f"b must be positive, got {b}")
    if direction not in (1, -1):
        raise BadParameter("direction must be +1 or -1")
    if not (length > 0 and tol > 0 and max_step > 0):
        raise BadParameter("length, tol and max_step must be positive")
    p0, s0, dp0, ds0 = (float(v) for v in start)
    P0, S0 = to_generic(kind, p0, s0)
    dP0, dS0 = to_generic(kind, direction * dp0, direction * ds0)
    sp2 = dP0**2 - dS0**2
    if abs(abs(sp2) - 1) > 1e-10:
        raise BadParameter(f"start jet is not unit speed: |dp^2 - ds^2| = {abs(sp2):.12g}")
    q2 = _q2(b, P0, S0)
    if abs(q2) <= SINGULAR_BAND:
        raise SingularStart(f"S^2 - b^2 P^2 = {q2:.3e} at the start point")
    sigma = 1 if sp2 > 0 else -1
    q_sign = 1 if q2 > 0 else -1

    rhs = _rhs_generic(b, sigma)

    def stop(y):
        q = _q2(b, y[0], y[1])
        return q * q_sign <= SINGULAR_BAND

    def project(y):
        # radial rescaling of the velocity back onto P'^2 - S'^2 = sigma
        c = sigma * (y[2] ** 2 - y[3] ** 2)
        if not c > 0:
            return y, math.inf
        out = y.copy()
        out[2:] /= math.sqrt(c)
        return out, abs(c - 1)

    with np.errstate(all="ignore"):
        ts, ys, stats, boundary = adaptive_dopri(
            rhs, [P0, S0, dP0, dS0], length, tol=tol, max_step=max_step, stop=stop,
            project=project if constrain else None,
        )
    result = _finish(kind, b, sigma, ts, ys, rhs, stats, boundary)
    if boundary is not None:
        if len(ts) < 2:
            raise SingularStart("singular band reached within the first step")
        raise HitSingularity(
            f"singular locus reached at arclength {boundary:.10g}",
            partial=result,
            boundary=float(boundary),
        )
    return result


def unit_start(curve: ProfileCurve, u: float):
    """Unit-speed 1-jet ``(p, s, dp, ds)`` of ``curve`` at parameter ``u``."""
    j = curve.jet(float(u))
    if abs(j.speed2) <= TAU_REG:
        raise SingularStart(f"lightlike tangent at u = {u}")
    sp = math.sqrt(abs(j.speed2))
    return j.p, j.s, j.dp / sp, j.ds / sp


# ---------------------------------------------------------------------------
# square-root path


def _radicands(b, a_t, sigma, P, S):
    den = b * b * P * P - S * S
    return (a_t + sigma * b * b * P * P) / den, (a_t + sigma * S * S) / den


def branch_first_order(
    kind: str,
    b: float,
    a0_tilde: float,
    eps: int,
    eps_star: int,
    start,
    signs=(1, 1),
    length: float = 1.0,
    tol: float = DEFAULT_TOL,
    max_step: float = DEFAULT_MAX_STEP,
) -> IntegrationResult:
    """Integrate the square-root first-order system with fixed signs.

    ``start = (p, s)`` in stored coordinates; ``signs`` are the signs of
    ``(dp, ds)``.  Integration stops with TurningPoint when either radicand
    drops below ``tol``.
    """
    check_kind(kind)
    if not b > 0 or b == 1:
        raise BadParameter("the square-root system needs b > 0, b != 1")
    if eps not in (1, -1) or eps_star not in (1, -1):
        raise BadParameter("eps and eps_star must be +1 or -1")
    if any(sg not in (1, -1) for sg in signs):
        raise BadParameter("signs must be +1 or -1")
    p0, s0 = (float(v) for v in start)
    P0, S0 = to_generic(kind, p0, s0)
    sP, sS = to_generic(kind, *signs)
    sigma = eps if kind == "M1" else -eps

    q2 = _q2(b, P0, S0)
    if abs(q2) <= SINGULAR_BAND:
        raise SingularStart(f"S^2 - b^2 P^2 = {q2:.3e} at the start point")
    if (1 if q2 > 0 else -1) != eps_star:
        raise BadParameter(f"start point has eps* = {-eps_star}, not {eps_star}")
    r1, r2 = _radicands(b, a0_tilde, sigma, P0, S0)
    if r1 <= 0 or r2 <= 0:
        raise RadicandNegative(
            f"radicands ({r1:.3e}, {r2:.3e}) at the start: no real solution for these signs"
        )

    def f(_t, y):
        a, c = _radicands(b, a0_tilde, sigma, y[0], y[1])
        return np.array([sP * np.sqrt(a), sS * np.sqrt(c)])

    def stop(y):
        a, c = _radicands(b, a0_tilde, sigma, y[0], y[1])
        return not (a > tol and c > tol) or _q2(b, y[0], y[1]) * eps_star <= SINGULAR_BAND

    with np.errstate(all="ignore"):
        ts, ys, stats, boundary = adaptive_dopri(
            f, [P0, S0], length, tol=tol, max_step=max_step, stop=stop
        )
    vel = np.array([f(0.0, y) for y in ys])
    full = np.column_stack([ys, vel])
    result = _finish(kind, b, sigma, ts, full, _rhs_generic(b, sigma), stats, boundary)
    if boundary is not None:
        raise TurningPoint(
            f"radicand or singular band reached at arclength {boundary:.10g}",
            partial=result,
            boundary=float(boundary),
        )
    return result
