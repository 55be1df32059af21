"""Profile curves of the rotational surfaces and their 2-jets.

A profile is a planar curve ``u -> (p(u), s(u))``.  For ``M1`` the pair is
``(y, w)``; for ``M2`` it is ``(x, z)``.  The zero-mean-curvature equation for
``M2`` is the ``M1`` equation with ``(y, w)`` replaced by ``(z, x)``, so several
routines work on the "generic" pair ``(P, S)``:

    M1: (P, S) = (y, w) = (p, s)
    M2: (P, S) = (z, x) = (s, p)

Closed-form families are built from sympy expressions and lambdified, so
their jets are exact derivatives.  Sampled curves use quintic Hermite
interpolation of the stored jets.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, NamedTuple

import mpmath
import numpy as np
import sympy as sp
from scipy import optimize
from scipy.interpolate import BPoly

from .errors import (
    BadParameter,
    DomainViolation,
    LightlikeTangent,
    NoSolution,
    OutOfDomain,
)

TAU_REG = 1e-8
_GL_ORDER = 20
KINDS = ("M1", "M2")


def check_kind(kind: str) -> str:
    if kind not in KINDS:
        raise BadParameter(f"kind must be one of {KINDS}, got {kind!r}")
    return kind


def to_generic(kind, p, s):
    """Map the stored ``(p, s)`` pair to the generic ``(P, S)`` pair."""
    return (p, s) if kind == "M1" else (s, p)


def from_generic(kind, P, S):
    return (P, S) if kind == "M1" else (S, P)


@dataclass(frozen=True)
class ProfileJet:
    p: float
    s: float
    dp: float
    ds: float
    ddp: float
    dds: float
    # dp^2 - ds^2 when known more accurately than the float difference
    sp2: object = None

    @property
    def speed2(self):
        if self.sp2 is not None:
            return self.sp2
        return self.dp**2 - self.ds**2

    def generic(self, kind: str) -> "ProfileJet":
        if kind == "M1":
            return self
        sp2 = None if self.sp2 is None else -self.sp2
        return ProfileJet(self.s, self.p, self.ds, self.dp, self.dds, self.ddp, sp2)

    def astuple(self):
        return (self.p, self.s, self.dp, self.ds, self.ddp, self.dds)


# ---------------------------------------------------------------------------
# family descriptors


def _sign(x) -> int:
    return 1 if x > 0 else -1


def _check_branch(branch):
    if branch not in (1, -1):
        raise BadParameter(f"branch must be +1 or -1, got {branch!r}")


@dataclass(frozen=True)
class Quadratic:
    """Conic ``(p + s)^2 + lam0 (s - p)^2 = mu0`` (the b = 1 solutions)."""

    lam0: float
    mu0: float
    branch: int = 1

    def validate(self):
        _check_branch(self.branch)
        if self.lam0 == 0:
            raise BadParameter("lam0 must be non-zero")
        if self.mu0 == 0:
            raise BadParameter("mu0 = 0 gives a degenerate conic")
        if self.lam0 > 0 and self.mu0 < 0:
            raise NoSolution("ellipse with negative mu0 has no real points")

    @property
    def default_domain(self):
        return (-math.pi, math.pi) if self.lam0 > 0 else (-2.0, 2.0)

    def expressions(self, u):
        # U = p + s, V = s - p
        lam, mu, br = self.lam0, self.mu0, self.branch
        if lam > 0:
            U = math.sqrt(mu) * sp.sin(u + sp.pi / 4)
            V = br * math.sqrt(mu / lam) * sp.cos(u + sp.pi / 4)
        elif mu > 0:
            U = br * math.sqrt(mu) * sp.cosh(u)
            V = math.sqrt(mu / -lam) * sp.sinh(u)
        else:
            U = math.sqrt(-mu) * sp.sinh(u)
            V = br * math.sqrt(mu / lam) * sp.cosh(u)
        return (U - V) / 2, (U + V) / 2

    def implicit_residual(self, p, s):
        p, s = np.asarray(p, float), np.asarray(s, float)
        return np.abs((p + s) ** 2 + self.lam0 * (s - p) ** 2 - self.mu0)

    solved_residual = implicit_residual


@dataclass(frozen=True)
class Arcsine:
    """``asin(S/mu) = +-(1/b) asin(b P/mu) + c0`` with ``mu^2 = eps* a0/(1-b^2)``."""

    a0: float
    b: float
    c0: float = 0.0
    branch: int = 1
    eps_star: int = 1
    kind: str = "M1"

    def validate(self):
        _check_branch(self.branch)
        check_kind(self.kind)
        if self.eps_star not in (1, -1):
            raise BadParameter("eps_star must be +1 or -1")
        if not self.b > 0 or self.b == 1:
            raise BadParameter(f"arcsine family needs b > 0, b != 1 (got {self.b})")
        if self.eps_star * self.a0 / (1 - self.b**2) <= 0:
            raise NoSolution(
                "eps* a0 / (1 - b^2) <= 0: the separated equation has no real solution"
            )

    @property
    def mu(self) -> float:
        return math.sqrt(self.eps_star * self.a0 / (1 - self.b**2))

    @property
    def default_domain(self):
        return (-math.pi / 2, math.pi / 2)

    def expressions(self, u):
        mu, b = self.mu, self.b
        P = mu / b * sp.sin(u)
        S = mu * sp.sin(self.branch * u / b + self.c0)
        return from_generic(self.kind, P, S)

    def _ratios(self, p, s):
        P, S = to_generic(self.kind, np.asarray(p, float), np.asarray(s, float))
        return P, S, self.b * P / self.mu, S / self.mu

    def implicit_residual(self, p, s):
        _, _, bp, sm = self._ratios(p, s)
        bp, sm = _clip_unit(bp), _clip_unit(sm)
        return np.abs(np.arcsin(sm) - self.branch * np.arcsin(bp) / self.b - self.c0)

    def solved_residual(self, p, s):
        _, S, bp, _ = self._ratios(p, s)
        bp = _clip_unit(bp)
        pred = self.mu * np.sin(self.branch * np.arcsin(bp) / self.b + self.c0)
        return np.abs(S - pred)


@dataclass(frozen=True)
class Hyperbolic:
    """``(S + sqrt(S^2 - r mu^2))^(+-b) = d0 (b P + sqrt(b^2 P^2 - r mu^2))``.

    ``r = radicand_sign`` selects ``sqrt(t^2 - mu^2)`` (+1) or ``sqrt(t^2 + mu^2)``
    (-1); ``mu^2 = |a0/(b^2 - 1)|`` and ``eps* = r sgn(a0/(b^2 - 1))``.
    A negative ``d0`` with ``r = +1`` denotes the mirror image ``P -> -P``.
    """

    a0: float
    b: float
    d0: float
    branch: int = 1
    radicand_sign: int = 1
    kind: str = "M1"

    def validate(self):
        _check_branch(self.branch)
        check_kind(self.kind)
        if self.radicand_sign not in (1, -1):
            raise BadParameter("radicand_sign must be +1 or -1")
        if not self.b > 0 or self.b == 1:
            raise BadParameter(f"hyperbolic family needs b > 0, b != 1 (got {self.b})")
        if self.a0 == 0:
            raise BadParameter("a0 = 0 is the Power family")
        if self.d0 == 0:
            raise BadParameter("d0 must be non-zero")
        if self.radicand_sign < 0 and self.d0 < 0:
            raise NoSolution("with sqrt(t^2 + mu^2) both sides are positive; d0 < 0 impossible")

    @property
    def a0_tilde(self) -> float:
        return self.a0 / (self.b**2 - 1)

    @property
    def mu(self) -> float:
        return math.sqrt(abs(self.a0_tilde))

    @property
    def eps_star(self) -> int:
        return self.radicand_sign * _sign(self.a0_tilde)

    @property
    def default_domain(self):
        return (0.0, 2.0) if self.radicand_sign > 0 else (-2.0, 2.0)

    def _phi(self, theta, lib):
        mu, b = self.mu, self.b
        return self.branch * b * (lib.log(mu) + theta) - lib.log(abs(self.d0)) - lib.log(mu)

    def expressions(self, u):
        mu, b = self.mu, self.b
        phi = self._phi(u, sp)
        if self.radicand_sign > 0:
            S = mu * sp.cosh(u)
            P = _sign(self.d0) * mu / b * sp.cosh(phi)
        else:
            S = mu * sp.sinh(u)
            P = mu / b * sp.sinh(phi)
        return from_generic(self.kind, P, S)

    def _log_root(self, t):
        t = np.asarray(t, float)
        if self.radicand_sign > 0:
            t = np.abs(t)
            rad = t**2 - self.mu**2
            if np.any(rad < -1e-12 * max(1.0, self.mu**2)):
                raise DomainViolation("|t| < mu: radicand negative")
            return np.log(t + np.sqrt(np.maximum(rad, 0.0)))
        return np.log(t + np.sqrt(t**2 + self.mu**2))

    def implicit_residual(self, p, s):
        P, S = to_generic(self.kind, np.asarray(p, float), np.asarray(s, float))
        lhs = self.branch * self.b * self._log_root(S)
        rhs = math.log(abs(self.d0)) + self._log_root(self.b * P)
        return np.abs(lhs - rhs)

    def solved_residual(self, p, s):
        P, S = to_generic(self.kind, np.asarray(p, float), np.asarray(s, float))
        mu, b = self.mu, self.b
        if self.radicand_sign > 0:
            ratio = np.abs(S) / mu
            if np.any(ratio < 1 - 1e-12):
                raise DomainViolation("|S| < mu: radicand negative")
            theta = np.arccosh(np.maximum(ratio, 1.0))
            pred = _sign(self.d0) * mu / b * np.cosh(self._phi(theta, np))
        else:
            theta = np.arcsinh(S / mu)
            pred = mu / b * np.sinh(self._phi(theta, np))
        return np.abs(P - pred)


@dataclass(frozen=True)
class Power:
    """``P = b0 S^(+-b)``, the ``a0 = 0`` member of the hyperbolic family."""

    b0: float
    b: float
    branch: int = 1
    kind: str = "M1"

    def validate(self):
        _check_branch(self.branch)
        check_kind(self.kind)
        if self.b0 == 0:
            raise BadParameter("b0 must be non-zero")
        if not self.b > 0:
            raise BadParameter("b must be positive")

    @property
    def default_domain(self):
        return (0.1, 2.0)

    def expressions(self, u):
        P = self.b0 * u ** (self.branch * self.b)
        return from_generic(self.kind, P, u)

    def implicit_residual(self, p, s):
        P, S = to_generic(self.kind, np.asarray(p, float), np.asarray(s, float))
        if np.any(S <= 0):
            raise DomainViolation("power family needs S > 0")
        return np.abs(P - self.b0 * S ** (self.branch * self.b))

    solved_residual = implicit_residual


def _vranceanu(u, a, c):
    f = a * sp.cosh(2 * u + c) ** sp.Rational(-1, 2)
    return f * sp.sinh(u), f * sp.cosh(u)


# name -> (builder(u, a, c) -> (p, s), default domain)
EXPLICIT_CURVES: dict[str, tuple[Callable, tuple[float, float]]] = {
    "sin-cos": (lambda u, a, c: (sp.sin(u), sp.cos(u)), (-math.pi / 4, math.pi / 4)),
    "cos-sin": (lambda u, a, c: (sp.cos(u), sp.sin(u)), (math.pi / 4, 3 * math.pi / 4)),
    "u-inv": (lambda u, a, c: (u, 1 / u), (0.2, 3.0)),
    "ex3.4": (lambda u, a, c: (2 * sp.sin(u), sp.sin(2 * u)), (0.0, math.pi / 4)),
    "ex3.5": (lambda u, a, c: (sp.cosh(2 * u) / 2, sp.cosh(u)), (0.0, 2.0)),
    "ex3.6": (lambda u, a, c: (u**2, u), (0.0, 2.0)),
    "ex3.10": (lambda u, a, c: (sp.cosh(u), sp.cosh(2 * u - 1) / 2), (0.0, 1.0)),
    "ex3.11": (lambda u, a, c: (u, u**2), (0.0, 2.0)),
    "ex3.12": (
        lambda u, a, c: (sp.sin(2 * u - sp.pi / 4), 2 * sp.sin(u)),
        (math.pi / 8, math.pi / 4),
    ),
    "vranceanu": (_vranceanu, (-1.0, 1.0)),
    "line": (lambda u, a, c: (a * u, c * u), (-1.0, 1.0)),
}


@dataclass(frozen=True)
class Explicit:
    """A named explicit profile (see ``EXPLICIT_CURVES``); ``a, c`` are shape constants."""

    name: str
    a: float = 1.0
    c: float = 0.0

    def validate(self):
        if self.name not in EXPLICIT_CURVES:
            raise BadParameter(f"unknown explicit curve {self.name!r}")

    @property
    def default_domain(self):
        return EXPLICIT_CURVES[self.name][1]

    def expressions(self, u):
        return EXPLICIT_CURVES[self.name][0](u, self.a, self.c)


@dataclass(frozen=True, eq=False)
class Sampled:
    u: np.ndarray
    p: np.ndarray
    s: np.ndarray
    dp: np.ndarray
    ds: np.ndarray
    ddp: np.ndarray
    dds: np.ndarray
    source_u: np.ndarray | None = None


ClosedForm = (Quadratic, Arcsine, Hyperbolic, Power, Explicit)


# ---------------------------------------------------------------------------
# curves


class ProfileCurve:
    """An immutable profile curve with a jet evaluator over ``domain``."""

    def __init__(self, family, domain, jet_fn):
        lo, hi = float(domain[0]), float(domain[1])
        if not lo < hi:
            raise BadParameter(f"empty domain {domain}")
        self.family = family
        self.domain = (lo, hi)
        self._jet_fn = jet_fn

    def __repr__(self):
        return f"ProfileCurve({self.family!r}, domain={self.domain})"

    @property
    def is_sampled(self) -> bool:
        return isinstance(self.family, Sampled)

    def contains(self, u) -> bool:
        u = np.asarray(u, float)
        lo, hi = self.domain
        slack = 1e-12 * max(1.0, abs(lo), abs(hi))
        return bool(np.all((u >= lo - slack) & (u <= hi + slack)))

    def jet(self, u) -> ProfileJet:
        if not self.contains(u):
            raise OutOfDomain(f"u={u} outside {self.domain}")
        return self.jet_unchecked(u)

    def jet_unchecked(self, u) -> ProfileJet:
        u = np.asarray(u, float)
        vals = [np.broadcast_to(np.asarray(v, float), u.shape) for v in self._jet_fn(u)]
        if len(vals) == 7:
            vals[6] = vals[6].copy()
        if u.ndim == 0:
            vals = [float(v) for v in vals]
        return ProfileJet(*vals)

    def points(self, u):
        j = self.jet_unchecked(u)
        return j.p, j.s

    def with_domain(self, domain) -> "ProfileCurve":
        lo, hi = domain
        if self.is_sampled and not (self.contains(lo) and self.contains(hi)):
            raise OutOfDomain(f"{domain} leaves the sampled range {self.domain}")
        return ProfileCurve(self.family, domain, self._jet_fn)


# dp^2 - ds^2 loses about log10(1/ratio) digits to cancellation; below this
# ratio it is re-evaluated in extended precision
_CANCEL_RATIO = 1e-4
_MP_DPS = 40


@lru_cache(maxsize=256)
def _compile(family) -> Callable:
    u = sp.Symbol("u", real=True)
    p, s = family.expressions(u)
    p, s = sp.sympify(p), sp.sympify(s)
    dp, ds = sp.diff(p, u), sp.diff(s, u)
    exprs = [p, s, dp, ds, sp.diff(p, u, 2), sp.diff(s, u, 2)]
    fn = sp.lambdify(u, exprs, modules="numpy")
    mp_speed2 = sp.lambdify(u, dp**2 - ds**2, modules="mpmath")

    def jet_fn(x):
        vals = [np.broadcast_to(np.asarray(v, float), np.shape(x)) for v in fn(x)]
        d1, d2 = vals[2], vals[3]
        with np.errstate(all="ignore"):
            sp2 = np.array(d1 * d1 - d2 * d2, dtype=float)
            ill = np.abs(sp2) < _CANCEL_RATIO * (d1 * d1 + d2 * d2)
        if np.any(ill):
            xs = np.broadcast_to(np.asarray(x, float), sp2.shape)
            with mpmath.workdps(_MP_DPS):
                for idx in zip(*np.nonzero(ill)) if sp2.ndim else [()]:
                    try:
                        sp2[idx] = float(mp_speed2(mpmath.mpf(float(xs[idx]))))
                    except (ValueError, ZeroDivisionError, TypeError):
                        pass
        return (*vals, sp2)

    return jet_fn


def _sampled_jet_fn(fam: Sampled):
    bp = BPoly.from_derivatives(fam.u, np.column_stack([fam.p, fam.dp, fam.ddp]))
    bs = BPoly.from_derivatives(fam.u, np.column_stack([fam.s, fam.ds, fam.dds]))
    dbp, dbs = bp.derivative(), bs.derivative()
    ddbp, ddbs = bp.derivative(2), bs.derivative(2)

    def fn(u):
        return bp(u), bs(u), dbp(u), dbs(u), ddbp(u), ddbs(u)

    return fn


def make_profile(family, domain=None) -> ProfileCurve:
    """Build a profile curve for a family descriptor (or sampled jets)."""
    if isinstance(family, Sampled):
        if len(family.u) < 2 or np.any(np.diff(family.u) <= 0):
            raise BadParameter("sampled nodes must be strictly increasing, n >= 2")
        dom = domain or (float(family.u[0]), float(family.u[-1]))
        return ProfileCurve(family, dom, _sampled_jet_fn(family))
    if not isinstance(family, ClosedForm):
        raise BadParameter(f"unsupported family descriptor {family!r}")
    family.validate()
    fn = _compile(family)
    return ProfileCurve(family, domain or family.default_domain, fn)


def sampled_curve(u, p, s, dp, ds, ddp, dds, source_u=None) -> ProfileCurve:
    arrs = [np.ascontiguousarray(a, dtype=float) for a in (u, p, s, dp, ds, ddp, dds)]
    src = None if source_u is None else np.asarray(source_u, float)
    return make_profile(Sampled(*arrs, source_u=src))


def eval_jet(curve: ProfileCurve, u) -> ProfileJet:
    return curve.jet(u)


def interior_samples(interval, n: int, margin: float = 1e-3) -> np.ndarray:
    """``n`` evenly spaced points of ``interval`` kept ``margin * length`` from the ends."""
    lo, hi = interval
    d = (hi - lo) * margin
    return np.linspace(lo + d, hi - d, n)


# ---------------------------------------------------------------------------
# arclength


def _speed(curve, u):
    j = curve.jet_unchecked(u)
    return math.sqrt(abs(j.dp**2 - j.ds**2))


def check_non_lightlike(curve: ProfileCurve, domain, n_scan: int = 2001) -> int:
    """Return the constant sign of ``dp^2 - ds^2`` on ``domain`` or raise LightlikeTangent."""
    grid = np.linspace(domain[0], domain[1], n_scan)
    with np.errstate(all="ignore"):
        sp2 = curve.jet_unchecked(grid).speed2
    if not np.all(np.isfinite(sp2)) or np.min(np.abs(sp2)) <= TAU_REG:
        raise LightlikeTangent(f"speed^2 vanishes on {domain}")
    if np.any(np.sign(sp2) != np.sign(sp2[0])):
        raise LightlikeTangent(f"speed^2 changes sign on {domain}")
    return int(np.sign(sp2[0]))


def arclength_reparametrize(
    curve: ProfileCurve, kind: str = "M1", n: int = 257, domain=None
) -> ProfileCurve:
    """Resample ``curve`` at ``n`` equally spaced arclength nodes.

    Arclength uses ``|dp^2 - ds^2|``; the result has ``dp^2 - ds^2 = +-1`` at
    every node and domain ``(0, L)``.  ``source_u`` records the original
    parameter of each node.
    """
    check_kind(kind)
    dom = domain or curve.domain
    if not (curve.contains(dom[0]) and curve.contains(dom[1])):
        raise OutOfDomain(f"{dom} not inside {curve.domain}")
    sign = check_non_lightlike(curve, dom)

    # Gauss-Legendre on a fine grid, then Newton inversion of the arclength map
    grid = np.linspace(dom[0], dom[1], 4 * n + 1)
    x, w = np.polynomial.legendre.leggauss(_GL_ORDER)

    def seg_length(a, b):
        a, b = np.asarray(a, float), np.asarray(b, float)
        half = 0.5 * (b - a)
        nodes = 0.5 * (a + b)[..., None] + half[..., None] * x
        sp2 = curve.jet_unchecked(nodes).speed2
        return half * np.sum(w * np.sqrt(np.abs(sp2)), axis=-1)

    cum = np.concatenate([[0.0], np.cumsum(seg_length(grid[:-1], grid[1:]))])
    total = cum[-1]
    targets = np.linspace(0.0, total, n)
    idx = np.clip(np.searchsorted(cum, targets) - 1, 0, len(grid) - 2)
    a, base = grid[idx], cum[idx]
    us = a + (targets - base) / np.maximum(cum[idx + 1] - base, 1e-300) * (grid[idx + 1] - a)
    for _ in range(30):
        step = (base + seg_length(a, us) - targets) / np.sqrt(np.abs(curve.jet_unchecked(us).speed2))
        us = np.clip(us - step, grid[idx], grid[idx + 1])
        if np.max(np.abs(step)) < 1e-15 * max(1.0, abs(dom[0]), abs(dom[1])):
            break
    us[0], us[-1] = dom

    j = curve.jet_unchecked(us)
    sig = np.sqrt(np.abs(j.speed2))
    dsig = sign * (j.dp * j.ddp - j.ds * j.dds) / sig
    dp, ds = j.dp / sig, j.ds / sig
    ddp = (j.ddp * sig - j.dp * dsig) / sig**3
    dds = (j.dds * sig - j.ds * dsig) / sig**3
    return sampled_curve(targets, j.p, j.s, dp, ds, ddp, dds, source_u=us)


# ---------------------------------------------------------------------------
# regularity


class RegularPiece(NamedTuple):
    interval: tuple[float, float]
    eps: int
    eps_star: int


def metric_factors(kind, b, jet: ProfileJet):
    """Return ``(speed^2, q^2)``: ``dp^2 - ds^2`` and ``S^2 - b^2 P^2``."""
    P, S = to_generic(kind, jet.p, jet.s)
    return jet.speed2, S**2 - b**2 * P**2


def regularity_scan(surface, interval, n: int = 400) -> list[RegularPiece]:
    """Split ``interval`` at zeros of speed^2 and q^2; label each piece with (eps, eps*).

    ``surface`` needs ``kind``, ``b`` and ``profile`` attributes.
    """
    if n < 2:
        raise BadParameter("n must be >= 2")
    kind, b, curve = surface.kind, surface.b, surface.profile
    lo, hi = float(interval[0]), float(interval[1])
    grid = np.linspace(lo, hi, n)

    def factors(u):
        with np.errstate(all="ignore"):
            return metric_factors(kind, b, curve.jet_unchecked(u))

    f_speed, f_q = factors(grid)
    breaks = {lo, hi}
    for idx, vals in ((0, f_speed), (1, f_q)):
        vals = np.where(np.isfinite(vals), vals, 0.0)
        small = np.abs(vals) <= TAU_REG
        breaks.update(grid[small].tolist())
        sgn = np.sign(vals)
        for i in np.nonzero((sgn[:-1] * sgn[1:]) < 0)[0]:
            g = lambda t, idx=idx: float(factors(t)[idx])
            breaks.add(optimize.brentq(g, grid[i], grid[i + 1], xtol=1e-13, rtol=4 * np.finfo(float).eps))

    pts = sorted(breaks)
    pieces = []
    for a, c in zip(pts[:-1], pts[1:]):
        if c - a < 1e-9:
            continue
        probe = np.linspace(a, c, 7)[1:-1]
        sp2, q2 = factors(probe)
        if not (np.all(np.isfinite(sp2)) and np.all(np.isfinite(q2))):
            continue
        if np.min(np.abs(sp2)) <= TAU_REG or np.min(np.abs(q2)) <= TAU_REG:
            continue
        e, es = np.sign(sp2), np.sign(q2)
        if np.any(e != e[0]) or np.any(es != es[0]):
            continue
        pieces.append(RegularPiece((a, c), int(e[0]), int(es[0])))
    return pieces


def _clip_unit(x):
    x = np.asarray(x, float)
    if np.any(np.abs(x) > 1 + 1e-12):
        raise DomainViolation("arcsine argument outside [-1, 1]")
    return np.clip(x, -1.0, 1.0)
