"""Closed-form geometry of the rotational surfaces M1(b) and M2(b).

    M1(b): r(u, v) = (w sinh v, y cosh bv, y sinh bv, w cosh v)
    M2(b): r(u, v) = (x cos v, x sin v, z cos bv, z sin bv)

Frames, second fundamental form and connection forms are evaluated from
the profile 2-jet with the standard moving frame e1 = q^-1 d/dv,
e2 = A^-1 d/du and the two normals e3, e4.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadParameter, SingularFrame
from .profiles import TAU_REG, ProfileCurve, ProfileJet, check_kind, metric_factors
from .pseudo_euclid import gram, inner


@dataclass(frozen=True)
class SurfaceFamily:
    kind: str
    b: float
    profile: ProfileCurve

    def __post_init__(self):
        check_kind(self.kind)
        if not (np.isfinite(self.b) and self.b > 0):
            raise BadParameter(f"b must be positive, got {self.b}")

    @property
    def is_planar(self) -> bool:
        """True for the b = 1 degenerate profiles p = c0 s (an open part of a plane)."""
        if self.b != 1:
            return False
        lo, hi = self.profile.domain
        j = self.profile.jet_unchecked(np.linspace(lo, hi, 9)[1:-1])
        cross = j.p * j.ds - j.s * j.dp
        return bool(np.max(np.abs(cross)) < 1e-12 * max(1.0, float(np.max(np.abs(j.p) + np.abs(j.s)))))

    def jet(self, u) -> ProfileJet:
        return self.profile.jet(u)


@dataclass(frozen=True)
class FramePoint:
    e1: np.ndarray
    e2: np.ndarray
    e3: np.ndarray
    e4: np.ndarray
    eps1: int
    eps2: int
    eps3: int
    eps4: int

    def matrix(self) -> np.ndarray:
        return np.stack([self.e1, self.e2, self.e3, self.e4])

    @property
    def signs(self):
        return (self.eps1, self.eps2, self.eps3, self.eps4)


@dataclass(frozen=True)
class FundamentalData:
    A: float
    q: float
    eps: int
    eps_star: int
    h311: float
    h322: float
    h412: float
    w12e1: float
    w34e1: float

    def astuple(self):
        return (self.h311, self.h322, self.h412, self.w12e1, self.w34e1)


def _position(kind, b, p, s, v):
    if kind == "M1":
        y, w = p, s
        return np.stack(
            [w * np.sinh(v), y * np.cosh(b * v), y * np.sinh(b * v), w * np.cosh(v)], axis=-1
        )
    x, z = p, s
    return np.stack([x * np.cos(v), x * np.sin(v), z * np.cos(b * v), z * np.sin(b * v)], axis=-1)


def _partials(kind, b, j: ProfileJet, v):
    """Return (dr/du, dr/dv)."""
    if kind == "M1":
        r_u = _position(kind, b, j.dp, j.ds, v)
        y, w = j.p, j.s
        r_v = np.stack(
            [w * np.cosh(v), b * y * np.sinh(b * v), b * y * np.cosh(b * v), w * np.sinh(v)], axis=-1
        )
        return r_u, r_v
    r_u = _position(kind, b, j.dp, j.ds, v)
    x, z = j.p, j.s
    r_v = np.stack(
        [-x * np.sin(v), x * np.cos(v), -b * z * np.sin(b * v), b * z * np.cos(b * v)], axis=-1
    )
    return r_u, r_v


def eval_point(surface: SurfaceFamily, u, v):
    """Position vector(s); ``u`` and ``v`` broadcast."""
    u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
    j = surface.jet(u)
    return _position(surface.kind, surface.b, j.p, j.s, v)


def _scales(surface: SurfaceFamily, j: ProfileJet):
    sp2, q2 = metric_factors(surface.kind, surface.b, j)
    if not (abs(sp2) > TAU_REG and abs(q2) > TAU_REG):
        raise SingularFrame(f"A^2 = {abs(sp2):.3e}, q^2 = {abs(q2):.3e}")
    A, q = np.sqrt(abs(sp2)), np.sqrt(abs(q2))
    return A, q, (1 if sp2 > 0 else -1), (1 if q2 > 0 else -1)


def eval_frame(surface: SurfaceFamily, u: float, v: float) -> FramePoint:
    kind, b = surface.kind, surface.b
    j = surface.jet(float(u))
    A, q, eps, eps_s = _scales(surface, j)
    r_u, r_v = _partials(kind, b, j, v)
    e1, e2 = r_v / q, r_u / A
    sgn = -eps * eps_s / q
    if kind == "M1":
        yp, wp, y, w = j.dp, j.ds, j.p, j.s
        e3 = np.array([yp * np.sinh(v), wp * np.cosh(b * v), wp * np.sinh(b * v), yp * np.cosh(v)]) / A
        e4 = sgn * np.array([b * y * np.cosh(v), w * np.sinh(b * v), w * np.cosh(b * v), b * y * np.sinh(v)])
    else:
        xp, zp, x, z = j.dp, j.ds, j.p, j.s
        e3 = np.array([zp * np.cos(v), zp * np.sin(v), xp * np.cos(b * v), xp * np.sin(b * v)]) / A
        e4 = sgn * np.array([b * z * np.sin(v), -b * z * np.cos(v), x * np.sin(b * v), -x * np.cos(b * v)])
    return FramePoint(e1, e2, e3, e4, eps_s, eps, -eps, -eps_s)


def fundamental_data(surface: SurfaceFamily, u: float) -> FundamentalData:
    """Second fundamental form and connection-form coefficients at ``u``.

    The values do not depend on ``v``.  Structural zeros (h312, h411, h422,
    w12(e2), w34(e2)) are not stored.
    """
    b = surface.b
    j = surface.jet(float(u))
    A, q, eps, es = _scales(surface, j)
    Aq2 = A * q * q
    if surface.kind == "M1":
        y, w, yp, wp, ypp, wpp = j.astuple()
        h311 = (b * b * y * wp - w * yp) / Aq2
        h322 = (wp * ypp - yp * wpp) / A**3
        h412 = eps * es * b * (w * yp - y * wp) / Aq2
        w12 = (b * b * y * yp - w * wp) / Aq2
        w34 = eps * es * b * (w * wp - y * yp) / Aq2
    else:
        x, z, xp, zp, xpp, zpp = j.astuple()
        h311 = (b * b * z * xp - x * zp) / Aq2
        h322 = (zp * xpp - xp * zpp) / A**3
        h412 = eps * es * b * (z * xp - x * zp) / Aq2
        w12 = (b * b * z * zp - x * xp) / Aq2
        w34 = eps * es * b * (z * zp - x * xp) / Aq2
    coeffs = (float(t) for t in (h311, h322, h412, w12, w34))
    return FundamentalData(float(A), float(q), eps, es, *coeffs)


def mean_curvature_coefficient(fd: FundamentalData) -> float:
    return -0.5 * (fd.eps * fd.eps_star * fd.h311 + fd.h322)


def mean_curvature(surface: SurfaceFamily, u: float, v: float = 0.0):
    """Return ``(c, H, v)`` with ``H = c e3`` and ``c = -(eps eps* h311 + h322)/2``."""
    c = mean_curvature_coefficient(fundamental_data(surface, u))
    return float(c), c * eval_frame(surface, u, v).e3, v


def induced_metric(surface: SurfaceFamily, u: float, v: float = 0.0):
    """Return ``(g_vv, g_uu)``; the metric is diagonal in ``(v, u)``."""
    j = surface.jet(float(u))
    r_u, r_v = _partials(surface.kind, surface.b, j, v)
    g_vv, g_uu, g_uv = float(inner(r_v, r_v)), float(inner(r_u, r_u)), float(inner(r_u, r_v))
    scale = max(1.0, abs(g_vv), abs(g_uu))
    assert abs(g_uv) <= 1e-10 * scale, f"off-diagonal metric term {g_uv}"
    return g_vv, g_uu


def frame_deviation(frame: FramePoint) -> float:
    """Max entry of Gram(e1..e4) - diag(eps1..eps4)."""
    return float(np.max(np.abs(gram(frame.matrix()) - np.diag(frame.signs))))
