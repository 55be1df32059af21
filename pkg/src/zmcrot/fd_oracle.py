"""Finite-difference oracle for the surface geometry.

Everything here is recomputed from the position map ``r(u, v)`` alone
(plus the normal fields, which are differentiated numerically as well), so
it shares no coefficient formula with ``surface_geom.fundamental_data``.

Directional derivatives along ``e1`` and ``e2`` are ``q^-1 d/dv`` and
``A^-1 d/du``; ``A`` and ``q`` themselves come from FD tangents.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BadParameter, SingularFrame, StepTooLarge
from .profiles import TAU_REG
from .pseudo_euclid import inner
from .surface_geom import SurfaceFamily, eval_frame, eval_point


@dataclass(frozen=True)
class OracleConfig:
    # second differences carry round-off ~ eps |r| / h^2; with one Richardson
    # level the total error bottoms out near h = 2e-3
    h: float = 2e-3
    richardson_levels: int = 1
    probe_v: tuple = field(default=(0.0, 0.7, -0.7))

    def __post_init__(self):
        if not self.h > 0:
            raise BadParameter("h must be positive")
        if self.richardson_levels < 0:
            raise BadParameter("richardson_levels must be >= 0")


def _richardson(estimate, h, levels, order=2):
    """Extrapolate ``estimate(h)`` (error ``O(h^order)``, even powers) ``levels`` times."""
    table = [estimate(h / 2**k) for k in range(levels + 1)]
    for lev in range(1, levels + 1):
        f = 2 ** (order + 2 * (lev - 1))
        table = [(f * table[i + 1] - table[i]) / (f - 1) for i in range(len(table) - 1)]
    return table[0]


def _d1(f, x, h):
    return (f(x + h) - f(x - h)) / (2 * h)


def _d2(f, x, h):
    return (f(x + h) - 2 * f(x) + f(x - h)) / (h * h)


def _dmixed(f, u, v, h):
    return (f(u + h, v + h) - f(u + h, v - h) - f(u - h, v + h) + f(u - h, v - h)) / (4 * h * h)


class _Probe:
    """FD derivatives of ``r`` at one point, with step checks."""

    def __init__(self, surface: SurfaceFamily, u, v, cfg: OracleConfig):
        self.surface, self.u, self.v, self.cfg = surface, float(u), float(v), cfg
        lo, hi = surface.profile.domain
        if not (lo < self.u - cfg.h and self.u + cfg.h < hi):
            raise StepTooLarge(f"u +- h = {self.u} +- {cfg.h} leaves {surface.profile.domain}")
        self.frame = eval_frame(surface, self.u, self.v)
        for t in (self.u - cfg.h, self.u + cfg.h):
            other = eval_frame(surface, t, self.v)
            if other.signs != self.frame.signs:
                raise StepTooLarge(f"u +- h crosses the singular locus near {t}")

    def r(self, u, v):
        return eval_point(self.surface, u, v)

    def deriv(self, kind):
        u, v, h, lev = self.u, self.v, self.cfg.h, self.cfg.richardson_levels
        r = self.r
        fns = {
            "u": lambda hh: _d1(lambda t: r(t, v), u, hh),
            "v": lambda hh: _d1(lambda t: r(u, t), v, hh),
            "uu": lambda hh: _d2(lambda t: r(t, v), u, hh),
            "vv": lambda hh: _d2(lambda t: r(u, t), v, hh),
            "uv": lambda hh: _dmixed(r, u, v, hh),
        }
        return _richardson(fns[kind], h, lev)

    def scales(self):
        r_u, r_v = self.deriv("u"), self.deriv("v")
        A2, q2 = inner(r_u, r_u), inner(r_v, r_v)
        if not (abs(A2) > TAU_REG and abs(q2) > TAU_REG):
            raise SingularFrame(f"FD scales A^2 = {A2:.3e}, q^2 = {q2:.3e}")
        A, q = np.sqrt(abs(A2)), np.sqrt(abs(q2))
        return A, q, r_u, r_v

    def normal_deriv(self, which, axis):
        """FD derivative of a frame field ``e3``/``e4`` along ``u`` or ``v``."""
        u, v, h, lev = self.u, self.v, self.cfg.h, self.cfg.richardson_levels
        idx = {"e1": 0, "e2": 1, "e3": 2, "e4": 3}[which]

        def field_at(uu, vv):
            return eval_frame(self.surface, uu, vv).matrix()[idx]

        if axis == "u":
            return _richardson(lambda hh: _d1(lambda t: field_at(t, v), u, hh), h, lev)
        return _richardson(lambda hh: _d1(lambda t: field_at(u, t), v, hh), h, lev)


def oracle_second_fundamental_form(surface, u, v=0.0, cfg: OracleConfig | None = None):
    """``(h311, h322, h412, h312, h411, h422)`` from FD second derivatives of ``r``.

    ``h^r_ij = <D_{e_j} e_i, e_r>``; the tangential part of the frame
    derivative drops out under the normal projection, so
    ``h^r_11 = <r_vv, e_r>/q^2``, ``h^r_22 = <r_uu, e_r>/A^2`` and
    ``h^r_12 = <r_uv, e_r>/(A q)``.
    """
    pr = _Probe(surface, u, v, cfg or OracleConfig())
    A, q, _, _ = pr.scales()
    r_uu, r_vv, r_uv = pr.deriv("uu"), pr.deriv("vv"), pr.deriv("uv")
    e3, e4 = pr.frame.e3, pr.frame.e4
    h11 = lambda e: float(inner(r_vv, e)) / q**2
    h22 = lambda e: float(inner(r_uu, e)) / A**2
    h12 = lambda e: float(inner(r_uv, e)) / (A * q)
    return h11(e3), h22(e3), h12(e4), h12(e3), h11(e4), h22(e4)


def oracle_mean_curvature(surface, u, v=0.0, cfg: OracleConfig | None = None) -> np.ndarray:
    """``H = 1/2 sum_i sum_r eps_i eps_r h^r_ii e_r`` as a vector of E^4_2."""
    c3, c4 = oracle_mean_curvature_components(surface, u, v, cfg)
    fr = eval_frame(surface, u, v)
    return c3 * fr.e3 + c4 * fr.e4


def oracle_mean_curvature_components(surface, u, v=0.0, cfg: OracleConfig | None = None):
    """``(c3, c4)`` with ``H = c3 e3 + c4 e4`` from oracle coefficients."""
    fr = eval_frame(surface, u, v)
    h311, h322, _, _, h411, h422 = oracle_second_fundamental_form(surface, u, v, cfg)
    e1s, e2s, e3s, e4s = fr.signs
    return 0.5 * e3s * (e1s * h311 + e2s * h322), 0.5 * e4s * (e1s * h411 + e2s * h422)


def oracle_connection_forms(surface, u, v=0.0, cfg: OracleConfig | None = None):
    """``(w12(e1), w34(e1), w12(e2), w34(e2))`` from FD derivatives of the frame.

    ``w_AB(X) = <D_X e_A, e_B>``.  ``w12`` uses FD second derivatives of ``r``
    (``D_{e_k} e_1`` has ``e_2``-part ``<r_{v x_k}, e_2>/(q s_k)``); ``w34``
    differentiates the normal field ``e3`` numerically.
    """
    pr = _Probe(surface, u, v, cfg or OracleConfig())
    A, q, r_u, _ = pr.scales()
    e2 = r_u / A
    r_vv, r_uv = pr.deriv("vv"), pr.deriv("uv")
    # D_{e1} e1 = r_vv / q^2 + (terms along r_v); D_{e2} e1 = r_uv/(A q) + (terms along r_v)
    w12_e1 = float(inner(r_vv, e2)) / q**2
    w12_e2 = float(inner(r_uv, e2)) / (A * q)
    e4 = pr.frame.e4
    w34_e1 = float(inner(pr.normal_deriv("e3", "v"), e4)) / q
    w34_e2 = float(inner(pr.normal_deriv("e3", "u"), e4)) / A
    return w12_e1, w34_e1, w12_e2, w34_e2


def oracle_coefficients(surface, u, v=0.0, cfg: OracleConfig | None = None):
    """The five stored coefficients ``(h311, h322, h412, w12e1, w34e1)`` and five structural zeros."""
    h311, h322, h412, h312, h411, h422 = oracle_second_fundamental_form(surface, u, v, cfg)
    w12e1, w34e1, w12e2, w34e2 = oracle_connection_forms(surface, u, v, cfg)
    return (h311, h322, h412, w12e1, w34e1), (h312, h411, h422, w12e2, w34e2)
