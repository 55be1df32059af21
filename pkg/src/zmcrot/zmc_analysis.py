"""Zero-mean-curvature diagnostics for M1(b) / M2(b)."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from enum import Enum

import numpy as np

from .errors import (
    BadParameter,
    LightlikeTangent,
    MixedSigns,
    SingularFrame,
    StepTooLarge,
)
from .profiles import (
    TAU_REG,
    ProfileCurve,
    RegularPiece,
    interior_samples,
    metric_factors,
    regularity_scan,
)
from .surface_geom import SurfaceFamily, fundamental_data, mean_curvature_coefficient

SCHEMA_VERSION = "1.0"

# mean curvature is judged relative to max(1, |h311| + |h322|): near the
# singular locus the two terms grow like 1/(A q^2) and cancel to round-off
DEFAULT_THRESHOLDS = {
    "mean_curvature_scaled": 1e-8,
    "codazzi": 1e-6,
    "first_integral_spread": 1e-8,
}


class CausalLabel(str, Enum):
    SPACELIKE_POSITIVE = "spacelike-positive-definite"
    SPACELIKE_NEGATIVE = "spacelike-negative-definite"
    TIMELIKE = "timelike"


def label_for(eps: int, eps_star: int) -> CausalLabel:
    if eps * eps_star < 0:
        return CausalLabel.TIMELIKE
    return CausalLabel.SPACELIKE_POSITIVE if eps_star > 0 else CausalLabel.SPACELIKE_NEGATIVE


def _regular_jet(surface: SurfaceFamily, u: float):
    j = surface.jet(float(u))
    sp2, q2 = metric_factors(surface.kind, surface.b, j)
    if abs(sp2) <= TAU_REG:
        raise LightlikeTangent(f"speed^2 = {sp2:.3e} at u = {u}")
    if abs(q2) <= TAU_REG:
        raise SingularFrame(f"q^2 = {q2:.3e} at u = {u}")
    return j, sp2, q2


def zmc_residual(surface: SurfaceFamily, u: float) -> float:
    """Left side of the zero-mean-curvature ODE; equals -2 A^3 times the H coefficient."""
    b = surface.b
    try:
        j, sp2, q2 = _regular_jet(surface, u)
    except LightlikeTangent as exc:
        raise SingularFrame(str(exc)) from exc
    if surface.kind == "M1":
        y, w, yp, wp, ypp, wpp = j.astuple()
        return float(wp * ypp - yp * wpp + sp2 * (b * b * y * wp - w * yp) / q2)
    x, z, xp, zp, xpp, zpp = j.astuple()
    return float(zp * xpp - xp * zpp + sp2 * (b * b * z * xp - x * zp) / q2)


def normalized_first_integral(surface: SurfaceFamily, u: float) -> float:
    """Parametrization-invariant first integral of the ZMC equation (b != 1).

    ``(b^2 - 1)(b^2 P^2 S'^2 - S^2 P'^2) / |p'^2 - s'^2|`` with ``(P, S) = (y, w)``
    for M1 and ``(z, x)`` for M2.  On a unit-speed profile this is the constant
    a0; it is constant along every zero-mean-curvature profile.
    """
    b = surface.b
    if b == 1:
        raise BadParameter("the first integral is only defined for b != 1")
    j, sp2, _ = _regular_jet(surface, u)
    g = j.generic(surface.kind)
    num = (b * b - 1) * (b * b * g.p**2 * g.ds**2 - g.s**2 * g.dp**2)
    return float(num / abs(sp2))


def _richardson_derivative(f, u, h):
    d1 = (f(u + h) - f(u - h)) / (2 * h)
    d2 = (f(u + h / 2) - f(u - h / 2)) / h
    return (4 * d2 - d1) / 3


def codazzi_residuals(surface: SurfaceFamily, u: float, h: float = 1e-4):
    """Residuals of the two Codazzi identities at ``u``.

    ``e2(f) = A^-1 df/du`` is taken by a central difference with one Richardson
    level.  Both residuals vanish for every profile, ZMC or not.
    """
    fd = fundamental_data(surface, u)
    for t in (u - h, u + h):
        if not surface.profile.contains(t):
            raise StepTooLarge(f"u +- h leaves the profile domain at {t}")
        try:
            other = fundamental_data(surface, t)
        except SingularFrame as exc:
            raise StepTooLarge(f"u +- h reaches a singular point near {t}") from exc
        if (other.eps, other.eps_star) != (fd.eps, fd.eps_star):
            raise StepTooLarge(f"u +- h leaves the regular subinterval near {t}")

    d311 = _richardson_derivative(lambda t: fundamental_data(surface, t).h311, u, h) / fd.A
    d412 = _richardson_derivative(lambda t: fundamental_data(surface, t).h412, u, h) / fd.A
    e, es = fd.eps, fd.eps_star
    r1 = d311 - (es * fd.h412 * fd.w34e1 + fd.w12e1 * (es * fd.h311 - e * fd.h322))
    r2 = d412 - (-e * fd.h322 * fd.w34e1 + 2 * es * fd.h412 * fd.w12e1)
    return float(r1), float(r2)


def classify_causal(surface: SurfaceFamily, subinterval, n: int = 64) -> CausalLabel:
    """Causal label of the surface over a regular subinterval."""
    us = interior_samples(subinterval, n, margin=1e-3)
    j = surface.profile.jet(us)
    sp2, q2 = metric_factors(surface.kind, surface.b, j)
    if np.min(np.abs(sp2)) <= TAU_REG or np.min(np.abs(q2)) <= TAU_REG:
        raise MixedSigns(f"{subinterval} touches the singular locus")
    e, es = np.sign(sp2), np.sign(q2)
    if np.any(e != e[0]) or np.any(es != es[0]):
        raise MixedSigns(f"(eps, eps*) not constant on {subinterval}")
    return label_for(int(e[0]), int(es[0]))


def closed_form_membership(profile: ProfileCurve, family, n: int = 200, solved: bool = True) -> float:
    """Max deviation of ``profile`` from a family's defining equation.

    ``solved=True`` predicts one component from the other (continuous across
    turning points of the predicted component); ``solved=False`` evaluates the
    implicit equation as written.  Sampled curves are checked at their nodes.
    """
    if profile.is_sampled:
        us = profile.family.u
    else:
        us = interior_samples(profile.domain, n)
    j = profile.jet_unchecked(us)
    fn = family.solved_residual if solved else family.implicit_residual
    return float(np.max(fn(j.p, j.s)))


# ---------------------------------------------------------------------------
# reports


@dataclass
class PieceSummary:
    interval: tuple[float, float]
    eps: int
    eps_star: int
    label: str
    samples: int
    max_mean_curvature: float
    max_mean_curvature_scaled: float
    max_zmc_residual: float
    first_integral_mean: float | None
    first_integral_spread: float | None


@dataclass
class VerificationReport:
    surface_id: str
    kind: str
    b: float
    domain: tuple[float, float]
    samples: int
    max_zmc_residual: float
    max_mean_curvature: float
    max_mean_curvature_scaled: float
    max_codazzi_residual_1: float
    max_codazzi_residual_2: float
    first_integral_mean: float | None
    first_integral_spread: float | None
    causal: list[dict]
    pieces: list[PieceSummary]
    primary_piece: int | None
    thresholds: dict
    verdict: str
    schema_version: str = SCHEMA_VERSION
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        return _plain(asdict(self))


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if math.isfinite(f) else None
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def _summarize_piece(surface, piece: RegularPiece, samples, margin) -> PieceSummary:
    us = interior_samples(piece.interval, samples, margin)
    hs, hn, zs, fs = [], [], [], []
    for u in us:
        fd = fundamental_data(surface, u)
        c = abs(mean_curvature_coefficient(fd))
        hs.append(c)
        hn.append(c / max(1.0, abs(fd.h311) + abs(fd.h322)))
        zs.append(abs(zmc_residual(surface, u)))
        if surface.b != 1:
            fs.append(normalized_first_integral(surface, u))
    fmean = float(np.mean(fs)) if fs else None
    fspread = float(np.max(fs) - np.min(fs)) if fs else None
    return PieceSummary(
        tuple(piece.interval), piece.eps, piece.eps_star,
        label_for(piece.eps, piece.eps_star).value, len(us),
        float(max(hs)), float(max(hn)), float(max(zs)), fmean, fspread,
    )


def choose_primary(pieces, primary_signs=None) -> int | None:
    if not pieces:
        return None
    if primary_signs is not None:
        for i, p in enumerate(pieces):
            if (p.eps, p.eps_star) == tuple(primary_signs):
                return i
    return max(range(len(pieces)), key=lambda i: pieces[i].interval[1] - pieces[i].interval[0])


def verify_surface(
    surface: SurfaceFamily,
    domain=None,
    *,
    samples: int = 200,
    margin: float = 1e-3,
    thresholds: dict | None = None,
    surface_id: str = "custom",
    primary_signs=None,
    codazzi_samples: int = 10,
    codazzi_margin: float = 0.05,
    scan_points: int = 400,
    rng: np.random.Generator | None = None,
) -> VerificationReport:
    """Sample every regular piece of ``domain`` and assemble a verification report."""
    if samples < 2:
        raise BadParameter("samples must be >= 2")
    thr = dict(DEFAULT_THRESHOLDS)
    thr.update(thresholds or {})
    rng = rng if rng is not None else np.random.default_rng(0)
    domain = tuple(domain or surface.profile.domain)
    pieces = regularity_scan(surface, domain, scan_points)
    notes = []
    if surface.is_planar:
        notes.append("planar profile: the surface is an open part of a plane")

    summaries = [_summarize_piece(surface, p, samples, margin) for p in pieces]
    c1 = c2 = 0.0
    for p in pieces:
        lo, hi = p.interval
        d = (hi - lo) * codazzi_margin
        for u in rng.uniform(lo + d, hi - d, codazzi_samples):
            h = min(1e-4, (hi - lo) * codazzi_margin / 4)
            r1, r2 = codazzi_residuals(surface, float(u), h)
            c1, c2 = max(c1, abs(r1)), max(c2, abs(r2))

    primary = choose_primary(pieces, primary_signs)
    fmean = summaries[primary].first_integral_mean if primary is not None else None
    spreads = [s.first_integral_spread for s in summaries if s.first_integral_spread is not None]
    fspread = max(spreads) if spreads else None
    max_h = max((s.max_mean_curvature for s in summaries), default=math.nan)
    max_hn = max((s.max_mean_curvature_scaled for s in summaries), default=math.nan)
    max_z = max((s.max_zmc_residual for s in summaries), default=math.nan)

    ok = bool(pieces)
    ok &= max_hn < thr["mean_curvature_scaled"]
    ok &= c1 < thr["codazzi"] and c2 < thr["codazzi"]
    if fspread is not None:
        ok &= fspread < thr["first_integral_spread"]
    if not pieces:
        notes.append("no regular subinterval found")

    return VerificationReport(
        surface_id=surface_id,
        kind=surface.kind,
        b=float(surface.b),
        domain=domain,
        samples=samples,
        max_zmc_residual=max_z,
        max_mean_curvature=max_h,
        max_mean_curvature_scaled=max_hn,
        max_codazzi_residual_1=c1,
        max_codazzi_residual_2=c2,
        first_integral_mean=fmean,
        first_integral_spread=fspread,
        causal=[
            {"interval": list(s.interval), "eps": s.eps, "eps_star": s.eps_star, "label": s.label}
            for s in summaries
        ],
        pieces=summaries,
        primary_piece=primary,
        thresholds=thr,
        verdict="pass" if ok else "fail",
        notes=notes,
    )
