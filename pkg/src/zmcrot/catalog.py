"""Named zero-mean-curvature examples.

Each entry fixes the surface, the sampling window and the closed-form family
the profile belongs to, together with the labels the analysis is expected to
reproduce.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import BadParameter
from .profiles import (
    Arcsine,
    Explicit,
    Hyperbolic,
    Power,
    Quadratic,
    make_profile,
)
from .surface_geom import SurfaceFamily

POS = "spacelike-positive-definite"
NEG = "spacelike-negative-definite"
TIME = "timelike"


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    surface: SurfaceFamily
    family: object
    primary_signs: tuple[int, int]
    a0: float | None
    # (sub-window, expected label) pairs; every regular piece inside the
    # sub-window must carry the label
    labels: tuple = field(default=())
    ode_start: float = 0.0

    @property
    def window(self):
        return self.surface.profile.domain

    @property
    def kind(self):
        return self.surface.kind

    @property
    def b(self):
        return self.surface.b


def _entry(name, kind, b, profile_family, window, family, signs, a0, labels, u0):
    prof = make_profile(profile_family, window)
    return CatalogEntry(name, SurfaceFamily(kind, b, prof), family, signs, a0, tuple(labels), u0)


def vranceanu(a: float = 1.0, c: float = 0.0, kind: str = "M1") -> CatalogEntry:
    """Vranceanu surface with ``f(u) = a cosh(2u + c)^(-1/2)``.

    Its profile ``(f sinh u, f cosh u)`` lies on the conic
    ``(p + s)^2 + e^(-2c) (s - p)^2 = 2 a^2 e^(-c)``.
    """
    if a == 0:
        raise BadParameter("vranceanu needs a != 0")
    fam = Quadratic(math.exp(-2 * c), 2 * a * a * math.exp(-c))
    label = POS if kind == "M1" else TIME
    return _entry(
        f"vranceanu({a:g},{c:g})", kind, 1.0, Explicit("vranceanu", a, c), (-1.0, 1.0),
        fam, (1, 1) if kind == "M1" else (1, -1), None, [((-1.0, 1.0), label)], 0.0,
    )


def _build():
    q4 = math.pi / 4
    entries = [
        _entry("M1-circle", "M1", 1.0, Quadratic(1, 2), (-q4, q4), Quadratic(1, 2),
               (1, 1), None, [((-q4, q4), POS)], 0.0),
        _entry("M1-hyperbola", "M1", 1.0, Explicit("u-inv"), (0.2, 3.0), Quadratic(-1, 4),
               (-1, 1), None, [((0.2, 3.0), TIME)], 2.0),
        _entry("ex3.4", "M1", 0.5, Explicit("ex3.4"), (0.0, q4), Arcsine(0.75, 0.5),
               (1, 1), 0.75, [((0.0, q4), POS)], 0.3),
        _entry("ex3.5", "M1", 2.0, Explicit("ex3.5"), (0.0, 2.0), Hyperbolic(-3, 2, 1),
               (1, -1), -3.0, [((0.0, 2.0), TIME)], 0.5),
        _entry("ex3.6", "M1", 2.0, Explicit("ex3.6"), (0.0, 2.0), Power(1, 2),
               (1, -1), 0.0, [((0.0, 0.5), TIME), ((0.5, 2.0), TIME)], 1.0),
        _entry("M2-circle", "M2", 1.0, Explicit("cos-sin"), (-q4, q4), Quadratic(1, 2),
               (-1, 1), None, [((-q4, q4), TIME)], 0.0),
        _entry("M2-hyperbola", "M2", 1.0, Explicit("u-inv"), (0.2, 3.0), Quadratic(-1, 4),
               (1, 1), None, [((1.0, 3.0), POS), ((0.2, 1.0), NEG)], 2.0),
        _entry("ex3.10", "M2", 2.0, Explicit("ex3.10"), (0.0, 1.0),
               Hyperbolic(3, 2, math.e, kind="M2"),
               (1, 1), 3.0, [((1 / 3, 1.0), POS), ((0.0, 1 / 3), NEG)], 0.5),
        _entry("ex3.11", "M2", 2.0, Explicit("ex3.11"), (0.0, 2.0), Power(1, 2, kind="M2"),
               (1, 1), 0.0, [((0.0, 0.5), POS), ((0.5, 2.0), NEG)], 1.0),
        _entry("ex3.12", "M2", 0.5, Explicit("ex3.12"), (math.pi / 8, q4),
               Arcsine(-0.75, 0.5, -q4, eps_star=-1, kind="M2"),
               (1, -1), -0.75, [((math.pi / 8, q4), TIME)], 0.6),
    ]
    entries.append(vranceanu())
    return {e.name: e for e in entries}


CATALOG: dict[str, CatalogEntry] = _build()
CATALOG_NAMES = tuple(n for n in CATALOG if not n.startswith("vranceanu")) + ("vranceanu",)


def get_example(name: str, a: float = 1.0, c: float = 0.0) -> CatalogEntry:
    if name == "vranceanu" or name.startswith("vranceanu("):
        return vranceanu(a, c)
    try:
        return CATALOG[name]
    except KeyError:
        raise BadParameter(f"unknown example {name!r}; choose from {', '.join(CATALOG_NAMES)}") from None
