"""Linear algebra in E^4_2, the real 4-space with signature (+, +, -, -)."""
from __future__ import annotations

from enum import Enum

import numpy as np

from .errors import BadParameter, NearNull

SIGNATURE = np.array([1.0, 1.0, -1.0, -1.0])
TAU_NULL = 1e-10


class CausalClass(str, Enum):
    SPACELIKE = "spacelike"
    TIMELIKE = "timelike"
    LIGHTLIKE = "lightlike"


def vec4(x1, x2, x3, x4) -> np.ndarray:
    v = np.array([x1, x2, x3, x4], dtype=float)
    if not np.all(np.isfinite(v)):
        raise BadParameter(f"non-finite coordinates: {v}")
    return v


def inner(a, b):
    """Indefinite inner product; broadcasts over leading axes."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    out = a[..., 0] * b[..., 0] + a[..., 1] * b[..., 1] - a[..., 2] * b[..., 2] - a[..., 3] * b[..., 3]
    return float(out) if np.ndim(out) == 0 else out


def null_band(v) -> float:
    """Absolute width of the band around zero treated as null for ``v``."""
    l1 = float(np.sum(np.abs(v)))
    return TAU_NULL * max(1.0, l1 * l1)


def causal_character(v) -> CausalClass:
    v = np.asarray(v, dtype=float)
    if not np.any(v):
        return CausalClass.SPACELIKE
    n = inner(v, v)
    if abs(n) <= null_band(v):
        return CausalClass.LIGHTLIKE
    return CausalClass.SPACELIKE if n > 0 else CausalClass.TIMELIKE


def normalize(v):
    """Return ``(v / sqrt|<v,v>|, sign <v,v>)``; raises NearNull inside the null band."""
    v = np.asarray(v, dtype=float)
    n = inner(v, v)
    if abs(n) <= null_band(v):
        raise NearNull(f"|<v,v>| = {abs(n):.3e} is within the null band")
    return v / np.sqrt(abs(n)), (1 if n > 0 else -1)


def gram(vectors) -> np.ndarray:
    """Gram matrix of the indefinite inner product for a stack of vectors."""
    m = np.asarray(vectors, dtype=float)
    return (m * SIGNATURE) @ m.T


def boost(v, t: float) -> np.ndarray:
    """Hyperbolic rotation mixing x1 and x4; an isometry of E^4_2."""
    v = np.asarray(v, dtype=float)
    ch, sh = np.cosh(t), np.sinh(t)
    out = v.copy()
    out[..., 0] = v[..., 0] * ch + v[..., 3] * sh
    out[..., 3] = v[..., 0] * sh + v[..., 3] * ch
    return out
