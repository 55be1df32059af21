import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zmcrot.catalog import CATALOG
from zmcrot.errors import BadParameter, OutOfDomain, SingularFrame
from zmcrot.profiles import arclength_reparametrize, interior_samples, regularity_scan
from zmcrot.pseudo_euclid import gram, inner
from zmcrot.surface_geom import (
    SurfaceFamily,
    eval_frame,
    eval_point,
    frame_deviation,
    fundamental_data,
    induced_metric,
    mean_curvature,
    mean_curvature_coefficient,
)

from conftest import surf


def test_eval_point_examples(m1_circle):
    assert np.allclose(eval_point(m1_circle, 0.0, 0.0), [0, 0, 0, 1])
    assert np.allclose(eval_point(surf("M2", 1.0, "cos-sin", (-1, 1)), 0.0, 0.0), [1, 0, 0, 0])
    assert np.allclose(eval_point(surf("M1", 2.0, "ex3.5"), 0.0, 0.0), [0, 0.5, 0, 1])


def test_eval_point_broadcasts(m1_circle):
    U, V = np.meshgrid(np.linspace(-0.5, 0.5, 3), np.linspace(-1, 1, 4), indexing="ij")
    pts = eval_point(m1_circle, U, V)
    assert pts.shape == (3, 4, 4)
    assert np.allclose(pts[1, 2], eval_point(m1_circle, U[1, 2], V[1, 2]))


def test_eval_point_out_of_domain(m1_circle):
    with pytest.raises(OutOfDomain):
        eval_point(m1_circle, 1.0, 0.0)


def test_surface_rejects_bad_b(m1_circle):
    with pytest.raises(BadParameter):
        SurfaceFamily("M1", 0.0, m1_circle.profile)
    with pytest.raises(BadParameter):
        SurfaceFamily("M3", 1.0, m1_circle.profile)


def test_frame_at_origin(m1_circle):
    fr = eval_frame(m1_circle, 0.0, 0.0)
    assert np.allclose(fr.matrix(), [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])
    assert fr.signs == (1, 1, -1, -1)


def test_frame_singular():
    s = surf("M1", 1.0, "sin-cos", (0.0, math.pi / 2))
    with pytest.raises(SingularFrame):
        eval_frame(s, math.pi / 4, 0.0)


def test_fundamental_data_at_origin(m1_circle):
    fd = fundamental_data(m1_circle, 0.0)
    assert np.allclose(fd.astuple(), (-1, 1, 1, 0, 0), atol=1e-15)
    assert (fd.A, fd.q, fd.eps, fd.eps_star) == (1.0, 1.0, 1, 1)


@pytest.mark.parametrize("kind, name", [("M1", "ex3.6"), ("M2", "ex3.11")])
def test_power_profiles_are_zmc(kind, name):
    s = surf(kind, 2.0, name)
    for piece in regularity_scan(s, s.profile.domain):
        for u in interior_samples(piece.interval, 25, 0.01):
            fd = fundamental_data(s, u)
            assert abs(fd.eps * fd.eps_star * fd.h311 + fd.h322) < 1e-10


def test_mean_curvature_examples(m1_circle, m1_circle_b2):
    assert abs(mean_curvature(m1_circle, 0.3)[0]) < 1e-10
    assert abs(mean_curvature(surf("M1", 1.0, "u-inv"), 2.0)[0]) < 1e-10
    c, H, v = mean_curvature(m1_circle_b2, 0.3, 0.4)
    assert abs(c) > 1e-3
    # H is normal and lies along e3
    fr = eval_frame(m1_circle_b2, 0.3, 0.4)
    assert abs(inner(H, fr.e1)) < 1e-12 and abs(inner(H, fr.e2)) < 1e-12
    assert np.allclose(H, c * fr.e3) and v == 0.4


def test_induced_metric_examples(m1_circle):
    g = induced_metric(m1_circle, 0.1)
    assert np.allclose(g, (math.cos(0.2), math.cos(0.2)))
    assert np.allclose(induced_metric(surf("M1", 2.0, "ex3.6"), 1.0), (-3, 3))
    gvv, guu = induced_metric(surf("M2", 1.0, "u-inv"), 2.0)
    assert np.isclose(gvv, 4 - 0.25) and np.isclose(guu, 1 - 1 / 16)


CASES = [(name, e) for name, e in CATALOG.items()]


@settings(max_examples=60, deadline=None)
@given(idx=st.integers(0, len(CASES) - 1), t=st.floats(0.02, 0.98), v=st.floats(-2, 2))
def test_frame_orthonormal(idx, t, v):
    _, e = CASES[idx]
    for piece in regularity_scan(e.surface, e.window):
        lo, hi = piece.interval
        fr = eval_frame(e.surface, lo + t * (hi - lo), v)
        assert frame_deviation(fr) < 1e-9
        eps, es = piece.eps, piece.eps_star
        assert fr.signs == (es, eps, -eps, -es)


@settings(max_examples=60, deadline=None)
@given(idx=st.integers(0, len(CASES) - 1), t=st.floats(0, 1), v=st.floats(-3, 3))
def test_position_norm(idx, t, v):
    _, e = CASES[idx]
    lo, hi = e.window
    u = lo + t * (hi - lo)
    r = eval_point(e.surface, u, v)
    p, s = e.surface.profile.points(u)
    # <r, r> = y^2 - w^2 on M1, x^2 - z^2 on M2
    assert abs(inner(r, r) - (p * p - s * s)) < 1e-10 * max(1.0, float(np.sum(r * r)))


def test_gram_signature_matches_frame(m1_circle):
    fr = eval_frame(m1_circle, 0.2, 0.3)
    assert np.allclose(gram(fr.matrix()), np.diag(fr.signs), atol=1e-12)


def test_mean_curvature_reparametrization_invariant(m1_circle_b2):
    curve = m1_circle_b2.profile.with_domain((0.1, 0.6))
    r = arclength_reparametrize(curve, "M1", n=65)
    s2 = SurfaceFamily("M1", 2.0, r)
    s1 = SurfaceFamily("M1", 2.0, curve)
    for t, u in zip(r.family.u[1:-1:4], r.family.source_u[1:-1:4]):
        c1 = mean_curvature_coefficient(fundamental_data(s1, u))
        c2 = mean_curvature_coefficient(fundamental_data(s2, t))
        assert abs(c1 - c2) < 1e-7
