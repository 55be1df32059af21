import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zmcrot.catalog import CATALOG, NEG, POS, TIME
from zmcrot.errors import BadParameter, DomainViolation, MixedSigns, SingularFrame
from zmcrot.profiles import Arcsine, Hyperbolic, Power, Quadratic, interior_samples, make_profile
from zmcrot.surface_geom import fundamental_data, induced_metric, mean_curvature_coefficient
from zmcrot.zmc_analysis import (
    CausalLabel,
    classify_causal,
    closed_form_membership,
    codazzi_residuals,
    label_for,
    normalized_first_integral,
    verify_surface,
    zmc_residual,
)

from conftest import surf


def test_zmc_residual_examples(m1_circle_b2):
    assert abs(zmc_residual(surf("M1", 1.0, Quadratic(1, 2)), 0.2)) < 1e-10
    assert abs(zmc_residual(surf("M1", 2.0, "ex3.6"), 0.7)) < 1e-10
    assert abs(zmc_residual(m1_circle_b2, 0.3)) > 1e-3


def test_zmc_residual_singular():
    s = surf("M1", 1.0, "sin-cos", (0, math.pi / 2))
    with pytest.raises(SingularFrame):
        zmc_residual(s, math.pi / 4)


@pytest.mark.parametrize(
    "kind, b, name, us, a0",
    [
        ("M1", 0.5, "ex3.4", (0.2, 0.5, 0.7), 0.75),
        ("M1", 2.0, "ex3.5", (0.3, 0.8), -3.0),
        ("M2", 2.0, "ex3.10", (0.5,), 3.0),
    ],
)
def test_first_integral_values(kind, b, name, us, a0):
    s = surf(kind, b, name)
    for u in us:
        assert abs(normalized_first_integral(s, u) - a0) < 1e-9


def test_first_integral_rejects_b1(m1_circle):
    with pytest.raises(BadParameter):
        normalized_first_integral(m1_circle, 0.1)


def test_first_integral_spread_on_non_zmc(m1_circle_b2):
    fs = [normalized_first_integral(m1_circle_b2, u) for u in np.linspace(0.05, 0.7, 50)]
    assert max(fs) - min(fs) > 1e-2


@pytest.mark.parametrize(
    "fam, dom",
    [
        (Arcsine(0.75, 0.5), (0.05, 1.0)),
        (Arcsine(-3.0, 2.0, 0.3, branch=-1), (-1.0, 1.0)),
        (Arcsine(-0.75, 0.5, -math.pi / 4, eps_star=-1, kind="M2"), (0.45, 0.75)),
        (Hyperbolic(-3, 2, 1), (0.1, 2)),
        (Hyperbolic(3, 2, math.e, kind="M2"), (0.4, 1.5)),
        (Hyperbolic(-3, 2, 1, radicand_sign=-1), (0.3, 2)),
        (Power(1, 2), (0.6, 2)),
    ],
)
def test_first_integral_matches_family(fam, dom):
    s = surf(fam.kind, fam.b, fam, dom)
    rep = verify_surface(s, samples=50)
    a0 = getattr(fam, "a0", 0.0)
    es = getattr(fam, "eps_star", 1)
    assert rep.pieces
    for piece in rep.pieces:
        # eps* F is constant along the curve: F = a0 on pieces whose eps*
        # matches the descriptor and -a0 where both signs flip
        assert abs(piece.first_integral_mean - a0 * es * piece.eps_star) < 1e-8
        assert piece.first_integral_spread < 1e-8
        assert piece.max_mean_curvature_scaled < 1e-9


@pytest.mark.parametrize(
    "surface, u",
    [
        (surf("M1", 2.0, "sin-cos"), 0.3),
        (surf("M1", 1.0, "sin-cos"), 0.15),
        (surf("M2", 2.0, "ex3.10"), 0.5),
    ],
)
def test_codazzi_examples(surface, u):
    r1, r2 = codazzi_residuals(surface, u, 1e-4)
    assert abs(r1) < 1e-6 and abs(r2) < 1e-6


def test_label_for():
    assert label_for(1, 1) is CausalLabel.SPACELIKE_POSITIVE
    assert label_for(-1, -1) is CausalLabel.SPACELIKE_NEGATIVE
    assert label_for(1, -1) is CausalLabel.TIMELIKE
    assert label_for(-1, 1) is CausalLabel.TIMELIKE


def test_classify_examples():
    assert classify_causal(surf("M1", 0.5, "ex3.4"), (0, math.pi / 4)).value == POS
    assert classify_causal(surf("M1", 2.0, "ex3.5"), (0.01, 2)).value == TIME
    assert classify_causal(surf("M1", 1.0, "cos-sin"), (math.pi / 4, 3 * math.pi / 4)).value == POS


def test_classify_mixed_signs():
    with pytest.raises(MixedSigns):
        classify_causal(surf("M2", 1.0, "u-inv"), (0.5, 2.0))


def test_labels_agree_with_metric_signs():
    for e in CATALOG.values():
        for lab in verify_surface(e.surface, samples=10).causal:
            for u in interior_samples(lab["interval"], 12, 0.01):
                g_vv, g_uu = induced_metric(e.surface, u)
                if lab["label"] == POS:
                    assert g_vv > 0 and g_uu > 0
                elif lab["label"] == NEG:
                    assert g_vv < 0 and g_uu < 0
                else:
                    assert g_vv * g_uu < 0


def test_membership_examples():
    ex34 = make_profile(surf("M1", 0.5, "ex3.4").profile.family)
    assert closed_form_membership(ex34, Arcsine(0.75, 0.5)) < 1e-10
    ex35 = surf("M1", 2.0, "ex3.5").profile
    assert closed_form_membership(ex35, Hyperbolic(-3, 2, 1)) < 1e-10
    # (u^2, u) against the wrong family
    with pytest.raises(DomainViolation):
        closed_form_membership(surf("M1", 2.0, "ex3.6").profile, Arcsine(0.75, 0.5))
    wrong = surf("M1", 2.0, "ex3.6", (0.1, 0.5)).profile
    assert closed_form_membership(wrong, Arcsine(0.75, 0.5)) > 0.1


CASES = list(CATALOG.values()) + [
    e for e in [surf("M1", 2.0, "sin-cos"), surf("M2", 3.0, "ex3.5", (0.1, 1.5))]
]


@settings(max_examples=50, deadline=None)
@given(idx=st.integers(0, len(CASES) - 1), t=st.floats(0.03, 0.97))
def test_residual_and_mean_curvature_vanish_together(idx, t):
    c = CASES[idx]
    s = getattr(c, "surface", c)
    u = s.profile.domain[0] + t * (s.profile.domain[1] - s.profile.domain[0])
    try:
        fd = fundamental_data(s, u)
    except SingularFrame:
        return
    # zmc_residual = -2 A^3 * coefficient (a positive multiple up to the sign)
    z, c3 = zmc_residual(s, u), mean_curvature_coefficient(fd)
    assert math.isclose(z, -2 * fd.A**3 * c3, rel_tol=1e-8, abs_tol=1e-9 * max(1.0, fd.A**3))


def test_verify_report_negative_control():
    rep = verify_surface(surf("M1", 2.0, "sin-cos"), samples=50)
    assert rep.verdict == "fail"
    assert rep.max_mean_curvature > 1e-3


def test_verify_report_fields():
    e = CATALOG["ex3.10"]
    rep = verify_surface(e.surface, primary_signs=e.primary_signs, surface_id="ex3.10")
    d = rep.to_dict()
    assert d["verdict"] == "pass" and d["schema_version"] == "1.0"
    assert abs(d["first_integral_mean"] - 3) < 1e-7
    assert [c["label"] for c in d["causal"]] == [NEG, POS]
    assert d["pieces"][d["primary_piece"]]["label"] == POS


def test_verify_is_seeded():
    e = CATALOG["ex3.5"]
    a = verify_surface(e.surface, rng=np.random.default_rng(3)).to_dict()
    b = verify_surface(e.surface, rng=np.random.default_rng(3)).to_dict()
    assert a == b
