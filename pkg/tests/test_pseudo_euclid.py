import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from zmcrot.errors import BadParameter, NearNull
from zmcrot.pseudo_euclid import (
    CausalClass,
    boost,
    causal_character,
    gram,
    inner,
    normalize,
    vec4,
)

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
vecs = arrays(np.float64, 4, elements=finite)


@pytest.mark.parametrize(
    "a, expected",
    [((1, 0, 0, 0), 1.0), ((0, 0, 1, 0), -1.0), ((1, 0, 1, 0), 0.0)],
)
def test_inner_basis(a, expected):
    assert inner(a, a) == expected


@pytest.mark.parametrize(
    "v, cls",
    [
        ((0, 1, 0, 0), CausalClass.SPACELIKE),
        ((0, 0, 0, 2), CausalClass.TIMELIKE),
        ((1, 0, 0, 1), CausalClass.LIGHTLIKE),
    ],
)
def test_causal_character(v, cls):
    assert causal_character(v) is cls


def test_normalize():
    v, s = normalize((2, 0, 0, 0))
    assert np.array_equal(v, [1, 0, 0, 0]) and s == 1
    v, s = normalize((0, 0, 0, 3))
    assert np.array_equal(v, [0, 0, 0, 1]) and s == -1
    with pytest.raises(NearNull):
        normalize((1, 0, 1 + 1e-15, 0))


def test_vec4_rejects_nan():
    with pytest.raises(BadParameter):
        vec4(0, np.nan, 0, 0)


def test_inner_broadcasts():
    a = np.eye(4)
    assert np.array_equal(inner(a, a), [1, 1, -1, -1])
    assert np.array_equal(gram(a), np.diag([1, 1, -1, -1]))


@given(vecs, vecs, vecs, finite)
def test_bilinear_symmetric(a, b, c, lam):
    scale = 1 + np.abs(a).sum() * (np.abs(b).sum() + np.abs(c).sum()) * (1 + abs(lam))
    assert inner(a, b) == inner(b, a)
    assert abs(inner(lam * a + c, b) - (lam * inner(a, b) + inner(c, b))) <= 1e-12 * scale


@given(vecs, st.floats(-3, 3))
def test_boost_is_isometry(v, t):
    w = boost(v, t)
    scale = max(1.0, float(np.abs(v).sum()) ** 2) * np.cosh(t) ** 2
    assert abs(inner(w, w) - inner(v, v)) <= 1e-12 * scale


@given(vecs, st.floats(0.01, 100) | st.floats(-100, -0.01))
def test_causal_character_scale_invariant(v, lam):
    # the null band is relative, so the class is unchanged by scaling
    if causal_character(v) is not CausalClass.LIGHTLIKE:
        n = inner(v, v)
        # stay clear of the band edge where rounding may move a vector across it
        if abs(n) > 1e-6 * max(1.0, float(np.abs(v).sum()) ** 2):
            assert causal_character(lam * v) is causal_character(v)
