import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from foldcap.polyroots import (
    binary_form_roots,
    canonical_direction,
    projective_angle,
    real_roots_cubic,
    real_roots_quadratic,
)


def test_quadratic_simple_and_double():
    assert [r for r, _ in real_roots_quadratic(1, -3, 2)] == pytest.approx([1.0, 2.0])
    assert real_roots_quadratic(1, -2, 1) == [(pytest.approx(1.0), 2)]
    assert real_roots_quadratic(1, 0, 1) == []


def test_quadratic_cancellation_is_stable():
    # roots 1e8 and 1e-8: the naive formula loses the small one entirely
    roots = [r for r, _ in real_roots_quadratic(1.0, -(1e8 + 1e-8), 1.0)]
    assert roots[0] == pytest.approx(1e-8, rel=1e-12)


def test_cubic_roots_and_multiplicity():
    got = real_roots_cubic(1, -6, 11, -6)
    assert [r for r, _ in got] == pytest.approx([1, 2, 3])
    got = real_roots_cubic(1, -4, 5, -2)  # (t-1)^2 (t-2)
    assert [(round(r, 9), m) for r, m in got] == [(1.0, 2), (2.0, 1)]
    assert real_roots_cubic(1, 0, 0, 0) == [(0.0, 3)]


@given(st.lists(st.floats(-5, 5), min_size=3, max_size=3, unique=True))
def test_cubic_against_numpy(roots):
    roots = sorted(roots)
    if min(np.diff(roots)) < 1e-3:
        return
    coeffs = np.poly(roots)
    got = [r for r, _ in real_roots_cubic(*coeffs)]
    assert got == pytest.approx(roots, abs=1e-8)


def test_binary_form_projective_roots():
    # w2 (3 w1^2 + 2 w2^2): single real direction (1, 0)
    roots = binary_form_roots([0.0, 3.0, 0.0, 2.0])
    assert len(roots) == 1
    w1, w2, m = roots[0]
    assert (abs(w1), w2) == pytest.approx((1.0, 0.0))


def test_binary_form_root_at_infinity():
    # w1 * w2: directions (1,0) and (0,1)
    roots = binary_form_roots([0.0, 1.0, 0.0])
    dirs = sorted((round(abs(w1), 12), round(abs(w2), 12)) for w1, w2, _ in roots)
    assert dirs == [(0.0, 1.0), (1.0, 0.0)]


def test_canonical_direction_and_angle():
    assert canonical_direction(-2.0, 0.0) == pytest.approx((1.0, 0.0))
    assert projective_angle((1.0, 1.0), (-1.0, -1.0)) == pytest.approx(0.0)
    assert projective_angle((1.0, 0.0), (0.0, 3.0)) == pytest.approx(math.pi / 2)
