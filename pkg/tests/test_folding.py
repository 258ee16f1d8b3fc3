import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from foldcap.crosscap import CrossCapParams, parametrize
from foldcap.folding import (
    FoldPlane,
    fold_base_point,
    fold_family_eval,
    fold_germ_jet,
    fold_point,
    nonversality_witness,
    reflect_point,
    whitney_crosscap_test,
)
from foldcap.jets import Jet2, Jet2Vec3

unit = st.tuples(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1)).filter(
    lambda v: 0.1 < math.sqrt(sum(c * c for c in v))
)


class TestFoldPlane:
    def test_canonical_sign_flips_delta(self):
        p = FoldPlane((-1.0, 0.0, 0.0), 0.3)
        assert p.eta == (1.0, 0.0, 0.0) and p.delta == -0.3

    def test_rejects_non_unit(self):
        with pytest.raises(ValueError):
            FoldPlane((1.0, 1.0, 0.0))

    def test_from_vector_scales_delta(self):
        p = FoldPlane.from_vector((0.0, 2.0, 0.0), 1.0)
        assert p.eta == (0.0, 1.0, 0.0) and p.delta == 0.5

    @given(unit)
    def test_antipodes_agree(self, v):
        assert FoldPlane.from_vector(v, 0.2) == FoldPlane.from_vector(tuple(-c for c in v), -0.2)


class TestFoldPoint:
    @given(unit, st.floats(-1, 1), st.tuples(st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2)))
    def test_normal_component_symmetric_under_mirror(self, v, delta, p):
        # <eta, fold(p)> - delta depends on lam only through lam (lam - 1) + lam, and the
        # factor lam (lam - 1) is invariant under lam -> 1 - lam
        plane = FoldPlane.from_vector(v, delta)
        eta = np.asarray(plane.eta)
        lam = float(np.dot(p, eta)) - plane.delta
        q = np.asarray(p) + (1.0 - 2.0 * lam) * eta  # lam(q) = 1 - lam(p)
        fp, fq = fold_point(p, plane), fold_point(q, plane)
        lp, lq = lam, 1.0 - lam
        assert lp * (lp - 1.0) == pytest.approx(lq * (lq - 1.0), abs=1e-12)
        tang = lambda w: np.asarray(w) - np.dot(w, eta) * eta
        np.testing.assert_allclose(tang(fp), tang(p), atol=1e-12)
        np.testing.assert_allclose(tang(fq), tang(q), atol=1e-12)

    @given(unit, st.floats(-1, 1), st.tuples(st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2)))
    def test_reflection_only_moves_along_eta(self, v, delta, p):
        plane = FoldPlane.from_vector(v, delta)
        r = reflect_point(p, plane)
        eta = np.asarray(plane.eta)
        assert np.linalg.norm(np.cross(r - np.asarray(p), eta)) < 1e-12
        np.testing.assert_allclose(reflect_point(r, plane), p, atol=1e-12)

    def test_points_on_mirror_are_fixed(self, generic):
        plane = FoldPlane.from_vector((0.3, -0.2, 0.9))
        phi = parametrize(generic)
        x, y = 0.2, 0.1
        v = phi.evaluate(x, y)
        shifted = FoldPlane(plane.eta, float(np.dot(v, plane.eta)))
        np.testing.assert_allclose(fold_family_eval(generic, x, y, shifted), v, atol=1e-15)

    def test_base_point(self, generic):
        plane = FoldPlane.from_vector((0.0, 0.6, 0.8), 0.25)
        np.testing.assert_allclose(
            fold_base_point(generic, plane), plane.delta * (plane.delta + 1.0) * np.asarray(plane.eta), atol=1e-15
        )


class TestGermJet:
    @given(unit, st.floats(-0.5, 0.5))
    def test_y_partial_vanishes(self, v, delta):
        germ = fold_germ_jet(CrossCapParams(a=1.2, b=0.4, p3=0.3), FoldPlane.from_vector(v, delta))
        np.testing.assert_allclose(germ.coefficient(0, 1), 0.0, atol=1e-15)
        np.testing.assert_allclose(germ.coefficient(0, 0), 0.0, atol=1e-15)

    def test_matches_evaluation(self, generic):
        plane = FoldPlane.from_vector((0.2, 0.5, -0.4), 0.1)
        germ = fold_germ_jet(generic, plane)
        base = fold_base_point(generic, plane)
        for x, y in [(1e-3, 2e-3), (-2e-3, 5e-4)]:
            np.testing.assert_allclose(germ.evaluate(x, y) + base, fold_family_eval(generic, x, y, plane), atol=1e-14)

    def test_f10_plane_hand_expansion(self, minimal):
        # eta = e2: <eta, phi> = xy, so f = phi + xy (xy - 1) e2 = (x, x^2 y^2, x^2 + y^2) at order 5
        germ = fold_germ_jet(minimal, FoldPlane((0.0, 1.0, 0.0)))
        X, Y = Jet2.x(5), Jet2.y(5)
        assert germ[0] == X
        assert germ[1] == X**2 * Y**2
        assert germ[2] == X**2 + Y**2

    def test_rank_one_for_nonzero_delta(self, generic):
        germ = fold_germ_jet(generic, FoldPlane.from_vector((0.3, 0.4, 0.5), 0.2))
        J = np.column_stack([germ.coefficient(1, 0), germ.coefficient(0, 1)])
        assert np.linalg.matrix_rank(J, tol=1e-10) == 1


class TestWhitney:
    def test_whitney_model(self):
        X, Y = Jet2.x(4), Jet2.y(4)
        r = whitney_crosscap_test(Jet2Vec3((X, X * Y, Y**2)))
        assert r.is_crosscap and r.det == pytest.approx(2.0)

    def test_degenerate_model(self):
        X, Y = Jet2.x(4), Jet2.y(4)
        r = whitney_crosscap_test(Jet2Vec3((X, X * Y, Y**3)))
        assert r.outcome == "degenerate" and r.det == pytest.approx(0.0, abs=1e-15)

    def test_corank_two(self):
        X, Y = Jet2.x(4), Jet2.y(4)
        assert whitney_crosscap_test(Jet2Vec3((X * X, X * Y, Y * Y))).outcome == "corank-2"

    @pytest.mark.parametrize("v", [(0.0, 1.0, 0.0), (0.3, -0.5, 0.8), (0.0, 0.0, 1.0)])
    def test_determinant_is_minus_four_delta(self, generic, v):
        # det[F_x, F_xy, F_yy](0) = -4 delta, derived symbolically for the family
        for delta in (1e-4, 1e-2, 1e-1, -0.3):
            plane = FoldPlane.from_vector(v, delta)
            r = whitney_crosscap_test(fold_germ_jet(generic, plane))
            assert r.is_crosscap
            assert r.det == pytest.approx(-4.0 * plane.delta, rel=1e-9)
        assert whitney_crosscap_test(fold_germ_jet(generic, FoldPlane.from_vector(v))).outcome == "degenerate"

    def test_corank_two_at_tangential_plane(self, generic):
        assert whitney_crosscap_test(fold_germ_jet(generic, FoldPlane((1.0, 0.0, 0.0)))).outcome == "corank-2"


class TestNonversality:
    def test_examples(self):
        s = 1 / math.sqrt(2)
        assert nonversality_witness(FoldPlane((0.0, s, s)), 0.7) == pytest.approx(0.0, abs=1e-15)
        assert nonversality_witness(FoldPlane((0.6, 0.0, 0.8)), 1.3) == 0.0

    @given(unit, st.floats(-2, 2))
    def test_identically_zero(self, v, b):
        assert abs(nonversality_witness(FoldPlane.from_vector(v), b)) < 1e-12

    def test_rejects_shifted_plane(self):
        with pytest.raises(ValueError):
            nonversality_witness(FoldPlane((0.0, 1.0, 0.0), 0.1), 0.0)
