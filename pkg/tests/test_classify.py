import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from foldcap.classify import (
    NONGENERIC_NOTE,
    Kind,
    NonGenericCrossCapWarning,
    classify_fold,
    locate_point_strata,
    modulus_k,
    phi_poly,
    psi_poly,
    survey_sphere,
    theta_poly,
)
from foldcap.crosscap import CrossCapParams
from foldcap.folding import FoldPlane, fold_germ_jet, whitney_crosscap_test
from foldcap.geometry import subparabolic_cubic

P = CrossCapParams(a=1.0, b=1.0, p3=0.3)


def label(params, v, delta=0.0):
    return classify_fold(params, FoldPlane.from_vector(v, delta))


class TestPolynomials:
    def test_phi(self):
        assert phi_poly(CrossCapParams(), 0.0, 1.0) == 1.0
        assert phi_poly(CrossCapParams(b=1.0), 1.0, 0.0) == -2.0
        # a=1, b=0: 6 beta^2 gamma + gamma^3
        assert phi_poly(CrossCapParams(), 0.5, 2.0) == pytest.approx(6 * 0.25 * 2 + 8)

    def test_psi(self):
        assert psi_poly(CrossCapParams(p3=0.4), 7.0, 0.0, 1.0) == 1.0
        s = 1 / math.sqrt(2)
        assert psi_poly(CrossCapParams(p3=1.0), 0.5, s, s) == pytest.approx(0.0, abs=1e-15)

    def test_theta(self):
        assert theta_poly(0, 0, 0) == 0.0
        assert theta_poly(1, 0, 0) == -10375.0
        assert theta_poly(0, 1, 0) == -560.0

    @given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-1, 1), st.floats(-1, 1))
    def test_identity_a(self, a, b, beta, gamma):
        p = CrossCapParams(a=a, b=b)
        lhs = subparabolic_cubic(p, beta, (gamma - b * beta) / 2.0)
        rhs = 0.25 * phi_poly(p, beta, gamma)
        scale = 1.0 + abs(a * b) + b * b + abs(a) + abs(b)
        assert lhs == pytest.approx(rhs, abs=1e-12 * scale)

    @given(st.floats(0, 2 * math.pi), st.floats(-2, 2))
    def test_identity_b(self, t, p3):
        al, ga = math.cos(t), math.sin(t)
        assert psi_poly(CrossCapParams(p3=p3), 0.5, al, ga) == pytest.approx(ga * (ga - p3 * al), abs=1e-12)

    @given(st.floats(0, 2 * math.pi), st.floats(-2, 2))
    def test_identity_c(self, t, p3):
        al, ga = math.cos(t), math.sin(t)
        if abs(al) < 1e-3:
            return
        lam = -ga / al
        got = psi_poly(CrossCapParams(p3=p3), 1.5, al, ga)
        want = al * al * (lam * lam + 3 * p3 * lam - 2)
        assert got == pytest.approx(want, rel=1e-10, abs=1e-12)


class TestClassifyExamples:
    def test_f10(self):
        assert label(CrossCapParams(), (0, 1, 0)).kind is Kind.F10

    def test_t4(self):
        assert label(CrossCapParams(), (0, 0, 1)).kind is Kind.T4

    def test_r4(self):
        assert label(CrossCapParams(p3=0.2), (-0.2, 0, 1)).kind is Kind.R4

    def test_corank2(self):
        assert label(P, (1, 0, 0)).kind is Kind.CORANK2
        assert label(P, (-1, 0, 0)).kind is Kind.CORANK2

    @pytest.mark.parametrize("v", [(0, 1, 0), (1, 0, 0), (0.3, 0.2, -0.1)])
    def test_shifted_plane_is_stable(self, v):
        assert label(P, v, 0.1).kind is Kind.STABLE_CROSSCAP

    def test_b_and_c_rows(self):
        assert label(P, (0.5, 0.5, 0.7)).kind is Kind.B2
        assert label(P, (1.0, 0.5, 0.3)).kind is Kind.B3
        assert label(P, (0.0, 0.5, 0.7)).kind is Kind.C3

    def test_c4_is_root_of_phi(self):
        # a = b = 1: Phi = -2 be^3 + 5 be^2 g + g^3, root be = 1, g = t with t^3 + 5t - 2 = 0
        t = np.roots([1, 0, 5, -2]).real[np.abs(np.roots([1, 0, 5, -2]).imag) < 1e-12][0]
        lab = label(P, (0.0, 1.0, t))
        assert lab.kind is Kind.C4

    def test_p_series(self):
        s = 1 / math.sqrt(2)
        lab = label(CrossCapParams(p3=1.0), (s, 0, s))
        assert lab.kind is Kind.P4_HALF
        lab = label(P, (0.8, 0.0, 0.6))
        assert lab.kind is Kind.P3
        assert lab.modulus_k == pytest.approx(modulus_k(P, 0.8, 0.6))
        assert lab.modulus_k == pytest.approx(1.0 / (2 * 0.8 * (0.8 + 0.3 * 0.6)))

    @pytest.mark.parametrize(
        "ratio,kind",
        [
            (-0.74403065089105502, Kind.P4_ONE),
            (1.3440306508910550, Kind.P4_ONE),
            (-1.0340822079655830, Kind.P4_THREEHALVES),
            (1.9340822079655830, Kind.P4_THREEHALVES),
        ],
    )
    def test_frozen_p4_roots(self, ratio, kind):
        # gamma/alpha roots of Psi(k) on the unit circle for p3 = 0.3, computed symbolically
        lab = label(P, (1.0, 0.0, ratio))
        assert lab.kind is kind

    def test_collision_reported(self):
        lab = label(CrossCapParams(), (0, 1, 0))
        assert lab.kind is Kind.F10 and Kind.C4 in lab.collisions
        assert label(CrossCapParams(), (0, 0, 1)).collisions == (Kind.R4,)

    def test_b3_note(self):
        lab = label(P, (1.0, 0.5, 0.3))
        assert any("B4" in n for n in lab.notes)

    def test_nongeneric_warns(self):
        with pytest.warns(NonGenericCrossCapWarning):
            lab = label(CrossCapParams(a=0.0), (0.3, 0.2, 0.1))
        assert NONGENERIC_NOTE in lab.notes

    def test_label_invariants(self):
        lab = label(P, (0.3, 0.0, 0.4))
        assert lab.sign == "undetermined"
        assert (lab.modulus_k is not None) == (lab.kind is Kind.P3)


class TestProperties:
    def test_exhaustive_over_random_normals(self, rng):
        v = rng.normal(size=(100_000, 3))
        kinds = set()
        for row in v:
            lab = classify_fold(P, FoldPlane.from_vector(row))
            assert lab.kind is not Kind.UNCLASSIFIED
            kinds.add(lab.kind)
        # random normals land on open strata almost surely
        assert kinds == {Kind.B2, Kind.P3} or kinds == {Kind.B2}

    @given(st.tuples(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1)).filter(lambda v: np.linalg.norm(v) > 0.1))
    def test_antipodal_invariance(self, v):
        a = label(P, v)
        b = label(P, tuple(-c for c in v))
        assert a.kind is b.kind
        assert a.residuals == b.residuals

    def test_stable_iff_whitney_crosscap(self, rng):
        for _ in range(60):
            v = rng.normal(size=3)
            delta = rng.choice([0.0, 0.01, 0.1]) * rng.choice([-1, 1])
            plane = FoldPlane.from_vector(v, 0.0)
            plane = FoldPlane(plane.eta, delta)
            stable = classify_fold(P, plane).kind is Kind.STABLE_CROSSCAP
            assert stable == whitney_crosscap_test(fold_germ_jet(P, plane)).is_crosscap


class TestSurvey:
    def test_minimal_params(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            r = survey_sphere(CrossCapParams(), 64, 32)
        assert sum(r.counts.values()) == r.grid_size
        inv = r.inventory()
        # the only C4 direction is gamma = 0, which is the F10 normal
        assert "C4" not in inv["points"]
        assert inv["points"]["F10"] == 1
        assert any("F10" in c and "C4" in c for c in r.collisions)
        assert set(inv["curves"]) == {"B3", "P", "C"}

    def test_b3_curve_for_p3_zero(self):
        r = survey_sphere(CrossCapParams(), 32, 16)
        pts = r.curves["B3"]
        assert len(pts) > 0
        np.testing.assert_allclose(pts[:, 2], 0.0, atol=1e-9)
        assert np.all(np.abs(pts[:, 0]) > 0) and np.all(np.abs(pts[:, 1]) > 0)

    @pytest.mark.parametrize("p3", [-1.0, -0.3, 0.2, 0.7])
    def test_one_r4_point(self, p3):
        r4 = [p for p in locate_point_strata(CrossCapParams(p3=p3)) if p.label.matches(Kind.R4)]
        assert len(r4) == 1
        al, be, ga = r4[0].eta
        assert be == 0.0 and al + p3 * ga == pytest.approx(0.0, abs=1e-12)

    def test_generic_point_inventory(self):
        pts = locate_point_strata(P)
        kinds = sorted(p.kind.value for p in pts)
        assert kinds == sorted(
            ["C4", "F10", "T4", "Corank2", "R4", "P4_half", "P4_one", "P4_one", "P4_threehalves", "P4_threehalves"]
        )

    def test_coarse_grid_smoke(self):
        r = survey_sphere(P, 8, 4)
        assert r.kinds.shape == (4, 8)
        assert sum(r.counts.values()) == 32
