"""The family of folding maps on a geometric cross-cap.

For a plane ``<p, eta> = delta`` the folding map sends ``p`` to its projection
on the plane plus ``lambda**2 * eta``, where ``lambda = <p, eta> - delta`` is
the signed distance. Composed with ``phi`` this is

    F(x, y) = phi + (<eta, phi> - delta) (<eta, phi> - delta - 1) eta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .crosscap import CrossCapParams, parametrize
from .jets import Jet2Vec3, jet_from_coeffs

UNIT_TOL = 1e-12
CORANK2_TOL = 1e-10


def _canonical_sign(v: Sequence[float]) -> float:
    for c in v:
        if c != 0.0:
            return 1.0 if c > 0.0 else -1.0
    return 1.0


@dataclass(frozen=True)
class FoldPlane:
    """Plane ``<p, eta> = delta`` with ``eta`` a unit vector.

    ``(eta, delta)`` and ``(-eta, -delta)`` describe the same plane; the
    representative whose first nonzero ``eta`` component is positive is kept.
    """

    eta: tuple[float, float, float]
    delta: float = 0.0

    def __post_init__(self):
        eta = tuple(float(c) for c in self.eta)
        if len(eta) != 3 or not all(math.isfinite(c) for c in eta):
            raise ValueError(f"eta must be a finite 3-vector, got {self.eta!r}")
        norm = math.sqrt(sum(c * c for c in eta))
        if abs(norm - 1.0) > UNIT_TOL:
            raise ValueError(f"eta must be a unit vector (|eta| = {norm!r})")
        s = _canonical_sign(eta)
        object.__setattr__(self, "eta", tuple(s * c + 0.0 for c in eta))
        object.__setattr__(self, "delta", s * float(self.delta) + 0.0)

    @classmethod
    def from_vector(cls, v: Sequence[float], delta: float = 0.0) -> "FoldPlane":
        """Normalise a nonzero vector into a plane normal."""
        v = np.asarray(v, dtype=float)
        n = float(np.linalg.norm(v))
        if v.shape != (3,) or n == 0.0 or not math.isfinite(n):
            raise ValueError(f"plane normal must be a nonzero finite 3-vector, got {v!r}")
        u = v / n
        # renormalise once more so |eta| = 1 holds to the last bit we can get
        u = u / math.sqrt(float(u @ u))
        return cls(tuple(u), float(delta) / n)

    @property
    def alpha(self) -> float:
        return self.eta[0]

    @property
    def beta(self) -> float:
        return self.eta[1]

    @property
    def gamma(self) -> float:
        return self.eta[2]


def fold_point(p: Sequence[float], plane: FoldPlane) -> np.ndarray:
    """Fold a point of ``R^3`` with respect to ``plane``."""
    eta = np.asarray(plane.eta)
    p = np.asarray(p, dtype=float)
    lam = p @ eta - plane.delta
    return p + (lam * (lam - 1.0))[..., None] * eta if p.ndim > 1 else p + lam * (lam - 1.0) * eta


def reflect_point(p: Sequence[float], plane: FoldPlane) -> np.ndarray:
    """Mirror image of ``p`` across ``plane``."""
    eta = np.asarray(plane.eta)
    p = np.asarray(p, dtype=float)
    lam = p @ eta - plane.delta
    return p - 2.0 * lam * eta


def fold_family_eval(params: CrossCapParams, x: float, y: float, plane: FoldPlane) -> np.ndarray:
    """``F(x, y, eta, delta)`` at one source point."""
    phi = parametrize(params).evaluate(float(x), float(y))
    return fold_point(phi, plane)


def fold_germ_jet(params: CrossCapParams, plane: FoldPlane) -> Jet2Vec3:
    """Jet at the origin of ``f_(eta, delta)``, based so that it vanishes at 0.

    The subtracted value ``F(0, 0)`` is available from :func:`fold_base_point`.
    """
    phi = parametrize(params)
    lam = phi.dot(plane.eta) - plane.delta
    factor = lam * (lam - 1.0)
    n = params.order
    eta_jet = Jet2Vec3(tuple(jet_from_coeffs(n, [(0, 0, e)]) for e in plane.eta))
    germ = phi + eta_jet.scale(factor)
    base = germ.constant()
    return germ - Jet2Vec3(tuple(jet_from_coeffs(n, [(0, 0, c)]) for c in base))


def fold_base_point(params: CrossCapParams, plane: FoldPlane) -> np.ndarray:
    """``F(0, 0, eta, delta) = delta (delta + 1) eta``."""
    return fold_family_eval(params, 0.0, 0.0, plane)


class WhitneyResult(NamedTuple):
    outcome: str  # "crosscap", "degenerate" or "corank-2"
    det: float | None
    kernel: tuple[float, float] | None

    @property
    def is_crosscap(self) -> bool:
        return self.outcome == "crosscap"


def whitney_crosscap_test(germ: Jet2Vec3, tol: float = 1e-9) -> WhitneyResult:
    """Whitney's recognition criterion for the cross-cap at the origin.

    With the source rotated so the kernel of the differential is ``d/dY``, the
    germ is a cross-cap iff ``det[g_X, g_XY, g_YY](0) != 0``. A vanishing
    differential is reported as ``"corank-2"``; rank 2 raises ``ValueError``.
    """
    J = np.column_stack([germ.coefficient(1, 0), germ.coefficient(0, 1)])
    _, sv, vt = np.linalg.svd(J)
    if sv[0] <= CORANK2_TOL:
        return WhitneyResult("corank-2", None, None)
    if sv[1] > CORANK2_TOL * max(1.0, sv[0]):
        raise ValueError(f"germ is an immersion at the origin (singular values {sv})")
    k = vt[1]
    if k[0] < 0.0 or (k[0] == 0.0 and k[1] < 0.0):
        k = -k
    u = np.array([k[1], -k[0]])
    n = germ.order
    # (x, y) = X u + Y k
    inner_x = jet_from_coeffs(n, [(1, 0, u[0]), (0, 1, k[0])])
    inner_y = jet_from_coeffs(n, [(1, 0, u[1]), (0, 1, k[1])])
    g = germ.compose(inner_x, inner_y)
    gx = g.coefficient(1, 0)
    gxy = g.coefficient(1, 1)
    gyy = 2.0 * g.coefficient(0, 2)
    det = float(np.linalg.det(np.column_stack([gx, gxy, gyy])))
    outcome = "crosscap" if abs(det) > tol else "degenerate"
    return WhitneyResult(outcome, det, (float(k[0]), float(k[1])))


def nonversality_witness(plane: FoldPlane, b: float) -> float:
    """Rank witness from the 2-jet model of ``f_(eta0, 0)``.

    Builds the 2-jet ``(x, -g(g - b be) xy + be g y^2, be (g - b be) xy - be^2 y^2)``
    with ``(be, g) = (beta, gamma)``, reduces its partial derivatives by the
    ``e1`` and ``x (g e2 - be e3)`` directions of the extended tangent space, and
    returns the determinant of the ``y``-coefficients of the two remainders in
    the second and third slots. A zero determinant means ``(0, y, 0)`` and
    ``(0, 0, y)`` cannot both be reached.
    """
    if plane.delta != 0.0:
        raise ValueError("the witness is defined for planes through the origin (delta = 0)")
    be, g = plane.beta, plane.gamma
    m = g - b * be
    j2 = Jet2Vec3(
        (
            jet_from_coeffs(2, [(1, 0, 1.0)]),
            jet_from_coeffs(2, [(1, 1, -g * m), (0, 2, be * g)]),
            jet_from_coeffs(2, [(1, 1, be * m), (0, 2, -be * be)]),
        )
    )
    fx = j2.diff("x")
    fy = j2.diff("y")
    e1 = Jet2Vec3(tuple(jet_from_coeffs(2, [(0, 0, c)]) for c in (1.0, 0.0, 0.0)))
    # f^*(x) * (g e2 - be e3) pulls back the first target coordinate, which is x
    xdir = Jet2Vec3(tuple(jet_from_coeffs(2, [(1, 0, c)]) for c in (0.0, g, -be)))
    v1 = fx - e1
    v2 = fy + xdir.scale(m)
    mat = np.array([[v1[1][0, 1], v1[2][0, 1]], [v2[1][0, 1], v2[2][0, 1]]])
    return float(np.linalg.det(mat))
