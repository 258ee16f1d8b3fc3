"""Limiting normal/tangent maps, distinguished directions at the cross-cap point,
and the geometric residuals that tie fold strata to those directions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .classify import DEFAULT_TOL, Kind, classify_fold
from .crosscap import CrossCapParams, double_point_leading
from .folding import FoldPlane
from .polyroots import binary_form_roots, canonical_direction, real_roots_quadratic

RIDGE_READINGS = ("printed", "proof")
# Reading of the ridge equation confirmed by the numeric ridge oracle.
RIDGE_READING = "proof"


@dataclass(frozen=True)
class Direction2:
    """Projective direction ``(w1 : w2)`` in the source plane."""

    w1: float
    w2: float
    multiplicity: int = 1

    def __post_init__(self):
        w1, w2 = canonical_direction(self.w1, self.w2)
        object.__setattr__(self, "w1", w1)
        object.__setattr__(self, "w2", w2)

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.w1, self.w2])

    @property
    def angle(self) -> float:
        """Angle in ``(-pi/2, pi/2]`` from the ``x``-axis."""
        return math.atan2(self.w2, self.w1)

    def angle_to(self, other: "Direction2 | Sequence[float]") -> float:
        from .polyroots import projective_angle

        v = (other.w1, other.w2) if isinstance(other, Direction2) else tuple(other)
        return projective_angle((self.w1, self.w2), v)


@dataclass(frozen=True)
class SeparatrixCoeff:
    """Leading coefficient of a separatrix of the principal foliations.

    ``form`` is ``"x=lambda*y^2"`` for the two separatrices tangent to the
    kernel direction and ``"y=lambda*x^2"`` for the one tangent to the
    tangential direction.
    """

    lam: float
    form: str = "x=lambda*y^2"


def limiting_normal(b: float, v1: float, v2: float) -> np.ndarray:
    """Limiting surface normal along source curves with tangent ``(v1, v2)`` (not normalised)."""
    if v1 == 0.0 and v2 == 0.0:
        raise ValueError("zero direction")
    return np.array([0.0, -(b * v1 + 2.0 * v2), v1]) + 0.0


def limiting_normal_inv(b: float, n: Sequence[float], tol: float = 1e-12) -> Direction2:
    """Source direction whose limiting normal is parallel to ``n`` (a normal-plane vector)."""
    n0, n2, n3 = (float(c) for c in n)
    scale = max(abs(n0), abs(n2), abs(n3))
    if scale == 0.0:
        raise ValueError("zero normal vector")
    if abs(n0) > tol * scale:
        raise ValueError("vector is not in the normal plane (first component must vanish)")
    return Direction2(n3, -(n2 + b * n3) / 2.0)


def limiting_tangent(c: float) -> np.ndarray:
    """Limiting tangent of the image of ``x = c y^2 + ...`` (in the tangent cone)."""
    return np.array([float(c), 0.0, 1.0])


def limiting_tangent_inv(v: Sequence[float], tol: float = 1e-12) -> float:
    """Coefficient ``c`` of the source curve ``x = c y^2`` with limiting tangent ``v``."""
    v1, v2, v3 = (float(c) for c in v)
    scale = max(abs(v1), abs(v2), abs(v3))
    if scale == 0.0:
        raise ValueError("zero vector")
    if abs(v2) > tol * scale:
        raise ValueError("vector is not in the tangent cone (second component must vanish)")
    if abs(v3) <= tol * scale:
        raise ValueError("tangential direction has no parabola preimage")
    return v1 / v3


def subparabolic_cubic(params: CrossCapParams, w1: float, w2: float) -> float:
    a, b = params.a, params.b
    return a * b * w1**3 + (b * b + 2.0 * a + 1.0) * w1**2 * w2 + 3.0 * b * w1 * w2**2 + 2.0 * w2**3


def subparabolic_directions(params: CrossCapParams) -> list[Direction2]:
    """Tangent directions of the sub-parabolic curves relative to the unbounded branch."""
    a, b = params.a, params.b
    roots = binary_form_roots([a * b, b * b + 2.0 * a + 1.0, 3.0 * b, 2.0])
    return [Direction2(w1, w2, m) for w1, w2, m in roots]


def ridge_product(params: CrossCapParams, w1: float, w2: float, reading: str = RIDGE_READING) -> float:
    """Ridge-direction equation ``(b w1 -+ 2 w2) w1`` under either reading."""
    if reading == "printed":
        return (params.b * w1 - 2.0 * w2) * w1
    if reading == "proof":
        return (params.b * w1 + 2.0 * w2) * w1
    raise ValueError(f"reading must be one of {RIDGE_READINGS}")


def ridge_directions(params: CrossCapParams, reading: str = RIDGE_READING) -> list[Direction2]:
    """The two ridge directions relative to the unbounded branch.

    ``reading="printed"`` gives ``{(0, 1), (2, b)}``; ``reading="proof"``
    gives ``{(0, 1), (2, -b)}``, which is the one the numeric ridge oracle
    reproduces.
    """
    if reading not in RIDGE_READINGS:
        raise ValueError(f"reading must be one of {RIDGE_READINGS}")
    sign = 1.0 if reading == "printed" else -1.0
    return [Direction2(0.0, 1.0), Direction2(2.0, sign * params.b)]


def separatrix_lambdas(params: CrossCapParams) -> list[SeparatrixCoeff]:
    """Leading coefficients of the three separatrices of the principal foliations.

    The first two are the roots of ``lambda^2 + 3 p3 lambda - 2 = 0`` (curves
    ``x = lambda y^2``, ascending); the third is ``y = -q31/2 x^2``.
    """
    roots = real_roots_quadratic(1.0, 3.0 * params.p3, -2.0)
    out = [SeparatrixCoeff(r) for r, _ in roots]
    out.append(SeparatrixCoeff(-0.5 * params.q31, "y=lambda*x^2"))
    return out


def _wedge_norm(u: Sequence[float], v: Sequence[float]) -> float:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    return float(np.linalg.norm(np.cross(u, v)))


CHARACTERISATION_KINDS = {
    "i": (Kind.C4,),
    "ii": (Kind.F10, Kind.T4),
    "iii": (Kind.P4_HALF,),
    "iv": (Kind.P4_THREEHALVES,),
    "v": (Kind.R4,),
    "vi": (Kind.CORANK2,),
}

CHARACTERISATION_DESCRIPTIONS = {
    "i": "W contains the tangential line and LN(w) for a sub-parabolic direction w",
    "ii": "W contains the tangential line and LN(w) for a ridge direction w",
    "iii": "W contains LN(0,1) and the limiting tangent of the double point curve",
    "iv": "W contains LN(0,1) and the limiting tangent of a separatrix x = lambda y^2",
    "v": "eta is parallel to the limiting tangent of the double point curve",
    "vi": "eta is the tangential direction: W is the normal plane",
}


class KindMismatchError(ValueError):
    def __init__(self, item: str, actual: Kind):
        self.item = item
        self.actual = actual
        want = "/".join(k.value for k in CHARACTERISATION_KINDS[item])
        super().__init__(f"item {item} needs a {want} plane, got {actual.value}")


def characterisation_item_for(kind: Kind) -> str | None:
    for item, kinds in CHARACTERISATION_KINDS.items():
        if kind in kinds:
            return item
    return None


def characterisation_residual(
    params: CrossCapParams,
    plane: FoldPlane,
    item: str,
    tol: float = DEFAULT_TOL,
    reading: str = RIDGE_READING,
) -> float:
    """Scalar that vanishes exactly when the geometric characterisation of ``item`` holds."""
    if item not in CHARACTERISATION_KINDS:
        raise ValueError(f"unknown item {item!r}")
    if plane.delta != 0.0:
        raise ValueError("geometric characterisations concern planes through the origin")
    label = classify_fold(params, plane, tol)
    if not any(label.matches(k) for k in CHARACTERISATION_KINDS[item]):
        raise KindMismatchError(item, label.kind)
    alpha, beta, gamma = plane.eta
    if item == "i":
        w = limiting_normal_inv(params.b, (0.0, -gamma, beta))
        return subparabolic_cubic(params, w.w1, w.w2)
    if item == "ii":
        w = limiting_normal_inv(params.b, (0.0, -gamma, beta))
        return ridge_product(params, w.w1, w.w2, reading)
    if item == "iii":
        t = limiting_tangent(double_point_leading(params))
        return float(np.dot(plane.eta, t / np.linalg.norm(t)))
    if item == "iv":
        vals = []
        for s in separatrix_lambdas(params)[:2]:
            t = limiting_tangent(s.lam)
            vals.append(float(np.dot(plane.eta, t / np.linalg.norm(t))))
        return min(vals, key=abs)
    if item == "v":
        return _wedge_norm(plane.eta, limiting_tangent(double_point_leading(params)))
    return _wedge_norm(plane.eta, (1.0, 0.0, 0.0))


def characterisation_ridge_residuals(params: CrossCapParams, plane: FoldPlane, tol: float = DEFAULT_TOL) -> dict[str, float]:
    """Item (ii) residual under both readings of the ridge equation."""
    return {r: characterisation_residual(params, plane, "ii", tol, reading=r) for r in RIDGE_READINGS}
