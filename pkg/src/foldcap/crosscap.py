"""Geometric cross-cap ``phi(x, y) = (x, xy + p(y), ax^2 + bxy + y^2 + q(x, y))``."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields
from functools import cached_property
from pathlib import Path

import numpy as np

from .jets import DEFAULT_ORDER, MAX_ORDER, Jet2, Jet2Vec3, jet_diff, jet_from_coeffs

Q3_NAMES = ("q30", "q31", "q32", "q33")
Q4_NAMES = ("q40", "q41", "q42", "q43", "q44")

GENERIC_TOL = 1e-9


class DegeneratePointError(ValueError):
    """Raised when ``phi_x`` and ``phi_y`` are dependent at the requested point."""


class UmbilicError(ValueError):
    """Raised when the two principal curvatures coincide within tolerance."""


@dataclass(frozen=True)
class CrossCapParams:
    """Coefficients of a geometric cross-cap, through order 4.

    ``q3k`` multiplies ``x**(3-k) * y**k`` and ``q4k`` multiplies
    ``x**(4-k) * y**k``. ``order`` is the truncation degree of jets built from
    these coefficients; terms above degree 4 are always zero.
    """

    a: float = 1.0
    b: float = 0.0
    p3: float = 0.0
    p4: float = 0.0
    q30: float = 0.0
    q31: float = 0.0
    q32: float = 0.0
    q33: float = 0.0
    q40: float = 0.0
    q41: float = 0.0
    q42: float = 0.0
    q43: float = 0.0
    q44: float = 0.0
    order: int = DEFAULT_ORDER

    def __post_init__(self):
        if not 4 <= int(self.order) <= MAX_ORDER:
            raise ValueError(f"order must lie in [4, {MAX_ORDER}], got {self.order}")
        object.__setattr__(self, "order", int(self.order))
        for f in fields(self):
            if f.name == "order":
                continue
            v = float(getattr(self, f.name))
            if not math.isfinite(v):
                raise ValueError(f"{f.name} must be finite")
            object.__setattr__(self, f.name, v)

    def is_generic(self, tol: float = GENERIC_TOL) -> bool:
        return abs(self.a) > tol

    def replace(self, **changes) -> "CrossCapParams":
        d = asdict(self)
        d.update(changes)
        return CrossCapParams(**d)

    @property
    def q3(self) -> tuple[float, ...]:
        return tuple(getattr(self, n) for n in Q3_NAMES)

    @property
    def q4(self) -> tuple[float, ...]:
        return tuple(getattr(self, n) for n in Q4_NAMES)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "CrossCapParams":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown cross-cap fields: {sorted(unknown)}")
        return cls(**data)

    def to_json(self, path=None, indent: int = 2) -> str:
        text = json.dumps(self.to_dict(), indent=indent)
        if path is not None:
            Path(path).write_text(text + "\n")
        return text

    @classmethod
    def from_json(cls, source) -> "CrossCapParams":
        """Load from a JSON string or a path to a JSON file."""
        if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
            source = Path(source).read_text()
        return cls.from_dict(json.loads(source))

    @cached_property
    def _surface(self) -> "_SurfaceDerivatives":
        return _SurfaceDerivatives(parametrize(self))


def parametrize(params: CrossCapParams) -> Jet2Vec3:
    """Jet of ``phi`` at the origin, truncated at ``params.order``."""
    n = params.order
    first = jet_from_coeffs(n, [(1, 0, 1.0)])
    second = jet_from_coeffs(n, [(1, 1, 1.0), (0, 3, params.p3), (0, 4, params.p4)])
    third_terms = [(2, 0, params.a), (1, 1, params.b), (0, 2, 1.0)]
    third_terms += [(3 - k, k, c) for k, c in enumerate(params.q3)]
    third_terms += [(4 - k, k, c) for k, c in enumerate(params.q4)]
    third = jet_from_coeffs(n, third_terms)
    return Jet2Vec3((first, second, third))


def crosscap_type(params: CrossCapParams, tol: float = GENERIC_TOL) -> str:
    if params.a > tol:
        return "elliptic"
    if params.a < -tol:
        return "hyperbolic"
    return "parabolic"


def double_point_leading(params: CrossCapParams) -> float:
    """Coefficient ``c`` of the double-point curve ``x = c y^2 + ...`` in the source."""
    return -params.p3


def curvature_limit(params: CrossCapParams, alpha: float, beta: float) -> float:
    """Limit of the bounded principal curvature along a curve with tangent ``(alpha, beta)``."""
    if alpha == 0.0:
        raise ValueError(
            "curvature limit undefined for alpha = 0 (curve tangent to the normal-plane trace)"
        )
    a, b = params.a, params.b
    return 2.0 * (a * alpha**2 - beta**2) / (alpha * math.sqrt(alpha**2 + (2.0 * beta + alpha * b) ** 2))


class _SurfaceDerivatives:
    """Partial-derivative jets of ``phi`` up to second order."""

    def __init__(self, phi: Jet2Vec3):
        self.phi = phi
        self.phi_x = phi.diff("x")
        self.phi_y = phi.diff("y")
        self.phi_xx = self.phi_x.diff("x")
        self.phi_xy = self.phi_x.diff("y")
        self.phi_yy = self.phi_y.diff("y")

        jets = (self.phi_x, self.phi_y, self.phi_xx, self.phi_xy, self.phi_yy)
        self._stack = np.array([[c.coeffs for c in v] for v in jets])
        self._powers = np.arange(phi.order + 1)

    def evaluate(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        xp = x[..., None] ** self._powers
        yp = y[..., None] ** self._powers
        out = np.einsum("...i,dcij,...j->d...c", xp, self._stack, yp)
        return tuple(out)


@dataclass(frozen=True)
class FundamentalForms:
    E: float
    F: float
    G: float
    L: float
    M: float
    N: float
    at: tuple[float, float]

    @property
    def metric_det(self) -> float:
        return self.E * self.G - self.F**2

    @property
    def mean_curvature(self) -> float:
        return (self.E * self.N - 2 * self.F * self.M + self.G * self.L) / (2 * self.metric_det)

    @property
    def gaussian_curvature(self) -> float:
        return (self.L * self.N - self.M**2) / self.metric_det


def forms_arrays(params: CrossCapParams, x, y, *, check: bool = True):
    """Vectorised first and second fundamental forms at source points.

    Returns ``(E, F, G, L, M, N)`` arrays broadcast over ``x`` and ``y``. With
    ``check`` set, any degenerate point raises :class:`DegeneratePointError`.
    """
    px, py, pxx, pxy, pyy = params._surface.evaluate(x, y)
    cross = np.cross(px, py)
    norm = np.linalg.norm(cross, axis=-1)
    scale = 1.0 + np.linalg.norm(px, axis=-1) * np.linalg.norm(py, axis=-1)
    bad = norm < 1e-12 * scale
    if check and np.any(bad):
        raise DegeneratePointError("phi_x and phi_y are dependent at the requested point")
    with np.errstate(invalid="ignore", divide="ignore"):
        n = cross / norm[..., None]
    E = np.sum(px * px, axis=-1)
    F = np.sum(px * py, axis=-1)
    G = np.sum(py * py, axis=-1)
    L = np.sum(pxx * n, axis=-1)
    M = np.sum(pxy * n, axis=-1)
    N = np.sum(pyy * n, axis=-1)
    return E, F, G, L, M, N


def fundamental_forms(params: CrossCapParams, x: float, y: float) -> FundamentalForms:
    """E, F, G, L, M, N at the regular point ``phi(x, y)`` (unit normal ``phi_x x phi_y``)."""
    E, F, G, L, M, N = (float(v) for v in forms_arrays(params, float(x), float(y)))
    return FundamentalForms(E, F, G, L, M, N, (float(x), float(y)))


@dataclass(frozen=True)
class CurvatureData:
    """Principal curvatures with unit source directions.

    ``kappa1`` is the root of smaller absolute value, which near the cross-cap
    point is the bounded branch.
    """

    kappa1: float
    kappa2: float
    dir1: tuple[float, float]
    dir2: tuple[float, float]


def principal_arrays(E, F, G, L, M, N):
    """Vectorised principal curvatures and source directions.

    Returns ``(k_small, k_large, d_small, d_large)`` where the curvatures are
    ordered by absolute value and the directions are Euclidean-unit 2-vectors
    in the source plane (shape ``(..., 2)``).
    """
    E, F, G, L, M, N = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (E, F, G, L, M, N)))
    det = E * G - F * F
    # det(II - k I) = det*k^2 - tr*k + kdet
    tr = E * N - 2.0 * F * M + G * L
    kdet = L * N - M * M
    disc = np.maximum(tr * tr - 4.0 * det * kdet, 0.0)
    sq = np.sqrt(disc)
    # stable pair of roots
    big = (tr + np.copysign(sq, tr)) / (2.0 * det)
    with np.errstate(divide="ignore", invalid="ignore"):
        small = np.where(big != 0.0, kdet / (det * big), 0.0)
    swap = np.abs(small) > np.abs(big)
    k_small = np.where(swap, big, small)
    k_large = np.where(swap, small, big)
    return k_small, k_large, _direction(E, F, G, L, M, N, k_small), _direction(E, F, G, L, M, N, k_large)


def _direction(E, F, G, L, M, N, k):
    # null vector of (II - k I); pick the better-conditioned row
    r1 = np.stack([-(M - k * F), L - k * E], axis=-1)
    r2 = np.stack([N - k * G, -(M - k * F)], axis=-1)
    n1 = np.linalg.norm(r1, axis=-1)
    n2 = np.linalg.norm(r2, axis=-1)
    v = np.where((n1 >= n2)[..., None], r1, r2)
    nv = np.maximum(np.linalg.norm(v, axis=-1), 1e-300)
    return v / nv[..., None]


def principal_data(forms: FundamentalForms, tol: float = 1e-10) -> CurvatureData:
    """Principal curvatures and directions of II relative to I."""
    if forms.metric_det <= 0.0:
        raise DegeneratePointError("first fundamental form is not positive definite")
    k1, k2, d1, d2 = principal_arrays(forms.E, forms.F, forms.G, forms.L, forms.M, forms.N)
    k1, k2 = float(k1), float(k2)
    if abs(k2 - k1) <= tol * (1.0 + abs(k1) + abs(k2)):
        raise UmbilicError(f"umbilic point: principal curvatures {k1} and {k2} coincide")
    return CurvatureData(k1, k2, tuple(map(float, d1)), tuple(map(float, d2)))
