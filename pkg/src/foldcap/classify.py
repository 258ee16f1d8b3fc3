"""Singularity types of the folding maps ``f_eta`` and the sphere stratification."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping

import numpy as np

from .crosscap import CrossCapParams
from .folding import FoldPlane
from .polyroots import binary_form_roots, canonical_direction

DEFAULT_TOL = 1e-9


class Kind(str, Enum):
    STABLE_CROSSCAP = "Stable_Crosscap"
    B2 = "B2"
    B3 = "B3"
    B4_CANDIDATE = "B4_candidate"
    C3 = "C3"
    C4 = "C4"
    F10 = "F10"
    P3 = "P3"
    P4_HALF = "P4_half"
    P4_THREEHALVES = "P4_threehalves"
    P4_ONE = "P4_one"
    R4 = "R4"
    T4 = "T4"
    CORANK2 = "Corank2"
    UNCLASSIFIED = "Unclassified"

    def __str__(self):
        return self.value


# higher number wins when several conditions hold at once
PRECEDENCE = {
    Kind.CORANK2: 4,
    Kind.F10: 3,
    Kind.T4: 3,
    Kind.C4: 2,
    Kind.P4_HALF: 2,
    Kind.P4_ONE: 2,
    Kind.P4_THREEHALVES: 2,
    Kind.R4: 2,
    Kind.B3: 1,
    Kind.C3: 1,
    Kind.P3: 1,
    Kind.B2: 0,
    Kind.STABLE_CROSSCAP: 0,
}

P4_LEVELS = {Kind.P4_HALF: 0.5, Kind.P4_ONE: 1.0, Kind.P4_THREEHALVES: 1.5}

B4_NOTE = (
    "B4 occurs at special points of the curve gamma = p3*alpha whose defining "
    "condition is not available; reported as B3"
)
NONGENERIC_NOTE = "non-generic cross-cap (a = 0): classification conditions assume a != 0"


class NonGenericCrossCapWarning(UserWarning):
    pass


@dataclass(frozen=True)
class SingularityLabel:
    kind: Kind
    sign: str = "undetermined"
    modulus_k: float | None = None
    residuals: Mapping[str, float] = field(default_factory=dict)
    collisions: tuple[Kind, ...] = ()
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        if (self.modulus_k is not None) != (self.kind is Kind.P3):
            raise ValueError("modulus_k is present exactly for P3")

    @property
    def residual_min(self) -> float:
        return min((abs(v) for k, v in self.residuals.items() if k != "delta"), default=float("inf"))

    def matches(self, kind: Kind) -> bool:
        """True when ``kind`` is the emitted kind or one of the colliding strata."""
        return self.kind is kind or kind in self.collisions

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "sign": self.sign,
            "modulus_k": self.modulus_k,
            "residuals": dict(self.residuals),
            "collisions": [k.value for k in self.collisions],
            "notes": list(self.notes),
        }


def phi_poly(params: CrossCapParams, beta: float, gamma: float) -> float:
    a, b = params.a, params.b
    return -2.0 * b * beta**3 + (4.0 * a - b * b + 2.0) * beta**2 * gamma + gamma**3


def psi_poly(params: CrossCapParams, k: float, alpha: float, gamma: float) -> float:
    return -2.0 * k * alpha * (alpha + params.p3 * gamma) + 1.0


def theta_poly(A: float, B: float, C: float) -> float:
    """Degeneracy polynomial for the corank-2 normal form."""
    return (
        -10240.0 * A**3
        + (-2560.0 * C**2 - 3840.0 * B - 1440.0 * C - 135.0) * A**2
        + (-160.0 * C**4 + 2880.0 * B**2 * C + 800.0 * B * C**2 - 20.0 * C**3 + 60.0 * B**2 + 90.0 * B * C) * A
        + 40.0 * B**2 * C**3
        - 540.0 * B**4
        - 180.0 * B**3 * C
        + 5.0 * B**2 * C**2
        - 20.0 * B**3
    )


def modulus_k(params: CrossCapParams, alpha: float, gamma: float) -> float:
    """``k`` solving ``Psi(k, alpha, gamma) = 0``."""
    return 1.0 / (2.0 * alpha * (alpha + params.p3 * gamma))


def _dist(eta, target) -> float:
    return math.sqrt(sum((e - t) ** 2 for e, t in zip(eta, target)))


def classify_fold(params: CrossCapParams, plane: FoldPlane, tol: float = DEFAULT_TOL, phi=None) -> SingularityLabel:
    """Singularity type of ``f_(eta, delta)`` at the origin.

    Every defining condition is evaluated and its distance from the
    threshold stored in ``residuals``; when several equality strata hold, the
    most degenerate one is emitted and the others are listed in ``collisions``.
    ``phi`` overrides the ``Phi`` polynomial (used for negative controls).
    """
    if not isinstance(plane, FoldPlane):
        raise TypeError("plane must be a FoldPlane")
    phi = phi or phi_poly
    alpha, beta, gamma = plane.eta
    notes = []
    if not params.is_generic(tol):
        warnings.warn(NONGENERIC_NOTE, NonGenericCrossCapWarning, stacklevel=2)
        notes.append(NONGENERIC_NOTE)
    res: dict[str, float] = {"delta": plane.delta}
    if abs(plane.delta) > tol:
        return SingularityLabel(Kind.STABLE_CROSSCAP, residuals=res, notes=tuple(notes))

    hits: list[Kind] = []
    res["corank2"] = _dist(plane.eta, (1.0, 0.0, 0.0))
    if res["corank2"] <= tol:
        hits.append(Kind.CORANK2)

    res["beta"] = beta
    k_val = None
    if abs(beta) > tol:
        # transverse to the tangent cone (the xz-plane)
        res["f10"] = min(_dist(plane.eta, (0.0, 1.0, 0.0)), _dist(plane.eta, (0.0, -1.0, 0.0)))
        if res["f10"] <= tol:
            hits.append(Kind.F10)
        res["alpha"] = alpha
        if abs(alpha) <= tol:
            res["phi"] = phi(params, beta, gamma)
            hits.append(Kind.C4 if abs(res["phi"]) <= tol else Kind.C3)
        else:
            res["gamma_minus_p3_alpha"] = gamma - params.p3 * alpha
            if abs(res["gamma_minus_p3_alpha"]) <= tol:
                hits.append(Kind.B3)
                notes.append(B4_NOTE)
            else:
                hits.append(Kind.B2)
    else:
        res["t4"] = min(_dist(plane.eta, (0.0, 0.0, 1.0)), _dist(plane.eta, (0.0, 0.0, -1.0)))
        if res["t4"] <= tol:
            hits.append(Kind.T4)
        res["alpha_plus_p3_gamma"] = alpha + params.p3 * gamma
        if abs(res["alpha_plus_p3_gamma"]) <= tol:
            hits.append(Kind.R4)
        elif alpha != 0.0:
            k_val = modulus_k(params, alpha, gamma)
            p4 = False
            for kind, level in P4_LEVELS.items():
                res[f"k_minus_{level:g}"] = k_val - level
                if abs(k_val - level) <= tol:
                    hits.append(kind)
                    p4 = True
            if not p4:
                hits.append(Kind.P3)

    if not hits:
        return SingularityLabel(Kind.UNCLASSIFIED, residuals=res, notes=tuple(notes))
    hits.sort(key=lambda k: -PRECEDENCE[k])
    kind = hits[0]
    # only coincidences of point strata are collisions; lying on a carrier curve is not
    collisions = tuple(k for k in hits[1:] if PRECEDENCE[k] >= 2)
    if kind is not Kind.B3 and B4_NOTE in notes:
        notes.remove(B4_NOTE)
    return SingularityLabel(
        kind,
        modulus_k=k_val if kind is Kind.P3 else None,
        residuals=res,
        collisions=collisions,
        notes=tuple(notes),
    )


# --------------------------------------------------------------------------
# sphere survey


def hemisphere_eta(theta, phi):
    """Unit normals on the canonical hemisphere ``alpha >= 0``.

    ``theta`` is the longitude from the ``x``-axis towards ``y`` and ``phi``
    the latitude towards ``z``, both in ``[-pi/2, pi/2]``.
    """
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    return np.stack(
        [np.cos(phi) * np.cos(theta), np.cos(phi) * np.sin(theta), np.sin(phi) + 0.0 * theta], axis=-1
    )


def eta_angles(eta) -> tuple[float, float]:
    """Inverse of :func:`hemisphere_eta` for a canonical unit normal."""
    a, b, g = eta
    phi = math.asin(max(-1.0, min(1.0, g)))
    theta = math.atan2(b, a) if (a, b) != (0.0, 0.0) else 0.0
    if theta > math.pi / 2:
        theta -= math.pi
    elif theta < -math.pi / 2:
        theta += math.pi
    return theta, phi


@dataclass(frozen=True)
class StratumPoint:
    kind: Kind
    eta: tuple[float, float, float]
    label: SingularityLabel
    carrier: str

    @property
    def collisions(self) -> tuple[Kind, ...]:
        return self.label.collisions


@dataclass
class StratificationReport:
    n_theta: int
    n_phi: int
    theta: np.ndarray
    phi: np.ndarray
    eta: np.ndarray  # (n_phi, n_theta, 3)
    kinds: np.ndarray  # (n_phi, n_theta) of Kind values (str)
    residual_min: np.ndarray
    counts: dict[str, int]
    points: list[StratumPoint]
    curves: dict[str, np.ndarray]
    curve_kinds: dict[str, dict[str, int]]
    collisions: list[str]

    @property
    def grid_size(self) -> int:
        return self.n_theta * self.n_phi

    def points_of(self, kind: Kind) -> list[StratumPoint]:
        return [p for p in self.points if p.kind is kind]

    def inventory(self) -> dict:
        return {
            "grid": [self.n_theta, self.n_phi],
            "cell_counts": dict(self.counts),
            "points": {k.value: len(self.points_of(k)) for k in Kind if self.points_of(k)},
            "curves": {name: dict(v) for name, v in self.curve_kinds.items()},
            "collisions": list(self.collisions),
        }


def _canonical(v) -> tuple[float, float, float]:
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    return FoldPlane(tuple(v / math.sqrt(float(v @ v)))).eta


def _point(params, eta, carrier, tol) -> StratumPoint:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonGenericCrossCapWarning)
        label = classify_fold(params, FoldPlane(eta), tol)
    return StratumPoint(label.kind, eta, label, carrier)


def locate_point_strata(params: CrossCapParams, tol: float = DEFAULT_TOL) -> list[StratumPoint]:
    """Isolated strata located as projective roots along their carrier circles."""
    pts = []
    # alpha = 0 circle: Phi(beta, gamma) = 0
    a, b = params.a, params.b
    for be, g, _ in binary_form_roots([-2.0 * b, 4.0 * a - b * b + 2.0, 0.0, 1.0]):
        pts.append(_point(params, _canonical((0.0, be, g)), "alpha=0", tol))
    pts.append(_point(params, (0.0, 1.0, 0.0), "alpha=0", tol))
    pts.append(_point(params, (0.0, 0.0, 1.0), "beta=0", tol))
    pts.append(_point(params, (1.0, 0.0, 0.0), "beta=0", tol))
    # beta = 0 circle: R4 line and Psi(k0) = 0 conics
    pts.append(_point(params, _canonical((-params.p3, 0.0, 1.0)), "beta=0", tol))
    for level in P4_LEVELS.values():
        # 2 k0 alpha (alpha + p3 gamma) - (alpha^2 + gamma^2) = 0
        form = [2.0 * level - 1.0, 2.0 * level * params.p3, -1.0]
        for al, g, _ in binary_form_roots(form):
            pts.append(_point(params, _canonical((al, 0.0, g)), "beta=0", tol))
    # drop duplicates (same eta found from two carriers)
    out: list[StratumPoint] = []
    for p in pts:
        if not any(_dist(p.eta, q.eta) <= 1e-12 for q in out):
            out.append(p)
    return out


def _bisect(f, lo, hi, tol=1e-10):
    flo = f(lo)
    for _ in range(200):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _trace_crossings(func, fixed, moving, along_theta: bool):
    """Sign-change crossings of ``func(eta)`` along each grid line, bisected."""
    out = []
    for c in fixed:
        def g(t, c=c):
            eta = hemisphere_eta(t, c) if along_theta else hemisphere_eta(c, t)
            return func(eta)

        vals = np.array([g(t) for t in moving])
        # a grid line can sit exactly on the curve
        for t in moving[vals == 0.0]:
            out.append(hemisphere_eta(t, c) if along_theta else hemisphere_eta(c, t))
        for i in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]:
            t = _bisect(g, moving[i], moving[i + 1])
            eta = hemisphere_eta(t, c) if along_theta else hemisphere_eta(c, t)
            out.append(eta)
    return np.array(out).reshape(-1, 3)


def survey_sphere(
    params: CrossCapParams,
    n_theta: int = 512,
    n_phi: int = 256,
    tol: float = DEFAULT_TOL,
) -> StratificationReport:
    """Classify a longitude/latitude grid of the canonical hemisphere.

    Cells are classified at their centres. Curve strata are located by
    bisecting sign changes of their defining function along grid lines, and
    point strata by closed-form roots along the carrier circles.
    """
    if n_theta < 8 or n_phi < 4:
        raise ValueError("grid must be at least 8 x 4")
    h = math.pi / 2
    theta = -h + (np.arange(n_theta) + 0.5) * (math.pi / n_theta)
    phi = -h + (np.arange(n_phi) + 0.5) * (math.pi / n_phi)
    TT, PP = np.meshgrid(theta, phi)
    eta = hemisphere_eta(TT, PP)
    kinds = np.empty(TT.shape, dtype=object)
    rmin = np.empty(TT.shape)
    counts: dict[str, int] = {}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonGenericCrossCapWarning)
        for idx in np.ndindex(TT.shape):
            label = classify_fold(params, FoldPlane(_canonical(eta[idx])), tol)
            kinds[idx] = label.kind.value
            rmin[idx] = label.residual_min
            counts[label.kind.value] = counts.get(label.kind.value, 0) + 1

    # curve strata
    p3 = params.p3
    fine_t = -h + np.arange(n_theta + 1) * (math.pi / n_theta)
    fine_p = -h + np.arange(n_phi + 1) * (math.pi / n_phi)
    curves = {
        "B3": _trace_crossings(lambda e: e[2] - p3 * e[0], theta, fine_p, along_theta=False),
        "P": _trace_crossings(lambda e: e[1], phi, fine_t, along_theta=True),
    }
    s = np.linspace(-h, h, 2 * (n_theta + n_phi) + 1)[1:-1]
    curves["C"] = np.stack([np.zeros_like(s), np.cos(s), np.sin(s)], axis=-1)
    curve_kinds: dict[str, dict[str, int]] = {}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonGenericCrossCapWarning)
        for name, pts in curves.items():
            tally: dict[str, int] = {}
            for e in pts:
                k = classify_fold(params, FoldPlane(_canonical(e)), tol).kind.value
                tally[k] = tally.get(k, 0) + 1
            curve_kinds[name] = tally

    points = locate_point_strata(params, tol)
    collisions = [
        f"{p.kind.value} at eta=({p.eta[0]:.6g}, {p.eta[1]:.6g}, {p.eta[2]:.6g}) also satisfies "
        + ", ".join(k.value for k in p.collisions)
        for p in points
        if p.collisions
    ]
    return StratificationReport(
        n_theta, n_phi, theta, phi, eta, kinds, rmin, counts, points, curves, curve_kinds, collisions
    )
