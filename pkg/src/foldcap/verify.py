"""Cross-checks of every closed form against an independent computation.

Each ``check_*`` function returns a list of :class:`Check` rows; a criterion
passes when all of its rows pass. :func:`run_verification` runs them all.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import jets
from .classify import (
    NONGENERIC_NOTE,
    Kind,
    NonGenericCrossCapWarning,
    classify_fold,
    phi_poly,
    psi_poly,
    survey_sphere,
)
from .crosscap import CrossCapParams, crosscap_type, curvature_limit, forms_arrays, principal_arrays
from .folding import FoldPlane, fold_germ_jet, nonversality_witness, whitney_crosscap_test
from .geometry import (
    CHARACTERISATION_KINDS,
    separatrix_lambdas,
    subparabolic_cubic,
    subparabolic_directions,
    characterisation_residual,
)
from .numlab import (
    EXCHANGE_RATIO,
    RaySamplingPlan,
    arbitrate_ridge_reading,
    curvature_limit_oracle,
    double_point_oracle,
    subparabolic_fit,
    trace_separatrices,
)
from .polyroots import binary_form_roots

# a cross-cap on which every singularity kind has its own isolated witness
WITNESS_PARAMS = CrossCapParams(a=1.0, b=1.0, p3=0.3)


@dataclass(frozen=True)
class Check:
    criterion: int
    quantity: str
    closed_form: object
    oracle_value: object
    abs_error: float
    tolerance: float
    passed: bool

    def row(self):
        return (self.quantity, self.closed_form, self.oracle_value, self.abs_error, self.tolerance, self.passed)


def _numeric(criterion, quantity, closed, oracle, tol) -> Check:
    err = abs(float(closed) - float(oracle))
    return Check(criterion, quantity, float(closed), float(oracle), err, tol, bool(err < tol))


def _label(criterion, quantity, expected, got) -> Check:
    ok = expected == got
    return Check(criterion, quantity, expected, got, 0.0 if ok else 1.0, 0.0, ok)


@dataclass
class Hooks:
    """Test hooks; ``phi`` replaces the discriminant polynomial ``Phi(params, beta, gamma)``."""

    phi: Callable | None = None


def random_generic_params(rng: np.random.Generator) -> CrossCapParams:
    a = rng.uniform(0.2, 2.0) * rng.choice([-1.0, 1.0])
    coeffs = rng.uniform(-1.0, 1.0, 11)
    names = ("p3", "p4", "q30", "q31", "q32", "q33", "q40", "q41", "q42", "q43", "q44")
    return CrossCapParams(a=a, b=rng.uniform(-2.0, 2.0), **dict(zip(names, coeffs)))


def _unit(v):
    v = np.asarray(v, dtype=float)
    return tuple(v / np.linalg.norm(v))


# ---------------------------------------------------------------------------
# 1. table reproduction


def table_witnesses(params: CrossCapParams, tol: float = 1e-9, hooks: Hooks | None = None) -> dict[str, list[FoldPlane]]:
    """Planes built from each row's defining condition, keyed by the expected kind."""
    phi = hooks.phi if hooks and hooks.phi else None
    p3 = params.p3
    w: dict[str, list[FoldPlane]] = {}
    w[Kind.B2.value] = [FoldPlane(_unit((1.0, 1.0, p3 + 0.5)))]
    w[Kind.B3.value] = [FoldPlane(_unit((1.0, 1.0, p3)))]
    w[Kind.C3.value] = [FoldPlane(_unit((0.0, 1.0, 1.0)))]
    c4 = []
    for be, ga, _ in binary_form_roots([-2.0 * params.b, 4.0 * params.a - params.b**2 + 2.0, 0.0, 1.0]):
        if abs(ga) > tol:
            c4.append(FoldPlane(_unit((0.0, be, ga))))
    w[Kind.C4.value] = c4
    w[Kind.F10.value] = [FoldPlane((0.0, 1.0, 0.0))]
    w[Kind.P3.value] = [FoldPlane(_unit((1.0, 0.0, 0.5)))]
    levels = {Kind.P4_HALF.value: 0.5, Kind.P4_ONE.value: 1.0, Kind.P4_THREEHALVES.value: 1.5}
    for name, k0 in levels.items():
        roots = binary_form_roots([2.0 * k0 - 1.0, 2.0 * k0 * p3, -1.0])
        # the gamma = 0 root of the k = 1/2 conic is the tangential direction itself
        w[name] = [FoldPlane(_unit((al, 0.0, ga))) for al, ga, _ in roots if abs(ga) > tol and abs(al) > tol]
    w[Kind.R4.value] = [FoldPlane(_unit((-p3, 0.0, 1.0)))]
    w[Kind.T4.value] = [FoldPlane((0.0, 0.0, 1.0))]
    w[Kind.CORANK2.value] = [FoldPlane((1.0, 0.0, 0.0)), FoldPlane.from_vector((-1.0, 0.0, 0.0))]
    w[Kind.STABLE_CROSSCAP.value] = [FoldPlane(_unit((1.0, 1.0, p3 + 0.5)), 0.1), FoldPlane((0.0, 1.0, 0.0), 0.5)]
    return w


def check_table_reproduction(params: CrossCapParams = WITNESS_PARAMS, tol: float = 1e-9, hooks: Hooks | None = None):
    phi = hooks.phi if hooks and hooks.phi else None
    out = []
    for expected, planes in table_witnesses(params, tol, hooks).items():
        if not planes:
            out.append(_label(1, f"table_row[{expected}]", expected, "no witness"))
            continue
        got = {classify_fold(params, p, tol, phi=phi).kind.value for p in planes}
        out.append(_label(1, f"table_row[{expected}]", expected, "|".join(sorted(got))))
    return out


# ---------------------------------------------------------------------------
# 2, 3. polynomial identities


def check_identity_a(rng: np.random.Generator, n: int = 10_000, hooks: Hooks | None = None):
    """Sub-parabolic cubic at ``(beta, (gamma - b beta)/2)`` against ``Phi / 4``."""
    phi = hooks.phi if hooks and hooks.phi else phi_poly
    worst = 0.0
    for _ in range(n):
        a, b = rng.uniform(-3.0, 3.0, 2)
        be, ga = rng.uniform(-1.0, 1.0, 2)
        p = CrossCapParams(a=a, b=b)
        lhs = subparabolic_cubic(p, be, (ga - b * be) / 2.0)
        rhs = 0.25 * phi(p, be, ga)
        # relative to the size of the terms, so cancellation does not inflate the ratio
        scale = 0.25 * (abs(2 * b * be**3) + abs((4 * a - b * b + 2) * be**2 * ga) + abs(ga**3))
        worst = max(worst, abs(lhs - rhs) / max(scale, 1e-300))
    return [_numeric(2, "identity_A_max_rel_error", 0.0, worst, 1e-10)]


def check_identities_bc(rng: np.random.Generator, n: int = 10_000):
    worst_b = worst_c = 0.0
    for _ in range(n):
        t = rng.uniform(0.0, 2.0 * math.pi)
        al, ga = math.cos(t), math.sin(t)
        p = CrossCapParams(p3=rng.uniform(-2.0, 2.0))
        worst_b = max(worst_b, abs(psi_poly(p, 0.5, al, ga) - ga * (ga - p.p3 * al)))
        if abs(al) < 1e-3:
            continue
        lam = -ga / al
        worst_c = max(worst_c, abs(psi_poly(p, 1.5, al, ga) - al * al * (lam * lam + 3 * p.p3 * lam - 2.0)))
    return [
        _numeric(3, "identity_B_max_error", 0.0, worst_b, 1e-10),
        _numeric(3, "identity_C_max_error", 0.0, worst_c, 1e-10),
    ]


# ---------------------------------------------------------------------------
# 4-8. numeric oracles against closed forms


def check_curvature_limits(rng: np.random.Generator, n_params: int = 20, n_rays: int = 10):
    out = []
    for i in range(n_params):
        p = random_generic_params(rng)
        for j in range(n_rays):
            # rays kept away from the kernel direction, where the limit is singular
            while True:
                t = rng.uniform(0.0, 2.0 * math.pi)
                if abs(math.cos(t)) >= 0.2:
                    break
            al, be = math.cos(t), math.sin(t)
            fit = curvature_limit_oracle(p, RaySamplingPlan((al, be)))
            out.append(_numeric(4, f"curvature_limit[{i}.{j}]", curvature_limit(p, al, be), fit.value, 1e-6))
    return out


def check_subparabolic(rng: np.random.Generator, n: int = 20):
    out = []
    for i in range(n):
        a = rng.uniform(0.2, 2.0) * rng.choice([-1.0, 1.0])
        p = CrossCapParams(a=a, b=rng.uniform(-2.0, 2.0))
        closed = subparabolic_directions(p)
        fitted = subparabolic_fit(p)
        ok_count = len(fitted) == len(closed) and 1 <= len(closed) <= 3
        out.append(
            Check(5, f"subparabolic_count[{i}]", len(closed), len(fitted), abs(len(closed) - len(fitted)), 0.0, ok_count)
        )
        for k, d in enumerate(closed):
            err = min((d.angle_to(f) for f in fitted), default=math.inf)
            out.append(Check(5, f"subparabolic_angle[{i}.{k}]", d.angle, d.angle + err, err, 1e-3, err < 1e-3))
    return out


def check_ridge_arbitration(params: CrossCapParams):
    b = params.b if abs(params.b) > 0.1 else 1.0
    p = params.replace(b=b)
    res = arbitrate_ridge_reading(p)
    return [
        Check(6, "ridge_direction_count", 2, res["count"], abs(res["count"] - 2), 0.0, res["count"] == 2),
        Check(6, "ridge_vertical_angle", 0.0, res["vertical_error"], res["vertical_error"], 1e-2, res["vertical_error"] < 1e-2),
        Check(
            6,
            f"ridge_sign_reading[b={b:g}]",
            "printed|proof",
            res["reading"] or "indeterminate",
            0.0 if res["reading"] in ("printed", "proof") else 1.0,
            0.0,
            res["reading"] in ("printed", "proof"),
        ),
    ]


def check_separatrices(params: CrossCapParams, p3_values=(-1.0, -0.3, 0.0, 0.3, 1.0)):
    out = []
    for p3 in p3_values:
        p = params.replace(p3=p3)
        closed = [s.lam for s in separatrix_lambdas(p) if s.form == "x=lambda*y^2"]
        traced = [s.lam for s in trace_separatrices(p, tangential=False)]
        for k, lam in enumerate(closed):
            got = min(traced, key=lambda v: abs(v - lam))
            out.append(_numeric(7, f"separatrix_lambda[p3={p3:g}.{k}]", lam, got, 1e-3))
        prod = traced[0] * traced[1] if len(traced) >= 2 else math.nan
        out.append(_numeric(7, f"separatrix_vieta[p3={p3:g}]", -2.0, prod, 5e-3))
    return out


def check_double_points(rng: np.random.Generator, n: int = 10):
    out = []
    for i in range(n):
        p = random_generic_params(rng)
        fit = double_point_oracle(p)
        out.append(_numeric(8, f"double_point[{i}]", -p.p3, fit.value, 1e-6))
    return out


# ---------------------------------------------------------------------------
# 9. recognition of the cross-cap


def check_whitney(params: CrossCapParams, rng: np.random.Generator, n: int = 100):
    degenerate_ok = crosscap_ok = 0
    slopes = []
    deltas = np.array([1e-4, 1e-2, 1e-1])
    for _ in range(n):
        eta = _unit(rng.normal(size=3))
        g0 = whitney_crosscap_test(fold_germ_jet(params, FoldPlane(eta, 0.0)))
        degenerate_ok += not g0.is_crosscap
        dets = []
        for d in deltas:
            r = whitney_crosscap_test(fold_germ_jet(params, FoldPlane(eta, float(d))))
            crosscap_ok += r.is_crosscap
            dets.append(abs(r.det) if r.det is not None else math.nan)
        slopes.append(np.polyfit(np.log(deltas), np.log(dets), 1)[0])
    worst = float(np.max(np.abs(np.array(slopes) - 1.0)))
    return [
        Check(9, "whitney_degenerate_at_delta0", n, degenerate_ok, n - degenerate_ok, 0.0, degenerate_ok == n),
        Check(9, "whitney_crosscap_for_delta", 3 * n, crosscap_ok, 3 * n - crosscap_ok, 0.0, crosscap_ok == 3 * n),
        _numeric(9, "whitney_det_loglog_slope_worst", 1.0, 1.0 + worst, 0.2),
    ]


# ---------------------------------------------------------------------------
# 10. geometric characterisations at surveyed strata


def check_characterisation(params: CrossCapParams, grid: tuple[int, int] = (64, 32), tol: float = 1e-9):
    report = survey_sphere(params, grid[0], grid[1], tol)
    out = []
    for item in ("i", "iii", "iv", "v", "vi"):
        for pt in report.points:
            # a point whose emitted kind is more degenerate is not an instance of the item
            if pt.kind not in CHARACTERISATION_KINDS[item]:
                continue
            r = characterisation_residual(params, FoldPlane(pt.eta), item, tol)
            eta = ",".join(f"{c:.6g}" for c in pt.eta)
            out.append(_numeric(10, f"characterisation_{item}[{pt.kind.value} eta=({eta})]", 0.0, r, 1e-8))
    if not out:
        out.append(Check(10, "characterisation_points_found", ">=1", 0, 1.0, 0.0, False))
    return out


# ---------------------------------------------------------------------------
# 11. non-versality


def check_nonversality(rng: np.random.Generator, n: int = 1000):
    worst = 0.0
    for _ in range(n):
        eta = _unit(rng.normal(size=3))
        worst = max(worst, abs(nonversality_witness(FoldPlane(eta), rng.uniform(-3.0, 3.0))))
    return [_numeric(11, "nonversality_max_abs_det", 0.0, worst, 1e-12)]


# ---------------------------------------------------------------------------
# 12. jet algebra


def _random_jet(rng, order, lowest=0):
    c = rng.normal(size=(order + 1, order + 1))
    i, j = np.indices(c.shape)
    c[(i + j > order) | (i + j < lowest)] = 0.0
    return jets.Jet2(order, c)


def truncation_slope(rng: np.random.Generator, order: int, radii=(1e-2, 1e-3)) -> float:
    """Log-log slope of ``max |a(p) b(p) - (a b)(p)|`` over ``|p| = r`` against ``r``.

    The jets start at degree ``L`` with ``2L`` close to ``order`` so the
    dropped tail (degree ``order + 1``) stays well above the rounding error of
    the values themselves (degree ``2L``).
    """
    lowest = max(1, (order - 2) // 2)
    a, b = _random_jet(rng, order, lowest), _random_jet(rng, order, lowest)
    ab = a * b
    # largest error over the circle, so a direction where the tail happens to vanish cannot bias it
    t = rng.uniform(0.0, 2.0 * math.pi) + np.arange(16) * (math.pi / 8)
    u, v = np.cos(t), np.sin(t)
    errs = [np.max(np.abs(a(r * u, r * v) * b(r * u, r * v) - ab(r * u, r * v))) for r in radii]
    return float(np.polyfit(np.log(radii), np.log(errs), 1)[0])


def check_jet_algebra(rng: np.random.Generator, n: int = 50, order: int = 5):
    worst_ring = worst_eval = worst_diff = 0.0
    for _ in range(n):
        a, b, c = (_random_jet(rng, order) for _ in range(3))
        pairs = [
            (a + b, b + a),
            (a * b, b * a),
            ((a + b) + c, a + (b + c)),
            ((a * b) * c, a * (b * c)),
            (a * (b + c), a * b + a * c),
            (a * jets.Jet2.one(order), a),
            (a + jets.Jet2.zero(order), a),
        ]
        for u, v in pairs:
            scale = 1.0 + max(np.max(np.abs(u.coeffs)), np.max(np.abs(v.coeffs)))
            worst_ring = max(worst_ring, float(np.max(np.abs(u.coeffs - v.coeffs))) / scale)
        x, y = rng.uniform(-1.0, 1.0, 2)
        worst_eval = max(worst_eval, abs((a + b)(x, y) - (a(x, y) + b(x, y))))
        # derivative jets against central differences at radius 1e-2
        t = rng.uniform(0.0, 2.0 * math.pi)
        x, y, h = 1e-2 * math.cos(t), 1e-2 * math.sin(t), 1e-6
        fd_x = (a(x + h, y) - a(x - h, y)) / (2 * h)
        fd_y = (a(x, y + h) - a(x, y - h)) / (2 * h)
        worst_diff = max(worst_diff, abs(jets.jet_diff(a, "x")(x, y) - fd_x), abs(jets.jet_diff(a, "y")(x, y) - fd_y))
    slopes = [truncation_slope(rng, k) for k in (4, order, 7)]
    worst_slope = max(abs(s - (k + 1)) for s, k in zip(slopes, (4, order, 7)))
    return [
        _numeric(12, "jet_ring_axioms_max_rel_error", 0.0, worst_ring, 1e-12),
        _numeric(12, "jet_eval_additivity_max_error", 0.0, worst_eval, 1e-12),
        _numeric(12, "jet_diff_vs_finite_difference", 0.0, worst_diff, 1e-6),
        _numeric(12, "jet_truncation_slope_worst_deviation", 0.0, worst_slope, 0.3),
    ]


# ---------------------------------------------------------------------------
# surface type


def numeric_surface_type(params: CrossCapParams, r: float = 1e-4, n: int = 1440) -> str:
    """Type read off the bounded curvature on a small circle.

    Its limit vanishes along two lines when ``a > 0`` and nowhere when ``a < 0``.
    Only sign changes through small values count; near the kernel direction
    the curvature can also flip sign through a pole or a label exchange.
    """
    t = (np.arange(n) + 0.5) * (2.0 * math.pi / n)
    ks, kl, _, _ = principal_arrays(*forms_arrays(params, r * np.cos(t), r * np.sin(t)))
    ok = np.abs(kl) >= EXCHANGE_RATIO * np.abs(ks)
    # a zero crossing passes through small values; a flip through a pole does not
    ok &= np.abs(ks) < np.median(np.abs(ks))
    s = np.sign(ks)
    changes = sum(1 for i in range(n) if ok[i] and ok[(i + 1) % n] and s[i] != s[(i + 1) % n])
    return "elliptic" if changes >= 2 else "hyperbolic"


def check_surface_type(params: CrossCapParams, tol: float = 1e-9):
    closed = crosscap_type(params, tol)
    if closed == "parabolic":
        # a = 0 is the non-generic boundary; there is nothing to separate numerically
        return [Check(0, "surface_type", closed, "parabolic (non-generic)", 0.0, 0.0, True)]
    got = numeric_surface_type(params)
    return [_label(0, "surface_type", closed, got)]


# ---------------------------------------------------------------------------


CRITERIA = {
    1: "table reproduction",
    2: "identity A",
    3: "identities B and C",
    4: "curvature limit",
    5: "sub-parabolic directions",
    6: "ridge arbitration",
    7: "separatrices",
    8: "double point",
    9: "cross-cap recognition",
    10: "geometric characterisation residuals",
    11: "non-versality witness",
    12: "jet algebra",
}


@dataclass
class VerificationReport:
    checks: list[Check] = field(default_factory=list)
    timings: dict[int, float] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def criterion_passed(self, k: int) -> bool:
        rows = [c for c in self.checks if c.criterion == k]
        return bool(rows) and all(c.passed for c in rows)

    def rows(self):
        return [c.row() for c in self.checks]


def run_criterion(k: int, params: CrossCapParams, seed: int = 0, grid=(64, 32), tol=1e-9, hooks=None):
    rng = np.random.default_rng([seed, k])
    if k == 1:
        return check_table_reproduction(WITNESS_PARAMS, tol, hooks)
    if k == 2:
        return check_identity_a(rng, hooks=hooks)
    if k == 3:
        return check_identities_bc(rng)
    if k == 4:
        return check_curvature_limits(rng)
    if k == 5:
        return check_subparabolic(rng)
    if k == 6:
        return check_ridge_arbitration(params)
    if k == 7:
        return check_separatrices(params)
    if k == 8:
        return check_double_points(rng)
    if k == 9:
        return check_whitney(params, rng)
    if k == 10:
        return check_characterisation(params, grid, tol)
    if k == 11:
        return check_nonversality(rng)
    if k == 12:
        return check_jet_algebra(rng)
    raise ValueError(f"unknown criterion {k}")


def run_verification(
    params: CrossCapParams,
    seed: int = 0,
    grid: tuple[int, int] = (64, 32),
    tol: float = 1e-9,
    criteria=None,
    hooks: Hooks | None = None,
) -> VerificationReport:
    report = VerificationReport()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", NonGenericCrossCapWarning)
        report.checks += check_surface_type(params, tol)
        for k in criteria or CRITERIA:
            t0 = time.perf_counter()
            report.checks += run_criterion(k, params, seed, grid, tol, hooks)
            report.timings[k] = time.perf_counter() - t0
    found = {str(w.message) for w in caught if issubclass(w.category, NonGenericCrossCapWarning)}
    if not params.is_generic(tol):
        found.add(NONGENERIC_NOTE)
    report.warnings = sorted(found)
    return report
