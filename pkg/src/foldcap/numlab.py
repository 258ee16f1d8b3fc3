"""Numeric oracles for the local geometry of a cross-cap.

Nothing here uses the closed-form expressions of :mod:`foldcap.geometry` or
:func:`foldcap.crosscap.curvature_limit`; every quantity is measured from the
fundamental forms of ``phi`` at regular points near the origin and then
extrapolated towards it.

Branch convention. Near the cross-cap point one principal curvature stays
bounded (``kappa1``) and the other grows like ``1/r^2`` (``kappa2``); the
direction of ``kappa2`` tends to the kernel direction ``d/dy``. Curvatures are
therefore labelled by magnitude and ``nu2`` is oriented with a positive
``y``-component. Inside a thin wedge around the ``y``-axis (width shrinking
like ``sqrt(r)``) both curvatures are of order ``1/r`` and the labels
exchange; this wedge is detected from the data (``|kappa2| < EXCHANGE_RATIO
|kappa1|``) and bridged. A sign change of a scanned function across the wedge
is kept only if ``|f|`` decays towards the wedge (a zero) and discarded if it
grows (a pole); the same power-law test screens ordinary sign changes.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq, fsolve

from .crosscap import CrossCapParams, forms_arrays, principal_arrays
from .geometry import Direction2, SeparatrixCoeff
from .polyroots import projective_angle

logger = logging.getLogger(__name__)

MIN_RADIUS = 1e-8
EXCHANGE_RATIO = 10.0


class OracleError(RuntimeError):
    """An oracle could not produce an estimate; the message carries the diagnostic."""


@dataclass(frozen=True)
class RaySamplingPlan:
    """Sample radii ``r0 * rho**k`` (``k = 0..m``) along the unit ray ``direction``."""

    direction: tuple[float, float]
    r0: float = 1e-2
    rho: float = 0.5
    m: int = 8

    def __post_init__(self):
        d = np.asarray(self.direction, dtype=float)
        n = float(np.linalg.norm(d))
        if d.shape != (2,) or n == 0.0:
            raise ValueError("direction must be a nonzero 2-vector")
        object.__setattr__(self, "direction", (float(d[0] / n), float(d[1] / n)))
        if not (0.0 < self.r0 < 1.0 and 0.0 < self.rho < 1.0):
            raise ValueError("r0 and rho must lie in (0, 1)")
        if self.m < 4:
            raise ValueError("at least five radii (m >= 4) are needed")
        if self.radii[-1] <= MIN_RADIUS:
            raise ValueError(f"smallest radius {self.radii[-1]:.3g} is below the {MIN_RADIUS:g} floor")

    @property
    def radii(self) -> np.ndarray:
        return self.r0 * self.rho ** np.arange(self.m + 1)


@dataclass(frozen=True)
class FitResult:
    value: float
    uncertainty: float
    samples_used: int
    method: str = ""

    def __post_init__(self):
        if not self.uncertainty >= 0.0:
            raise ValueError("uncertainty must be non-negative")


# ---------------------------------------------------------------------------
# extrapolation


def richardson_table(values: Sequence[float], ratio: float, p: int = 1) -> np.ndarray:
    """Richardson table for samples at steps ``h, h*ratio, h*ratio^2, ...``.

    The error is assumed to expand in powers ``h^p, h^(p+1), ...``; row ``j``
    of the returned lower-triangular table eliminates the first ``j`` terms.
    """
    v = np.asarray(values, dtype=float)
    n = v.size
    T = np.full((n, n), np.nan)
    T[:, 0] = v
    for j in range(1, n):
        f = ratio ** -(p + j - 1)
        T[j:, j] = (f * T[j:, j - 1] - T[j - 1 : -1, j - 1]) / (f - 1.0)
    return T


def convergence_order(steps: Sequence[float], values: Sequence[float]) -> float:
    """Observed order from the log-log slope of successive differences."""
    steps = np.asarray(steps, dtype=float)
    d = np.abs(np.diff(np.asarray(values, dtype=float)))
    good = d > 0
    if good.sum() < 2:
        return math.inf
    return float(np.polyfit(np.log(steps[:-1][good]), np.log(d[good]), 1)[0])


def extrapolate_to_zero(steps: Sequence[float], values: Sequence[float]) -> FitResult:
    """Limit of ``values`` as ``steps -> 0`` for a geometric step sequence.

    First-order Richardson when the observed order is within 0.3 of 1, a
    polynomial fit in the step otherwise.
    """
    steps = np.asarray(steps, dtype=float)
    values = np.asarray(values, dtype=float)
    n = values.size
    if n < 3:
        raise OracleError("need at least three samples to extrapolate")
    order = convergence_order(steps, values)
    ratio = steps[1] / steps[0]
    geometric = np.allclose(steps[1:] / steps[:-1], ratio, rtol=1e-9)
    floor = 1e-14 * (1.0 + abs(values[-1]))
    if geometric and abs(order - 1.0) <= 0.3:
        T = richardson_table(values, ratio, 1)
        diag = np.diag(T)
        # the deepest levels amplify round-off; keep the most consistent pair
        jumps = np.abs(np.diff(diag))
        j = int(np.argmin(jumps[1:])) + 2 if jumps.size > 1 else 1
        value = float(diag[j])
        unc = float(max(jumps[j - 1], floor))
        return FitResult(value, unc, n, "richardson")
    deg = min(3, n - 2)
    c_hi = np.polyfit(steps, values, deg)
    c_lo = np.polyfit(steps, values, deg - 1)
    value = float(c_hi[-1])
    return FitResult(value, float(max(abs(c_hi[-1] - c_lo[-1]), floor)), n, "polyfit")


# ---------------------------------------------------------------------------
# curvature along rays


def _curvatures(params, x, y):
    return principal_arrays(*forms_arrays(params, x, y))


def curvature_limit_oracle(params: CrossCapParams, plan: RaySamplingPlan) -> FitResult:
    """Extrapolated limit of the bounded principal curvature along a ray."""
    al, be = plan.direction
    if abs(al) < 1e-12:
        raise OracleError("ray tangent to the y-axis: no bounded curvature limit")
    radii = plan.radii
    k_small, k_large, _, _ = _curvatures(params, radii * al, radii * be)
    umbilic = np.abs(k_large - k_small) <= 1e-10 * (1.0 + np.abs(k_large))
    if umbilic.all():
        raise OracleError("every sample along the ray is umbilic")
    if umbilic.any():
        logger.info("skipping %d umbilic samples", int(umbilic.sum()))
    # bounded branch: smallest magnitude at the innermost radius, then continuity outwards
    keep = np.nonzero(~umbilic)[0]
    branch = np.empty(keep.size)
    last = k_small[keep[-1]]
    for pos in range(keep.size - 1, -1, -1):
        i = keep[pos]
        cand = (k_small[i], k_large[i])
        last = min(cand, key=lambda v: abs(v - last))
        branch[pos] = last
    steps = radii[keep]
    if keep.size != radii.size:
        # geometric spacing broken: polynomial extrapolation still applies
        deg = min(3, keep.size - 2)
        c_hi, c_lo = np.polyfit(steps, branch, deg), np.polyfit(steps, branch, deg - 1)
        return FitResult(float(c_hi[-1]), float(abs(c_hi[-1] - c_lo[-1])), keep.size, "polyfit")
    return extrapolate_to_zero(steps, branch)


# ---------------------------------------------------------------------------
# zero sets of derivatives of the curvatures along nu2


@dataclass
class CircleZero:
    radius: float
    theta: float
    kind: str  # "regular" or "exchange"
    exponent: float


@dataclass
class ZeroScan:
    quantity: str
    radii: list[float]
    zeros: list[CircleZero] = field(default_factory=list)
    rejected: list[CircleZero] = field(default_factory=list)
    directions: list[Direction2] = field(default_factory=list)
    tracks: list[list[CircleZero]] = field(default_factory=list)
    scale_exponents: list[float] = field(default_factory=list)
    diagnostic: str = ""


def _nu2_derivative(params, x, y, which: int, h):
    """Central difference of kappa_which along nu2 (oriented +y) and the label ratio."""
    ks, kl, _, dl = _curvatures(params, x, y)
    v = dl * np.where(dl[..., 1:2] < 0.0, -1.0, 1.0)
    fp = _curvatures(params, x + h * v[..., 0], y + h * v[..., 1])
    fm = _curvatures(params, x - h * v[..., 0], y - h * v[..., 1])
    d = (fp[which] - fm[which]) / (2.0 * h)
    with np.errstate(divide="ignore"):
        ratio = np.abs(kl) / np.abs(ks)
    return d, ratio


def _circle_values(params, r, theta, which):
    theta = np.asarray(theta, dtype=float)
    return _nu2_derivative(params, r * np.cos(theta), r * np.sin(theta), which, 1e-6 * r)


def _power_exponent(params, r, which, centre, inner, side):
    """Log-log slope of ``|f|`` at angular distances ``inner`` and ``4 inner`` from ``centre``."""
    th = centre + side * np.array([inner, 4.0 * inner])
    f, ratio = _circle_values(params, r, th, which)
    if np.any(f == 0.0) or np.any(ratio < EXCHANGE_RATIO):
        return math.nan
    return float(np.log(abs(f[1]) / abs(f[0])) / np.log(4.0))


def _scan_circle(params, r, n, which):
    """Zero angles of ``nu2(kappa_which)`` on the circle of radius ``r``."""
    dtheta = 2.0 * math.pi / n
    theta = (np.arange(n) + 0.5) * dtheta
    f, ratio = _circle_values(params, r, theta, which)
    zone = ratio < EXCHANGE_RATIO
    good = np.nonzero(~zone)[0]
    found, rejected = [], []
    if good.size < 2:
        return found, rejected
    scalar = lambda t: float(_circle_values(params, r, np.array([t]), which)[0][0])
    for k in range(good.size):
        i, j = good[k], good[(k + 1) % good.size]
        if np.sign(f[i]) == np.sign(f[j]):
            continue
        t_i = theta[i]
        t_j = theta[j] + (2.0 * math.pi if j <= i else 0.0)
        if (j - i) % n == 1:
            root = brentq(lambda t: scalar(t % (2 * math.pi)), t_i, t_j, xtol=1e-13, rtol=1e-13)
            inner = 3.0 * dtheta
            slopes = [_power_exponent(params, r, which, root, inner, s) for s in (-1.0, 1.0)]
            z = CircleZero(r, root % (2 * math.pi), "regular", float(np.nanmean(slopes)))
        else:
            centre = 0.5 * (t_i + t_j)
            half = 0.5 * (t_j - t_i)
            slopes = [_power_exponent(params, r, which, centre, 2.0 * half, s) for s in (-1.0, 1.0)]
            z = CircleZero(r, centre % (2 * math.pi), "exchange", float(np.nanmean(slopes)))
        (found if z.exponent > 0.0 else rejected).append(z)
    return found, rejected


def _median_scale(params, r, n, which):
    theta = (np.arange(n) + 0.5) * (2.0 * math.pi / n)
    f, ratio = _circle_values(params, r, theta, which)
    return float(np.median(np.abs(f[ratio >= EXCHANGE_RATIO])))


def _angle_diff(a, b):
    """Signed difference of two line angles, in ``(-pi/2, pi/2]``."""
    d = (a - b) % math.pi
    return d - math.pi if d > math.pi / 2 else d


def scan_zero_directions(
    params: CrossCapParams,
    quantity: str,
    radii: Sequence[float],
    angular_grid: int = 2048,
    match_tol: float = 0.2,
    merge_tol: float = 1e-2,
) -> ZeroScan:
    """Limiting directions of the zero set of ``nu2(kappa1)`` or ``nu2(kappa2)``.

    ``quantity`` is ``"subparabolic"`` (derivative of the bounded curvature)
    or ``"ridge"`` (derivative of the unbounded one). Zero angles found on each
    circle are matched across radii and extrapolated linearly in ``r``.
    """
    which = {"subparabolic": 0, "ridge": 1}[quantity]
    radii = sorted((float(r) for r in radii), reverse=True)
    if len(radii) < 3:
        raise ValueError("need at least three radii")
    if radii[-1] <= MIN_RADIUS:
        raise ValueError("radii below the sampling floor")
    scan = ZeroScan(quantity, radii)
    per_radius = []
    for r in radii:
        found, rejected = _scan_circle(params, r, angular_grid, which)
        scan.zeros += found
        scan.rejected += rejected
        per_radius.append(found)
    if not per_radius[0]:
        scan.diagnostic = f"no admissible sign change of {quantity} function on the largest circle (r={radii[0]:g})"
        logger.warning(scan.diagnostic)
        return scan
    # projective tracks: start from the largest circle, follow nearest zeros inwards
    tracks = [[z] for z in per_radius[0]]
    for found in per_radius[1:]:
        for tr in tracks:
            if not found:
                continue
            best = min(found, key=lambda z: abs(_angle_diff(z.theta, tr[-1].theta)))
            if abs(_angle_diff(best.theta, tr[-1].theta)) <= match_tol:
                tr.append(best)
    complete = [tr for tr in tracks if len(tr) == len(radii)]
    scan.tracks = complete
    limits = []
    for tr in complete:
        rs = np.array([z.radius for z in tr])
        base = tr[0].theta
        th = base + np.array([_angle_diff(z.theta, base) for z in tr])
        slope, intercept = np.polyfit(rs, th, 1)
        limits.append(intercept)
    # theta and theta + pi describe the same line; merge tracks that agree to merge_tol
    groups: list[list[float]] = []
    for t in limits:
        for g in groups:
            if abs(_angle_diff(t, g[0])) <= merge_tol:
                g.append(g[0] + _angle_diff(t, g[0]))
                break
        else:
            groups.append([t])
    dirs = [Direction2(math.cos(m), math.sin(m)) for m in (float(np.mean(g)) for g in groups)]
    scan.directions = dirs
    if not dirs:
        scan.diagnostic = "zeros were found but no track persisted across all radii"
        logger.warning(scan.diagnostic)
    return scan


DEFAULT_RADII = (4e-3, 2e-3, 1e-3, 5e-4)


def subparabolic_fit(
    params: CrossCapParams, radii: Sequence[float] = DEFAULT_RADII, angular_grid: int = 2048
) -> list[Direction2]:
    """Fitted tangent directions of the sub-parabolic curves relative to ``nu2``."""
    return scan_zero_directions(params, "subparabolic", radii, angular_grid).directions


def ridge_scale_exponent(params: CrossCapParams, radii: Sequence[float], angular_grid: int = 2048) -> list[float]:
    """Log-log slopes of the typical size of ``nu2(kappa2)`` between successive radii."""
    radii = sorted(radii, reverse=True)
    sizes = [_median_scale(params, r, angular_grid, 1) for r in radii]
    return [
        float(math.log(sizes[i + 1] / sizes[i]) / math.log(radii[i + 1] / radii[i]))
        for i in range(len(radii) - 1)
    ]


def ridge_fit_scan(params: CrossCapParams, radii: Sequence[float] = DEFAULT_RADII, angular_grid: int = 2048) -> ZeroScan:
    slopes = ridge_scale_exponent(params, radii, angular_grid)
    if max(slopes) - min(slopes) > 0.5:
        raise OracleError(f"rescaling exponent of the ridge function is unstable across radii: {slopes}")
    # rescaling by r^-slope leaves the zero set unchanged; the scan works on signs
    scan = scan_zero_directions(params, "ridge", radii, angular_grid)
    scan.scale_exponents = slopes
    return scan


def ridge_fit(params: CrossCapParams, radii: Sequence[float] = DEFAULT_RADII, angular_grid: int = 2048) -> list[Direction2]:
    """Fitted tangent directions of the ridge curves relative to ``nu2``."""
    return ridge_fit_scan(params, radii, angular_grid).directions


def arbitrate_ridge_reading(
    params: CrossCapParams,
    radii: Sequence[float] = DEFAULT_RADII,
    angular_grid: int = 2048,
    tol: float = 1e-2,
) -> dict:
    """Decide which sign reading of the ridge equation the fitted directions satisfy.

    Compares the fitted direction that is not ``(0, 1)`` with ``(2, b)``
    (``b w1 - 2 w2 = 0``) and ``(2, -b)`` (``b w1 + 2 w2 = 0``).
    """
    fitted = ridge_fit(params, radii, angular_grid)
    vertical = [d for d in fitted if d.angle_to((0.0, 1.0)) <= tol]
    others = [d for d in fitted if d.angle_to((0.0, 1.0)) > tol]
    out = {
        "fitted": fitted,
        "count": len(fitted),
        "has_vertical": bool(vertical),
        "vertical_error": min((d.angle_to((0.0, 1.0)) for d in fitted), default=math.inf),
        "reading": None,
    }
    if len(others) != 1:
        return out
    d = others[0]
    err_printed = d.angle_to((2.0, params.b))
    err_proof = d.angle_to((2.0, -params.b))
    out.update(err_printed=err_printed, err_proof=err_proof)
    if err_printed <= tol and err_proof > tol:
        out["reading"] = "printed"
    elif err_proof <= tol and err_printed > tol:
        out["reading"] = "proof"
    elif err_proof <= tol and err_printed <= tol:
        out["reading"] = "both"
    return out


# ---------------------------------------------------------------------------
# separatrices of the principal foliations


def _principal_slopes(params, x, y):
    """Both roots ``s = dx/dy`` of ``(EM-FL) s^2 + (EN-GL) s + (FN-GM) = 0``, ascending."""
    E, F, G, L, M, N = forms_arrays(params, x, y)
    A, B, C = E * M - F * L, E * N - G * L, F * N - G * M
    disc = np.sqrt(np.maximum(B * B - 4.0 * A * C, 0.0))
    q = -0.5 * (B + np.copysign(disc, B))
    s1, s2 = q / A, C / q
    return np.minimum(s1, s2), np.maximum(s1, s2)


def _principal_slopes_dydx(params, x, y):
    """Roots ``t = dy/dx`` of ``(EM-FL) + (EN-GL) t + (FN-GM) t^2 = 0``, ordered by magnitude."""
    E, F, G, L, M, N = forms_arrays(params, x, y)
    A, B, C = E * M - F * L, E * N - G * L, F * N - G * M
    disc = np.sqrt(np.maximum(B * B - 4.0 * C * A, 0.0))
    q = -0.5 * (B + np.copysign(disc, B))
    t1, t2 = A / q, q / C
    swap = np.abs(t1) > np.abs(t2)
    return np.where(swap, t2, t1), np.where(swap, t1, t2)


ESCAPE = 50.0


class _BlowUpTracer:
    """Integrates principal lines in blow-up coordinates towards the origin.

    For ``form="x=lambda*y^2"`` the state is ``c = x / y^2`` as a function of
    ``tau = log y``; for ``"y=lambda*x^2"`` it is ``d = y / x^2`` against
    ``tau = log x``. Many seeds are carried at once; a seed with
    ``|c| >= ESCAPE`` has left every separatrix behind and is frozen, which
    keeps the frozen set monotone.
    """

    def __init__(self, params, form, branch, seed_radius, depth):
        self.params = params
        self.form = form
        self.branch = branch
        self.tau0 = math.log(seed_radius)
        self.tau1 = self.tau0 - depth

    def rate(self, tau, c):
        c = np.atleast_1d(np.asarray(c, dtype=float))
        s = math.exp(tau)
        out = np.zeros_like(c)
        live = np.abs(c) < ESCAPE
        if not live.any():
            return out
        cl = c[live]
        if self.form == "x=lambda*y^2":
            lo, hi = _principal_slopes(self.params, cl * s * s, np.full_like(cl, s))
            slope = hi if self.branch > 0 else lo
        else:
            slope, _ = _principal_slopes_dydx(self.params, np.full_like(cl, s), cl * s * s)
        out[live] = (slope - 2.0 * cl * s) / s
        return out

    def run(self, c0, dense=False, rtol=1e-9):
        return solve_ivp(
            self.rate,
            (self.tau0, self.tau1),
            np.atleast_1d(np.asarray(c0, dtype=float)),
            method="RK45",
            rtol=rtol,
            atol=1e-12,
            dense_output=dense,
            max_step=0.5,
        )

    def fates(self, seeds) -> np.ndarray:
        """+1 or -1 for the side each seed leaves towards as the origin is approached."""
        sol = self.run(seeds)
        c_end = sol.y[:, -1]
        escaped = np.abs(c_end) >= ESCAPE
        moving = -np.sign(self.rate(sol.t[-1], c_end))
        return np.where(escaped, np.sign(c_end), moving)


def _trace_one(params, form, branch, seed_radius, n_seeds, depth=9.0, rounds=9):
    tracer = _BlowUpTracer(params, form, branch, seed_radius, depth)
    span = 4.0
    for _ in range(8):
        seeds = np.linspace(-span, span, n_seeds)
        fates = tracer.fates(seeds)
        flips = np.nonzero(fates[:-1] != fates[1:])[0]
        if flips.size:
            break
        span *= 2.0
    else:
        return None
    lo, hi = seeds[flips[0]], seeds[flips[0] + 1]
    # each round subdivides the bracket around the fate switch
    for _ in range(rounds):
        seeds = np.linspace(lo, hi, n_seeds)
        fates = tracer.fates(seeds)
        flips = np.nonzero(fates[:-1] != fates[1:])[0]
        if not flips.size:
            break
        lo, hi = seeds[flips[0]], seeds[flips[0] + 1]
        if hi - lo <= 1e-13 * max(1.0, abs(lo)):
            break
    # the two bracketing seeds enclose the separatrix; trust the stretch where they agree
    sol = tracer.run([lo, hi], dense=True)
    taus = np.linspace(tracer.tau0, sol.t[-1], 400)
    c_lo, c_hi = sol.sol(taus)
    ok = np.abs(c_hi - c_lo) < 1e-8 * (1.0 + np.abs(c_lo))
    ok &= np.cumprod(ok).astype(bool)
    if ok.sum() < 10:
        return None
    s = np.exp(taus[ok])
    coef = np.polyfit(s / s[0], 0.5 * (c_lo + c_hi)[ok], 3)
    return float(coef[-1])


def trace_separatrices(
    params: CrossCapParams, seed_radius: float = 1e-2, n_seeds: int = 24, tangential: bool = True
) -> list[SeparatrixCoeff]:
    """Fitted separatrices through the cross-cap point.

    Lines of curvature are integrated inwards from seeds near the circle of
    radius ``seed_radius``; the inward flow is repelled from the separatrices,
    so adjacent seeds with opposite fates bracket one and bisection on the seed
    isolates it. The leading coefficient is the ``s -> 0`` limit of
    ``x / y^2`` (or ``y / x^2``) along the isolated trajectory.
    """
    if not 1e-4 <= seed_radius <= 1e-1:
        raise ValueError("seed_radius must lie in [1e-4, 1e-1]")
    if n_seeds < 4:
        raise ValueError("need at least four seeds")
    out = []
    for branch in (-1, 1):
        lam = _trace_one(params, "x=lambda*y^2", branch, seed_radius, n_seeds)
        if lam is not None:
            out.append(SeparatrixCoeff(lam))
    if len(out) < 2:
        raise OracleError(f"only {len(out)} separatrices of the form x = lambda y^2 were isolated")
    out.sort(key=lambda s: s.lam)
    if tangential:
        d = _trace_one(params, "y=lambda*x^2", 1, seed_radius, n_seeds)
        if d is not None:
            out.append(SeparatrixCoeff(d, "y=lambda*x^2"))
    return out


# ---------------------------------------------------------------------------
# double points


def _p(params, y):
    return params.p3 * y**3 + params.p4 * y**4


def _divided(f, u, v):
    return (f(u) - f(v)) / (u - v)


def _q(params, x, y):
    q3 = sum(c * x ** (3 - k) * y**k for k, c in enumerate(params.q3))
    q4 = sum(c * x ** (4 - k) * y**k for k, c in enumerate(params.q4))
    return q3 + q4


def double_point_pair(params: CrossCapParams, y: float) -> tuple[float, float]:
    """Solve ``phi(x, y) = phi(x, y2)`` with ``y2 != y`` near ``y2 = -y``; returns ``(x, y2)``."""

    def eqs(z):
        x, y2 = z
        e2 = x + _divided(lambda t: _p(params, t), y, y2)
        e3 = params.b * x + (y + y2) + _divided(lambda t: _q(params, x, t), y, y2)
        return [e2, e3]

    guess = [-params.p3 * y * y, -y]
    sol, info, ier, msg = fsolve(eqs, guess, full_output=True, xtol=1e-15)
    # ier may report that xtol could not be met; the residual is what counts
    if max(abs(v) for v in info["fvec"]) > 1e-13 * y * y:
        raise OracleError(f"double point solve failed at y={y}: {msg}")
    return float(sol[0]), float(sol[1])


def double_point_oracle(params: CrossCapParams, y_samples: Sequence[float] = (0.04, 0.02, 0.01, 0.005, 0.0025)) -> FitResult:
    """Leading coefficient of the double-point curve ``x = c y^2 + ...`` from solved pairs."""
    ys, ratios = [], []
    failures = 0
    for y in y_samples:
        if y == 0.0 or abs(y) > 0.1:
            raise ValueError("y samples must be nonzero with |y| <= 0.1")
        try:
            x, _ = double_point_pair(params, y)
        except OracleError as err:
            logger.info("%s", err)
            failures += 1
            continue
        ys.append(y)
        ratios.append(x / (y * y))
    if failures * 2 > len(y_samples) or len(ys) < 3:
        raise OracleError(f"double point solver failed for {failures} of {len(y_samples)} samples")
    ys, ratios = np.array(ys), np.array(ratios)
    deg = min(3, len(ys) - 2)
    hi = np.polyfit(ys, ratios, deg)
    lo = np.polyfit(ys, ratios, deg - 1)
    return FitResult(float(hi[-1]), float(abs(hi[-1] - lo[-1])) + 1e-15, len(ys), "polyfit")


def tangent_direction_oracle(params: CrossCapParams, c: float, t: float = 1e-4) -> np.ndarray:
    """Unit velocity of ``phi(c s^2, s)`` at ``s = t``, by central differences."""
    from .crosscap import parametrize

    phi = parametrize(params)
    h = 1e-3 * t
    p = lambda s: phi.evaluate(c * s * s, s)
    v = (p(t + h) - p(t - h)) / (2.0 * h)
    return v / np.linalg.norm(v)


def limiting_tangent_oracle(params: CrossCapParams, c: float, t0: float = 1e-2, m: int = 6) -> np.ndarray:
    """``t -> 0`` limit of the unit velocity of ``phi(c s^2, s)``, extrapolated per component."""
    ts = t0 * 0.5 ** np.arange(m)
    vs = np.array([tangent_direction_oracle(params, c, float(t)) for t in ts])
    v = np.array([extrapolate_to_zero(ts, vs[:, k]).value for k in range(3)])
    return v / np.linalg.norm(v)
