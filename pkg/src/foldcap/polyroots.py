"""Closed-form real roots of quadratics and cubics, and of binary forms of degree <= 3."""

from __future__ import annotations

import math
from typing import Sequence

MERGE_TOL = 1e-9


def _polish(coeffs: Sequence[float], t: float, steps: int = 3) -> float:
    """A few Newton steps on ``sum c_k t^(d-k)``; keeps ``t`` if a step does not help."""
    d = len(coeffs) - 1
    for _ in range(steps):
        f = 0.0
        df = 0.0
        for k, c in enumerate(coeffs):
            df = df * t + f
            f = f * t + c
        if df == 0.0:
            break
        t_new = t - f / df
        f_new = 0.0
        for c in coeffs:
            f_new = f_new * t_new + c
        if abs(f_new) >= abs(f):
            break
        t = t_new
    return t


def _merge(roots: list[tuple[float, int]], tol: float) -> list[tuple[float, int]]:
    roots = sorted(roots)
    out: list[list] = []
    for r, m in roots:
        if out and abs(r - out[-1][0]) <= tol * (1.0 + abs(r)):
            # multiplicity-weighted mean
            r0, m0 = out[-1]
            out[-1] = [(r0 * m0 + r * m) / (m0 + m), m0 + m]
        else:
            out.append([r, m])
    return [(float(r), int(m)) for r, m in out]


def real_roots_quadratic(a: float, b: float, c: float, tol: float = MERGE_TOL) -> list[tuple[float, int]]:
    """Real roots of ``a t^2 + b t + c`` as ``(root, multiplicity)`` pairs, ascending."""
    if a == 0.0:
        if b == 0.0:
            return []
        return [(-c / b, 1)]
    disc = b * b - 4.0 * a * c
    scale = max(b * b, abs(4.0 * a * c), 1e-300)
    if disc < -tol * scale:
        return []
    if abs(disc) <= 64 * 2.2e-16 * scale:
        return [(-b / (2.0 * a), 2)]
    if disc < 0.0:
        return [(-b / (2.0 * a), 2)]
    q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
    r1 = q / a
    r2 = c / q if q != 0.0 else -r1
    return _merge([(r1, 1), (r2, 1)], tol)


def _cbrt(v: float) -> float:
    return math.copysign(abs(v) ** (1.0 / 3.0), v)


def real_roots_cubic(a: float, b: float, c: float, d: float, tol: float = MERGE_TOL) -> list[tuple[float, int]]:
    """Real roots of ``a t^3 + b t^2 + c t + d`` with multiplicities, ascending.

    One real root comes from the trigonometric or Cardano formula and is
    polished by Newton; the remaining two come from the deflated quadratic.
    """
    if a == 0.0:
        return real_roots_quadratic(b, c, d, tol)
    B, C, D = b / a, c / a, d / a
    p = C - B * B / 3.0
    q = 2.0 * B**3 / 27.0 - B * C / 3.0 + D
    shift = -B / 3.0
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    if p == 0.0 and q == 0.0:
        return [(shift, 3)]
    if disc > 0.0:
        s = math.sqrt(disc)
        u = _cbrt(-q / 2.0 + s) if q <= 0 else -_cbrt(q / 2.0 + s)
        t0 = u - p / (3.0 * u) if u != 0.0 else 0.0
    else:
        # three real roots (possibly repeated); take the largest in magnitude
        m = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (p * m) if p != 0.0 else 0.0
        arg = max(-1.0, min(1.0, arg))
        theta = math.acos(arg) / 3.0
        cands = [m * math.cos(theta - 2.0 * math.pi * k / 3.0) for k in range(3)]
        t0 = max(cands, key=lambda v: abs(v + shift))
    r1 = _polish([1.0, B, C, D], t0 + shift)
    # deflate: t^3 + B t^2 + C t + D = (t - r1)(t^2 + e t + f)
    e = B + r1
    f = C + e * r1
    rest = real_roots_quadratic(1.0, e, f, tol)
    rest = [(_polish([1.0, B, C, D], r), m) for r, m in rest]
    return _merge([(r1, 1)] + rest, tol)


def binary_form_roots(coeffs: Sequence[float], tol: float = MERGE_TOL) -> list[tuple[float, float, int]]:
    """Real projective roots of ``sum_k c_k w1^(d-k) w2^k`` for degree ``d <= 3``.

    Returns ``(w1, w2, multiplicity)`` with ``(w1, w2)`` unit length and first
    nonzero coordinate positive. The identically-zero form raises ``ValueError``.
    """
    coeffs = [float(c) for c in coeffs]
    d = len(coeffs) - 1
    if not 1 <= d <= 3:
        raise ValueError("degree must be 1, 2 or 3")
    if all(c == 0.0 for c in coeffs):
        raise ValueError("identically zero form has every direction as a root")
    out = []
    # exact zero end coefficients are roots at w2 = 0 or w1 = 0; strip them so
    # the remaining core has nonzero leading and trailing terms
    lead = next(k for k, c in enumerate(coeffs) if c != 0.0)
    trail = next(k for k, c in enumerate(reversed(coeffs)) if c != 0.0)
    if lead:
        out.append((1.0, 0.0, lead))
    if trail:
        out.append((0.0, 1.0, trail))
    core = coeffs[lead : len(coeffs) - trail]
    if len(core) > 1:
        if abs(core[0]) >= abs(core[-1]):
            # w2 = 1, unknown t = w1
            out += [(t, 1.0, m) for t, m in _univariate(core, tol)]
        else:
            # w1 = 1, unknown t = w2
            out += [(1.0, t, m) for t, m in _univariate(core[::-1], tol)]
    return _dedupe_directions(out)


def _univariate(poly: list[float], tol: float) -> list[tuple[float, int]]:
    # both end coefficients are nonzero here
    if len(poly) == 2:
        return [(-poly[1] / poly[0], 1)]
    if len(poly) == 3:
        return real_roots_quadratic(*poly, tol=tol)
    return real_roots_cubic(*poly, tol=tol)


def canonical_direction(w1: float, w2: float) -> tuple[float, float]:
    n = math.hypot(w1, w2)
    if n == 0.0:
        raise ValueError("zero vector has no direction")
    w1, w2 = w1 / n, w2 / n
    if w1 < 0.0 or (w1 == 0.0 and w2 < 0.0):
        w1, w2 = -w1, -w2
    return w1 + 0.0, w2 + 0.0


def projective_angle(u: tuple[float, float], v: tuple[float, float]) -> float:
    """Angle in ``[0, pi/2]`` between two lines through the origin."""
    c = abs(u[0] * v[0] + u[1] * v[1]) / (math.hypot(*u) * math.hypot(*v))
    s = abs(u[0] * v[1] - u[1] * v[0]) / (math.hypot(*u) * math.hypot(*v))
    return math.atan2(s, c)


def _dedupe_directions(items, tol: float = MERGE_TOL):
    out: list[list] = []
    for w1, w2, m in items:
        u = canonical_direction(w1, w2)
        for entry in out:
            if projective_angle(u, entry[0]) <= tol:
                entry[1] += m
                break
        else:
            out.append([u, m])
    return [(u[0], u[1], m) for u, m in out]
