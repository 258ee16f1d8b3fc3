"""Plain-text exports: CSV tables, an SVG stratification map and OBJ meshes."""

from __future__ import annotations

import csv
import io
import math
from typing import Iterable, Sequence

import numpy as np

from .classify import Kind, StratificationReport, eta_angles
from .crosscap import CrossCapParams, double_point_leading, parametrize
from .geometry import (
    RIDGE_READING,
    limiting_normal,
    limiting_tangent,
    ridge_directions,
    separatrix_lambdas,
    subparabolic_directions,
)

SURVEY_COLUMNS = ("theta", "phi", "alpha", "beta", "gamma", "kind", "residual_min")
VERIFY_COLUMNS = ("quantity", "closed_form", "oracle_value", "abs_error", "tolerance", "pass")
CURVES_COLUMNS = ("quantity", "index", "w1", "w2", "coefficient", "image_x", "image_y", "image_z", "note")


def fmt(v) -> str:
    """Stable text form of a number; other values pass through ``str``."""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if math.isnan(v):
            return "nan"
        return f"{v + 0.0:.12g}"
    return "" if v is None else str(v)


def write_csv(rows: Iterable[Sequence], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# survey


def survey_rows(report: StratificationReport):
    for i in range(report.n_phi):
        for j in range(report.n_theta):
            al, be, ga = report.eta[i, j]
            yield (
                report.theta[j], report.phi[i], al, be, ga, report.kinds[i, j], report.residual_min[i, j],
            )


def survey_csv(report: StratificationReport) -> str:
    return write_csv(survey_rows(report), SURVEY_COLUMNS)


KIND_COLORS = {
    Kind.STABLE_CROSSCAP: "#f4f4f4",
    Kind.B2: "#cfe3f5",
    Kind.B3: "#1f5fa8",
    Kind.B4_CANDIDATE: "#103a6b",
    Kind.C3: "#2e8b57",
    Kind.C4: "#0b4d2a",
    Kind.F10: "#b22222",
    Kind.P3: "#e69500",
    Kind.P4_HALF: "#8b4513",
    Kind.P4_ONE: "#a0522d",
    Kind.P4_THREEHALVES: "#cd853f",
    Kind.R4: "#6a0dad",
    Kind.T4: "#c71585",
    Kind.CORANK2: "#000000",
    Kind.UNCLASSIFIED: "#ff00ff",
}
CURVE_COLORS = {"B3": KIND_COLORS[Kind.B3], "P": KIND_COLORS[Kind.P3], "C": KIND_COLORS[Kind.C3]}


def _color(kind) -> str:
    return KIND_COLORS[Kind(kind)]


def _curve_segments(name: str, pts: np.ndarray, max_gap: float):
    """Order the bisected points of a curve stratum into polylines in (theta, phi)."""
    if len(pts) == 0:
        return []
    ang = np.array([eta_angles(tuple(p)) for p in pts])
    if name == "B3":
        order = np.lexsort((ang[:, 1], ang[:, 0]))
    elif name == "C":
        order = np.lexsort((ang[:, 1], np.sign(ang[:, 0])))
    else:
        order = np.lexsort((ang[:, 0], ang[:, 1]))
    ang = ang[order]
    segs, cur = [], [ang[0]]
    for p in ang[1:]:
        if np.hypot(*(p - cur[-1])) > max_gap:
            segs.append(np.array(cur))
            cur = []
        cur.append(p)
    segs.append(np.array(cur))
    return [s for s in segs if len(s) > 1]


def survey_svg(report: StratificationReport, width: int = 1024, height: int = 512) -> str:
    """Equirectangular map of the canonical hemisphere, theta across and phi up."""
    h = math.pi / 2

    def xy(theta, phi):
        return (theta + h) / math.pi * width, (h - phi) / math.pi * height

    cw, ch = width / report.n_theta, height / report.n_phi
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<g id="cells" shape-rendering="crispEdges">',
    ]
    # one rectangle per run of equal kinds along a row keeps the file small
    for i in range(report.n_phi):
        row = report.kinds[i]
        y0 = (report.n_phi - 1 - i) * ch
        j = 0
        while j < report.n_theta:
            k = j
            while k + 1 < report.n_theta and row[k + 1] == row[j]:
                k += 1
            out.append(
                f'<rect x="{j * cw:.3f}" y="{y0:.3f}" width="{(k - j + 1) * cw:.3f}" '
                f'height="{ch:.3f}" fill="{_color(row[j])}"><title>{row[j]}</title></rect>'
            )
            j = k + 1
    out.append("</g>")
    out.append('<g id="curves" fill="none" stroke-width="2">')
    gap = 4.0 * math.pi / min(report.n_theta, report.n_phi)
    for name, pts in report.curves.items():
        for seg in _curve_segments(name, pts, gap):
            coords = " ".join("{:.3f},{:.3f}".format(*xy(t, p)) for t, p in seg)
            out.append(f'<polyline class="{name}" stroke="{CURVE_COLORS.get(name, "#333")}" points="{coords}"/>')
    out.append("</g>")
    out.append('<g id="points" stroke="#ffffff" stroke-width="1">')
    for p in report.points:
        x, y = xy(*eta_angles(p.eta))
        tip = p.kind.value + ("" if not p.collisions else " + " + ", ".join(k.value for k in p.collisions))
        out.append(
            f'<circle cx="{x:.3f}" cy="{y:.3f}" r="5" fill="{_color(p.kind)}"><title>{tip}</title></circle>'
        )
    out.append("</g>")
    legend_y = 14
    out.append('<g id="legend" font-family="sans-serif" font-size="11">')
    present = sorted({*(str(k) for k in np.unique(report.kinds)), *(p.kind.value for p in report.points)})
    for name in present:
        out.append(f'<rect x="6" y="{legend_y - 9}" width="10" height="10" fill="{_color(name)}" stroke="#333"/>')
        out.append(f'<text x="20" y="{legend_y}">{name}</text>')
        legend_y += 14
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# directions and coefficients


def curves_rows(params: CrossCapParams):
    b = params.b
    for i, d in enumerate(subparabolic_directions(params)):
        n = limiting_normal(b, d.w1, d.w2)
        yield ("subparabolic", i, d.w1, d.w2, None, *(n / np.linalg.norm(n)), f"multiplicity={d.multiplicity}")
    other = "printed" if RIDGE_READING == "proof" else "proof"
    for i, d in enumerate(ridge_directions(params)):
        n = limiting_normal(b, d.w1, d.w2)
        alt = ridge_directions(params, other)
        note = f"reading={RIDGE_READING}"
        if all(d.angle_to(e) > 1e-12 for e in alt):
            note += f"; {other} reading gives " + " ".join(f"({e.w1:.6g},{e.w2:.6g})" for e in alt)
        yield ("ridge", i, d.w1, d.w2, None, *(n / np.linalg.norm(n)), note)
    for i, s in enumerate(separatrix_lambdas(params)):
        if s.form == "x=lambda*y^2":
            t = limiting_tangent(s.lam)
            yield ("separatrix", i, None, None, s.lam, *(t / np.linalg.norm(t)), s.form)
        else:
            yield ("separatrix", i, None, None, s.lam, 1.0, 0.0, 0.0, s.form)
    c = double_point_leading(params)
    t = limiting_tangent(c)
    yield ("double_point", 0, None, None, c, *(t / np.linalg.norm(t)), "x=c*y^2")


def curves_csv(params: CrossCapParams) -> str:
    return write_csv(curves_rows(params), CURVES_COLUMNS)


# ---------------------------------------------------------------------------
# mesh


def double_point_source_curve(params: CrossCapParams, extent: float, n: int = 64) -> np.ndarray:
    """Source points ``(x, y)`` of one branch of the double-point curve, ``0 < y <= extent``.

    Continues the two-point solve outwards from small ``y`` and stops where it
    fails or leaves the square.
    """
    from .numlab import OracleError, double_point_pair

    pts = []
    for y in np.linspace(extent / n, extent, n):
        try:
            x, _ = double_point_pair(params, float(y))
        except OracleError:
            break
        if abs(x) > extent:
            break
        pts.append((x, y))
    return np.array(pts).reshape(-1, 2)


def mesh_obj(params: CrossCapParams, extent: float = 1.0, resolution: int = 32) -> str:
    """Triangulated image of ``phi`` over ``[-extent, extent]^2`` plus curve polylines."""
    if not 0.0 < extent <= 1.0:
        raise ValueError("range must lie in (0, 1]")
    if resolution < 8:
        raise ValueError("resolution must be at least 8")
    phi = parametrize(params)
    n = resolution
    u = np.linspace(-extent, extent, n)
    X, Y = np.meshgrid(u, u, indexing="ij")
    V = phi.evaluate(X, Y).reshape(-1, 3)
    lines = [f"# cross-cap mesh a={fmt(params.a)} b={fmt(params.b)} p3={fmt(params.p3)}", "o surface"]
    lines += ["v {} {} {}".format(*(fmt(c) for c in v)) for v in V]
    for i in range(n - 1):
        for j in range(n - 1):
            v00 = i * n + j + 1
            v01, v10, v11 = v00 + 1, v00 + n, v00 + n + 1
            lines.append(f"f {v00} {v10} {v11}")
            lines.append(f"f {v00} {v11} {v01}")
    count = len(V)
    polylines = []
    dp = double_point_source_curve(params, extent)
    if len(dp) > 1:
        polylines.append(("double_point", dp))
    s = np.linspace(-extent, extent, 2 * n)
    for k, sep in enumerate(separatrix_lambdas(params)):
        if sep.form == "x=lambda*y^2":
            src = np.stack([sep.lam * s * s, s], axis=-1)
        else:
            src = np.stack([s, sep.lam * s * s], axis=-1)
        src = src[np.all(np.abs(src) <= extent, axis=1)]
        if len(src) > 1:
            polylines.append((f"separatrix_{k}", src))
    for name, src in polylines:
        pts = phi.evaluate(src[:, 0], src[:, 1])
        lines.append(f"o {name}")
        lines += ["v {} {} {}".format(*(fmt(c) for c in p)) for p in pts]
        lines.append("l " + " ".join(str(count + i + 1) for i in range(len(pts))))
        count += len(pts)
    return "\n".join(lines) + "\n"
