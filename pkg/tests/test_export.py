import csv
import io
import math
import xml.etree.ElementTree as ET

import pytest

from foldcap.classify import survey_sphere
from foldcap.crosscap import CrossCapParams
from foldcap.export import (
    CURVES_COLUMNS,
    SURVEY_COLUMNS,
    curves_csv,
    fmt,
    mesh_obj,
    survey_csv,
    survey_svg,
)

P = CrossCapParams(a=1.0, b=1.0, p3=0.3)


def test_fmt():
    assert fmt(-0.0) == "0"
    assert fmt(1 / 3) == "0.333333333333"
    assert fmt(True) == "true" and fmt(None) == "" and fmt(3) == "3"


def test_survey_csv_is_byte_stable():
    a = survey_csv(survey_sphere(P, 16, 8))
    b = survey_csv(survey_sphere(P, 16, 8))
    assert a == b
    rows = list(csv.reader(io.StringIO(a)))
    assert tuple(rows[0]) == SURVEY_COLUMNS and len(rows) == 1 + 16 * 8


def test_svg_is_well_formed():
    svg = survey_svg(survey_sphere(P, 16, 8))
    root = ET.fromstring(svg)
    ns = "{http://www.w3.org/2000/svg}"
    assert root.tag == f"{ns}svg"
    assert root.findall(f".//{ns}polyline")
    assert len(root.findall(f".//{ns}circle")) == 10


class TestCurves:
    def rows(self, params):
        return list(csv.DictReader(io.StringIO(curves_csv(params))))

    def test_columns_and_stability(self):
        text = curves_csv(P)
        assert text.splitlines()[0] == ",".join(CURVES_COLUMNS)
        assert text == curves_csv(P)

    def test_minimal(self):
        rows = self.rows(CrossCapParams())
        sub = [r for r in rows if r["quantity"] == "subparabolic"]
        assert len(sub) == 1 and (float(sub[0]["w1"]), float(sub[0]["w2"])) == (1.0, 0.0)
        lams = sorted(float(r["coefficient"]) for r in rows if r["quantity"] == "separatrix" and r["note"] == "x=lambda*y^2")
        assert lams == pytest.approx([-math.sqrt(2), math.sqrt(2)])

    def test_ridge_note_names_both_readings(self):
        ridge = [r for r in self.rows(P) if r["quantity"] == "ridge"]
        assert len(ridge) == 2
        assert any("reading=proof" in r["note"] and "printed reading gives" in r["note"] for r in ridge)

    def test_double_point(self):
        dp = [r for r in self.rows(P) if r["quantity"] == "double_point"]
        assert float(dp[0]["coefficient"]) == -0.3


class TestMesh:
    @pytest.mark.parametrize("n", [8, 11])
    def test_counts_and_indices(self, n):
        text = mesh_obj(P, 0.5, n)
        lines = text.splitlines()
        faces = [l for l in lines if l.startswith("f ")]
        verts = [l for l in lines if l.startswith("v ")]
        assert len(faces) == 2 * (n - 1) ** 2
        for l in faces + [l for l in lines if l.startswith("l ")]:
            idx = [int(t) for t in l.split()[1:]]
            assert all(1 <= i <= len(verts) for i in idx)
        objects = [l[2:] for l in lines if l.startswith("o ")]
        assert objects[0] == "surface" and "double_point" in objects
        assert sum(o.startswith("separatrix") for o in objects) == 3

    @pytest.mark.parametrize("a", [1.0, -1.0])
    def test_elliptic_and_hyperbolic(self, a):
        text = mesh_obj(CrossCapParams(a=a), 1.0, 8)
        assert text.startswith(f"# cross-cap mesh a={fmt(a)}")

    def test_validation(self):
        with pytest.raises(ValueError):
            mesh_obj(P, 1.5, 16)
        with pytest.raises(ValueError):
            mesh_obj(P, 0.5, 7)
