import json
from fractions import Fraction

import pytest

from banded.errors import InputError, ParseError
from banded.figures import fig1_twisted_prism
from banded.fileio import (
    export_mesh,
    export_section,
    format_rational,
    instance_to_document,
    load_instance,
    load_surface,
    mesh_only_surface,
    parse_rational,
    read_off,
    save_instance,
)
from banded.model import (
    ChordAssignment,
    assignment_to_surface,
    cross_section,
    verify_banded_surface,
)


class TestRationals:
    @pytest.mark.parametrize(
        "text,value",
        [
            ("0", 0),
            ("-3", -3),
            ("1.25", Fraction(5, 4)),
            ("-0.08", Fraction(-2, 25)),
            ("3/7", Fraction(3, 7)),
            ("-12/5", Fraction(-12, 5)),
        ],
    )
    def test_parse(self, text, value):
        assert parse_rational(text) == value

    @pytest.mark.parametrize("bad", ["", "1e3", "nan", "inf", "1/0", "1.2.3", "x"])
    def test_parse_rejects(self, bad):
        with pytest.raises(ParseError):
            parse_rational(bad)

    def test_format_prefers_decimal(self):
        assert format_rational(Fraction(5, 4)) == "1.25"
        assert format_rational(Fraction(-2, 25)) == "-0.08"
        assert format_rational(7) == "7"
        assert format_rational(Fraction(1, 3)) == "1/3"

    def test_round_trip_random(self):
        import random

        rng = random.Random(4)
        for _ in range(300):
            f = Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 10**4))
            assert parse_rational(format_rational(f)) == f


class TestInstanceFiles:
    def test_save_load_round_trip(self, tmp_path):
        inst = fig1_twisted_prism().instance
        path = tmp_path / "inst.json"
        save_instance(inst, path, name="prism")
        loaded = load_instance(path)
        assert loaded.source.vertices == inst.source.vertices
        assert loaded.target.vertices == inst.target.vertices

    def test_missing_field(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text(json.dumps({"n": 3, "P": [["0", "0"], ["1", "0"], ["0", "1"]]}))
        with pytest.raises(ParseError, match="Pprime"):
            load_instance(path)

    def test_json_error_carries_location(self, tmp_path):
        path = tmp_path / "syntax.json"
        path.write_text('{"n": 3,\n  "P": [[,]]}')
        with pytest.raises(ParseError) as info:
            load_instance(path)
        assert info.value.line == 2

    def test_size_mismatch(self, tmp_path):
        doc = instance_to_document(fig1_twisted_prism().instance)
        doc["n"] = 5
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(ParseError, match="n=5"):
            load_instance(path)

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(InputError):
            load_instance(tmp_path / "missing.json")


def schonhardt_surface():
    inst = fig1_twisted_prism().instance
    return assignment_to_surface(inst, ChordAssignment.from_string("RRR"))


class TestMeshFiles:
    def test_off_export_counts(self, tmp_path):
        s = schonhardt_surface()
        path = tmp_path / "mesh.off"
        export_mesh(s, "off", path)
        header = path.read_text().splitlines()
        assert header[0] == "OFF"
        nv, nf, ne = map(int, header[1].split())
        assert (nv, nf) == (6, 6)
        assert ne == 12

    def test_off_caps_flag(self, tmp_path):
        s = schonhardt_surface()
        path = tmp_path / "capped.off"
        export_mesh(s, "off", path, include_caps=True)
        nv, nf, _ = map(int, path.read_text().splitlines()[1].split())
        assert (nv, nf) == (6, 8)

    def test_off_round_trip_preserves_verdict(self, tmp_path):
        s = schonhardt_surface()
        path = tmp_path / "mesh.off"
        export_mesh(s, "off", path)
        back = load_surface(path, str(path) + ".bands.json")
        assert back.vertices == s.vertices
        assert back.faces == s.faces
        before = verify_banded_surface(s, force_sections=True)
        after = verify_banded_surface(back, force_sections=True)
        assert before.passed and after.passed

    def test_obj_export_one_based(self, tmp_path):
        s = schonhardt_surface()
        path = tmp_path / "mesh.obj"
        export_mesh(s, "obj", path)
        lines = path.read_text().splitlines()
        faces = [l for l in lines if l.startswith("f ")]
        assert len(faces) == 6
        indices = [int(tok) for l in faces for tok in l.split()[1:]]
        assert min(indices) == 1

    def test_floats_mode(self, tmp_path):
        s = schonhardt_surface()
        path = tmp_path / "approx.off"
        export_mesh(s, "off", path, floats=True, sidecar=False)
        assert "/" not in path.read_text()

    def test_read_off_errors(self, tmp_path):
        path = tmp_path / "bad.off"
        path.write_text("OFZ\n0 0 0\n")
        with pytest.raises(ParseError):
            read_off(path)

    def test_mesh_only_surface_sections(self, tmp_path):
        s = schonhardt_surface()
        path = tmp_path / "mesh.off"
        export_mesh(s, "off", path)
        raw = mesh_only_surface(path)
        section = cross_section(raw, Fraction(1, 3))
        assert len(section.polygon.vertices) == 6

    def test_export_section(self, tmp_path):
        s = schonhardt_surface()
        section = cross_section(s, Fraction(1, 3))
        out = tmp_path / "section.json"
        text = export_section(section, out)
        doc = json.loads(out.read_text())
        assert doc["t"] == "1/3"
        assert len(doc["points"]) == 6
        assert doc == json.loads(text)

    def test_layered_surface_round_trip_with_fraction_heights(self, tmp_path):
        # coordinates in thirds have no finite decimal form, so the layered
        # surface of this instance must exercise the p/q writer and round-trip
        from banded.geometry import Point2
        from banded.model import LabeledPolygon
        from banded.morph import rotate_copy_instance
        from banded.steiner import build_layered_surface

        tri = LabeledPolygon(
            (
                Point2(Fraction(4, 3), 0),
                Point2(Fraction(-2, 3), 1),
                Point2(Fraction(-2, 3), -1),
            ),
            0,
        )
        inst = rotate_copy_instance(tri, Point2(0, 0), (-1, 0))
        s = build_layered_surface(inst)
        assert s.steiner_count() > 0
        path = tmp_path / "layered.off"
        export_mesh(s, "off", path)
        assert "/" in path.read_text()  # fractional coordinates present
        back = load_surface(path, str(path) + ".bands.json")
        assert back.vertices == s.vertices
        assert back.faces == s.faces
        assert verify_banded_surface(back, force_sections=True).passed
