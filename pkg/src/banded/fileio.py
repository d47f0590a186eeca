"""File formats: instance documents, OFF/OBJ meshes, band sidecars, sections.

All coordinates are written exactly: plain decimals when the denominator
allows it, `p/q` fraction strings otherwise, so that save/load round-trips
bit-identically.  Standard OFF/OBJ viewers that cannot digest fractions can
be served with `floats=True` (lossy, for inspection only).
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path

from .errors import InputError, ParseError
from .model import (
    BandedSurface,
    CrossSection,
    LabeledPolygon,
    OriginalLabel,
    Point2,
    SliceInstance,
    SteinerLabel,
)

_DECIMAL_RE = re.compile(r"^-?(\d+)(\.\d+)?$")
_FRACTION_RE = re.compile(r"^(-?\d+)/(\d+)$")


def parse_rational(text) -> Fraction:
    """Exact rational from a decimal string like '-12.625' or 'p/q'."""
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(f"expected a number string, got {text!r}")
    s = text.strip()
    m = _DECIMAL_RE.match(s)
    if m:
        return Fraction(s)
    m = _FRACTION_RE.match(s)
    if m:
        den = int(m.group(2))
        if den == 0:
            raise ParseError(f"zero denominator in {text!r}")
        return Fraction(int(m.group(1)), den)
    raise ParseError(f"not a finite decimal or fraction: {text!r}")


def format_rational(value) -> str:
    """Exact text for a rational: decimal when finite, else 'p/q'."""
    f = Fraction(value)
    if f.denominator == 1:
        return str(f.numerator)
    den = f.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{f.numerator}/{f.denominator}"
    digits = max(twos, fives)
    scaled = f.numerator * 10**digits // f.denominator
    sign = "-" if scaled < 0 else ""
    body = str(abs(scaled)).rjust(digits + 1, "0")
    return f"{sign}{body[:-digits]}.{body[-digits:]}" if digits else f"{sign}{body}"


def _num(value, floats: bool) -> str:
    return repr(float(value)) if floats else format_rational(value)


# ---------------------------------------------------------------------------
# instance documents
# ---------------------------------------------------------------------------


def _polygon_from_doc(rows, z_level, field: str) -> LabeledPolygon:
    pts = []
    for k, row in enumerate(rows):
        if not isinstance(row, (list, tuple)) or len(row) != 2:
            raise ParseError(f"{field}[{k}] must be a pair [x, y]")
        pts.append(Point2(parse_rational(row[0]), parse_rational(row[1])))
    return LabeledPolygon(tuple(pts), z_level)


def instance_from_document(doc: dict) -> SliceInstance:
    for field in ("P", "Pprime"):
        if field not in doc:
            raise ParseError(f"missing field {field!r}")
    src = _polygon_from_doc(doc["P"], 0, "P")
    tgt = _polygon_from_doc(doc["Pprime"], 1, "Pprime")
    if "n" in doc and doc["n"] != src.n:
        raise ParseError(f"declared n={doc['n']} but P has {src.n} vertices")
    if src.n != tgt.n:
        raise ParseError(f"P has {src.n} vertices but Pprime has {tgt.n}")
    return SliceInstance(src, tgt)


def instance_to_document(inst: SliceInstance, name=None, metadata=None) -> dict:
    doc = {
        "n": inst.n,
        "P": [[format_rational(p.x), format_rational(p.y)] for p in inst.source.vertices],
        "Pprime": [[format_rational(p.x), format_rational(p.y)] for p in inst.target.vertices],
    }
    if name:
        doc["name"] = name
    if metadata:
        doc["metadata"] = metadata
    return doc


def load_instance(path) -> SliceInstance:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc.msg}", line=exc.lineno, column=exc.colno) from exc
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: expected a JSON object")
    return instance_from_document(doc)


def save_instance(inst: SliceInstance, path, name=None, metadata=None) -> None:
    doc = instance_to_document(inst, name, metadata)
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


# ---------------------------------------------------------------------------
# meshes
# ---------------------------------------------------------------------------


def _boundary_cycle(surface: BandedSurface, which: int) -> list[int]:
    idx = [path[0 if which == 0 else -1] for path in surface.paths]
    return idx


def _ear_clip_indices(points: list[Point2]) -> list[tuple[int, int, int]]:
    """Triangulate a simple CCW polygon given by points; returns local index
    triples.  Plain quadratic ear clipping with exact tests."""
    from .geometry import orient2d, segments_intersect_2d

    idx = list(range(len(points)))
    tris = []
    guard = 0
    while len(idx) > 3:
        guard += 1
        if guard > 4 * len(points) ** 2:
            raise InputError("cap triangulation failed; polygon may be degenerate")
        n = len(idx)
        clipped = False
        for k in range(n):
            a, v, c = idx[(k - 1) % n], idx[k], idx[(k + 1) % n]
            pa, pv, pc = points[a], points[v], points[c]
            if orient2d(pa, pv, pc) <= 0:
                continue
            ok = True
            for other in idx:
                if other in (a, v, c):
                    continue
                po = points[other]
                if (
                    orient2d(pa, pv, po) >= 0
                    and orient2d(pv, pc, po) >= 0
                    and orient2d(pc, pa, po) >= 0
                ):
                    ok = False
                    break
            if ok:
                for m in range(n):
                    e0, e1 = idx[m], idx[(m + 1) % n]
                    if {e0, e1} & {a, v, c}:
                        continue
                    if segments_intersect_2d(points[e0], points[e1], pa, pc, mode="any"):
                        ok = False
                        break
            if ok:
                tris.append((a, v, c))
                idx.pop(k)
                clipped = True
                break
        if not clipped:
            raise InputError("cap triangulation found no ear; polygon may be non-simple")
    tris.append((idx[0], idx[1], idx[2]))
    return tris


def _cap_faces(surface: BandedSurface) -> list[tuple[int, int, int]]:
    faces = []
    for which in (0, 1):
        ring = _boundary_cycle(surface, which)
        pts = [surface.point(i).xy for i in ring]
        for a, v, c in _ear_clip_indices(pts):
            tri = (ring[a], ring[v], ring[c])
            if which == 0:
                tri = (tri[2], tri[1], tri[0])  # bottom cap faces downward
            faces.append(tri)
    return faces


def export_mesh(
    surface: BandedSurface,
    fmt: str,
    path,
    *,
    include_caps: bool = False,
    floats: bool = False,
    sidecar: bool = True,
) -> None:
    """Write the mesh as OFF or OBJ, plus a `.bands.json` sidecar holding the
    band/path/label structure needed to re-verify after re-import."""
    fmt = fmt.lower()
    if fmt not in ("off", "obj"):
        raise InputError(f"unknown mesh format {fmt!r}")
    faces = list(surface.faces)
    if include_caps:
        faces += _cap_faces(surface)
    lines = []
    if fmt == "off":
        edges = set()
        for face in faces:
            for k in range(3):
                e = (face[k], face[(k + 1) % 3])
                edges.add((min(e), max(e)))
        lines.append("OFF")
        lines.append(f"{len(surface.vertices)} {len(faces)} {len(edges)}")
        for p, _ in surface.vertices:
            lines.append(f"{_num(p.x, floats)} {_num(p.y, floats)} {_num(p.z, floats)}")
        for face in faces:
            lines.append(f"3 {face[0]} {face[1]} {face[2]}")
    else:
        for p, _ in surface.vertices:
            lines.append(f"v {_num(p.x, floats)} {_num(p.y, floats)} {_num(p.z, floats)}")
        for face in faces:
            lines.append(f"f {face[0] + 1} {face[1] + 1} {face[2] + 1}")
    Path(path).write_text("\n".join(lines) + "\n")
    if sidecar:
        save_bands(surface, str(path) + ".bands.json")


def _label_to_doc(label):
    if isinstance(label, OriginalLabel):
        return {"kind": "original", "slice": label.slice, "index": label.index}
    if isinstance(label, SteinerLabel):
        return {"kind": "steiner", "id": label.ident}
    raise InputError(f"unknown vertex label {label!r}")


def _label_from_doc(doc):
    if doc.get("kind") == "original":
        return OriginalLabel(doc["slice"], doc["index"])
    if doc.get("kind") == "steiner":
        return SteinerLabel(doc["id"])
    raise ParseError(f"unknown label document {doc!r}")


def save_bands(surface: BandedSurface, path) -> None:
    doc = {
        "n": surface.n,
        "labels": [_label_to_doc(label) for _, label in surface.vertices],
        "bands": [sorted(b) for b in surface.bands],
        "paths": [list(p) for p in surface.paths],
    }
    Path(path).write_text(json.dumps(doc) + "\n")


def read_off(path) -> tuple[list, list]:
    """Vertices (Point3 triples as rationals) and faces from an OFF file."""
    from .geometry import Point3

    try:
        raw = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    tokens: list[tuple[str, int]] = []
    for ln, line in enumerate(raw.splitlines(), start=1):
        body = line.split("#", 1)[0]
        for tok in body.split():
            tokens.append((tok, ln))
    if not tokens or tokens[0][0] != "OFF":
        raise ParseError(f"{path}: missing OFF header", line=1)
    pos = 1

    def take(kind: str) -> tuple[str, int]:
        nonlocal pos
        if pos >= len(tokens):
            raise ParseError(f"{path}: unexpected end of file while reading {kind}")
        tok = tokens[pos]
        pos += 1
        return tok

    def take_int(kind: str) -> int:
        tok, ln = take(kind)
        try:
            return int(tok)
        except ValueError:
            raise ParseError(f"{path}: expected integer {kind}, got {tok!r}", line=ln)

    nv, nf, _ne = take_int("vertex count"), take_int("face count"), take_int("edge count")
    vertices = []
    for _ in range(nv):
        coords = []
        for axis in "xyz":
            tok, ln = take(f"vertex {axis}")
            try:
                coords.append(parse_rational(tok))
            except ParseError as exc:
                raise ParseError(f"{path}: {exc}", line=ln) from exc
        vertices.append(Point3(*coords))
    faces = []
    for _ in range(nf):
        arity = take_int("face arity")
        if arity != 3:
            raise ParseError(f"{path}: only triangle faces supported, got {arity}-gon")
        faces.append(tuple(take_int("face index") for _ in range(3)))
    return vertices, faces


def load_surface(mesh_path, bands_path) -> BandedSurface:
    """Rebuild a full banded surface from an OFF file and its band sidecar."""
    vertices, faces = read_off(mesh_path)
    try:
        doc = json.loads(Path(bands_path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {bands_path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{bands_path}: {exc.msg}", line=exc.lineno, column=exc.colno) from exc
    labels = [_label_from_doc(d) for d in doc["labels"]]
    if len(labels) != len(vertices):
        raise ParseError(
            f"{bands_path}: {len(labels)} labels for {len(vertices)} mesh vertices"
        )
    n_band_faces = sum(len(b) for b in doc["bands"])
    if n_band_faces != len(faces):
        raise ParseError(f"{bands_path}: band structure covers {n_band_faces} of {len(faces)} faces")
    return BandedSurface(
        tuple(zip(vertices, labels)),
        tuple(tuple(f) for f in faces),
        tuple(frozenset(b) for b in doc["bands"]),
        tuple(tuple(p) for p in doc["paths"]),
    )


def mesh_only_surface(mesh_path) -> BandedSurface:
    """A bands-free wrapper around a raw OFF mesh, enough for sectioning."""
    vertices, faces = read_off(mesh_path)
    labels = [SteinerLabel(i) for i in range(len(vertices))]
    return BandedSurface(tuple(zip(vertices, labels)), tuple(tuple(f) for f in faces), (), ())


def export_section(section: CrossSection, path=None) -> str:
    doc = {
        "t": format_rational(section.t),
        "closed": True,
        "points": [
            [format_rational(p.x), format_rational(p.y)]
            for p in section.polygon.vertices
        ],
    }
    text = json.dumps(doc, indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
