"""Seeded random polygons and instances for tests and the acceptance suite.

Generators may consult floating point to propose shapes, but every emitted
coordinate is rational and every claimed property (simple, counterclockwise,
convex) is re-checked exactly before the polygon is returned; a failed check
just retries with fresh randomness from the same stream, so output is fully
determined by the seed.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

from .geometry import Point2, polygon_is_ccw, polygon_is_convex, polygon_is_simple
from .model import LabeledPolygon, SliceInstance
from .morph import rotate_copy_instance


def _dir_half(v: tuple[int, int]) -> int:
    x, y = v
    return 0 if (y > 0 or (y == 0 and x > 0)) else 1


def _dir_cmp(u, v) -> int:
    hu, hv = _dir_half(u), _dir_half(v)
    if hu != hv:
        return -1 if hu < hv else 1
    cross = u[0] * v[1] - u[1] * v[0]
    return 0 if cross == 0 else (-1 if cross > 0 else 1)


def random_convex_polygon(rng: random.Random, n: int, spread: int = 20) -> LabeledPolygon:
    """Convex CCW n-gon with integer coordinates (edge-vector construction)."""
    import functools

    while True:
        vecs = []
        for _ in range(n - 1):
            while True:
                v = (rng.randint(-spread, spread), rng.randint(-spread, spread))
                if v != (0, 0):
                    vecs.append(v)
                    break
        closing = (-sum(v[0] for v in vecs), -sum(v[1] for v in vecs))
        if closing == (0, 0):
            continue
        vecs.append(closing)
        dirs = {}
        for v in vecs:
            dirs.setdefault(_canon_dir(v), []).append(v)
        if len(dirs) != n:
            continue
        vecs.sort(key=functools.cmp_to_key(_dir_cmp))
        pts = []
        x = y = 0
        for v in vecs:
            pts.append(Point2(x, y))
            x += v[0]
            y += v[1]
        poly = tuple(pts)
        if polygon_is_simple(poly) and polygon_is_ccw(poly) and polygon_is_convex(poly):
            return LabeledPolygon(poly, 0)


def _canon_dir(v) -> tuple[int, int]:
    g = math.gcd(abs(v[0]), abs(v[1]))
    return (v[0] // g, v[1] // g)


def random_star_polygon(rng: random.Random, n: int, spread: int = 12) -> LabeledPolygon:
    """Simple CCW n-gon star-shaped around the origin: distinct ray directions
    in angular order with random integer radii."""
    import functools

    while True:
        dirs = set()
        while len(dirs) < n:
            v = (rng.randint(-spread, spread), rng.randint(-spread, spread))
            if v != (0, 0):
                dirs.add(_canon_dir(v))
        ordered = sorted(dirs, key=functools.cmp_to_key(_dir_cmp))
        pts = []
        for dx, dy in ordered:
            r = rng.randint(1, 6)
            pts.append(Point2(r * dx, r * dy))
        poly = tuple(pts)
        if polygon_is_simple(poly) and polygon_is_ccw(poly):
            return LabeledPolygon(poly, 0)


def random_spiral_polygon(rng: random.Random, n: int) -> LabeledPolygon:
    """Simple CCW n-gon shaped like a spiral band (outbound arm, return arm).

    The sweep grows with n: few vertices cannot trace many turns and stay
    simple, so small polygons get a coarse arc while larger ones wind round.
    """
    max_turns = min(1.6, 0.25 + n * 0.075)
    while True:
        k = max(3, n // 2)
        turns = rng.uniform(0.35, max_turns)
        a = rng.uniform(1.0, 2.0)
        b = rng.uniform(1.5, 3.0)
        gap = rng.uniform(0.35, 0.55)
        out_pts = []
        for i in range(k):
            theta = turns * 2 * math.pi * i / (k - 1)
            r = a + b * theta
            out_pts.append((r * math.cos(theta), r * math.sin(theta)))
        back_pts = []
        for i in range(n - k):
            frac = 1 - (i + 1) / (n - k + 1)
            theta = turns * 2 * math.pi * frac
            r = (a + b * theta) * (1 - gap)
            back_pts.append((r * math.cos(theta), r * math.sin(theta)))
        raw = out_pts + back_pts
        pts = tuple(
            Point2(
                Fraction(x).limit_denominator(16),
                Fraction(y).limit_denominator(16),
            )
            for x, y in raw
        )
        if len({(p.x, p.y) for p in pts}) != n:
            continue
        if polygon_is_simple(pts):
            poly = pts if polygon_is_ccw(pts) else tuple(reversed(pts))
            return LabeledPolygon(poly, 0)


def random_rotation(rng: random.Random, *, allow_obtuse: bool = True):
    """Exact unit-circle pair (cos, sin) with sin > 0, i.e. an angle in (0, pi)."""
    while True:
        m = rng.randint(1, 9)
        k = rng.randint(1, 9)
        if m == k:
            continue
        m, k = max(m, k), min(m, k)
        den = m * m + k * k
        c = Fraction(m * m - k * k, den)
        s = Fraction(2 * m * k, den)
        if allow_obtuse and rng.random() < 0.5:
            c = -c
        return c, s


def random_translation(rng: random.Random, spread: int = 15):
    return Fraction(rng.randint(-spread, spread)), Fraction(rng.randint(-spread, spread))


def _as_instance(source: LabeledPolygon, target_pts) -> SliceInstance:
    return SliceInstance(
        LabeledPolygon(source.vertices, 0), LabeledPolygon(tuple(target_pts), 1)
    )


def similar_copy_instance(rng: random.Random, polygon: LabeledPolygon) -> SliceInstance:
    """Target = rotate(< pi, about a random center), uniformly scale, translate."""
    c, s = random_rotation(rng)
    cx, cy = random_translation(rng, 8)
    scale = Fraction(rng.randint(1, 8), rng.randint(1, 4))
    tx, ty = random_translation(rng, 10)
    pts = []
    for p in polygon.vertices:
        dx, dy = p.x - cx, p.y - cy
        rx, ry = c * dx - s * dy, s * dx + c * dy
        pts.append(Point2(cx + scale * rx + tx, cy + scale * ry + ty))
    return _as_instance(polygon, pts)


def jiggled_instance(rng: random.Random, polygon: LabeledPolygon, amount: int = 2) -> SliceInstance:
    """Target = source with small random exact offsets, re-checked simple+CCW."""
    for _ in range(200):
        pts = [
            Point2(
                p.x + Fraction(rng.randint(-amount * 4, amount * 4), 4),
                p.y + Fraction(rng.randint(-amount * 4, amount * 4), 4),
            )
            for p in polygon.vertices
        ]
        if polygon_is_simple(pts) and polygon_is_ccw(pts):
            return _as_instance(polygon, pts)
    raise RuntimeError("jiggle failed to produce a simple polygon")


def rotated_instance(rng: random.Random, polygon: LabeledPolygon) -> SliceInstance:
    c, s = random_rotation(rng)
    cx = Fraction(rng.randint(-5, 5))
    cy = Fraction(rng.randint(-5, 5))
    return rotate_copy_instance(polygon, Point2(cx, cy), (c, s))


def random_polygon(rng: random.Random, n: int, kind: str) -> LabeledPolygon:
    if kind == "convex":
        return random_convex_polygon(rng, n)
    if kind == "star":
        return random_star_polygon(rng, n)
    if kind == "spiral":
        return random_spiral_polygon(rng, max(n, 6))
    raise ValueError(f"unknown polygon kind {kind!r}")


def random_instance(rng: random.Random, n: int, kind: str) -> SliceInstance:
    """Mixed instance generator: a polygon of the given kind with a target
    drawn from transforms ranging from benign to adversarial."""
    polygon = random_polygon(rng, n, kind)
    style = rng.choice(["similar", "jiggle", "rotate", "independent"])
    if style == "similar":
        return similar_copy_instance(rng, polygon)
    if style == "jiggle":
        return jiggled_instance(rng, polygon)
    if style == "rotate":
        return rotated_instance(rng, polygon)
    other = random_polygon(rng, polygon.n, kind)
    return _as_instance(polygon, (p for p in other.vertices))
