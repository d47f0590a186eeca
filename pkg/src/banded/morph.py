"""Linear-morph analysis.

Each vertex travels in a straight line from its source to its target position,
so every geometric predicate along the morph is a quadratic polynomial in the
time parameter.  The planarity decision isolates the real roots of those
quadratics and evaluates exact sign predicates on each resulting piece, at
rational sample points inside pieces and in Q(sqrt(d)) at the roots
themselves; no sampling heuristics and no floating point are involved.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from .errors import AllPointsEqualError, InputError, InternalConsistencyError, PreconditionError
from .geometry import AngleClass, Point2, ccw_angle, segments_intersect_2d
from .model import Chord, ChordAssignment, LabeledPolygon, SliceInstance
from .quadfield import AlgebraicNumber, QuadExt, poly_eval, rational_between


@dataclass(frozen=True)
class MorphSnapshot:
    t: Fraction
    polygon: LabeledPolygon


@dataclass(frozen=True)
class PlanarityVerdict:
    """Outcome of the exact planarity decision.

    On violation, `interval` is a rational interval that contains the first
    violating stretch; unless `instantaneous` is set, its midpoint itself
    violates, so the witness can be re-checked directly.  `kind` is one of
    edge_contact, angle_collapse, vertex_collision, orientation_flip, and
    `subjects` names the offending edge or vertex indices.
    """

    preserved: bool
    interval: tuple[Fraction, Fraction] | None = None
    kind: str | None = None
    subjects: tuple[int, ...] | None = None
    instantaneous: bool = False


def morph_position(inst: SliceInstance, t) -> MorphSnapshot:
    """The intermediate polygon at time t, exactly interpolated."""
    t = Fraction(t)
    if not 0 <= t <= 1:
        raise PreconditionError("morph time must lie in [0, 1]")
    pts = []
    for p, q in zip(inst.source.vertices, inst.target.vertices):
        pts.append(Point2(p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)))
    return MorphSnapshot(t, LabeledPolygon(tuple(pts), t))


# ---------------------------------------------------------------------------
# moving-point polynomial helpers
# ---------------------------------------------------------------------------


def _linear(a, b):
    """Coefficients (c0, c1) of a + (b - a) * t."""
    return (Fraction(a), Fraction(b) - Fraction(a))


def _lin_sub(p, q):
    return (p[0] - q[0], p[1] - q[1])


def _lin_mul(p, q):
    return (p[0] * q[0], p[0] * q[1] + p[1] * q[0], p[1] * q[1])


def _quad_add(p, q):
    return (p[0] + q[0], p[1] + q[1], p[2] + q[2])


def _quad_sub(p, q):
    return (p[0] - q[0], p[1] - q[1], p[2] - q[2])


class _MovingPoint:
    __slots__ = ("x", "y")

    def __init__(self, p: Point2, q: Point2):
        self.x = _linear(p.x, q.x)
        self.y = _linear(p.y, q.y)

    def at(self, t):
        return Point2(self.x[0] + self.x[1] * t, self.y[0] + self.y[1] * t)

    def ranges(self):
        x0, x1 = self.x[0], self.x[0] + self.x[1]
        y0, y1 = self.y[0], self.y[0] + self.y[1]
        return (min(x0, x1), max(x0, x1)), (min(y0, y1), max(y0, y1))


def _orient_quad(a: _MovingPoint, b: _MovingPoint, c: _MovingPoint):
    ux, uy = _lin_sub(b.x, a.x), _lin_sub(b.y, a.y)
    vx, vy = _lin_sub(c.x, a.x), _lin_sub(c.y, a.y)
    return _quad_sub(_lin_mul(ux, vy), _lin_mul(uy, vx))


def _dot_quad(a: _MovingPoint, b: _MovingPoint, c: _MovingPoint):
    """Dot product (a - b) . (c - b) as a quadratic in t."""
    ux, uy = _lin_sub(a.x, b.x), _lin_sub(a.y, b.y)
    vx, vy = _lin_sub(c.x, b.x), _lin_sub(c.y, b.y)
    return _quad_add(_lin_mul(ux, vx), _lin_mul(uy, vy))


def _quad_is_zero(q):
    return q[0] == 0 and q[1] == 0 and q[2] == 0


def _roots01(q):
    from .quadfield import roots_in_open_interval

    return roots_in_open_interval(q[0], q[1], q[2], 0, 1)


def _collision_times(a: _MovingPoint, b: _MovingPoint):
    """Rational times in (0,1) at which the two moving points coincide."""
    dx = _lin_sub(a.x, b.x)
    dy = _lin_sub(a.y, b.y)

    def line_zero_times(c):
        if c[1] == 0:
            return None if c[0] != 0 else "always"
        return [Fraction(-c[0], 1) / c[1]]

    zx, zy = line_zero_times(dx), line_zero_times(dy)
    if zx == "always" and zy == "always":
        raise InputError("two vertices travel identically; polygons have repeated vertices")
    if zx == "always":
        cands = zy
    elif zy == "always":
        cands = zx
    elif zx is None or zy is None:
        return []
    else:
        cands = [t for t in zx if t in zy]
    if cands is None:
        return []
    return [t for t in cands if 0 < t < 1]


# ---------------------------------------------------------------------------
# piecewise sign analysis
# ---------------------------------------------------------------------------


def _sorted_unique_events(events):
    if not events:
        return []
    events = sorted(events, key=functools.cmp_to_key(lambda a, b: a.compare(b)))
    out = [events[0]]
    for e in events[1:]:
        if e.compare(out[-1]) != 0:
            out.append(e)
    return out


def _scalar_violates(value, *, nonpositive=False) -> bool:
    if isinstance(value, QuadExt):
        s = value.sign()
    else:
        s = (value > 0) - (value < 0)
    return s <= 0 if nonpositive else s < 0


@dataclass
class _Run:
    start: AlgebraicNumber  # left boundary of the violating stretch
    end: AlgebraicNumber  # right boundary
    instantaneous: bool  # single touching instant
    sample: Fraction | None  # a rational violating time inside, when one exists

    def outer_bounds(self) -> tuple[Fraction, Fraction]:
        lo = self.start.rat if self.start.rat is not None else self.start.lo
        hi = self.end.rat if self.end.rat is not None else self.end.hi
        return lo, hi


def _violating_runs(events, predicate) -> list[_Run]:
    """Split (0,1) at the events and merge the consecutive violating pieces.

    `predicate` receives an exact scalar (Fraction or QuadExt) and must be
    constant on each open piece between events; it is also evaluated exactly
    at each event.
    """
    zero = AlgebraicNumber.from_rational(0)
    one = AlgebraicNumber.from_rational(1)
    bounds = [zero] + list(events) + [one]
    pieces = []  # (left_bound, right_bound, is_point, violating, rational_sample)
    for a, b in zip(bounds, bounds[1:]):
        m = rational_between(a, b)
        pieces.append((a, b, False, bool(predicate(m)), m))
        if b is not one:
            pieces.append((b, b, True, bool(predicate(b.as_scalar())), b.rat))
    runs: list[_Run] = []
    current: list = []
    for piece in pieces + [None]:
        if piece is not None and piece[3]:
            current.append(piece)
            continue
        if current:
            first, last = current[0], current[-1]
            instant = len(current) == 1 and current[0][2]
            sample = next((p[4] for p in current if p[4] is not None), None)
            runs.append(_Run(first[0], last[1], instant, sample))
            current = []
    return runs


def _tighten_run(run: _Run, predicate, max_rounds=200) -> tuple[Fraction, Fraction]:
    """Refine the run's boundary brackets until the midpoint of the reported
    rational interval itself violates; the interval always contains the run."""
    if run.instantaneous and run.sample is None:
        return run.outer_bounds()
    for _ in range(max_rounds):
        lo, hi = run.outer_bounds()
        if predicate((lo + hi) / 2):
            return lo, hi
        run.start.refine()
        run.end.refine()
    raise InternalConsistencyError("failed to tighten a planarity violation interval")


# ---------------------------------------------------------------------------
# the planarity decision
# ---------------------------------------------------------------------------


def planarity_preserving(inst: SliceInstance, *, validate: bool = True) -> PlanarityVerdict:
    """Exact decision: do all intermediate polygons of the linear morph stay
    simple (and positively oriented) for t strictly inside (0, 1)?

    Violations, in the order they are searched: non-adjacent edges touching
    or crossing, a polygon angle collapsing to zero (adjacent edges folding
    onto each other), two vertices colliding, and the signed area dropping to
    or below zero (the polygon inverting).  Endpoint times are excluded.
    """
    if validate:
        inst.validate()
    n = inst.n
    moving = [
        _MovingPoint(p, q) for p, q in zip(inst.source.vertices, inst.target.vertices)
    ]
    candidates: list[tuple[_Run, str, tuple[int, ...], list]] = []

    # vertex collisions (rational instants)
    for i in range(n):
        for j in range(i + 1, n):
            for t in _collision_times(moving[i], moving[j]):
                e = AlgebraicNumber.from_rational(t)
                run = _Run(e, e, True, t)
                candidates.append((run, "vertex_collision", (i, j)))

    # angle collapse at each vertex (adjacent edge pairs)
    for i in range(n):
        a, b, c = moving[(i - 1) % n], moving[i], moving[(i + 1) % n]
        quad = _orient_quad(a, b, c)
        dotq = _dot_quad(a, b, c)

        def angle_pred(t, a=a, b=b, c=c):
            pa, pb, pc = a.at(t), b.at(t), c.at(t)
            cross = (pb.x - pa.x) * (pc.y - pa.y) - (pb.y - pa.y) * (pc.x - pa.x)
            if not _scalar_is_zero(cross):
                return False
            dot = (pa.x - pb.x) * (pc.x - pb.x) + (pa.y - pb.y) * (pc.y - pb.y)
            return not _scalar_violates(dot)  # dot >= 0 while collinear

        events = _roots01(quad)
        if _quad_is_zero(quad):
            events = _roots01(dotq)
        events += [
            AlgebraicNumber.from_rational(t)
            for pair in ((a, b), (b, c), (a, c))
            for t in _collision_times(*pair)
        ]
        for run in _violating_runs(_sorted_unique_events(events), angle_pred):
            candidates.append((run, "angle_collapse", (i,)))

    # non-adjacent edge pairs
    for i in range(n):
        for j in range(i + 1, n):
            if j == i + 1 or (i == 0 and j == n - 1):
                continue
            e = (moving[i], moving[(i + 1) % n])
            f = (moving[j], moving[(j + 1) % n])
            if _ranges_disjoint(e, f):
                continue

            def edge_pred(t, e=e, f=f):
                return segments_intersect_2d(
                    e[0].at(t), e[1].at(t), f[0].at(t), f[1].at(t), mode="any"
                )

            events = []
            for quad in (
                _orient_quad(e[0], e[1], f[0]),
                _orient_quad(e[0], e[1], f[1]),
                _orient_quad(f[0], f[1], e[0]),
                _orient_quad(f[0], f[1], e[1]),
            ):
                events += _roots01(quad)
            for u in e:
                for v in f:
                    events += [AlgebraicNumber.from_rational(t) for t in _collision_times(u, v)]
            for run in _violating_runs(_sorted_unique_events(events), edge_pred):
                candidates.append((run, "edge_contact", (i, j)))

    # orientation flip: the shoelace quadratic must stay strictly positive
    shoelace = (Fraction(0), Fraction(0), Fraction(0))
    for i in range(n):
        a, b = moving[i], moving[(i + 1) % n]
        shoelace = _quad_add(shoelace, _quad_sub(_lin_mul(a.x, b.y), _lin_mul(a.y, b.x)))

    def area_pred(t):
        return _scalar_violates(poly_eval(shoelace, t), nonpositive=True)

    events = _roots01(shoelace)
    for run in _violating_runs(_sorted_unique_events(events), area_pred):
        candidates.append((run, "orientation_flip", tuple()))

    if not candidates:
        return PlanarityVerdict(preserved=True)

    candidates.sort(
        key=functools.cmp_to_key(
            lambda p, q: p[0].start.compare(q[0].start) or _tiebreak(p, q)
        )
    )
    run, kind, subjects = candidates[0]
    predicate = _predicate_for(kind, subjects, moving, shoelace, n)
    lo, hi = _tighten_run(run, predicate)
    return PlanarityVerdict(
        preserved=False,
        interval=(lo, hi),
        kind=kind,
        subjects=subjects,
        instantaneous=run.instantaneous,
    )


def _tiebreak(p, q):
    # among runs starting at the same instant, prefer an extended violating
    # stretch over an isolated touch, then order deterministically
    kp = (p[0].instantaneous, p[1], p[2])
    kq = (q[0].instantaneous, q[1], q[2])
    return -1 if kp < kq else (1 if kp > kq else 0)


def _scalar_is_zero(value) -> bool:
    if isinstance(value, QuadExt):
        return value.sign() == 0
    return value == 0


def _ranges_disjoint(e, f) -> bool:
    (ex0, ex1), (ey0, ey1) = e[0].ranges()
    (fx0, fx1), (fy0, fy1) = e[1].ranges()
    ax = (min(ex0, fx0), max(ex1, fx1))
    ay = (min(ey0, fy0), max(ey1, fy1))
    (gx0, gx1), (gy0, gy1) = f[0].ranges()
    (hx0, hx1), (hy0, hy1) = f[1].ranges()
    bx = (min(gx0, hx0), max(gx1, hx1))
    by = (min(gy0, hy0), max(gy1, hy1))
    return ax[1] < bx[0] or bx[1] < ax[0] or ay[1] < by[0] or by[1] < ay[0]


def _predicate_for(kind, subjects, moving, shoelace, n):
    if kind == "orientation_flip":
        return lambda t: _scalar_violates(poly_eval(shoelace, t), nonpositive=True)
    if kind == "edge_contact":
        i, j = subjects
        e = (moving[i], moving[(i + 1) % n])
        f = (moving[j], moving[(j + 1) % n])
        return lambda t: segments_intersect_2d(
            e[0].at(t), e[1].at(t), f[0].at(t), f[1].at(t), mode="any"
        )
    if kind == "angle_collapse":
        (i,) = subjects
        a, b, c = moving[(i - 1) % n], moving[i], moving[(i + 1) % n]

        def pred(t):
            pa, pb, pc = a.at(t), b.at(t), c.at(t)
            cross = (pb.x - pa.x) * (pc.y - pa.y) - (pb.y - pa.y) * (pc.x - pa.x)
            if not _scalar_is_zero(cross):
                return False
            dot = (pa.x - pb.x) * (pc.x - pb.x) + (pa.y - pb.y) * (pc.y - pb.y)
            return not _scalar_violates(dot)

        return pred
    i, j = subjects  # vertex_collision
    return lambda t: moving[i].at(t) == moving[j].at(t)


# ---------------------------------------------------------------------------
# convex chord rule, rotations, similarity
# ---------------------------------------------------------------------------


def band_angle_classes(inst: SliceInstance) -> list[AngleClass]:
    """Per band, classify the CCW turn from the source edge direction to the
    target edge direction against pi."""
    classes = []
    n = inst.n
    for i in range(n):
        p0, p1 = inst.source.vertices[i], inst.source.vertices[(i + 1) % n]
        q0, q1 = inst.target.vertices[i], inst.target.vertices[(i + 1) % n]
        v0 = Point2(p1.x - p0.x, p1.y - p0.y)
        v1 = Point2(q1.x - q0.x, q1.y - q0.y)
        classes.append(ccw_angle(v0, v1)[0])
    return classes


def convex_chord_rule(inst: SliceInstance) -> ChordAssignment:
    """Chord assignment for convex, planarity-preserving instances: left chord
    when the edge turns by less than pi, right chord when by more, right by
    convention at exactly pi.  The result is verified before being returned;
    a verification failure here is a bug and raises loudly."""
    inst.validate()
    if not inst.source.is_convex() or not inst.target.is_convex():
        raise PreconditionError("convex_chord_rule requires convex polygons")
    verdict = planarity_preserving(inst, validate=False)
    if not verdict.preserved:
        raise PreconditionError(
            f"convex_chord_rule requires a planarity-preserving morph; violated at {verdict.interval}"
        )
    choices = []
    for cls in band_angle_classes(inst):
        choices.append(Chord.LEFT if cls is AngleClass.LESS_PI else Chord.RIGHT)
    assignment = ChordAssignment(tuple(choices))

    from .model import assignment_to_surface, verify_banded_surface

    report = verify_banded_surface(assignment_to_surface(inst, assignment))
    if not report.passed:
        raise InternalConsistencyError(
            "convex chord rule produced a surface the verifier rejects:\n" + report.summary()
        )
    return assignment


def rotate_copy_instance(polygon: LabeledPolygon, center: Point2, cos_sin) -> SliceInstance:
    """Instance whose target is the source rotated about `center` by the exact
    rotation (cos, sin); the pair must satisfy cos^2 + sin^2 == 1."""
    c, s = Fraction(cos_sin[0]), Fraction(cos_sin[1])
    if c * c + s * s != 1:
        raise PreconditionError("rotation pair must lie exactly on the unit circle")
    src = LabeledPolygon(polygon.vertices, 0)
    rotated = []
    for p in polygon.vertices:
        dx, dy = p.x - center.x, p.y - center.y
        rotated.append(Point2(center.x + c * dx - s * dy, center.y + s * dx + c * dy))
    return SliceInstance(src, LabeledPolygon(tuple(rotated), 1))


@dataclass(frozen=True)
class Similarity:
    """Orientation-preserving similarity x -> W x + v, with W the rotation
    and scale encoded as the complex number (wx + i wy)."""

    wx: Fraction
    wy: Fraction
    tx: Fraction
    ty: Fraction

    @property
    def scale_squared(self) -> Fraction:
        return self.wx * self.wx + self.wy * self.wy

    @property
    def is_identity_rotation(self) -> bool:
        return self.wy == 0 and self.wx > 0

    def apply(self, p: Point2) -> Point2:
        return Point2(
            self.wx * p.x - self.wy * p.y + self.tx,
            self.wy * p.x + self.wx * p.y + self.ty,
        )


def similarity_witness(a: LabeledPolygon, b: LabeledPolygon):
    """The unique label-preserving, reflection-free similarity mapping polygon
    a onto polygon b exactly, or None when no such map exists.

    Raises AllPointsEqualError when either polygon has collapsed to a single
    point (there, shape comparison is meaningless)."""
    if a.n != b.n:
        raise InputError("similarity_witness requires equal vertex counts")
    av, bv = a.vertices, b.vertices
    if all(p == av[0] for p in av):
        raise AllPointsEqualError("source polygon has all points equal")
    if all(p == bv[0] for p in bv):
        raise AllPointsEqualError("target polygon has all points equal")
    k = next(i for i in range(1, a.n) if av[i] != av[0])
    dax, day = Fraction(av[k].x - av[0].x), Fraction(av[k].y - av[0].y)
    dbx, dby = Fraction(bv[k].x - bv[0].x), Fraction(bv[k].y - bv[0].y)
    denom = dax * dax + day * day
    wx = (dbx * dax + dby * day) / denom
    wy = (dby * dax - dbx * day) / denom
    tx = bv[0].x - (wx * av[0].x - wy * av[0].y)
    ty = bv[0].y - (wy * av[0].x + wx * av[0].y)
    sim = Similarity(wx, wy, Fraction(tx), Fraction(ty))
    if sim.scale_squared == 0:
        return None
    for p, q in zip(av, bv):
        if sim.apply(p) != q:
            return None
    return sim
