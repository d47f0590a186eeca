"""Steiner-free banded surface decision: conflict clauses over chord choices,
solved by 2-SAT, with a brute-force enumeration oracle for cross-checking.

Band i must be triangulated by one of two chords; two chord choices conflict
when their triangles touch beyond the structure they genuinely share.  Each
conflict forbids one (choice, choice) combination, which is a two-literal
clause, so satisfiability of the O(n^2) clauses decides existence exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InternalConsistencyError, PreconditionError
from .geometry import Triangle3, open_triangles_intersect_3d, orient3d
from .model import (
    BandedSurface,
    Chord,
    ChordAssignment,
    SliceInstance,
    VerificationReport,
    assignment_to_surface,
    scaled_to_integers,
    verify_banded_surface,
)
from .twosat import Clause2, Literal, TwoSatResult, solve_2sat


@dataclass(frozen=True)
class ChordChoiceTriangles:
    band: int
    choice: Chord
    triangles: tuple[Triangle3, Triangle3]
    degenerate: bool  # True iff the band quad is coplanar


def chord_triangles(inst: SliceInstance, i: int, choice: Chord) -> ChordChoiceTriangles:
    """The two faces induced on band i by choosing the given chord."""
    if not 0 <= i < inst.n:
        raise PreconditionError(f"band index {i} out of range")
    p0, p1, q1, q0 = inst.band_quad(i)
    if choice is Chord.RIGHT:
        tris = (Triangle3(p0, p1, q1), Triangle3(p0, q1, q0))
    else:
        tris = (Triangle3(p0, p1, q0), Triangle3(p1, q1, q0))
    coplanar = orient3d(p0, p1, q1, q0) == 0
    return ChordChoiceTriangles(i, choice, tris, coplanar)


def _choices(inst: SliceInstance):
    return {
        (i, c): chord_triangles(inst, i, c)
        for i in range(inst.n)
        for c in (Chord.RIGHT, Chord.LEFT)
    }


def _tris_conflict(a: ChordChoiceTriangles, b: ChordChoiceTriangles) -> bool:
    return any(
        open_triangles_intersect_3d(t1, t2) for t1 in a.triangles for t2 in b.triangles
    )


def conflicts(inst: SliceInstance, i: int, c_i: Chord, j: int, c_j: Chord) -> bool:
    """True iff choices (i, c_i) and (j, c_j) cannot coexist on the surface.

    Contact along genuinely shared structure (for adjacent bands, the common
    vertical edge and its endpoints) is exempt; everything else conflicts.
    """
    if i == j:
        raise PreconditionError("conflicts() compares two distinct bands")
    scaled = scaled_to_integers(inst)
    return _tris_conflict(chord_triangles(scaled, i, c_i), chord_triangles(scaled, j, c_j))


@dataclass(frozen=True)
class ConflictTable:
    """Precomputed conflict structure of an instance.

    self_conflicts[(i, c)] is True when the two triangles of choice (i, c)
    overlap each other (a folded coplanar quad); pairs[(i, j)][ci][cj] holds
    the cross-band conflicts for i < j with index 0 = Right, 1 = Left.
    """

    n: int
    self_conflicts: dict
    pairs: dict

    def choice_conflicts(self, i: int, c_i: Chord, j: int, c_j: Chord) -> bool:
        if i > j:
            i, j, c_i, c_j = j, i, c_j, c_i
        return self.pairs[(i, j)][_cidx(c_i)][_cidx(c_j)]


def _cidx(c: Chord) -> int:
    return 0 if c is Chord.RIGHT else 1


def build_conflict_table(inst: SliceInstance) -> ConflictTable:
    n = inst.n
    choices = _choices(scaled_to_integers(inst))
    self_conflicts = {}
    for i in range(n):
        for c in (Chord.RIGHT, Chord.LEFT):
            cc = choices[(i, c)]
            self_conflicts[(i, c)] = open_triangles_intersect_3d(*cc.triangles)
    pairs = {}
    for i in range(n):
        for j in range(i + 1, n):
            mat = [[False, False], [False, False]]
            for ci in (Chord.RIGHT, Chord.LEFT):
                for cj in (Chord.RIGHT, Chord.LEFT):
                    mat[_cidx(ci)][_cidx(cj)] = _tris_conflict(
                        choices[(i, ci)], choices[(j, cj)]
                    )
            pairs[(i, j)] = (tuple(mat[0]), tuple(mat[1]))
    return ConflictTable(n, self_conflicts, pairs)


def _choice_literal(i: int, c: Chord) -> Literal:
    # variable i is True iff band i takes the right chord
    return Literal(i, negated=(c is Chord.LEFT))


def build_clauses(inst: SliceInstance, table: ConflictTable | None = None):
    """Clauses whose satisfying assignments are exactly the valid surfaces."""
    if table is None:
        table = build_conflict_table(inst)
    clauses = []
    for (i, c), bad in sorted(table.self_conflicts.items(), key=lambda kv: (kv[0][0], kv[0][1].value)):
        if bad:
            lit = ~_choice_literal(i, c)
            clauses.append(Clause2(lit, lit))
    for (i, j), mat in sorted(table.pairs.items()):
        for ci in (Chord.RIGHT, Chord.LEFT):
            for cj in (Chord.RIGHT, Chord.LEFT):
                if mat[_cidx(ci)][_cidx(cj)]:
                    clauses.append(
                        Clause2(~_choice_literal(i, ci), ~_choice_literal(j, cj))
                    )
    return inst.n, clauses


@dataclass(frozen=True)
class SolveOutcome:
    satisfiable: bool
    assignment: ChordAssignment | None = None
    surface: BandedSurface | None = None
    report: VerificationReport | None = None
    unsat: TwoSatResult | None = None

    def describe(self) -> str:
        if self.satisfiable:
            return f"SAT {self.assignment}"
        w = self.unsat
        chains = ""
        if w.chain_pos_to_neg:
            chains = (
                f"; {' -> '.join(map(str, w.chain_pos_to_neg))}"
                f" and {' -> '.join(map(str, w.chain_neg_to_pos))}"
            )
        return f"UNSAT (band {w.witness_var} forced both ways{chains})"


def solve_no_steiner(inst: SliceInstance, *, validate: bool = True) -> SolveOutcome:
    """Find a Steiner-free banded surface or certify that none exists.

    On SAT the surface is re-certified by the independent verifier; a failure
    there means the conflict predicate and the verifier disagree, which is a
    bug worth crashing over.
    """
    if validate:
        inst.validate()
    table = build_conflict_table(inst)
    n, clauses = build_clauses(inst, table)
    result = solve_2sat(n, clauses)
    if not result.satisfiable:
        return SolveOutcome(satisfiable=False, unsat=result)
    assignment = ChordAssignment.from_bools(result.assignment)
    surface = assignment_to_surface(inst, assignment)
    report = verify_banded_surface(surface)
    if not report.passed:
        raise InternalConsistencyError(
            "2-SAT found an assignment but the verifier rejects the surface:\n"
            + report.summary()
        )
    return SolveOutcome(True, assignment, surface, report)


def brute_force_assignments(inst: SliceInstance, limit: int = 16) -> list[ChordAssignment]:
    """Enumerate all 2^n chord assignments and keep those whose surface passes
    the full verifier.  Independent of the clause/2-SAT machinery."""
    n = inst.n
    if n > limit:
        raise PreconditionError(f"brute force limited to n <= {limit}, got {n}")
    scaled = scaled_to_integers(inst)
    choices = _choices(scaled)
    memo: dict = {}
    valid = []
    for mask in range(1 << n):
        assignment = ChordAssignment(
            tuple(Chord.RIGHT if (mask >> i) & 1 else Chord.LEFT for i in range(n))
        )
        surface = assignment_to_surface(scaled, assignment)
        triangles = []
        for i, c in enumerate(assignment.choices):
            triangles.extend(choices[(i, c)].triangles)
        report = verify_banded_surface(surface, _triangles=triangles, _pair_memo=memo)
        if report.passed:
            valid.append(assignment)
    return valid
