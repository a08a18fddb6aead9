"""m-arcs in PG(2, q): census, verification and greedy completion from a curve.

A point Q outside a set T is *covered* when some line through Q already
meets T in m points.  For a set whose line counts are all <= m, an
uncovered point can always be added without creating an (m+1)-secant,
which is what makes the greedy walk along a line safe.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .curve import PlaneCurve, TangencyRecord, rational_inflection_tangents, scan_tangencies
from .gf import FieldCtx
from .plane import LINE_AT_INFINITY, ProjLine, ProjPoint, format_line, format_point, plane_of
from .poly import format_sparse

SCHEMA_VERSION = "curvearcs.completion/1"


class ArcPropertyError(ValueError):
    """The point set has a line with more than m points."""

    def __init__(self, msg: str, line: ProjLine | None = None, count: int | None = None):
        super().__init__(msg)
        self.line = line
        self.count = count


class InvariantBreach(RuntimeError):
    pass


class CompletionError(RuntimeError):
    def __init__(self, msg: str, uncovered: list[ProjPoint]):
        super().__init__(msg)
        self.uncovered = uncovered


def _indices(points: Iterable, ctx: FieldCtx | None = None) -> tuple[FieldCtx, list[int]]:
    idx = []
    for P in points:
        if ctx is None:
            ctx = P.ctx
        elif P.ctx != ctx:
            raise ValueError("points from different fields")
        idx.append(P.index)
    if ctx is None:
        raise ValueError("cannot infer the field of an empty point set")
    return ctx, idx


def census(points: Iterable[ProjPoint], ctx: FieldCtx | None = None) -> np.ndarray:
    """Number of points on every line, indexed by plane line number."""
    ctx, idx = _indices(points, ctx)
    return _census(ctx, idx)


def _census(ctx: FieldCtx, idx: Iterable[int]) -> np.ndarray:
    pl = plane_of(ctx)
    idx = np.fromiter(set(idx), dtype=np.int64)
    if idx.size == 0:
        return np.zeros(pl.size, dtype=np.int64)
    # by duality, incidence[i] lists the lines through point i
    return np.bincount(pl.incidence[idx].ravel(), minlength=pl.size)


class Arc:
    """A point set with its live per-line census."""

    def __init__(self, ctx: FieldCtx, m: int, points: Iterable[ProjPoint] = ()):
        if m < 2:
            raise ValueError("m must be >= 2")
        self.ctx = ctx
        self.m = m
        self.plane = plane_of(ctx)
        self.members: set[int] = set()
        self.counts = [0] * self.plane.size
        for P in points:
            self.add_index(P.index)

    @classmethod
    def from_indices(cls, ctx: FieldCtx, m: int, idx: Iterable[int]) -> "Arc":
        arc = cls(ctx, m)
        for i in idx:
            arc.add_index(i)
        return arc

    def __len__(self):
        return len(self.members)

    def __contains__(self, P) -> bool:
        return (P.index if isinstance(P, ProjPoint) else P) in self.members

    def add(self, P: ProjPoint) -> None:
        self.add_index(P.index)

    def add_index(self, i: int) -> None:
        if i in self.members:
            return
        self.members.add(i)
        counts = self.counts
        for j in self.plane.lines_through(i):
            counts[j] += 1

    def is_covered_index(self, i: int) -> bool:
        m, counts = self.m, self.counts
        return any(counts[j] == m for j in self.plane.lines_through(i))

    def can_add_index(self, i: int) -> bool:
        m, counts = self.m, self.counts
        return all(counts[j] < m for j in self.plane.lines_through(i))

    @property
    def points(self) -> list[ProjPoint]:
        return [self.plane.point(i) for i in sorted(self.members)]

    def census(self) -> np.ndarray:
        return np.asarray(self.counts, dtype=np.int64)


@dataclass(frozen=True)
class ArcVerdict:
    status: str  # "valid" | "no_m_secant" | "violation"
    line: ProjLine | None = None
    count: int | None = None

    @property
    def valid(self) -> bool:
        return self.status == "valid"


def _verdict(ctx: FieldCtx, counts: np.ndarray, m: int) -> ArcVerdict:
    top = int(counts.max())
    if top > m:
        j = int(np.argmax(counts))
        return ArcVerdict("violation", plane_of(ctx).line(j), top)
    if top < m:
        return ArcVerdict("no_m_secant")
    return ArcVerdict("valid")


def is_m_arc(points: Iterable[ProjPoint] | Arc, m: int | None = None, ctx: FieldCtx | None = None) -> ArcVerdict:
    """Fresh-census check: all lines meet the set in <= m points, some in exactly m."""
    if isinstance(points, Arc):
        m = points.m if m is None else m
        ctx, idx = points.ctx, list(points.members)
    else:
        ctx, idx = _indices(points, ctx)
    if m is None or m < 2:
        raise ValueError("m must be >= 2")
    return _verdict(ctx, _census(ctx, idx), m)


def covered(Q: ProjPoint, arc: Arc) -> bool:
    if Q in arc:
        raise ValueError(f"{Q} already belongs to the arc")
    return arc.is_covered_index(Q.index)


@dataclass(frozen=True)
class CompletenessVerdict:
    complete: bool
    uncovered: tuple[ProjPoint, ...] = ()


def _uncovered(ctx: FieldCtx, idx: list[int], m: int) -> np.ndarray:
    pl = plane_of(ctx)
    counts = _census(ctx, idx)
    inside = np.zeros(pl.size, dtype=bool)
    inside[idx] = True
    cov = (counts == m)[pl.incidence].any(axis=1)
    return np.flatnonzero(~cov & ~inside)


def is_complete(points: Iterable[ProjPoint] | Arc, m: int | None = None, ctx: FieldCtx | None = None) -> CompletenessVerdict:
    """Every point off the arc lies on an m-secant (recomputed from scratch)."""
    if isinstance(points, Arc):
        m = points.m if m is None else m
        ctx, idx = points.ctx, list(points.members)
    else:
        ctx, idx = _indices(points, ctx)
    verdict = _verdict(ctx, _census(ctx, idx), m)
    if verdict.status == "violation":
        raise ArcPropertyError(f"not an {m}-arc: {verdict.line} carries {verdict.count} points", verdict.line, verdict.count)
    pl = plane_of(ctx)
    bad = _uncovered(ctx, idx, m)
    return CompletenessVerdict(bad.size == 0, tuple(pl.point(int(i)) for i in bad))


def find_m_secant(arc: Arc, P: ProjPoint) -> ProjLine | None:
    """First line of the pencil through P (plane order) meeting the arc in m points."""
    if P in arc:
        raise ValueError(f"{P} already belongs to the arc")
    for j in arc.plane.lines_through(P.index):
        if arc.counts[j] == arc.m:
            return arc.plane.line(j)
    return None


def bound_constant_c(m: int) -> int:
    """9 m^2 (m!)^2: field size beyond which the construction is guaranteed."""
    if m < 3:
        raise ValueError("m must be >= 3")
    return 9 * m * m * math.factorial(m) ** 2


# -- completion ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CompletionPolicy:
    fallback: bool = True  # global sweep after the special lines
    debug_checks: bool = False  # re-verify the arc property after every addition


@dataclass(frozen=True)
class SpecialLine:
    line: ProjLine
    kinds: tuple[str, ...]
    contacts: tuple[tuple[ProjPoint, int], ...] = ()


@dataclass(frozen=True)
class Addition:
    source: str  # a line in "L.." notation, or "global-sweep"
    kinds: tuple[str, ...]
    points: tuple[int, ...]  # plane indices, in insertion order


@dataclass
class CompletionReport:
    ctx: FieldCtx
    curve_spec: str
    m: int
    ext_degree: int
    base_points: tuple[int, ...]
    special_lines: tuple[SpecialLine, ...]
    additions: tuple[Addition, ...]
    final_points: tuple[int, ...]
    certificates: dict
    T: int
    notes: tuple[str, ...] = ()
    family: dict | None = field(default=None)

    @property
    def base_size(self) -> int:
        return len(self.base_points)

    @property
    def S(self) -> tuple[int, ...]:
        base = set(self.base_points)
        return tuple(i for i in self.final_points if i not in base)

    @property
    def final_size(self) -> int:
        return len(self.final_points)

    @property
    def N(self) -> int:
        """Special lines processed before the line at infinity."""
        return sum(1 for s in self.special_lines if s.line.coords != LINE_AT_INFINITY)

    @property
    def fallback_count(self) -> int:
        return sum(len(a.points) for a in self.additions if a.source == "global-sweep")

    def points(self) -> list[ProjPoint]:
        pl = plane_of(self.ctx)
        return [pl.point(i) for i in self.final_points]

    def to_dict(self) -> dict:
        pl = plane_of(self.ctx)

        def pts(idx):
            return [format_point(pl.point(i)) for i in idx]

        return {
            "schema": SCHEMA_VERSION,
            "field": self.ctx.spec,
            "curve": self.curve_spec,
            "family": self.family,
            "m": self.m,
            "ext_degree": self.ext_degree,
            "base_curve_points": self.base_size,
            "base_points": pts(self.base_points),
            "special_lines": [
                {
                    "line": format_line(s.line),
                    "kinds": list(s.kinds),
                    "contacts": [[format_point(P), k] for P, k in s.contacts],
                }
                for s in self.special_lines
            ],
            "additions": [
                {"source": a.source, "kinds": list(a.kinds), "points": pts(a.points)} for a in self.additions
            ],
            "S": pts(sorted(self.S)),
            "final_size": self.final_size,
            "certificates": self.certificates,
            "bound_context": {"m": self.m, "T": self.T, "N": self.N, "c": bound_constant_c(self.m)},
            "size_accounting": size_accounting(self),
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n"


def base_arc_indices(curve: PlaneCurve) -> list[int]:
    """Rational points of the curve, minus singular points at infinity."""
    q = curve.ctx.q
    flags = curve.singular_flags()
    return [i for i in curve.rational_point_indices() if not (flags[i] and i >= q * q)]


def special_lines(curve: PlaneCurve, ext_degree: int = 1) -> list[SpecialLine]:
    """Bitangents, then inflection tangents, then the line at infinity."""
    recs = scan_tangencies(curve, ext_degree)
    inf_rec: TangencyRecord | None = None
    bit, infl = [], []
    for r in recs:
        if r.line.coords == LINE_AT_INFINITY:
            inf_rec = r
        elif r.is_bitangent:
            bit.append(r)
        elif r.is_inflection_tangent:
            infl.append(r)
    out = [SpecialLine(r.line, r.kinds, r.contacts) for r in bit + infl]
    kinds = ("infinity",) + (inf_rec.kinds if inf_rec else ())
    out.append(
        SpecialLine(ProjLine(LINE_AT_INFINITY, curve.ctx), kinds, inf_rec.contacts if inf_rec else ())
    )
    return out


def complete_arc(
    curve: PlaneCurve,
    m: int | None = None,
    ext_degree: int = 1,
    policy: CompletionPolicy = CompletionPolicy(),
    family: dict | None = None,
) -> CompletionReport:
    """Extend the curve's rational points to a complete m-arc.

    Special lines are walked in order; along each, points in plane order
    are added while uncovered.  Points left uncovered afterwards are swept
    up globally (flagged as ``global-sweep``) unless ``policy.fallback`` is
    off, in which case :class:`CompletionError` is raised.  The result is
    re-certified from a fresh census before it is returned.
    """
    ctx = curve.ctx
    if m is None:
        m = curve.m
    if m != curve.m:
        raise ValueError(f"m={m} must equal the curve degree {curve.m}")
    pl = plane_of(ctx)
    base = base_arc_indices(curve)
    verdict = _verdict(ctx, _census(ctx, base), m)
    if verdict.status == "violation":
        raise ArcPropertyError(
            f"curve points already violate the {m}-arc property: line {verdict.line} "
            f"meets C(F_q) in {verdict.count} points",
            verdict.line,
            verdict.count,
        )
    arc = Arc.from_indices(ctx, m, base)
    notes = []
    if verdict.status == "no_m_secant":
        notes.append("curve points have no m-secant")
    if ctx.q <= bound_constant_c(m):
        notes.append(f"q={ctx.q} <= c={bound_constant_c(m)}: outside the guaranteed range")
    specials = special_lines(curve, ext_degree)
    additions = []
    budget = pl.size

    def insert(i):
        nonlocal budget
        arc.add_index(i)
        budget -= 1
        if budget < 0:
            raise InvariantBreach("completion exceeded q^2+q+1 additions")
        if policy.debug_checks and max(arc.counts) > m:
            raise InvariantBreach(f"arc property broken after adding {pl.point(i)}")

    for sl in specials:
        added = []
        for i in pl.points_on(sl.line.index):
            if i in arc.members or arc.is_covered_index(i):
                continue
            if not arc.can_add_index(i):
                continue  # deferred to the sweep
            insert(i)
            added.append(i)
        additions.append(Addition(format_line(sl.line), sl.kinds, tuple(added)))

    pending = [i for i in range(pl.size) if i not in arc.members and not arc.is_covered_index(i)]
    if pending:
        if not policy.fallback:
            raise CompletionError(
                f"{len(pending)} points remain uncovered after the special lines",
                [pl.point(i) for i in pending],
            )
        swept = []
        for i in pending:
            if i in arc.members or arc.is_covered_index(i):
                continue
            if arc.can_add_index(i):
                insert(i)
                swept.append(i)
        additions.append(Addition("global-sweep", ("fallback",), tuple(swept)))

    final = sorted(arc.members)
    fresh = _verdict(ctx, _census(ctx, final), m)
    bad = _uncovered(ctx, final, m)
    certificates = {"is_m_arc": fresh.valid, "is_complete": bool(bad.size == 0)}
    if not fresh.valid or bad.size:
        raise InvariantBreach(f"completion produced an uncertified set: {fresh.status}, {bad.size} uncovered")
    T = len(rational_inflection_tangents(curve))
    return CompletionReport(
        ctx=ctx,
        curve_spec=format_sparse(curve.F),
        m=m,
        ext_degree=ext_degree,
        base_points=tuple(base),
        special_lines=tuple(specials),
        additions=tuple(additions),
        final_points=tuple(final),
        certificates=certificates,
        T=T,
        notes=tuple(notes),
        family=family,
    )


def size_accounting(report: CompletionReport) -> dict:
    line_adds = [len(a.points) for a in report.additions if a.source != "global-sweep"]
    s = len(report.S)
    fb = report.fallback_count
    cap = report.m * (report.N + 1)
    return {
        "S": s,
        "N": report.N,
        "T": report.T,
        "per_line_max": max(line_adds, default=0),
        "sum_H": sum(line_adds),
        "fallback_count": fb,
        "cap": cap,
        "consistent": s == sum(line_adds) + fb and all(k <= report.m for k in line_adds),
        "within_cap": s <= cap + fb,
    }


# -- empirical m-secant prevalence ------------------------------------------------------------


@dataclass(frozen=True)
class SweepResult:
    total: int
    with_secant: int
    exceptions: tuple[ProjPoint, ...]

    @property
    def fraction(self) -> float:
        return self.with_secant / self.total if self.total else 1.0


def m_secant_sweep(curve: PlaneCurve, m: int | None = None, ext_degree: int = 1) -> SweepResult:
    """For affine points off the curve and off its special lines, test for an m-secant of C(F_q)."""
    ctx = curve.ctx
    m = curve.m if m is None else m
    pl = plane_of(ctx)
    q = ctx.q
    base = base_arc_indices(curve)
    counts = _census(ctx, base)
    msec = counts == m
    excluded = np.zeros(pl.size, dtype=bool)
    excluded[list(curve.rational_point_indices())] = True
    for sl in special_lines(curve, ext_degree):
        if sl.line.coords != LINE_AT_INFINITY:
            excluded[pl.incidence[sl.line.index]] = True
    cand = np.flatnonzero(~excluded[: q * q])
    ok = msec[pl.incidence[cand]].any(axis=1)
    return SweepResult(int(cand.size), int(ok.sum()), tuple(pl.point(int(i)) for i in cand[~ok]))
