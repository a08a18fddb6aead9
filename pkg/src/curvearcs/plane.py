"""Points, lines and incidence in PG(2, q).

Points and lines share one canonical form (last nonzero coordinate equal
to 1) and one numbering:

    (x, y, 1) -> x*q + y,    (x, 1, 0) -> q^2 + x,    (1, 0, 0) -> q^2 + q

so line 0 is (0, 0, 1), the line at infinity.  Because the two numberings
coincide, the pencil of lines through point i is the point row of line i
read in the dual plane, and a single incidence table serves both.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

from .gf import FieldCtx, FieldError

Triple = tuple[int, int, int]


def canonical(ctx: FieldCtx, v) -> Triple:
    x0, x1, x2 = (int(c) for c in v)
    if x2:
        if x2 == 1:
            return (x0, x1, 1)
        inv = ctx.inv(x2)
        return (ctx.mul(x0, inv), ctx.mul(x1, inv), 1)
    if x1:
        return (ctx.div(x0, x1), 1, 0)
    if x0:
        return (1, 0, 0)
    raise ValueError("the zero vector is not a projective point")


def triple_index(q: int, t: Triple) -> int:
    x0, x1, x2 = t
    if x2 == 1:
        return x0 * q + x1
    if x1 == 1:
        return q * q + x0
    return q * q + q


def index_triple(q: int, i: int) -> Triple:
    qq = q * q
    if i < qq:
        return (i // q, i % q, 1)
    if i < qq + q:
        return (i - qq, 1, 0)
    return (1, 0, 0)


@dataclass(frozen=True)
class ProjPoint:
    coords: Triple
    ctx: FieldCtx = field(repr=False)

    @classmethod
    def of(cls, ctx: FieldCtx, *v) -> "ProjPoint":
        if len(v) == 1:
            v = v[0]
        return cls(canonical(ctx, v), ctx)

    @property
    def index(self) -> int:
        return triple_index(self.ctx.q, self.coords)

    @property
    def is_affine(self) -> bool:
        return self.coords[2] == 1

    def __str__(self):
        return format_point(self)


@dataclass(frozen=True)
class ProjLine:
    coords: Triple
    ctx: FieldCtx = field(repr=False)

    @classmethod
    def of(cls, ctx: FieldCtx, *v) -> "ProjLine":
        if len(v) == 1:
            v = v[0]
        return cls(canonical(ctx, v), ctx)

    @property
    def index(self) -> int:
        return triple_index(self.ctx.q, self.coords)

    def __str__(self):
        return format_line(self)


def dot(ctx: FieldCtx, a: Triple, b: Triple) -> int:
    return ctx.add(ctx.add(ctx.mul(a[0], b[0]), ctx.mul(a[1], b[1])), ctx.mul(a[2], b[2]))


def cross(ctx: FieldCtx, a: Triple, b: Triple) -> Triple:
    s, m = ctx.sub, ctx.mul
    return (
        s(m(a[1], b[2]), m(a[2], b[1])),
        s(m(a[2], b[0]), m(a[0], b[2])),
        s(m(a[0], b[1]), m(a[1], b[0])),
    )


def _row_indices(ctx: FieldCtx, a: Triple) -> np.ndarray:
    """Sorted indices of the q+1 canonical triples X with a . X = 0."""
    q = ctx.q
    a0, a1, a2 = a
    xs = np.arange(q, dtype=np.int64)
    out = []
    if a1:
        # affine: y = -(a0 x + a2) / a1
        c = ctx.neg(ctx.inv(a1))
        ys = ctx.vmul(ctx.vadd(ctx.vmul(xs, a0), a2), c)
        out.append(xs * q + ys)
        x_inf = ctx.div(ctx.neg(a1), a0) if a0 else None
        out.append(np.array([q * q + x_inf if x_inf is not None else q * q + q]))
    elif a0:
        x0 = ctx.div(ctx.neg(a2), a0)
        out.append(x0 * q + xs)
        out.append(np.array([q * q]))
    else:
        out.append(q * q + xs)
        out.append(np.array([q * q + q]))
    return np.sort(np.concatenate(out))


class Plane:
    """Enumeration and incidence tables for PG(2, q); build via :func:`plane_of`."""

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx
        self.q = ctx.q
        self.size = self.q * self.q + self.q + 1

    def triple(self, i: int) -> Triple:
        return index_triple(self.q, i)

    def index(self, t: Triple) -> int:
        return triple_index(self.q, canonical(self.ctx, t))

    def point(self, i: int) -> ProjPoint:
        return ProjPoint(self.triple(i), self.ctx)

    def line(self, i: int) -> ProjLine:
        return ProjLine(self.triple(i), self.ctx)

    @functools.cached_property
    def incidence(self) -> np.ndarray:
        """``incidence[j]`` = sorted point indices on line j (also: lines through point j)."""
        rows = np.empty((self.size, self.q + 1), dtype=np.int64)
        for j in range(self.size):
            rows[j] = _row_indices(self.ctx, self.triple(j))
        rows.setflags(write=False)
        return rows

    @functools.cached_property
    def incidence_lists(self) -> list[list[int]]:
        return self.incidence.tolist()

    def points_on(self, line_index: int) -> list[int]:
        return self.incidence_lists[line_index]

    def lines_through(self, point_index: int) -> list[int]:
        return self.incidence_lists[point_index]


@functools.lru_cache(maxsize=16)
def plane_of(ctx: FieldCtx) -> Plane:
    return Plane(ctx)


def enumerate_points(ctx: FieldCtx) -> list[ProjPoint]:
    pl = plane_of(ctx)
    return [pl.point(i) for i in range(pl.size)]


def enumerate_lines(ctx: FieldCtx) -> list[ProjLine]:
    pl = plane_of(ctx)
    return [pl.line(i) for i in range(pl.size)]


def _same_field(a, b):
    if a.ctx != b.ctx:
        raise FieldError("objects from different fields")


def incidence(P: ProjPoint, L: ProjLine) -> bool:
    _same_field(P, L)
    return dot(P.ctx, P.coords, L.coords) == 0


def line_through(P: ProjPoint, Q: ProjPoint) -> ProjLine:
    _same_field(P, Q)
    if P.coords == Q.coords:
        raise ValueError("a line needs two distinct points")
    return ProjLine.of(P.ctx, cross(P.ctx, P.coords, Q.coords))


def intersection(L: ProjLine, M: ProjLine) -> ProjPoint:
    _same_field(L, M)
    if L.coords == M.coords:
        raise ValueError("identical lines")
    return ProjPoint.of(L.ctx, cross(L.ctx, L.coords, M.coords))


def lines_through(P: ProjPoint) -> list[ProjLine]:
    pl = plane_of(P.ctx)
    return [pl.line(j) for j in pl.lines_through(P.index)]


def points_on(L: ProjLine) -> list[ProjPoint]:
    pl = plane_of(L.ctx)
    return [pl.point(i) for i in pl.points_on(L.index)]


LINE_AT_INFINITY: Triple = (0, 0, 1)


def line_at_infinity(ctx: FieldCtx) -> ProjLine:
    return ProjLine(LINE_AT_INFINITY, ctx)


# -- serialisation: "x0:x1:x2" and "Lx0:x1:x2" -----------------------------------


def format_point(P: ProjPoint) -> str:
    return ":".join(P.ctx.format(c) for c in P.coords)


def format_line(L: ProjLine) -> str:
    return "L" + ":".join(L.ctx.format(c) for c in L.coords)


def parse_point(ctx: FieldCtx, text: str) -> ProjPoint:
    parts = text.strip().split(":")
    if len(parts) != 3:
        raise ValueError(f"expected x0:x1:x2, got {text!r}")
    return ProjPoint.of(ctx, [ctx.parse(t) for t in parts])


def parse_line(ctx: FieldCtx, text: str) -> ProjLine:
    text = text.strip()
    if not text.startswith("L"):
        raise ValueError(f"line must start with 'L': {text!r}")
    return ProjLine(parse_point(ctx, text[1:]).coords, ctx)
