"""Linear [k, 3, d]_q codes from point sets of PG(2, q).

Columns of the generator are the arc points.  A message x (a functional,
i.e. a line) gives a codeword whose zeros are the arc points on that
line, so d = k - (largest number of arc points on a line).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .arcs import Arc, ArcPropertyError, _census, _verdict, is_complete
from .gf import FieldCtx
from .plane import ProjPoint, index_triple, plane_of, triple_index


class CodeError(ValueError):
    pass


@dataclass(frozen=True)
class LinearCode:
    ctx: FieldCtx
    columns: tuple[tuple[int, int, int], ...]  # canonical triples, plane order

    @property
    def q(self) -> int:
        return self.ctx.q

    @property
    def length(self) -> int:
        return len(self.columns)

    @property
    def dim(self) -> int:
        return 3

    @property
    def generator(self) -> list[list[int]]:
        """3 x k matrix, row-major."""
        return [[c[r] for c in self.columns] for r in range(3)]


def _points_of(A) -> tuple[FieldCtx, list[int]]:
    if isinstance(A, Arc):
        return A.ctx, sorted(A.members)
    pts = list(A)
    if not pts:
        raise CodeError("empty point set")
    ctx = pts[0].ctx
    return ctx, sorted({P.index for P in pts})


def code_from_arc(A: Arc | Iterable[ProjPoint]) -> LinearCode:
    ctx, idx = _points_of(A)
    if not idx:
        raise CodeError("empty arc")
    return LinearCode(ctx, tuple(index_triple(ctx.q, i) for i in idx))


def _rank(ctx: FieldCtx, rows: list[list[int]]) -> int:
    rows = [list(r) for r in rows]
    rank, ncols = 0, len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = ctx.inv(rows[rank][c])
        rows[rank] = [ctx.mul(inv, v) for v in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][c]:
                f = rows[r][c]
                rows[r] = [ctx.sub(a, ctx.mul(f, b)) for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def rank(code: LinearCode) -> int:
    return _rank(code.ctx, code.generator)


def weights_bruteforce(code: LinearCode) -> np.ndarray:
    """Weight of x G for one message x per scalar class, in plane order."""
    ctx = code.ctx
    cols = np.array(code.columns, dtype=np.int64)
    n = plane_of(ctx).size
    out = np.empty(n, dtype=np.int64)
    for i in range(n):
        x = index_triple(ctx.q, i)
        v = ctx.vadd(ctx.vadd(ctx.vmul(cols[:, 0], x[0]), ctx.vmul(cols[:, 1], x[1])), ctx.vmul(cols[:, 2], x[2]))
        out[i] = np.count_nonzero(v)
    return out


def min_distance_bruteforce(code: LinearCode) -> int:
    return int(weights_bruteforce(code).min())


def min_distance_geometric(code: LinearCode) -> int:
    idx = [triple_index(code.q, c) for c in code.columns]
    return code.length - int(_census(code.ctx, idx).max())


def min_distance(code: LinearCode) -> int:
    """Minimum distance, by exhaustive messages and by the line census; both must agree."""
    if rank(code) < 3:
        raise CodeError("generator has rank < 3 (points are collinear)")
    a = min_distance_bruteforce(code)
    b = min_distance_geometric(code)
    if a != b:
        raise RuntimeError(f"distance mismatch: brute force {a}, geometric {b}")
    return a


def is_nonextendable(A: Arc | Iterable[ProjPoint], m: int | None = None) -> bool:
    """True iff the m-arc is complete, i.e. no added column keeps d = k - m growing to k+1-m."""
    if isinstance(A, Arc):
        m = A.m if m is None else m
    ctx, idx = _points_of(A)
    if m is None:
        raise ValueError("m is required for a plain point set")
    verdict = _verdict(ctx, _census(ctx, idx), m)
    if not verdict.valid:
        raise ArcPropertyError(f"not an {m}-arc ({verdict.status})", verdict.line, verdict.count)
    return is_complete([plane_of(ctx).point(i) for i in idx], m).complete


def extending_columns(A: Arc | Iterable[ProjPoint]) -> list[ProjPoint]:
    """Exhaustive oracle: every new column that raises the minimum distance by one."""
    ctx, idx = _points_of(A)
    code = code_from_arc([plane_of(ctx).point(i) for i in idx])
    d = min_distance_bruteforce(code)
    out = []
    members = set(idx)
    for j in range(plane_of(ctx).size):
        if j in members:
            continue
        ext = LinearCode(ctx, code.columns + (index_triple(ctx.q, j),))
        if min_distance_bruteforce(ext) > d:
            out.append(plane_of(ctx).point(j))
    return out


def format_code(code: LinearCode) -> str:
    """Parameters line, then the three generator rows (elements in base-p digit form)."""
    d = min_distance(code)
    lines = [f"[{code.length},3,{d}]_{code.q}"]
    for row in code.generator:
        lines.append(" ".join(code.ctx.format(v) for v in row))
    return "\n".join(lines) + "\n"
