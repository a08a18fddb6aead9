import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvearcs.gf import FieldError, field_of_order
from curvearcs.plane import (
    ProjLine,
    ProjPoint,
    dot,
    enumerate_lines,
    enumerate_points,
    format_line,
    format_point,
    incidence,
    intersection,
    line_at_infinity,
    line_through,
    lines_through,
    parse_line,
    parse_point,
    plane_of,
    points_on,
)

SMALL = [2, 3, 4, 5, 7, 8, 9]


@pytest.mark.parametrize("q", SMALL)
def test_counts_and_uniqueness(q):
    ctx = field_of_order(q)
    pts = enumerate_points(ctx)
    assert len(pts) == q * q + q + 1
    assert len({P.coords for P in pts}) == len(pts)
    assert [P.index for P in pts] == list(range(len(pts)))
    # every nonzero vector is a scalar multiple of exactly one listed point
    reps = set()
    for v in itertools.product(range(q), repeat=3):
        if any(v):
            reps.add(ProjPoint.of(ctx, v).coords)
    assert reps == {P.coords for P in pts}


@pytest.mark.parametrize("q", SMALL)
def test_incidence_table_matches_dot_products(q):
    ctx = field_of_order(q)
    pl = plane_of(ctx)
    n = pl.size
    M = np.zeros((n, n), dtype=np.int64)  # M[line, point]
    for j in range(n):
        a = pl.triple(j)
        on = [i for i in range(n) if dot(ctx, a, pl.triple(i)) == 0]
        assert list(pl.incidence[j]) == on
        M[j, on] = 1
    # projective plane: each line q+1 points, two points span one line
    assert (M.sum(axis=1) == q + 1).all()
    assert (M.T @ M == q * np.eye(n, dtype=np.int64) + 1).all()
    # duality: the same table lists the lines through each point
    for i in range(n):
        assert set(pl.lines_through(i)) == set(np.flatnonzero(M[:, i]))


def test_line_zero_is_line_at_infinity():
    ctx = field_of_order(5)
    L = plane_of(ctx).line(0)
    assert L == line_at_infinity(ctx)
    assert all(not P.is_affine for P in points_on(L))


def points(q):
    return st.integers(0, q * q + q).map(lambda i: plane_of(field_of_order(q)).point(i))


@given(st.sampled_from([5, 9, 11]).flatmap(lambda q: st.tuples(points(q), points(q))))
@settings(max_examples=200, deadline=None)
def test_join_and_meet(pair):
    P, Q = pair
    if P == Q:
        with pytest.raises(ValueError):
            line_through(P, Q)
        return
    L = line_through(P, Q)
    assert incidence(P, L) and incidence(Q, L)
    assert P in points_on(L) and Q in points_on(L)
    # reading the points as lines: their meet is the point dual to L
    A, B = ProjLine(P.coords, P.ctx), ProjLine(Q.coords, Q.ctx)
    assert intersection(A, B).coords == L.coords
    assert L in lines_through(P)


def test_mixed_fields_raise():
    P = ProjPoint.of(field_of_order(5), 1, 2, 1)
    L = ProjLine.of(field_of_order(7), 0, 0, 1)
    with pytest.raises(FieldError):
        incidence(P, L)


@pytest.mark.parametrize("q", [7, 9, 25])
def test_serialisation_roundtrip(q):
    ctx = field_of_order(q)
    for P in enumerate_points(ctx)[:: max(1, q // 3)]:
        assert parse_point(ctx, format_point(P)) == P
    for L in enumerate_lines(ctx)[:: max(1, q // 3)]:
        assert parse_line(ctx, format_line(L)) == L
    # non-canonical input is normalised
    assert parse_point(ctx, "2:4:2") == ProjPoint.of(ctx, 1, 2, 1)


def test_zero_vector_rejected():
    ctx = field_of_order(5)
    with pytest.raises(ValueError):
        parse_point(ctx, "0:0:0")
    with pytest.raises(ValueError):
        parse_point(ctx, "1:2")
    with pytest.raises(ValueError):
        parse_line(ctx, "1:2:3")
