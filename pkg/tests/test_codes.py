import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvearcs.arcs import ArcPropertyError, complete_arc
from curvearcs.codes import (
    CodeError,
    code_from_arc,
    extending_columns,
    format_code,
    is_nonextendable,
    min_distance,
    min_distance_bruteforce,
    min_distance_geometric,
    rank,
    weights_bruteforce,
)
from curvearcs.families import hyperelliptic
from curvearcs.gf import field_of_order
from curvearcs.plane import plane_of
from curvearcs.poly import parse_unipoly


def full_weights(code):
    """Weights of x G over every nonzero message (no projective shortcut)."""
    ctx = code.ctx
    out = []
    for a in range(ctx.q):
        for b in range(ctx.q):
            for c in range(ctx.q):
                if a == b == c == 0:
                    continue
                w = sum(1 for col in code.columns
                        if ctx.add(ctx.add(ctx.mul(a, col[0]), ctx.mul(b, col[1])), ctx.mul(c, col[2])))
                out.append(w)
    return out


def completed(q, f):
    ctx = field_of_order(q)
    C, _ = hyperelliptic(ctx, parse_unipoly(ctx, f))
    return complete_arc(C)


def test_generator_shape_and_rank():
    rep = completed(7, "x^3+1")
    code = code_from_arc(rep.points())
    assert len(code.generator) == 3 and len(code.generator[0]) == rep.final_size
    assert len(set(code.columns)) == code.length
    assert rank(code) == 3
    with pytest.raises(CodeError):
        code_from_arc([])


def test_collinear_points_have_rank_two():
    ctx = field_of_order(5)
    pl = plane_of(ctx)
    code = code_from_arc([pl.point(i) for i in pl.points_on(7)])
    assert rank(code) == 2
    with pytest.raises(CodeError):
        min_distance(code)


@given(st.sampled_from([3, 4, 5, 7, 9]), st.integers(0, 2**32), st.integers(4, 14))
@settings(max_examples=40, deadline=None)
def test_two_distance_routes_agree(q, seed, k):
    ctx = field_of_order(q)
    pl = plane_of(ctx)
    rng = random.Random(seed)
    pts = [pl.point(i) for i in rng.sample(range(pl.size), min(k, pl.size))]
    code = code_from_arc(pts)
    assert min_distance_bruteforce(code) == min_distance_geometric(code)
    if q <= 5:
        assert min(full_weights(code)) == min_distance_bruteforce(code)


def test_weights_depend_only_on_projective_class():
    rep = completed(5, "x^3+x+1")
    code = code_from_arc(rep.points())
    ctx = code.ctx
    pw = weights_bruteforce(code)
    fw = full_weights(code)
    # each projective weight appears q-1 times among the full messages
    assert sorted(fw) == sorted(int(w) for w in pw for _ in range(ctx.q - 1))


@pytest.mark.parametrize("q,f", [(7, "x^3+1"), (9, "x^3+x+2"), (11, "x^3+x+1"), (13, "x^4+2")])
def test_complete_arcs_give_distance_k_minus_m_and_are_nonextendable(q, f):
    rep = completed(q, f)
    pts = rep.points()
    code = code_from_arc(pts)
    assert min_distance(code) == len(pts) - rep.m
    assert is_nonextendable(pts, rep.m)
    assert extending_columns(pts) == []


def test_removing_a_point_makes_the_code_extendable():
    rep = completed(7, "x^3+1")
    pts = rep.points()
    for drop in range(len(pts)):
        sub = pts[:drop] + pts[drop + 1:]
        try:
            verdict = is_nonextendable(sub, rep.m)
        except ArcPropertyError:
            continue  # lost its last m-secant
        assert verdict is False
        assert pts[drop] in extending_columns(sub)
        break
    else:
        pytest.fail("no removable point found")


def test_format_code():
    rep = completed(7, "x^3+1")
    text = format_code(code_from_arc(rep.points()))
    head, *rows = text.strip().splitlines()
    assert head == f"[{rep.final_size},3,{rep.final_size - 3}]_7"
    assert len(rows) == 3 and all(len(r.split()) == rep.final_size for r in rows)
