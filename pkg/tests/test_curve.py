import random
import warnings

import pytest

from curvearcs.curve import (
    CurveError,
    CurveWarning,
    PlaneCurve,
    contact_multiplicity,
    curve_from_affine,
    gauss_fiber_census,
    gauss_fibers,
    hessian,
    inflection_points,
    line_restriction,
    linear_components,
    rational_bitangents,
    rational_points,
    scan_tangencies,
    singular_points,
    tangent_line_at,
    validate_record,
)
from curvearcs.gf import field_of_order
from curvearcs.plane import ProjLine, canonical, dot, enumerate_points, plane_of
from curvearcs.poly import BivarPoly, HomogPoly, UniPoly, format_sparse


def y2_minus(ctx, f_coeffs):
    """y^2 - f(x) for f given constant-first."""
    terms = {(0, 2): 1}
    for i, c in enumerate(f_coeffs):
        if c:
            terms[(i, 0)] = ctx.neg(c)
    return curve_from_affine(BivarPoly(ctx, terms))


def phi(F, P, Q):
    """F(P + tQ) as a polynomial in t (test oracle, plain expansion)."""
    ctx = F.ctx
    lin = [UniPoly(ctx, [P[i], Q[i]]) for i in range(3)]
    acc = UniPoly(ctx, [])
    for e, c in F.terms.items():
        term = UniPoly(ctx, [c])
        for i in range(3):
            term = term * lin[i] ** e[i]
        acc = acc + term
    return acc


def oracle_contact(curve, line, P):
    """t-adic valuation of F(P + tQ), Q another point of the line; None if F vanishes on the line."""
    ctx = curve.ctx
    Q = next(R.coords for R in enumerate_points(ctx) if R.coords != P and dot(ctx, line, R.coords) == 0)
    u = phi(curve.F, P, Q)
    if u.is_zero():
        return None
    return next(k for k, c in enumerate(u.coeffs) if c)


def random_curve(rng, q, m):
    ctx = field_of_order(q)
    mons = [(i, j, m - i - j) for i in range(m + 1) for j in range(m + 1 - i)]
    while True:
        terms = {e: rng.randrange(ctx.q) for e in mons if rng.random() < 0.5}
        F = HomogPoly(ctx, terms)
        if F.is_zero() or F.degree != m:
            continue
        with warnings.catch_warnings():
            warnings.simplefilter("error", CurveWarning)
            try:
                return PlaneCurve(F)
            except CurveWarning:
                continue


def test_y2_x3_1_over_f7_reference_values():
    F7 = field_of_order(7)
    C = y2_minus(F7, [1, 0, 0, 1])
    aff, inf = rational_points(C)
    assert len(aff) == 11 and [P.coords for P in inf] == [(0, 1, 0)]
    # Hessian = 24 X0 (X1^2 + 3 X2^2) reduced mod 7
    assert hessian(C) == HomogPoly(F7, {(1, 2, 0): 24 % 7, (1, 0, 2): 72 % 7})
    flexes = {P.coords for P, _ in inflection_points(C, "hessian")}
    assert flexes == {(0, 1, 1), (0, 6, 1), (0, 1, 0)}
    assert flexes == {P.coords for P, _ in inflection_points(C, "multiplicity")}
    # restriction to y = 1 is -x^3, no contact at the line's point at infinity
    r = line_restriction(C, ProjLine.of(F7, 0, 1, -1))
    assert r.poly.coeffs == (0, 0, 0, 6)
    assert r.direction_multiplicity == 0
    assert gauss_fiber_census(C, 1) == {1: 12}


def test_points_and_singularities_match_brute_force():
    rng = random.Random(5)
    for q, m in [(5, 3), (7, 4), (9, 3), (4, 3)]:
        C = random_curve(rng, q, m)
        ctx = C.ctx
        brute = [P.index for P in enumerate_points(ctx) if C.F.eval(P.coords) == 0]
        assert list(C.rational_point_indices()) == brute
        sing = {P.index for P in enumerate_points(ctx) if C.F.eval(P.coords) == 0 and not any(
            d.eval(P.coords) for d in C.partials)}
        assert {P.index for P in singular_points(C)} == sing


def test_cusp_is_singular_and_excluded_from_flexes():
    F7 = field_of_order(7)
    C = y2_minus(F7, [0, 0, 0, 1])  # y^2 = x^3, cusp at the origin
    assert [P.coords for P in singular_points(C)] == [(0, 0, 1)]
    assert (0, 0, 1) not in {P.coords for P, _ in inflection_points(C)}


@pytest.mark.parametrize("seed,q,m", [(1, 7, 3), (2, 7, 4), (3, 11, 4), (4, 9, 3), (6, 13, 5)])
def test_scan_matches_pointwise_tangent_oracle(seed, q, m):
    C = random_curve(random.Random(seed), q, m)
    ctx = C.ctx
    expected: dict = {}
    for i in C.rational_point_indices():
        P = plane_of(ctx).triple(i)
        if C.is_singular_at(P):
            continue
        T = canonical(ctx, C.gradient(P))
        k = oracle_contact(C, T, P)
        expected.setdefault(T, []).append((P, k))
    got = {r.line.coords: sorted((P.coords, k) for P, k in r.contacts) for r in scan_tangencies(C, 1)}
    assert got == {T: sorted(v) for T, v in expected.items()}
    for r in scan_tangencies(C, 1):
        assert validate_record(C, r)


@pytest.mark.parametrize("seed,q,m", [(11, 5, 3), (12, 7, 3), (13, 7, 4)])
def test_contact_multiplicity_on_random_lines(seed, q, m):
    rng = random.Random(seed)
    C = random_curve(rng, q, m)
    ctx = C.ctx
    pl = plane_of(ctx)
    for _ in range(40):
        L = pl.triple(rng.randrange(pl.size))
        for i in pl.points_on(pl.index(L)):
            P = pl.triple(i)
            assert contact_multiplicity(C, L, P) == oracle_contact(C, L, P)


def test_hessian_requires_large_characteristic():
    F5 = field_of_order(5)
    C = y2_minus(F5, [1, 0, 0, 0, 0, 1])
    with pytest.raises(CurveError):
        hessian(C)
    # the multiplicity route still works
    assert isinstance(inflection_points(C), list)


def test_linear_component_warning():
    F7 = field_of_order(7)
    # (y - x)(y^2 - x^3 - 1)
    g = BivarPoly(F7, {(0, 1): 1, (1, 0): 6}) * BivarPoly(F7, {(0, 2): 1, (3, 0): 6, (0, 0): 6})
    with pytest.warns(CurveWarning):
        C = curve_from_affine(g)
    assert [L.coords for L in linear_components(C)] == [canonical(F7, (1, 6, 0))]
    # the component line carries infinite contact, so it is no tangency record
    assert (canonical(F7, (1, 6, 0))) not in {r.line.coords for r in scan_tangencies(C)}


def test_bad_curves_rejected():
    F7 = field_of_order(7)
    with pytest.raises(CurveError):
        PlaneCurve(HomogPoly(F7, {}))
    with pytest.raises(CurveError):
        PlaneCurve(HomogPoly(F7, {(2, 0, 0): 1, (0, 1, 1): 1}))


def test_tangent_line_and_gauss_map_agree():
    F11 = field_of_order(11)
    C = y2_minus(F11, [1, 1, 0, 1])
    for P, _ in [(P, 0) for P in rational_points(C)[0]]:
        T = tangent_line_at(C, P)
        assert dot(F11, T.coords, P.coords) == 0
        assert contact_multiplicity(C, T.coords, P.coords) >= 2


def test_bitangents_over_extension_are_gauss_collisions():
    # Fermat quartic in characteristic 7: smooth, 28 bitangents over the algebraic closure
    F7 = field_of_order(7)
    C = PlaneCurve(HomogPoly(F7, {(4, 0, 0): 1, (0, 4, 0): 1, (0, 0, 4): 1}))
    for e in (1, 2):
        bit = {r.line.coords for r in rational_bitangents(C, e)}
        fib = {img for img, pts in gauss_fibers(C, e).items() if len(pts) >= 2}
        assert bit == fib
    assert len(rational_bitangents(C, 2)) <= 28


def test_base_change_keeps_rational_points():
    F5 = field_of_order(5)
    C = y2_minus(F5, [1, 2, 0, 1])
    big = C.base_change(2)
    inside = {canonical(big.ctx, P.coords) for P in enumerate_points(F5) if C.F.eval(P.coords) == 0}
    pts = {plane_of(big.ctx).triple(i) for i in big.rational_point_indices()}
    assert inside <= pts
    assert format_sparse(big.F).count(";") == format_sparse(C.F).count(";")
