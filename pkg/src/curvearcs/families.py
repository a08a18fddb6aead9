"""Hyperelliptic and Artin-Schreier families with their hypothesis checklists.

Violated hypotheses never raise: the spec is marked inadmissible and the
curve is still built, so the pipeline can be run on it (its output is then
not backed by the existence theorem).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .curve import PlaneCurve, curve_from_affine
from .gf import FieldCtx, _split_prime_power, field_of_order, first_nonsquare
from .poly import (
    BivarPoly,
    UniPoly,
    format_unipoly,
    in_pth_powers,
    is_artin_schreier_degenerate,
    is_squarefree,
    root_multiplicities,
)

KINDS = ("hyperelliptic", "hyperelliptic_twist", "artin_schreier")


class FamilyError(ValueError):
    pass


@dataclass
class FamilySpec:
    kind: str
    ctx: FieldCtx
    f: UniPoly
    xi: int | None = None
    m: int = 0
    genus: int | None = None
    expected: dict = field(default_factory=dict)
    checklist: dict[str, bool] = field(default_factory=dict)

    @property
    def admissible(self) -> bool:
        return all(self.checklist.values())

    def failed(self) -> list[str]:
        return [k for k, ok in self.checklist.items() if not ok]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "field": self.ctx.spec,
            "f": format_unipoly(self.f),
            "xi": None if self.xi is None else self.ctx.format(self.xi),
            "m": self.m,
            "genus": self.genus,
            "expected": self.expected,
            "checklist": self.checklist,
            "admissible": self.admissible,
        }


def genus_hyperelliptic(m: int) -> int:
    if m < 3:
        raise FamilyError("m must be >= 3")
    return (m - 1) // 2 if m % 2 else (m - 2) // 2


def p_infinity_count_hyperelliptic(f: UniPoly, ctx: FieldCtx | None = None) -> int:
    """Places of y^2 = f(x) over x = infinity: 1 for odd degree, else 1 or 2 by the leading coefficient."""
    ctx = ctx or f.ctx
    if f.ctx != ctx:
        raise FamilyError("f is over a different field")
    if f.degree % 2:
        return 1
    return 2 if ctx.is_square(f.lead()) else 1


def _check_f(f: UniPoly) -> None:
    if f.is_zero() or f.degree < 1:
        raise FamilyError("f must be a non-constant polynomial")


def _hyperelliptic_curve(f: UniPoly) -> PlaneCurve:
    ctx = f.ctx
    terms = {(0, 2): 1}
    for i, c in enumerate(f.coeffs):
        if c:
            terms[(i, 0)] = ctx.add(terms.get((i, 0), 0), ctx.neg(c))
    return curve_from_affine(BivarPoly(ctx, terms))


def hyperelliptic(ctx: FieldCtx, f: UniPoly, xi: int | None = None) -> tuple[PlaneCurve, FamilySpec]:
    """The curve y^2 = f(x), or its twist y^2 = xi f(x) when xi is given."""
    if f.ctx != ctx:
        raise FamilyError("f is over a different field")
    _check_f(f)
    m = f.degree
    p = ctx.p
    check = {
        "p odd": p % 2 == 1,
        "3 <= m < p": 3 <= m < p,
        "f squarefree": is_squarefree(f),
    }
    g = genus_hyperelliptic(m) if m >= 3 else None
    target = f
    if xi is not None:
        if xi == 0 or ctx.is_square(xi):
            raise FamilyError(f"twist scalar {ctx.format(xi)} is a square")
        check["xi non-square"] = True
        target = f * xi
    kind = "hyperelliptic" if xi is None else "hyperelliptic_twist"
    expected = {"p_infinity": p_infinity_count_hyperelliptic(target)}
    spec = FamilySpec(kind, ctx, f, xi, m, g, expected, check)
    return _hyperelliptic_curve(target), spec


def _odd_prime_power(q: int) -> tuple[int, int]:
    p, k = _split_prime_power(q)
    if p == 2:
        raise FamilyError("q must be odd")
    return p, k


def _xm_plus_1(ctx: FieldCtx, m: int) -> UniPoly:
    return UniPoly(ctx, [1] + [0] * (m - 1) + [1])


def maximal_example(q: int, m: int) -> tuple[PlaneCurve, int]:
    """y^2 = x^m + 1 over F_{q^2} and its predicted degree-one place count q^2+1+2gq."""
    _odd_prime_power(q)
    if m < 3 or (q + 1) % m:
        raise FamilyError(f"need m >= 3 dividing q+1, got m={m}, q={q}")
    ctx = field_of_order(q * q)
    curve, _ = hyperelliptic(ctx, _xm_plus_1(ctx, m))
    g = genus_hyperelliptic(m)
    return curve, q * q + 1 + 2 * g * q


def twisted_example(q: int, m: int, xi: int | None = None) -> tuple[PlaneCurve, int]:
    """y^2 = xi (x^m + 1) over F_{q^2} with the quoted affine count q^2 - (1+2gq-#P) + 2m.

    #P is the number of places at infinity of the untwisted maximal curve.
    The quoted count is not what enumeration gives; see
    :func:`twisted_affine_count` for the value implied by the maximal count.
    """
    _odd_prime_power(q)
    if m < 3 or (q + 1) % m:
        raise FamilyError(f"need m >= 3 dividing q+1, got m={m}, q={q}")
    ctx = field_of_order(q * q)
    if xi is None:
        xi = first_nonsquare(ctx)
    f = _xm_plus_1(ctx, m)
    curve, _ = hyperelliptic(ctx, f, xi)
    g = genus_hyperelliptic(m)
    pinf = p_infinity_count_hyperelliptic(f)
    return curve, q * q - (1 + 2 * g * q - pinf) + 2 * m


def twisted_affine_count(q: int, m: int) -> int:
    """Affine count of the twist forced by the maximal count.

    Every x contributes 2 affine points in total to the curve and its
    twist together, so twist = 2q^2 - (q^2 + 1 + 2gq - #P).
    """
    g = genus_hyperelliptic(m)
    pinf = 2 if m % 2 == 0 else 1  # leading coefficient 1 is a square
    return q * q - 1 - 2 * g * q + pinf


def affine_count(curve: PlaneCurve) -> int:
    q = curve.ctx.q
    return sum(1 for i in curve.rational_point_indices() if i < q * q)


def degree_one_count(curve: PlaneCurve, f: UniPoly) -> int:
    """Affine points plus places at infinity of y^2 = f(x) (nonsingular affine part assumed)."""
    return affine_count(curve) + p_infinity_count_hyperelliptic(f)


def points_on_x_axis(curve: PlaneCurve) -> list[int]:
    """Rational affine points with y = 0, as plane indices."""
    q = curve.ctx.q
    return [i for i in curve.rational_point_indices() if i < q * q and i % q == 0]


# -- Artin-Schreier ------------------------------------------------------------------------


def artin_schreier(ctx: FieldCtx, f: UniPoly) -> tuple[PlaneCurve, FamilySpec]:
    """The curve y^p - y = f(x)."""
    if f.ctx != ctx:
        raise FamilyError("f is over a different field")
    if f.is_zero():
        raise FamilyError("f must be nonzero")
    p = ctx.p
    m = f.degree
    sqfree = m >= 1 and is_squarefree(f)
    check = {
        "p odd": p % 2 == 1,
        "m > p": m > p,
        "f squarefree": sqfree,
        "f' not in F_q[x^p]": not in_pth_powers(f.derivative()),
        "f != z^p - z": not is_artin_schreier_degenerate(f),
    }
    terms = {(0, p): 1, (0, 1): ctx.neg(1)}
    for i, c in enumerate(f.coeffs):
        if c:
            terms[(i, 0)] = ctx.add(terms.get((i, 0), 0), ctx.neg(c))
    curve = curve_from_affine(BivarPoly(ctx, terms))
    expected = {"inflection_tangent_bound": max(m - 2, 0) * p}
    return curve, FamilySpec("artin_schreier", ctx, f, None, m, None, expected, check)


def as_inflection_x(spec: FamilySpec) -> list[int]:
    """F_q-roots of f'': the only x-coordinates an affine inflection point can have."""
    if spec.kind != "artin_schreier":
        raise FamilyError("not an Artin-Schreier spec")
    if not spec.admissible:
        raise FamilyError(f"inadmissible spec: {spec.failed()}")
    f2 = spec.f.derivative().derivative()
    if f2.is_zero():
        raise RuntimeError("f'' vanishes identically for an admissible f")
    roots, _ = root_multiplicities(f2)
    return sorted(roots)
