"""Plane projective curves F(X0, X1, X2) = 0 over F_q.

Rational points, singularities, Hessian, inflection points, restrictions
to lines, tangency scans (bitangents and inflection tangents) and the
Gauss map.  Contacts are always reported at nonsingular points; a
singular point meets every line with multiplicity >= 2 and carries no
tangency information.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .gf import FieldCtx, extension
from .plane import (
    ProjLine,
    ProjPoint,
    Triple,
    canonical,
    dot,
    index_triple,
    plane_of,
)
from .poly import (
    BivarPoly,
    HomogPoly,
    UniPoly,
    dehomogenize,
    gcd_univar,
    homogenize,
    root_multiplicities,
)


class CurveError(ValueError):
    pass


class SingularPointError(CurveError):
    pass


class CurveWarning(UserWarning):
    pass


class PlaneCurve:
    """A plane curve of degree m >= 3 with cached partial derivatives.

    ``screen=False`` skips the linear-factor and point-count sanity checks
    (used for base changes to large extension fields).
    """

    def __init__(self, F: HomogPoly, *, screen: bool = True):
        if F.is_zero():
            raise CurveError("zero polynomial does not define a curve")
        if F.degree < 3:
            raise CurveError(f"curve degree must be >= 3, got {F.degree}")
        self.F = F
        self.ctx: FieldCtx = F.ctx
        self.m: int = F.degree
        self.g: BivarPoly = dehomogenize(F, 2)
        self.partials = tuple(F.derivative(i) for i in range(3))
        self.warnings: list[str] = []
        self._base_changes: dict[int, PlaneCurve] = {}
        self._points: tuple[int, ...] | None = None
        self._singular: dict[int, bool] | None = None
        if screen:
            self._screen()

    def __repr__(self):
        from .poly import format_sparse

        return f"PlaneCurve(F_{self.ctx.q}, m={self.m}, F={format_sparse(self.F)!r})"

    # -- sanity screen ----------------------------------------------------------

    def _screen(self) -> None:
        comps = linear_components(self)
        if comps:
            self._warn(f"curve has rational linear factor(s): {[str(L) for L in comps]}")
        n = len(self.rational_point_indices())
        pa = (self.m - 1) * (self.m - 2) // 2
        if abs(n - (self.ctx.q + 1)) > 2 * pa * math.sqrt(self.ctx.q):
            self._warn(
                f"{n} rational points is outside the Hasse-Weil corridor "
                f"q+1 +- 2*{pa}*sqrt(q); the curve is probably not absolutely irreducible"
            )

    def _warn(self, msg: str) -> None:
        self.warnings.append(msg)
        warnings.warn(msg, CurveWarning, stacklevel=3)

    # -- evaluation --------------------------------------------------------------

    def value(self, P: Triple) -> int:
        return self.F.eval(P)

    def gradient(self, P: Triple) -> Triple:
        return tuple(d.eval(P) for d in self.partials)

    def is_singular_at(self, P: Triple) -> bool:
        return self.value(P) == 0 and not any(self.gradient(P))

    def base_change(self, e: int) -> "PlaneCurve":
        """The same curve over F_{q^e} (coefficients embedded)."""
        if e == 1:
            return self
        if e not in self._base_changes:
            big, table = extension(self.ctx, e)
            self._base_changes[e] = PlaneCurve(self.F.map_coeffs(big, table), screen=False)
        return self._base_changes[e]

    # -- rational points (vectorised scan) ----------------------------------------

    def rational_point_indices(self) -> tuple[int, ...]:
        """Plane indices of all F_q-points on the curve, ascending."""
        if self._points is None:
            self._points = self._scan_points()
        return self._points

    def _scan_points(self) -> tuple[int, ...]:
        q = self.ctx.q
        xs = np.arange(q, dtype=np.int64)
        X, Y = np.meshgrid(xs, xs, indexing="ij")
        aff = np.flatnonzero(self.g.eval_grid(X.ravel(), Y.ravel()) == 0)
        ones = np.ones(q, dtype=np.int64)
        zeros = np.zeros(q, dtype=np.int64)
        inf = np.flatnonzero(self.F.eval_grid(xs, ones, zeros) == 0) + q * q
        out = [int(i) for i in aff] + [int(i) for i in inf]
        if self.F.eval((1, 0, 0)) == 0:
            out.append(q * q + q)
        return tuple(out)

    def singular_flags(self) -> dict[int, bool]:
        """index -> is singular, for every rational point."""
        if self._singular is None:
            self._singular = self._scan_singular()
        return self._singular

    def _scan_singular(self) -> dict[int, bool]:
        idx = self.rational_point_indices()
        if not idx:
            return {}
        q = self.ctx.q
        trip = np.array([index_triple(q, i) for i in idx], dtype=np.int64)
        grads = [d.eval_grid(trip[:, 0], trip[:, 1], trip[:, 2]) for d in self.partials]
        sing = (grads[0] == 0) & (grads[1] == 0) & (grads[2] == 0)
        return {i: bool(s) for i, s in zip(idx, sing)}


def curve_create(F: HomogPoly, ctx: FieldCtx | None = None) -> PlaneCurve:
    if ctx is not None and F.ctx != ctx:
        raise CurveError("polynomial is over a different field")
    return PlaneCurve(F)


def curve_from_affine(g: BivarPoly, m: int | None = None) -> PlaneCurve:
    return PlaneCurve(homogenize(g, m))


# -- points and singularities ------------------------------------------------------


def rational_points(curve: PlaneCurve) -> tuple[list[ProjPoint], list[ProjPoint]]:
    """(affine points, points at infinity), each in plane order."""
    q = curve.ctx.q
    aff, inf = [], []
    for i in curve.rational_point_indices():
        P = ProjPoint(index_triple(q, i), curve.ctx)
        (aff if i < q * q else inf).append(P)
    return aff, inf


def singular_points(curve: PlaneCurve, ext_degree: int = 1) -> list[ProjPoint]:
    """Singular points defined over F_{q^e}, by exhaustive scan of PG(2, q^e)."""
    if not 1 <= ext_degree <= 3:
        raise CurveError("extension degree must be 1, 2 or 3")
    bc = curve.base_change(ext_degree)
    q = bc.ctx.q
    return [ProjPoint(index_triple(q, i), bc.ctx) for i, s in bc.singular_flags().items() if s]


def nonsingular_rational_points(curve: PlaneCurve) -> list[int]:
    return [i for i, s in curve.singular_flags().items() if not s]


# -- Hessian and inflection points ------------------------------------------------------


def hessian(curve: PlaneCurve) -> HomogPoly:
    """det of the 3x3 matrix of second partials of F (requires p > m)."""
    if curve.ctx.p <= curve.m:
        raise CurveError(
            f"Hessian criterion needs p > m (p={curve.ctx.p}, m={curve.m}); "
            "use the multiplicity method"
        )
    d = [[curve.partials[i].derivative(j) for j in range(3)] for i in range(3)]
    (a, b, c), (dd, e, f), (g, h, i) = d
    return a * (e * i - f * h) - b * (dd * i - f * g) + c * (dd * h - e * g)


def inflection_points(curve: PlaneCurve, method: str = "auto") -> list[tuple[ProjPoint, str]]:
    """Nonsingular rational flexes as (point, method) pairs.

    ``method`` is ``"hessian"`` (p > m only), ``"multiplicity"`` (tangent
    contact order >= 3) or ``"auto"`` (Hessian when allowed).
    """
    if method == "auto":
        method = "hessian" if curve.ctx.p > curve.m else "multiplicity"
    q = curve.ctx.q
    pts = nonsingular_rational_points(curve)
    out = []
    if method == "hessian":
        H = hessian(curve)
        for i in pts:
            if H.eval(index_triple(q, i)) == 0:
                out.append((ProjPoint(index_triple(q, i), curve.ctx), "hessian"))
    elif method == "multiplicity":
        for i in pts:
            P = index_triple(q, i)
            mult = contact_multiplicity(curve, tangent_triple(curve, P), P)
            if mult is None or mult >= 3:
                out.append((ProjPoint(P, curve.ctx), "multiplicity"))
    else:
        raise ValueError(f"unknown method {method!r}")
    return out


# -- lines through the curve --------------------------------------------------------------


@dataclass(frozen=True)
class LineChart:
    """Parameterisation s -> s*direction + origin of a line.

    The direction point is the one point not reached by a finite s; for an
    affine line it is the line's point at infinity.
    """

    line: Triple
    origin: Triple
    direction: Triple
    ctx: FieldCtx = field(repr=False)

    def point(self, s: int) -> Triple:
        c = self.ctx
        return canonical(c, tuple(c.add(c.mul(s, a), b) for a, b in zip(self.direction, self.origin)))

    def param(self, P: Triple) -> int | None:
        """Parameter of a canonical point on the line (None for the direction point)."""
        a0, a1, a2 = self.line
        if a0 == 0 and a1 == 0:
            return P[0] if P[1] == 1 else None
        if P[2] == 0:
            return None
        return P[0] if a1 else P[1]


def line_chart(ctx: FieldCtx, line: Triple) -> LineChart:
    a0, a1, a2 = line
    if a1:
        inv = ctx.inv(a1)
        return LineChart(line, (0, ctx.neg(ctx.mul(a2, inv)), 1), (1, ctx.neg(ctx.mul(a0, inv)), 0), ctx)
    if a0:
        return LineChart(line, (ctx.neg(ctx.div(a2, a0)), 0, 1), (0, 1, 0), ctx)
    return LineChart(line, (0, 1, 0), (1, 0, 0), ctx)


@dataclass(frozen=True)
class Restriction:
    poly: UniPoly
    chart: LineChart
    direction_multiplicity: int  # contact order at chart.direction


def _restrict_coeffs(curve: PlaneCurve, chart: LineChart) -> list[int]:
    """Coefficients of u(s) = F(s*direction + origin)."""
    ctx = curve.ctx
    m = curve.m
    # linear forms per variable: origin_i + direction_i * s
    lin = [[o, d] for o, d in zip(chart.origin, chart.direction)]
    powers = []
    for L in lin:
        row = [[1]]
        for _ in range(m):
            prev = row[-1]
            nxt = [0] * (len(prev) + 1)
            for k, c in enumerate(prev):
                if c:
                    nxt[k] = ctx.add(nxt[k], ctx.mul(c, L[0]))
                    nxt[k + 1] = ctx.add(nxt[k + 1], ctx.mul(c, L[1]))
            row.append(nxt)
        powers.append(row)
    out = [0] * (m + 1)
    for e, c in curve.F.terms.items():
        t = [c]
        for var, k in enumerate(e):
            if k:
                pk = powers[var][k]
                if len(pk) == 1 or not any(pk[1:]):
                    s0 = pk[0]
                    t = [ctx.mul(x, s0) for x in t]
                else:
                    t = _conv(ctx, t, pk)
        for k, v in enumerate(t):
            if v:
                out[k] = ctx.add(out[k], v)
    return out


def _conv(ctx, a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = ctx.add(out[i + j], ctx.mul(x, y))
    return out


def restriction_of(curve: PlaneCurve, line: Triple) -> Restriction | None:
    """Restriction to a line given as a canonical triple; None if the line is a component."""
    chart = line_chart(curve.ctx, line)
    u = UniPoly(curve.ctx, _restrict_coeffs(curve, chart))
    if u.is_zero():
        return None
    return Restriction(u, chart, curve.m - u.degree)


def line_restriction(curve: PlaneCurve, line: ProjLine) -> Restriction:
    """The univariate polynomial cut out on ``line``.

    Root multiplicities of ``poly`` are intersection multiplicities at
    ``chart.point(s)``; ``direction_multiplicity`` is the contact order at
    the off-chart point.  For y = t x + c the parameter is x, for x = c it
    is y, and on the line at infinity it is X0/X1.
    """
    r = restriction_of(curve, line.coords)
    if r is None:
        raise CurveError(f"line {line} is a component of the curve")
    return r


def multiplicity_at(r: Restriction, P: Triple) -> int:
    s = r.chart.param(P)
    if s is None:
        return r.direction_multiplicity
    ctx = r.poly.ctx
    lin = UniPoly(ctx, [ctx.neg(s), 1])
    k, g = 0, r.poly
    while True:
        quo, rem = divmod(g, lin)
        if not rem.is_zero():
            return k
        g, k = quo, k + 1


def contact_multiplicity(curve: PlaneCurve, line: Triple, P: Triple) -> int | None:
    """Intersection multiplicity of the line and curve at P (None: line is a component)."""
    r = restriction_of(curve, line)
    if r is None:
        return None
    return multiplicity_at(r, P)


def linear_components(curve: PlaneCurve) -> list[ProjLine]:
    """Rational lines contained in the curve."""
    pl = plane_of(curve.ctx)
    on = np.zeros(pl.size, dtype=bool)
    idx = list(curve.rational_point_indices())
    if not idx:
        return []
    on[idx] = True
    full = np.flatnonzero(on[pl.incidence].all(axis=1))
    out = []
    for j in full:
        t = pl.triple(int(j))
        if restriction_of(curve, t) is None:
            out.append(ProjLine(t, curve.ctx))
    return out


# -- tangents and the Gauss map --------------------------------------------------------------


def tangent_triple(curve: PlaneCurve, P: Triple) -> Triple:
    if curve.value(P) != 0:
        raise CurveError(f"point {P} is not on the curve")
    grad = curve.gradient(P)
    if not any(grad):
        raise SingularPointError(f"point {P} is singular")
    return canonical(curve.ctx, grad)


def tangent_line_at(curve: PlaneCurve, P: ProjPoint) -> ProjLine:
    return ProjLine(tangent_triple(curve, P.coords), curve.ctx)


def gauss_map(curve: PlaneCurve, P: ProjPoint) -> ProjPoint:
    """[F0(P) : F1(P) : F2(P)] as a point of the dual plane."""
    return ProjPoint(tangent_triple(curve, P.coords), curve.ctx)


def gauss_fibers(curve: PlaneCurve, ext_degree: int = 1) -> dict[Triple, list[Triple]]:
    """Nonsingular F_{q^e}-points grouped by their Gauss image."""
    bc = curve.base_change(ext_degree)
    q = bc.ctx.q
    idx = [i for i, s in bc.singular_flags().items() if not s]
    fibers: dict[Triple, list[Triple]] = {}
    if not idx:
        return fibers
    trip = np.array([index_triple(q, i) for i in idx], dtype=np.int64)
    grads = np.stack([d.eval_grid(trip[:, 0], trip[:, 1], trip[:, 2]) for d in bc.partials], axis=1)
    for P, gvec in zip(trip.tolist(), grads.tolist()):
        fibers.setdefault(canonical(bc.ctx, gvec), []).append(tuple(P))
    return fibers


def gauss_fiber_census(curve: PlaneCurve, ext_degree: int = 1) -> dict[int, int]:
    """Histogram {fiber size: number of Gauss images with that fiber}."""
    hist: dict[int, int] = {}
    for pts in gauss_fibers(curve, ext_degree).values():
        hist[len(pts)] = hist.get(len(pts), 0) + 1
    return dict(sorted(hist.items()))


# -- tangency scans ------------------------------------------------------------------------


@dataclass(frozen=True)
class TangencyRecord:
    """A line with its nonsingular contacts of multiplicity >= 2."""

    line: ProjLine
    contacts: tuple[tuple[ProjPoint, int], ...]
    extension_degree: int = 1

    @property
    def is_bitangent(self) -> bool:
        return len(self.contacts) >= 2

    @property
    def is_inflection_tangent(self) -> bool:
        return any(k >= 3 for _, k in self.contacts)

    @property
    def kinds(self) -> tuple[str, ...]:
        out = []
        if self.is_bitangent:
            out.append("bitangent")
        if self.is_inflection_tangent:
            out.append("inflection")
        return tuple(out)


def _line_contacts(curve: PlaneCurve, line: Triple, e: int) -> list[tuple[Triple, int]] | None:
    """Nonsingular contacts (multiplicity >= 2) of a rational line, over F_{q^e}."""
    r = restriction_of(curve, line)
    if r is None:
        return None
    bc = curve.base_change(e)
    table = extension(curve.ctx, e)[1]
    u, chart = r.poly, r.chart
    contacts: list[tuple[Triple, int]] = []
    du = u.derivative()
    d = u if du.is_zero() else gcd_univar(u, du)
    if d.degree > 0:
        if e > 1:
            u = u.map_coeffs(bc.ctx, table)
            d = d.map_coeffs(bc.ctx, table)
            chart = LineChart(*(tuple(table[c] for c in t) for t in (chart.line, chart.origin, chart.direction)), bc.ctx)
        lifted = Restriction(u, chart, r.direction_multiplicity)
        for s in root_multiplicities(d)[0]:
            P = chart.point(s)
            k = multiplicity_at(lifted, P)
            if k >= 2 and not bc.is_singular_at(P):
                contacts.append((P, k))
    if r.direction_multiplicity >= 2:
        A = canonical(bc.ctx, tuple(table[c] for c in r.chart.direction))
        if not bc.is_singular_at(A):
            contacts.append((A, r.direction_multiplicity))
    return contacts


def scan_tangencies(curve: PlaneCurve, ext_degree: int = 1) -> list[TangencyRecord]:
    """Every line of PG(2, q) with a nonsingular contact of order >= 2 in F_{q^e}.

    Lines are in plane order; contacts within a record are in plane order
    of the (extension) plane.
    """
    ctx = curve.ctx
    pl = plane_of(ctx)
    big = extension(ctx, ext_degree)[0]
    out = []
    for j in range(pl.size):
        t = pl.triple(j)
        contacts = _line_contacts(curve, t, ext_degree)
        if not contacts:
            continue
        contacts.sort(key=lambda c: (c[0][2] == 0, c[0][2] == 0 and c[0][1] == 0, c[0]))
        recs = tuple((ProjPoint(P, big), k) for P, k in contacts)
        out.append(TangencyRecord(ProjLine(t, ctx), recs, ext_degree))
    return out


def rational_bitangents(curve: PlaneCurve, ext_degree: int = 1) -> list[TangencyRecord]:
    """Lines of PG(2, q^e) tangent at two or more nonsingular F_{q^e}-points."""
    if ext_degree not in (1, 2):
        raise CurveError("bitangent scans support e in {1, 2}")
    bc = curve.base_change(ext_degree)
    recs = [r for r in scan_tangencies(bc, 1) if r.is_bitangent]
    return [TangencyRecord(r.line, r.contacts, ext_degree) for r in recs]


def rational_inflection_tangents(curve: PlaneCurve) -> list[TangencyRecord]:
    """Rational lines meeting the curve with order >= 3 at a nonsingular rational point."""
    return [r for r in scan_tangencies(curve, 1) if r.is_inflection_tangent]


def validate_record(curve: PlaneCurve, rec: TangencyRecord) -> bool:
    """Recheck a record without the symbolic restriction.

    The restricted polynomial is rebuilt by Lagrange interpolation from
    values of F along the line, and each contact order is read off a
    Taylor shift.
    """
    bc = curve.base_change(rec.extension_degree)
    ctx = bc.ctx
    line = rec.line.coords
    if rec.line.ctx != ctx:
        table = extension(curve.ctx, rec.extension_degree)[1]
        line = tuple(table[c] for c in line)
    for P, k in rec.contacts:
        P = P.coords
        if bc.value(P) != 0 or dot(ctx, line, P) != 0 or bc.is_singular_at(P):
            return False
        if _independent_multiplicity(bc, line, P) != k:
            return False
    return True


def _independent_multiplicity(curve: PlaneCurve, line: Triple, P: Triple) -> int:
    ctx = curve.ctx
    m = curve.m
    # another point on the line, different from P
    chart = line_chart(ctx, line)
    Q = next(t for t in (canonical(ctx, chart.origin), canonical(ctx, chart.direction)) if t != P)
    # phi(t) = F(P + t Q): contact order at P is the t-adic valuation of phi
    if ctx.q <= m:
        raise CurveError("field too small for interpolation")
    ts = list(range(m + 1))
    vals = [curve.value(tuple(ctx.add(a, ctx.mul(t, b)) for a, b in zip(P, Q))) for t in ts]
    coeffs = _interpolate(ctx, ts, vals)
    for k, c in enumerate(coeffs):
        if c:
            return k
    return m + 1


def _interpolate(ctx: FieldCtx, xs, ys) -> list[int]:
    n = len(xs)
    out = [0] * n
    for i in range(n):
        basis = [1]
        denom = 1
        for j in range(n):
            if j == i:
                continue
            basis = _conv(ctx, basis, [ctx.neg(xs[j]), 1])
            denom = ctx.mul(denom, ctx.sub(xs[i], xs[j]))
        scale = ctx.div(ys[i], denom)
        for k, b in enumerate(basis):
            out[k] = ctx.add(out[k], ctx.mul(scale, b))
    return out

