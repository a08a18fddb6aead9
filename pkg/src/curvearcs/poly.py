"""Polynomials over a :class:`~curvearcs.gf.FieldCtx`.

``UniPoly`` is dense (constant first).  ``BivarPoly`` and ``HomogPoly`` are
sparse maps from exponent tuples to nonzero coefficient codes.  All values
are treated as immutable.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping, Sequence

import numpy as np

from .gf import FieldCtx, Fq


def _code(ctx: FieldCtx, c) -> int:
    if isinstance(c, Fq):
        if c.ctx != ctx:
            raise ValueError("coefficient from a different field")
        return c.value
    return int(c)


class UniPoly:
    """Dense univariate polynomial; ``coeffs[i]`` is the code of the x^i term."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs: Sequence[int]):
        c = [_code(ctx, a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.ctx = ctx
        self.coeffs = tuple(c)

    @classmethod
    def from_ints(cls, ctx: FieldCtx, ints: Sequence[int]) -> "UniPoly":
        """Integer coefficients read in the prime subfield (so -1 means p-1)."""
        return cls(ctx, [ctx.from_int(n) for n in ints])

    @classmethod
    def monomial(cls, ctx: FieldCtx, deg: int, coeff: int = 1) -> "UniPoly":
        return cls(ctx, [0] * deg + [coeff])

    @classmethod
    def x(cls, ctx: FieldCtx) -> "UniPoly":
        return cls(ctx, [0, 1])

    @property
    def degree(self) -> float | int:
        return len(self.coeffs) - 1 if self.coeffs else float("-inf")

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __eq__(self, other):
        return isinstance(other, UniPoly) and self.ctx == other.ctx and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ctx, self.coeffs))

    def __repr__(self):
        return f"UniPoly({format_unipoly(self)!r} over F_{self.ctx.q})"

    def __add__(self, other: "UniPoly") -> "UniPoly":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        add = self.ctx.add
        return UniPoly(self.ctx, [add(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)])

    def __neg__(self) -> "UniPoly":
        return UniPoly(self.ctx, [self.ctx.neg(c) for c in self.coeffs])

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other) -> "UniPoly":
        ctx = self.ctx
        if not isinstance(other, UniPoly):
            s = _code(ctx, other)
            return UniPoly(ctx, [ctx.mul(s, c) for c in self.coeffs])
        return UniPoly(ctx, _mul_lists(ctx, self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "UniPoly":
        out = UniPoly(self.ctx, [1])
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __divmod__(self, other: "UniPoly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        ctx = self.ctx
        r = list(self.coeffs)
        d = other.coeffs
        dd = len(d) - 1
        inv = ctx.inv(d[-1])
        qlen = max(len(r) - dd, 0)
        quo = [0] * qlen
        for i in range(len(r) - 1, dd - 1, -1):
            c = r[i]
            if c == 0:
                continue
            f = ctx.mul(c, inv)
            quo[i - dd] = f
            for j in range(dd + 1):
                r[i - dd + j] = ctx.sub(r[i - dd + j], ctx.mul(f, d[j]))
        return UniPoly(ctx, quo), UniPoly(ctx, r[:dd] if dd > 0 else [])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        return self * self.ctx.inv(self.lead())

    def __call__(self, a) -> int:
        return self.eval(a)

    def eval(self, a) -> int:
        ctx = self.ctx
        a = _code(ctx, a)
        acc = 0
        for c in reversed(self.coeffs):
            acc = ctx.add(ctx.mul(acc, a), c)
        return acc

    def eval_all(self, points=None) -> np.ndarray:
        """Values at every field element (or at the given code array)."""
        ctx = self.ctx
        xs = np.arange(ctx.q, dtype=np.int64) if points is None else np.asarray(points, dtype=np.int64)
        acc = np.zeros(xs.shape, dtype=np.int64)
        for c in reversed(self.coeffs):
            acc = ctx.vadd(ctx.vmul(acc, xs), c)
        return acc

    def derivative(self) -> "UniPoly":
        ctx = self.ctx
        return UniPoly(ctx, [ctx.mul(ctx.from_int(i), c) for i, c in enumerate(self.coeffs)][1:])

    def map_coeffs(self, ctx: FieldCtx, table: Sequence[int]) -> "UniPoly":
        return UniPoly(ctx, [table[c] for c in self.coeffs])


def _mul_lists(ctx: FieldCtx, a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    add, mul = ctx.add, ctx.mul
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = add(out[i + j], mul(x, y))
    return out


def derivative(poly, var: int = 0):
    """Formal (partial) derivative of any polynomial kind in this module."""
    if isinstance(poly, UniPoly):
        if var != 0:
            raise ValueError("univariate polynomials have one variable")
        return poly.derivative()
    return poly.derivative(var)


def gcd_univar(a: UniPoly, b: UniPoly) -> UniPoly:
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd of two zero polynomials")
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def is_squarefree(f: UniPoly) -> bool:
    if f.is_zero():
        raise ValueError("zero polynomial")
    df = f.derivative()
    if df.is_zero():
        # f is a p-th power (or a constant)
        return f.degree == 0
    return gcd_univar(f, df).degree == 0


def root_multiplicities(f: UniPoly, candidates=None) -> tuple[dict[int, int], int]:
    """Exact multiplicity of every root of f in its field, by exhaustive scan.

    Returns ``(mults, residual_degree)`` where residual_degree is the degree
    mass of roots lying outside the field.  ``candidates`` restricts the
    scan to a subset of element codes.
    """
    if f.is_zero():
        raise ValueError("zero polynomial")
    vals = f.eval_all(candidates)
    pts = np.arange(f.ctx.q) if candidates is None else np.asarray(candidates)
    roots = [int(r) for r in pts[vals == 0]]
    mults = {}
    g = f
    for r in roots:
        lin = UniPoly(f.ctx, [f.ctx.neg(r), 1])
        k = 0
        while True:
            quo, rem = divmod(g, lin)
            if not rem.is_zero():
                break
            g = quo
            k += 1
        mults[r] = k
    return mults, g.degree


def in_pth_powers(f: UniPoly) -> bool:
    p = f.ctx.p
    return all(c == 0 or i % p == 0 for i, c in enumerate(f.coeffs))


def is_artin_schreier_degenerate(f: UniPoly, p: int | None = None) -> bool:
    """True iff f = z^p - z for some polynomial z over the same field.

    Leading terms are peeled greedily: the top term of z is the p-th root
    of the top term of f, which forces the rest.
    """
    ctx = f.ctx
    if p is not None and p != ctx.p:
        raise ValueError("p must be the field characteristic")
    p = ctx.p
    while f.degree > 0:
        d = f.degree
        if d % p:
            return False
        c = ctx.frobenius_root(f.lead())
        t = UniPoly.monomial(ctx, d // p, c)
        f = f - (t ** p - t)
    a = f.coeffs[0] if f.coeffs else 0
    return any(ctx.sub(ctx.pow(b, p), b) == a for b in range(ctx.q))


# -- sparse multivariate -------------------------------------------------------


class SparsePoly:
    """Sparse polynomial in ``nvars`` variables: {exponent tuple: code}."""

    nvars = 0
    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: FieldCtx, terms: Mapping[tuple[int, ...], int] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean = {}
        for exps, c in items:
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.nvars:
                raise ValueError(f"expected {self.nvars} exponents, got {exps}")
            c = _code(ctx, c)
            if c:
                prev = clean.get(exps, 0)
                s = ctx.add(prev, c)
                if s:
                    clean[exps] = s
                else:
                    clean.pop(exps, None)
        self.ctx = ctx
        self.terms = dict(sorted(clean.items(), key=lambda t: (-sum(t[0]), tuple(-e for e in t[0]))))

    def _new(self, terms):
        return type(self)(self.ctx, terms)

    @property
    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return type(self) is type(other) and self.ctx == other.ctx and self.terms == other.terms

    def __hash__(self):
        return hash((self.ctx, tuple(self.terms.items())))

    def __repr__(self):
        return f"{type(self).__name__}({format_sparse(self)!r})"

    def __add__(self, other):
        out = dict(self.terms)
        add = self.ctx.add
        for e, c in other.terms.items():
            out[e] = add(out.get(e, 0), c)
        return self._new(out)

    def __neg__(self):
        return self._new({e: self.ctx.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        ctx = self.ctx
        if not isinstance(other, SparsePoly):
            s = _code(ctx, other)
            return self._new({e: ctx.mul(s, c) for e, c in self.terms.items()})
        out: dict[tuple[int, ...], int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = ctx.add(out.get(e, 0), ctx.mul(c1, c2))
        return self._new(out)

    __rmul__ = __mul__

    def derivative(self, var: int):
        if not 0 <= var < self.nvars:
            raise ValueError(f"variable index {var} out of range")
        ctx = self.ctx
        out = {}
        for e, c in self.terms.items():
            if e[var] % ctx.p == 0:
                continue
            ne = list(e)
            ne[var] -= 1
            out[tuple(ne)] = ctx.mul(ctx.from_int(e[var]), c)
        return self._new(out)

    def eval(self, point: Sequence) -> int:
        ctx = self.ctx
        point = [_code(ctx, v) for v in point]
        if len(point) != self.nvars:
            raise ValueError("arity mismatch")
        acc = 0
        for e, c in self.terms.items():
            t = c
            for v, k in zip(point, e):
                if k:
                    t = ctx.mul(t, ctx.pow(v, k))
            acc = ctx.add(acc, t)
        return acc

    __call__ = eval

    def eval_grid(self, *coords: np.ndarray) -> np.ndarray:
        """Vectorised evaluation; each coordinate is an int64 code array."""
        ctx = self.ctx
        coords = np.broadcast_arrays(*[np.asarray(a, dtype=np.int64) for a in coords])
        acc = np.zeros(coords[0].shape, dtype=np.int64)
        cache: dict[tuple[int, int], np.ndarray] = {}

        def power(i, k):
            if (i, k) not in cache:
                cache[(i, k)] = coords[i] if k == 1 else ctx.vmul(power(i, k - 1), coords[i])
            return cache[(i, k)]

        for e, c in self.terms.items():
            t = np.full(coords[0].shape, c, dtype=np.int64)
            for i, k in enumerate(e):
                if k:
                    t = ctx.vmul(t, power(i, k))
            acc = ctx.vadd(acc, t)
        return acc

    def map_coeffs(self, ctx: FieldCtx, table: Sequence[int]):
        return type(self)(ctx, {e: table[c] for e, c in self.terms.items()})


class BivarPoly(SparsePoly):
    """Affine polynomial g(x, y)."""

    nvars = 2


class HomogPoly(SparsePoly):
    """Homogeneous form F(X0, X1, X2); every term has the same total degree."""

    nvars = 3

    def __init__(self, ctx, terms=()):
        super().__init__(ctx, terms)
        degs = {sum(e) for e in self.terms}
        if len(degs) > 1:
            raise ValueError(f"terms of mixed degree {sorted(degs)}")

    @property
    def degree(self) -> int:
        return self.total_degree


def homogenize(g: BivarPoly, m: int | None = None) -> HomogPoly:
    """g(x, y) -> X2^m g(X0/X2, X1/X2)."""
    d = g.total_degree
    if m is None:
        m = d
    if m < d:
        raise ValueError(f"target degree {m} below deg g = {d}")
    return HomogPoly(g.ctx, {(i, j, m - i - j): c for (i, j), c in g.terms.items()})


def dehomogenize(F: HomogPoly, chart: int = 2) -> BivarPoly:
    """Set X_chart = 1; the remaining variables keep their order."""
    keep = [i for i in range(3) if i != chart]
    return BivarPoly(F.ctx, [((e[keep[0]], e[keep[1]]), c) for e, c in F.terms.items()])


# -- text formats --------------------------------------------------------------


def format_sparse(poly: SparsePoly) -> str:
    """``c:i,j[,k];...`` with coefficients in the field's element notation."""
    ctx = poly.ctx
    return ";".join(f"{ctx.format(c)}:{','.join(map(str, e))}" for e, c in poly.terms.items())


def parse_sparse(ctx: FieldCtx, text: str, kind=None) -> SparsePoly:
    terms = []
    for chunk in text.replace("\n", ";").split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            c, exps = chunk.split(":")
            e = tuple(int(t) for t in exps.split(","))
        except ValueError as exc:
            raise ValueError(f"malformed monomial {chunk!r}") from exc
        terms.append((e, ctx.parse(c)))
    if kind is None:
        n = {len(e) for e, _ in terms}
        if len(n) != 1:
            raise ValueError("monomials with inconsistent arity")
        kind = HomogPoly if n.pop() == 3 else BivarPoly
    return kind(ctx, terms)


def format_unipoly(f: UniPoly, var: str = "x") -> str:
    ctx = f.ctx
    if f.is_zero():
        return "0"
    parts = []
    for i in range(len(f.coeffs) - 1, -1, -1):
        c = f.coeffs[i]
        if not c:
            continue
        cs = ctx.format(c)
        if "." in cs:
            cs = f"[{cs}]"
        if i == 0:
            parts.append(cs)
        else:
            mon = var if i == 1 else f"{var}^{i}"
            parts.append(mon if c == 1 else f"{cs}*{mon}")
    return " + ".join(parts)


_TERM_RE = re.compile(r"([+-]?)\s*(\[[\d.]+\]|\d+)?\s*\*?\s*(x(?:\s*\^\s*(\d+))?)?")


def parse_unipoly(ctx: FieldCtx, text: str, var: str = "x") -> UniPoly:
    """Parse expressions such as ``x^3+1``, ``2x^5 - x + 4`` or ``[1.2]*x^2``.

    Integer coefficients live in the prime subfield; bracketed dotted
    digits give a general element.
    """
    s = text.replace(" ", "").replace(var, "x").replace("**", "^")
    if not s:
        raise ValueError("empty polynomial")
    coeffs: dict[int, int] = {}
    pos = 0
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial {text!r} near {s[pos:]!r}")
        sign, c, mon, e = m.groups()
        if c is None and mon is None:
            raise ValueError(f"cannot parse polynomial {text!r} near {s[pos:]!r}")
        if c is None:
            cv = 1
        elif c.startswith("["):
            cv = ctx.parse(c[1:-1])
        else:
            cv = ctx.from_int(int(c))
        if sign == "-":
            cv = ctx.neg(cv)
        deg = 0 if mon is None else (int(e) if e else 1)
        coeffs[deg] = ctx.add(coeffs.get(deg, 0), cv)
        pos = m.end()
    n = max(coeffs) + 1
    return UniPoly(ctx, [coeffs.get(i, 0) for i in range(n)])
