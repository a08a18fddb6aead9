"""Finite fields F_{p^k} with elements encoded as small integers.

An element a_0 + a_1 x + ... + a_{k-1} x^{k-1} (polynomial basis, reduced
modulo the field's monic irreducible modulus) is stored as the integer
code a_0 + a_1 p + ... + a_{k-1} p^{k-1}.  Integers below p are therefore
the prime subfield, and element order is plain integer order.

All hot loops elsewhere in the package work on these codes through a
:class:`FieldCtx`; :class:`Fq` is a thin operator-overloading wrapper for
interactive use.
"""

from __future__ import annotations

import functools
import math
import re
from typing import Iterable, Sequence

import numpy as np

#: desk-scale cap on k*log2(p)
MAX_FIELD_BITS = 24


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- dense polynomials over F_p, constant coefficient first -------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _trim(a)
    return a


def _pmulmod(a: Sequence[int], b: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _pmod(out, m, p)


def _pgcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    b = _trim([c % p for c in b])
    while b:
        a, b = b, _pmod(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [c * inv % p for c in a]
    return a


def is_irreducible_mod_p(f: Sequence[int], p: int) -> bool:
    """Ben-Or test: f has no factor of degree d for d <= deg f / 2."""
    f = _trim([c % p for c in f])
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    power = x[:]
    for _ in range(n // 2):
        # power <- power^p mod f
        acc = [1]
        base = power
        e = p
        while e:
            if e & 1:
                acc = _pmulmod(acc, base, f, p)
            base = _pmulmod(base, base, f, p)
            e >>= 1
        power = acc
        diff = power[:] + [0] * max(0, 2 - len(power))
        diff[1] = (diff[1] - 1) % p
        if len(_pgcd(f, diff, p)) > 1:
            return False
    return True


def smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Monic irreducible of degree k with the smallest lower-coefficient code."""
    for code in range(p ** k):
        low = [(code // p ** i) % p for i in range(k)]
        f = low + [1]
        if is_irreducible_mod_p(f, p):
            return tuple(f)
    raise FieldError(f"no irreducible of degree {k} over F_{p}")  # unreachable


class FieldCtx:
    """Arithmetic context for F_q, q = p^k.

    Instances are immutable after construction and compare equal when they
    share (p, k, modulus).  Prefer :func:`field_create`, which caches.
    """

    def __init__(self, p: int, k: int = 1, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if k < 1:
            raise FieldError("extension degree must be >= 1")
        if k * math.log2(p) > MAX_FIELD_BITS:
            raise FieldError(f"F_{p}^{k} exceeds the {MAX_FIELD_BITS}-bit desk-scale cap")
        self.p = p
        self.k = k
        self.q = p ** k
        if modulus is None:
            modulus = smallest_irreducible(p, k) if k > 1 else (0, 1)
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != k + 1 or modulus[-1] != 1:
                raise FieldError(f"modulus must be monic of degree {k}")
            if k > 1 and not is_irreducible_mod_p(modulus, p):
                raise FieldError(f"modulus {modulus} is reducible over F_{p}")
        self.modulus = tuple(modulus)
        if k > 1:
            self._build_tables()

    # -- construction ---------------------------------------------------------

    def _poly_of(self, code: int) -> list[int]:
        return [(code // self.p ** i) % self.p for i in range(self.k)]

    def _code_of(self, poly: Sequence[int]) -> int:
        return sum(c * self.p ** i for i, c in enumerate(poly))

    def _build_tables(self) -> None:
        p, q, m = self.p, self.q, self.modulus
        order = q - 1
        factors = _prime_factors(order)
        gen = None
        for cand in range(2 if q > 2 else 1, q):
            g = self._poly_of(cand)
            if all(self._slow_pow(g, order // f) != [1] for f in factors):
                gen = g
                break
        exp = [0] * (2 * order)
        log = [-1] * q
        cur = [1]
        for i in range(order):
            c = self._code_of(cur)
            exp[i] = exp[i + order] = c
            log[c] = i
            cur = _pmulmod(cur, gen, m, p)
        self._exp = exp
        self._log = log
        # Zech logarithms: alpha^zech[n] = 1 + alpha^n
        zech = [-1] * order
        for n in range(order):
            poly = self._poly_of(exp[n])
            poly[0] = (poly[0] + 1) % p
            zech[n] = log[self._code_of(poly)]
        self._zech = zech
        self._np_exp = np.array(exp, dtype=np.int64)
        self._np_log = np.array(log, dtype=np.int64)
        self._np_zech = np.array(zech, dtype=np.int64)

    def _slow_pow(self, g: list[int], e: int) -> list[int]:
        acc, base = [1], g
        while e:
            if e & 1:
                acc = _pmulmod(acc, base, self.modulus, self.p)
            base = _pmulmod(base, base, self.modulus, self.p)
            e >>= 1
        return acc

    # -- identity -------------------------------------------------------------

    def _key(self):
        return (self.p, self.k, self.modulus)

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"FieldCtx({self.spec})"

    @property
    def spec(self) -> str:
        """Field spec string, e.g. ``5^2/2,0,1`` (modulus constant first)."""
        if self.k == 1:
            return f"{self.p}^1"
        return f"{self.p}^{self.k}/" + ",".join(str(c) for c in self.modulus)

    # -- scalar arithmetic on codes -------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if a == 0:
            return b
        if b == 0:
            return a
        la = self._log[a]
        z = self._zech[(self._log[b] - la) % (self.q - 1)]
        if z < 0:
            return 0
        return self._exp[la + z]

    def neg(self, a: int) -> int:
        if self.k == 1:
            return -a % self.p
        if self.p == 2 or a == 0:
            return a
        # -1 = alpha^((q-1)/2) for odd q
        return self._exp[self._log[a] + (self.q - 1) // 2]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + self.spec)
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if e == 0:
            return 1
        if a == 0:
            return 0
        if self.k == 1:
            return pow(a, e, self.p)
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def from_int(self, n: int) -> int:
        """Image of the integer n in the prime subfield."""
        return n % self.p

    def is_square(self, a: int) -> bool:
        if a == 0 or self.p == 2:
            return True
        return self.pow(a, (self.q - 1) // 2) == 1

    def sqrt(self, a: int) -> int | None:
        """Smallest square root of a, or None."""
        for b in range(self.q):
            if self.mul(b, b) == a:
                return b
        return None

    def frobenius_root(self, a: int) -> int:
        """The unique b with b^p = a."""
        return self.pow(a, self.q // self.p)

    def digits(self, a: int) -> tuple[int, ...]:
        return tuple(self._poly_of(a))

    def from_digits(self, digits: Sequence[int]) -> int:
        if len(digits) > self.k:
            raise FieldError(f"too many coefficients for {self.spec}")
        return self._code_of([d % self.p for d in digits])

    def elements(self) -> range:
        return range(self.q)

    # -- vectorised arithmetic (numpy int64 arrays of codes) --------------------

    def vadd(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        a, b = np.broadcast_arrays(a, b)
        out = np.where(a == 0, b, a).astype(np.int64)
        both = (a != 0) & (b != 0)
        if both.any():
            la = self._np_log[a[both]]
            z = self._np_zech[(self._np_log[b[both]] - la) % (self.q - 1)]
            res = np.where(z < 0, 0, self._np_exp[la + np.maximum(z, 0)])
            out[both] = res
        return out

    def vneg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.k == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        out = a.copy()
        nz = a != 0
        out[nz] = self._np_exp[self._np_log[a[nz]] + (self.q - 1) // 2]
        return out

    def vmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return a * b % self.p
        a, b = np.broadcast_arrays(a, b)
        out = np.zeros(a.shape, dtype=np.int64)
        nz = (a != 0) & (b != 0)
        out[nz] = self._np_exp[self._np_log[a[nz]] + self._np_log[b[nz]]]
        return out

    # -- user-facing -----------------------------------------------------------

    def __call__(self, value) -> "Fq":
        if isinstance(value, Fq):
            if value.ctx != self:
                raise FieldError("element belongs to a different field")
            return value
        return Fq(self, self.from_int(int(value)))

    def element(self, digits: Sequence[int]) -> "Fq":
        return Fq(self, self.from_digits(digits))

    def format(self, a: int) -> str:
        """Prime-subfield elements print as integers, others as dotted digits (constant first)."""
        if a < self.p:
            return str(a)
        return ".".join(str(d) for d in self.digits(a))

    def parse(self, text: str) -> int:
        """Inverse of :meth:`format`; a bare integer is read in the prime subfield."""
        text = text.strip()
        if "." in text:
            return self.from_digits([int(t) for t in text.split(".")])
        return self.from_int(int(text))


@functools.lru_cache(maxsize=None)
def _cached_field(p: int, k: int, modulus: tuple[int, ...] | None) -> FieldCtx:
    return FieldCtx(p, k, modulus)


def field_create(p: int, k: int = 1, modulus: Sequence[int] | None = None) -> FieldCtx:
    """Build (or fetch from cache) the context for F_{p^k}.

    Without a modulus the lexicographically smallest monic irreducible is
    used, so e.g. F_25 is F_5[x]/(x^2+2).
    """
    key = tuple(int(c) for c in modulus) if modulus is not None else None
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    return _cached_field(p, k, key)


_SPEC_RE = re.compile(r"^\s*(\d+)\s*(?:\^\s*(\d+))?\s*(?:/\s*([\d,\s]+))?\s*$")


def parse_field_spec(text: str) -> FieldCtx:
    """Parse ``p^k`` or ``p^k/c0,c1,...`` (modulus coefficients constant first).

    The modulus may be given with or without its leading 1.  A bare ``q``
    that is a prime power is also accepted.
    """
    m = _SPEC_RE.match(text)
    if not m:
        raise FieldError(f"malformed field spec {text!r}")
    base = int(m.group(1))
    if m.group(2) is not None:
        p, k = base, int(m.group(2))
    else:
        p, k = _split_prime_power(base)
    modulus = None
    if m.group(3):
        coeffs = [int(c) for c in m.group(3).split(",") if c.strip()]
        if len(coeffs) == k:
            coeffs.append(1)
        modulus = coeffs
    return field_create(p, k, modulus)


def _split_prime_power(q: int) -> tuple[int, int]:
    fs = _prime_factors(q) if q > 1 else []
    if len(fs) != 1:
        raise FieldError(f"{q} is not a prime power")
    p = fs[0]
    k = round(math.log(q, p))
    if p ** k != q:
        raise FieldError(f"{q} is not a prime power")
    return p, k


def field_of_order(q: int) -> FieldCtx:
    p, k = _split_prime_power(q)
    return field_create(p, k)


class Fq:
    """A field element bound to its context; supports + - * / ** and ==."""

    __slots__ = ("ctx", "value")

    def __init__(self, ctx: FieldCtx, value: int):
        self.ctx = ctx
        self.value = value

    def _other(self, other) -> int:
        if isinstance(other, Fq):
            if other.ctx != self.ctx:
                raise FieldError("mixed field contexts")
            return other.value
        if isinstance(other, int):
            return self.ctx.from_int(other)
        return NotImplemented

    def __add__(self, other):
        return Fq(self.ctx, self.ctx.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Fq(self.ctx, self.ctx.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return Fq(self.ctx, self.ctx.sub(self._other(other), self.value))

    def __mul__(self, other):
        return Fq(self.ctx, self.ctx.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Fq(self.ctx, self.ctx.div(self.value, self._other(other)))

    def __rtruediv__(self, other):
        return Fq(self.ctx, self.ctx.div(self._other(other), self.value))

    def __neg__(self):
        return Fq(self.ctx, self.ctx.neg(self.value))

    def __pow__(self, e: int):
        return Fq(self.ctx, self.ctx.pow(self.value, e))

    def __eq__(self, other):
        if isinstance(other, Fq):
            return self.ctx == other.ctx and self.value == other.value
        if isinstance(other, int):
            return self.value == self.ctx.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx, self.value))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.ctx.digits(self.value)

    def inverse(self) -> "Fq":
        return Fq(self.ctx, self.ctx.inv(self.value))

    def is_square(self) -> bool:
        return self.ctx.is_square(self.value)

    def __repr__(self):
        return f"Fq({self.ctx.format(self.value)} in F_{self.ctx.q})"


def arith(a: Fq, b: Fq, op: str) -> Fq:
    if a.ctx != b.ctx:
        raise FieldError("mixed field contexts")
    fn = {"add": a.ctx.add, "sub": a.ctx.sub, "mul": a.ctx.mul, "div": a.ctx.div}[op]
    return Fq(a.ctx, fn(a.value, b.value))


def elements(ctx: FieldCtx) -> list[Fq]:
    return [Fq(ctx, i) for i in range(ctx.q)]


def is_square(a: Fq) -> bool:
    return a.ctx.is_square(a.value)


def first_nonsquare(ctx: FieldCtx) -> int:
    for a in range(1, ctx.q):
        if not ctx.is_square(a):
            return a
    raise FieldError(f"every element of F_{ctx.q} is a square")


@functools.lru_cache(maxsize=None)
def extension(ctx: FieldCtx, e: int) -> tuple[FieldCtx, tuple[int, ...]]:
    """F_{q^e} together with the embedding of F_q into it (as a code table).

    The image of the generator x of F_q is the smallest root of ctx's
    modulus inside the big field.
    """
    if e < 1:
        raise FieldError("extension degree must be >= 1")
    if e == 1:
        return ctx, tuple(range(ctx.q))
    big = field_create(ctx.p, ctx.k * e)
    if ctx.k == 1:
        return big, tuple(range(ctx.q))
    mod = ctx.modulus
    root = None
    for r in range(big.q):
        acc = 0
        for c in reversed(mod):
            acc = big.add(big.mul(acc, r), c)
        if acc == 0:
            root = r
            break
    assert root is not None
    powers = [1]
    for _ in range(ctx.k - 1):
        powers.append(big.mul(powers[-1], root))
    table = []
    for a in range(ctx.q):
        acc = 0
        for d, pw in zip(ctx.digits(a), powers):
            if d:
                acc = big.add(acc, big.mul(d, pw))
        table.append(acc)
    return big, tuple(table)


def subfield_codes(ctx: FieldCtx, e: int) -> frozenset[int]:
    """Codes in F_{q^e} that lie in the embedded copy of F_q."""
    return frozenset(extension(ctx, e)[1])


def embed_all(table: Sequence[int], values: Iterable[int]) -> list[int]:
    return [table[v] for v in values]
