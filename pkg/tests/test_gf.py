import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvearcs.gf import (
    FieldError,
    Fq,
    extension,
    field_create,
    field_of_order,
    first_nonsquare,
    is_irreducible_mod_p,
    parse_field_spec,
    smallest_irreducible,
    subfield_codes,
)

ORDERS = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 49, 81, 121]


def naive_mul(ctx, a, b):
    """Schoolbook product of digit vectors reduced by the modulus (test oracle)."""
    p, k, mod = ctx.p, ctx.k, ctx.modulus
    da, db = ctx.digits(a), ctx.digits(b)
    prod = [0] * (2 * k - 1)
    for i, x in enumerate(da):
        for j, y in enumerate(db):
            prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            for i in range(k + 1):
                prod[d - k + i] = (prod[d - k + i] - c * mod[i]) % p
    return sum(c * p**i for i, c in enumerate(prod[:k]))


def naive_add(ctx, a, b):
    p = ctx.p
    return sum(((x + y) % p) * p**i for i, (x, y) in enumerate(zip(ctx.digits(a), ctx.digits(b))))


@pytest.mark.parametrize("q", [4, 8, 9, 16, 25, 27])
def test_tables_match_schoolbook_arithmetic(q):
    ctx = field_of_order(q)
    for a in range(q):
        for b in range(q):
            assert ctx.mul(a, b) == naive_mul(ctx, a, b)
            assert ctx.add(a, b) == naive_add(ctx, a, b)


@pytest.mark.parametrize("p", [2, 3, 5, 7, 13])
def test_prime_field_is_integers_mod_p(p):
    ctx = field_of_order(p)
    for a in range(p):
        for b in range(p):
            assert ctx.add(a, b) == (a + b) % p
            assert ctx.mul(a, b) == (a * b) % p
        if a:
            assert (ctx.inv(a) * a) % p == 1


def test_f4_hand_table():
    ctx = field_of_order(4)  # x^2 + x + 1
    assert ctx.modulus == (1, 1, 1)
    alpha = 2
    assert ctx.mul(alpha, alpha) == 3  # alpha^2 = alpha + 1
    assert ctx.mul(alpha, 3) == 1


def test_smallest_modulus_choice():
    assert smallest_irreducible(3, 2) == (1, 0, 1)  # x^2 + 1, -1 non-square mod 3
    assert smallest_irreducible(5, 2) == (2, 0, 1)  # x^2 + 2; 1, 4 are squares, x^2+1 splits
    assert smallest_irreducible(2, 3) == (1, 1, 0, 1)


def irreducible_by_root_search(f, p):
    # only valid for degree <= 3
    return all(sum(c * x**i for i, c in enumerate(f)) % p for x in range(p))


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_irreducibility_vs_root_oracle(p):
    for deg in (2, 3):
        for code in range(p**deg):
            f = [(code // p**i) % p for i in range(deg)] + [1]
            assert is_irreducible_mod_p(f, p) == irreducible_by_root_search(f, p)


@pytest.mark.parametrize("q", ORDERS)
def test_multiplicative_group_is_cyclic_of_order_q_minus_1(q):
    ctx = field_of_order(q)
    best = 0
    for a in range(1, q):
        assert ctx.pow(a, q - 1) == 1
        x, n = a, 1
        while x != 1:
            x, n = ctx.mul(x, a), n + 1
        best = max(best, n)
    assert best == q - 1


field_and_elems = st.sampled_from(ORDERS).flatmap(
    lambda q: st.tuples(st.just(q), st.integers(0, q - 1), st.integers(0, q - 1), st.integers(0, q - 1))
)


@given(field_and_elems)
@settings(max_examples=300, deadline=None)
def test_field_axioms(data):
    q, a, b, c = data
    F = field_of_order(q)
    assert F.add(a, b) == F.add(b, a)
    assert F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == 0
    assert F.sub(F.add(a, b), b) == a
    if a:
        assert F.mul(a, F.inv(a)) == 1
        assert F.div(F.mul(b, a), a) == b


@given(field_and_elems)
@settings(max_examples=200, deadline=None)
def test_frobenius_is_additive(data):
    q, a, b, _ = data
    F = field_of_order(q)
    p = F.p
    assert F.pow(F.add(a, b), p) == F.add(F.pow(a, p), F.pow(b, p))
    assert F.pow(F.frobenius_root(a), p) == a


@pytest.mark.parametrize("q", [3, 5, 9, 25, 27, 49])
def test_square_count_and_sqrt(q):
    F = field_of_order(q)
    squares = {F.mul(a, a) for a in range(1, q)}
    assert len(squares) == (q - 1) // 2
    for a in range(1, q):
        assert F.is_square(a) == (a in squares)
        r = F.sqrt(a)
        assert (r is not None) == (a in squares)
        if r is not None:
            assert F.mul(r, r) == a
    assert not F.is_square(first_nonsquare(F))


@pytest.mark.parametrize("q", [8, 9, 25, 49])
def test_vector_ops_match_scalar(q):
    F = field_of_order(q)
    a = np.repeat(np.arange(q), q)
    b = np.tile(np.arange(q), q)
    va, vm, vn = F.vadd(a, b), F.vmul(a, b), F.vneg(a)
    for i in range(q * q):
        x, y = int(a[i]), int(b[i])
        assert va[i] == F.add(x, y)
        assert vm[i] == F.mul(x, y)
        assert vn[i] == F.neg(x)


@pytest.mark.parametrize("q,e", [(3, 2), (5, 2), (4, 2), (9, 2), (7, 2), (3, 3)])
def test_extension_embedding_is_a_field_homomorphism(q, e):
    small = field_of_order(q)
    big, emb = extension(small, e)
    assert big.q == q**e
    assert len(set(emb)) == q
    for a in range(q):
        for b in range(q):
            assert emb[small.add(a, b)] == big.add(emb[a], emb[b])
            assert emb[small.mul(a, b)] == big.mul(emb[a], emb[b])
    # the image is exactly the fixed field of x -> x^q
    fixed = {x for x in range(big.q) if big.pow(x, q) == x}
    assert fixed == set(subfield_codes(small, e))


def test_field_specs():
    assert parse_field_spec("7").q == 7
    assert parse_field_spec("5^2").q == 25
    F = parse_field_spec("3^2/2,2,1")
    assert F.modulus == (2, 2, 1)
    assert F.spec == "3^2/2,2,1"
    with pytest.raises(FieldError):
        parse_field_spec("6")
    with pytest.raises(FieldError):
        parse_field_spec("3^2/1,1,1")  # x^2+x+1 = (x-1)^2 over F_3
    with pytest.raises(FieldError):
        field_create(2, 40)
    with pytest.raises(FieldError):
        field_create(4, 1)


def test_element_wrapper_and_format_roundtrip():
    F = field_of_order(25)
    assert int(F(7)) == 2  # integers are read in the prime subfield
    x = F.element([2, 1])
    y = F.element([1, 1])
    assert isinstance(x * y, Fq)
    assert int((x * y) / y) == 7
    for a in range(25):
        assert F.parse(F.format(a)) == a
    assert F.format(3) == "3"
    assert F.format(7) == "2.1"
    with pytest.raises(FieldError):
        x + field_of_order(5)(1)
    with pytest.raises(ZeroDivisionError):
        F.inv(0)
