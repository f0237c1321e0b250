from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import hilbert_bruteforce, is_square_bruteforce
from pgo.errors import DomainError
from pgo.padic import (
    ALL_CLASSES,
    ExtScalar,
    PadicContext,
    SquareClass,
    hilbert_symbol,
    is_norm,
    is_prime,
    is_square,
    least_nonresidue,
    legendre,
    parse_scalar,
    square_class,
    sqrt_u,
    unit_part,
    valuation,
)

P5, P13 = PadicContext(5), PadicContext(13)
nonzero_q = st.fractions(min_value=-10**6, max_value=10**6).filter(lambda x: x != 0)


def test_context_defaults():
    assert (P5.p, P5.u, P5.pi) == (5, 2, 5)
    assert (P13.u, PadicContext(7).u) == (2, 3)


@pytest.mark.parametrize("p", [2, 9, 1, 0])
def test_context_rejects_bad_primes(p):
    with pytest.raises(DomainError):
        PadicContext(p)


def test_context_rejects_square_u():
    with pytest.raises(DomainError):
        PadicContext(5, u=4)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17])
def test_legendre_matches_squares_mod_p(p):
    squares = {(y * y) % p for y in range(1, p)}
    for a in range(1, p):
        assert legendre(a, p) == (1 if a in squares else -1)
    assert legendre(least_nonresidue(p), p) == -1


def test_is_prime_small():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


@given(nonzero_q, nonzero_q)
def test_valuation_is_additive(x, y):
    assert valuation(x * y, 5) == valuation(x, 5) + valuation(y, 5)
    assert valuation(unit_part(x, 5), 5) == 0


def test_valuation_of_zero_is_an_error():
    with pytest.raises(DomainError):
        valuation(0, 5)


@given(nonzero_q)
def test_square_class_agrees_with_bruteforce(x):
    for ctx in (P5, P13):
        assert is_square(x, ctx) == is_square_bruteforce(x, ctx.p)


@given(nonzero_q, nonzero_q)
def test_square_class_is_multiplicative(x, y):
    assert square_class(x * y, P5) == square_class(x, P5) * square_class(y, P5)


def test_class_representatives_round_trip():
    for ctx in (P5, P13):
        for c in ALL_CLASSES:
            assert square_class(ctx.rep(c), ctx) == c
            assert SquareClass.from_tag(c.tag) == c


@pytest.mark.parametrize("ctx", [P5, P13], ids=["p5", "p13"])
def test_hilbert_symbol_matches_bruteforce_search(ctx):
    for a in ALL_CLASSES:
        for b in ALL_CLASSES:
            ra, rb = int(ctx.rep(a)), int(ctx.rep(b))
            for sa in (1, -1):
                assert hilbert_symbol(sa * ra, rb, ctx) == hilbert_bruteforce(sa * ra, rb, ctx.p)


@given(nonzero_q, nonzero_q, nonzero_q)
def test_hilbert_symbol_bilinear_and_symmetric(a, b, c):
    assert hilbert_symbol(a, b) == hilbert_symbol(b, a)
    assert hilbert_symbol(a * c, b) == hilbert_symbol(a, b) * hilbert_symbol(c, b)
    assert hilbert_symbol(a, -a) == 1


def test_norms_are_even_valuation():
    for x in (1, 2, 3, Fraction(1, 25), 50):
        assert is_norm(x)
    for x in (5, 10, Fraction(2, 5)):
        assert not is_norm(x)
    s = sqrt_u(P5)
    for a, b in [(1, 1), (3, -2), (0, 5), (7, 0)]:
        assert is_norm(ExtScalar(a, b, P5.u).norm(), P5)
    assert s * s == ExtScalar(P5.u, 0, P5.u)


@pytest.mark.parametrize("token,value", [("1", 1), ("u", 2), ("-pi", -5), ("upi", 10), ("3/4", Fraction(3, 4))])
def test_parse_scalar(token, value):
    assert parse_scalar(token, P5) == value


def test_parse_scalar_rejects_garbage():
    with pytest.raises(DomainError):
        parse_scalar("x", P5)


ext = st.builds(lambda a, b: ExtScalar(a, b, 2),
                st.fractions(max_denominator=20, min_value=-50, max_value=50),
                st.fractions(max_denominator=20, min_value=-50, max_value=50))


@given(ext, ext, ext)
def test_ext_scalar_field_axioms(x, y, z):
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    assert (x * y).conj() == x.conj() * y.conj()
    assert (x * y).norm() == x.norm() * y.norm()
    if x:
        assert x * x.inverse() == ExtScalar(1, 0, 2)
        assert (y / x) * x == y


def test_ext_scalar_rejects_mixed_extensions():
    with pytest.raises(DomainError):
        ExtScalar(1, 1, 2) + ExtScalar(1, 1, 3)
