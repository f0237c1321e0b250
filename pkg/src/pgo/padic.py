"""Exact arithmetic over Q_p (p odd) and its unramified quadratic extension.

Field elements are plain :class:`fractions.Fraction` values read p-adically.
Elements of E = F(sqrt(u)) are :class:`ExtScalar` pairs ``a + b*sqrt(u)``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from pgo.errors import DomainError

Rational = Union[int, Fraction]


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


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a|p) via Euler's criterion."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def least_nonresidue(p: int) -> int:
    for a in range(2, p):
        if legendre(a, p) == -1:
            return a
    raise DomainError(f"no quadratic non-residue mod {p}")


@dataclass(frozen=True)
class PadicContext:
    """An odd prime ``p`` with non-square unit ``u`` and uniformizer ``pi = p``."""

    p: int = 5
    u: int = 0
    pi: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise DomainError(f"p must be prime, got {self.p!r}")
        if self.p == 2:
            raise DomainError("p = 2 (dyadic case) is not supported")
        if self.u == 0:
            object.__setattr__(self, "u", least_nonresidue(self.p))
        if self.pi == 0:
            object.__setattr__(self, "pi", self.p)
        if legendre(self.u, self.p) != -1:
            raise DomainError(f"u = {self.u} is not a non-residue unit mod {self.p}")
        if valuation(self.pi, self.p) != 1:
            raise DomainError("pi must have valuation 1")

    def rep(self, cls: "SquareClass") -> Fraction:
        """The fixed representative in {1, u, pi, u*pi} of a square class."""
        value = Fraction(1)
        if cls.u_bit:
            value *= self.u
        if cls.pi_bit:
            value *= self.pi
        return value


def _vp_int(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation(x: Rational, p: int) -> int:
    x = Fraction(x)
    if x == 0:
        raise DomainError("valuation of zero")
    return _vp_int(x.numerator, p) - _vp_int(x.denominator, p)


def unit_part(x: Rational, p: int) -> Fraction:
    x = Fraction(x)
    return x / Fraction(p) ** valuation(x, p)


DEFAULT = PadicContext(5)


class SquareClass(enum.Enum):
    """An element of F*/F*^2 = {1, u, pi, u*pi}, stored as (u-bit, pi-bit)."""

    ONE = (0, 0)
    U = (1, 0)
    PI = (0, 1)
    UPI = (1, 1)

    @property
    def u_bit(self) -> int:
        return self.value[0]

    @property
    def pi_bit(self) -> int:
        return self.value[1]

    @property
    def tag(self) -> str:
        return _TAGS[self]

    @classmethod
    def from_tag(cls, tag: str) -> "SquareClass":
        for c, t in _TAGS.items():
            if t == tag:
                return c
        raise DomainError(f"unknown square-class tag {tag!r}")

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        return SquareClass((self.u_bit ^ other.u_bit, self.pi_bit ^ other.pi_bit))

    def __lt__(self, other: "SquareClass") -> bool:
        return _ORDER.index(self) < _ORDER.index(other)


_TAGS = {SquareClass.ONE: "1", SquareClass.U: "u", SquareClass.PI: "pi", SquareClass.UPI: "upi"}
_ORDER = [SquareClass.ONE, SquareClass.U, SquareClass.PI, SquareClass.UPI]
ALL_CLASSES = tuple(_ORDER)


def square_class(x: Rational, ctx: PadicContext = DEFAULT) -> SquareClass:
    v = valuation(x, ctx.p)
    w = unit_part(x, ctx.p)
    leg = legendre(w.numerator, ctx.p) * legendre(w.denominator, ctx.p)
    return SquareClass((0 if leg == 1 else 1, v % 2))


def is_square(x: Rational, ctx: PadicContext = DEFAULT) -> bool:
    return square_class(x, ctx) is SquareClass.ONE


def hilbert_symbol(a: Rational, b: Rational, ctx: PadicContext = DEFAULT) -> int:
    """Local Hilbert symbol (a, b)_p for odd p, closed form."""
    p = ctx.p
    alpha, beta = valuation(a, p), valuation(b, p)
    ua, ub = unit_part(a, p), unit_part(b, p)
    eps = (p - 1) // 2
    sign = -1 if (alpha * beta * eps) % 2 else 1
    la = legendre(ua.numerator, p) * legendre(ua.denominator, p)
    lb = legendre(ub.numerator, p) * legendre(ub.denominator, p)
    return sign * (la ** beta) * (lb ** alpha)


def is_norm(x: Rational, ctx: PadicContext = DEFAULT) -> bool:
    """Membership in N_{E/F}(E*) for the unramified E: even valuation."""
    return valuation(x, ctx.p) % 2 == 0


def parse_scalar(token: str, ctx: PadicContext = DEFAULT) -> Fraction:
    """Parse ``1``, ``u``, ``pi``, ``upi`` (optionally signed) or a rational literal."""
    t = token.strip().lower().replace(" ", "")
    sign = 1
    if t.startswith("-"):
        sign, t = -1, t[1:]
    elif t.startswith("+"):
        t = t[1:]
    named = {"u": Fraction(ctx.u), "pi": Fraction(ctx.pi), "upi": Fraction(ctx.u * ctx.pi),
             "u*pi": Fraction(ctx.u * ctx.pi), "piu": Fraction(ctx.u * ctx.pi)}
    if t in named:
        return sign * named[t]
    try:
        return sign * Fraction(t)
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"cannot parse scalar {token!r}") from exc


class ExtScalar:
    """``a + b*sqrt(u)`` in E = F(sqrt(u)); treated as immutable."""

    __slots__ = ("a", "b", "u")

    def __init__(self, a: Rational = 0, b: Rational = 0, u: int = DEFAULT.u):
        self.a = a if type(a) is Fraction else Fraction(a)
        self.b = b if type(b) is Fraction else Fraction(b)
        self.u = u

    def _coerce(self, other) -> "ExtScalar":
        if isinstance(other, ExtScalar):
            if other.u != self.u:
                raise DomainError("mixing elements of different extensions")
            return other
        if isinstance(other, (int, Fraction)):
            return ExtScalar(other, 0, self.u)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ExtScalar(self.a + o.a, self.b + o.b, self.u)

    __radd__ = __add__

    def __neg__(self):
        return ExtScalar(-self.a, -self.b, self.u)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ExtScalar(self.a - o.a, self.b - o.b, self.u)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return ExtScalar(self.a * other, self.b * other, self.u)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ExtScalar(self.a * o.a + self.u * self.b * o.b, self.a * o.b + self.b * o.a, self.u)

    __rmul__ = __mul__

    def conj(self) -> "ExtScalar":
        return ExtScalar(self.a, -self.b, self.u)

    def norm(self) -> Fraction:
        return self.a * self.a - self.u * self.b * self.b

    def inverse(self) -> "ExtScalar":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in E")
        return ExtScalar(self.a / n, -self.b / n, self.u)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero in E")
            return ExtScalar(self.a / other, self.b / other, self.u)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __eq__(self, other) -> bool:
        if isinstance(other, ExtScalar):
            return self.a == other.a and self.b == other.b and self.u == other.u
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.a, self.b)) if self.b else hash(self.a)

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def is_real(self) -> bool:
        return self.b == 0

    def __repr__(self) -> str:
        return f"ExtScalar({self.a}, {self.b})"


def ext_mul(x: ExtScalar, y: ExtScalar) -> ExtScalar:
    return x * y


def ext_conj(x: ExtScalar) -> ExtScalar:
    return x.conj()


def ext_norm(x: ExtScalar) -> Fraction:
    return x.norm()


def conj(x):
    """Galois conjugation; identity on F."""
    return x.conj() if isinstance(x, ExtScalar) else x


def sqrt_u(ctx: PadicContext = DEFAULT) -> ExtScalar:
    return ExtScalar(0, 1, ctx.u)
