"""Brute-force p-adic oracles, independent of the closed forms in ``pgo``.

Isotropy of a diagonal form with integer coefficients of valuation 0 or 1 is
decided by searching primitive zeros mod p^3. A primitive x has a unit
coordinate x_i, so v(dq/dx_i) <= 1 and a zero mod p^3 lifts by Hensel's lemma
(v(q(x)) >= 3 > 2 v(q'(x))). Conversely a p-adic primitive zero reduces to one.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence


def _q(coeffs: Sequence[int], x: Sequence[int]) -> int:
    return sum(a * v * v for a, v in zip(coeffs, x))


def isotropic_bruteforce(coeffs: Sequence[int], p: int, depth: int = 3) -> bool:
    for a in coeffs:
        assert a % (p * p) != 0, "coefficients must have valuation <= 1"
    r = len(coeffs)

    def lift(x, level):
        if level == depth:
            return True
        mod = p ** (level + 1)
        step = p ** level
        for t in itertools.product(range(p), repeat=r):
            y = [xi + step * ti for xi, ti in zip(x, t)]
            if _q(coeffs, y) % mod == 0 and lift(y, level + 1):
                return True
        return False

    for x in itertools.product(range(p), repeat=r):
        if any(x) and _q(coeffs, x) % p == 0 and lift(list(x), 1):
            return True
    return False


def hilbert_bruteforce(a: int, b: int, p: int) -> int:
    """(a, b) = 1 iff a x^2 + b y^2 - z^2 has a nontrivial zero."""
    return 1 if isotropic_bruteforce([a, b, -1], p) else -1


def is_square_bruteforce(x: Fraction, p: int) -> bool:
    x = Fraction(x)
    num, den, v = x.numerator, x.denominator, 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    if v % 2:
        return False
    unit = (num * pow(den, -1, p)) % p
    return any((y * y - unit) % p == 0 for y in range(1, p))
