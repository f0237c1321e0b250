"""Closed-form orbit data attached to a graded descriptor.

Nothing here simulates a group action; the brute-force counterpart lives in
:mod:`pgo.realizations`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from pgo.catalog import GradedDescriptor
from pgo.errors import DomainError

F_STAR = "F*"
F_SQUARES = "F*^2"
NORMS = "N(E*)"
INDEX_TWO = "index-2"


@dataclass(frozen=True)
class OrbitSummary:
    nonzero_orbits: Optional[int]
    open_orbits: int
    chi0_image: str
    p_open_orbits: int
    note: str = ""

    @property
    def total_orbits(self) -> Optional[int]:
        """Orbit count including the zero orbit."""
        return None if self.nonzero_orbits is None else self.nonzero_orbits + 1

    def to_json(self) -> dict:
        return {
            "nonzero_orbits": self.nonzero_orbits,
            "total_orbits": self.total_orbits,
            "open_orbits": self.open_orbits,
            "chi0_image": self.chi0_image,
            "p_open_orbits": self.p_open_orbits,
            "note": self.note,
        }


@dataclass(frozen=True)
class CharacterData:
    degrees: Tuple[int, ...]
    a_exponents: Tuple[Tuple[int, ...], ...]
    a_exponents_minus: Tuple[Tuple[int, ...], ...]

    def to_json(self) -> dict:
        return {
            "degrees": list(self.degrees),
            "a_exponents": [list(r) for r in self.a_exponents],
            "a_exponents_minus": [list(r) for r in self.a_exponents_minus],
        }


def _check(desc: GradedDescriptor) -> None:
    if desc.gtype not in ("I", "II", "III"):
        raise DomainError(f"unknown type {desc.gtype!r}")
    if desc.gtype == "II" and desc.e not in (1, 2, 3):
        raise DomainError("type II needs e in {1, 2, 3}")


def family(desc: GradedDescriptor) -> str:
    """Coarse family label used to pick the counting theorem."""
    _check(desc)
    if desc.gtype != "II":
        return desc.gtype
    if desc.d == desc.e == 1:
        return "sp"
    if desc.d == desc.e == 2:
        return "unitary"
    return f"II(e={desc.e})"


def open_orbit_count(desc: GradedDescriptor) -> int:
    _check(desc)
    k = desc.k
    if desc.gtype == "I":
        return 1
    if desc.gtype == "III":
        return 3 if k == 0 else 4
    if desc.e == 2:
        return 1 if k % 2 == 0 else 2
    if desc.e == 1:
        if k == 0:
            return 1
        if k == 1:
            return 4
        return 2 if k % 2 == 0 else 5
    return 4


def nonzero_orbit_count(desc: GradedDescriptor) -> int:
    """Number of nonzero G-orbits in V+.

    Type III returns 4k + 3: three rank-one orbits and four for each higher
    rank. Adding the zero orbit gives the 4(k+1) total.
    """
    _check(desc)
    k, rank = desc.k, desc.rank
    if desc.gtype == "I":
        return rank
    if desc.gtype == "III":
        return 4 * k + 3
    if k == 0:
        return 1
    if k == 1:
        return 3 if desc.e == 2 else 5
    fam = family(desc)
    if fam == "sp":
        p, r = divmod(rank - 1, 2)
        return 7 * p if r == 0 else 7 * p + 5
    if fam == "unitary":
        p, r = divmod(rank, 2)
        return 3 * p if r == 0 else 3 * p + 1
    raise DomainError("open-orbit count only for this descriptor")


def total_orbit_count(desc: GradedDescriptor) -> int:
    return nonzero_orbit_count(desc) + 1


def chi0_image(desc: GradedDescriptor) -> str:
    _check(desc)
    if desc.gtype == "I":
        return F_STAR
    if desc.gtype == "III":
        return F_SQUARES
    if desc.rank % 2:
        return F_STAR
    if desc.e == 2:
        return NORMS if family(desc) == "unitary" else INDEX_TWO
    return F_SQUARES


def quotient_size(image: str) -> int:
    """Index of the subgroup in F* (p odd)."""
    return {F_STAR: 1, F_SQUARES: 4, NORMS: 2, INDEX_TWO: 2}[image]


def rank_QX(m: int, ell: int, d: Optional[int]) -> int:
    if m < 0:
        raise DomainError("m must be nonnegative")
    if m > 1 and d is None:
        raise DomainError("d is undefined for rank-one algebras")
    return m * ell + (m * (m - 1) // 2) * (d or 0)


def p_open_orbit_count(desc: GradedDescriptor) -> int:
    _check(desc)
    k = desc.k
    if desc.gtype == "I":
        return 1
    if desc.gtype == "III":
        return 3 ** (k + 1)
    return (2 if desc.e == 2 else 4) ** k


def summarize(desc: GradedDescriptor) -> OrbitSummary:
    try:
        nonzero: Optional[int] = nonzero_orbit_count(desc)
        note = ""
    except DomainError as exc:
        nonzero, note = None, str(exc)
    return OrbitSummary(nonzero, open_orbit_count(desc), chi0_image(desc),
                        p_open_orbit_count(desc), note)


def t_involution(s: Sequence, k: Optional[int] = None) -> Tuple:
    """(s_0, ..., s_k) -> (-(s_0 + ... + s_k), s_k, s_{k-1}, ..., s_1)."""
    s = tuple(s)
    if not s or (k is not None and len(s) != k + 1):
        raise DomainError(f"expected {'k+1' if k is None else k + 1} slots, got {len(s)}")
    return (-sum(s),) + tuple(reversed(s[1:]))


def character_data(desc: GradedDescriptor) -> CharacterData:
    k, kappa = desc.k, desc.kappa
    degrees = tuple(kappa * (k + 1 - j) for j in range(k + 1))
    plus = tuple(tuple(kappa if i >= j else 0 for i in range(k + 1)) for j in range(k + 1))
    minus = tuple(tuple(-kappa if i <= k - j else 0 for i in range(k + 1)) for j in range(k + 1))
    return CharacterData(degrees, plus, minus)


def psi_character_exponents(desc: GradedDescriptor, s: Sequence) -> Tuple[Tuple, Tuple]:
    """Exponents of |x_i| in |nabla|^s(psi(X)) and in |Delta|^{t(s)}(X), X = sum x_i X_i.

    The two tuples agree exactly when the t(s) transfer law holds.
    """
    k = desc.k
    chars = character_data(desc)
    if len(s) != k + 1:
        raise DomainError("s must have k+1 entries")
    # nabla_j(psi(X)) carries the exponents of chi_j^-
    lhs = tuple(sum(Fraction(s[j]) * chars.a_exponents_minus[j][i] for j in range(k + 1))
                for i in range(k + 1))
    t = t_involution(s)
    rhs = tuple(sum(Fraction(t[j]) * chars.a_exponents[j][i] for j in range(k + 1))
                for i in range(k + 1))
    return lhs, rhs

