"""Nondegenerate-plus-radical quadratic forms over F up to equivalence and similarity.

Over a p-adic field (p odd) a nondegenerate form is classified by rank,
discriminant class and Hasse invariant. Everything below reduces to those
three numbers computed on square classes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from pgo.errors import DomainError
from pgo.padic import (
    ALL_CLASSES,
    DEFAULT,
    PadicContext,
    SquareClass,
    hilbert_symbol,
    parse_scalar,
    square_class,
)

ClassTuple = Tuple[SquareClass, ...]


@dataclass(frozen=True)
class QForm:
    """Diagonal form ``<a_1, ..., a_r>`` plus a radical of dimension ``radical_dim``."""

    coeffs: Tuple[Fraction, ...]
    radical_dim: int = 0
    ctx: PadicContext = field(default=DEFAULT, compare=False)

    def __post_init__(self) -> None:
        coeffs = tuple(Fraction(c) for c in self.coeffs)
        if any(c == 0 for c in coeffs):
            raise DomainError("zero coefficients belong in radical_dim")
        if self.radical_dim < 0:
            raise DomainError("radical_dim must be nonnegative")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_diagonal(cls, entries: Iterable, ctx: PadicContext = DEFAULT) -> "QForm":
        """Build from a diagonal that may contain zeros."""
        entries = [Fraction(e) for e in entries]
        nz = tuple(e for e in entries if e != 0)
        return cls(nz, len(entries) - len(nz), ctx)

    @classmethod
    def from_classes(cls, classes: Iterable[SquareClass], ctx: PadicContext = DEFAULT,
                     radical_dim: int = 0) -> "QForm":
        return cls(tuple(ctx.rep(c) for c in classes), radical_dim, ctx)

    @classmethod
    def parse(cls, text: str, ctx: PadicContext = DEFAULT) -> "QForm":
        tokens = [t for t in text.split(",") if t.strip()]
        return cls.from_diagonal([parse_scalar(t, ctx) for t in tokens], ctx)

    @property
    def rank(self) -> int:
        return len(self.coeffs)

    @property
    def dim(self) -> int:
        return self.rank + self.radical_dim

    @property
    def classes(self) -> ClassTuple:
        return tuple(square_class(c, self.ctx) for c in self.coeffs)

    def scaled(self, c) -> "QForm":
        c = Fraction(c)
        return QForm(tuple(c * a for a in self.coeffs), self.radical_dim, self.ctx)

    def __add__(self, other: "QForm") -> "QForm":
        """Orthogonal sum."""
        return QForm(self.coeffs + other.coeffs, self.radical_dim + other.radical_dim, self.ctx)

    def __repr__(self) -> str:
        body = ", ".join(str(c) for c in self.coeffs)
        rad = f" + 0^{self.radical_dim}" if self.radical_dim else ""
        return f"QForm<{body}>{rad}"


@dataclass(frozen=True)
class WittData:
    witt_index: int
    anisotropic_kernel: QForm


def _class_product(classes: Iterable[SquareClass]) -> SquareClass:
    out = SquareClass.ONE
    for c in classes:
        out = out * c
    return out


@lru_cache(maxsize=None)
def _hilbert_classes(a: SquareClass, b: SquareClass, ctx: PadicContext) -> int:
    return hilbert_symbol(ctx.rep(a), ctx.rep(b), ctx)


def _hasse_classes(classes: ClassTuple, ctx: PadicContext) -> int:
    h = 1
    for i in range(len(classes)):
        for j in range(i + 1, len(classes)):
            h *= _hilbert_classes(classes[i], classes[j], ctx)
    return h


def _minus_one(ctx: PadicContext) -> SquareClass:
    return square_class(-1, ctx)


def _invariants(classes: ClassTuple, ctx: PadicContext) -> Tuple[int, SquareClass, int]:
    return len(classes), _class_product(classes), _hasse_classes(classes, ctx)


def _isotropic_classes(classes: ClassTuple, ctx: PadicContext) -> bool:
    r = len(classes)
    if r <= 1:
        return False
    if r >= 5:
        return True
    d = _class_product(classes)
    m1 = _minus_one(ctx)
    if r == 2:
        return d == m1
    eps = _hasse_classes(classes, ctx)
    if r == 3:
        return eps == _hilbert_classes(m1, m1 * d, ctx)
    return d != SquareClass.ONE or eps == _hilbert_classes(m1, m1, ctx)


def discriminant(q: QForm) -> SquareClass:
    if q.rank == 0:
        raise DomainError("discriminant of a rank-0 form")
    return _class_product(q.classes)


def hasse_invariant(q: QForm) -> int:
    if q.rank == 0:
        raise DomainError("Hasse invariant of a rank-0 form")
    return _hasse_classes(q.classes, q.ctx)


def is_isotropic(q: QForm) -> bool:
    """Isotropy of the nondegenerate part (the radical is ignored)."""
    return _isotropic_classes(q.classes, q.ctx)


def equivalent(q1: QForm, q2: QForm) -> bool:
    if q1.rank != q2.rank or q1.radical_dim != q2.radical_dim:
        return False
    if q1.rank == 0:
        return True
    return _invariants(q1.classes, q1.ctx) == _invariants(q2.classes, q2.ctx)


@lru_cache(maxsize=None)
def _canonical_table(rank: int, ctx: PadicContext) -> Dict[Tuple[int, SquareClass, int], ClassTuple]:
    table: Dict[Tuple[int, SquareClass, int], ClassTuple] = {}
    for combo in combinations_with_replacement(ALL_CLASSES, rank):
        key = _invariants(combo, ctx) if rank else (0, SquareClass.ONE, 1)
        table.setdefault(key, combo)
    return table


def canonical_classes(q: QForm) -> ClassTuple:
    """Lexicographically first sorted class diagonal equivalent to ``q``."""
    if q.rank == 0:
        return ()
    return _canonical_table(q.rank, q.ctx)[_invariants(q.classes, q.ctx)]


def canonical(q: QForm) -> QForm:
    return QForm.from_classes(canonical_classes(q), q.ctx, q.radical_dim)


def anisotropic_classes(rank: int, ctx: PadicContext = DEFAULT) -> List[ClassTuple]:
    """Canonical representatives of the anisotropic classes of a given rank."""
    return [c for c in _canonical_table(rank, ctx).values() if not _isotropic_classes(c, ctx)]


def witt_decompose(q: QForm) -> WittData:
    """Split the nondegenerate part as m hyperbolic planes plus an anisotropic kernel."""
    ctx = q.ctx
    target = _invariants(q.classes, ctx) if q.rank else None
    m1 = _minus_one(ctx)
    hyper = (SquareClass.ONE, m1)
    for m in range(q.rank // 2, -1, -1):
        r = q.rank - 2 * m
        if r > 4:
            break
        for kernel in anisotropic_classes(r, ctx):
            total = hyper * m + kernel
            if r == 0 and m == 0:
                return WittData(0, QForm((), 0, ctx))
            if _invariants(total, ctx) == target:
                return WittData(m, QForm.from_classes(kernel, ctx))
    raise DomainError(f"no Witt decomposition found for {q!r}")  # unreachable for valid forms


def similar(q1: QForm, q2: QForm) -> bool:
    return any(equivalent(q1.scaled(q1.ctx.rep(c)), q2) for c in ALL_CLASSES)


def similarity_class_id(q: QForm) -> str:
    """A stable label shared exactly by similar forms: the least canonical scaled diagonal."""
    if q.rank == 0:
        return ""
    best = min(canonical_classes(q.scaled(q.ctx.rep(c))) for c in ALL_CLASSES)
    return ",".join(c.tag for c in best)


def represented_classes(q: QForm, allow_isotropic: bool = False) -> FrozenSet[SquareClass]:
    """Square classes of nonzero values of ``q``; c is represented iff q + <-c> is isotropic."""
    ctx = q.ctx
    if is_isotropic(q):
        if not allow_isotropic:
            raise DomainError("isotropic form represents every class")
        return frozenset(ALL_CLASSES)
    classes = q.classes
    m1 = _minus_one(ctx)
    return frozenset(c for c in ALL_CLASSES if _isotropic_classes(classes + (m1 * c,), ctx))


def stabilizing_scalars(q: QForm) -> FrozenSet[SquareClass]:
    """Classes c with c*q equivalent to q."""
    return frozenset(c for c in ALL_CLASSES if equivalent(q.scaled(q.ctx.rep(c)), q))


def describe(q: QForm) -> dict:
    """JSON-ready summary used by the CLI."""
    wd = witt_decompose(q)
    return {
        "rank": q.rank,
        "radical_dim": q.radical_dim,
        "disc": discriminant(q).tag if q.rank else None,
        "hasse": hasse_invariant(q) if q.rank else None,
        "isotropic": is_isotropic(q),
        "witt_index": wd.witt_index,
        "anisotropic_kernel": [c.tag for c in wd.anisotropic_kernel.classes],
        "similarity_class_id": similarity_class_id(q),
    }
