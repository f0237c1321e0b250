"""Exact dense linear algebra over F (Fraction) or E (ExtScalar).

Matrices are tuples of row tuples. Entries only need field operations and
``== 0``, so the same routines serve both fields.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, List, Sequence, Tuple

from pgo.errors import DomainError
from pgo.padic import ExtScalar, conj

Matrix = Tuple[Tuple, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def mat(rows: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(r) for r in rows)


def zeros(n: int, m: int | None = None) -> Matrix:
    m = n if m is None else m
    return tuple((ZERO,) * m for _ in range(n))


def identity(n: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def diag(entries: Sequence) -> Matrix:
    n = len(entries)
    return tuple(tuple(entries[i] if i == j else ZERO for j in range(n)) for i in range(n))


def shape(a: Matrix) -> Tuple[int, int]:
    return len(a), (len(a[0]) if a else 0)


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a)) if a else a


def conj_matrix(a: Matrix) -> Matrix:
    return tuple(tuple(conj(x) for x in row) for row in a)


def star(a: Matrix) -> Matrix:
    """Conjugate transpose."""
    return transpose(conj_matrix(a))


def add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def scale(c, a: Matrix) -> Matrix:
    return tuple(tuple(c * x for x in row) for row in a)


def neg(a: Matrix) -> Matrix:
    return tuple(tuple(-x for x in row) for row in a)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    out = []
    for row in a:
        out_row = []
        for col in bt:
            acc = ZERO
            for x, y in zip(row, col):
                if x and y:
                    acc = acc + x * y
            out_row.append(acc)
        out.append(tuple(out_row))
    return tuple(out)


def mmul(*ms: Matrix) -> Matrix:
    out = ms[0]
    for m in ms[1:]:
        out = matmul(out, m)
    return out


def is_zero_matrix(a: Matrix) -> bool:
    return all(x == 0 for row in a for x in row)


def equal(a: Matrix, b: Matrix) -> bool:
    return shape(a) == shape(b) and all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def submatrix(a: Matrix, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
    return tuple(tuple(a[i][j] for j in cols) for i in rows)


def block(blocks: Sequence[Sequence[Matrix]]) -> Matrix:
    """Assemble a block matrix from a grid of equally sized rows of blocks."""
    out: List[tuple] = []
    for brow in blocks:
        height = len(brow[0])
        for i in range(height):
            row: tuple = ()
            for b in brow:
                row += tuple(b[i])
            out.append(row)
    return tuple(out)


def _eliminate(a: Matrix) -> Tuple[List[List], int, object]:
    """Row-reduce a copy of ``a``; return (echelon rows, rank, det factor)."""
    m = [list(r) for r in a]
    n_rows, n_cols = shape(a)
    rank = 0
    det_acc = ONE
    for col in range(n_cols):
        pivot = next((r for r in range(rank, n_rows) if m[r][col] != 0), None)
        if pivot is None:
            continue
        if pivot != rank:
            m[rank], m[pivot] = m[pivot], m[rank]
            det_acc = -det_acc
        pv = m[rank][col]
        det_acc = det_acc * pv
        inv = 1 / pv
        for r in range(rank + 1, n_rows):
            f = m[r][col]
            if f != 0:
                f = f * inv
                mr, mp = m[r], m[rank]
                for c in range(col, n_cols):
                    if mp[c] != 0:
                        mr[c] = mr[c] - f * mp[c]
        rank += 1
        if rank == n_rows:
            break
    return m, rank, det_acc


def det(a: Matrix):
    n, m = shape(a)
    if n != m:
        raise DomainError("determinant of a non-square matrix")
    if n == 0:
        return ONE
    _, rank, d = _eliminate(a)
    return d if rank == n else ZERO


def rank(a: Matrix) -> int:
    if not a:
        return 0
    return _eliminate(a)[1]


def inverse(a: Matrix) -> Matrix:
    n, m = shape(a)
    if n != m:
        raise DomainError("inverse of a non-square matrix")
    aug = [list(a[i]) + [ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise DomainError("singular matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def nullity(rows: Sequence[Sequence], n_vars: int) -> int:
    """Dimension of the solution space of the homogeneous system ``rows``."""
    if not rows:
        return n_vars
    return n_vars - rank(mat(rows))


def leading_minor(a: Matrix, size: int):
    return det(submatrix(a, range(size), range(size)))


def trailing_minor(a: Matrix, size: int):
    n = len(a)
    idx = range(n - size, n)
    return det(submatrix(a, idx, idx))


def congruence_diagonalize(a: Matrix, hermitian: bool = False) -> List:
    """Diagonal entries of a form congruent to the symmetric/hermitian ``a``.

    Returns a list of length n; zero entries span the radical. For hermitian
    input the entries are real (they lie in F).
    """
    n = len(a)
    m = [list(r) for r in a]
    cj: Callable = conj if hermitian else (lambda x: x)
    out: List = []
    for i in range(n):
        if m[i][i] == 0:
            piv = next((j for j in range(i + 1, n) if m[j][j] != 0), None)
            if piv is not None:
                _swap(m, i, piv)
            else:
                j = next((j for j in range(i + 1, n) if m[i][j] != 0), None)
                if j is None:
                    out.append(ZERO)
                    continue
                for c in _multipliers(m[i][j], hermitian):
                    # row_i += c row_j, col_i += conj(c) col_j
                    new_ii = m[i][i] + c * m[j][i] + cj(c) * m[i][j] + c * cj(c) * m[j][j]
                    if new_ii != 0:
                        _add_multiple(m, i, j, c, cj)
                        break
        pv = m[i][i]
        out.append(_realify(pv) if hermitian else pv)
        inv = 1 / pv
        for r in range(i + 1, n):
            f = m[r][i]
            if f != 0:
                f = f * inv
                _add_multiple(m, r, i, -f, cj)
    return out


def _multipliers(x, hermitian: bool):
    yield ONE
    if hermitian and isinstance(x, ExtScalar):
        yield ExtScalar(0, 1, x.u)


def _swap(m: List[List], i: int, j: int) -> None:
    m[i], m[j] = m[j], m[i]
    for row in m:
        row[i], row[j] = row[j], row[i]


def _add_multiple(m: List[List], target: int, source: int, c, cj: Callable) -> None:
    """row_target += c*row_source then col_target += conj(c)*col_source."""
    m[target] = [x + c * y for x, y in zip(m[target], m[source])]
    cc = cj(c)
    for row in m:
        row[target] = row[target] + cc * row[source]


def _realify(x):
    if isinstance(x, ExtScalar):
        if x.b != 0:
            raise DomainError("hermitian diagonal entry outside F")
        return x.a
    return x
