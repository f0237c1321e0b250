"""Matrix models of (G, V+) with exact group actions and relative invariants.

Conventions shared by every model:

* V+ sits in the upper-right corner of an ambient ``2N x 2N`` matrix, V- in
  the lower-left, and ``H0 = diag(I, -I)``.
* The slot of ``lambda_j`` is the diagonal (block) position ``k - j``, so
  ``Delta_j`` is a top-left minor of ``k + 1 - j`` blocks.
* ``psi(X) = -X^{-1}`` and gamma is conjugation by ``[[0, G], [-G, 0]]`` with
  ``G`` the anti-diagonal, i.e. ``X -> -G X G`` on either side.
* The unipotent radical N is block lower-triangular in matrix coordinates.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from pgo import linalg as la
from pgo.catalog import GradedDescriptor, realized_descriptor
from pgo.errors import DomainError
from pgo.orbits import F_SQUARES, F_STAR, INDEX_TWO, NORMS, chi0_image
from pgo.padic import (
    ALL_CLASSES,
    DEFAULT,
    ExtScalar,
    PadicContext,
    SquareClass,
    conj,
    is_norm,
    is_square,
    legendre,
    square_class,
    valuation,
)
from pgo.quadratic_forms import QForm, similarity_class_id, witt_decompose

Matrix = la.Matrix
ZERO, ONE = Fraction(0), Fraction(1)
MAX_ENUM_SIZE = 6


@dataclass(frozen=True)
class OrbitInvariant:
    tag: str
    rank: int
    payload: Tuple = ()

    def to_json(self) -> dict:
        return {"tag": self.tag, "rank": self.rank, "payload": list(self.payload)}


@dataclass(frozen=True)
class GroupElement:
    tag: str
    mats: Tuple[Matrix, ...]
    mu: Fraction = ONE


@dataclass(frozen=True, eq=False)
class VElement:
    """An element of V+ (``sign=+1``) or V- (``sign=-1``) of a model."""

    model: "Model"
    matrix: Matrix
    sign: int = 1

    def __post_init__(self) -> None:
        ok = self.model.is_vplus(self.matrix) if self.sign > 0 else self.model.is_vminus(self.matrix)
        if not ok:
            side = "V+" if self.sign > 0 else "V-"
            raise DomainError(f"matrix does not satisfy the {self.model.tag} {side} conditions")

    @property
    def tag(self) -> str:
        return self.model.tag

    def __eq__(self, other) -> bool:
        return (isinstance(other, VElement) and self.model == other.model
                and self.sign == other.sign and la.equal(self.matrix, other.matrix))

    def __hash__(self) -> int:
        return hash((self.model, self.sign, self.matrix))

    def scale(self, c) -> "VElement":
        return VElement(self.model, la.scale(c, self.matrix), self.sign)


def _anti(n: int) -> Matrix:
    return tuple(tuple(ONE if i + j == n - 1 else ZERO for j in range(n)) for i in range(n))


def _elem(n: int, i: int, j: int, value) -> Matrix:
    return tuple(tuple(value if (r, c) == (i, j) else ZERO for c in range(n)) for r in range(n))


def _pick_nonzero(rng: random.Random, lo: int = -4, hi: int = 4) -> Fraction:
    while True:
        v = rng.randint(lo, hi)
        if v:
            return Fraction(v)


class Model:
    """Base class; subclasses fix the field, block size and symmetry."""

    tag = ""
    block = 1
    over_e = False
    kappa = 1
    ambient_sign = 1

    def __init__(self, k: int, ctx: PadicContext = DEFAULT):
        if k < 0:
            raise DomainError("k must be nonnegative")
        self.k = k
        self.ctx = ctx

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self.k == other.k and self.ctx == other.ctx

    def __hash__(self) -> int:
        return hash((self.tag, self.k, self.ctx))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(k={self.k}, p={self.ctx.p})"

    @property
    def size(self) -> int:
        """Matrix size N of V+ elements."""
        return self.block * (self.k + 1)

    def descriptor(self) -> GradedDescriptor:
        return realized_descriptor(self.tag, self.k + 1 if self.tag in ("gl", "sp", "unitary") else self.k)

    # scalars

    def ext(self, a, b=0) -> ExtScalar:
        return ExtScalar(a, b, self.ctx.u)

    def to_f(self, x) -> Fraction:
        if isinstance(x, ExtScalar):
            if x.b != 0:
                raise DomainError(f"value {x!r} is not in F")
            return x.a
        return Fraction(x)

    def random_scalar(self, rng: random.Random, nonzero: bool = True):
        if self.over_e:
            while True:
                x = self.ext(rng.randint(-3, 3), rng.randint(-3, 3))
                if x or not nonzero:
                    return x
        return _pick_nonzero(rng) if nonzero else Fraction(rng.randint(-3, 3))

    def random_unit_scalar(self, rng: random.Random) -> Fraction:
        """A nonzero rational drawn partly from the class representatives."""
        base = self.ctx.rep(rng.choice(ALL_CLASSES))
        return base * _pick_nonzero(rng, -3, 3) ** 2 * rng.choice((1, 1, -1 if is_square(-1, self.ctx) else 1))

    # spaces

    def is_vplus(self, m: Matrix) -> bool:
        raise NotImplementedError

    def is_vminus(self, m: Matrix) -> bool:
        return self.is_vplus(m)

    def vplus_basis(self) -> List[Matrix]:
        raise NotImplementedError

    def vminus_basis(self) -> List[Matrix]:
        return self.vplus_basis()

    def vplus_constraints(self, m: Matrix) -> List[Fraction]:
        """F-linear quantities that vanish exactly on V+ (used for the dimension count)."""
        raise NotImplementedError

    def coordinates(self) -> int:
        """Number of F-coordinates of an N x N matrix over the model's field."""
        return self.size * self.size * (2 if self.over_e else 1)

    def _coordinate_matrix(self, idx: int) -> Matrix:
        n = self.size
        per = 2 if self.over_e else 1
        cell, part = divmod(idx, per)
        i, j = divmod(cell, n)
        value = (self.ext(1, 0) if part == 0 else self.ext(0, 1)) if self.over_e else ONE
        zero = self.ext(0) if self.over_e else ZERO
        return tuple(tuple(value if (r, c) == (i, j) else zero for c in range(n)) for r in range(n))

    def dim_by_constraints(self) -> int:
        """dim_F V+ as the nullity of its defining linear conditions."""
        rows_t = [self.vplus_constraints(self._coordinate_matrix(c)) for c in range(self.coordinates())]
        if not rows_t or not rows_t[0]:
            return self.coordinates()
        rows = [list(r) for r in zip(*rows_t)]
        return la.nullity(rows, self.coordinates())

    def element(self, matrix: Sequence[Sequence]) -> VElement:
        return VElement(self, la.mat(matrix), 1)

    def minus_element(self, matrix: Sequence[Sequence]) -> VElement:
        return VElement(self, la.mat(matrix), -1)

    def zero(self) -> VElement:
        return VElement(self, self._zero_matrix(), 1)

    def _zero_matrix(self) -> Matrix:
        z = self.ext(0) if self.over_e else ZERO
        return tuple((z,) * self.size for _ in range(self.size))

    def combine(self, basis: Sequence[Matrix], coeffs: Sequence[Fraction]) -> Matrix:
        out = self._zero_matrix()
        for c, b in zip(coeffs, basis):
            if c:
                out = la.add(out, la.scale(c, b))
        return out

    def random_vplus(self, rng: random.Random, spread: int = 3) -> VElement:
        basis = self.vplus_basis()
        coeffs = [Fraction(rng.randint(-spread, spread)) for _ in basis]
        return VElement(self, self.combine(basis, coeffs), 1)

    def random_generic(self, rng: random.Random, all_minors: bool = False) -> VElement:
        """Random X with Delta_0(X) != 0 (and every Delta_j if ``all_minors``)."""
        for _ in range(1000):
            x = self.random_vplus(rng)
            js = range(self.k + 1) if all_minors else (0,)
            if all(self.delta(j, x) != 0 for j in js):
                return x
        raise DomainError("failed to sample a generic element")

    # slots and grading

    def position(self, j: int) -> int:
        self._check_index(j)
        return self.k - j

    def _check_index(self, j: int) -> None:
        if not 0 <= j <= self.k:
            raise DomainError(f"index {j} outside 0..{self.k}")

    def diagonal_element(self, values: Sequence) -> VElement:
        """X = sum_j values[j] placed in the slot of lambda_j."""
        if len(values) != self.k + 1:
            raise DomainError(f"need {self.k + 1} slot values")
        blocks = [self.slot_block(v) for v in values]
        n, b = self.size, self.block
        rows = [list(r) for r in self._zero_matrix()]
        for j, blk in enumerate(blocks):
            p = self.position(j) * b
            for r in range(b):
                for c in range(b):
                    rows[p + r][p + c] = blk[r][c]
        return VElement(self, la.mat(rows), 1)

    def slot_block(self, value) -> Matrix:
        """The b x b block for a slot value (a scalar for block size 1)."""
        return ((value if not self.over_e or isinstance(value, ExtScalar) else self.ext(value),),)

    def slot_unit(self, x) -> object:
        """x times the slot value of I+ (x in F)."""
        return Fraction(x)

    def identity_element(self) -> VElement:
        """I+ = X_0 + ... + X_k."""
        return self.diagonal_element([self.slot_unit(1)] * (self.k + 1))

    def grade_decompose(self, x: VElement) -> Dict[Tuple, Matrix]:
        """Split X into its lambda_j parts and its E_{i,j}(1,1) parts."""
        b = self.block
        out: Dict[Tuple, Matrix] = {}
        for r in range(self.k + 1):
            for s in range(r, self.k + 1):
                cells = {(r * b + i, s * b + j) for i in range(b) for j in range(b)}
                cells |= {(s * b + j, r * b + i) for i in range(b) for j in range(b)}
                comp = tuple(tuple(x.matrix[i][j] if (i, j) in cells else self._zero_matrix()[0][0]
                                   for j in range(self.size)) for i in range(self.size))
                if r == s:
                    key = ("lambda", self.k - r)
                else:
                    key = ("E", self.k - s, self.k - r)
                out[key] = comp
        return out

    # relative invariants

    def delta(self, j: int, x: VElement) -> Fraction:
        self._check_index(j)
        s = self.k + 1 - j
        return self.to_f(self._delta_sign(s) * la.leading_minor(x.matrix, s * self.block))

    def _delta_sign(self, s: int) -> int:
        return 1

    def psi(self, x: VElement) -> VElement:
        if self.delta(0, x) == 0:
            raise DomainError("psi needs a generic element (Delta_0 != 0)")
        return VElement(self, la.neg(la.inverse(x.matrix)), -1)

    def gamma(self, z: VElement) -> VElement:
        """Exchange V+ and V- by X -> -G X G."""
        g = _anti(self.size)
        return VElement(self, la.neg(la.mmul(g, z.matrix, g)), -z.sign)

    def nabla(self, j: int, y: VElement) -> Fraction:
        if y.sign > 0:
            raise DomainError("nabla takes an element of V-")
        return self.delta(j, self.gamma(y))

    def ambient(self, z: VElement) -> Matrix:
        n = self.size
        zero = self._zero_matrix()
        if z.sign > 0:
            return la.block([[zero, z.matrix], [zero, zero]])
        return la.block([[zero, zero], [z.matrix, zero]])

    def h0(self) -> Matrix:
        n = self.size
        return la.diag([ONE] * n + [-ONE] * n)

    def triple_holds(self, x: VElement) -> bool:
        """[psi(X), X] = H0 in the ambient matrix algebra."""
        y = self.psi(x)
        X, Y = self.ambient(x), self.ambient(y)
        br = la.sub(la.matmul(Y, X), la.matmul(X, Y))
        return la.equal(br, self.h0())

    # group

    def identity(self) -> GroupElement:
        return GroupElement(self.tag, (la.identity(self.size),), ONE)

    def compose(self, g: GroupElement, h: GroupElement) -> GroupElement:
        self._check_tag(g)
        self._check_tag(h)
        return GroupElement(self.tag, tuple(la.matmul(a, b) for a, b in zip(g.mats, h.mats)), g.mu * h.mu)

    def _check_tag(self, g: GroupElement) -> None:
        if g.tag != self.tag:
            raise DomainError(f"group element for {g.tag!r} used on {self.tag!r}")
        if g.mu == 0:
            raise DomainError("mu must be nonzero")

    def act(self, g: GroupElement, x: VElement) -> VElement:
        raise NotImplementedError

    def random_group(self, rng: random.Random, length: Optional[int] = None) -> GroupElement:
        raise NotImplementedError

    def random_unipotent(self, rng: random.Random) -> GroupElement:
        raise NotImplementedError

    def _lower_unipotent(self, rng: random.Random, entry=None) -> Matrix:
        n = self.size
        rows = [list(r) for r in la.identity(n)]
        if self.over_e:
            rows = [[self.ext(v) for v in r] for r in rows]
        for i in range(n):
            for j in range(i):
                if rng.random() < 0.7:
                    rows[i][j] = entry(rng) if entry else self.random_scalar(rng, nonzero=False)
        return la.mat(rows)

    def _random_gl(self, rng: random.Random, length: Optional[int] = None) -> Matrix:
        """A product of random transvections, diagonal scalings and swaps."""
        n = self.size
        g = la.identity(n)
        if self.over_e:
            g = la.mat([[self.ext(v) for v in r] for r in g])
        steps = length if length is not None else 2 * n + 2
        for _ in range(steps):
            kind = rng.random()
            if n > 1 and kind < 0.6:
                i, j = rng.sample(range(n), 2)
                m = la.add(la.identity(n), _elem(n, i, j, self.random_scalar(rng)))
            elif kind < 0.85:
                i = rng.randrange(n)
                m = la.diag([self.random_scalar(rng) if r == i else ONE for r in range(n)])
            elif n > 1:
                i, j = rng.sample(range(n), 2)
                perm = list(range(n))
                perm[i], perm[j] = perm[j], perm[i]
                m = tuple(tuple(ONE if perm[r] == c else ZERO for c in range(n)) for r in range(n))
            else:
                continue
            g = la.matmul(m, g)
        return g

    # orbits

    def orbit_invariants(self, x: VElement) -> OrbitInvariant:
        raise NotImplementedError

    def same_orbit(self, x: VElement, y: VElement) -> bool:
        if x.model != y.model:
            raise DomainError("elements from different models")
        return self.orbit_invariants(x) == self.orbit_invariants(y)

    def representative(self, inv: OrbitInvariant) -> VElement:
        raise NotImplementedError

    def slot_grid(self) -> List:
        """Values tried per slot by the brute-force enumeration (zero first)."""
        return [ZERO] + [self.ctx.rep(c) for c in ALL_CLASSES]

    def enumerate_orbit_classes(self) -> List[OrbitInvariant]:
        """Distinct invariants of nonzero diagonal elements over the slot grid."""
        if self.k + 1 > MAX_ENUM_SIZE:
            raise DomainError(f"enumeration limited to {MAX_ENUM_SIZE} slots")
        seen = set()
        for values in itertools.product(self.slot_grid(), repeat=self.k + 1):
            if all(self._is_zero_value(v) for v in values):
                continue
            seen.add(self.orbit_invariants(self.diagonal_element(values)))
        return sorted(seen, key=lambda inv: (inv.rank, repr(inv.payload)))

    def generic_slot_grid(self) -> List:
        return [self.ctx.rep(c) for c in ALL_CLASSES]

    def enumerate_p_orbit_classes(self) -> List[Tuple]:
        seen = set()
        for values in itertools.product(self.generic_slot_grid(), repeat=self.k + 1):
            seen.add(self.p_orbit_class(self.diagonal_element(values)))
        return sorted(seen, key=repr)

    @staticmethod
    def _is_zero_value(v) -> bool:
        if isinstance(v, tuple):
            return all(x == 0 for row in v for x in row)
        return v == 0

    def p_orbit_class(self, x: VElement) -> Tuple:
        raise NotImplementedError

    def _generic_deltas(self, x: VElement) -> List[Fraction]:
        ds = [self.delta(j, x) for j in range(self.k + 1)]
        if any(d == 0 for d in ds):
            raise DomainError("not in the open P-stable set: some Delta_j vanishes")
        return ds

    def chi0_member(self, ratio: Fraction) -> bool:
        image = chi0_image(self.descriptor())
        if ratio == 0:
            return False
        if image == F_STAR:
            return True
        if image == F_SQUARES:
            return is_square(ratio, self.ctx)
        if image in (NORMS, INDEX_TWO):
            return is_norm(ratio, self.ctx)
        raise DomainError(f"unknown image {image!r}")

    # quadratic form Q_X on V-

    def trace_pairing(self, x: Matrix, y: Matrix, y2: Matrix) -> Fraction:
        """-Tr(X Y X Y2): the form -1/2 b([X,Y],[X,Y2]) for b the ambient trace form."""
        m = la.mmul(x, y, x)
        acc = ZERO
        n = self.size
        for i in range(n):
            for j in range(n):
                if m[i][j] and y2[j][i]:
                    acc = acc + m[i][j] * y2[j][i]
        return -self.to_f(acc)

    def q_form_QX(self, x: VElement) -> QForm:
        basis = self.vminus_basis()
        mats = [la.mmul(x.matrix, y, x.matrix) for y in basis]
        n = self.size
        sparse = [[(i, j, y[i][j]) for i in range(n) for j in range(n) if y[i][j] != 0] for y in basis]
        gram = []
        for a in range(len(basis)):
            row = []
            for b in range(len(basis)):
                acc = ZERO
                for i, j, v in sparse[b]:
                    w = mats[a][j][i]
                    if w:
                        acc = acc + w * v
                row.append(-self.to_f(acc))
            gram.append(tuple(row))
        return QForm.from_diagonal(la.congruence_diagonalize(la.mat(gram)), self.ctx)


# --- GL: V+ = M(n, F), (g1, g2, mu) . X = mu^-1 g1 X g2^-1 ---------------------

class GLModel(Model):
    tag = "gl"

    def is_vplus(self, m: Matrix) -> bool:
        return la.shape(m) == (self.size, self.size)

    def vplus_basis(self) -> List[Matrix]:
        n = self.size
        return [_elem(n, i, j, ONE) for i in range(n) for j in range(n)]

    def vplus_constraints(self, m: Matrix) -> List[Fraction]:
        return []

    def identity(self) -> GroupElement:
        i = la.identity(self.size)
        return GroupElement(self.tag, (i, i), ONE)

    def act(self, g: GroupElement, x: VElement) -> VElement:
        self._check_tag(g)
        g1, g2 = g.mats
        return VElement(self, la.scale(1 / g.mu, la.mmul(g1, x.matrix, la.inverse(g2))), 1)

    def act_minus(self, g: GroupElement, y: VElement) -> VElement:
        g1, g2 = g.mats
        return VElement(self, la.scale(g.mu, la.mmul(g2, y.matrix, la.inverse(g1))), -1)

    def random_group(self, rng: random.Random, length: Optional[int] = None) -> GroupElement:
        return GroupElement(self.tag, (self._random_gl(rng, length), self._random_gl(rng, length)),
                            self.random_unit_scalar(rng))

    def random_unipotent(self, rng: random.Random) -> GroupElement:
        return GroupElement(self.tag, (self._lower_unipotent(rng), la.transpose(self._lower_unipotent(rng))), ONE)

    def orbit_invariants(self, x: VElement) -> OrbitInvariant:
        return OrbitInvariant(self.tag, la.rank(x.matrix))

    def representative(self, inv: OrbitInvariant) -> VElement:
        if not 0 <= inv.rank <= self.size or inv.payload:
            raise DomainError(f"unrealizable invariant {inv}")
        return self.diagonal_element([ONE if self.position(j) < inv.rank else ZERO for j in range(self.k + 1)])

    def p_orbit_class(self, x: VElement) -> Tuple:
        self._generic_deltas(x)
        return ()


# --- SP: V+ = Sym(n, F), (g, mu) . B = mu^-1 g B g^t --------------------------

class SPModel(Model):
    tag = "sp"

    def is_vplus(self, m: Matrix) -> bool:
        return la.shape(m) == (self.size, self.size) and la.equal(m, la.transpose(m))

    def vplus_basis(self) -> List[Matrix]:
        n = self.size
        out = []
        for i in range(n):
            for j in range(i, n):
                e = _elem(n, i, j, ONE)
                out.append(e if i == j else la.add(e, la.transpose(e)))
        return out

    def vplus_constraints(self, m: Matrix) -> List[Fraction]:
        n = self.size
        return [m[i][j] - m[j][i] for i in range(n) for j in range(i + 1, n)]

    def act(self, g: GroupElement, x: VElement) -> VElement:
        self._check_tag(g)
        (h,) = g.mats
        return VElement(self, la.scale(1 / g.mu, la.mmul(h, x.matrix, la.transpose(h))), 1)

    def act_minus(self, g: GroupElement, y: VElement) -> VElement:
        (h,) = g.mats
        hi = la.inverse(h)
        return VElement(self, la.scale(g.mu, la.mmul(la.transpose(hi), y.matrix, hi)), -1)

    def random_group(self, rng: random.Random, length: Optional[int] = None) -> GroupElement:
        return GroupElement(self.tag, (self._random_gl(rng, length),), self.random_unit_scalar(rng))

    def random_unipotent(self, rng: random.Random) -> GroupElement:
        return GroupElement(self.tag, (self._lower_unipotent(rng),), ONE)

    def nondegenerate_part(self, x: VElement) -> QForm:
        return QForm.from_diagonal(la.congruence_diagonalize(x.matrix), self.ctx)

    def orbit_invariants(self, x: VElement) -> OrbitInvariant:
        q = self.nondegenerate_part(x)
        if q.rank == 0:
            return OrbitInvariant(self.tag, 0)
        wd = witt_decompose(q)
        kernel_id = similarity_class_id(wd.anisotropic_kernel)
        return OrbitInvariant(self.tag, q.rank, (wd.witt_index, kernel_id))

    def representative(self, inv: OrbitInvariant) -> VElement:
        m = inv.rank
        if not 0 <= m <= self.size:
            raise DomainError(f"unrealizable invariant {inv}")
        if m == 0:
            return self.zero()
        witt, kernel_id = inv.payload
        tags = [t for t in kernel_id.split(",") if t]
        if 2 * witt + len(tags) != m:
            raise DomainError(f"unrealizable invariant {inv}")
        kernel = QForm.from_classes([SquareClass.from_tag(t) for t in tags], self.ctx)
        if witt_decompose(kernel).witt_index:
            raise DomainError(f"kernel {kernel_id} is not anisotropic")
        diag = [ONE, -ONE] * witt + list(kernel.coeffs)
        vals = [ZERO] * (self.k + 1)
        for pos, v in enumerate(diag):
            vals[self.k - pos] = v
        x = self.diagonal_element(vals)
        if self.orbit_invariants(x) != inv:
            raise DomainError(f"unrealizable invariant {inv}")
        return x

    def p_orbit_class(self, x: VElement) -> Tuple:
        ds = self._generic_deltas(x)
        k = self.k
        return tuple(square_class(ds[j] / ds[k] ** (k + 1 - j), self.ctx).tag for j in range(k))


# --- UNITARY: V+ = Herm(n, E), (g, mu) . B = mu^-1 g B g^* --------------------

class UnitaryModel(Model):
    tag = "unitary"
    over_e = True

    def is_vplus(self, m: Matrix) -> bool:
        return la.shape(m) == (self.size, self.size) and la.equal(m, la.star(m))

    def vplus_basis(self) -> List[Matrix]:
        n = self.size
        zero = self.ext(0)
        out = []
        for i in range(n):
            for j in range(i, n):
                if i == j:
                    out.append(_fill(n, {(i, i): self.ext(1)}, zero))
                else:
                    out.append(_fill(n, {(i, j): self.ext(1), (j, i): self.ext(1)}, zero))
                    out.append(_fill(n, {(i, j): self.ext(0, 1), (j, i): self.ext(0, -1)}, zero))
        return out

    def vplus_constraints(self, m: Matrix) -> List[Fraction]:
        n = self.size
        out = []
        for i in range(n):
            for j in range(i, n):
                out.extend(_parts(m[i][j] - conj(m[j][i])))
        return out

    def slot_block(self, value) -> Matrix:
        return ((self.ext(value) if not isinstance(value, ExtScalar) else value,),)

    def act(self, g: GroupElement, x: VElement) -> VElement:
        self._check_tag(g)
        (h,) = g.mats
        return VElement(self, la.scale(1 / g.mu, la.mmul(h, x.matrix, la.star(h))), 1)

    def act_minus(self, g: GroupElement, y: VElement) -> VElement:
        (h,) = g.mats
        hi = la.inverse(h)
        return VElement(self, la.scale(g.mu, la.mmul(la.star(hi), y.matrix, hi)), -1)

    def random_group(self, rng: random.Random, length: Optional[int] = None) -> GroupElement:
        return GroupElement(self.tag, (self._random_gl(rng, length),), self.random_unit_scalar(rng))

    def random_unipotent(self, rng: random.Random) -> GroupElement:
        return GroupElement(self.tag, (self._lower_unipotent(rng),), ONE)

    def identity(self) -> GroupElement:
        return GroupElement(self.tag, (la.mat([[self.ext(v) for v in r] for r in la.identity(self.size)]),), ONE)

    def orbit_invariants(self, x: VElement) -> OrbitInvariant:
        diag = [self.to_f(d) for d in la.congruence_diagonalize(x.matrix, hermitian=True) if d != 0]
        m = len(diag)
        if m == 0:
            return OrbitInvariant(self.tag, 0)
        if m % 2:
            return OrbitInvariant(self.tag, m)
        det = Fraction(1)
        for d in diag:
            det *= d
        return OrbitInvariant(self.tag, m, (valuation(det, self.ctx.p) % 2,))

    def representative(self, inv: OrbitInvariant) -> VElement:
        m = inv.rank
        if not 0 <= m <= self.size:
            raise DomainError(f"unrealizable invariant {inv}")
        diag = [ONE] * m
        if m and m % 2 == 0:
            (parity,) = inv.payload
            if parity:
                diag[-1] = Fraction(self.ctx.pi)
        elif inv.payload:
            raise DomainError(f"unrealizable invariant {inv}")
        vals = [ZERO] * (self.k + 1)
        for pos, v in enumerate(diag):
            vals[self.k - pos] = v
        return self.diagonal_element(vals)

    def p_orbit_class(self, x: VElement) -> Tuple:
        ds = self._generic_deltas(x)
        k = self.k
        return tuple(valuation(ds[j] / ds[k] ** (k + 1 - j), self.ctx.p) % 2 for j in range(k))


def _parts(x) -> Tuple[Fraction, Fraction]:
    if isinstance(x, ExtScalar):
        return x.a, x.b
    return Fraction(x), ZERO


def _fill(n: int, entries: Dict[Tuple[int, int], object], zero) -> Matrix:
    return tuple(tuple(entries.get((i, j), zero) for j in range(n)) for i in range(n))


# --- TYPE3: V+ = Sym_J(2(k+1), E), (g, mu) . X = mu^-1 g X g^t ----------------

class Type3Model(Model):
    """Blocks of size 2 over E = F(sqrt u); J = diag(J_pi, ..., J_pi)."""

    tag = "type3"
    block = 2
    over_e = True
    kappa = 2

    @cached_property
    def J(self) -> Matrix:
        jp = ((self.ext(0), self.ext(self.ctx.pi)), (self.ext(1), self.ext(0)))
        return self._block_diag([jp] * (self.k + 1))

    def _block_diag(self, blocks: Sequence[Matrix]) -> Matrix:
        n = self.size
        rows = [list(r) for r in self._zero_matrix()]
        for t, blk in enumerate(blocks):
            for r in range(2):
                for c in range(2):
                    rows[2 * t + r][2 * t + c] = blk[r][c]
        return la.mat(rows)

    def _delta_sign(self, s: int) -> int:
        return -1 if s % 2 else 1

    def is_vplus(self, m: Matrix) -> bool:
        if la.shape(m) != (self.size, self.size) or not la.equal(m, la.transpose(m)):
            return False
        return la.equal(la.matmul(self.J, la.conj_matrix(m)), la.matmul(m, la.transpose(self.J)))

    def is_vminus(self, m: Matrix) -> bool:
        if la.shape(m) != (self.size, self.size) or not la.equal(m, la.transpose(m)):
            return False
        return la.equal(la.matmul(la.transpose(self.J), la.conj_matrix(m)), la.matmul(m, self.J))

    def vplus_constraints(self, m: Matrix) -> List[Fraction]:
        n = self.size
        out: List[Fraction] = []
        sym = la.sub(m, la.transpose(m))
        real = la.sub(la.matmul(self.J, la.conj_matrix(m)), la.matmul(m, la.transpose(self.J)))
        for mat_ in (sym, real):
            for i in range(n):
                for j in range(n):
                    out.extend(_parts(mat_[i][j]))
        return out

    def _basis(self, plus: bool) -> List[Matrix]:
        """F-basis from the block shapes [[pi x~, c], [c, x]] / [[y, c], [c, pi y~]] and off-diagonal analogues."""
        n, pi, zero = self.size, self.ctx.pi, self.ext(0)
        e = [self.ext(1), self.ext(0, 1)]
        out = []
        for t in range(self.k + 1):
            a, b = 2 * t, 2 * t + 1
            out.append(_fill(n, {(a, b): self.ext(1), (b, a): self.ext(1)}, zero))
            for x in e:
                if plus:
                    out.append(_fill(n, {(a, a): pi * conj(x), (b, b): x}, zero))
                else:
                    out.append(_fill(n, {(a, a): x, (b, b): pi * conj(x)}, zero))
        for r in range(self.k + 1):
            for s in range(r + 1, self.k + 1):
                for x in e:
                    # block (r, s) = [[pi s~, r~], [r, s]] in V+, [[p, r~], [r, pi p~]] in V-
                    if plus:
                        cells = {(0, 0): pi * conj(x), (1, 1): x}
                    else:
                        cells = {(0, 0): x, (1, 1): pi * conj(x)}
                    out.append(self._sym_block(r, s, cells, zero))
                    out.append(self._sym_block(r, s, {(0, 1): conj(x), (1, 0): x}, zero))
        return out

    def _sym_block(self, r: int, s: int, cells: Dict[Tuple[int, int], object], zero) -> Matrix:
        entries = {}
        for (i, j), v in cells.items():
            entries[(2 * r + i, 2 * s + j)] = v
            entries[(2 * s + j, 2 * r + i)] = v
        return _fill(self.size, entries, zero)

    def vplus_basis(self) -> List[Matrix]:
        return self._basis(True)

    def vminus_basis(self) -> List[Matrix]:
        return self._basis(False)

    # blocks by the class of -det

    def block_rep(self, cls: SquareClass) -> Matrix:
        """A block of S+ whose -det lies in ``cls``."""
        pi = self.ctx.pi
        if cls is SquareClass.ONE:
            return ((self.ext(0), self.ext(1)), (self.ext(1), self.ext(0)))
        if cls is SquareClass.UPI:
            return ((self.ext(0, pi), self.ext(0)), (self.ext(0), self.ext(0, -1)))
        if cls is SquareClass.PI:
            a, b = self._pi_pair()
            return ((self.ext(pi * a, pi * b), self.ext(0)), (self.ext(0), self.ext(a, -b)))
        raise DomainError("no block of S+ has -det in the class u")

    @lru_cache(maxsize=None)
    def _pi_pair(self) -> Tuple[int, int]:
        p, u = self.ctx.p, self.ctx.u
        for a in range(p):
            for b in range(1, p):
                if legendre(u * b * b - a * a, p) == 1:
                    return a, b
        raise DomainError("no (a, b) with u b^2 - a^2 a nonzero square")

    def slot_block(self, value) -> Matrix:
        if isinstance(value, SquareClass):
            return self.block_rep(value)
        if isinstance(value, tuple):
            return value
        if value == 0:
            return ((self.ext(0), self.ext(0)), (self.ext(0), self.ext(0)))
        raise DomainError("type3 slot values are blocks, square classes or 0")

    def slot_unit(self, x) -> Matrix:
        return la.scale(Fraction(x), self.block_rep(SquareClass.ONE))

    def slot_grid(self) -> List:
        return [ZERO, SquareClass.ONE, SquareClass.PI, SquareClass.UPI]

    def generic_slot_grid(self) -> List:
        return [SquareClass.ONE, SquareClass.PI, SquareClass.UPI]

    @staticmethod
    def _is_zero_value(v) -> bool:
        return not isinstance(v, SquareClass) and Model._is_zero_value(v)

    def block_delta(self, blk: Matrix) -> Fraction:
        """The rank-one invariant -det of a 2 x 2 block."""
        return -self.to_f(la.det(blk))

    # group

    def _l_block(self, rng: random.Random, invertible: bool = True) -> Matrix:
        pi = self.ctx.pi
        while True:
            x, y = self.random_scalar(rng, nonzero=False), self.random_scalar(rng, nonzero=False)
            m = ((x, pi * y), (conj(y), conj(x)))
            if not invertible or la.det(m) != 0:
                return m

    def _insert_block(self, base: Matrix, r: int, s: int, blk: Matrix) -> Matrix:
        rows = [list(row) for row in base]
        for i in range(2):
            for j in range(2):
                rows[2 * r + i][2 * s + j] = blk[i][j]
        return la.mat(rows)

    def _eye(self) -> Matrix:
        return la.mat([[self.ext(v) for v in r] for r in la.identity(self.size)])

    def identity(self) -> GroupElement:
        return GroupElement(self.tag, (self._eye(),), ONE)

    def in_group(self, g: GroupElement) -> bool:
        (h,) = g.mats
        lhs = la.matmul(self.J, la.conj_matrix(h))
        rhs = la.matmul(h, self.J)
        return la.equal(lhs, rhs) or la.equal(lhs, la.neg(rhs))

    def random_g0(self, rng: random.Random, length: Optional[int] = None) -> Matrix:
        kk = self.k + 1
        g = self._eye()
        steps = length if length is not None else 2 * kk + 2
        for _ in range(steps):
            kind = rng.random()
            if kk > 1 and kind < 0.5:
                r, s = rng.sample(range(kk), 2)
                m = self._insert_block(self._eye(), r, s, self._l_block(rng, invertible=False))
            elif kind < 0.85 or kk == 1:
                t = rng.randrange(kk)
                m = self._insert_block(self._eye(), t, t, self._l_block(rng))
            else:
                r, s = rng.sample(range(kk), 2)
                order = list(range(kk))
                order[r], order[s] = order[s], order[r]
                m = self._zero_matrix()
                for a, b in enumerate(order):
                    m = self._insert_block(m, a, b, ((self.ext(1), self.ext(0)), (self.ext(0), self.ext(1))))
            g = la.matmul(m, g)
        return g

    def random_group(self, rng: random.Random, length: Optional[int] = None) -> GroupElement:
        g = self.random_g0(rng, length)
        if rng.random() < 0.5:
            g = la.scale(self.ext(0, 1), g)
        return GroupElement(self.tag, (g,), self.random_unit_scalar(rng))

    def random_unipotent(self, rng: random.Random) -> GroupElement:
        g = self._eye()
        for r in range(self.k + 1):
            for s in range(r):
                if rng.random() < 0.8:
                    g = self._insert_block(g, r, s, self._l_block(rng, invertible=False))
        return GroupElement(self.tag, (g,), ONE)

    def act(self, g: GroupElement, x: VElement) -> VElement:
        self._check_tag(g)
        (h,) = g.mats
        return VElement(self, la.scale(1 / g.mu, la.mmul(h, x.matrix, la.transpose(h))), 1)

    def act_minus(self, g: GroupElement, y: VElement) -> VElement:
        (h,) = g.mats
        hi = la.inverse(h)
        return VElement(self, la.scale(g.mu, la.mmul(la.transpose(hi), y.matrix, hi)), -1)

    # orbits

    def _block_subset_class(self, m: Matrix, rank_m: int) -> Optional[SquareClass]:
        for subset in itertools.combinations(range(self.k + 1), rank_m):
            idx = [2 * t + i for t in subset for i in range(2)]
            d = la.det(la.submatrix(m, idx, idx))
            if d != 0:
                sign = -1 if rank_m % 2 else 1
                return square_class(sign * self.to_f(d), self.ctx)
        return None

    def orbit_invariants(self, x: VElement) -> OrbitInvariant:
        r = la.rank(x.matrix)
        if r % 2:
            raise DomainError("odd E-rank; not an element of V+")
        m = r // 2
        if m == 0:
            return OrbitInvariant(self.tag, 0, (0, 0, 0))
        cls = self._block_subset_class(x.matrix, m)
        rng = random.Random(1729)
        attempts = 0
        while cls is None:
            # move to general position inside the orbit; G0 with mu = 1 keeps the class
            attempts += 1
            if attempts > 50:
                raise DomainError("could not find a nondegenerate block minor")
            h = self.random_g0(rng)
            moved = la.mmul(h, x.matrix, la.transpose(h))
            cls = self._block_subset_class(moved, m)
        n3 = cls.u_bit
        n2 = (cls.pi_bit + n3) % 2
        n1 = (m - n2 - n3) % 2
        return OrbitInvariant(self.tag, m, (n1, n2, n3))

    def representative(self, inv: OrbitInvariant) -> VElement:
        m = inv.rank
        if not 0 <= m <= self.k + 1:
            raise DomainError(f"unrealizable invariant {inv}")
        if m == 0:
            return self.zero()
        parities = tuple(inv.payload)
        odd = [SquareClass.ONE, SquareClass.PI, SquareClass.UPI]
        blocks = [c for c, bit in zip(odd, parities) if bit]
        if len(blocks) > m or (m - len(blocks)) % 2:
            raise DomainError(f"unrealizable invariant {inv}")
        blocks += [SquareClass.ONE] * (m - len(blocks))
        vals: List = [ZERO] * (self.k + 1)
        for pos, c in enumerate(blocks):
            vals[self.k - pos] = c
        return self.diagonal_element(vals)

    def p_orbit_class(self, x: VElement) -> Tuple:
        ds = self._generic_deltas(x)
        return tuple(square_class(d, self.ctx).tag for d in ds)

    def block_classes(self, x: VElement) -> List[Optional[SquareClass]]:
        """Per-slot class of -det for a block-diagonal element (None for zero blocks)."""
        out = []
        for j in range(self.k + 1):
            p = 2 * self.position(j)
            blk = la.submatrix(x.matrix, [p, p + 1], [p, p + 1])
            d = self.block_delta(blk)
            out.append(None if d == 0 else square_class(d, self.ctx))
        return out


# --- ORTHO1: F^3 with Q = x^2 - u y^2 - pi z^2, (g, mu) . v = mu^-1 g v ---------

class Ortho1Model(Model):
    """The rank-one case: SO(Q) x F* acting on F^3."""

    tag = "ortho1"
    kappa = 2

    def __init__(self, k: int = 0, ctx: PadicContext = DEFAULT):
        if k != 0:
            raise DomainError("ortho1 has k = 0")
        super().__init__(0, ctx)

    @property
    def size(self) -> int:
        return 3

    @property
    def gram_q(self) -> Tuple[Fraction, Fraction, Fraction]:
        return (ONE, -Fraction(self.ctx.u), -Fraction(self.ctx.pi))

    def quadratic(self, v: Sequence[Fraction]) -> Fraction:
        return sum(c * x * x for c, x in zip(self.gram_q, v))

    def bilinear(self, v: Sequence[Fraction], w: Sequence[Fraction]) -> Fraction:
        return sum(c * x * y for c, x, y in zip(self.gram_q, v, w))

    def is_vplus(self, m: Matrix) -> bool:
        return la.shape(m) == (3, 1)

    def vplus_basis(self) -> List[Matrix]:
        return [tuple((ONE if i == j else ZERO,) for i in range(3)) for j in range(3)]

    def vplus_constraints(self, m: Matrix) -> List[Fraction]:
        return []

    def coordinates(self) -> int:
        return 3

    def _coordinate_matrix(self, idx: int) -> Matrix:
        return self.vplus_basis()[idx]

    def _zero_matrix(self) -> Matrix:
        return ((ZERO,), (ZERO,), (ZERO,))

    def vector(self, v: Sequence) -> VElement:
        return VElement(self, tuple((Fraction(x),) for x in v), 1)

    def coords(self, x: VElement) -> Tuple[Fraction, ...]:
        return tuple(r[0] for r in x.matrix)

    def delta(self, j: int, x: VElement) -> Fraction:
        self._check_index(j)
        return self.quadratic(self.coords(x))

    def psi(self, x: VElement) -> VElement:
        raise DomainError("psi is not modelled for ortho1")

    def gamma(self, z: VElement) -> VElement:
        raise DomainError("gamma is not modelled for ortho1")

    def reflection(self, a: Sequence[Fraction]) -> Matrix:
        qa = self.quadratic(a)
        if qa == 0:
            raise DomainError("reflection in an isotropic vector")
        cols = []
        for e in self.vplus_basis():
            v = [r[0] for r in e]
            c = 2 * self.bilinear(v, a) / qa
            cols.append([vi - c * ai for vi, ai in zip(v, a)])
        return la.transpose(la.mat(cols))

    def in_group(self, g: GroupElement) -> bool:
        (h,) = g.mats
        gq = la.diag(list(self.gram_q))
        return la.equal(la.mmul(la.transpose(h), gq, h), gq) and la.det(h) == 1

    def random_group(self, rng: random.Random, length: Optional[int] = None) -> GroupElement:
        h = la.identity(3)
        for _ in range(2 * (length or 2)):
            while True:
                a = [Fraction(rng.randint(-3, 3)) for _ in range(3)]
                if any(a):
                    break
            h = la.matmul(self.reflection(a), h)
        return GroupElement(self.tag, (h,), self.random_unit_scalar(rng))

    def random_unipotent(self, rng: random.Random) -> GroupElement:
        return self.identity()

    def act(self, g: GroupElement, x: VElement) -> VElement:
        self._check_tag(g)
        (h,) = g.mats
        return VElement(self, la.scale(1 / g.mu, la.matmul(h, x.matrix)), 1)

    def diagonal_element(self, values: Sequence) -> VElement:
        if len(values) == 3:
            return self.vector(values)
        raise DomainError("ortho1 elements are vectors of length 3")

    def grade_decompose(self, x: VElement) -> Dict[Tuple, Matrix]:
        return {("lambda", 0): x.matrix}

    def orbit_invariants(self, x: VElement) -> OrbitInvariant:
        q = self.quadratic(self.coords(x))
        if q == 0:
            if any(self.coords(x)):
                raise DomainError("Q is anisotropic; nonzero vector with Q = 0")
            return OrbitInvariant(self.tag, 0)
        return OrbitInvariant(self.tag, 1, (square_class(q, self.ctx).tag,))

    def representative(self, inv: OrbitInvariant) -> VElement:
        if inv.rank == 0:
            return self.zero()
        (tag,) = inv.payload
        grid = [ZERO] + [self.ctx.rep(c) for c in ALL_CLASSES] + [Fraction(v) for v in range(-3, 4)]
        for v in itertools.product(grid, repeat=3):
            x = self.vector(v)
            if any(v) and self.orbit_invariants(x) == inv:
                return x
        raise DomainError(f"unrealizable invariant {inv}")

    def enumerate_orbit_classes(self) -> List[OrbitInvariant]:
        seen = set()
        for v in itertools.product(self.slot_grid(), repeat=3):
            if any(v):
                seen.add(self.orbit_invariants(self.vector(v)))
        return sorted(seen, key=lambda inv: (inv.rank, repr(inv.payload)))

    def enumerate_p_orbit_classes(self) -> List[Tuple]:
        return sorted({self.p_orbit_class(self.vector(v))
                       for v in itertools.product(self.slot_grid(), repeat=3) if any(v)}, key=repr)

    def p_orbit_class(self, x: VElement) -> Tuple:
        ds = self._generic_deltas(x)
        return (square_class(ds[0], self.ctx).tag,)

    def q_form_QX(self, x: VElement) -> QForm:
        raise DomainError("q_form_QX is modelled for sp and type3")


MODELS = {"gl": GLModel, "sp": SPModel, "unitary": UnitaryModel, "type3": Type3Model, "ortho1": Ortho1Model}


def model(tag: str, size: int, ctx: PadicContext = DEFAULT) -> Model:
    """``size`` is n for gl/sp/unitary, k for type3 and ignored for ortho1."""
    tag = tag.lower()
    if tag not in MODELS:
        raise DomainError(f"unknown realization tag {tag!r}")
    if tag in ("gl", "sp", "unitary"):
        if size < 1:
            raise DomainError("n must be at least 1")
        return MODELS[tag](size - 1, ctx)
    if tag == "ortho1":
        return Ortho1Model(0, ctx)
    return MODELS[tag](size, ctx)


# module-level operations

def act(g: GroupElement, x: VElement) -> VElement:
    return x.model.act(g, x)


def delta(j: int, x: VElement) -> Fraction:
    return x.model.delta(j, x)


def nabla(j: int, y: VElement) -> Fraction:
    return y.model.nabla(j, y)


def psi(x: VElement) -> VElement:
    return x.model.psi(x)


def gamma(z: VElement) -> VElement:
    return z.model.gamma(z)


def orbit_invariants(x: VElement) -> OrbitInvariant:
    return x.model.orbit_invariants(x)


def same_orbit(x: VElement, y: VElement) -> bool:
    return x.model.same_orbit(x, y)


def p_orbit_class(x: VElement) -> Tuple:
    return x.model.p_orbit_class(x)


def q_form_QX(x: VElement) -> QForm:
    if x.tag not in ("sp", "type3"):
        raise DomainError(f"q_form_QX is modelled for sp and type3, not {x.tag}")
    return x.model.q_form_QX(x)


def enumerate_orbit_classes(tag: str, size: int, ctx: PadicContext = DEFAULT) -> List[OrbitInvariant]:
    return model(tag, size, ctx).enumerate_orbit_classes()


def grade_decompose(x: VElement) -> Dict[Tuple, Matrix]:
    return x.model.grade_decompose(x)


def representative(tag: str, size: int, inv: OrbitInvariant, ctx: PadicContext = DEFAULT) -> VElement:
    return model(tag, size, ctx).representative(inv)


# JSON matrix format: {"tag": "sp", "prime": 5, "entries": [[...]]}, E entries as [a, b]

def _parse_entry(v, m: Model):
    from pgo.padic import parse_scalar

    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise DomainError("E entries are [a, b] pairs")
        return m.ext(parse_scalar(str(v[0]), m.ctx), parse_scalar(str(v[1]), m.ctx))
    x = parse_scalar(str(v), m.ctx)
    return m.ext(x) if m.over_e else x


def element_from_json(data: dict, ctx: Optional[PadicContext] = None) -> VElement:
    try:
        tag = str(data["tag"]).lower()
        entries = data["entries"]
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed matrix JSON: {exc}") from exc
    if ctx is None:
        ctx = PadicContext(int(data.get("prime", DEFAULT.p)))
    if tag == "ortho1":
        m = Ortho1Model(0, ctx)
        flat = [e[0] if isinstance(e, list) and len(e) == 1 else e for e in entries]
        return m.vector([_parse_entry(v, m) for v in flat])
    n = len(entries)
    if tag == "type3":
        if n % 2:
            raise DomainError("type3 matrices have even size")
        m = Type3Model(n // 2 - 1, ctx)
    else:
        m = model(tag, n, ctx)
    sign = -1 if data.get("side", "+") in ("-", "minus") else 1
    matrix = la.mat([[_parse_entry(v, m) for v in row] for row in entries])
    if any(len(r) != n for r in matrix):
        raise DomainError("matrix must be square")
    return VElement(m, matrix, sign)


def _entry_json(x):
    if isinstance(x, ExtScalar):
        return [str(x.a), str(x.b)]
    return str(x)


def element_to_json(x: VElement) -> dict:
    return {
        "tag": x.tag,
        "prime": x.model.ctx.p,
        "side": "+" if x.sign > 0 else "-",
        "entries": [[_entry_json(v) for v in row] for row in x.matrix],
    }
