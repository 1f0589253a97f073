"""Generic square matrices over a star algebra and vectors over its semimodule.

The block star formula and the block omega formula are implemented over
an abstract operation set so that both the energy instance and the
regular-language instance share the same code.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Optional, Sequence

from . import energyfn, omegaval
from .errors import BadAcceptingCount, DimensionMismatch


@dataclass(frozen=True)
class StarAlgebra:
    """Idempotent semiring with star; optionally an omega semimodule.

    ``mul`` is diagrammatic: mul(a, b) follows a by b.  The omega part
    (``act``, ``vjoin``, ``vzero``, ``omega``) may be None for instances
    that only need star.
    """

    name: str
    join: Callable[[Any, Any], Any]
    mul: Callable[[Any, Any], Any]
    zero: Any
    one: Any
    star: Callable[[Any], Any]
    equal: Callable[[Any, Any], bool]
    act: Optional[Callable[[Any, Any], Any]] = None
    vjoin: Optional[Callable[[Any, Any], Any]] = None
    vzero: Any = None
    omega: Optional[Callable[[Any], Any]] = None


ENERGY_ALGEBRA = StarAlgebra(
    name="energy",
    join=energyfn.join,
    mul=energyfn.compose,
    zero=energyfn.CONST_BOTTOM,
    one=energyfn.identity(),
    star=energyfn.star,
    equal=energyfn.equal,
    act=omegaval.act,
    vjoin=omegaval.vjoin,
    vzero=omegaval.NEVER,
    omega=omegaval.omega,
)


@dataclass(frozen=True)
class SquareMatrix:
    algebra: StarAlgebra
    rows: tuple  # tuple of tuples of algebra elements

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __post_init__(self):
        n = len(self.rows)
        if n < 1 or any(len(r) != n for r in self.rows):
            raise DimensionMismatch("matrix must be square and nonempty")

    def entry(self, i: int, j: int):
        return self.rows[i][j]


@dataclass(frozen=True)
class ColumnVector:
    algebra: StarAlgebra
    entries: tuple

    @property
    def dim(self) -> int:
        return len(self.entries)


def matrix(algebra: StarAlgebra, rows: Sequence[Sequence[Any]]) -> SquareMatrix:
    return SquareMatrix(algebra, tuple(tuple(r) for r in rows))


def vector(algebra: StarAlgebra, entries: Sequence[Any]) -> ColumnVector:
    return ColumnVector(algebra, tuple(entries))


def mat_identity(algebra: StarAlgebra, n: int) -> SquareMatrix:
    return matrix(
        algebra,
        [[algebra.one if i == j else algebra.zero for j in range(n)] for i in range(n)],
    )


def mat_zero(algebra: StarAlgebra, n: int) -> SquareMatrix:
    return matrix(algebra, [[algebra.zero] * n for _ in range(n)])


def mat_join(M: SquareMatrix, N: SquareMatrix) -> SquareMatrix:
    _check_same(M, N)
    alg = M.algebra
    return matrix(
        alg,
        [
            [alg.join(M.rows[i][j], N.rows[i][j]) for j in range(M.dim)]
            for i in range(M.dim)
        ],
    )


def mat_mul(M: SquareMatrix, N: SquareMatrix) -> SquareMatrix:
    _check_same(M, N)
    alg = M.algebra
    n = M.dim
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = alg.zero
            for k in range(n):
                acc = alg.join(acc, alg.mul(M.rows[i][k], N.rows[k][j]))
            row.append(acc)
        out.append(row)
    return matrix(alg, out)


def mat_equal(M: SquareMatrix, N: SquareMatrix) -> bool:
    _check_same(M, N)
    return all(
        M.algebra.equal(M.rows[i][j], N.rows[i][j])
        for i in range(M.dim)
        for j in range(M.dim)
    )


def _check_same(M: SquareMatrix, N: SquareMatrix) -> None:
    if M.dim != N.dim:
        raise DimensionMismatch(f"dimensions {M.dim} and {N.dim} differ")


def _block(M: SquareMatrix, r0: int, r1: int, c0: int, c1: int) -> list:
    return [[M.rows[i][j] for j in range(c0, c1)] for i in range(r0, r1)]


def _stack(alg: StarAlgebra, a, b, c, d) -> SquareMatrix:
    rows = [list(ra) + list(rb) for ra, rb in zip(a, b)]
    rows += [list(rc) + list(rd) for rc, rd in zip(c, d)]
    return matrix(alg, rows)


def mat_star(M: SquareMatrix, split: Optional[int] = None) -> SquareMatrix:
    """Inductive block star; the split point does not affect the result."""
    alg = M.algebra
    n = M.dim
    if n == 1:
        return matrix(alg, [[alg.star(M.rows[0][0])]])
    k = split if split is not None else n // 2
    if not 0 < k < n:
        raise DimensionMismatch(f"split {k} out of range for dimension {n}")
    a = matrix(alg, _block(M, 0, k, 0, k))
    b = _block(M, 0, k, k, n)
    c = _block(M, k, n, 0, k)
    d = matrix(alg, _block(M, k, n, k, n))

    d_star = mat_star(d)
    a_star = mat_star(a)
    bds = _mul_rect(alg, b, d_star.rows)
    cas = _mul_rect(alg, c, a_star.rows)
    f = mat_join(a, matrix(alg, _mul_rect(alg, bds, c)))
    g = mat_join(d, matrix(alg, _mul_rect(alg, cas, b)))
    f_star = mat_star(f)
    g_star = mat_star(g)
    top_right = _mul_rect(alg, f_star.rows, bds)
    bottom_left = _mul_rect(alg, g_star.rows, cas)
    return _stack(alg, f_star.rows, top_right, bottom_left, g_star.rows)


def _mul_rect(alg: StarAlgebra, A: Sequence[Sequence[Any]], B: Sequence[Sequence[Any]]) -> list:
    """Rectangular product with the algebra's join/mul."""
    rows_a = len(A)
    inner = len(B)
    cols_b = len(B[0]) if inner else 0
    out = []
    for i in range(rows_a):
        row = []
        for j in range(cols_b):
            acc = alg.zero
            for k in range(inner):
                acc = alg.join(acc, alg.mul(A[i][k], B[k][j]))
            row.append(acc)
        out.append(row)
    return out


def mat_vec_act(M: SquareMatrix, v: ColumnVector) -> ColumnVector:
    alg = M.algebra
    if M.dim != v.dim:
        raise DimensionMismatch(f"matrix {M.dim} vs vector {v.dim}")
    out = []
    for i in range(M.dim):
        acc = alg.vzero
        for k in range(M.dim):
            acc = alg.vjoin(acc, alg.act(M.rows[i][k], v.entries[k]))
        out.append(acc)
    return vector(alg, out)


def _rect_vec_act(alg: StarAlgebra, A: Sequence[Sequence[Any]], vs: Sequence[Any]) -> list:
    out = []
    for row in A:
        acc = alg.vzero
        for s, v in zip(row, vs):
            acc = alg.vjoin(acc, alg.act(s, v))
        out.append(acc)
    return out


def vec_join(u: ColumnVector, v: ColumnVector) -> ColumnVector:
    if u.dim != v.dim:
        raise DimensionMismatch(f"vectors {u.dim} and {v.dim} differ")
    alg = u.algebra
    return vector(alg, [alg.vjoin(a, b) for a, b in zip(u.entries, v.entries)])


def mat_omega(M: SquareMatrix, split: Optional[int] = None) -> ColumnVector:
    """Block omega: supremum over all infinite runs from each state."""
    alg = M.algebra
    n = M.dim
    if n == 1:
        return vector(alg, [alg.omega(M.rows[0][0])])
    k = split if split is not None else n // 2
    if not 0 < k < n:
        raise DimensionMismatch(f"split {k} out of range for dimension {n}")
    a = matrix(alg, _block(M, 0, k, 0, k))
    b = _block(M, 0, k, k, n)
    c = _block(M, k, n, 0, k)
    d = matrix(alg, _block(M, k, n, k, n))

    d_star = mat_star(d)
    a_star = mat_star(a)
    bds = _mul_rect(alg, b, d_star.rows)
    cas = _mul_rect(alg, c, a_star.rows)
    f = mat_join(a, matrix(alg, _mul_rect(alg, bds, c)))
    g = mat_join(d, matrix(alg, _mul_rect(alg, cas, b)))

    fsb = _mul_rect(alg, mat_star(f).rows, b)
    gsc = _mul_rect(alg, mat_star(g).rows, c)
    top = [
        alg.vjoin(x, y)
        for x, y in zip(
            mat_omega(f).entries, _rect_vec_act(alg, fsb, mat_omega(d).entries)
        )
    ]
    bottom = [
        alg.vjoin(x, y)
        for x, y in zip(
            mat_omega(g).entries, _rect_vec_act(alg, gsc, mat_omega(a).entries)
        )
    ]
    return vector(alg, top + bottom)


def mat_omega_k(M: SquareMatrix, k: int) -> ColumnVector:
    """Omega restricted to runs hitting the first k states infinitely often."""
    alg = M.algebra
    n = M.dim
    if not 0 <= k <= n:
        raise BadAcceptingCount(f"k={k} out of range for dimension {n}")
    if k == 0:
        return vector(alg, [alg.vzero] * n)
    if k == n:
        return mat_omega(M)
    a = matrix(alg, _block(M, 0, k, 0, k))
    b = _block(M, 0, k, k, n)
    c = _block(M, k, n, 0, k)
    d = matrix(alg, _block(M, k, n, k, n))
    d_star = mat_star(d)
    f = mat_join(a, matrix(alg, _mul_rect(alg, _mul_rect(alg, b, d_star.rows), c)))
    top = mat_omega(f)
    dsc = _mul_rect(alg, d_star.rows, c)
    bottom = _rect_vec_act(alg, dsc, top.entries)
    return vector(alg, list(top.entries) + bottom)
