"""Dense matrices over ``Z/p^e``."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple, Union

from .padic_ring import NotAUnitError, RingCtx, RingElem, ShapeMismatchError
from .polynomial import RingPoly

__all__ = [
    "RingMatrix",
    "mat_mul",
    "mat_inverse",
    "charpoly_berkowitz",
    "determinant",
    "stack_columns",
    "mat_mul_raw",
]

Scalar = Union[int, RingElem]


def mat_mul_raw(
    a: Sequence[int], b: Sequence[int], n: int, k: int, m: int, modulus: int
) -> Tuple[int, ...]:
    columns = [b[j::m] for j in range(m)]
    out: List[int] = []
    for i in range(n):
        row = a[i * k : (i + 1) * k]
        for column in columns:
            out.append(sum(x * y for x, y in zip(row, column)) % modulus)
    return tuple(out)


@dataclass(frozen=True)
class RingMatrix:
    """Row-major matrix of canonical residues.

    Indexing with ``matrix[i, j]`` returns a :class:`RingElem`; the raw
    integers are available through :attr:`data` and :meth:`entry`.
    """

    ctx: RingCtx
    rows: int
    cols: int
    data: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.data) != self.rows * self.cols:
            raise ShapeMismatchError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.data)}"
            )

    # ------------------------------------------------------------------
    # Construction
    @classmethod
    def from_rows(cls, ctx: RingCtx, rows: Sequence[Sequence[Scalar]]) -> "RingMatrix":
        n = len(rows)
        m = len(rows[0]) if n else 0
        if any(len(row) != m for row in rows):
            raise ShapeMismatchError("ragged rows")
        return cls(ctx, n, m, tuple(int(x) % ctx.modulus for row in rows for x in row))

    @classmethod
    def from_columns(cls, ctx: RingCtx, columns: Sequence[Sequence[Scalar]]) -> "RingMatrix":
        return cls.from_rows(ctx, columns).transpose()

    @classmethod
    def identity(cls, ctx: RingCtx, n: int) -> "RingMatrix":
        one = 1 % ctx.modulus
        return cls(ctx, n, n, tuple(one if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, ctx: RingCtx, rows: int, cols: int) -> "RingMatrix":
        return cls(ctx, rows, cols, (0,) * (rows * cols))

    # ------------------------------------------------------------------
    # Access
    def entry(self, i: int, j: int) -> int:
        return self.data[i * self.cols + j]

    def __getitem__(self, key: Tuple[int, int]) -> RingElem:
        i, j = key
        return RingElem(self.ctx, self.entry(i, j))

    def row(self, i: int) -> Tuple[int, ...]:
        return self.data[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> Tuple[int, ...]:
        return self.data[j :: self.cols]

    def to_rows(self) -> List[List[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    # ------------------------------------------------------------------
    # Arithmetic
    def transpose(self) -> "RingMatrix":
        return RingMatrix(
            self.ctx,
            self.cols,
            self.rows,
            tuple(self.data[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)),
        )

    def _same_shape(self, other: "RingMatrix") -> None:
        self.ctx.coerce(other.ctx)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeMismatchError(
                f"cannot combine {self.rows}x{self.cols} with {other.rows}x{other.cols}"
            )

    def __add__(self, other: "RingMatrix") -> "RingMatrix":
        self._same_shape(other)
        modulus = self.ctx.modulus
        return RingMatrix(
            self.ctx, self.rows, self.cols,
            tuple((x + y) % modulus for x, y in zip(self.data, other.data)),
        )

    def __sub__(self, other: "RingMatrix") -> "RingMatrix":
        self._same_shape(other)
        modulus = self.ctx.modulus
        return RingMatrix(
            self.ctx, self.rows, self.cols,
            tuple((x - y) % modulus for x, y in zip(self.data, other.data)),
        )

    def scale(self, factor: Scalar) -> "RingMatrix":
        factor = int(factor)
        modulus = self.ctx.modulus
        return RingMatrix(self.ctx, self.rows, self.cols, tuple(x * factor % modulus for x in self.data))

    def __mul__(self, other: Union["RingMatrix", Scalar]) -> "RingMatrix":
        if isinstance(other, RingMatrix):
            return mat_mul(self, other)
        return self.scale(other)

    __rmul__ = scale

    def apply(self, vector: Sequence[int]) -> List[int]:
        """Multiply by a column vector of raw residues."""

        if len(vector) != self.cols:
            raise ShapeMismatchError(f"vector of length {len(vector)} for {self.cols} columns")
        modulus = self.ctx.modulus
        return [
            sum(x * y for x, y in zip(self.row(i), vector)) % modulus for i in range(self.rows)
        ]

    def over(self, ctx: RingCtx) -> "RingMatrix":
        """Re-read the entries in ``ctx``.

        Reducing to a lower precision truncates; moving to a higher one embeds
        the least non-negative representatives.
        """

        if ctx.p != self.ctx.p:
            raise ShapeMismatchError("cannot move a matrix between different primes")
        return RingMatrix(ctx, self.rows, self.cols, tuple(x % ctx.modulus for x in self.data))

    def is_zero(self) -> bool:
        return not any(self.data)

    def divisible_by(self, divisor: int) -> bool:
        return all(x % divisor == 0 for x in self.data)


# ----------------------------------------------------------------------
# Public API
def mat_mul(a: RingMatrix, b: RingMatrix) -> RingMatrix:
    a.ctx.coerce(b.ctx)
    if a.cols != b.rows:
        raise ShapeMismatchError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    return RingMatrix(
        a.ctx, a.rows, b.cols, mat_mul_raw(a.data, b.data, a.rows, a.cols, b.cols, a.ctx.modulus)
    )


def mat_inverse(a: RingMatrix) -> RingMatrix:
    """Invert ``a`` by Gauss-Jordan elimination with unit pivots.

    Raises :class:`NotAUnitError` when ``a`` is singular modulo ``p``.
    """

    if not a.is_square:
        raise ShapeMismatchError("only square matrices can be inverted")
    ctx = a.ctx
    n = a.rows
    modulus = ctx.modulus
    aug = [list(a.row(i)) + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] % ctx.p), None)
        if pivot is None:
            raise NotAUnitError(f"matrix is singular modulo {ctx.p} (column {col})")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = ctx.inverse_of(aug[col][col])
        aug[col] = [x * inv % modulus for x in aug[col]]
        for r in range(n):
            factor = aug[r][col]
            if r != col and factor:
                aug[r] = [(x - factor * y) % modulus for x, y in zip(aug[r], aug[col])]
    return RingMatrix.from_rows(ctx, [row[n:] for row in aug])


def charpoly_berkowitz(a: RingMatrix) -> RingPoly:
    """Return ``det(T*I - a)`` using only ring additions and products.

    The coefficients are ascending, so the last one is the leading ``1``.
    """

    if not a.is_square:
        raise ShapeMismatchError("characteristic polynomial needs a square matrix")
    modulus = a.ctx.modulus
    rows = a.to_rows()
    # descending coefficients of the charpoly of the leading k x k block
    current = [1 % modulus]
    for k in range(1, a.rows + 1):
        r = k - 1
        column = [rows[i][r] for i in range(r)]
        row = rows[r][:r]
        toeplitz = [1, -rows[r][r] % modulus]
        vec = column
        for _ in range(r):
            toeplitz.append(-sum(x * y for x, y in zip(row, vec)) % modulus)
            vec = [sum(rows[i][j] * vec[j] for j in range(r)) % modulus for i in range(r)]
        current = [
            sum(toeplitz[i - j] * current[j] for j in range(min(i + 1, len(current)))) % modulus
            for i in range(k + 1)
        ]
    return RingPoly(a.ctx, tuple(reversed(current)))


def determinant(a: RingMatrix) -> RingElem:
    constant = charpoly_berkowitz(a).coeffs[0]
    sign = -1 if a.rows % 2 else 1
    return RingElem(a.ctx, sign * constant % a.ctx.modulus)


def stack_columns(ctx: RingCtx, columns: Iterable[Sequence[int]]) -> RingMatrix:
    """Build a matrix whose ``i``-th column is the ``i``-th vector."""

    return RingMatrix.from_columns(ctx, list(columns))
