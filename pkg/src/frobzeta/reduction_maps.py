"""Vertical and horizontal reduction matrices.

A differential ``F(x) x^s y^(-2t) dx/y`` with ``deg F <= 2g`` is stored as
the coefficient vector of ``F`` (a :class:`DifferentialVec` in ``W_{s,t}``).
The horizontal maps lower ``s`` by one and the vertical maps lower ``t`` by
one; both are matrices of linear polynomials divided by a linear scalar.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from .curve_setup import CurveData, compute_bezout_pairs
from .matrix import RingMatrix
from .padic_ring import RingCtx, RingElem, ShapeMismatchError

__all__ = [
    "MatrixFamily",
    "DifferentialVec",
    "vertical_family",
    "horizontal_family",
    "apply_step",
]

VERTICAL = "t"
HORIZONTAL = "s"


@dataclass(frozen=True)
class MatrixFamily:
    """``M(X) = const + X * linear`` together with ``D(X) = d0 + X * d1``.

    The denominator pair is kept as exact integers so that valuations of
    ``D(x)`` can be read off without loss.
    """

    ctx: RingCtx
    const: RingMatrix
    linear: RingMatrix
    denom: Tuple[int, int]
    variable: str
    t: Optional[int] = None

    def __post_init__(self) -> None:
        if self.const.rows != self.const.cols or (
            (self.const.rows, self.const.cols) != (self.linear.rows, self.linear.cols)
        ):
            raise ShapeMismatchError("family needs two square matrices of equal size")
        self.ctx.coerce(self.const.ctx)
        self.ctx.coerce(self.linear.ctx)

    @property
    def dim(self) -> int:
        return self.const.rows

    @property
    def is_horizontal(self) -> bool:
        return self.variable == HORIZONTAL

    def evaluate_raw(self, x: int) -> Tuple[int, ...]:
        modulus = self.ctx.modulus
        x %= modulus
        return tuple((c + x * l) % modulus for c, l in zip(self.const.data, self.linear.data))

    def evaluate(self, x: int) -> RingMatrix:
        return RingMatrix(self.ctx, self.dim, self.dim, self.evaluate_raw(x))

    def denominator(self, x: int) -> int:
        """``D(x)`` as an exact integer."""

        d0, d1 = self.denom
        return d0 + x * d1

    def over(self, ctx: RingCtx) -> "MatrixFamily":
        return MatrixFamily(
            ctx, self.const.over(ctx), self.linear.over(ctx), self.denom, self.variable, self.t
        )

    def transposed(self) -> "MatrixFamily":
        return MatrixFamily(
            self.ctx,
            self.const.transpose(),
            self.linear.transpose(),
            self.denom,
            self.variable,
            self.t,
        )

    def shifted(self, offset: int) -> "MatrixFamily":
        """The family ``X -> M(X + offset)``."""

        d0, d1 = self.denom
        return MatrixFamily(
            self.ctx,
            self.const + self.linear.scale(offset),
            self.linear,
            (d0 + offset * d1, d1),
            self.variable,
            self.t,
        )

    def denominator_family(self) -> "MatrixFamily":
        """The ``1 x 1`` family ``X -> D(X)``."""

        d0, d1 = self.denom
        return MatrixFamily(
            self.ctx,
            RingMatrix.from_rows(self.ctx, [[d0]]),
            RingMatrix.from_rows(self.ctx, [[d1]]),
            (1, 0),
            self.variable,
            self.t,
        )


@dataclass(frozen=True)
class DifferentialVec:
    """Coefficients of an element of ``W_{s,t}``.

    For ``s >= 0`` the vector has ``2g + 1`` entries (basis
    ``x^(i+s) y^(-2t) dx/y``); for ``s = -1`` it has ``2g`` entries and the
    basis starts at ``x^0``.
    """

    ctx: RingCtx
    s: int
    t: int
    values: Tuple[int, ...]

    @classmethod
    def from_ints(cls, ctx: RingCtx, s: int, t: int, values: Sequence[int]) -> "DifferentialVec":
        return cls(ctx, s, t, tuple(int(v) % ctx.modulus for v in values))

    def __getitem__(self, index: int) -> RingElem:
        return RingElem(self.ctx, self.values[index])

    def __len__(self) -> int:
        return len(self.values)

    def is_zero(self) -> bool:
        return not any(self.values)

    def over(self, ctx: RingCtx) -> "DifferentialVec":
        return DifferentialVec(ctx, self.s, self.t, tuple(v % ctx.modulus for v in self.values))


# ----------------------------------------------------------------------
# Public API
def vertical_family(curve: CurveData, ctx: RingCtx) -> MatrixFamily:
    """``M_V(t)``: column ``i`` holds ``(2t - 1) R_i + 2 S_i'``, ``D_V(t) = 2t - 1``."""

    bezout_ctx = ctx if ctx.e > curve.ctx_n1.e else curve.ctx_n1
    pairs = compute_bezout_pairs(curve, bezout_ctx)
    size = 2 * curve.g
    modulus = ctx.modulus
    const_columns = []
    linear_columns = []
    for pair in pairs:
        r = list(pair.r.coeffs) + [0] * (size - len(pair.r.coeffs))
        ds = list(pair.s.derivative().coeffs) + [0] * size
        const_columns.append([(2 * ds[k] - r[k]) % modulus for k in range(size)])
        linear_columns.append([2 * r[k] % modulus for k in range(size)])
    return MatrixFamily(
        ctx,
        RingMatrix.from_columns(ctx, const_columns),
        RingMatrix.from_columns(ctx, linear_columns),
        (-1, 2),
        VERTICAL,
    )


def horizontal_family(curve: CurveData, t: int, ctx: RingCtx) -> MatrixFamily:
    """``M_H^t(s)``: ``D(s)`` on the subdiagonal, ``C_h(s)`` in the last column.

    ``D(s) = (2g+1)(2t-1) - 2s`` and ``C_h(s) = 2s P_h - (2t-1) h P_h``.
    """

    g = curve.g
    size = 2 * g + 1
    d0 = (2 * g + 1) * (2 * t - 1)
    const = [[0] * size for _ in range(size)]
    linear = [[0] * size for _ in range(size)]
    for h in range(1, size):
        const[h][h - 1] = d0
        linear[h][h - 1] = -2
    for h, coefficient in enumerate(curve.p_coeffs):
        const[h][size - 1] = -(2 * t - 1) * h * coefficient
        linear[h][size - 1] = 2 * coefficient
    return MatrixFamily(
        ctx,
        RingMatrix.from_rows(ctx, const),
        RingMatrix.from_rows(ctx, linear),
        (d0, -2),
        HORIZONTAL,
        t,
    )


def _divide(ctx: RingCtx, values: Sequence[int], denominator: int) -> Tuple[int, ...]:
    denominator %= ctx.modulus
    if denominator % ctx.p:
        inv = ctx.inverse_of(denominator)
        return tuple(v * inv % ctx.modulus for v in values)
    return tuple(ctx.div_exact_of(v, denominator) for v in values)


def _horizontal_step(family: MatrixFamily, x: int, values: Sequence[int]) -> Tuple[int, ...]:
    modulus = family.ctx.modulus
    size = family.dim
    dx = family.denominator(x) % modulus
    top = values[-1]
    last = size - 1
    out = [0] * size
    for h in range(size):
        c_h = (family.const.entry(h, last) + x * family.linear.entry(h, last)) % modulus
        acc = c_h * top
        if h:
            acc += dx * values[h - 1]
        out[h] = acc % modulus
    return tuple(out)


def apply_step(
    family: MatrixFamily, x: int, v: DifferentialVec, divide: bool = True
) -> DifferentialVec:
    """Apply one reduction step at ``x`` to ``v``.

    ``x`` must be the current ``s`` index (horizontal) or ``t`` index
    (vertical) of ``v``. A horizontal step at ``s = 0`` lands in ``W_{-1,t}``
    and drops the (zero) constant coordinate. With ``divide`` the result is
    divided by ``D(x)``, through :meth:`RingCtx.div_exact_of` when ``D(x)`` is
    not a unit.
    """

    family.ctx.coerce(v.ctx)
    ctx = family.ctx
    if family.is_horizontal:
        if v.s != x or x < 0:
            raise ValueError(f"horizontal step at s={x} applied to a vector in W_{{{v.s},{v.t}}}")
        if len(v) != family.dim:
            raise ShapeMismatchError(f"expected {family.dim} coordinates, got {len(v)}")
        values = _horizontal_step(family, x, v.values)
        if x == 0:
            values = values[1:]
        s, t = x - 1, v.t
    else:
        if v.t != x or v.s != -1:
            raise ValueError(f"vertical step at t={x} applied to a vector in W_{{{v.s},{v.t}}}")
        if len(v) != family.dim:
            raise ShapeMismatchError(f"expected {family.dim} coordinates, got {len(v)}")
        values = tuple(family.evaluate(x).apply(v.values))
        s, t = -1, x - 1
    if divide:
        values = _divide(ctx, values, family.denominator(x))
    return DifferentialVec(ctx, s, t, values)
