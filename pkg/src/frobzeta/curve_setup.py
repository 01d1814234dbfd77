"""Input validation, the Frobenius series table and the Bezout data of a curve."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from .matrix import RingMatrix, mat_inverse
from .padic_ring import NotAUnitError, RingCtx, ring_create
from .polynomial import RingPoly, gcd_mod_prime, poly_mul

__all__ = [
    "CurveData",
    "BCoeffTable",
    "BezoutPair",
    "CurveError",
    "EvenDegreeOrNotMonicError",
    "SingularCurveError",
    "PrecisionAssumptionError",
    "GenusZeroError",
    "InternalNonUnitPivotError",
    "validate",
    "compute_b_table",
    "compute_bezout",
    "compute_bezout_pairs",
    "precision_bound",
]

_LOGGER = logging.getLogger(__name__)


class CurveError(RuntimeError):
    """Base error for rejected curve input."""


class EvenDegreeOrNotMonicError(CurveError):
    """Raised when ``Q`` is not a monic polynomial of odd degree."""


class SingularCurveError(CurveError):
    """Raised when ``Q`` has a repeated root modulo ``p``."""


class PrecisionAssumptionError(CurveError):
    """Raised when ``p <= (2N - 1)(2g + 1)``."""


class GenusZeroError(CurveError):
    """Raised for linear ``Q``."""


class InternalNonUnitPivotError(CurveError):
    """Raised when the Bezout system is singular despite validation."""


@dataclass(frozen=True)
class CurveData:
    """Validated input for the Frobenius computation.

    Attributes
    ----------
    p, N:
        The prime and the target precision exponent.
    g:
        Genus, ``deg Q = 2g + 1``.
    q_coeffs:
        Coefficients of ``Q`` in ascending order, as given by the caller.
    p_coeffs:
        Coefficients of ``P = Q - x^(2g+1)`` (length ``2g + 1``).
    ctx_n, ctx_n1:
        The rings ``Z/p^N`` and ``Z/p^(N+1)``.
    """

    p: int
    N: int
    g: int
    q_coeffs: Tuple[int, ...]
    p_coeffs: Tuple[int, ...]
    ctx_n: RingCtx
    ctx_n1: RingCtx

    def q_poly(self, ctx: Optional[RingCtx] = None) -> RingPoly:
        return RingPoly.from_ints(ctx or self.ctx_n1, self.q_coeffs)


@dataclass(frozen=True)
class BCoeffTable:
    """Coefficients of the truncated Frobenius series over ``Z/p^(N+1)``.

    ``c[j]`` holds the coefficients of ``Q^j`` and ``b[j][r]`` the value
    ``B_{j,r}``; rows have length ``(2g+1)j + 1``.
    """

    N: int
    g: int
    ctx: RingCtx
    c: Tuple[Tuple[int, ...], ...]
    b: Tuple[Tuple[int, ...], ...]

    def coefficient(self, j: int, r: int) -> int:
        """Return ``B_{j,r}``, zero outside the triangular table."""

        row = self.b[j]
        if 0 <= r < len(row):
            return row[r]
        return 0


@dataclass(frozen=True)
class BezoutPair:
    """``x^i = R_i Q + S_i Q'`` with ``deg R_i <= 2g-1`` and ``deg S_i <= 2g``."""

    index: int
    r: RingPoly
    s: RingPoly


def precision_bound(N: int, g: int) -> int:
    """The smallest value ``p`` must exceed for precision ``N`` and genus ``g``."""

    return (2 * N - 1) * (2 * g + 1)


# ----------------------------------------------------------------------
# Public API
def validate(p: int, N: int, q_coeffs: Sequence[int]) -> CurveData:
    """Check the input and build the two working rings.

    ``Q`` is given by integer coefficients in ascending order, leading
    coefficient ``1``; that lift is kept as is.
    """

    ctx_n = ring_create(p, N)
    coeffs = tuple(int(c) for c in q_coeffs)
    if len(coeffs) == 2:
        raise GenusZeroError("Q has degree 1, the curve has genus 0")
    if len(coeffs) < 2 or len(coeffs) % 2 == 1:
        raise EvenDegreeOrNotMonicError(
            f"Q must have odd degree at least 3, got degree {len(coeffs) - 1}"
        )
    if coeffs[-1] != 1:
        raise EvenDegreeOrNotMonicError(f"Q must be monic, leading coefficient is {coeffs[-1]}")
    g = (len(coeffs) - 2) // 2

    bound = precision_bound(N, g)
    if p <= bound:
        raise PrecisionAssumptionError(
            f"need p > (2N-1)(2g+1) = {bound} for N = {N}, g = {g}; got p = {p}"
        )

    derivative = [k * c for k, c in enumerate(coeffs) if k]
    if len(gcd_mod_prime(coeffs, derivative, p)) > 1:
        raise SingularCurveError(f"Q has a repeated root modulo {p}")

    ctx_n1 = ring_create(p, N + 1)
    _LOGGER.debug("validated curve: p=%d N=%d g=%d", p, N, g)
    return CurveData(
        p=p,
        N=N,
        g=g,
        q_coeffs=coeffs,
        p_coeffs=coeffs[:-1],
        ctx_n=ctx_n,
        ctx_n1=ctx_n1,
    )


def _half_binomial(k: int, ctx: RingCtx) -> int:
    """``binom(-1/2, k) = (-1)^k binom(2k, k) / 4^k`` in ``ctx``."""

    value = math.comb(2 * k, k) * ctx.inverse_of(pow(4, k, ctx.modulus))
    return (-value if k % 2 else value) % ctx.modulus


def compute_b_table(curve: CurveData) -> BCoeffTable:
    ctx = curve.ctx_n1
    modulus = ctx.modulus
    q = [c % modulus for c in curve.q_coeffs]
    powers = [[1]]
    for _ in range(1, curve.N):
        powers.append(poly_mul(powers[-1], q, modulus))

    half_binomials = [_half_binomial(k, ctx) for k in range(curve.N)]
    b_rows = []
    for j, row in enumerate(powers):
        factor = 0
        for k in range(j, curve.N):
            term = half_binomials[k] * math.comb(k, j)
            factor += -term if (k - j) % 2 else term
        factor = curve.p * factor % modulus
        b_rows.append(tuple(factor * c % modulus for c in row))

    _LOGGER.debug("B table built with %d rows", len(b_rows))
    return BCoeffTable(
        N=curve.N,
        g=curve.g,
        ctx=ctx,
        c=tuple(tuple(row) for row in powers),
        b=tuple(b_rows),
    )


def _sylvester_inverse(curve: CurveData, ctx: RingCtx) -> RingMatrix:
    """Inverse of ``(R, S) -> R Q + S Q'`` on ``deg R < 2g``, ``deg S <= 2g``.

    Unknowns are ordered ``r_0 .. r_{2g-1}, s_0 .. s_{2g}``; images are the
    ``4g + 1`` coefficients of ``R Q + S Q'``.
    """

    g = curve.g
    size = 4 * g + 1
    q = [c % ctx.modulus for c in curve.q_coeffs]
    dq = [k * c % ctx.modulus for k, c in enumerate(q) if k]
    columns = []
    for shift in range(2 * g):
        column = [0] * size
        for k, c in enumerate(q):
            column[k + shift] = c
        columns.append(column)
    for shift in range(2 * g + 1):
        column = [0] * size
        for k, c in enumerate(dq):
            column[k + shift] = c
        columns.append(column)
    try:
        return mat_inverse(RingMatrix.from_columns(ctx, columns))
    except NotAUnitError as exc:
        raise InternalNonUnitPivotError(
            f"Bezout system for Q is singular modulo {curve.p}"
        ) from exc


def compute_bezout_pairs(
    curve: CurveData, ctx: Optional[RingCtx] = None
) -> Tuple[BezoutPair, ...]:
    """All pairs ``(R_i, S_i)`` for ``0 <= i < 2g`` over ``ctx`` (default R1)."""

    ctx = ctx or curve.ctx_n1
    g = curve.g
    inverse = _sylvester_inverse(curve, ctx)
    pairs = []
    for i in range(2 * g):
        solution = inverse.column(i)
        pairs.append(
            BezoutPair(
                index=i,
                r=RingPoly(ctx, tuple(solution[: 2 * g])),
                s=RingPoly(ctx, tuple(solution[2 * g :])),
            )
        )
    return tuple(pairs)


def compute_bezout(curve: CurveData, i: int, ctx: Optional[RingCtx] = None) -> BezoutPair:
    if not 0 <= i < 2 * curve.g:
        raise ValueError(f"Bezout index must lie in [0, {2 * curve.g}), got {i}")
    return compute_bezout_pairs(curve, ctx)[i]
