"""The Frobenius matrix of ``y^2 = Q(x)`` modulo ``p^N``.

Column ``i`` of the matrix is the reduction of the Frobenius image of
``x^i dx/y``. The image is a finite sum of terms ``B_{j,r} x^(pk-1)
y^(-2t_j) dx/y`` (``t_j = ((2j+1)p - 1)/2``). Each row ``j`` is first
reduced horizontally down to ``W_{-1,t_j}`` and the rows are then combined
by the vertical reduction down to ``W_{-1,0}``.
"""
from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import repeat
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import gmpy2

from .curve_setup import BCoeffTable, CurveData, compute_b_table, validate
from .matrix import RingMatrix, mat_inverse, stack_columns
from .padic_ring import RingCtx
from .polynomial import RingPoly, poly_eval_multi, poly_mul
from .recurrence_engine import (
    NAIVE_THRESHOLD,
    IntervalRequest,
    interval_products,
    naive_interval_products,
)
from .reduction_maps import (
    DifferentialVec,
    MatrixFamily,
    apply_step,
    horizontal_family,
    vertical_family,
)

__all__ = [
    "FrobeniusOptions",
    "FrobeniusError",
    "InvariantViolationError",
    "HorizontalBlocks",
    "VerticalBlocks",
    "PhaseState",
    "horizontal_block_matrices",
    "horizontal_phase",
    "vertical_blocks",
    "vertical_phase",
    "compute_phases",
    "frobenius_matrix",
    "reduce_differential",
    "exact_differential",
    "wilson_denominator",
]

_LOGGER = logging.getLogger(__name__)


class FrobeniusError(RuntimeError):
    """Base error for the reduction pipeline."""


class InvariantViolationError(FrobeniusError):
    """Raised when a precision or valuation invariant does not hold."""


@dataclass(frozen=True)
class FrobeniusOptions:
    """Tuning knobs for :func:`frobenius_matrix`.

    Attributes
    ----------
    threads:
        Worker processes for the independent horizontal rows.
    check_invariants:
        Assert the divisibility of every horizontal hand-off vector.
    engine:
        ``"bgs"`` for the baby-step/giant-step engine, ``"naive"`` for the
        reference product.
    naive_threshold:
        Bound below which the engine multiplies directly.
    """

    threads: int = 1
    check_invariants: bool = False
    engine: str = "bgs"
    naive_threshold: int = NAIVE_THRESHOLD

    def __post_init__(self) -> None:
        if self.engine not in ("bgs", "naive"):
            raise ValueError(f"unknown engine {self.engine!r}")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")


@dataclass(frozen=True)
class HorizontalBlocks:
    """Block products ``M(k)``, ``D(k)`` over ``((k-1)p, kp-2g-2]`` for row ``j``.

    Both are stored modulo ``p^N``; index ``k - 1`` holds block ``k``.
    """

    j: int
    t: int
    L: int
    L_prime: int
    matrices: Tuple[RingMatrix, ...]
    denominators: Tuple[int, ...]

    def matrix(self, k: int) -> RingMatrix:
        return self.matrices[k - 1]

    def denominator(self, k: int) -> int:
        return self.denominators[k - 1]


@dataclass(frozen=True)
class VerticalBlocks:
    """``M_j``, ``D_j`` over ``(t_{j-1}, t_j]`` and ``X_j = M_j / D_j`` modulo ``p^N``."""

    ctx: RingCtx
    matrices: Tuple[RingMatrix, ...]
    denominators: Tuple[int, ...]
    reductions: Tuple[RingMatrix, ...]


@dataclass
class PhaseState:
    """Intermediate results: ``rows[j][i] = w_{i,j}`` and ``columns[i] = w_i``."""

    rows: List[Tuple[DifferentialVec, ...]] = field(default_factory=list)
    columns: List[DifferentialVec] = field(default_factory=list)


def _reduction_products(
    family: MatrixFamily,
    intervals: Sequence[Tuple[int, int]],
    ctx: RingCtx,
    options: FrobeniusOptions,
) -> List[RingMatrix]:
    """``M(a+1) M(a+2) ... M(b)`` for each ``(a, b]``.

    The engine multiplies in the opposite order, so it runs on the
    transposed family and the results are transposed back.
    """

    request = IntervalRequest.of(intervals)
    transposed = family.transposed()
    if options.engine == "naive":
        products = naive_interval_products(transposed, request, ctx)
    else:
        products = interval_products(
            transposed, request, ctx, naive_threshold=options.naive_threshold
        )
    return [product.transpose() for product in products]


def wilson_denominator(curve: CurveData) -> int:
    """``(2^(2g+1) (2g+1)!)^(-1) mod p``, every ``D(k)`` when ``N = 1``."""

    g = curve.g
    value = pow(2, 2 * g + 1) * math.factorial(2 * g + 1)
    return int(gmpy2.invert(value, curve.p))


def _taylor_extend(
    matrices: List[RingMatrix], denominators: List[int], L: int, ctx: RingCtx
) -> Tuple[List[RingMatrix], List[int]]:
    """Extend ``M(1..N)``, ``D(1..N)`` to ``k = 1..L``.

    Modulo ``p^N`` both are polynomials of degree below ``N`` in ``k``; the
    coefficients come from the Vandermonde system on ``k = 1..N``.
    """

    count = len(matrices)
    modulus = ctx.modulus
    vandermonde = RingMatrix.from_rows(
        ctx, [[pow(k, i, modulus) for i in range(count)] for k in range(1, count + 1)]
    )
    solve = mat_inverse(vandermonde)
    samples = [list(entries) for entries in zip(*(m.data for m in matrices))]
    samples.append(list(denominators))
    polys = [RingPoly(ctx, tuple(solve.apply(values))) for values in samples]
    values = poly_eval_multi(polys, range(count + 1, L + 1))

    m = matrices[0].rows
    for offset in range(L - count):
        entries = tuple(int(values[e][offset]) for e in range(m * m))
        matrices.append(RingMatrix(ctx, m, m, entries))
        denominators.append(int(values[-1][offset]))
    return matrices, denominators


# ----------------------------------------------------------------------
# Horizontal phase
def horizontal_block_matrices(
    curve: CurveData, j: int, options: Optional[FrobeniusOptions] = None
) -> HorizontalBlocks:
    options = options or FrobeniusOptions()
    if not 0 <= j < curve.N:
        raise ValueError(f"row index must lie in [0, {curve.N}), got {j}")
    p, g, N = curve.p, curve.g, curve.N
    ctx = curve.ctx_n
    t = ((2 * j + 1) * p - 1) // 2
    L = (2 * g + 1) * j + 2 * g
    L_prime = min(N, L)
    family = horizontal_family(curve, t, ctx)
    intervals = [((k - 1) * p, k * p - 2 * g - 2) for k in range(1, L_prime + 1)]
    matrices = _reduction_products(family, intervals, ctx, options)

    if N == 1:
        matrices = matrices * L
        denominators = [wilson_denominator(curve)] * L
    else:
        denominators = [
            d.entry(0, 0)
            for d in _reduction_products(family.denominator_family(), intervals, ctx, options)
        ]
        if L > L_prime:
            matrices, denominators = _taylor_extend(matrices, denominators, L, ctx)

    _LOGGER.debug("row %d: %d horizontal blocks (%d from the engine)", j, L, L_prime)
    return HorizontalBlocks(
        j=j,
        t=t,
        L=L,
        L_prime=L_prime,
        matrices=tuple(matrices),
        denominators=tuple(denominators),
    )


def _check_divisible(value: int, p: int, what: str) -> None:
    if value % p:
        raise InvariantViolationError(f"{what} is not divisible by p = {p}")


def horizontal_phase(
    curve: CurveData,
    btable: BCoeffTable,
    j: int,
    blocks: Optional[HorizontalBlocks] = None,
    options: Optional[FrobeniusOptions] = None,
) -> Tuple[DifferentialVec, ...]:
    """Reduce the row-``j`` terms of each column to ``w_{i,j}`` in ``W_{-1,t_j}``.

    Work happens over ``Z/p^(N+1)``. Between blocks the vector ``v`` sits
    in ``W_{mp-1,t}``; the first ``2g`` single steps divide by units and the
    next divides by a denominator of valuation one.
    """

    options = options or FrobeniusOptions()
    blocks = blocks or horizontal_block_matrices(curve, j, options)
    p, g = curve.p, curve.g
    ctx = curve.ctx_n1
    modulus = ctx.modulus
    t = blocks.t
    family = horizontal_family(curve, t, ctx)
    lifted = [m.over(ctx) for m in blocks.matrices]
    inverses = [ctx.inverse_of(d) for d in blocks.denominators]
    top = (2 * g + 1) * j
    check = options.check_invariants

    outputs = []
    for i in range(2 * g):
        m = i + top + 1
        v = DifferentialVec(ctx, m * p - 1, t, (btable.coefficient(j, top),) + (0,) * (2 * g))
        while m >= 1:
            for ell in range(1, 2 * g + 2):
                if check:
                    _check_divisible(v.values[ell - 1], p, f"coordinate {ell} at s={m * p - ell}")
                v = apply_step(family, m * p - ell, v)
            moved = lifted[m - 1].apply(v.values)
            v = DifferentialVec(
                ctx, (m - 1) * p, t, tuple(x * inverses[m - 1] % modulus for x in moved)
            )
            v = apply_step(family, (m - 1) * p, v)
            m -= 1
            if m >= 1:
                extra = btable.coefficient(j, m - i - 1)
                if extra:
                    v = DifferentialVec(ctx, v.s, t, ((v.values[0] + extra) % modulus,) + v.values[1:])
                if check:
                    _check_divisible(v.values[0], p, f"hand-off vector at m={m}")
        outputs.append(v.over(curve.ctx_n))
    return tuple(outputs)


# ----------------------------------------------------------------------
# Vertical phase
def vertical_blocks(
    curve: CurveData, options: Optional[FrobeniusOptions] = None
) -> VerticalBlocks:
    options = options or FrobeniusOptions()
    p, N = curve.p, curve.N
    ctx = curve.ctx_n if N == 1 else curve.ctx_n1
    family = vertical_family(curve, ctx)
    ends = [((2 * j + 1) * p - 1) // 2 for j in range(N)]
    intervals = list(zip([0] + ends[:-1], ends))
    matrices = _reduction_products(family, intervals, ctx, options)
    denominators = [
        d.entry(0, 0)
        for d in _reduction_products(family.denominator_family(), intervals, ctx, options)
    ]

    reductions = []
    for j, (matrix, denominator) in enumerate(zip(matrices, denominators)):
        if j == 0:
            inverse = ctx.inverse_of(denominator)
            reductions.append(matrix.scale(inverse).over(curve.ctx_n))
            continue
        if ctx.valuation_of(denominator) != 1:
            raise InvariantViolationError(
                f"vertical denominator D_{j} has valuation "
                f"{ctx.valuation_of(denominator)}, expected 1"
            )
        if not matrix.divisible_by(p):
            raise InvariantViolationError(f"vertical block M_{j} is not zero modulo p")
        quotient = tuple(ctx.div_exact_of(x, denominator) for x in matrix.data)
        reductions.append(RingMatrix(ctx, matrix.rows, matrix.cols, quotient).over(curve.ctx_n))

    return VerticalBlocks(
        ctx=ctx,
        matrices=tuple(matrices),
        denominators=tuple(denominators),
        reductions=tuple(reductions),
    )


def vertical_phase(
    curve: CurveData,
    rows: Sequence[Sequence[DifferentialVec]],
    blocks: Optional[VerticalBlocks] = None,
    options: Optional[FrobeniusOptions] = None,
) -> Tuple[DifferentialVec, ...]:
    """Combine ``rows[j][i] = w_{i,j}`` into ``w_i`` in ``W_{-1,0}``."""

    blocks = blocks or vertical_blocks(curve, options)
    ctx = curve.ctx_n
    modulus = ctx.modulus
    N = curve.N
    outputs = []
    for i in range(2 * curve.g):
        v = list(rows[N - 1][i].values)
        for j in range(N - 1, 0, -1):
            moved = blocks.reductions[j].apply(v)
            v = [(x + y) % modulus for x, y in zip(rows[j - 1][i].values, moved)]
        outputs.append(DifferentialVec(ctx, -1, 0, tuple(blocks.reductions[0].apply(v))))
    return tuple(outputs)


# ----------------------------------------------------------------------
# Driver
def _reduce_row(
    curve: CurveData, btable: BCoeffTable, j: int, options: FrobeniusOptions
) -> Tuple[DifferentialVec, ...]:
    started = time.perf_counter()
    blocks = horizontal_block_matrices(curve, j, options)
    result = horizontal_phase(curve, btable, j, blocks, options)
    _LOGGER.info("row %d reduced in %.2fs", j, time.perf_counter() - started)
    return result


def compute_phases(curve: CurveData, options: Optional[FrobeniusOptions] = None) -> PhaseState:
    """Reduce every row horizontally, then combine the rows vertically."""

    options = options or FrobeniusOptions()
    btable = compute_b_table(curve)
    state = PhaseState()
    rows = range(curve.N)

    if options.threads > 1 and curve.N > 1:
        workers = min(options.threads, curve.N)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            state.rows = list(
                pool.map(_reduce_row, repeat(curve), repeat(btable), rows, repeat(options))
            )
    else:
        state.rows = [_reduce_row(curve, btable, j, options) for j in rows]

    started = time.perf_counter()
    state.columns = list(vertical_phase(curve, state.rows, options=options))
    _LOGGER.info("vertical phase finished in %.2fs", time.perf_counter() - started)
    return state


def frobenius_matrix(
    p: int, N: int, q_coeffs: Sequence[int], options: Optional[FrobeniusOptions] = None
) -> RingMatrix:
    """The ``2g x 2g`` Frobenius matrix modulo ``p^N``.

    Column ``i`` holds the coefficients of the reduction of the image of
    ``x^i dx/y``.
    """

    started = time.perf_counter()
    curve = validate(p, N, q_coeffs)
    _LOGGER.info("computing Frobenius matrix: p=%d N=%d g=%d", p, N, curve.g)
    state = compute_phases(curve, options)
    matrix = stack_columns(curve.ctx_n, [column.values for column in state.columns])
    _LOGGER.info("Frobenius matrix done in %.2fs", time.perf_counter() - started)
    return matrix


# ----------------------------------------------------------------------
# Naive reduction
def _split_power(value: int, p: int) -> Tuple[int, int]:
    """Write a non-zero integer as ``p^v * u``; return ``(v, u)``."""

    unit, count = gmpy2.remove(abs(value), p)
    return int(count), int(unit) if value > 0 else -int(unit)


def reduce_differential(
    curve: CurveData,
    terms: Mapping[int, Sequence[int]],
    ctx: RingCtx,
    *,
    target_t: int = 0,
) -> DifferentialVec:
    """Reduce ``sum_t F_t(x) y^(-2t) dx/y`` one step at a time.

    ``terms`` maps ``t`` to the coefficients of ``F_t``. The numerator is
    kept over ``ctx`` together with the accumulated denominator and divided
    once at the end, so the result is only accurate modulo ``p^(e - v)``
    where ``v`` is the valuation of that denominator.
    """

    if not terms:
        raise ValueError("nothing to reduce")
    top = max(terms)
    if top < target_t:
        raise ValueError(f"cannot reduce from t={top} up to t={target_t}")
    p, g = curve.p, curve.g
    size = 2 * g
    modulus = ctx.modulus
    coefficients = [c % modulus for c in curve.p_coeffs]
    vertical = vertical_family(curve, ctx)

    carried = [0] * size
    valuation_part = 0
    unit_part = 1
    for t in range(top, target_t - 1, -1):
        denominator = pow(p, valuation_part, modulus) * unit_part % modulus
        incoming = list(terms.get(t, ()))
        poly = [0] * max(size, len(incoming))
        for k, c in enumerate(carried):
            poly[k] = c
        for k, c in enumerate(incoming):
            poly[k] = (poly[k] + denominator * c) % modulus

        while len(poly) > size:
            degree = len(poly) - 1
            lead = poly.pop()
            if not lead:
                continue
            s = degree - size
            d = (2 * g + 1) * (2 * t - 1) - 2 * s
            poly = [x * d % modulus for x in poly]
            for h, coefficient in enumerate(coefficients):
                position = h + s - 1
                if position >= 0:
                    c_h = 2 * s * coefficient - (2 * t - 1) * h * coefficient
                    poly[position] = (poly[position] + lead * c_h) % modulus
            v, u = _split_power(d, p)
            valuation_part += v
            unit_part = unit_part * u % modulus

        carried = poly + [0] * (size - len(poly))
        if t == target_t:
            break
        carried = vertical.evaluate(t).apply(carried)
        v, u = _split_power(2 * t - 1, p)
        valuation_part += v
        unit_part = unit_part * u % modulus

    scale = ctx.inverse_of(unit_part)
    power = pow(p, valuation_part, modulus)
    values = tuple(ctx.div_exact_of(c, power) * scale % modulus for c in carried)
    return DifferentialVec(ctx, -1, target_t, values)


def exact_differential(curve: CurveData, a: int, t: int, ctx: RingCtx) -> Dict[int, List[int]]:
    """Terms of ``d(x^a y^(1-2t)) = (a x^(a-1) Q - (2t-1)/2 x^a Q') y^(-2t) dx/y``."""

    modulus = ctx.modulus
    q = [c % modulus for c in curve.q_coeffs]
    dq = [k * c % modulus for k, c in enumerate(q) if k]
    half = ctx.inverse_of(2)
    length = a + len(q)
    poly = [0] * length
    if a:
        for k, c in enumerate(poly_mul([0] * (a - 1) + [a], q, modulus)):
            poly[k] = (poly[k] + c) % modulus
    factor = -(2 * t - 1) * half
    for k, c in enumerate(poly_mul([0] * a + [factor % modulus], dq, modulus)):
        poly[k] = (poly[k] + c) % modulus
    return {t: poly}
