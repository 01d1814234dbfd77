"""Interval products of linear matrix families.

For a family ``M(X) = M0 + X M1`` the engine computes
``M(k, k') = M(k') M(k' - 1) ... M(k + 1)`` for a sorted list of disjoint
intervals ``(k, k']`` using about ``sqrt(K)`` matrix products and
polynomial shifts of length about ``sqrt(K)``:

* Step 0 computes the block products over ``(bH, (b+1)H]`` by doubling the
  block length while keeping the values of the block polynomial at the
  points ``0, H, 2H, ...``; values are moved between point sets with
  Lagrange shifts.
* Partial blocks at the ends of each interval are multiplied directly.
* The pieces are glued in order.

Only the integers ``1 .. H + 1`` are ever inverted, so ``sqrt(K) + 1 < p``
is enough for the whole computation to stay inside units.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from .matrix import RingMatrix, mat_mul_raw
from .padic_ring import NotAUnitError, RingCtx, RingElem
from .polynomial import poly_mul
from .reduction_maps import MatrixFamily

__all__ = [
    "IntervalRequest",
    "EngineParams",
    "EngineStats",
    "EngineError",
    "IntervalTooLongError",
    "MalformedRequestError",
    "NonUnitAbscissaError",
    "interval_products",
    "naive_interval_products",
    "shift_evaluations",
    "NAIVE_THRESHOLD",
]

_LOGGER = logging.getLogger(__name__)

#: Requests with a smaller bound are answered by the naive product.
NAIVE_THRESHOLD = 64

#: Partial blocks at most this long are multiplied out directly.
_REFINE_CUTOFF = 64

Raw = Tuple[int, ...]


class EngineError(RuntimeError):
    """Base error for interval product computations."""


class IntervalTooLongError(EngineError):
    """Raised when ``sqrt(K) + 1 >= p``."""


class MalformedRequestError(EngineError):
    """Raised when the intervals are not sorted, disjoint and non-empty."""


class NonUnitAbscissaError(EngineError):
    """Raised when a Lagrange shift would divide by a non-unit."""


@dataclass(frozen=True)
class IntervalRequest:
    """Intervals ``(K_i, L_i]`` with ``0 <= K_1 < L_1 <= K_2 < ... <= L_r <= bound``."""

    intervals: Tuple[Tuple[int, int], ...]
    bound: int

    def __post_init__(self) -> None:
        previous = 0
        for pair in self.intervals:
            if len(pair) != 2:
                raise MalformedRequestError(f"interval {pair!r} is not a pair")
            start, stop = pair
            if start < previous or stop <= start:
                raise MalformedRequestError(
                    f"interval ({start}, {stop}] breaks 0 <= K_1 < L_1 <= K_2 < ..."
                )
            previous = stop
        if previous > self.bound:
            raise MalformedRequestError(f"interval end {previous} exceeds bound {self.bound}")

    @classmethod
    def of(
        cls, intervals: Iterable[Tuple[int, int]], bound: Optional[int] = None
    ) -> "IntervalRequest":
        pairs = tuple((int(a), int(b)) for a, b in intervals)
        if bound is None:
            bound = max((b for _, b in pairs), default=0)
        return cls(pairs, int(bound))


@dataclass(frozen=True)
class EngineParams:
    """Baby-step stride ``H = 2^s`` with ``s = floor(log_4 K)``, ``B = ceil(K / H)``."""

    H: int
    B: int
    s: int

    @classmethod
    def for_bound(cls, bound: int) -> "EngineParams":
        s = max(bound.bit_length() - 1, 0) // 2
        H = 1 << s
        return cls(H=H, B=-(-bound // H), s=s)


@dataclass
class EngineStats:
    """Operation counters, filled in when passed to the engine."""

    matrix_products: int = 0
    evaluations: int = 0
    shifts: int = 0


class _Workspace:
    """Raw-integer helpers bound to one family and ring."""

    def __init__(self, family: MatrixFamily, ctx: RingCtx, stats: Optional[EngineStats]):
        self.family = family
        self.ctx = ctx
        self.dim = family.dim
        self.stats = stats

    def evaluate(self, x: int, family: Optional[MatrixFamily] = None) -> Raw:
        if self.stats is not None:
            self.stats.evaluations += 1
        return (family or self.family).evaluate_raw(x)

    def mul(self, a: Raw, b: Raw) -> Raw:
        if self.stats is not None:
            self.stats.matrix_products += 1
        m = self.dim
        return mat_mul_raw(a, b, m, m, m, self.ctx.modulus)

    def identity(self) -> Raw:
        m = self.dim
        return tuple(1 if i == j else 0 for i in range(m) for j in range(m))

    def naive(self, start: int, stop: int) -> Raw:
        """``M(stop) ... M(start + 1)`` by direct multiplication."""

        product: Optional[Raw] = None
        for k in range(start + 1, stop + 1):
            value = self.evaluate(k)
            product = value if product is None else self.mul(value, product)
        return product if product is not None else self.identity()

    def refine(self, start: int, stop: int) -> Raw:
        if stop - start <= _REFINE_CUTOFF:
            return self.naive(start, stop)
        middle = (start + stop) // 2
        return self.mul(self.refine(middle, stop), self.refine(start, middle))

    def shift(self, values: Sequence[Raw], a: int) -> List[Raw]:
        series = [list(column) for column in zip(*values)]
        if self.stats is not None:
            self.stats.shifts += len(series)
        shifted = _lagrange_shift(series, a, self.ctx)
        return [tuple(entry[k] for entry in shifted) for k in range(len(values))]


# ----------------------------------------------------------------------
# Lagrange shift on raw sequences
def _unit_inverse(ctx: RingCtx, value: int) -> int:
    try:
        return ctx.inverse_of(value)
    except NotAUnitError as exc:
        raise NonUnitAbscissaError(
            f"shift needs {value % ctx.modulus} to be invertible modulo {ctx.p}"
        ) from exc


def _lagrange_shift(series: List[List[int]], a: int, ctx: RingCtx) -> List[List[int]]:
    """Move each sequence of values at ``0..d`` to the points ``a..a+d``.

    Every sequence holds the values of a polynomial of degree at most ``d``
    at ``0, 1, ..., d``; ``a`` is a ring element.
    """

    if not series:
        return []
    d = len(series[0]) - 1
    modulus = ctx.modulus
    a %= modulus
    if d == 0:
        return [list(values) for values in series]

    overlap = ctx.balanced(a)
    if -d <= overlap <= d:
        if overlap == 0:
            return [list(values) for values in series]
        if overlap > 0:
            beyond = _lagrange_shift(series, d + 1, ctx)
            return [list(values[overlap:]) + extra[:overlap] for values, extra in zip(series, beyond)]
        keep = d + 1 + overlap
        before = _lagrange_shift(series, -(d + 1), ctx)
        return [extra[keep:] + list(values[:keep]) for values, extra in zip(series, before)]

    factorial = 1
    for i in range(2, d + 1):
        factorial = factorial * i % modulus
    inv_factorials = [0] * (d + 1)
    inv_factorials[d] = _unit_inverse(ctx, factorial)
    for i in range(d, 0, -1):
        inv_factorials[i - 1] = inv_factorials[i] * i % modulus
    weights = [
        inv_factorials[i] * inv_factorials[d - i] * (-1 if (d - i) % 2 else 1) % modulus
        for i in range(d + 1)
    ]
    # reciprocals of a + m for m = -d .. d
    reciprocals = [_unit_inverse(ctx, a + m) for m in range(-d, d + 1)]

    delta = 1
    for j in range(d + 1):
        delta = delta * (a - j) % modulus
    deltas = [delta]
    for k in range(d):
        delta = delta * (a + k + 1) % modulus * reciprocals[k] % modulus
        deltas.append(delta)

    shifted = []
    for values in series:
        scaled = [v * w % modulus for v, w in zip(values, weights)]
        product = poly_mul(scaled, reciprocals, modulus)
        shifted.append([deltas[k] * product[d + k] % modulus for k in range(d + 1)])
    return shifted


# ----------------------------------------------------------------------
# Step 0
def _block_pass(work: _Workspace, family: MatrixFamily, H: int) -> List[Raw]:
    """Products over ``(kH, (k+1)H]`` of ``family`` for ``k = 0 .. H``."""

    ctx = work.ctx
    values = [work.evaluate(1, family), work.evaluate(H + 1, family)]
    if H == 1:
        return values
    inv_stride = ctx.inverse_of(H)
    d = 1
    while d < H:
        # values[k] is the product over (kH, kH + d]
        beyond = work.shift(values, d + 1)
        lefts = values + beyond
        fraction = d * inv_stride % ctx.modulus
        rights = work.shift(values, fraction) + work.shift(beyond, fraction)[:d]
        values = [work.mul(rights[k], lefts[k]) for k in range(2 * d + 1)]
        d *= 2
    return values


def _giant_blocks(work: _Workspace, H: int, count: int) -> List[Raw]:
    blocks: List[Raw] = []
    offset = 0
    while len(blocks) < count:
        blocks.extend(_block_pass(work, work.family.shifted(offset), H))
        offset += (H + 1) * H
    return blocks[:count]


# ----------------------------------------------------------------------
# Public API
def _as_request(request: Union[IntervalRequest, Iterable[Tuple[int, int]]]) -> IntervalRequest:
    if isinstance(request, IntervalRequest):
        return request
    return IntervalRequest.of(request)


def _bind(family: MatrixFamily, ctx: Optional[RingCtx]) -> MatrixFamily:
    if ctx is None or ctx == family.ctx:
        return family
    return family.over(ctx)


def naive_interval_products(
    family: MatrixFamily,
    request: Union[IntervalRequest, Iterable[Tuple[int, int]]],
    ctx: Optional[RingCtx] = None,
    *,
    stats: Optional[EngineStats] = None,
) -> List[RingMatrix]:
    """Reference implementation: one evaluation and product per index."""

    request = _as_request(request)
    family = _bind(family, ctx)
    work = _Workspace(family, family.ctx, stats)
    m = family.dim
    return [
        RingMatrix(family.ctx, m, m, work.naive(start, stop)) for start, stop in request.intervals
    ]


def interval_products(
    family: MatrixFamily,
    request: Union[IntervalRequest, Iterable[Tuple[int, int]]],
    ctx: Optional[RingCtx] = None,
    *,
    naive_threshold: int = NAIVE_THRESHOLD,
    stats: Optional[EngineStats] = None,
) -> List[RingMatrix]:
    """Return ``M(L_i) ... M(K_i + 1)`` for every requested interval."""

    request = _as_request(request)
    family = _bind(family, ctx)
    ctx = family.ctx
    bound = request.bound
    if bound >= (ctx.p - 1) ** 2:
        raise IntervalTooLongError(
            f"interval bound {bound} needs sqrt(K) + 1 < p = {ctx.p}"
        )
    if not request.intervals:
        return []
    if bound < naive_threshold:
        return naive_interval_products(family, request, stats=stats)

    params = EngineParams.for_bound(bound)
    H = params.H
    work = _Workspace(family, ctx, stats)
    count = max(stop // H for _, stop in request.intervals)
    _LOGGER.debug(
        "interval products: K=%d H=%d blocks=%d intervals=%d",
        bound, H, count, len(request.intervals),
    )
    blocks = _giant_blocks(work, H, count)

    m = family.dim
    results = []
    for start, stop in request.intervals:
        first = -(-start // H)
        last = stop // H
        if first >= last:
            product = work.refine(start, stop)
        else:
            product = work.refine(start, first * H)
            for index in range(first, last):
                product = work.mul(blocks[index], product)
            product = work.mul(work.refine(last * H, stop), product)
        results.append(RingMatrix(ctx, m, m, product))
    return results


def shift_evaluations(
    values: Sequence[Union[RingMatrix, RingElem]],
    shift: Union[int, RingElem],
    ctx: Optional[RingCtx] = None,
    *,
    step: Union[int, RingElem] = 1,
) -> List[Union[RingMatrix, RingElem]]:
    """Values of the interpolating polynomial at ``shift + k * step``.

    ``values`` are ``F(0), F(step), ..., F(d * step)``; the result holds
    ``F(shift), F(shift + step), ..., F(shift + d * step)``.
    """

    if not values:
        return []
    first = values[0]
    ctx = ctx or first.ctx
    try:
        a = int(shift) * ctx.inverse_of(int(step)) % ctx.modulus
    except NotAUnitError as exc:
        raise NonUnitAbscissaError(f"step {int(step)} is not a unit") from exc

    if isinstance(first, RingMatrix):
        series = [list(column) for column in zip(*(v.data for v in values))]
        shifted = _lagrange_shift(series, a, ctx)
        return [
            RingMatrix(ctx, first.rows, first.cols, tuple(entry[k] for entry in shifted))
            for k in range(len(values))
        ]
    shifted = _lagrange_shift([[int(v) % ctx.modulus for v in values]], a, ctx)[0]
    return [RingElem(ctx, v) for v in shifted]
