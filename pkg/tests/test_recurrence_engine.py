import os
import random

import pytest

from frobzeta.matrix import RingMatrix, determinant
from frobzeta.padic_ring import ring_create
from frobzeta.polynomial import horner
from frobzeta.recurrence_engine import (
    EngineParams,
    EngineStats,
    IntervalRequest,
    IntervalTooLongError,
    MalformedRequestError,
    NonUnitAbscissaError,
    interval_products,
    naive_interval_products,
    shift_evaluations,
)
from frobzeta.reduction_maps import MatrixFamily


@pytest.fixture()
def rng() -> random.Random:
    return random.Random(8675309)


def scalar_family(ctx) -> MatrixFamily:
    return MatrixFamily(
        ctx,
        RingMatrix.from_rows(ctx, [[0]]),
        RingMatrix.from_rows(ctx, [[1]]),
        (1, 0),
        "t",
    )


def random_family(rng: random.Random, ctx, m: int) -> MatrixFamily:
    def random_matrix() -> RingMatrix:
        return RingMatrix.from_rows(
            ctx, [[rng.randrange(ctx.modulus) for _ in range(m)] for _ in range(m)]
        )

    return MatrixFamily(ctx, random_matrix(), random_matrix(), (1, 0), "t")


def test_engine_params() -> None:
    assert EngineParams.for_bound(1) == EngineParams(H=1, B=1, s=0)
    assert EngineParams.for_bound(16) == EngineParams(H=4, B=4, s=2)
    assert EngineParams.for_bound(351) == EngineParams(H=16, B=22, s=4)


@pytest.mark.parametrize("threshold", [0, 64])
def test_factorial_product(threshold: int) -> None:
    ctx = ring_create(101, 3)
    (product,) = interval_products(scalar_family(ctx), [(0, 4)], naive_threshold=threshold)
    assert product.entry(0, 0) == 24


def test_factorial_products_over_long_intervals() -> None:
    ctx = ring_create(1009, 2)
    products = interval_products(scalar_family(ctx), [(0, 300), (500, 900)])
    expected_first = 1
    for k in range(1, 301):
        expected_first = expected_first * k % ctx.modulus
    expected_second = 1
    for k in range(501, 901):
        expected_second = expected_second * k % ctx.modulus
    assert [p.entry(0, 0) for p in products] == [expected_first, expected_second]


def test_identity_family() -> None:
    ctx = ring_create(1009, 2)
    family = MatrixFamily(
        ctx, RingMatrix.identity(ctx, 3), RingMatrix.zeros(ctx, 3, 3), (1, 0), "t"
    )
    products = interval_products(family, [(3, 10), (10, 200), (250, 900)])
    assert all(p == RingMatrix.identity(ctx, 3) for p in products)


def test_engine_matches_naive(rng) -> None:
    ctx = ring_create(1009, 2)
    family = random_family(rng, ctx, 4)
    request = IntervalRequest.of([(0, 50), (60, 200), (350, 351)])
    assert interval_products(family, request) == naive_interval_products(family, request)


@pytest.mark.parametrize("m", [1, 2, 5])
def test_engine_matches_naive_on_random_requests(rng, m: int) -> None:
    ctx = ring_create(211, 3)
    family = random_family(rng, ctx, m)
    cuts = sorted(rng.sample(range(1, 3000), 8))
    request = IntervalRequest.of(list(zip(cuts[::2], cuts[1::2])), bound=3000)
    assert interval_products(family, request, naive_threshold=0) == naive_interval_products(
        family, request
    )



def test_engine_matches_naive_on_many_random_requests(rng) -> None:
    primes = (103, 211, 1009)
    for case in range(200):
        m = rng.randint(1, 8)
        ctx = ring_create(rng.choice(primes), rng.randint(1, 4))
        cap = min(10**4, 100_000 // m**3)
        bound = rng.randint(2, cap)
        pairs = rng.randint(1, min(6, (bound + 1) // 2))
        cuts = sorted(rng.sample(range(bound + 1), 2 * pairs))
        request = IntervalRequest.of(list(zip(cuts[::2], cuts[1::2])), bound=bound)
        family = random_family(rng, ctx, m)
        fast = interval_products(family, request, naive_threshold=case % 2 * 64)
        assert fast == naive_interval_products(family, request), (case, m, ctx, request)

def test_products_compose(rng) -> None:
    ctx = ring_create(1009, 1)
    family = random_family(rng, ctx, 3)
    left, right, whole = interval_products(family, [(0, 170), (170, 400)]) + interval_products(
        family, [(0, 400)]
    )
    assert whole == right * left



def test_determinant_is_multiplicative(rng) -> None:
    ctx = ring_create(1009, 2)
    family = random_family(rng, ctx, 3)
    intervals = [(0, 37), (40, 300), (512, 700)]
    for (start, stop), product in zip(intervals, interval_products(family, intervals)):
        expected = 1
        for k in range(start + 1, stop + 1):
            expected = expected * int(determinant(family.evaluate(k))) % ctx.modulus
        assert int(determinant(product)) == expected

def test_single_step_interval(rng) -> None:
    ctx = ring_create(101, 2)
    family = random_family(rng, ctx, 2)
    (product,) = naive_interval_products(family, [(17, 18)])
    assert product == family.evaluate(18)


def test_request_validation() -> None:
    with pytest.raises(MalformedRequestError):
        IntervalRequest.of([(5, 3)])
    with pytest.raises(MalformedRequestError):
        IntervalRequest.of([(0, 10), (9, 12)])
    with pytest.raises(MalformedRequestError):
        IntervalRequest.of([(4, 4)])
    with pytest.raises(MalformedRequestError):
        IntervalRequest.of([(0, 10)], bound=9)
    assert IntervalRequest.of([(0, 10), (10, 12)]).bound == 12


def test_interval_too_long() -> None:
    ctx = ring_create(11, 2)
    with pytest.raises(IntervalTooLongError):
        interval_products(scalar_family(ctx), [(0, 100)])


def test_shift_examples() -> None:
    ctx = ring_create(101, 1)
    constants = [ctx(7)] * 4
    assert [int(v) for v in shift_evaluations(constants, 55)] == [7, 7, 7, 7]
    identity = [ctx(0), ctx(1), ctx(2)]
    assert [int(v) for v in shift_evaluations(identity, 10)] == [10, 11, 12]


@pytest.mark.parametrize("shift", [55, 2, -3, 10007**2 - 1])
def test_shift_matches_horner(rng, shift: int) -> None:
    ctx = ring_create(10007, 2)
    coeffs = [rng.randrange(ctx.modulus) for _ in range(4)]
    values = [ctx(horner(coeffs, k, ctx.modulus)) for k in range(4)]
    shifted = shift_evaluations(values, shift)
    assert [int(v) for v in shifted] == [horner(coeffs, shift + k, ctx.modulus) for k in range(4)]


def test_shift_with_step(rng) -> None:
    ctx = ring_create(10007, 2)
    coeffs = [rng.randrange(ctx.modulus) for _ in range(3)]
    values = [ctx(horner(coeffs, 5 * k, ctx.modulus)) for k in range(3)]
    shifted = shift_evaluations(values, 40, step=5)
    assert [int(v) for v in shifted] == [horner(coeffs, 40 + 5 * k, ctx.modulus) for k in range(3)]


def test_shift_matrices(rng) -> None:
    ctx = ring_create(1009, 2)
    family = random_family(rng, ctx, 2)
    values = [family.evaluate(k) for k in range(2)]
    assert shift_evaluations(values, 300) == [family.evaluate(300), family.evaluate(301)]



def test_shift_round_trip(rng) -> None:
    ctx = ring_create(10007, 3)
    for degree in (1, 4, 9):
        values = [ctx(rng.randrange(ctx.modulus)) for _ in range(degree + 1)]
        shift = rng.randrange(degree + 1, ctx.p - degree - 1) + ctx.p * rng.randrange(50)
        forward = shift_evaluations(values, shift)
        assert shift_evaluations(forward, -shift) == values

def test_shift_rejects_non_unit_step() -> None:
    ctx = ring_create(101, 1)
    with pytest.raises(NonUnitAbscissaError):
        shift_evaluations([ctx(1), ctx(2)], 3, step=101)


def test_shift_rejects_non_unit_abscissa() -> None:
    ctx = ring_create(101, 2)
    with pytest.raises(NonUnitAbscissaError):
        shift_evaluations([ctx(1), ctx(2), ctx(4)], 102)


@pytest.mark.skipif(not os.environ.get("FROBZETA_BENCH"), reason="set FROBZETA_BENCH to run")
def test_operation_count_grows_like_square_root(rng) -> None:
    ctx = ring_create(100003, 1)
    family = random_family(rng, ctx, 3)
    counts = []
    for bound in (4**6, 4**7):
        stats = EngineStats()
        interval_products(family, [(0, bound)], stats=stats)
        counts.append(stats.matrix_products)
    assert counts[1] <= 3 * counts[0]
