import random

import pytest
import sympy

from frobzeta.curve_setup import SingularCurveError, validate
from frobzeta.matrix import RingMatrix, determinant
from frobzeta.reduction_maps import (
    DifferentialVec,
    apply_step,
    horizontal_family,
    vertical_family,
)


@pytest.fixture()
def rng() -> random.Random:
    return random.Random(31337)


def random_curve(rng: random.Random, p: int, N: int, g: int):
    while True:
        coeffs = [rng.randrange(p) for _ in range(2 * g + 1)] + [1]
        try:
            return validate(p, N, coeffs)
        except SingularCurveError:
            continue


def test_vertical_family_elliptic_formula() -> None:
    a, b, p = 5, 7, 1009
    curve = validate(p, 1, [b, a, 0, 1])
    ctx = curve.ctx_n1
    family = vertical_family(curve, ctx)
    inv_delta = ctx.inverse_of(27 * b * b + 4 * a**3)
    for t in (1, 2, 17, 504, 505, 1513):
        expected = RingMatrix.from_rows(
            ctx,
            [
                [9 * b * (6 * t - 5) * inv_delta, 2 * a * a * (6 * t - 5) * inv_delta],
                [-6 * a * (6 * t - 7) * inv_delta, 9 * b * (6 * t - 7) * inv_delta],
            ],
        )
        assert family.evaluate(t) == expected
        assert family.denominator(t) == 2 * t - 1


def test_vertical_family_at_one() -> None:
    curve = validate(101, 1, [0, 1, 0, 1])
    ctx = curve.ctx_n1
    family = vertical_family(curve, ctx)
    quarter = ctx.inverse_of(4)
    assert family.evaluate(1).to_rows() == [[0, 2 * quarter % ctx.modulus], [6 * quarter % ctx.modulus, 0]]
    assert family.denominator(1) == 1


def test_horizontal_family_elliptic_formula() -> None:
    a, b, p = 3, 11, 101
    curve = validate(p, 1, [b, a, 0, 1])
    ctx = curve.ctx_n
    for t in (50, 151):
        family = horizontal_family(curve, t, ctx)
        for s in (0, 1, 7, 99):
            expected = RingMatrix.from_rows(
                ctx,
                [
                    [0, 0, 2 * b * s],
                    [6 * t - 2 * s - 3, 0, a * (2 * s - 2 * t + 1)],
                    [0, 6 * t - 2 * s - 3, 0],
                ],
            )
            assert family.evaluate(s) == expected


@pytest.mark.parametrize("g", [1, 2, 3])
def test_horizontal_family_shape(rng, g: int) -> None:
    curve = random_curve(rng, 1009, 2, g)
    t = (3 * curve.p - 1) // 2
    family = horizontal_family(curve, t, curve.ctx_n1)
    size = 2 * g + 1
    assert family.evaluate(0).entry(0, size - 1) == 0
    for _ in range(5):
        s = rng.randrange(10**6)
        m = family.evaluate(s)
        d = family.denominator(s)
        assert d % 2 == 1
        assert m == family.const + family.linear.scale(s)
        for i in range(size):
            for j in range(size - 1):
                expected = d % curve.ctx_n1.modulus if i == j + 1 else 0
                assert m.entry(i, j) == expected


def test_denominator_is_odd_for_any_t(rng) -> None:
    curve = random_curve(rng, 101, 1, 2)
    for _ in range(20):
        t = rng.randrange(-(10**6), 10**6)
        family = horizontal_family(curve, t, curve.ctx_n)
        assert family.denominator(rng.randrange(-(10**6), 10**6)) % 2 == 1


def test_zero_vector_stays_zero(rng) -> None:
    curve = random_curve(rng, 101, 2, 2)
    ctx = curve.ctx_n1
    vertical = vertical_family(curve, ctx)
    horizontal = horizontal_family(curve, 151, ctx)
    v = apply_step(vertical, 30, DifferentialVec(ctx, -1, 30, (0,) * 4))
    assert v.is_zero() and (v.s, v.t) == (-1, 29)
    w = apply_step(horizontal, 12, DifferentialVec(ctx, 12, 151, (0,) * 5))
    assert w.is_zero() and (w.s, w.t) == (11, 151)


def test_vertical_step_extracts_scaled_column(rng) -> None:
    curve = random_curve(rng, 101, 1, 2)
    ctx = curve.ctx_n1
    family = vertical_family(curve, ctx)
    for t in (3, 51, 152):
        matrix = family.evaluate(t)
        for i in range(4):
            unit = tuple(1 if k == i else 0 for k in range(4))
            v = DifferentialVec(ctx, -1, t, unit)
            raw = apply_step(family, t, v, divide=False)
            assert raw.values == matrix.column(i)
            if (2 * t - 1) % curve.p:
                scaled = apply_step(family, t, v)
                inv = ctx.inverse_of(2 * t - 1)
                assert scaled.values == tuple(x * inv % ctx.modulus for x in matrix.column(i))


def test_vertical_steps_compose_in_reduction_order(rng) -> None:
    curve = random_curve(rng, 101, 2, 1)
    ctx = curve.ctx_n1
    family = vertical_family(curve, ctx)
    t0, t2 = 5, 12
    v = DifferentialVec.from_ints(ctx, -1, t2, [rng.randrange(ctx.modulus) for _ in range(2)])
    product = RingMatrix.identity(ctx, 2)
    for t in range(t0 + 1, t2 + 1):
        product = product * family.evaluate(t)
    w = v
    for t in range(t2, t0, -1):
        w = apply_step(family, t, w, divide=False)
    assert w.t == t0
    assert list(w.values) == product.apply(v.values)


def test_horizontal_step_matches_exact_relation() -> None:
    a, b, p = 1, 0, 101
    curve = validate(p, 1, [b, a, 0, 1])
    ctx = curve.ctx_n
    x = sympy.symbols("x")
    P = a * x + b
    for s, t in ((5, 50), (40, 50), (1, 17)):
        family = horizontal_family(curve, t, ctx)
        v = DifferentialVec(ctx, s, t, (0, 0, 1))
        w = apply_step(family, s, v)
        D = 3 * (2 * t - 1) - 2 * s
        relation = sympy.Poly(sympy.expand(2 * s * x ** (s - 1) * P - (2 * t - 1) * x**s * sympy.diff(P, x)), x)
        expected = []
        for h in range(3):
            coefficient = relation.coeff_monomial(x ** (s - 1 + h))
            expected.append(int(coefficient) * pow(D, -1, p) % p)
        assert (w.s, w.t) == (s - 1, t)
        assert list(w.values) == expected


@pytest.mark.parametrize("g", [1, 2])
def test_vertical_matrix_invertible_at_half_integers(rng, g: int) -> None:
    curve = random_curve(rng, 211, 3, g)
    ctx = curve.ctx_n1
    family = vertical_family(curve, ctx)
    for j in range(3):
        t = ((2 * j + 1) * curve.p + 1) // 2
        assert (2 * t - 1) % curve.p == 0
        assert int(determinant(family.evaluate(t))) % curve.p != 0


def test_step_index_mismatch_is_rejected(rng) -> None:
    curve = random_curve(rng, 101, 1, 1)
    family = vertical_family(curve, curve.ctx_n1)
    with pytest.raises(ValueError):
        apply_step(family, 4, DifferentialVec(curve.ctx_n1, -1, 5, (1, 0)))
