import pytest

from frobzeta.padic_ring import (
    BadExponentError,
    DivisibilityViolatedError,
    EvenPrimeError,
    NotAUnitError,
    NotPrimeError,
    ShapeMismatchError,
    div_exact,
    inv_unit,
    ring_create,
    valuation,
)


@pytest.fixture()
def z49():
    return ring_create(7, 2)


@pytest.fixture()
def z125():
    return ring_create(5, 3)


def test_ring_create_sets_modulus() -> None:
    assert ring_create(7, 2).modulus == 49
    assert ring_create(10007, 4).modulus == 10007**4


def test_ring_create_is_cached() -> None:
    assert ring_create(11, 3) is ring_create(11, 3)


@pytest.mark.parametrize(
    "p, e, error",
    [
        (2, 3, EvenPrimeError),
        (9, 2, NotPrimeError),
        (1, 2, NotPrimeError),
        (10008, 1, NotPrimeError),
        (7, 0, BadExponentError),
    ],
)
def test_ring_create_rejects_bad_input(p: int, e: int, error: type) -> None:
    with pytest.raises(error):
        ring_create(p, e)


def test_inverse_of_units(z49) -> None:
    assert int(inv_unit(z49(1))) == 1
    assert int(inv_unit(z49(3))) == 33
    assert int(z49(3) * inv_unit(z49(3))) == 1


def test_inverse_of_multiple_of_p_fails(z49) -> None:
    with pytest.raises(NotAUnitError):
        inv_unit(z49(7))


def test_div_exact(z125) -> None:
    assert int(div_exact(z125(50), z125(10))) == 5
    assert int(div_exact(z125(0), z125(1))) == 0


def test_div_exact_result_satisfies_quotient(z125) -> None:
    for a in range(0, 125, 5):
        q = div_exact(z125(a), z125(15))
        assert (int(q) * 15 - a) % 25 == 0


def test_div_exact_rejects_larger_valuation(z125) -> None:
    with pytest.raises(DivisibilityViolatedError):
        div_exact(z125(5), z125(25))


def test_valuation(z49) -> None:
    assert valuation(z49(14)) == 1
    assert valuation(z49(0)) == 2
    assert valuation(z49(6)) == 0


def test_elements_reduce_and_balance(z49) -> None:
    a = z49(50)
    assert int(a) == 1
    assert int(a - 2) == 48
    assert (a - 2).balanced() == -1
    assert int(-z49(3)) == 46
    assert int(z49(3) ** -1) == 33


def test_mixing_rings_fails(z49, z125) -> None:
    with pytest.raises(ShapeMismatchError):
        z49(1) + z125(1)


def test_valuation_of_products(z125) -> None:
    for a in range(125):
        for b in range(125):
            x, y = z125(a), z125(b)
            assert valuation(x * y) == min(3, valuation(x) + valuation(y)), (a, b)
