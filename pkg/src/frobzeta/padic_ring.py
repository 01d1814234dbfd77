"""Fixed-precision arithmetic in the residue rings ``Z/p^e``."""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Union

import gmpy2

__all__ = [
    "RingCtx",
    "RingElem",
    "RingError",
    "NotPrimeError",
    "EvenPrimeError",
    "BadExponentError",
    "NotAUnitError",
    "DivisibilityViolatedError",
    "ShapeMismatchError",
    "ring_create",
    "inv_unit",
    "div_exact",
    "valuation",
]


class RingError(RuntimeError):
    """Base error for residue ring arithmetic."""


class NotPrimeError(RingError):
    """Raised when the requested characteristic is not a prime."""


class EvenPrimeError(RingError):
    """Raised for ``p = 2``; only odd primes are supported."""


class BadExponentError(RingError):
    """Raised when the precision exponent is smaller than one."""


class NotAUnitError(RingError):
    """Raised when inverting an element divisible by ``p``."""


class DivisibilityViolatedError(RingError):
    """Raised by :func:`div_exact` when ``v_p(b) > v_p(a)``.

    This never signals bad user input: it means a reduction step divided by
    something the precision schedule promised would divide.
    """


class ShapeMismatchError(RingError):
    """Raised when operands do not share a ring or have incompatible shapes."""


@dataclass(frozen=True)
class RingCtx:
    """The ring ``Z/p^e``.

    Use :func:`ring_create` to build validated contexts. All values handled
    through a context are plain Python integers in ``[0, p^e)``; the raw
    helpers below work on those integers so hot loops avoid wrapper objects.
    """

    p: int
    e: int
    modulus: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "modulus", self.p**self.e)

    def __call__(self, value: Union[int, "RingElem"]) -> "RingElem":
        return RingElem(self, int(value) % self.modulus)

    # ------------------------------------------------------------------
    # Raw integer helpers
    def reduce(self, value: int) -> int:
        return value % self.modulus

    def balanced(self, value: int) -> int:
        """Return the signed representative in ``(-p^e/2, p^e/2]``."""

        value %= self.modulus
        return value - self.modulus if 2 * value > self.modulus else value

    def valuation_of(self, value: int) -> int:
        value %= self.modulus
        if value == 0:
            return self.e
        _, count = gmpy2.remove(value, self.p)
        return int(count)

    def inverse_of(self, value: int) -> int:
        value %= self.modulus
        if value % self.p == 0:
            raise NotAUnitError(f"{value} is not a unit modulo {self.p}^{self.e}")
        return int(gmpy2.invert(value, self.modulus))

    def div_exact_of(self, a: int, b: int) -> int:
        """Raw form of :func:`div_exact`."""

        a %= self.modulus
        b %= self.modulus
        v = self.valuation_of(b)
        if self.valuation_of(a) < v:
            raise DivisibilityViolatedError(
                f"v_p({b}) = {v} exceeds v_p({a}) in Z/{self.p}^{self.e}"
            )
        if v == self.e:
            return 0
        scale = self.p**v
        reduced_modulus = self.p ** (self.e - v)
        unit = b // scale
        return (a // scale) * int(gmpy2.invert(unit, reduced_modulus)) % reduced_modulus

    def coerce(self, other: "RingCtx") -> "RingCtx":
        """Return ``self`` if ``other`` is the same ring, else raise."""

        if other != self:
            raise ShapeMismatchError(
                f"operands live in Z/{self.p}^{self.e} and Z/{other.p}^{other.e}"
            )
        return self

    @property
    def zero(self) -> "RingElem":
        return RingElem(self, 0)

    @property
    def one(self) -> "RingElem":
        return RingElem(self, 1 % self.modulus)


@dataclass(frozen=True)
class RingElem:
    """An element of ``Z/p^e`` stored as its canonical residue."""

    ctx: RingCtx
    value: int

    def _other(self, other: Union[int, "RingElem"]) -> int:
        if isinstance(other, RingElem):
            self.ctx.coerce(other.ctx)
            return other.value
        return int(other)

    def __add__(self, other: Union[int, "RingElem"]) -> "RingElem":
        return RingElem(self.ctx, (self.value + self._other(other)) % self.ctx.modulus)

    __radd__ = __add__

    def __sub__(self, other: Union[int, "RingElem"]) -> "RingElem":
        return RingElem(self.ctx, (self.value - self._other(other)) % self.ctx.modulus)

    def __rsub__(self, other: Union[int, "RingElem"]) -> "RingElem":
        return RingElem(self.ctx, (self._other(other) - self.value) % self.ctx.modulus)

    def __mul__(self, other: Union[int, "RingElem"]) -> "RingElem":
        return RingElem(self.ctx, self.value * self._other(other) % self.ctx.modulus)

    __rmul__ = __mul__

    def __neg__(self) -> "RingElem":
        return RingElem(self.ctx, -self.value % self.ctx.modulus)

    def __pow__(self, exponent: int) -> "RingElem":
        if exponent < 0:
            return inv_unit(self) ** (-exponent)
        return RingElem(self.ctx, pow(self.value, exponent, self.ctx.modulus))

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value

    def is_zero(self) -> bool:
        return self.value == 0

    def balanced(self) -> int:
        return self.ctx.balanced(self.value)


# ----------------------------------------------------------------------
# Public API
@functools.cache
def ring_create(p: int, e: int) -> RingCtx:
    """Return the validated context for ``Z/p^e``.

    Contexts are cached, so repeated requests for the same ring share one
    immutable object.
    """

    if p == 2:
        raise EvenPrimeError("p = 2 is not supported; p must be an odd prime")
    if p < 2 or not gmpy2.is_prime(p):
        raise NotPrimeError(f"{p} is not a prime")
    if e < 1:
        raise BadExponentError(f"precision exponent must be at least 1, got {e}")
    return RingCtx(int(p), int(e))


def inv_unit(a: RingElem) -> RingElem:
    return RingElem(a.ctx, a.ctx.inverse_of(a.value))


def div_exact(a: RingElem, b: RingElem) -> RingElem:
    """Return some ``c`` with ``b * c == a`` modulo ``p^(e - v_p(b))``.

    The result is the least non-negative representative of the quotient in
    ``Z/p^(e-v)``; its top ``v`` digits carry no information.
    """

    a.ctx.coerce(b.ctx)
    return RingElem(a.ctx, a.ctx.div_exact_of(a.value, b.value))


def valuation(a: RingElem) -> int:
    return a.ctx.valuation_of(a.value)
