"""Characteristic polynomial of Frobenius and the zeta numerator."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import gmpy2

from .matrix import RingMatrix, charpoly_berkowitz
from .padic_ring import RingCtx, ShapeMismatchError, ring_create
from .polynomial import horner

__all__ = [
    "CharPolyModP",
    "ZetaNumerator",
    "ZetaError",
    "TooLargeError",
    "charpoly_frobenius",
    "recover_zeta",
    "weil_exact",
    "precision_for_exact_zeta",
    "point_count_naive",
    "zeta_from_counts",
    "POINT_COUNT_CAP",
]

_LOGGER = logging.getLogger(__name__)

#: Largest field size the brute-force counter will enumerate.
POINT_COUNT_CAP = 10**6


class ZetaError(RuntimeError):
    """Base error for zeta function computations."""


class TooLargeError(ZetaError):
    """Raised when brute-force counting would exceed :data:`POINT_COUNT_CAP`."""


@dataclass(frozen=True)
class CharPolyModP:
    """Monic characteristic polynomial, coefficients ascending (``coeffs[-1] == 1``)."""

    ctx: RingCtx
    coeffs: Tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def frobenius_coefficient(self, i: int) -> int:
        """``a_i``, the coefficient of ``T^(2g-i)``, as a canonical residue."""

        return self.coeffs[self.degree - i]

    def descending(self) -> List[int]:
        return list(reversed(self.coeffs))


@dataclass(frozen=True)
class ZetaNumerator:
    """``P(T) = T^2g + a_1 T^(2g-1) + ... + p^g`` recovered from a charpoly.

    ``a`` holds the balanced lifts of ``a_1 .. a_g`` and ``exact`` whether
    the Weil bound pins each of them down. The upper half of the
    coefficients follows from ``a_(2g-i) = p^(g-i) a_i``.
    """

    p: int
    g: int
    N: int
    a: Tuple[int, ...]
    exact: Tuple[bool, ...]

    @property
    def complete(self) -> bool:
        return all(self.exact)

    def coefficients(self) -> List[int]:
        """``a_0 .. a_2g`` (descending powers of ``T``)."""

        lower = [1] + list(self.a)
        upper = [self.p ** (self.g - i) * lower[i] for i in range(self.g - 1, -1, -1)]
        return lower + upper

    @property
    def jacobian_order(self) -> Optional[int]:
        if not self.complete:
            return None
        return sum(self.coefficients())


def weil_exact(p: int, g: int, i: int, N: int) -> bool:
    """Whether ``2 binom(2g, i) p^(i/2) < p^N``, compared without floats."""

    bound = 2 * math.comb(2 * g, i)
    return bound * bound * p**i < p ** (2 * N)


def precision_for_exact_zeta(p: int, g: int) -> int:
    """Smallest ``N`` for which every ``a_1 .. a_g`` is determined by the Weil bound."""

    N = 1
    while not all(weil_exact(p, g, i, N) for i in range(1, g + 1)):
        N += 1
    return N


# ----------------------------------------------------------------------
# Public API
def charpoly_frobenius(matrix: RingMatrix) -> CharPolyModP:
    if not matrix.is_square:
        raise ShapeMismatchError("Frobenius matrix must be square")
    poly = charpoly_berkowitz(matrix)
    return CharPolyModP(matrix.ctx, poly.coeffs)


def recover_zeta(cp: CharPolyModP, p: int, g: int, N: int) -> ZetaNumerator:
    if cp.degree != 2 * g:
        raise ShapeMismatchError(f"expected a degree {2 * g} polynomial, got {cp.degree}")
    ctx = cp.ctx
    if ctx.e != N or ctx.p != p:
        raise ShapeMismatchError(
            f"charpoly lives modulo {ctx.p}^{ctx.e}, not {p}^{N}"
        )
    lifted = tuple(ctx.balanced(cp.frobenius_coefficient(i)) for i in range(1, g + 1))
    exact = tuple(weil_exact(p, g, i, N) for i in range(1, g + 1))
    zeta = ZetaNumerator(p=p, g=g, N=N, a=lifted, exact=exact)
    _LOGGER.debug("recovered a=%s exact=%s", lifted, exact)
    return zeta


# ----------------------------------------------------------------------
# Brute-force counting
def _least_non_residue(p: int) -> int:
    d = 2
    while gmpy2.powmod(d, (p - 1) // 2, p) != p - 1:
        d += 1
    return d


def _count_prime_field(p: int, coeffs: Sequence[int]) -> int:
    affine = 0
    for x in range(p):
        value = horner(coeffs, x, p)
        affine += 1 if value == 0 else 1 + gmpy2.legendre(value, p)
    return affine


def _count_quadratic_field(p: int, coeffs: Sequence[int]) -> int:
    """Affine points over ``F_p[u]/(u^2 - d)``.

    ``z`` is a square in ``F_(p^2)`` exactly when its norm is a square in
    ``F_p``.
    """

    d = _least_non_residue(p)
    reversed_coeffs = list(reversed(coeffs))
    affine = 0
    for x0 in range(p):
        for x1 in range(p):
            r0, r1 = 0, 0
            for c in reversed_coeffs:
                r0, r1 = (r0 * x0 + d * r1 * x1 + c) % p, (r0 * x1 + r1 * x0) % p
            if r0 == 0 and r1 == 0:
                affine += 1
            else:
                norm = (r0 * r0 - d * r1 * r1) % p
                affine += 1 + gmpy2.legendre(norm, p)
    return affine


def point_count_naive(p: int, q_coeffs: Sequence[int], k: int = 1) -> int:
    """Projective points of ``y^2 = Q(x)`` over ``F_(p^k)``, ``k`` in ``{1, 2}``.

    The odd-degree model has exactly one point at infinity.
    """

    if k not in (1, 2):
        raise ValueError(f"only k = 1 or k = 2 are supported, got {k}")
    ring_create(p, 1)
    if p**k > POINT_COUNT_CAP:
        raise TooLargeError(f"p^k = {p ** k} exceeds the brute-force cap {POINT_COUNT_CAP}")
    coeffs = [int(c) % p for c in q_coeffs]
    affine = _count_prime_field(p, coeffs) if k == 1 else _count_quadratic_field(p, coeffs)
    return int(affine) + 1


def zeta_from_counts(p: int, g: int, counts: Dict[int, int]) -> Tuple[int, ...]:
    """Exact ``a_1 .. a_g`` from ``#C(F_(p^k))`` for ``k = 1 .. g``.

    With ``s_k = p^k + 1 - #C(F_(p^k))`` the power sums of the Frobenius
    eigenvalues, Newton's identities give the elementary symmetric
    functions ``e_k`` and ``a_k = (-1)^k e_k``.
    """

    sums = [0] + [p**k + 1 - counts[k] for k in range(1, g + 1)]
    elementary = [1]
    for k in range(1, g + 1):
        total = sum((-1) ** (i - 1) * elementary[k - i] * sums[i] for i in range(1, k + 1))
        if total % k:
            raise ZetaError(f"point counts are inconsistent at k = {k}")
        elementary.append(total // k)
    return tuple((-1) ** k * elementary[k] for k in range(1, g + 1))
