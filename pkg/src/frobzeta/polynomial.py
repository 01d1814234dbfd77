"""Dense univariate polynomials over ``Z/p^e`` and fast evaluation helpers."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import gmpy2
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_from_int_poly, gf_gcd

from .padic_ring import RingCtx, RingElem, ShapeMismatchError

__all__ = [
    "RingPoly",
    "SubproductTree",
    "poly_mul",
    "poly_eval_multi",
    "gcd_mod_prime",
    "horner",
    "SCHOOLBOOK_CUTOFF",
    "MULTIPOINT_CUTOFF",
]

#: Operands shorter than this are multiplied with the quadratic algorithm.
SCHOOLBOOK_CUTOFF = 32

#: Point sets at least this large are evaluated through a subproduct tree.
MULTIPOINT_CUTOFF = 32

Scalar = Union[int, RingElem]


# ----------------------------------------------------------------------
# Raw coefficient-list arithmetic
def _schoolbook_raw(a: Sequence[int], b: Sequence[int]) -> List[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _padded_sum(a: Sequence[int], b: Sequence[int]) -> List[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for k, c in enumerate(b):
        out[k] += c
    return out


def _karatsuba_raw(a: Sequence[int], b: Sequence[int]) -> List[int]:
    if len(a) > len(b):
        a, b = b, a
    la, lb = len(a), len(b)
    if la < SCHOOLBOOK_CUTOFF:
        return _schoolbook_raw(a, b)
    out = [0] * (la + lb - 1)
    if 2 * la <= lb:
        for start in range(0, lb, la):
            for k, c in enumerate(_karatsuba_raw(a, b[start : start + la])):
                out[start + k] += c
        return out

    half = lb // 2
    a0, a1 = a[:half], a[half:]
    b0, b1 = b[:half], b[half:]
    low = _karatsuba_raw(a0, b0)
    high = _karatsuba_raw(a1, b1)
    middle = _karatsuba_raw(_padded_sum(a0, a1), _padded_sum(b0, b1))
    for k, c in enumerate(low):
        out[k] += c
        out[k + half] -= c
    for k, c in enumerate(high):
        out[k + 2 * half] += c
        out[k + half] -= c
    for k, c in enumerate(middle):
        out[k + half] += c
    return out


def _kronecker(a: Sequence[int], b: Sequence[int], modulus: int) -> List[int]:
    """Multiply by packing both operands into single big integers."""

    length = len(a) + len(b) - 1
    bound = min(len(a), len(b)) * (modulus - 1) ** 2
    width = bound.bit_length() // 8 + 1

    def pack(values: Sequence[int]) -> gmpy2.mpz:
        blob = b"".join(int(x).to_bytes(width, "little") for x in values)
        return gmpy2.mpz(int.from_bytes(blob, "little"))

    product = int(pack(a) * pack(b)).to_bytes(width * length, "little")
    return [
        int.from_bytes(product[k * width : (k + 1) * width], "little") % modulus
        for k in range(length)
    ]


def poly_mul(
    a: Sequence[int], b: Sequence[int], modulus: int, *, method: str = "kronecker"
) -> List[int]:
    """Multiply two canonical coefficient lists modulo ``modulus``.

    ``method`` selects the algorithm used once both operands have at least
    :data:`SCHOOLBOOK_CUTOFF` coefficients: ``"kronecker"`` (default) or
    ``"karatsuba"``.
    """

    if not a or not b:
        return []
    if min(len(a), len(b)) < SCHOOLBOOK_CUTOFF:
        return [c % modulus for c in _schoolbook_raw(a, b)]
    if method == "kronecker":
        return _kronecker(a, b, modulus)
    if method == "karatsuba":
        return [c % modulus for c in _karatsuba_raw(a, b)]
    raise ValueError(f"unknown multiplication method {method!r}")


def horner(coeffs: Sequence[int], x: int, modulus: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % modulus
    return acc


def _rem_monic(f: Sequence[int], g: Sequence[int], modulus: int) -> List[int]:
    """Remainder of ``f`` by the monic polynomial ``g``."""

    dg = len(g) - 1
    r = [c % modulus for c in f]
    for k in range(len(r) - 1, dg - 1, -1):
        c = r[k]
        if c:
            base = k - dg
            for i in range(dg):
                r[base + i] = (r[base + i] - c * g[i]) % modulus
    return r[:dg]


# ----------------------------------------------------------------------
# Public API
@dataclass(frozen=True)
class RingPoly:
    """Polynomial with canonical coefficients in ascending degree order.

    Trailing zero coefficients are allowed; :attr:`degree` ignores them.
    """

    ctx: RingCtx
    coeffs: Tuple[int, ...]

    @classmethod
    def from_ints(cls, ctx: RingCtx, values: Iterable[Scalar]) -> "RingPoly":
        return cls(ctx, tuple(int(v) % ctx.modulus for v in values))

    @classmethod
    def monomial(cls, ctx: RingCtx, degree: int, coefficient: Scalar = 1) -> "RingPoly":
        return cls(ctx, (0,) * degree + (int(coefficient) % ctx.modulus,))

    @property
    def degree(self) -> int:
        for k in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[k]:
                return k
        return -1

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, index: int) -> RingElem:
        if 0 <= index < len(self.coeffs):
            return RingElem(self.ctx, self.coeffs[index])
        return self.ctx.zero

    def _coerce(self, other: "RingPoly") -> None:
        if other.ctx != self.ctx:
            raise ShapeMismatchError("polynomials live in different rings")

    def __add__(self, other: "RingPoly") -> "RingPoly":
        self._coerce(other)
        return RingPoly.from_ints(self.ctx, _padded_sum(self.coeffs, other.coeffs))

    def __neg__(self) -> "RingPoly":
        return RingPoly.from_ints(self.ctx, (-c for c in self.coeffs))

    def __sub__(self, other: "RingPoly") -> "RingPoly":
        return self + (-other)

    def __mul__(self, other: Union["RingPoly", Scalar]) -> "RingPoly":
        if isinstance(other, RingPoly):
            self._coerce(other)
            return RingPoly(self.ctx, tuple(poly_mul(self.coeffs, other.coeffs, self.ctx.modulus)))
        factor = int(other)
        return RingPoly.from_ints(self.ctx, (c * factor for c in self.coeffs))

    __rmul__ = __mul__

    def derivative(self) -> "RingPoly":
        return RingPoly.from_ints(self.ctx, (k * c for k, c in enumerate(self.coeffs) if k))

    def evaluate(self, x: Scalar) -> RingElem:
        return RingElem(self.ctx, horner(self.coeffs, int(x), self.ctx.modulus))

    __call__ = evaluate

    def remainder(self, divisor: "RingPoly") -> "RingPoly":
        """Remainder by a divisor whose leading coefficient is a unit."""

        self._coerce(divisor)
        coeffs = list(divisor.coeffs[: divisor.degree + 1])
        if not coeffs:
            raise ZeroDivisionError("polynomial remainder by zero")
        scale = self.ctx.inverse_of(coeffs[-1])
        monic = [c * scale % self.ctx.modulus for c in coeffs]
        return RingPoly(self.ctx, tuple(_rem_monic(self.coeffs, monic, self.ctx.modulus)))

    def reduce_to(self, ctx: RingCtx) -> "RingPoly":
        return RingPoly.from_ints(ctx, self.coeffs)


class SubproductTree:
    """Product tree of ``x - x_i`` used for fast multipoint evaluation."""

    def __init__(self, points: Sequence[int], modulus: int):
        self.modulus = modulus
        self.points = [x % modulus for x in points]
        level = [[-x % modulus, 1] for x in self.points]
        self.levels = [level]
        while len(level) > 1:
            level = [
                poly_mul(level[k], level[k + 1], modulus) if k + 1 < len(level) else level[k]
                for k in range(0, len(level), 2)
            ]
            self.levels.append(level)

    def evaluate(self, coeffs: Sequence[int]) -> List[int]:
        if not self.points:
            return []
        remainders = [_rem_monic(coeffs, self.levels[-1][0], self.modulus)]
        for level in reversed(self.levels[:-1]):
            remainders = [
                _rem_monic(remainders[k // 2], node, self.modulus)
                for k, node in enumerate(level)
            ]
        return [r[0] if r else 0 for r in remainders]


def _first_ctx(obj) -> Optional[RingCtx]:
    if isinstance(obj, RingPoly):
        return obj.ctx
    for item in obj:
        ctx = _first_ctx(item)
        if ctx is not None:
            return ctx
    return None


def _evaluate_nested(obj, xs: List[int], ctx: RingCtx, tree: Optional[SubproductTree]):
    if isinstance(obj, RingPoly):
        ctx.coerce(obj.ctx)
        if tree is not None:
            raw = tree.evaluate(obj.coeffs)
        else:
            raw = [horner(obj.coeffs, x, ctx.modulus) for x in xs]
        return [RingElem(ctx, v) for v in raw]
    return [_evaluate_nested(item, xs, ctx, tree) for item in obj]


def poly_eval_multi(F, points: Sequence[Scalar]):
    """Evaluate ``F`` at every point.

    ``F`` is a :class:`RingPoly` or an arbitrarily nested sequence of them
    (for instance a matrix given as a list of rows). The result mirrors the
    nesting, with each polynomial replaced by the list of its values. Large
    point sets share one :class:`SubproductTree`.
    """

    ctx = _first_ctx(F)
    if ctx is None:
        return []
    xs = [int(x) % ctx.modulus for x in points]
    tree = SubproductTree(xs, ctx.modulus) if len(xs) >= MULTIPOINT_CUTOFF else None
    return _evaluate_nested(F, xs, ctx, tree)


def gcd_mod_prime(a: Sequence[int], b: Sequence[int], p: int) -> List[int]:
    """Monic gcd of two integer polynomials reduced modulo the prime ``p``.

    Coefficients are ascending here and descending in ``galoistools``.
    """

    f = gf_from_int_poly(ZZ.map([int(x) for x in reversed(a)]), p)
    h = gf_from_int_poly(ZZ.map([int(x) for x in reversed(b)]), p)
    return [int(c) for c in reversed(gf_gcd(f, h, p, ZZ))]
