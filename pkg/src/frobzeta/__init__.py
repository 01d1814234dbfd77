"""p-adic Frobenius matrices and zeta functions of hyperelliptic curves."""

__all__ = [
    "RingCtx",
    "RingElem",
    "RingPoly",
    "RingMatrix",
    "CurveData",
    "FrobeniusOptions",
    "ZetaNumerator",
    "ring_create",
    "validate",
    "interval_products",
    "frobenius_matrix",
    "charpoly_frobenius",
    "recover_zeta",
    "point_count_naive",
]

from .padic_ring import RingCtx, RingElem, ring_create
from .polynomial import RingPoly
from .matrix import RingMatrix
from .curve_setup import CurveData, validate
from .recurrence_engine import interval_products
from .frobenius_core import FrobeniusOptions, frobenius_matrix
from .zeta import ZetaNumerator, charpoly_frobenius, point_count_naive, recover_zeta
