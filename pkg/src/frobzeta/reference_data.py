"""Embedded reference results used by ``selftest`` and the test-suite."""
from __future__ import annotations

from typing import Dict, Tuple

#: ``y^2 = x^5 + 2x + 1`` over ``F_10007`` at precision ``10007^3``.
SESSION_P = 10007
SESSION_N = 3
SESSION_Q: Tuple[int, ...] = (1, 2, 0, 0, 0, 1)
SESSION_MATRIX: Tuple[Tuple[int, ...], ...] = (
    (844821791581, 220205295882, 761288372988, 276316151941),
    (380371243619, 656847071320, 602083441024, 781051879529),
    (435515877861, 568305615656, 204167847992, 67069787872),
    (365277275232, 293850471444, 438804747301, 298366229783),
)

#: Published zeta numerators: ``a_1 .. a_g`` and the Jacobian order.
ZETA_FIXTURES: Dict[str, Dict[str, object]] = {
    "genus3": {
        "p": 2**50 - 27,
        "g": 3,
        "N": 2,
        "a": (-8207566, 336549388766991, 17004180735172175425188),
        "jacobian_order": 1427247682301531613968301082755745957628851920,
    },
    "genus4": {
        "p": 2**44 + 7,
        "g": 4,
        "N": 3,
        "a": (
            2394254,
            29576915959850,
            88182558522652238508,
            536178748943545477971279916,
        ),
        "jacobian_order": 95780984339838343855809310281601230464609800042292722,
    },
}
