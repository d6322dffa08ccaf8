import math
from types import SimpleNamespace

from mpmath import mp

from selfsim.settings import settings

DOUBLE = SimpleNamespace(
    num=float,
    log=math.log,
    sqrt=math.sqrt,
    atan=math.atan,
    asinh=math.asinh,
    exp=math.exp,
)

EXTENDED = SimpleNamespace(
    num=mp.mpf,
    log=mp.log,
    sqrt=mp.sqrt,
    atan=mp.atan,
    asinh=mp.asinh,
    exp=mp.exp,
)


def backend(extended: bool):
    return EXTENDED if extended else DOUBLE


def extended_precision(dps=None):
    # mpmath rounds at operation time, so residual arithmetic must run inside this too
    return mp.workdps(dps or settings.EXTENDED_DPS)
