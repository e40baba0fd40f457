"""Golden-section refinement of grid extrema."""

import math

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_INV_PHI_SQ = (3.0 - math.sqrt(5.0)) / 2.0


def golden_min(f, a, b, width):
    """Shrink [a, b] around a local minimum of ``f`` until the bracket is
    narrower than ``width``; returns (argmin, value) at the bracket center."""
    if b < a:
        a, b = b, a
    h = b - a
    if h <= width:
        x = 0.5 * (a + b)
        return x, f(x)
    n = int(math.ceil(math.log(width / h) / math.log(_INV_PHI)))
    c = a + _INV_PHI_SQ * h
    d = a + _INV_PHI * h
    yc = f(c)
    yd = f(d)
    for _ in range(n - 1):
        if yc < yd:
            b, d, yd = d, c, yc
            h *= _INV_PHI
            c = a + _INV_PHI_SQ * h
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            h *= _INV_PHI
            d = a + _INV_PHI * h
            yd = f(d)
    x = 0.5 * (a + d) if yc < yd else 0.5 * (c + b)
    return x, f(x)


def golden_max(f, a, b, width):
    x, y = golden_min(lambda t: -f(t), a, b, width)
    return x, -y
