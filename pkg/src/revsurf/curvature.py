"""Gauss curvature and curvature integrals of a profile metric.

For the metric ds^2 + a(s)^2 dtheta^2 the Gauss curvature is
K(s) = -a''(s)/a(s) and the area density is a(s), so the integral of K
over a pole-centered disk reduces by the fundamental theorem of calculus
to a closed form in a':

    (1/2pi) * int_{0<=s<=x} K dA = 1 - a'(x)        (north-pole disk)
    (1/2pi) * int_{x<=s<=L} K dA = 1 + a'(x)        (south-pole disk)

The quadrature route integrates -a''(s) directly (identically equal to
K * a, with no removable 0/0 at the poles) and serves as the independent
cross-check of the closed form.
"""

import math

import numpy as np

from ._ops import MODE_NEG_D2
from .errors import ProfileError

__all__ = [
    "POLE_BAND_FRACTION",
    "gauss_curvature", "gauss_curvature_grid",
    "disk_integral_closed", "disk_integral_quadrature",
    "total_curvature", "latitude_geodesic_curvature_total",
    "curvature_table", "write_curvature_csv",
]

#: width of the pole guard band as a fraction of L
POLE_BAND_FRACTION = 1e-4

TWO_PI = 2.0 * math.pi


def _check_pole(pole):
    if pole not in ("np", "sp"):
        raise ValueError(f"pole must be 'np' or 'sp', got {pole!r}")


def gauss_curvature(p, s):
    """Gauss curvature K(s) = -a''(s)/a(s).

    Within a guard band of width 1e-4*L around each pole the raw ratio
    loses all precision (both a'' and a vanish), so the one-step
    L'Hopital form -a'''(s)/a'(s) is cross-faded in linearly, reaching
    the exact limit -a'''(pole)/a'(pole) at the pole itself. The limit
    relies on a''(pole) = 0, which holds for any metric that is smooth at
    the poles; for profiles violating it the band values are unreliable.
    """
    L = p.length
    s = min(max(float(s), 0.0), L)
    delta = POLE_BAND_FRACTION * L
    dist = min(s, L - s)
    j = p.jet(s)
    if dist >= delta:
        return -j.d2 / j.v
    if p.kind == "expression":
        third = j.d3
    else:
        third = p.pole_third_derivative("np" if s <= 0.5 * L else "sp")
    k_limit = -third / j.d1
    w = dist / delta
    if w > 0.0 and j.v > 0.0:
        return (1.0 - w) * k_limit + w * (-j.d2 / j.v)
    return k_limit


def gauss_curvature_grid(p, svals, jets=None):
    """Vectorized :func:`gauss_curvature` over an array of arclengths."""
    svals = np.clip(np.asarray(svals, dtype=np.float64), 0.0, p.length)
    if jets is None:
        jets = p.jet_many(svals)
    a = jets[:, 0]
    d1 = jets[:, 1]
    d2 = jets[:, 2]
    if p.kind == "expression":
        third = jets[:, 3]
    else:
        third = np.where(svals <= 0.5 * p.length,
                         p.pole_third_derivative("np"),
                         p.pole_third_derivative("sp"))
    delta = POLE_BAND_FRACTION * p.length
    dist = np.minimum(svals, p.length - svals)
    w = np.clip(dist / delta, 0.0, 1.0)
    k_limit = -third / d1
    safe = a > 0.0
    ratio = np.divide(-d2, a, out=np.zeros_like(a), where=safe)
    w = np.where(safe, w, 0.0)
    return (1.0 - w) * k_limit + w * ratio


def disk_integral_closed(p, x, pole="np"):
    """(1/2pi) * integral of K over the pole-centered disk bounded by the
    latitude at s = x, in closed form: 1 - a'(x) for the north disk,
    1 + a'(x) for the south disk (disk parametrized by x <= s <= L)."""
    _check_pole(pole)
    d1 = p.jet(x).d1
    return 1.0 - d1 if pole == "np" else 1.0 + d1


def disk_integral_quadrature(p, x, pole="np", tol=1e-10, budget=None):
    """Same disk integral by adaptive quadrature of -a''(s); the
    independent oracle for :func:`disk_integral_closed`."""
    _check_pole(pole)
    x = float(x)
    if not 0.0 <= x <= p.length:
        raise ValueError(f"x must lie in [0, L], got {x!r}")
    lo, hi = (0.0, x) if pole == "np" else (x, p.length)
    value, _, _ = p.integrate(MODE_NEG_D2, lo, hi, tol, budget)
    return value


def total_curvature(p, tol=1e-10, budget=None):
    """Integral of K over the whole surface; 4*pi for every valid profile
    (the closed Gauss-Bonnet value)."""
    return TWO_PI * disk_integral_quadrature(p, p.length, "np", tol, budget)


def latitude_geodesic_curvature_total(p, x):
    """Total geodesic curvature of the latitude circle at s = x, oriented
    as the boundary of the north-pole disk: 2*pi*a'(x).

    Defined on the open interior 0 < x < L; the endpoints give the limit
    values +-2*pi."""
    return TWO_PI * p.jet(x).d1


def curvature_table(p, n):
    """n uniform samples of (s, a, a', K), pole-limit K at the ends."""
    if n < 2:
        raise ProfileError(f"need at least 2 samples, got {n}")
    svals = np.linspace(0.0, p.length, int(n))
    jets = p.jet_many(svals)
    k = gauss_curvature_grid(p, svals, jets=jets)
    out = np.empty((int(n), 4))
    out[:, 0] = svals
    out[:, 1] = jets[:, 0]
    out[:, 2] = jets[:, 1]
    out[:, 3] = k
    return out


def write_curvature_csv(p, n, sink):
    """Dump :func:`curvature_table` as CSV with header "s,a,a_prime,K"."""
    table = curvature_table(p, n)
    own = isinstance(sink, (str, bytes)) or hasattr(sink, "__fspath__")
    fh = open(sink, "w", newline="") if own else sink
    try:
        fh.write("s,a,a_prime,K\n")
        for row in table:
            s, a, a_prime, k = (float(v) for v in row)
            fh.write(f"{s!r},{a!r},{a_prime!r},{k!r}\n")
    finally:
        if own:
            fh.close()
