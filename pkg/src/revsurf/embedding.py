"""Explicit isometric embedding of an embeddable profile metric.

The embedding of the surface of revolution into 3-space is

    (s, theta) -> (a(s) cos theta, a(s) sin theta, psi3(s)),
    psi3(s) = integral from c to s of sqrt(1 - a'(t)^2) dt,

for an arbitrary basepoint c (choices differ by a vertical shift; the
default c = 0 puts the north pole at height 0). The map is isometric
exactly when the radicand 1 - a'^2 stays nonnegative; rounding-level
negativity (> -1e-9) is clamped to zero because every valid profile
touches |a'| = 1 at the poles, while anything below the clamp tolerance
raises NotEmbeddableError with a witness.

psi3 is served from a cached cumulative table on a refined grid (extra
geometric subdivision into the endpoint cells, where the integrand has a
square-root-type kink) interpolated by monotone cubic Hermite pieces
whose slopes are the exact integrand values at the nodes.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._ops import MODE_PSI3
from .errors import NotEmbeddableError
from .mesh import Mesh, check_mesh

__all__ = [
    "PSI3_CLAMP_TOL", "EmbeddingMap", "psi3", "embed_point",
    "generate_mesh", "verify_induced_metric", "InducedMetricReport",
]

#: radicand values in (-PSI3_CLAMP_TOL, 0) count as rounding and clamp to 0
PSI3_CLAMP_TOL = 1e-9

#: verification guard band around each pole, as a fraction of L
VERIFY_POLE_BAND_FRACTION = 1e-3
#: verification guard: drop samples with 1 - a'^2 below this (psi3 is C^1
#: but not C^2 where |a'| = 1, so central differences degrade there)
VERIFY_RADICAND_GUARD = 1e-3

_TABLE_N = 1025
_TABLE_SEGMENT_TOL = 1e-13
_PRESCAN_N = 4097
_ENDPOINT_SPLITS = 8


class _HeightTable:
    """Cumulative integral of sqrt(max(0, 1 - a'^2)) from 0, tabulated on
    a refined grid and queried through monotone cubic Hermite pieces."""

    def __init__(self, nodes, values, slopes):
        self.nodes = nodes
        self.values = values
        self.slopes = _limit_slopes(nodes, values, slopes)

    def eval_many(self, svals):
        s = np.clip(np.asarray(svals, dtype=np.float64), self.nodes[0], self.nodes[-1])
        idx = np.clip(np.searchsorted(self.nodes, s, side="right") - 1, 0, len(self.nodes) - 2)
        h = self.nodes[idx + 1] - self.nodes[idx]
        u = (s - self.nodes[idx]) / h
        u2 = u * u
        u3 = u2 * u
        h00 = 2.0 * u3 - 3.0 * u2 + 1.0
        h10 = u3 - 2.0 * u2 + u
        h01 = -2.0 * u3 + 3.0 * u2
        h11 = u3 - u2
        return (h00 * self.values[idx] + h10 * h * self.slopes[idx]
                + h01 * self.values[idx + 1] + h11 * h * self.slopes[idx + 1])

    def eval(self, s):
        return float(self.eval_many(np.asarray([s]))[0])


def _limit_slopes(nodes, values, slopes):
    # Fritsch-Carlson projection keeps each Hermite piece monotone; with
    # exact slopes on a fine grid it only fires in near-flat segments.
    m = slopes.copy()
    h = np.diff(nodes)
    delta = np.diff(values) / h
    for i in range(len(delta)):
        if delta[i] == 0.0:
            m[i] = 0.0
            m[i + 1] = 0.0
            continue
        alpha = m[i] / delta[i]
        beta = m[i + 1] / delta[i]
        norm2 = alpha * alpha + beta * beta
        if norm2 > 9.0:
            tau = 3.0 / math.sqrt(norm2)
            m[i] = tau * alpha * delta[i]
            m[i + 1] = tau * beta * delta[i]
    return m


def _table_nodes(L):
    base = np.linspace(0.0, L, _TABLE_N)
    h = base[1] - base[0]
    splits = h * 0.5 ** np.arange(1, _ENDPOINT_SPLITS + 1)
    extra = np.concatenate([splits, L - splits])
    return np.unique(np.concatenate([base, extra]))


def _radicand_prescan(p):
    """Locate genuinely negative radicand regions before building the
    table, so the error carries a witness interval."""
    svals = np.linspace(0.0, p.length, _PRESCAN_N)
    rad = 1.0 - p.jet_many(svals)[:, 1] ** 2
    bad = rad < -PSI3_CLAMP_TOL
    if np.any(bad):
        worst = int(np.argmin(rad))
        first = worst
        while first > 0 and bad[first - 1]:
            first -= 1
        last = worst
        while last < len(bad) - 1 and bad[last + 1]:
            last += 1
        raise NotEmbeddableError(
            witness_s=float(svals[worst]),
            witness_value=float(rad[worst]),
            interval=(float(svals[first]), float(svals[last])),
        )


def _build_height_table(p):
    _radicand_prescan(p)
    nodes = _table_nodes(p.length)
    values = np.empty(len(nodes))
    values[0] = 0.0
    acc = 0.0
    for i in range(len(nodes) - 1):
        seg, min_rad, min_rad_s = p.integrate(
            MODE_PSI3, float(nodes[i]), float(nodes[i + 1]), _TABLE_SEGMENT_TOL)
        if min_rad < -PSI3_CLAMP_TOL:
            raise NotEmbeddableError(witness_s=min_rad_s, witness_value=min_rad)
        acc += seg
        values[i + 1] = acc
    d1 = p.jet_many(nodes)[:, 1]
    slopes = np.sqrt(np.clip(1.0 - d1 * d1, 0.0, None))
    return _HeightTable(nodes, values, slopes)


def _height_table(p):
    table = p._height_tables.get("default")
    if table is None:
        table = _build_height_table(p)
        p._height_tables["default"] = table
    return table


class EmbeddingMap:
    """The embedding of a fixed profile with a fixed basepoint c.

    Construction fills (or reuses) the profile's cumulative height table;
    afterwards the map is immutable and every query is pure, so instances
    are safe to share across threads.
    """

    def __init__(self, profile, c=0.0):
        if not 0.0 <= c <= profile.length:
            raise ValueError(f"basepoint c must lie in [0, L], got {c!r}")
        self.profile = profile
        self.c = float(c)
        self._table = _height_table(profile)
        self._offset = self._table.eval(self.c)

    def psi3(self, s):
        """Height coordinate; nondecreasing in s with psi3(c) = 0."""
        return self._table.eval(s) - self._offset

    def psi3_many(self, svals):
        return self._table.eval_many(svals) - self._offset

    def point(self, s, theta):
        j = self.profile.jet(s)
        return np.array([j.v * math.cos(theta), j.v * math.sin(theta), self.psi3(s)])

    def total_height(self):
        """psi3(L) - psi3(0): the integral of sqrt(1 - a'^2) over [0, L],
        independent of the basepoint."""
        return self._table.eval(self.profile.length) - self._table.eval(0.0)


def psi3(p, s, c=0.0):
    """Height coordinate of the embedding at arclength ``s`` with
    basepoint ``c``. Raises NotEmbeddableError when 1 - a'^2 drops below
    the clamp tolerance anywhere (complex-height case)."""
    return EmbeddingMap(p, c).psi3(s)


def embed_point(p, s, theta, c=0.0):
    """The embedded position (a cos theta, a sin theta, psi3(s))."""
    return EmbeddingMap(p, c).point(s, theta)


def generate_mesh(p, n_s, n_theta, c=0.0):
    """Triangulate the embedded surface: two pole vertices, n_s - 1
    uniform latitude rings of n_theta vertices, pole fans plus split quad
    strips, oriented outward. The result is checked watertight."""
    if n_s < 3 or n_theta < 3:
        raise ValueError("n_s and n_theta must both be at least 3")
    n_s = int(n_s)
    n_theta = int(n_theta)
    emap = EmbeddingMap(p, c)
    L = p.length

    s_rings = L * np.arange(1, n_s) / n_s
    theta = 2.0 * math.pi * np.arange(n_theta) / n_theta
    radii = p.jet_many(s_rings)[:, 0]
    heights = emap.psi3_many(s_rings)

    n_rings = n_s - 1
    vertices = np.empty((n_rings * n_theta + 2, 3))
    vertices[0] = (0.0, 0.0, emap.psi3(0.0))
    cos_t = np.cos(theta)
    sin_t = np.sin(theta)
    for i in range(n_rings):
        block = vertices[1 + i * n_theta: 1 + (i + 1) * n_theta]
        block[:, 0] = radii[i] * cos_t
        block[:, 1] = radii[i] * sin_t
        block[:, 2] = heights[i]
    south = n_rings * n_theta + 1
    vertices[south] = (0.0, 0.0, emap.psi3(L))

    def ring(i, j):
        return 1 + i * n_theta + (j % n_theta)

    triangles = []
    for j in range(n_theta):
        triangles.append((0, ring(0, j + 1), ring(0, j)))
    for i in range(n_rings - 1):
        for j in range(n_theta):
            a = ring(i, j)
            b = ring(i, j + 1)
            cc = ring(i + 1, j + 1)
            d = ring(i + 1, j)
            triangles.append((a, b, cc))
            triangles.append((a, cc, d))
    for j in range(n_theta):
        triangles.append((south, ring(n_rings - 1, j), ring(n_rings - 1, j + 1)))

    mesh = Mesh(vertices=vertices,
                triangles=np.asarray(triangles, dtype=np.int32),
                n_s=n_s, n_theta=n_theta)
    check_mesh(mesh)
    return mesh


@dataclass(frozen=True)
class InducedMetricReport:
    """Max deviations of the numerically induced first fundamental form
    from the target metric (E, F, G) = (1, 0, a^2)."""

    max_e_error: float     # max |E - 1|
    max_f_error: float     # max |F|
    max_g_error: float     # max |G - a^2|
    h: float
    pole_band: float
    radicand_guard: float
    n_samples: int
    n_excluded: int

    @property
    def max_error(self):
        return max(self.max_e_error, self.max_f_error, self.max_g_error)


def verify_induced_metric(p, c=0.0, grid=(32, 32), h=1e-5,
                          pole_band=None, radicand_guard=VERIFY_RADICAND_GUARD):
    """Check isometry by central finite differences of the embedding.

    E, F, G are formed from difference quotients in s and theta on a
    uniform grid and compared against 1, 0, a^2. Two guard bands are
    excluded and documented in the report: ``pole_band`` (default
    1e-3 * L) from each pole, and samples where 1 - a'^2 <
    ``radicand_guard``, since the height coordinate is not C^2 where
    |a'| = 1 and difference quotients degrade there.
    """
    n_s, n_theta = grid
    L = p.length
    if pole_band is None:
        pole_band = VERIFY_POLE_BAND_FRACTION * L
    emap = EmbeddingMap(p, c)

    s_all = np.linspace(0.0, L, int(n_s))
    d1_all = p.jet_many(s_all)[:, 1]
    keep = ((s_all > pole_band) & (s_all < L - pole_band)
            & (1.0 - d1_all ** 2 >= radicand_guard)
            & (s_all - h > 0.0) & (s_all + h < L))
    svals = s_all[keep]
    theta = np.linspace(0.0, 2.0 * math.pi, int(n_theta), endpoint=False)
    n_excluded = int(n_s) - len(svals)
    if len(svals) == 0:
        return InducedMetricReport(0.0, 0.0, 0.0, h, pole_band, radicand_guard,
                                   0, n_excluded)

    a_mid = p.jet_many(svals)[:, 0]
    a_plus = p.jet_many(svals + h)[:, 0]
    a_minus = p.jet_many(svals - h)[:, 0]
    z_plus = emap.psi3_many(svals + h)
    z_minus = emap.psi3_many(svals - h)

    cos_t = np.cos(theta)[None, :]
    sin_t = np.sin(theta)[None, :]
    ap = a_plus[:, None]
    am = a_minus[:, None]

    # d/ds by central differences of the three embedding components
    xs = (ap * cos_t - am * cos_t) / (2.0 * h)
    ys = (ap * sin_t - am * sin_t) / (2.0 * h)
    zs = ((z_plus - z_minus) / (2.0 * h))[:, None] * np.ones_like(cos_t)

    # d/dtheta likewise; psi3 does not depend on theta
    amid = a_mid[:, None]
    xt = amid * (np.cos(theta[None, :] + h) - np.cos(theta[None, :] - h)) / (2.0 * h)
    yt = amid * (np.sin(theta[None, :] + h) - np.sin(theta[None, :] - h)) / (2.0 * h)

    e_form = xs * xs + ys * ys + zs * zs
    f_form = xs * xt + ys * yt
    g_form = xt * xt + yt * yt

    return InducedMetricReport(
        max_e_error=float(np.max(np.abs(e_form - 1.0))),
        max_f_error=float(np.max(np.abs(f_form))),
        max_g_error=float(np.max(np.abs(g_form - amid ** 2))),
        h=float(h),
        pole_band=float(pole_band),
        radicand_guard=float(radicand_guard),
        n_samples=len(svals) * int(n_theta),
        n_excluded=n_excluded,
    )
