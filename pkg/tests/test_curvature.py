import io
import math

import numpy as np
import pytest
from scipy.integrate import quad

import revsurf as rs
from revsurf.curvature import POLE_BAND_FRACTION

TWO_PI = 2.0 * math.pi

# analytic extremum of a' for bump:0.5, at cos s = sqrt(5)/3
BUMP_SUP_APRIME = 5.0 * math.sqrt(5.0) / 9.0
BUMP_SUP_S = math.acos(math.sqrt(5.0) / 3.0)


def test_sphere_curvature_is_one_everywhere(sphere):
    svals = np.linspace(0.0, math.pi, 257)
    k = rs.gauss_curvature_grid(sphere, svals)
    assert np.max(np.abs(k - 1.0)) < 1e-9


def test_sphere_pole_limit_branch(sphere):
    assert rs.gauss_curvature(sphere, 0.0) == pytest.approx(1.0, abs=1e-12)
    assert rs.gauss_curvature(sphere, math.pi) == pytest.approx(1.0, abs=1e-12)


def test_bump_pole_curvature(bump05):
    # series of sin s + 0.5 sin^3 s gives a'''(0) = 2, so K(np) = -2
    assert rs.gauss_curvature(bump05, 0.0) == pytest.approx(-2.0, abs=1e-9)
    assert rs.gauss_curvature(bump05, bump05.length) == pytest.approx(-2.0, abs=1e-9)


def test_dumbbell_pole_curvature(dumbbell025):
    # series of sin s - b sin^3 s gives a'''(0) = -(1 + 6b)
    assert rs.gauss_curvature(dumbbell025, 0.0) == pytest.approx(2.5, abs=1e-9)


def test_curvature_continuity_across_guard_band():
    eps = 1e-9
    for name in ["sphere", "bump:0.5", "dumbbell:0.25"]:
        p = rs.preset(name)
        delta = POLE_BAND_FRACTION * p.length
        for edge in (delta, p.length - delta):
            jump = abs(rs.gauss_curvature(p, edge - eps) - rs.gauss_curvature(p, edge + eps))
            assert jump <= 1e-4, (name, edge, jump)


def test_gauss_curvature_scalar_matches_grid(bump05):
    svals = np.linspace(0.0, bump05.length, 53)
    grid = rs.gauss_curvature_grid(bump05, svals)
    scalar = [rs.gauss_curvature(bump05, s) for s in svals]
    assert np.allclose(grid, scalar, rtol=1e-13, atol=1e-13)


# --- disk integrals ------------------------------------------------------------

def test_disk_closed_sphere_values(sphere):
    assert rs.disk_integral_closed(sphere, math.pi / 2, "np") == pytest.approx(1.0, abs=1e-15)
    assert rs.disk_integral_closed(sphere, 0.0, "np") == 0.0
    assert rs.disk_integral_closed(sphere, math.pi, "np") == pytest.approx(2.0, abs=1e-15)


def test_disk_closed_split_identity(corpus_presets_plus_50):
    # (1 - a') + (1 + a') = 2 up to one rounding per term
    for p in corpus_presets_plus_50[:20]:
        for x in np.linspace(0.0, p.length, 9):
            total = (rs.disk_integral_closed(p, x, "np")
                     + rs.disk_integral_closed(p, x, "sp"))
            assert abs(total - 2.0) <= 1e-15


def test_disk_quadrature_split_sums_to_two(corpus_presets_plus_50):
    for p in corpus_presets_plus_50[:8]:
        for x in (0.3 * p.length, 0.71 * p.length):
            total = (rs.disk_integral_quadrature(p, x, "np")
                     + rs.disk_integral_quadrature(p, x, "sp"))
            assert total == pytest.approx(2.0, abs=1e-7)


def test_disk_quadrature_matches_closed_form(bump05):
    got = rs.disk_integral_quadrature(bump05, 1.0, "np")
    want = rs.disk_integral_closed(bump05, 1.0, "np")
    assert got == pytest.approx(want, abs=1e-8)


def test_disk_quadrature_sp_side(bump05):
    got = rs.disk_integral_quadrature(bump05, 1.0, "sp")
    want = rs.disk_integral_closed(bump05, 1.0, "sp")
    assert got == pytest.approx(want, abs=1e-8)


def test_disk_quadrature_against_scipy_oracle(bump05):
    # independent route: scipy quad of -a'' with analytic
    # a'' = -sin + 0.5*(sin^3)'' = -sin + 0.5*(6 sin cos^2 - 3 sin^3)
    a2 = lambda s: (-math.sin(s)
                    + 0.5 * (6 * math.sin(s) * math.cos(s) ** 2 - 3 * math.sin(s) ** 3))
    want, _ = quad(lambda s: -a2(s), 0.0, 1.3)
    got = rs.disk_integral_quadrature(bump05, 1.3, "np")
    assert got == pytest.approx(want, abs=1e-9)


def test_eq4_identity_on_grid(corpus_presets_plus_50):
    for p in corpus_presets_plus_50[:10]:
        for x in np.linspace(0.0, p.length, 64):
            quad_val = rs.disk_integral_quadrature(p, float(x), "np")
            closed = 1.0 - p.jet(float(x)).d1
            assert abs(quad_val - closed) <= 1e-7


def test_gauss_bonnet_endpoint(corpus_presets_plus_50):
    for p in corpus_presets_plus_50[:10]:
        assert rs.disk_integral_quadrature(p, p.length, "np") == pytest.approx(2.0, abs=1e-8)


def test_total_curvature_presets():
    for name in ["sphere", "bump:0.5", "dumbbell:0.25"]:
        assert rs.total_curvature(rs.preset(name)) == pytest.approx(4.0 * math.pi, abs=1e-8)


def test_total_curvature_sampled_profile():
    knots = np.linspace(0.0, math.pi, 101)
    values = np.sin(knots)
    values[0] = values[-1] = 0.0
    p = rs.Profile.from_samples(knots, values)
    # exact for the spline itself: clamped slopes make the FTC value 2
    assert rs.total_curvature(p) == pytest.approx(4.0 * math.pi, abs=1e-7)


def test_disk_quadrature_validates_range(sphere):
    with pytest.raises(ValueError):
        rs.disk_integral_quadrature(sphere, -0.1, "np")
    with pytest.raises(ValueError):
        rs.disk_integral_quadrature(sphere, 4.0, "np")
    with pytest.raises(ValueError):
        rs.disk_integral_quadrature(sphere, 1.0, "north")


def test_bump_worst_disk_value(bump05):
    got = rs.disk_integral_closed(bump05, BUMP_SUP_S, "np")
    assert got == pytest.approx(1.0 - BUMP_SUP_APRIME, abs=1e-12)


# --- latitude circles -------------------------------------------------------------

def test_latitude_sphere(sphere):
    assert rs.latitude_geodesic_curvature_total(sphere, math.pi / 2) == pytest.approx(0.0, abs=1e-15)
    assert rs.latitude_geodesic_curvature_total(sphere, 1e-6) == pytest.approx(TWO_PI, rel=1e-9)


def test_latitude_bump_peak(bump05):
    got = rs.latitude_geodesic_curvature_total(bump05, BUMP_SUP_S)
    assert got == pytest.approx(TWO_PI * BUMP_SUP_APRIME, rel=1e-12)
    assert got > TWO_PI


def test_eq5_consistency(corpus_presets_plus_50):
    # 2*pi*(disk integral) + (latitude total) = 2*pi
    for p in corpus_presets_plus_50[:20]:
        for x in np.linspace(0.01, p.length - 0.01, 7):
            total = (TWO_PI * rs.disk_integral_closed(p, x, "np")
                     + rs.latitude_geodesic_curvature_total(p, x))
            assert total == pytest.approx(TWO_PI, abs=1e-12)


# --- homothety covariance -----------------------------------------------------------

def test_homothety_covariance(bump05):
    lam = 2.0
    q = bump05.rescale_to_area(lam ** 2 * bump05.area())
    svals = np.linspace(0.0, bump05.length, 41)
    kp = rs.gauss_curvature_grid(bump05, svals)
    kq = rs.gauss_curvature_grid(q, lam * svals)
    assert np.max(np.abs(kq - kp / lam ** 2)) < 1e-8
    for x in (0.5, 1.2):
        assert rs.disk_integral_closed(q, lam * x, "np") == pytest.approx(
            rs.disk_integral_closed(bump05, x, "np"), abs=1e-12)


# --- CSV dump ------------------------------------------------------------------------

def test_curvature_csv_sphere(sphere):
    buf = io.StringIO()
    rs.write_curvature_csv(sphere, 5, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "s,a,a_prime,K"
    assert len(lines) == 6
    rows = [list(map(float, ln.split(","))) for ln in lines[1:]]
    for row in rows:
        assert row[3] == pytest.approx(1.0, abs=1e-9)
    assert rows[0][0] == 0.0
    assert rows[-1][0] == pytest.approx(math.pi)


def test_curvature_csv_bump_pole_row(bump05):
    buf = io.StringIO()
    rs.write_curvature_csv(bump05, 7, buf)
    first = buf.getvalue().splitlines()[1].split(",")
    assert float(first[0]) == 0.0
    assert float(first[3]) == pytest.approx(-2.0, abs=1e-6)


def test_curvature_table_needs_two_samples(sphere):
    with pytest.raises(rs.ProfileError):
        rs.curvature_table(sphere, 1)
