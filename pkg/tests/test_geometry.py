"""Distance laws and samplers: quadrature oracles for the moments,
self-consistency of pdf/cdf pairs, and KS checks of the samplers."""

import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.stats import kstest

from leoris.errors import DivergentMomentError, DomainError
from leoris.geometry import (
    Constellation,
    CylinderGeometry,
    Point3D,
    ris_distance_cdf,
    ris_distance_moment,
    ris_distance_pdf,
    sample_constellation,
    sample_nearest_sat_distance,
    sample_ris_position,
    sample_ris_positions,
    sat_distance_cdf,
    sat_distance_moment,
    sat_distance_pdf,
)

CON = Constellation(satellites=1000, altitude=1.0e6)


def _moment_by_quadrature(t, eps, geom, reltol=1e-11):
    s = t * eps / 2.0
    pts = sorted({min(geom.height, geom.base_radius), max(geom.height, geom.base_radius)})
    lo = geom.inner_radius
    val, _ = quad(lambda r: r ** (-s) * ris_distance_pdf(r, geom),
                  lo, geom.max_distance, points=pts, limit=400,
                  epsabs=1e-14, epsrel=reltol)
    return val


def test_pdf_outside_support_is_zero():
    geom = CylinderGeometry(500.0, 100.0)
    assert ris_distance_pdf(geom.max_distance * 1.0001, geom) == 0.0
    assert ris_distance_pdf(1e9, geom) == 0.0


def test_pdf_flat_disk_case():
    geom = CylinderGeometry(1.0, 0.0)
    assert ris_distance_pdf(0.5, geom) == pytest.approx(1.0, rel=1e-14)


def test_pdf_negative_distance_rejected():
    with pytest.raises(DomainError):
        ris_distance_pdf(-1.0, CylinderGeometry(10.0, 5.0))


def test_pdf_matches_cdf_derivative():
    geom = CylinderGeometry(500.0, 100.0)
    for r in (30.0, 99.0, 101.0, 300.0, 470.0, 505.0):
        h = 1e-5 * r
        fd = (ris_distance_cdf(r + h, geom) - ris_distance_cdf(r - h, geom)) / (2 * h)
        assert ris_distance_pdf(r, geom) == pytest.approx(fd, rel=1e-6)


def test_pdf_integrates_to_one_randomized():
    rng = np.random.default_rng(123)
    cases = [(1.0, 0.0), (500.0, 1e-4), (10.0, 1000.0), (1000.0, 10.0)]
    while len(cases) < 100:
        R0 = 10.0 ** rng.uniform(0, 3)
        H = 0.0 if rng.random() < 0.1 else 10.0 ** rng.uniform(-1, 3)
        cases.append((R0, H))
    for R0, H in cases:
        geom = CylinderGeometry(R0, H)
        pts = sorted({min(H, R0), max(H, R0)}) if H > 0 else []
        total, _ = quad(lambda r: ris_distance_pdf(r, geom), 0.0, geom.max_distance,
                        points=pts or None, limit=300, epsabs=1e-12)
        assert total == pytest.approx(1.0, abs=1e-9), (R0, H)


def test_cdf_boundaries_and_continuity():
    geom = CylinderGeometry(500.0, 100.0)
    assert ris_distance_cdf(0.0, geom) == 0.0
    assert ris_distance_cdf(geom.max_distance, geom) == pytest.approx(1.0, rel=1e-14)
    # branch continuity at H and R0, and the closed value at r = H
    h_val = (2.0 / 3.0) * geom.height ** 2 / geom.base_radius ** 2
    assert ris_distance_cdf(geom.height, geom) == pytest.approx(h_val, rel=1e-13)
    for point in (geom.height, geom.base_radius):
        below = ris_distance_cdf(point * (1 - 1e-13), geom)
        above = ris_distance_cdf(point * (1 + 1e-13), geom)
        assert abs(above - below) < 1e-12


def test_cdf_continuity_tall_region():
    geom = CylinderGeometry(100.0, 400.0)
    for point in (100.0, 400.0):
        below = ris_distance_cdf(point * (1 - 1e-13), geom)
        above = ris_distance_cdf(point * (1 + 1e-13), geom)
        assert abs(above - below) < 1e-12
    assert ris_distance_cdf(geom.max_distance, geom) == pytest.approx(1.0, rel=1e-13)


def test_cdf_against_position_sampler():
    geom = CylinderGeometry(500.0, 100.0)
    rng = np.random.default_rng(99)
    pos = sample_ris_positions(geom, rng, 200_000)
    d = np.linalg.norm(pos, axis=1)
    emp = np.mean(d <= 450.0)
    assert ris_distance_cdf(450.0, geom) == pytest.approx(emp, abs=3e-3)


def test_moment_zero_exponent_limit():
    geom = CylinderGeometry(500.0, 100.0)
    assert ris_distance_moment(1, 0.0, geom) == pytest.approx(1.0, rel=1e-12)
    assert ris_distance_moment(1, 0.0, CylinderGeometry(3.0, 0.0)) == pytest.approx(1.0)


def test_moment_flat_disk_closed_form():
    geom = CylinderGeometry(1.0, 0.0)
    # E[R^-1] for the unit disk: quadrature of r^-1 * 2r on [0,1] equals 2
    assert ris_distance_moment(1, 2.0, geom) == pytest.approx(2.0, rel=1e-12)
    assert ris_distance_moment(1, 2.0, geom) == pytest.approx(
        _moment_by_quadrature(1, 2.0, geom), rel=1e-10)


def test_moment_3d_against_quadrature():
    geom = CylinderGeometry(500.0, 100.0)
    got = ris_distance_moment(2, 2.5, geom)
    assert got == pytest.approx(_moment_by_quadrature(2, 2.5, geom), rel=1e-8)


def test_moment_randomized_against_quadrature():
    rng = np.random.default_rng(2718)
    checked = 0
    while checked < 100:
        kind = rng.integers(0, 4)
        t = int(rng.integers(1, 3))
        eps = rng.uniform(2.0, 3.0)
        if kind == 0:
            geom = CylinderGeometry(10.0 ** rng.uniform(0.5, 3), 0.0)
            if t * eps >= 4.0:
                continue
        elif kind == 1:
            geom = CylinderGeometry(10.0 ** rng.uniform(0.5, 3), 0.0,
                                    inner_radius=0.0)
            R0 = geom.base_radius
            geom = CylinderGeometry(R0, 0.0, inner_radius=R0 * rng.uniform(0.01, 0.5))
        elif kind == 2:
            # near the removable t*eps = 4 branch
            geom = CylinderGeometry(10.0 ** rng.uniform(1, 3), 10.0 ** rng.uniform(0.5, 2.5))
            t, eps = 2, rng.uniform(1.999, 2.001)
        else:
            geom = CylinderGeometry(10.0 ** rng.uniform(1, 3), 10.0 ** rng.uniform(0.5, 3))
            if t * eps / 2.0 >= 2.95:  # keep the quadrature oracle well-posed
                continue
        got = ris_distance_moment(t, eps, geom)
        want = _moment_by_quadrature(t, eps, geom)
        assert got == pytest.approx(want, rel=1e-8), (t, eps, geom)
        checked += 1


def test_moment_exact_log_branch():
    # t*eps = 4 exactly: flat annulus has the closed log form
    geom = CylinderGeometry(100.0, 0.0, inner_radius=5.0)
    got = ris_distance_moment(2, 2.0, geom)
    want = 2.0 * math.log(100.0 / 5.0) / (100.0 ** 2 - 5.0 ** 2)
    assert got == pytest.approx(want, rel=1e-13)
    # and in 3D it must agree with quadrature
    geom3 = CylinderGeometry(200.0, 50.0)
    assert ris_distance_moment(2, 2.0, geom3) == pytest.approx(
        _moment_by_quadrature(2, 2.0, geom3), rel=1e-9)


def test_moment_divergence_errors():
    with pytest.raises(DivergentMomentError):
        ris_distance_moment(2, 2.0, CylinderGeometry(10.0, 0.0))
    with pytest.raises(DivergentMomentError):
        ris_distance_moment(2, 3.0, CylinderGeometry(10.0, 5.0))
    # annulus keeps the same moment finite
    assert ris_distance_moment(2, 3.0, CylinderGeometry(10.0, 0.0, inner_radius=1.0)) > 0


def test_moment_order_validation():
    geom = CylinderGeometry(10.0, 5.0)
    with pytest.raises(DomainError):
        ris_distance_moment(3, 2.0, geom)
    with pytest.raises(DomainError):
        ris_distance_moment(1, -1.0, geom)


def test_sat_pdf_support():
    assert sat_distance_pdf(CON.altitude * 0.999, CON) == 0.0
    assert sat_distance_pdf(CON.max_distance * 1.001, CON) == 0.0


def test_sat_pdf_total_mass():
    # integral of the density over its support has the closed value 1 - e^-M
    con = Constellation(satellites=5, altitude=1.0e6)
    val, _ = quad(lambda x: sat_distance_pdf(x, con), con.altitude, con.max_distance,
                  limit=300, epsabs=1e-12)
    assert val == pytest.approx(1.0 - math.exp(-con.satellites), rel=1e-9)
    assert sat_distance_cdf(con.max_distance, con) == pytest.approx(
        1.0 - math.exp(-con.satellites), rel=1e-12)


def test_sat_moment_against_quadrature():
    for t, eta in [(1, 2.0), (2, 2.0), (1, 2.7), (2, 2.9)]:
        want, _ = quad(lambda x: x ** (-t * eta / 2.0) * sat_distance_pdf(x, CON),
                       CON.altitude, CON.max_distance, limit=300,
                       epsabs=1e-30, epsrel=1e-12)
        assert sat_distance_moment(t, eta, CON) == pytest.approx(want, rel=1e-8), (t, eta)


def test_sat_moment_small_population():
    con = Constellation(satellites=3, altitude=5.0e5)
    for t, eta in [(1, 2.0), (2, 2.4)]:
        want, _ = quad(lambda x: x ** (-t * eta / 2.0) * sat_distance_pdf(x, con),
                       con.altitude, con.max_distance, limit=300,
                       epsabs=1e-30, epsrel=1e-12)
        assert sat_distance_moment(t, eta, con) == pytest.approx(want, rel=1e-8)


def test_sat_moment_zero_exponent_is_total_mass():
    con = Constellation(satellites=4, altitude=1.0e6)
    assert sat_distance_moment(1, 0.0, con) == pytest.approx(
        1.0 - math.exp(-con.satellites), rel=1e-10)


def test_sat_moment_against_sampler():
    rng = np.random.default_rng(5)
    d = sample_nearest_sat_distance(CON, rng, 400_000)
    got = sat_distance_moment(2, 2.0, CON)
    assert got == pytest.approx(float(np.mean(d ** -2.0)), rel=1e-3)


def test_ris_sampler_flat_region():
    geom = CylinderGeometry(50.0, 0.0)
    rng = np.random.default_rng(1)
    pos = sample_ris_positions(geom, rng, 1000)
    assert np.all(pos[:, 2] == 0.0)
    point = sample_ris_position(geom, rng)
    assert isinstance(point, Point3D)
    assert point.z == 0.0


def test_ris_sampler_radial_mean():
    geom = CylinderGeometry(60.0, 30.0)
    rng = np.random.default_rng(2)
    pos = sample_ris_positions(geom, rng, 400_000)
    radial = np.hypot(pos[:, 0], pos[:, 1])
    assert float(radial.mean()) == pytest.approx(2.0 * geom.base_radius / 3.0, rel=2e-3)


def test_ris_sampler_ks_against_cdf():
    geom = CylinderGeometry(500.0, 100.0)
    rng = np.random.default_rng(3)
    pos = sample_ris_positions(geom, rng, 100_000)
    d = np.linalg.norm(pos, axis=1)
    stat = kstest(d, lambda x: ris_distance_cdf(x, geom)).statistic
    assert stat < 0.01


def test_sat_sampler_single_point_law():
    con = Constellation(satellites=1, altitude=1.0e6)
    rng = np.random.default_rng(4)
    d = sample_nearest_sat_distance(con, rng, 200_000)
    assert d.min() >= con.altitude
    assert d.max() <= con.max_distance
    # squared distance uniform on the slant-range interval
    u = (d ** 2 - con.altitude ** 2) / (4.0 * con.earth_radius * con.shell_radius)
    assert kstest(u, "uniform").pvalue > 0.01


def test_sat_sampler_ks_against_cdf():
    rng = np.random.default_rng(6)
    d = sample_nearest_sat_distance(CON, rng, 100_000)
    assert np.all(d >= CON.altitude)
    res = kstest(d, lambda x: sat_distance_cdf(x, CON))
    assert res.pvalue > 0.01


def test_sat_pdf_matches_sampler_histogram():
    rng = np.random.default_rng(7)
    d = sample_nearest_sat_distance(CON, rng, 300_000)
    x, half = 1.1e6, 1.0e4
    emp = float(np.mean(np.abs(d - x) <= half)) / (2.0 * half)
    assert sat_distance_pdf(x, CON) == pytest.approx(emp, rel=0.03)


def test_sat_sampler_matches_materialized_constellation():
    con = Constellation(satellites=20, altitude=1.0e6)
    rng = np.random.default_rng(8)
    direct = sample_nearest_sat_distance(con, rng, 20_000)
    mins = np.array([
        np.linalg.norm(sample_constellation(con, rng), axis=1).min()
        for _ in range(20_000)
    ])
    # same law: two-sample KS
    from scipy.stats import ks_2samp
    assert ks_2samp(direct, mins).pvalue > 0.01


def test_constellation_properties():
    con = Constellation(satellites=1000, altitude=1.0e6)
    shell = con.earth_radius + con.altitude
    assert con.intensity == pytest.approx(1000.0 / (4.0 * math.pi * shell ** 2))
    with pytest.raises(DomainError):
        Constellation(satellites=0, altitude=1.0e6)


def test_geometry_validation():
    with pytest.raises(DomainError):
        CylinderGeometry(-1.0, 10.0)
    with pytest.raises(DomainError):
        CylinderGeometry(10.0, 5.0, inner_radius=1.0)  # annulus needs H == 0
    with pytest.raises(DomainError):
        CylinderGeometry(10.0, 0.0, inner_radius=20.0)
