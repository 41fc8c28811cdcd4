"""Distance and projection utilities against closed forms and second formulas."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from poitree import GeoPoint, haversine_m, pairwise_matrix, project_equirectangular
from poitree.geo import haversine_pairwise_m, unproject_equirectangular

from _oracles import law_of_cosines_m
from conftest import offset_point

coords = st.tuples(
    st.floats(min_value=-85.0, max_value=85.0),
    st.floats(min_value=-180.0, max_value=180.0),
)


class TestHaversine:
    def test_identity(self):
        p = GeoPoint(47.3, 8.5)
        assert haversine_m(p, p) == 0.0

    def test_one_degree_along_equator(self):
        expected = math.pi / 180.0 * 6_371_000.0
        assert haversine_m((0.0, 0.0), (0.0, 1.0)) == pytest.approx(expected, abs=0.01)
        assert haversine_m((0.0, 0.0), (0.0, 1.0)) == pytest.approx(111_194.93, abs=0.01)

    def test_matches_law_of_cosines(self):
        a, b = (47.69, 9.19), (47.69, 9.20)
        expected = law_of_cosines_m(*a, *b)
        assert haversine_m(a, b) == pytest.approx(expected, rel=1e-6)

    @given(coords, coords)
    def test_symmetry_and_nonnegativity(self, a, b):
        d_ab = haversine_m(a, b)
        assert d_ab == haversine_m(b, a)
        assert d_ab >= 0.0
        assert haversine_m(a, a) == 0.0

    @given(
        st.integers(min_value=0, max_value=10_000),
        st.floats(min_value=30.0, max_value=60.0),
        st.floats(min_value=-10.0, max_value=40.0),
    )
    def test_triangle_inequality_within_disc(self, seed, lat0, lon0):
        rng = np.random.default_rng(seed)
        pts = []
        for _ in range(3):
            east, north = rng.uniform(-25_000, 25_000, size=2)
            pts.append(
                (
                    lat0 + north / 111_194.93,
                    lon0 + east / (111_194.93 * math.cos(math.radians(lat0))),
                )
            )
        a, b, c = pts
        assert haversine_m(a, c) <= haversine_m(a, b) + haversine_m(b, c) + 1e-6

    def test_vectorized_matches_scalar(self):
        rng = np.random.default_rng(7)
        lats = 46.0 + rng.uniform(0, 0.5, size=12)
        lons = 6.0 + rng.uniform(0, 0.5, size=12)
        full = haversine_pairwise_m(lats, lons)
        for i in range(12):
            for j in range(12):
                assert full[i, j] == pytest.approx(
                    haversine_m((lats[i], lons[i]), (lats[j], lons[j])), abs=1e-9
                )


class TestProjection:
    def test_single_point_maps_to_origin(self):
        planar, origin = project_equirectangular([GeoPoint(45.0, 7.0)])
        assert planar.shape == (1, 2)
        assert planar[0, 0] == pytest.approx(0.0, abs=1e-9)
        assert planar[0, 1] == pytest.approx(0.0, abs=1e-9)
        assert origin == GeoPoint(45.0, 7.0)

    def test_same_meridian_pair_close_to_haversine(self):
        a, b = GeoPoint(46.0, 6.9), GeoPoint(46.01, 6.9)
        planar, _ = project_equirectangular([a, b])
        planar_d = float(np.hypot(*(planar[1] - planar[0])))
        assert planar_d == pytest.approx(haversine_m(a, b), rel=1e-3)

    def test_two_building_gap_preserved(self):
        # two 3x3 grids of points whose nearest rims are 45 m apart
        left = [offset_point(dx, dy) for dx in (-20.0, -10.0, 0.0) for dy in (-10.0, 0.0, 10.0)]
        right = [offset_point(45.0 + dx, dy) for dx in (0.0, 10.0, 20.0) for dy in (-10.0, 0.0, 10.0)]
        pts = left + right
        planar, _ = project_equirectangular(pts)
        gaps = [
            float(np.hypot(*(planar[9 + j] - planar[i])))
            for i in range(9)
            for j in range(9)
        ]
        assert min(gaps) == pytest.approx(45.0, abs=0.5)

    @given(st.integers(min_value=0, max_value=10_000))
    def test_planar_within_one_percent_of_haversine(self, seed):
        rng = np.random.default_rng(seed)
        lat0 = float(rng.uniform(-60, 60))
        lon0 = float(rng.uniform(-170, 170))
        pts = []
        for _ in range(6):
            east, north = rng.uniform(-25_000, 25_000, size=2)
            pts.append(
                GeoPoint(
                    lat0 + north / 111_194.93,
                    lon0 + east / (111_194.93 * math.cos(math.radians(lat0))),
                )
            )
        planar, _ = project_equirectangular(pts)
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                true_d = haversine_m(pts[i], pts[j])
                if true_d < 1.0:
                    continue
                planar_d = float(np.hypot(*(planar[j] - planar[i])))
                assert abs(planar_d - true_d) / true_d < 0.01

    def test_unproject_round_trip(self):
        pts = [GeoPoint(46.5, 6.6), GeoPoint(46.51, 6.62), GeoPoint(46.49, 6.58)]
        planar, origin = project_equirectangular(pts)
        back = unproject_equirectangular(planar, origin)
        for orig, rec in zip(pts, back):
            assert haversine_m(orig, rec) < 0.01


class TestPairwiseMatrix:
    def test_three_four_five_triangle(self):
        dm = pairwise_matrix(np.array([[0.0, 0.0], [3.0, 4.0]]))
        assert dm.n == 2
        assert dm.condensed.shape == (1,)
        assert dm.condensed[0] == pytest.approx(5.0)
        assert dm.get(0, 1) == pytest.approx(5.0)
        assert dm.get(1, 0) == pytest.approx(5.0)
        assert dm.get(0, 0) == 0.0

    @given(st.integers(min_value=0, max_value=10_000), st.integers(min_value=2, max_value=12))
    def test_symmetry_and_nonnegativity(self, seed, n):
        rng = np.random.default_rng(seed)
        pts = rng.uniform(-100, 100, size=(n, 2))
        dm = pairwise_matrix(pts)
        full = dm.full()
        assert np.all(full >= 0)
        assert np.allclose(full, full.T)
        assert np.allclose(np.diag(full), 0.0)

    def test_fifty_random_points_elementwise(self):
        rng = np.random.default_rng(123)
        pts = rng.uniform(-500, 500, size=(50, 2))
        full = pairwise_matrix(pts).full()
        for i in range(50):
            for j in range(50):
                direct = math.hypot(pts[i, 0] - pts[j, 0], pts[i, 1] - pts[j, 1])
                assert full[i, j] == pytest.approx(direct, abs=1e-9)
