"""Density clustering, internal indices, and the optimized-cut baselines."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from poitree import (
    BaselineParams,
    GeoPoint,
    cut,
    db_index,
    dbscan,
    detect_staypoints,
    linkage_complete,
    optics_analysis,
    optics_clusters,
    optimize_linkage,
    pairwise_matrix,
    project_equirectangular,
    silhouette,
    sp_dbscan,
    sp_linkage,
    sp_optics,
    unproject_equirectangular,
)

from _oracles import brute_dbscan, dbscan_from_optics, textbook_optics
from conftest import BASE_EPOCH, SECONDS_PER_DAY, make_processed, offset_point


class TestBaselineParams:
    @pytest.mark.parametrize(
        "count,expected",
        [(1, 2), (9, 2), (10, 2), (99, 2), (100, 2), (316, 2), (317, 3), (1000, 3), (5000, 4), (10000, 4)],
    )
    def test_min_pts_rounds_log10_half_up_with_floor_two(self, count, expected):
        assert BaselineParams.from_count(count).min_pts == expected

    def test_cluster_cap_is_half_the_count(self):
        assert BaselineParams.from_count(10).cluster_cap == 5
        assert BaselineParams.from_count(7).cluster_cap == 3

    def test_zero_count(self):
        params = BaselineParams.from_count(0)
        assert params.min_pts == 2
        assert params.cluster_cap == 0


def _points(offsets):
    return [offset_point(e, n) for e, n in offsets]


class TestDbscan:
    def test_triple_within_eps_forms_one_cluster(self):
        pts = _points([(0, 0), (30, 0), (15, 25)])
        res = dbscan(pts, eps_m=50.0, min_pts=3)
        assert res.n_clusters == 1
        assert res.labels.tolist() == [0, 0, 0]

    def test_isolated_point_is_noise(self):
        pts = _points([(0, 0), (30, 0), (500, 0)])
        res = dbscan(pts, eps_m=50.0, min_pts=2)
        assert res.labels.tolist() == [0, 0, -1]
        assert res.n_clusters == 1

    def test_chain_links_points_beyond_eps_of_each_other(self):
        # A-C are 80 m apart (over eps) but both within eps of B.
        pts = _points([(0, 0), (40, 0), (80, 0)])
        res = dbscan(pts, eps_m=50.0, min_pts=2)
        assert res.labels.tolist() == [0, 0, 0]

    def test_border_point_joins_first_grown_cluster(self):
        # Two five-point columns 40 m apart; the border point midway is within
        # eps of exactly one point of each column, so it is not core itself
        # but is reachable from both clusters.
        column = [(0, 0), (0, 3), (0, 6), (0, 9), (0, 12)]
        left = _points(column)
        right = _points([(40, y) for _, y in column])
        border = [offset_point(20, 0)]

        res = dbscan(left + right + border, eps_m=20.1, min_pts=5)
        assert res.n_clusters == 2
        assert res.labels[10] == res.labels[0]  # joined the first-grown cluster

        flipped = dbscan(right + left + border, eps_m=20.1, min_pts=5)
        assert flipped.n_clusters == 2
        assert flipped.labels[10] == flipped.labels[0]

    def test_matches_brute_force_oracle(self, rng_pool):
        for seed in range(10):
            rng = rng_pool(400 + seed)
            n = int(rng.integers(20, 81))
            pts = [offset_point(*rng.uniform(-300, 300, 2)) for _ in range(n)]
            eps = float(rng.choice([40.0, 60.0]))
            min_pts = int(rng.integers(2, 5))
            res = dbscan(pts, eps_m=eps, min_pts=min_pts)
            latlon = np.array(pts)
            expected = brute_dbscan(latlon, eps, min_pts)
            assert res.labels.tolist() == expected.tolist(), f"seed {seed}"

    def test_empty_input(self):
        res = dbscan([], eps_m=50.0, min_pts=2)
        assert res.n_clusters == 0
        assert len(res.labels) == 0

    def test_parameter_validation(self):
        pts = _points([(0, 0)])
        with pytest.raises(ValueError):
            dbscan(pts, eps_m=0.0, min_pts=2)
        with pytest.raises(ValueError):
            dbscan(pts, eps_m=50.0, min_pts=0)


def _rigid_grid(east0: float) -> list[GeoPoint]:
    return [offset_point(east0 + 3.0 * i, 3.0 * j) for i in range(3) for j in range(4)]


class TestOptics:
    def test_two_rigid_blobs_split_exactly(self):
        pts = _rigid_grid(0.0) + _rigid_grid(400.0)
        res = optics_clusters(pts, min_pts=3)
        assert res.n_clusters == 2
        assert res.labels.tolist() == [0] * 12 + [1] * 12

    @pytest.mark.filterwarnings("ignore:divide by zero")
    def test_identical_points_form_one_cluster(self):
        pts = [GeoPoint(46.52, 6.63)] * 12
        res = optics_clusters(pts, min_pts=3)
        assert res.n_clusters == 1
        assert res.labels.tolist() == [0] * 12

    def test_fewer_points_than_min_pts_all_noise(self):
        pts = _points([(0, 0), (10, 0), (20, 0)])
        res = optics_analysis(pts, min_pts=5)
        assert res.clusters.n_clusters == 0
        assert res.clusters.labels.tolist() == [-1, -1, -1]
        assert res.ordering.tolist() == [0, 1, 2]
        assert np.all(np.isinf(res.reachability))

    def test_min_pts_validation(self):
        with pytest.raises(ValueError):
            optics_analysis(_points([(0, 0), (10, 0)]), min_pts=1)

    def test_exact_ordering_on_doubling_line(self):
        # Gaps 1, 2, 4, 8, 16 m: every reachability is distinct, so the
        # ordering is forced and directly checkable by hand.
        pts = _points([(0, 0), (1, 0), (3, 0), (7, 0), (15, 0), (31, 0)])
        res = optics_analysis(pts, min_pts=2)
        assert res.ordering.tolist() == [0, 1, 2, 3, 4, 5]
        finite = res.reachability[res.ordering[1:]]
        assert np.allclose(finite, [1.0, 2.0, 4.0, 8.0, 16.0], atol=1e-3)
        assert np.isinf(res.reachability[res.ordering[0]])

    def test_matches_textbook_oracle(self, rng_pool):
        for seed in range(6):
            rng = rng_pool(500 + seed)
            n = int(rng.integers(10, 31))
            min_pts = int(rng.integers(3, 6))
            planar = rng.uniform(-300, 300, (n, 2))
            latlon = unproject_equirectangular(planar, GeoPoint(46.52, 6.63))
            pts = [GeoPoint(a, b) for a, b in latlon]
            res = optics_analysis(pts, min_pts=min_pts)
            ordering, reach, _core = textbook_optics(planar, min_pts)

            assert np.allclose(res.reachability, reach, atol=1e-6)
            for got, want in zip(res.ordering.tolist(), ordering):
                if got != want:
                    # A swap on a numerical near-tie is fine; a genuine
                    # divergence would pair points with different values.
                    assert abs(res.reachability[got] - res.reachability[want]) < 1e-6

    def test_threshold_sweep_recovers_density_core_partition(self, rng_pool):
        # Cutting the OPTICS reachability profile at eps must group core
        # points exactly as direct density clustering at that eps does.
        for seed in range(6):
            rng = rng_pool(600 + seed)
            n = int(rng.integers(15, 41))
            min_pts = int(rng.integers(2, 5))
            eps = float(rng.uniform(40, 90))
            planar = rng.uniform(-250, 250, (n, 2))
            latlon = unproject_equirectangular(planar, GeoPoint(46.52, 6.63))
            pts = [GeoPoint(a, b) for a, b in latlon]

            ordering, reach, core_dist = textbook_optics(planar, min_pts)
            sweep = dbscan_from_optics(ordering, reach, core_dist, eps)
            direct = dbscan(pts, eps_m=eps, min_pts=min_pts)

            cores = np.flatnonzero(core_dist <= eps)

            def parts(labels):
                groups = {}
                for i in cores:
                    groups.setdefault(labels[i], set()).add(int(i))
                return {frozenset(v) for v in groups.values()}

            assert parts(sweep) == parts(direct.labels), f"seed {seed}"


class TestIndices:
    def test_db_two_singletons_is_zero(self):
        assert db_index(np.array([[0.0, 0.0], [10.0, 10.0]]), np.array([0, 1])) == 0.0

    def test_db_all_singletons_is_zero(self):
        points = np.array([[0.0, 0.0], [5.0, 0.0], [0.0, 5.0], [9.0, 9.0]])
        assert db_index(points, np.array([0, 1, 2, 3])) == 0.0

    def test_db_hand_computed_two_pair_value(self):
        # Scatters 1 and 1, centroid gap 10: index (1 + 1) / 10 = 0.2.
        points = np.array([[0.0, 0.0], [2.0, 0.0], [10.0, 0.0], [12.0, 0.0]])
        labels = np.array([0, 0, 1, 1])
        assert db_index(points, labels) == pytest.approx(0.2, abs=1e-12)

    def test_db_requires_two_clusters(self):
        with pytest.raises(ValueError):
            db_index(np.array([[0.0, 0.0], [1.0, 1.0]]), np.array([0, 0]))

    def test_silhouette_hand_computed_two_pair_value(self):
        # Pairs {0,1} and {10,11} on a line: per-point widths 9.5/10.5 and
        # 8.5/9.5, each twice, so the mean is 0.8997493734...
        points = np.array([[0.0, 0.0], [1.0, 0.0], [10.0, 0.0], [11.0, 0.0]])
        labels = np.array([0, 0, 1, 1])
        expected = (9.5 / 10.5 + 8.5 / 9.5) / 2.0
        assert silhouette(points, labels) == pytest.approx(expected, abs=1e-9)
        assert silhouette(points, labels) == pytest.approx(0.899749, abs=1e-6)

    def test_silhouette_validation(self):
        points = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])
        with pytest.raises(ValueError):
            silhouette(points, np.array([0, 0, 0]))
        with pytest.raises(ValueError):
            silhouette(points, np.array([0, 1, 2]))  # all singletons

    def test_db_invariant_under_point_duplication(self, rng_pool):
        rng = rng_pool(777)
        points = rng.uniform(-100, 100, (40, 2))
        labels = rng.integers(0, 3, 40)
        labels[:3] = [0, 1, 2]
        doubled = db_index(np.vstack([points, points]), np.concatenate([labels, labels]))
        assert doubled == pytest.approx(db_index(points, labels), abs=1e-9)


@given(st.integers(min_value=0, max_value=50_000))
def prop_silhouette_db_ranges(seed):
    """Property suite: silhouette in [-1, 1] and DB index >= 0 (>= 100 cases)."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(5, 31))
    k = int(rng.integers(2, min(6, n)))
    points = rng.uniform(-500.0, 500.0, (n, 2))
    labels = rng.integers(0, k, n)
    labels[:k] = np.arange(k)  # every cluster non-empty
    labels[k] = 0  # at least one non-singleton cluster
    s = silhouette(points, labels)
    assert -1.0 <= s <= 1.0
    assert db_index(points, labels) >= 0.0


class TestIndexProperties:
    def test_silhouette_and_db_ranges(self):
        prop_silhouette_db_ranges()


def _blobs(centers, per=6, spread=10.0, seed=0):
    rng = np.random.default_rng(seed)
    pts = []
    for cx, cy in centers:
        for _ in range(per):
            pts.append(offset_point(cx + rng.uniform(-spread, spread), cy + rng.uniform(-spread, spread)))
    return pts


class TestOptimizeLinkage:
    def test_three_blobs_found_by_both_criteria(self):
        pts = _blobs([(0, 0), (400, 0), (200, 350)], seed=1)
        for criterion in ("db", "sc"):
            search = optimize_linkage(pts, criterion=criterion)
            assert search.best_n == 3, criterion
            assert search.clusters.n_clusters == 3

    def test_values_match_direct_index_computation(self):
        pts = _blobs([(0, 0), (400, 0)], per=5, seed=2)
        planar, _ = project_equirectangular(pts)
        dend = linkage_complete(pairwise_matrix(planar))
        for criterion, index in (("db", db_index), ("sc", silhouette)):
            search = optimize_linkage(pts, criterion=criterion)
            assert search.values, criterion
            for k, value in search.values.items():
                assert value == pytest.approx(index(planar, cut(dend, k).labels), abs=1e-9)
            if criterion == "db":
                best = min(search.values.values())
                expect_n = min(k for k, v in search.values.items() if v == best)
            else:
                best = max(search.values.values())
                expect_n = min(k for k, v in search.values.items() if v == best)
            assert search.best_n == expect_n
            assert search.best_value == pytest.approx(best)

    def test_two_blobs_under_silhouette(self):
        pts = _blobs([(0, 0), (500, 0)], per=5, seed=3)
        assert optimize_linkage(pts, criterion="sc").best_n == 2

    def test_cluster_cap_limits_the_scan(self):
        pts = _blobs([(0, 0), (400, 0), (200, 350)], per=4, seed=4)
        search = optimize_linkage(pts, criterion="db", cluster_cap=2)
        assert search.best_n == 2
        assert set(search.values) <= {2}

    def test_default_cap_is_half_the_points(self):
        pts = _blobs([(0, 0), (400, 0)], per=4, seed=5)  # 8 points, cap 4
        search = optimize_linkage(pts, criterion="db")
        assert set(search.values) <= {2, 3, 4}
        assert search.best_n <= 4

    def test_validation(self):
        with pytest.raises(ValueError):
            optimize_linkage(_points([(0, 0), (10, 0), (20, 0)]), criterion="db")
        with pytest.raises(ValueError):
            optimize_linkage(_points([(0, 0), (10, 0), (20, 0), (30, 0)]), criterion="xx")


def _visits_trajectory():
    """Eight sites on a wide ring, each visited twice for 40 minutes."""
    rng = np.random.default_rng(12)
    sites = [(600.0 * np.cos(a), 600.0 * np.sin(a)) for a in np.linspace(0, 2 * np.pi, 9)[:-1]]
    entries = []
    ts = BASE_EPOCH
    for visit in range(2):
        for sx, sy in sites:
            for k in range(4):
                jx, jy = rng.uniform(-10, 10, 2)
                entries.append((ts, sx + jx, sy + jy, 600.0))
                ts += 600
            ts += 3600
        ts += SECONDS_PER_DAY // 2
    return make_processed(entries)


class TestPipelines:
    def test_sp_dbscan_wires_detection_and_clustering(self):
        t = _visits_trajectory()
        res = sp_dbscan(t)
        sps = detect_staypoints(t)
        assert [s.centroid for s in res.staypoints] == [s.centroid for s in sps]
        assert len(sps) == 16
        min_pts = BaselineParams.from_count(len(sps)).min_pts
        direct = dbscan([s.centroid for s in sps], eps_m=50.0, min_pts=min_pts)
        assert res.clusters.labels.tolist() == direct.labels.tolist()
        assert res.n_clusters == 8  # site pairs weld, sites stay apart

    def test_sp_optics_wires_detection_and_clustering(self):
        t = _visits_trajectory()
        res = sp_optics(t)
        sps = detect_staypoints(t)
        min_pts = BaselineParams.from_count(len(sps)).min_pts
        direct = optics_clusters([s.centroid for s in sps], min_pts=min_pts)
        assert res.clusters.labels.tolist() == direct.labels.tolist()

    def test_sp_linkage_wires_the_cut_search(self):
        t = _visits_trajectory()
        sps = detect_staypoints(t)
        centroids = [s.centroid for s in sps]
        for criterion in ("db", "sc"):
            res = sp_linkage(t, criterion)
            direct = optimize_linkage(centroids, criterion=criterion)
            assert res.clusters.labels.tolist() == direct.clusters.labels.tolist()
        # Complete linkage can never split a site's twin stay points (indices
        # i and i+8): their gap is tiny next to every inter-site distance.
        labels = sp_linkage(t, "db").clusters.labels
        for i in range(8):
            assert labels[i] == labels[i + 8]

    def test_rejects_unprocessed_trajectory(self):
        from poitree import Fix, Trajectory

        t = Trajectory(user_id="u", fixes=(Fix(0, 46.5, 6.6, 5.0),))
        with pytest.raises(ValueError):
            sp_dbscan(t)
