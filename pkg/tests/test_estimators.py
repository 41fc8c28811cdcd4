"""Estimator facades: parameter plumbing, fitted state, and pipeline parity."""

from __future__ import annotations

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from poitree import (
    Persona,
    PlaceSpec,
    VisitBlock,
    extract_pois,
    generate,
    preprocess,
    sp_dbscan,
    sp_linkage,
    sp_optics,
)
from poitree.estimators import (
    PoiTreeExtractor,
    StayPointDbscan,
    StayPointLinkage,
    StayPointOptics,
)

EVERY_DAY = (0, 1, 2, 3, 4, 5, 6)
MON_FRI = (0, 1, 2, 3, 4)

ALL_ESTIMATORS = [PoiTreeExtractor, StayPointDbscan, StayPointOptics, StayPointLinkage]


@pytest.fixture(scope="module")
def fitted_input():
    persona = Persona(
        name="est",
        places=(
            PlaceSpec(
                name="home", east_m=0.0, north_m=0.0,
                visits=(VisitBlock(weekdays=EVERY_DAY, start_min=19 * 60, duration_min=150),),
            ),
            PlaceSpec(
                name="work", east_m=480.0, north_m=0.0,
                visits=(VisitBlock(weekdays=MON_FRI, start_min=9 * 60, duration_min=170),),
            ),
        ),
        span_days=14,
        noise_sigma_m=8.0,
        bad_fix_rate=0.0,
        jitter_s=30,
    )
    return preprocess(generate(persona, seed=21).trajectory)


class TestParams:
    @pytest.mark.parametrize("estimator_cls", ALL_ESTIMATORS)
    def test_get_set_clone_round_trip(self, estimator_cls):
        est = estimator_cls()
        params = est.get_params()
        assert params  # every estimator exposes its knobs
        est.set_params(**params)
        assert est.get_params() == params
        duplicate = clone(est)
        assert duplicate.get_params() == params
        assert not hasattr(duplicate, "labels_")

    def test_set_params_changes_behavior(self):
        est = StayPointDbscan()
        est.set_params(eps_m=75.0, min_pts=3)
        assert est.get_params()["eps_m"] == 75.0
        assert est.get_params()["min_pts"] == 3

    def test_clone_does_not_copy_fitted_state(self, fitted_input):
        est = PoiTreeExtractor().fit(fitted_input)
        assert hasattr(est, "tree_")
        assert not hasattr(clone(est), "tree_")


class TestFittedState:
    def test_poi_tree_requires_fit(self):
        with pytest.raises(NotFittedError):
            PoiTreeExtractor().poi_tree()

    def test_unfitted_estimators_have_no_results(self):
        for cls in ALL_ESTIMATORS:
            assert not hasattr(cls(), "labels_")

    def test_fit_returns_self(self, fitted_input):
        est = StayPointDbscan()
        assert est.fit(fitted_input) is est


class TestPoiTreeExtractor:
    def test_matches_functional_pipeline(self, fitted_input):
        est = PoiTreeExtractor().fit(fitted_input)
        direct = extract_pois(fitted_input)
        assert est.poi_tree() == direct
        assert est.n_global_ == len(direct.global_pois) == 2
        assert est.n_local_ == len(direct.local_pois)

    def test_labels_cover_member_indices(self, fitted_input):
        est = PoiTreeExtractor().fit(fitted_input)
        labels = est.labels_
        assert labels.shape == (len(fitted_input),)
        for gi, poi in enumerate(est.tree_.global_pois):
            assert all(labels[list(poi.member_indices)] == gi)
        members = {i for poi in est.tree_.global_pois for i in poi.member_indices}
        outside = [i for i in range(len(fitted_input)) if i not in members]
        assert all(labels[outside] == -1)

    def test_fit_predict_equals_fit_then_labels(self, fitted_input):
        a = PoiTreeExtractor().fit_predict(fitted_input)
        b = PoiTreeExtractor().fit(fitted_input).labels_
        assert np.array_equal(a, b)

    def test_thresholds_are_honored(self, fitted_input):
        # An impossible dwell bar leaves no qualifying place.
        est = PoiTreeExtractor(d_vd_global=1e9).fit(fitted_input)
        assert est.n_global_ == 0
        assert np.all(est.labels_ == -1)

    def test_raw_trajectory_rejected(self, fitted_input):
        raw = generate(
            Persona(
                name="raw",
                places=(PlaceSpec(
                    name="a", east_m=0.0, north_m=0.0,
                    visits=(VisitBlock(weekdays=EVERY_DAY, start_min=600, duration_min=60),),
                ),),
                span_days=3,
            ),
            seed=1,
        ).trajectory
        with pytest.raises(ValueError, match="preprocess"):
            PoiTreeExtractor().fit(raw)

    def test_non_trajectory_rejected(self):
        with pytest.raises(TypeError):
            PoiTreeExtractor().fit([1, 2, 3])


class TestStayPointFacades:
    def test_dbscan_matches_functional_pipeline(self, fitted_input):
        est = StayPointDbscan(eps_m=60.0).fit(fitted_input)
        direct = sp_dbscan(fitted_input, eps_m=60.0)
        assert est.staypoints_ == direct.staypoints
        assert np.array_equal(est.labels_, direct.clusters.labels)
        assert est.n_clusters_ == direct.clusters.n_clusters == 2

    def test_optics_matches_functional_pipeline(self, fitted_input):
        est = StayPointOptics().fit(fitted_input)
        direct = sp_optics(fitted_input)
        assert np.array_equal(est.labels_, direct.clusters.labels)

    @pytest.mark.parametrize("criterion", ["db", "sc"])
    def test_linkage_matches_functional_pipeline(self, fitted_input, criterion):
        est = StayPointLinkage(criterion=criterion).fit(fitted_input)
        direct = sp_linkage(fitted_input, criterion=criterion)
        assert np.array_equal(est.labels_, direct.clusters.labels)
        assert est.n_clusters_ == direct.clusters.n_clusters

    def test_bad_criterion_surfaces_at_fit(self, fitted_input):
        with pytest.raises(ValueError, match="criterion"):
            StayPointLinkage(criterion="ch").fit(fitted_input)
