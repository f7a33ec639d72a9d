"""Annulus Lloyd iteration: sampling, centroids, steps, trajectories."""

import math

import numpy as np
import pytest

from mindiag.diagram import OUT_OF_DOMAIN
from mindiag.errors import EmptyCellError, InputError
from mindiag.lloyd import (AnnulusConfig, assign_pixels, cell_objective,
                           initial_state, lloyd_step, objective_value,
                           run_lloyd, sample_euclidean, sample_exponential,
                           spacing_cv, weighted_centroid, _grids)
from mindiag.metric import (OriginAnchoredMetric, PlanarPoint,
                            smoothed_distance)

CFG = AnnulusConfig((0, 0), 1.0, 4.0, 256)


class TestConfig:
    def test_validation(self):
        with pytest.raises(InputError):
            AnnulusConfig((0, 0), 0.0, 2.0, 128)
        with pytest.raises(InputError):
            AnnulusConfig((0, 0), 3.0, 2.0, 128)
        with pytest.raises(InputError):
            AnnulusConfig((0, 0), 1.0, 2.0, 1)

    def test_pixel_size(self):
        assert CFG.pixel == pytest.approx(8.0 / 256)

    def test_weights_match_hub_distance(self):
        # 1/d(q,o)^2 at pixel centers, checked directly
        X, Y, D0, W, inside = _grids(CFG)
        rng = np.random.default_rng(2)
        iy, ix = np.nonzero(inside)
        for k in rng.choice(len(iy), 100, replace=False):
            d2 = X[iy[k], ix[k]] ** 2 + Y[iy[k], ix[k]] ** 2
            assert W[iy[k], ix[k]] == pytest.approx(1.0 / d2, rel=1e-12)


class TestSampling:
    def test_radii_inside_annulus(self):
        for p in sample_exponential(CFG, 500, 1):
            assert CFG.contains(p)
        for p in sample_euclidean(CFG, 500, 1):
            assert CFG.contains(p)

    def test_log_radius_is_uniform(self):
        pts = sample_exponential(CFG, 10000, 99)
        lr = np.sort([math.log(math.hypot(p.x, p.y)) for p in pts])
        u = (lr - math.log(CFG.inner)) / math.log(CFG.outer / CFG.inner)
        n = len(u)
        ks = max(np.max(np.abs(u - np.arange(1, n + 1) / n)),
                 np.max(np.abs(u - np.arange(n) / n)))
        assert ks < 0.02

    def test_seed_determinism(self):
        assert sample_exponential(CFG, 64, 7) == sample_exponential(CFG, 64, 7)

    def test_empty_sample_rejected(self):
        with pytest.raises(InputError):
            sample_exponential(CFG, 0, 1)


class TestAssignment:
    def test_labels_cover_annulus(self):
        sites = sample_exponential(CFG, 8, 3)
        labels, best = assign_pixels(CFG, sites)
        _, _, _, _, inside = _grids(CFG)
        assert np.all(labels[inside] >= 0)
        assert np.all(labels[~inside] == OUT_OF_DOMAIN)
        assert np.all(np.isfinite(best[inside]))

    def test_matches_direct_smoothed_distance(self):
        m = OriginAnchoredMetric(PlanarPoint(0.0, 0.0))
        sites = sample_exponential(CFG, 6, 5)
        labels, _ = assign_pixels(CFG, sites)
        X, Y, _, _, inside = _grids(CFG)
        rng = np.random.default_rng(8)
        iy, ix = np.nonzero(inside)
        for k in rng.choice(len(iy), 50, replace=False):
            q = (X[iy[k], ix[k]], Y[iy[k], ix[k]])
            want = min(range(6), key=lambda i: (smoothed_distance(
                m, sites[i], q), i))
            assert labels[iy[k], ix[k]] == want


class TestWeightedCentroid:
    def test_single_pixel_returns_its_center(self):
        X, Y, _, _, _ = _grids(CFG)
        c = weighted_centroid(CFG, np.array([[128, 100]]), (2.0, 0.5))
        assert c.x == pytest.approx(X[128, 100], abs=1e-12)
        assert c.y == pytest.approx(Y[128, 100], abs=1e-12)

    def test_symmetric_sector_stays_on_ray(self):
        X, Y, _, _, inside = _grids(CFG)
        sector = inside & (np.abs(np.arctan2(Y, X)) < 0.4)
        c = weighted_centroid(CFG, sector, (2.0, 0.0))
        assert abs(c.y) < CFG.pixel

    def test_beats_probe_grid(self):
        rng = np.random.default_rng(3)
        _, _, _, _, inside = _grids(CFG)
        iy, ix = np.nonzero(inside)
        pick = rng.choice(len(iy), 200, replace=False)
        cell = np.stack([iy[pick], ix[pick]], axis=1)
        c = weighted_centroid(CFG, cell, (1.5, 1.5))
        vc = cell_objective(CFG, cell, c)
        X, Y, _, _, _ = _grids(CFG)
        xs = X[cell[:, 0], cell[:, 1]]
        ys = Y[cell[:, 0], cell[:, 1]]
        for gx in np.linspace(xs.min(), xs.max(), 16):
            for gy in np.linspace(ys.min(), ys.max(), 16):
                if CFG.contains((gx, gy)):
                    assert vc <= cell_objective(CFG, cell, (gx, gy)) + 1e-15

    def test_never_worse_than_current_site(self):
        rng = np.random.default_rng(13)
        sites = sample_exponential(CFG, 10, 17)
        labels, _ = assign_pixels(CFG, sites)
        for i, p in enumerate(sites):
            mask = labels == i
            c = weighted_centroid(CFG, mask, p)
            assert cell_objective(CFG, mask, c) <= cell_objective(
                CFG, mask, p) + 1e-15

    def test_empty_cell_rejected(self):
        with pytest.raises(EmptyCellError):
            weighted_centroid(CFG, np.zeros((256, 256), bool), (2.0, 0.0))


class TestStep:
    def test_single_site_objective_non_increasing(self):
        st = initial_state(CFG, [(2.5, 0.5)], 0)
        s1 = lloyd_step(st, CFG)
        assert s1.iteration == 1
        assert s1.objective <= st.objective + 1e-9

    def test_converged_state_is_fixed(self):
        st = initial_state(CFG, [(2.5, 0.5)], 0)
        s1 = lloyd_step(st, CFG)
        s2 = lloyd_step(s1, CFG)
        # same cell, same search: the site must not move at all
        assert s2.sites == s1.sites

    def test_sites_outside_annulus_rejected(self):
        with pytest.raises(InputError):
            initial_state(CFG, [(0.5, 0.0)], 0)

    def test_empty_cell_names_the_site(self):
        # coincident sites tie at every pixel; the later one owns nothing
        sites = (PlanarPoint(2.0, 0.0), PlanarPoint(2.0, 0.0))
        labels, _ = assign_pixels(CFG, sites)
        assert not np.any(labels == 1)
        st = initial_state(CFG, sites, 0)
        with pytest.raises(EmptyCellError) as err:
            lloyd_step(st, CFG)
        assert err.value.site_index == 1


class TestTrajectory:
    def test_zero_iterations_returns_initial_sample(self):
        traj = run_lloyd(CFG, 16, 0, 21)
        assert len(traj.states) == 1
        assert traj.states[0].sites == sample_exponential(CFG, 16, 21)

    def test_objective_monotone_and_contained(self):
        traj = run_lloyd(CFG, 24, 5, 11)
        obj = traj.objectives
        for k in range(5):
            assert obj[k + 1] <= obj[k] + 1e-9
        for s in traj.states:
            for p in s.sites:
                assert CFG.contains(p)

    def test_spacing_cv_drops(self):
        traj = run_lloyd(CFG, 24, 5, 11)
        assert traj.spacing[-1] < traj.spacing[0]

    def test_bit_identical_reruns(self):
        a = run_lloyd(CFG, 12, 3, 5)
        b = run_lloyd(CFG, 12, 3, 5)
        assert a.states == b.states
        assert a.spacing == b.spacing

    def test_unknown_init_rejected(self):
        with pytest.raises(InputError):
            run_lloyd(CFG, 8, 1, 0, init="sobol")

    def test_spacing_needs_two_sites(self):
        with pytest.raises(InputError):
            spacing_cv(CFG, [PlanarPoint(2.0, 0.0)])
