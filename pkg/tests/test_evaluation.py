"""Hand oracles for the two-sample statistics.

Degree/clustering histograms, Wasserstein distances, and EMD values are
small enough to compute on paper; the MMD identities (self-distance zero,
symmetry, the closed form for singleton sets) pin the estimator itself.
"""

import numpy as np
import pytest

from graphvrnn.errors import DataError
from graphvrnn.evaluation import (
    CLUSTERING_BINS,
    MmdReport,
    StatHistogram,
    clustering_histogram,
    community_pools,
    degree_histogram,
    emd_1d,
    evaluate,
    gaussian_emd_kernel,
    histogram_w1,
    local_clustering,
    mmd,
    orbit_histograms,
    pooled_attributes,
)
from graphvrnn.graphs import Graph

from helpers import complete_graph, cycle_graph, path_graph, star_graph, triangle


def point_mass(index: int, width: int) -> StatHistogram:
    masses = np.zeros(width)
    masses[index] = 1.0
    return StatHistogram(masses)


def k4_minus_edge() -> Graph:
    return Graph.from_edges(4, [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


def two_k3s_labeled(mean1: float, mean2: float) -> Graph:
    """Two triangles joined by one edge, labeled and attributed per side."""
    edges = [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)]
    attrs = np.array([[mean1]] * 3 + [[mean2]] * 3, dtype=np.float64)
    labels = np.array([0, 0, 0, 1, 1, 1])
    return Graph.from_edges(6, edges, attributes=attrs, community_labels=labels)


def two_k4s_unlabeled(mean1: float, mean2: float) -> Graph:
    edges = [(u, v) for u in range(4) for v in range(u + 1, 4)]
    edges += [(u, v) for u in range(4, 8) for v in range(u + 1, 8)]
    edges.append((3, 4))
    attrs = np.array([[mean1]] * 4 + [[mean2]] * 4, dtype=np.float64)
    return Graph.from_edges(8, edges, attributes=attrs)


class TestStatHistogram:
    def test_accepts_normalized_masses(self):
        h = StatHistogram(np.array([0.25, 0.75]))
        assert len(h) == 2
        np.testing.assert_array_equal(h.masses, [0.25, 0.75])

    def test_rejects_empty(self):
        with pytest.raises(DataError, match="non-empty"):
            StatHistogram(np.zeros(0))

    def test_rejects_matrix(self):
        with pytest.raises(DataError, match="non-empty vector"):
            StatHistogram(np.eye(2))

    def test_rejects_negative_mass(self):
        with pytest.raises(DataError, match="non-negative"):
            StatHistogram(np.array([1.5, -0.5]))

    def test_rejects_unnormalized(self):
        with pytest.raises(DataError, match="sum to 1"):
            StatHistogram(np.array([0.25, 0.25]))

    def test_tolerates_rounding_error(self):
        StatHistogram(np.array([1.0 / 3] * 3))


class TestDegreeHistogram:
    def test_triangle(self):
        h = degree_histogram(triangle())
        np.testing.assert_array_equal(h.masses, [0.0, 0.0, 1.0])

    def test_path(self):
        h = degree_histogram(path_graph(3))
        np.testing.assert_allclose(h.masses, [0.0, 2 / 3, 1 / 3])

    def test_star(self):
        h = degree_histogram(star_graph(5))
        np.testing.assert_allclose(h.masses, [0.0, 0.8, 0.0, 0.0, 0.2])

    def test_support_width_is_n(self):
        assert len(degree_histogram(complete_graph(4))) == 4


class TestLocalClustering:
    def test_k4_minus_edge(self):
        # The two degree-2 nodes see their neighbors joined (coefficient 1);
        # the degree-3 nodes have 2 of 3 neighbor pairs joined.
        coeffs = local_clustering(k4_minus_edge())
        np.testing.assert_allclose(sorted(coeffs), [2 / 3, 2 / 3, 1.0, 1.0])

    def test_path_is_all_zero(self):
        np.testing.assert_array_equal(local_clustering(path_graph(4)), np.zeros(4))

    def test_complete_graph_is_all_one(self):
        np.testing.assert_array_equal(local_clustering(complete_graph(5)), np.ones(5))

    def test_low_degree_nodes_count_as_zero(self):
        coeffs = local_clustering(star_graph(4))
        assert coeffs[0] == 0.0  # hub: neighbors share no edges
        np.testing.assert_array_equal(coeffs[1:], np.zeros(3))


class TestClusteringHistogram:
    def test_k4_minus_edge_bins(self):
        h = clustering_histogram(k4_minus_edge())
        assert len(h) == CLUSTERING_BINS
        expected = np.zeros(CLUSTERING_BINS)
        expected[66] = 0.5  # 2/3 lands in [0.66, 0.67)
        expected[99] = 0.5  # 1.0 is included in the closing bin
        np.testing.assert_allclose(h.masses, expected)

    def test_triangle_free_graph_is_point_mass_at_zero(self):
        h = clustering_histogram(path_graph(6))
        np.testing.assert_array_equal(h.masses, point_mass(0, CLUSTERING_BINS).masses)


class TestHistogramW1:
    def test_point_masses(self):
        assert histogram_w1(point_mass(0, 5), point_mass(3, 5)) == 3.0

    def test_pads_to_common_width(self):
        assert histogram_w1(point_mass(0, 2), point_mass(4, 5)) == 4.0

    def test_half_split(self):
        h1 = StatHistogram(np.array([0.5, 0.5]))
        h2 = StatHistogram(np.array([0.0, 1.0]))
        assert histogram_w1(h1, h2) == pytest.approx(0.5, abs=1e-15)

    def test_symmetric_and_zero_on_self(self):
        h1 = StatHistogram(np.array([0.2, 0.3, 0.5]))
        h2 = StatHistogram(np.array([0.6, 0.1, 0.3]))
        assert histogram_w1(h1, h1) == 0.0
        assert histogram_w1(h1, h2) == histogram_w1(h2, h1)


class TestGaussianEmdKernel:
    def test_closed_form(self):
        h1, h2 = point_mass(0, 5), point_mass(3, 5)
        assert gaussian_emd_kernel(h1, h2, 1.0) == pytest.approx(
            np.exp(-9.0 / 2.0), rel=1e-15
        )
        assert gaussian_emd_kernel(h1, h2, 3.0) == pytest.approx(
            np.exp(-0.5), rel=1e-15
        )

    def test_unit_on_identical(self):
        h = StatHistogram(np.array([0.25, 0.75]))
        assert gaussian_emd_kernel(h, h, 0.7) == 1.0


class TestMmd:
    def test_zero_on_identical_sets(self):
        hists = [point_mass(i, 6) for i in range(4)]
        assert mmd(hists, list(hists), 1.0) == 0.0

    def test_symmetric(self):
        a = [point_mass(0, 4), point_mass(1, 4)]
        b = [point_mass(3, 4)]
        assert mmd(a, b, 1.0) == pytest.approx(mmd(b, a, 1.0), rel=1e-15)

    def test_singleton_closed_form(self):
        # With one histogram per side the V-statistic is 1 + 1 - 2k(a, b).
        a, b = point_mass(0, 4), point_mass(2, 4)
        k = gaussian_emd_kernel(a, b, 1.5)
        assert mmd([a], [b], 1.5) == pytest.approx(2.0 - 2.0 * k, rel=1e-12)

    def test_pads_mixed_widths(self):
        a = [point_mass(0, 2)]
        b = [point_mass(2, 6)]
        k = np.exp(-4.0 / 2.0)
        assert mmd(a, b, 1.0) == pytest.approx(2.0 - 2.0 * k, rel=1e-12)

    def test_separation_grows_with_distance(self):
        base = [point_mass(0, 10)]
        near = mmd(base, [point_mass(1, 10)], 1.0)
        far = mmd(base, [point_mass(5, 10)], 1.0)
        assert 0.0 < near < far

    def test_rejects_empty_side(self):
        with pytest.raises(DataError, match="non-empty"):
            mmd([], [point_mass(0, 2)], 1.0)
        with pytest.raises(DataError, match="non-empty"):
            mmd([point_mass(0, 2)], [], 1.0)


class TestEmd1d:
    def test_unit_shift_of_points(self):
        assert emd_1d(np.array([0.0]), np.array([1.0])) == 1.0

    def test_pairs(self):
        assert emd_1d(np.array([0.0, 1.0]), np.array([1.0, 2.0])) == pytest.approx(1.0)

    def test_split_mass(self):
        # Quantile functions: a jumps 0 -> 2 at p=1/2, b sits at 1 throughout.
        assert emd_1d(np.array([0.0, 2.0]), np.array([1.0])) == pytest.approx(1.0)

    def test_equal_sizes_match_sorted_pairing(self, rng):
        a = rng.normal(size=37)
        b = rng.normal(loc=0.5, size=37)
        expected = np.abs(np.sort(a) - np.sort(b)).mean()
        assert emd_1d(a, b) == pytest.approx(expected, rel=1e-12)

    def test_translation_invariant(self, rng):
        a = rng.normal(size=20)
        b = rng.normal(size=31)
        assert emd_1d(a + 3.25, b + 3.25) == pytest.approx(emd_1d(a, b), rel=1e-9)

    def test_zero_on_self(self, rng):
        a = rng.normal(size=15)
        assert emd_1d(a, a.copy()) == 0.0

    def test_rejects_empty(self):
        with pytest.raises(DataError, match="non-empty"):
            emd_1d(np.zeros(0), np.array([1.0]))
        with pytest.raises(DataError, match="non-empty"):
            emd_1d(np.array([1.0]), np.zeros(0))


class TestOrbitHistograms:
    def test_identical_sets_get_identical_histograms(self):
        graphs = [triangle(), cycle_graph(5), complete_graph(4)]
        hists_a, hists_b = orbit_histograms(graphs, list(graphs))
        assert len(hists_a) == len(hists_b) == 3
        for ha, hb in zip(hists_a, hists_b):
            np.testing.assert_array_equal(ha.masses, hb.masses)

    def test_joint_min_max_scaling(self):
        # K2 has mean orbit vector (1, 0, ..., 0); the triangle (2, 0, 0, 1, 0...).
        # K2 attains the joint minimum everywhere, so its scaled row is zero
        # and collapses to a point mass at slot 0; the triangle scales to mass
        # split evenly between orbits 0 and 3.
        k2 = Graph.from_edges(2, [(0, 1)])
        hists_a, hists_b = orbit_histograms([k2], [triangle()])
        np.testing.assert_array_equal(hists_a[0].masses, point_mass(0, 15).masses)
        expected = np.zeros(15)
        expected[0] = 0.5
        expected[3] = 0.5
        np.testing.assert_allclose(hists_b[0].masses, expected)

    def test_zero_span_sets_collapse_to_slot_zero(self):
        hists_a, hists_b = orbit_histograms([triangle()], [triangle()])
        np.testing.assert_array_equal(hists_a[0].masses, point_mass(0, 15).masses)
        np.testing.assert_array_equal(hists_b[0].masses, point_mass(0, 15).masses)


class TestCommunityPools:
    def test_labeled_graphs_pool_by_label(self):
        g = two_k3s_labeled(2.0, -2.0)
        pool1, pool2 = community_pools([g], (0.0, 0.0))
        np.testing.assert_array_equal(pool1, [2.0, 2.0, 2.0])
        np.testing.assert_array_equal(pool2, [-2.0, -2.0, -2.0])

    def test_unlabeled_graph_is_bisected(self):
        g = two_k4s_unlabeled(5.0, -5.0)
        pool1, pool2 = community_pools([g], (5.0, -5.0))
        np.testing.assert_array_equal(np.sort(pool1), [5.0] * 4)
        np.testing.assert_array_equal(np.sort(pool2), [-5.0] * 4)

    def test_swapped_references_swap_pools(self):
        g = two_k4s_unlabeled(5.0, -5.0)
        pool1, pool2 = community_pools([g], (-5.0, 5.0))
        np.testing.assert_array_equal(np.sort(pool1), [-5.0] * 4)
        np.testing.assert_array_equal(np.sort(pool2), [5.0] * 4)

    def test_unsplittable_graph_joins_nearest_reference(self):
        g = Graph.from_edges(1, [], attributes=np.array([[4.0]]))
        pool1, pool2 = community_pools([g], (5.0, -5.0))
        np.testing.assert_array_equal(pool1, [4.0])
        assert pool2.size == 0

    def test_mixed_labeled_and_unlabeled(self):
        pool1, pool2 = community_pools(
            [two_k3s_labeled(1.0, -1.0), two_k4s_unlabeled(2.0, -2.0)], (1.0, -1.0)
        )
        assert sorted(pool1) == [1.0, 1.0, 1.0, 2.0, 2.0, 2.0, 2.0]
        assert sorted(pool2) == [-2.0, -2.0, -2.0, -2.0, -1.0, -1.0, -1.0]


class TestPooledAttributes:
    def test_concatenates_in_order(self):
        a = triangle(attributes=np.array([[1.0], [2.0], [3.0]]))
        b = path_graph(2, attributes=np.array([[4.0], [5.0]]))
        np.testing.assert_array_equal(pooled_attributes([a, b]), [1, 2, 3, 4, 5])


class TestEvaluate:
    def test_self_comparison_is_exactly_zero(self):
        graphs = [two_k3s_labeled(2.0, -2.0), two_k3s_labeled(1.5, -1.0)]
        report = evaluate(graphs, list(graphs), sigma=1.0)
        assert report.degree_mmd == 0.0
        assert report.clustering_mmd == 0.0
        assert report.orbit_mmd == 0.0
        assert report.emd_all == 0.0
        assert report.emd_com1 == 0.0
        assert report.emd_com2 == 0.0
        assert report.n_generated == report.n_test == 2

    def test_unlabeled_test_set_drops_community_metrics(self):
        gen = [two_k4s_unlabeled(1.0, -1.0)]
        test = [two_k4s_unlabeled(1.5, -0.5)]
        report = evaluate(gen, test)
        assert report.emd_all is not None
        assert report.emd_com1 is None
        assert report.emd_com2 is None

    def test_attribute_free_sets_report_structure_only(self):
        report = evaluate([triangle(), cycle_graph(4)], [path_graph(5)])
        assert report.emd_all is None
        assert report.emd_com1 is None
        assert report.degree_mmd > 0.0

    def test_labeled_test_set_reports_both_communities(self):
        gen = [two_k4s_unlabeled(2.1, -1.9)]
        test = [two_k3s_labeled(2.0, -2.0)]
        report = evaluate(gen, test)
        assert report.emd_com1 == pytest.approx(0.1)
        assert report.emd_com2 == pytest.approx(0.1)

    def test_sigma_and_provenance_are_recorded(self):
        report = evaluate([triangle()], [triangle()], sigma=2.5, provenance={"run": 3})
        assert report.sigma == 2.5
        assert report.provenance == {"run": 3}

    def test_rejects_empty_sets(self):
        with pytest.raises(DataError, match="non-empty"):
            evaluate([], [triangle()])
        with pytest.raises(DataError, match="non-empty"):
            evaluate([triangle()], [])

    def test_rejects_attributes_on_one_side_only(self):
        attributed = triangle(attributes=np.ones((3, 1)))
        with pytest.raises(DataError, match="one set only"):
            evaluate([attributed], [triangle()])

    def test_rejects_mixed_attributes_within_a_set(self):
        attributed = triangle(attributes=np.ones((3, 1)))
        with pytest.raises(DataError, match="generated set mixes"):
            evaluate([attributed, triangle()], [attributed])

    def test_rejects_wide_attributes(self):
        wide = triangle(attributes=np.ones((3, 2)))
        with pytest.raises(DataError, match="1-D"):
            evaluate([wide], [wide])

    def test_report_dict_round_trip(self):
        report = MmdReport(
            degree_mmd=0.1,
            clustering_mmd=0.2,
            orbit_mmd=0.3,
            emd_com1=None,
            emd_com2=None,
            emd_all=1.5,
            n_generated=7,
            n_test=9,
            sigma=1.0,
            provenance={"seed": 4},
        )
        d = report.to_dict()
        assert d["degree_mmd"] == 0.1
        assert d["emd_com1"] is None
        assert d["n_test"] == 9
        assert d["provenance"] == {"seed": 4}
        assert set(d) == {
            "degree_mmd", "clustering_mmd", "orbit_mmd",
            "emd_com1", "emd_com2", "emd_all",
            "n_generated", "n_test", "sigma", "provenance",
        }
