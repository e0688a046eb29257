import unittest

import numpy as np

from filterbank.errors import (
    DisconnectedError,
    DuplicateEdgeConflictError,
    InvalidParamError,
    LengthMismatchError,
    NegativeWeightError,
    NotSymmetricError,
    SelfLoopError,
)
from filterbank.graph import (
    Graph,
    build_graph,
    connect_components,
    dirichlet_energy,
    gen_community,
    gen_ring,
    gen_sensor,
    hop_distances,
    laplacian,
)
from tests.corpus import FIGURE_LAPLACIAN, corpus, figure_graph


class TestBuildGraph(unittest.TestCase):
    def test_two_vertex_path(self):
        g = build_graph(2, [(0, 1, 1.0)])
        self.assertEqual(g.n, 2)
        np.testing.assert_array_equal(g.weights, [[0.0, 1.0], [1.0, 0.0]])

    def test_one_based_indices(self):
        g = build_graph(3, [(1, 2, 1.0), (2, 3, 2.0)], one_based=True)
        self.assertEqual(g.weights[1, 2], 2.0)
        self.assertEqual(g.weights[0, 1], 1.0)

    def test_disconnected(self):
        with self.assertRaises(DisconnectedError):
            build_graph(3, [(0, 1, 1.0)])

    def test_self_loop(self):
        with self.assertRaises(SelfLoopError):
            build_graph(2, [(0, 0, 1.0), (0, 1, 1.0)])

    def test_negative_weight(self):
        with self.assertRaises(NegativeWeightError):
            build_graph(2, [(0, 1, -1.0)])

    def test_duplicate_conflict(self):
        with self.assertRaises(DuplicateEdgeConflictError):
            build_graph(2, [(0, 1, 1.0), (1, 0, 2.0)])

    def test_duplicate_same_weight_is_accepted(self):
        g = build_graph(2, [(0, 1, 1.5), (1, 0, 1.5)])
        self.assertEqual(g.weights[0, 1], 1.5)

    def test_out_of_range_vertex(self):
        with self.assertRaises(InvalidParamError):
            build_graph(2, [(0, 2, 1.0)])

    def test_asymmetric_matrix_rejected(self):
        with self.assertRaises(NotSymmetricError):
            Graph(np.array([[0.0, 1.0], [2.0, 0.0]]))

    def test_weights_are_read_only(self):
        g = figure_graph()
        with self.assertRaises(ValueError):
            g.weights[0, 1] = 5.0

    def test_validation_errors_are_value_errors(self):
        with self.assertRaises(ValueError):
            build_graph(3, [(0, 1, 1.0)])


class TestLaplacian(unittest.TestCase):
    def test_two_vertex(self):
        L = laplacian(build_graph(2, [(0, 1, 1.0)]))
        np.testing.assert_array_equal(L, [[1.0, -1.0], [-1.0, 1.0]])

    def test_figure_graph(self):
        L = laplacian(figure_graph())
        np.testing.assert_array_equal(L, FIGURE_LAPLACIAN)
        np.testing.assert_array_equal(np.diag(L), [4.0, 3.0, 4.0, 5.0])

    def test_ring_four(self):
        L = laplacian(gen_ring(4))
        expected = np.array([
            [2, -1, 0, -1],
            [-1, 2, -1, 0],
            [0, -1, 2, -1],
            [-1, 0, -1, 2],
        ], dtype=float)
        np.testing.assert_array_equal(L, expected)

    def test_corpus_row_sums_and_symmetry(self):
        for g in corpus(20):
            L = laplacian(g)
            self.assertLessEqual(np.max(np.abs(L.sum(axis=1))), 1e-12)
            self.assertLessEqual(np.max(np.abs(L - L.T)), 1e-12)


class TestDirichletEnergy(unittest.TestCase):
    def test_constant_signal(self):
        g = figure_graph()
        self.assertEqual(dirichlet_energy(g, np.full(4, 3.0)), 0.0)

    def test_two_vertex_ordered_pairs(self):
        g = build_graph(2, [(0, 1, 1.0)])
        self.assertEqual(dirichlet_energy(g, [0.0, 1.0]), 2.0)
        self.assertEqual(dirichlet_energy(g, [0.0, 1.0], ordered_pairs=False), 1.0)

    def test_matches_laplacian_form(self):
        g = figure_graph()
        L = laplacian(g)
        rng = np.random.default_rng(0)
        for _ in range(100):
            x = rng.standard_normal(4)
            expected = x @ L @ x
            once = dirichlet_energy(g, x, ordered_pairs=False)
            self.assertAlmostEqual(once, expected, delta=1e-10 * max(1.0, expected))
            self.assertAlmostEqual(dirichlet_energy(g, x), 2.0 * once, delta=1e-10 * max(1.0, expected))
            self.assertGreaterEqual(once, 0.0)

    def test_length_mismatch(self):
        with self.assertRaises(LengthMismatchError):
            dirichlet_energy(figure_graph(), [1.0, 2.0])


class TestGenerators(unittest.TestCase):
    def test_ring_spectrum(self):
        eigenvalues = np.linalg.eigvalsh(laplacian(gen_ring(4)))
        np.testing.assert_allclose(eigenvalues, [0.0, 2.0, 2.0, 4.0], atol=1e-12)

    def test_ring_three_is_triangle(self):
        np.testing.assert_array_equal(gen_ring(3).weights, np.ones((3, 3)) - np.eye(3))

    def test_ring_too_small(self):
        with self.assertRaises(InvalidParamError):
            gen_ring(2)

    def test_sensor_is_connected_and_deterministic(self):
        g = gen_sensor(200, seed=7, radius=0.2)
        self.assertEqual(g.n, 200)
        self.assertEqual(g.coords.shape, (200, 2))
        np.testing.assert_array_equal(g.weights, gen_sensor(200, seed=7, radius=0.2).weights)

    def test_sensor_weights_use_gaussian_kernel(self):
        g = gen_sensor(50, seed=3, radius=0.4)
        i, j, w = next(iter(g.edges()))
        d = np.linalg.norm(g.coords[i] - g.coords[j])
        if d <= 0.4:
            self.assertAlmostEqual(w, np.exp(-d ** 2 / (2 * 0.2 ** 2)), places=12)

    def test_community_deterministic(self):
        a = gen_community(64, seed=5)
        b = gen_community(64, seed=5)
        np.testing.assert_array_equal(a.weights, b.weights)
        self.assertTrue(set(np.unique(a.weights)) <= {0.0, 1.0})

    def test_community_invalid_probability(self):
        with self.assertRaises(InvalidParamError):
            gen_community(16, p_in=1.5)

    def test_community_default_blocks_fit_small_graphs(self):
        small = gen_community(4, seed=1)
        self.assertEqual(small.n, 4)
        np.testing.assert_array_equal(small.weights, gen_community(4, seed=1, blocks=4).weights)
        np.testing.assert_array_equal(gen_community(64, seed=1).weights, gen_community(64, seed=1, blocks=8).weights)
        with self.assertRaises(InvalidParamError):
            gen_community(4, blocks=5)

    def test_connect_components_chains_lowest_vertices(self):
        weights = np.zeros((5, 5))
        weights[0, 1] = weights[1, 0] = 1.0
        weights[3, 4] = weights[4, 3] = 1.0
        repaired, added = connect_components(weights)
        self.assertEqual(added, 2)
        self.assertEqual(repaired[0, 2], 1.0)
        self.assertEqual(repaired[2, 3], 1.0)
        Graph(repaired)


class TestHopDistances(unittest.TestCase):
    def test_ring(self):
        hops = hop_distances(gen_ring(8), 0)
        np.testing.assert_array_equal(hops, [0, 1, 2, 3, 4, 3, 2, 1])

    def test_ignores_weights(self):
        g = build_graph(3, [(0, 1, 100.0), (1, 2, 0.01)])
        np.testing.assert_array_equal(hop_distances(g, 2), [2, 1, 0])


if __name__ == '__main__':
    unittest.main()
