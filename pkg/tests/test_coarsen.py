import unittest
from dataclasses import replace
from unittest.mock import MagicMock

import numpy as np

from filterbank.coarsen import coarse_basis, coarsen, heavy_edge_matching
from filterbank.graph import build_graph, laplacian
from filterbank.mallat import analyze, build_level, synthesize
from filterbank.sampler import channel_sizes, is_orthogonal, make_samplers
from filterbank.spectral import eig_sym
from tests.corpus import corpus, figure_graph, path_graph


def star_graph(n):
    return build_graph(n, [(0, k, 1.0) for k in range(1, n)])


class TestHeavyEdgeMatching(unittest.TestCase):
    def test_heaviest_edges_first(self):
        self.assertEqual(heavy_edge_matching(figure_graph()), [(0, 3), (1, 2)])

    def test_index_order_breaks_weight_ties(self):
        self.assertEqual(heavy_edge_matching(path_graph(5)), [(0, 1), (2, 3)])


class TestCoarsen(unittest.TestCase):
    def test_figure_graph(self):
        cm = coarsen(figure_graph())
        self.assertEqual(cm.coarse_n, 2)
        np.testing.assert_array_equal(cm.assignment, [0, 1, 1, 0])
        np.testing.assert_array_equal(cm.coarse_graph.weights, [[0.0, 5.0], [5.0, 0.0]])
        np.testing.assert_array_equal(cm.members(1), [1, 2])

    def test_forced_singleton_merges(self):
        cm = coarsen(star_graph(5))
        np.testing.assert_array_equal(cm.assignment, [0, 0, 1, 1, 2])
        np.testing.assert_array_equal(cm.coarse_graph.weights, [
            [0.0, 2.0, 1.0],
            [2.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
        ])

    def test_odd_path(self):
        cm = coarsen(path_graph(3))
        np.testing.assert_array_equal(cm.assignment, [0, 0, 1])
        self.assertFalse(cm.trivial)

    def test_two_vertices_is_trivial(self):
        cm = coarsen(path_graph(2))
        self.assertTrue(cm.trivial)
        self.assertEqual(cm.coarse_n, 1)
        np.testing.assert_array_equal(coarse_basis(cm), np.eye(1))

    def test_corpus_sizes_and_supernodes(self):
        for g in corpus(50):
            cm = coarsen(g)
            s, _ = channel_sizes(g.n)
            self.assertEqual(cm.coarse_n, s)
            counts = np.bincount(cm.assignment, minlength=s)
            self.assertTrue(np.all((counts >= 1) & (counts <= 2)), counts)
            firsts = [cm.members(k)[0] for k in range(s)]
            self.assertEqual(firsts, sorted(firsts))
            if not cm.trivial:
                self.assertEqual(cm.coarse_graph.n, s)

    def test_coarse_weight_total(self):
        g = figure_graph()
        cm = coarsen(g)
        internal = sum(w for i, j, w in g.edges() if cm.assignment[i] == cm.assignment[j])
        total = sum(w for _, _, w in g.edges())
        coarse_total = sum(w for _, _, w in cm.coarse_graph.edges())
        self.assertAlmostEqual(coarse_total, total - internal)

    def test_to_dict(self):
        record = coarsen(figure_graph()).to_dict()
        self.assertEqual(record, {'fine_n': 4, 'coarse_n': 2, 'assignment': [0, 1, 1, 0]})


class TestCoarseBasis(unittest.TestCase):
    def test_orthogonal(self):
        for g in corpus(15):
            cm = coarsen(g)
            self.assertTrue(is_orthogonal(coarse_basis(cm)))

    def test_uses_given_solver(self):
        cm = coarsen(figure_graph())
        solver = MagicMock(side_effect=eig_sym)
        U1 = coarse_basis(cm, eig=solver)
        solver.assert_called_once()
        np.testing.assert_array_equal(solver.call_args[0][0], laplacian(cm.coarse_graph))
        self.assertEqual(U1.shape, (2, 2))

    def test_reconstruction_does_not_depend_on_coarse_basis(self):
        rng = np.random.default_rng(19)
        for g in corpus(30):
            lt = build_level(g)
            s, _ = channel_sizes(g.n)
            U1, _ = np.linalg.qr(rng.standard_normal((s, s)))
            swapped = replace(lt, samplers=make_samplers(lt.spectral, U1))
            x = rng.standard_normal(g.n)
            y_low, z_high = analyze(swapped, x)
            np.testing.assert_allclose(synthesize(swapped, y_low, z_high), x, atol=1e-10)
            np.testing.assert_allclose(
                synthesize(swapped, y_low, z_high),
                synthesize(lt, *analyze(lt, x)),
                atol=1e-10,
            )


if __name__ == '__main__':
    unittest.main()
