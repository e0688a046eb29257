import os
import tempfile
import unittest
from pathlib import Path
from unittest.mock import patch

import numpy as np

from filterbank.graph import gen_ring, laplacian
from filterbank.spectral import eig_sym
from services import eig_cache
from tests.corpus import figure_graph


class TestCacheKey(unittest.TestCase):
    def test_same_content_same_key(self):
        L = laplacian(figure_graph())
        self.assertEqual(eig_cache.cache_key(L), eig_cache.cache_key(L.copy()))

    def test_different_content(self):
        L = laplacian(figure_graph())
        M = L.copy()
        M[0, 0] += 1e-12
        self.assertNotEqual(eig_cache.cache_key(L), eig_cache.cache_key(M))


class TestCacheFiles(unittest.TestCase):
    def test_save_and_load(self):
        sd = eig_sym(laplacian(gen_ring(9)))
        with tempfile.TemporaryDirectory() as td:
            path = Path(td) / 'sub' / 'x.eig'
            eig_cache.save_decomposition(sd, path)
            again = eig_cache.load_decomposition(path)
            leftovers = [p.name for p in path.parent.iterdir() if p.suffix == '.tmp']
        np.testing.assert_array_equal(again.eigenvalues, sd.eigenvalues)
        np.testing.assert_array_equal(again.basis, sd.basis)
        self.assertEqual(leftovers, [])

    def test_truncated_file(self):
        sd = eig_sym(laplacian(figure_graph()))
        with tempfile.TemporaryDirectory() as td:
            path = Path(td) / 'x.eig'
            eig_cache.save_decomposition(sd, path)
            path.write_bytes(path.read_bytes()[:-8])
            with self.assertRaises(ValueError):
                eig_cache.load_decomposition(path)

    def test_foreign_header(self):
        with tempfile.TemporaryDirectory() as td:
            path = Path(td) / 'x.eig'
            path.write_bytes(b'something else 4\n')
            with self.assertRaises(ValueError):
                eig_cache.load_decomposition(path)


class TestCachedEigSym(unittest.TestCase):
    def test_disabled_without_directory(self):
        L = laplacian(figure_graph())
        with patch.dict(os.environ, {}, clear=False):
            os.environ.pop('GRAPHFB_EIG_CACHE', None)
            with patch.object(eig_cache, 'save_decomposition') as mock_save:
                sd = eig_cache.cached_eig_sym(L)
        mock_save.assert_not_called()
        np.testing.assert_allclose(sd.eigenvalues, [0.0, 4.0, 5.0, 7.0], atol=1e-10)

    def test_miss_then_hit(self):
        L = laplacian(gen_ring(12))
        with tempfile.TemporaryDirectory() as td:
            first = eig_cache.cached_eig_sym(L, cache_dir=td)
            self.assertTrue(eig_cache.cache_path(L, Path(td)).exists())
            with patch.object(eig_cache, 'eig_sym') as mock_eig:
                second = eig_cache.cached_eig_sym(L, cache_dir=td)
            mock_eig.assert_not_called()
        np.testing.assert_array_equal(first.basis, second.basis)

    def test_directory_from_environment(self):
        L = laplacian(figure_graph())
        with tempfile.TemporaryDirectory() as td:
            with patch.dict(os.environ, {'GRAPHFB_EIG_CACHE': td}):
                eig_cache.cached_eig_sym(L)
            self.assertEqual(len(list(Path(td).glob('*.eig'))), 1)

    def test_corrupt_entry_is_recomputed(self):
        L = laplacian(figure_graph())
        with tempfile.TemporaryDirectory() as td:
            path = eig_cache.cache_path(L, Path(td))
            path.write_bytes(b'graphfb-eig v1 4\nshort')
            with self.assertLogs('services.eig_cache', level='WARNING'):
                sd = eig_cache.cached_eig_sym(L, cache_dir=td)
            again = eig_cache.load_decomposition(path)
        np.testing.assert_array_equal(again.basis, sd.basis)

    def test_cached_result_matches_direct(self):
        L = laplacian(gen_ring(10))
        with tempfile.TemporaryDirectory() as td:
            eig_cache.cached_eig_sym(L, cache_dir=td)
            cached = eig_cache.cached_eig_sym(L, cache_dir=td)
        np.testing.assert_array_equal(cached.basis, eig_sym(L).basis)


if __name__ == '__main__':
    unittest.main()
