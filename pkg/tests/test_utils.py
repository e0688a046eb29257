import json
import math
import tempfile
import unittest
from pathlib import Path

import numpy as np
import pandas as pd

from filterbank import utils
from filterbank.errors import DisconnectedError, ParseError
from filterbank.graph import gen_sensor
from tests.corpus import figure_graph


class TestGraphFiles(unittest.TestCase):
    def test_write_then_read(self):
        g = gen_sensor(30, seed=1, radius=0.4)
        with tempfile.TemporaryDirectory() as td:
            path = utils.write_graph(g, Path(td) / 'g.txt')
            again = utils.read_graph(path)
        np.testing.assert_array_equal(again.weights, g.weights)

    def test_format(self):
        with tempfile.TemporaryDirectory() as td:
            path = utils.write_graph(figure_graph(), Path(td) / 'g.txt')
            lines = path.read_text().splitlines()
        self.assertEqual(lines[0], 'graphfb-graph v1 4')
        self.assertEqual(lines[1], '0 1 1.0')
        self.assertEqual(len(lines), 7)

    def test_blank_lines_ignored(self):
        with tempfile.TemporaryDirectory() as td:
            path = Path(td) / 'g.txt'
            path.write_text('graphfb-graph v1 2\n\n0 1 2.5\n\n')
            g = utils.read_graph(path)
        self.assertEqual(g.weights[0, 1], 2.5)

    def test_bad_header(self):
        with tempfile.TemporaryDirectory() as td:
            path = Path(td) / 'g.txt'
            path.write_text('edges 2\n0 1 1.0\n')
            with self.assertRaises(ParseError):
                utils.read_graph(path)

    def test_bad_line(self):
        with tempfile.TemporaryDirectory() as td:
            path = Path(td) / 'g.txt'
            path.write_text('graphfb-graph v1 2\n0 1\n')
            with self.assertRaises(ParseError) as cm:
                utils.read_graph(path)
        self.assertIn(':2:', str(cm.exception))

    def test_non_numeric_weight(self):
        with tempfile.TemporaryDirectory() as td:
            path = Path(td) / 'g.txt'
            path.write_text('graphfb-graph v1 2\n0 1 heavy\n')
            with self.assertRaises(ParseError):
                utils.read_graph(path)

    def test_graph_validation_applies(self):
        with tempfile.TemporaryDirectory() as td:
            path = Path(td) / 'g.txt'
            path.write_text('graphfb-graph v1 3\n0 1 1.0\n')
            with self.assertRaises(DisconnectedError):
                utils.read_graph(path)

    def test_empty_file(self):
        with tempfile.TemporaryDirectory() as td:
            path = Path(td) / 'g.txt'
            path.write_text('')
            with self.assertRaises(ParseError):
                utils.read_graph(path)


class TestSignalFiles(unittest.TestCase):
    def test_values_survive_exactly(self):
        x = np.random.default_rng(0).standard_normal(17)
        with tempfile.TemporaryDirectory() as td:
            path = utils.write_signal(x, Path(td) / 'x.txt')
            again = utils.read_signal(path)
        np.testing.assert_array_equal(again, x)

    def test_count_mismatch(self):
        with tempfile.TemporaryDirectory() as td:
            path = Path(td) / 'x.txt'
            path.write_text('graphfb-signal v1 3\n1.0\n2.0\n')
            with self.assertRaises(ParseError):
                utils.read_signal(path)

    def test_non_finite(self):
        with tempfile.TemporaryDirectory() as td:
            path = Path(td) / 'x.txt'
            path.write_text('graphfb-signal v1 1\nnan\n')
            with self.assertRaises(ParseError):
                utils.read_signal(path)


class TestCoefficientFiles(unittest.TestCase):
    def test_header_and_blocks(self):
        with tempfile.TemporaryDirectory() as td:
            path = utils.write_coeffs(np.arange(8.0), [2, 2, 4], Path(td) / 'c.txt')
            self.assertEqual(path.read_text().splitlines()[0], 'graphfb-coeffs v1 2 2 2 4')
            values, lengths = utils.read_coeffs(path)
        self.assertEqual(lengths, [2, 2, 4])
        np.testing.assert_array_equal(values, np.arange(8.0))

    def test_depth_disagrees_with_blocks(self):
        with tempfile.TemporaryDirectory() as td:
            path = Path(td) / 'c.txt'
            path.write_text('graphfb-coeffs v1 2 1 1\n0.0\n0.0\n')
            with self.assertRaises(ParseError):
                utils.read_coeffs(path)

    def test_count_mismatch(self):
        with tempfile.TemporaryDirectory() as td:
            path = Path(td) / 'c.txt'
            path.write_text('graphfb-coeffs v1 1 1 1\n0.0\n')
            with self.assertRaises(ParseError):
                utils.read_coeffs(path)


class TestJson(unittest.TestCase):
    def test_infinities_become_strings(self):
        record = {'snr': math.inf, 'values': np.array([1.0, -np.inf]), 'ok': np.bool_(True), 'k': np.int64(3)}
        self.assertEqual(
            utils.to_json_value(record),
            {'snr': 'inf', 'values': [1.0, '-inf'], 'ok': True, 'k': 3},
        )
        json.loads(utils.dumps_json(record))

    def test_write_and_read(self):
        with tempfile.TemporaryDirectory() as td:
            path = utils.write_json({'a': [1, 2]}, Path(td) / 'r.json')
            self.assertEqual(utils.read_json(path), {'a': [1, 2]})

    def test_invalid_json(self):
        with tempfile.TemporaryDirectory() as td:
            path = Path(td) / 'r.json'
            path.write_text('{not json')
            with self.assertRaises(ParseError):
                utils.read_json(path)


class TestCsv(unittest.TestCase):
    def test_metrics_frame(self):
        df = utils.metrics_frame({'re': 0.5, 'snr': math.inf})
        self.assertEqual(list(df.columns), ['metric', 'value'])
        self.assertEqual(df.loc[1, 'value'], 'inf')

    def test_write_csv(self):
        df = pd.DataFrame({'vertex': [0, 1], 'response': [0.25, -0.5]})
        with tempfile.TemporaryDirectory() as td:
            path = utils.write_csv(df, Path(td) / 'out.csv')
            written = pd.read_csv(path)
        self.assertTrue(written.equals(df))


if __name__ == '__main__':
    unittest.main()
