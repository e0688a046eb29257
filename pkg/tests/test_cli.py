import io
import json
import shutil
import tempfile
import unittest
from pathlib import Path
from unittest.mock import patch

import numpy as np

from cli import main, parse_args
from filterbank.errors import EigFailureError
from filterbank.utils import read_graph, read_signal, write_graph, write_signal
from tests.corpus import figure_graph


class TestCLIArgumentParsing(unittest.TestCase):
    def test_gen(self):
        with patch('sys.argv', ['cli.py', 'gen', 'sensor', '64', '--seed', '3', '-o', 'g.txt']):
            args = parse_args()
        self.assertEqual(args.command, 'gen')
        self.assertEqual((args.kind, args.n, args.seed), ('sensor', 64, 3))
        self.assertEqual(args.output, Path('g.txt'))
        self.assertAlmostEqual(args.radius, 0.15)
        self.assertIsNone(args.blocks)

    def test_bank_options_defaults(self):
        args = parse_args(['analyze', 'g.txt', 'x.txt', '-o', 'c.txt'])
        self.assertEqual(args.design, 'local')
        self.assertIsNone(args.bank)
        self.assertEqual(args.split, 'sqrt')
        self.assertEqual(args.depth, 1)

    def test_short_flags(self):
        args = parse_args(['polyfit', 'g.txt', '-m', '7', '-d', 'ideal', '--channel', 'g1'])
        self.assertEqual((args.degree, args.design, args.channel), (7, 'ideal', 'g1'))
        self.assertEqual(args.target, 'interpolant')
        args = parse_args(['locality', 'g.txt', '-m', '3', '--target', 'spectrum'])
        self.assertEqual((args.degree, args.target), (3, 'spectrum'))

    def test_unknown_design_is_usage_error(self):
        with patch('sys.stderr', new_callable=io.StringIO):
            with self.assertRaises(SystemExit) as cm:
                parse_args(['design', 'g.txt', '--design', 'wavelet'])
        self.assertEqual(cm.exception.code, 2)

    def test_output_required_for_analyze(self):
        with patch('sys.stderr', new_callable=io.StringIO):
            with self.assertRaises(SystemExit):
                parse_args(['analyze', 'g.txt', 'x.txt'])


class TestCLIMain(unittest.TestCase):
    def setUp(self):
        self.test_dir = Path(tempfile.mkdtemp())
        self.graph = write_graph(figure_graph(), self.test_dir / 'g.txt')
        self.signal = write_signal([1.0, 0.0, -2.0, 0.5], self.test_dir / 'x.txt')

    def tearDown(self):
        shutil.rmtree(self.test_dir)

    def run_main(self, argv):
        with patch('sys.stdout', new_callable=io.StringIO) as out:
            code = main(argv)
        return code, out.getvalue()

    def test_gen(self):
        out = self.test_dir / 'ring.txt'
        code, _ = self.run_main(['gen', 'ring', '10', '-o', str(out)])
        self.assertEqual(code, 0)
        self.assertTrue(out.exists())

    def test_gen_small_community_with_default_blocks(self):
        out = self.test_dir / 'sbm.txt'
        code, _ = self.run_main(['gen', 'community', '4', '-o', str(out)])
        self.assertEqual(code, 0)
        self.assertEqual(read_graph(out).n, 4)

    def test_design_prints_json(self):
        code, text = self.run_main(['design', str(self.graph), '--design', 'ideal'])
        self.assertEqual(code, 0)
        record = json.loads(text)
        self.assertEqual(record['kind'], 'orthogonal')
        self.assertEqual(record['n'], 4)

    def test_analyze_synthesize_metrics(self):
        coeffs = self.test_dir / 'c.txt'
        recon = self.test_dir / 'r.txt'
        self.assertEqual(self.run_main(['analyze', str(self.graph), str(self.signal), '-o', str(coeffs)])[0], 0)
        self.assertEqual(self.run_main(['synthesize', str(self.graph), str(coeffs), '-o', str(recon)])[0], 0)
        np.testing.assert_allclose(read_signal(recon), [1.0, 0.0, -2.0, 0.5], atol=1e-10)
        code, text = self.run_main(['metrics', str(self.signal), str(self.signal)])
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(text)['snr'], 'inf')

    def test_locality_to_stdout(self):
        code, text = self.run_main(['locality', str(self.graph), '-v', '1'])
        self.assertEqual(code, 0)
        lines = text.splitlines()
        self.assertEqual(lines[0], 'vertex,hops,response')
        self.assertEqual(len(lines), 5)

    def test_verify(self):
        code, text = self.run_main(['verify', str(self.graph)])
        self.assertEqual(code, 0)
        self.assertTrue(json.loads(text)['passed'])

    def test_verify_failure_exit_code(self):
        with patch('cli.PipelineService.verify', return_value={'passed': False}):
            code, _ = self.run_main(['verify', str(self.graph)])
        self.assertEqual(code, 3)

    def test_missing_file(self):
        with self.assertLogs('cli', level='ERROR'):
            code, _ = self.run_main(['design', str(self.test_dir / 'missing.txt')])
        self.assertEqual(code, 2)

    def test_invalid_graph(self):
        bad = self.test_dir / 'bad.txt'
        bad.write_text('graphfb-graph v1 3\n0 1 1.0\n')
        with self.assertLogs('cli', level='ERROR'):
            code, _ = self.run_main(['design', str(bad)])
        self.assertEqual(code, 2)

    def test_numerical_failure(self):
        with patch('cli.PipelineService.design', side_effect=EigFailureError('no convergence')):
            with self.assertLogs('cli', level='ERROR'):
                code, _ = self.run_main(['design', str(self.graph)])
        self.assertEqual(code, 3)


if __name__ == '__main__':
    unittest.main()
