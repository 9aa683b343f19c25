"""End-to-end tests of the qfid command line.
"""

import contextlib
import csv
import io
import json
import logging
import math
import os
import tempfile
import unittest
from unittest import mock

import fidelity
import main

SAMPLES_DIR = os.path.join(os.path.dirname(__file__), '..', '..', 'samples')
SAMPLES = ('depolarizing.json', 'sigma_x.json', 'conjugation.json',
           'composite_sweep.json')


def sample(name):
  return os.path.join(SAMPLES_DIR, name)


def report_value(text, key):
  for line in text.splitlines():
    if line.startswith(f'{key}: '):
      return line.split(': ', 1)[1]
  raise AssertionError(f'{key} not in report:\n{text}')


class CommandTestCase(unittest.TestCase):
  """Runs main() with a clean environment and captured stdout."""

  def setUp(self):
    patcher = mock.patch.dict(os.environ, {}, clear=True)
    patcher.start()
    self.addCleanup(patcher.stop)
    self.tmp = tempfile.TemporaryDirectory()
    self.addCleanup(self.tmp.cleanup)

  def run_main(self, *argv):
    stdout = io.StringIO()
    with contextlib.redirect_stdout(stdout):
      code = main.main(list(argv))
    return code, stdout.getvalue()

  def write_input(self, document):
    path = os.path.join(self.tmp.name, 'input.json')
    with open(path, 'w', encoding='utf-8') as f:
      f.write(document if isinstance(document, str) else json.dumps(document))
    return path


class TestFidelityCommand(CommandTestCase):
  """qfid fidelity."""

  def test_depolarizing_sample(self):
    code, out = self.run_main('fidelity', sample('depolarizing.json'))
    self.assertEqual(code, main.EXIT_OK)
    self.assertEqual(report_value(out, 'estimator'), 'six_state')
    self.assertAlmostEqual(float(report_value(out, 'average_fidelity')),
                           0.85,
                           places=14)
    self.assertAlmostEqual(float(report_value(out, '  +z')), 0.85, places=14)

  def test_document_estimator_is_used(self):
    code, out = self.run_main('fidelity', sample('sigma_x.json'))
    self.assertEqual(code, main.EXIT_OK)
    self.assertEqual(report_value(out, 'estimator'), 'quadrature')

  def test_flag_beats_environment(self):
    with mock.patch.dict(os.environ, {'QFID_ESTIMATOR': 'pauli'}):
      _, from_env = self.run_main('fidelity', sample('depolarizing.json'))
      _, from_flag = self.run_main('fidelity', sample('depolarizing.json'),
                                   '--estimator', 'tetrahedron')
    self.assertEqual(report_value(from_env, 'estimator'), 'pauli')
    self.assertEqual(report_value(from_flag, 'estimator'), 'tetrahedron')

  def test_monte_carlo_reports_standard_error(self):
    code, out = self.run_main('fidelity', sample('conjugation.json'),
                              '--estimator', 'monte_carlo', '--seed', '4')
    self.assertEqual(code, main.EXIT_OK)
    self.assertGreater(float(report_value(out, 'standard_error')), 0.0)
    _, again = self.run_main('fidelity', sample('conjugation.json'),
                             '--estimator', 'monte_carlo', '--seed', '4')
    self.assertEqual(out, again)

  def test_non_cp_map_warns_and_continues(self):
    with self.assertLogs('main', level='WARNING') as logs:
      code, out = self.run_main('fidelity', sample('conjugation.json'))
    self.assertEqual(code, main.EXIT_OK)
    self.assertIn('not completely positive', logs.output[0])
    self.assertIn('warning: map is not completely positive', out)
    self.assertAlmostEqual(float(report_value(out, 'average_fidelity')),
                           0.95,
                           places=14)

  def test_output_file(self):
    path = os.path.join(self.tmp.name, 'report.txt')
    code, out = self.run_main('fidelity', sample('depolarizing.json'), '-o',
                              path)
    self.assertEqual(code, main.EXIT_OK)
    self.assertEqual(out, '')
    with open(path, encoding='utf-8') as f:
      self.assertIn('average_fidelity: ', f.read())

  def test_quiet_sets_error_level(self):
    self.run_main('fidelity', sample('depolarizing.json'), '--quiet')
    self.assertEqual(logging.getLogger().level, logging.ERROR)

  def test_log_level_from_environment(self):
    with mock.patch.dict(os.environ, {'QFID_LOG_LEVEL': 'debug'}):
      self.run_main('fidelity', sample('depolarizing.json'))
    self.assertEqual(logging.getLogger().level, logging.DEBUG)


class TestVerifyCommand(CommandTestCase):
  """qfid verify."""

  def test_all_samples_pass(self):
    for name in SAMPLES:
      with self.subTest(sample=name):
        code, out = self.run_main('verify', sample(name), '--quiet')
        self.assertEqual(code, main.EXIT_OK)
        self.assertTrue(out.endswith('status: PASS (threshold 1e-08)\n'))
        self.assertIn('not checked', out)

  def test_disagreement_exits_4(self):
    real_estimate = fidelity.estimate

    def skewed(name, *args, **kwargs):
      result = real_estimate(name, *args, **kwargs)
      if name == 'pauli':
        return fidelity.EstimatorResult(
            name, fidelity.FidelityValue(result.fidelity.raw - 1e-6))
      return result

    with mock.patch.object(main, 'estimate', skewed):
      code, out = self.run_main('verify', sample('depolarizing.json'),
                                '--quiet')
    self.assertEqual(code, main.EXIT_DISAGREEMENT)
    self.assertIn('status: FAIL', out)

  def test_disagreement_above_one_is_not_clamped_away(self):
    real_estimate = fidelity.estimate

    def above_one(name, *args, **kwargs):
      result = real_estimate(name, *args, **kwargs)
      if result.standard_error is not None:
        return result
      excess = 1e-6 if name == 'pauli' else 0.0
      return fidelity.EstimatorResult(name,
                                      fidelity.FidelityValue(1.0 + excess))

    with mock.patch.object(main, 'estimate', above_one):
      code, out = self.run_main('verify', sample('depolarizing.json'),
                                '--quiet')
    self.assertEqual(code, main.EXIT_DISAGREEMENT)
    self.assertIn('status: FAIL', out)

  def test_same_seed_same_output(self):
    _, first = self.run_main('verify', sample('sigma_x.json'), '--seed', '1')
    _, second = self.run_main('verify', sample('sigma_x.json'), '--seed', '1')
    self.assertEqual(first, second)


class TestSweepCommand(CommandTestCase):
  """qfid sweep."""

  def read_rows(self, path):
    with open(path, encoding='utf-8', newline='') as f:
      return list(csv.reader(f))

  def test_composite_sample(self):
    path = os.path.join(self.tmp.name, 'sweep.csv')
    code, _ = self.run_main('sweep', sample('composite_sweep.json'), '-o', path)
    self.assertEqual(code, main.EXIT_OK)
    rows = self.read_rows(path)
    self.assertEqual(rows[0], [
        'epsilon', 'off_resonance', 'avg_fidelity', 'quaternion_fidelity',
        'point_to_point'
    ])
    self.assertEqual(len(rows), 1 + 5 * 3)
    epsilons = [float(row[0]) for row in rows[1:]]
    self.assertEqual(epsilons, sorted(epsilons))
    for row in rows[1:]:
      epsilon, off_resonance, avg, quaternion, p2p = map(float, row)
      if off_resonance == 0.0:
        half = math.pi * epsilon / 2
        self.assertAlmostEqual(p2p, 1.0 - math.sin(half)**4, places=14)
        self.assertAlmostEqual(avg, (2.0 + 4.0 * quaternion**2) / 6.0,
                               places=14)

  def test_matches_committed_csv(self):
    with open(sample('composite_sweep.csv'), encoding='utf-8',
              newline='') as f:
      committed = f.read()
    code, out = self.run_main('sweep', sample('composite_sweep.json'))
    self.assertEqual(code, main.EXIT_OK)
    expected_lines = committed.splitlines()
    lines = out.splitlines()
    self.assertEqual(lines[0], expected_lines[0])
    self.assertEqual(len(lines), len(expected_lines))
    for line, expected_line in zip(lines[1:], expected_lines[1:]):
      values = [float(v) for v in line.split(',')]
      expected = [float(v) for v in expected_line.split(',')]
      self.assertEqual(values[:2], expected[:2])
      for value, want in zip(values[2:], expected[2:]):
        self.assertAlmostEqual(value, want, delta=1e-13, msg=line)

  def test_byte_identical_output(self):
    first = os.path.join(self.tmp.name, 'first.csv')
    second = os.path.join(self.tmp.name, 'second.csv')
    self.run_main('sweep', sample('composite_sweep.json'), '-o', first)
    self.run_main('sweep', sample('composite_sweep.json'), '-o', second)
    with open(first, 'rb') as f1, open(second, 'rb') as f2:
      self.assertEqual(f1.read(), f2.read())

  def test_stdout_matches_file(self):
    path = os.path.join(self.tmp.name, 'sweep.csv')
    _, out = self.run_main('sweep', sample('composite_sweep.json'))
    self.run_main('sweep', sample('composite_sweep.json'), '-o', path)
    with open(path, encoding='utf-8', newline='') as f:
      self.assertEqual(out, f.read())

  def test_defaults_without_target(self):
    path = self.write_input({
        'sequence': {
            'preset': 'plain_180x'
        },
        'sweep': {
            'epsilon': {
                'min': 0.0,
                'max': 0.1,
                'steps': 2
            }
        },
    })
    code, out = self.run_main('sweep', path)
    self.assertEqual(code, main.EXIT_OK)
    last = out.splitlines()[-1].split(',')
    self.assertAlmostEqual(float(last[4]),
                           1.0 - math.sin(math.pi * 0.05)**2,
                           places=14)


class TestExitCodes(CommandTestCase):
  """Errors map to exit codes 2 and 3."""

  TARGET = {'axis': [0, 0, 1], 'angle': 0}

  def assert_exit(self, document, code, command='fidelity'):
    with self.assertLogs('main', level='ERROR'):
      self.assertEqual(self.run_main(command, self.write_input(document))[0],
                       code)

  def test_malformed_json(self):
    self.assert_exit('{"target": ', main.EXIT_INPUT)

  def test_missing_section(self):
    self.assert_exit({'target': self.TARGET}, main.EXIT_INPUT)

  def test_unknown_channel(self):
    self.assert_exit(
        {
            'target': self.TARGET,
            'channel': {
                'type': 'named',
                'name': 'erasure'
            }
        }, main.EXIT_INPUT)

  def test_parameter_out_of_range(self):
    self.assert_exit(
        {
            'target': self.TARGET,
            'channel': {
                'type': 'named',
                'name': 'depolarizing',
                'parameter': 2
            }
        }, main.EXIT_INPUT)

  def test_non_unitary_target(self):
    self.assert_exit({'target': {
        'matrix': [[1, 1], [0, 1]]
    }}, main.EXIT_INVARIANT)

  def test_non_trace_preserving_kraus(self):
    self.assert_exit(
        {
            'target': self.TARGET,
            'channel': {
                'type': 'kraus',
                'operators': [[[1, 0], [0, 1]], [[0, 1], [1, 0]]]
            }
        }, main.EXIT_INVARIANT)

  def test_sweep_error_out_of_range(self):
    self.assert_exit(
        {
            'sequence': {
                'preset': 'plain_180x'
            },
            'sweep': {
                'epsilon': {
                    'min': 0.0,
                    'max': 2.0,
                    'steps': 3
                }
            }
        },
        main.EXIT_INPUT,
        command='sweep')

  def test_out_of_range_fields(self):
    sweep = {'epsilon': {'min': 0.0, 'max': 0.1, 'steps': 2}}
    documents = [
        {
            'sequence': {
                'preset': 'bb1'
            },
            'sweep': sweep
        },
        {
            'sequence': {
                'pulses': [{
                    'angle': -1
                }]
            },
            'sweep': sweep
        },
        {
            'sequence': {
                'preset': 'plain_180x'
            },
            'sweep': {
                'epsilon': {
                    'min': 0.0,
                    'max': 0.1,
                    'steps': 0
                }
            }
        },
        {
            'target': self.TARGET,
            'channel': {
                'type': 'named',
                'name': 'identity'
            },
            'estimator': {
                'n_theta': 1
            }
        },
    ]
    for document in documents:
      with self.subTest(document=document):
        command = 'sweep' if 'sweep' in document else 'fidelity'
        self.assert_exit(document, main.EXIT_INPUT, command=command)

  def test_negative_seed_flag(self):
    with contextlib.redirect_stderr(io.StringIO()) as stderr:
      code, _ = self.run_main('fidelity', sample('depolarizing.json'),
                              '--seed', '-1')
    self.assertEqual(code, main.EXIT_INPUT)
    self.assertIn('--seed', stderr.getvalue())

  def test_negative_seed_in_environment(self):
    with mock.patch.dict(os.environ, {'QFID_SEED': '-1'}):
      with self.assertLogs('main', level='ERROR') as logs:
        code, _ = self.run_main('fidelity', sample('depolarizing.json'))
    self.assertEqual(code, main.EXIT_INPUT)
    self.assertIn('QFID_SEED', logs.output[0])

  def test_missing_input_file(self):
    with self.assertLogs('main', level='ERROR'):
      code, _ = self.run_main('fidelity',
                              os.path.join(self.tmp.name, 'absent.json'))
    self.assertEqual(code, main.EXIT_INPUT)

  def test_unknown_command(self):
    with contextlib.redirect_stderr(io.StringIO()):
      code, _ = self.run_main('tomography', sample('depolarizing.json'))
    self.assertEqual(code, main.EXIT_INPUT)


if __name__ == '__main__':
  unittest.main()
