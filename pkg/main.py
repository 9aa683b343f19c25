# Copyright 2026 The qfid Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""The qfid command line.

Usage:
  $ qfid fidelity input.json [--estimator NAME] [-o report.txt]
  $ qfid verify input.json [--seed N]
  $ qfid sweep input.json [-o sweep.csv]

Exit status is 0 on success, 2 for unreadable or malformed input, 3 when a
value violates a domain invariant and 4 when `verify` finds estimators that
disagree.
"""

import argparse
import dataclasses
import logging
import sys

import numpy as np

import config_helper
import errors
import report
from channels import LinearMap, TargetMap, build_channel, is_completely_positive
from fidelity import (ESTIMATORS, EstimatorResult, MonteCarloSpec,
                      QuadratureSpec, cardinal_state_fidelities, estimate)
from input_document import InputDocument, load_document
from linalg_core import UnitQuaternion
from pulses import sequence_unitary, sweep_rows
from random_maps import random_quaternion
from states import BlochVector, DensityMatrix, bloch_to_density

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INVARIANT = 3
EXIT_DISAGREEMENT = 4

DEFAULT_ESTIMATOR = 'six_state'
DEFAULT_SEED = 0
DEFAULT_LOG_LEVEL = 'WARNING'
VERIFY_THRESHOLD = 1e-8

_INPUT_ERRORS = (errors.InputError, errors.UnknownChannel,
                 errors.ParameterOutOfRange)


def parse_seed(text: str) -> int:
  """Seed from the command line or QFID_SEED; an unsigned 64-bit integer."""
  seed = int(text)
  if not 0 <= seed < 2**64:
    raise ValueError(f'seed must lie in [0, 2**64), got {seed}')
  return seed


@dataclasses.dataclass(frozen=True)
class RunConfig:
  """Run parameters after resolving flags, environment and the document."""
  estimator: str = DEFAULT_ESTIMATOR
  seed: int = DEFAULT_SEED
  quadrature: QuadratureSpec = QuadratureSpec()
  monte_carlo: MonteCarloSpec = MonteCarloSpec()


def resolve_config(args: argparse.Namespace, doc: InputDocument) -> RunConfig:
  block = doc.estimator
  estimator = config_helper.resolve('ESTIMATOR', getattr(args, 'estimator',
                                                         None), block.name,
                                    DEFAULT_ESTIMATOR)
  if estimator not in ESTIMATORS:
    raise errors.InputError(
        f'unknown estimator {estimator!r}; expected one of {ESTIMATORS}',
        field='estimator.name')
  seed = config_helper.resolve('SEED', args.seed, block.seed, DEFAULT_SEED,
                               parse_seed)
  quadrature = QuadratureSpec(
      block.n_theta if block.n_theta is not None else QuadratureSpec.n_theta,
      block.n_phi if block.n_phi is not None else QuadratureSpec.n_phi)
  samples = (block.samples
             if block.samples is not None else MonteCarloSpec.samples)
  return RunConfig(estimator, seed, quadrature, MonteCarloSpec(samples, seed))


def configure_logging(quiet: bool) -> None:
  level = 'ERROR' if quiet else (config_helper.get_setting('LOG_LEVEL') or
                                 DEFAULT_LOG_LEVEL).upper()
  logging.basicConfig(stream=sys.stderr,
                      level=level,
                      format='%(levelname)s %(name)s: %(message)s',
                      force=True)


def _require(doc: InputDocument, *sections: str) -> None:
  for section in sections:
    if getattr(doc, section) is None:
      raise errors.InputError('missing required section', field=section)


def _load_map(doc: InputDocument) -> tuple[LinearMap, bool]:
  m = build_channel(doc.channel)
  if not is_completely_positive(m):
    logger.warning('The channel is not completely positive; fidelities are '
                   'computed for the positive map as given.')
    return m, False
  return m, True


def _emit(text: str, output: str | None) -> None:
  if output:
    report.write_atomically(output, text)
    logger.info(f'Wrote {output}.')
  else:
    sys.stdout.write(text)


def _octahedron_rotation(config: RunConfig) -> UnitQuaternion:
  return random_quaternion(np.random.default_rng(config.seed))


def cmd_fidelity(args: argparse.Namespace, doc: InputDocument) -> int:
  _require(doc, 'target', 'channel')
  config = resolve_config(args, doc)
  m, completely_positive = _load_map(doc)
  result = estimate(config.estimator,
                    doc.target,
                    m,
                    quadrature=config.quadrature,
                    monte_carlo=config.monte_carlo,
                    octahedron_rotation=_octahedron_rotation(config))
  cardinals = [f.value for f in cardinal_state_fidelities(doc.target, m)]
  _emit(
      report.render_fidelity_report(result, cardinals, doc.target.kind.value,
                                    completely_positive), args.output)
  return EXIT_OK


def run_all_estimators(t: TargetMap, m: LinearMap,
                       config: RunConfig) -> list[EstimatorResult]:
  rotation = _octahedron_rotation(config)
  return [
      estimate(name,
               t,
               m,
               quadrature=config.quadrature,
               monte_carlo=config.monte_carlo,
               octahedron_rotation=rotation) for name in ESTIMATORS
  ]


def cmd_verify(args: argparse.Namespace, doc: InputDocument) -> int:
  _require(doc, 'target', 'channel')
  config = resolve_config(args, doc)
  m, _ = _load_map(doc)
  results = run_all_estimators(doc.target, m, config)
  reference = next(r for r in results if r.name == 'six_state')
  checked = [r for r in results if r.standard_error is None]
  worst = max(abs(r.fidelity.raw - reference.fidelity.raw) for r in checked)
  _emit(
      report.render_verify_report(reference, results, worst,
                                  VERIFY_THRESHOLD), args.output)
  if worst >= VERIFY_THRESHOLD:
    logger.error(f'Estimators disagree by {worst!r}.')
    return EXIT_DISAGREEMENT
  return EXIT_OK


def sweep_endpoints(doc: InputDocument,
                    ideal: TargetMap) -> tuple[DensityMatrix, DensityMatrix]:
  """Start defaults to +z; the goal defaults to the ideal image of start."""
  start = doc.start
  if start is None:
    start = bloch_to_density(BlochVector(0.0, 0.0, 1.0))
  goal = doc.goal
  if goal is None:
    goal = DensityMatrix(ideal.apply_operator(start.m))
  return start, goal


def cmd_sweep(args: argparse.Namespace, doc: InputDocument) -> int:
  _require(doc, 'sequence', 'sweep')
  ideal = doc.target
  if ideal is None:
    ideal = TargetMap(sequence_unitary(doc.sequence))
  start, goal = sweep_endpoints(doc, ideal)
  rows = sweep_rows(doc.sequence, doc.sweep.points(), ideal, start, goal)
  _emit(report.sweep_csv(rows), args.output)
  return EXIT_OK


COMMANDS = {
    'fidelity': cmd_fidelity,
    'verify': cmd_verify,
    'sweep': cmd_sweep,
}


def build_parser() -> argparse.ArgumentParser:
  common = argparse.ArgumentParser(add_help=False)
  common.add_argument('input', help='input JSON document')
  common.add_argument('--seed',
                      type=parse_seed,
                      default=None,
                      help='seed for Monte Carlo and random probe rotations')
  common.add_argument('--quiet',
                      action='store_true',
                      help='only log errors')
  common.add_argument('-o',
                      '--output',
                      default=None,
                      help='write the result to this file instead of stdout')

  parser = argparse.ArgumentParser(
      prog='qfid', description='Average fidelity of single-qubit maps.')
  commands = parser.add_subparsers(dest='command', required=True)
  fidelity = commands.add_parser('fidelity',
                                 parents=[common],
                                 help='average fidelity of one map')
  fidelity.add_argument('--estimator', choices=ESTIMATORS, default=None)
  commands.add_parser('verify',
                      parents=[common],
                      help='cross-check every estimator')
  commands.add_parser('sweep',
                      parents=[common],
                      help='fidelities of a pulse sequence over an error grid')
  return parser


def main(argv: list[str] | None = None) -> int:
  parser = build_parser()
  try:
    args = parser.parse_args(argv)
  except SystemExit as e:
    return EXIT_OK if e.code == 0 else EXIT_INPUT
  configure_logging(args.quiet)
  try:
    doc = load_document(args.input)
    return COMMANDS[args.command](args, doc)
  except _INPUT_ERRORS as e:
    logger.error(f'{type(e).__name__}: {e}')
    return EXIT_INPUT
  except errors.QfidError as e:
    logger.error(f'{type(e).__name__}: {e}')
    return EXIT_INVARIANT
  except OSError as e:
    logger.error(f'Cannot write output: {e}')
    return EXIT_INPUT


if __name__ == '__main__':
  sys.exit(main())
