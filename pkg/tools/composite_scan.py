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
"""Side-by-side scan of the plain and composite inversion pulses.

Usage:
  $ printf '0\n0.05\n0.1\n' | PYTHONPATH=(Path to qfid) python -u composite_scan.py

Each input line is a pulse length error eps. For each one the script prints
the +z -> -z transfer fidelity and the average fidelity of both sequences,
then a running mean over all lines read so far.
"""

import sys

from channels import TargetMap
from pulses import (ErrorModel, composite_90x_180y_90x, plain_180x,
                    sequence_report, sequence_unitary)
from states import BlochVector, bloch_to_density

UP = bloch_to_density(BlochVector(0.0, 0.0, 1.0))
DOWN = bloch_to_density(BlochVector(0.0, 0.0, -1.0))

SEQUENCES = (plain_180x(), composite_90x_180y_90x())


def scan(epsilon):
  results = []
  for sequence in SEQUENCES:
    ideal = TargetMap(sequence_unitary(sequence))
    report = sequence_report(sequence, ErrorModel(epsilon), ideal, UP, DOWN)
    results.append(
        (report.point_to_point.value, report.average_fidelity.value))
  return results


def main():
  count = 0
  totals = [[0.0, 0.0] for _ in SEQUENCES]
  for line in sys.stdin:
    line = line.strip()
    if not line:
      continue
    epsilon = float(line)
    results = scan(epsilon)
    count += 1
    print('epsilon:', epsilon)
    for sequence, (p2p, avg), total in zip(SEQUENCES, results, totals):
      print(f'  {sequence.label}: point_to_point: {p2p:.17g} '
            f'avg_fidelity: {avg:.17g}')
      total[0] += p2p
      total[1] += avg
    for sequence, (p2p, avg) in zip(SEQUENCES, totals):
      print(f'mean {sequence.label}: point_to_point: {p2p / count:.17g} '
            f'avg_fidelity: {avg / count:.17g}')


if __name__ == '__main__':
  main()
