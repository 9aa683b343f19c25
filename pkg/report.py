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
"""Text and CSV rendering for the qfid commands.
"""

import csv
import io
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence

import jinja2

from fidelity import EstimatorResult

SWEEP_HEADER = ('epsilon', 'off_resonance', 'avg_fidelity',
                'quaternion_fidelity', 'point_to_point')

CARDINAL_LABELS = ('+x', '-x', '+y', '-y', '+z', '-z')


def sig17(value: float) -> str:
  """Formats with 17 significant digits, enough to round-trip a double."""
  return '{:.17g}'.format(value)


# trim_blocks: the first newline after a template tag is removed
# lstrip_blocks: strip tabs and spaces from the beginning of a line to the start of a block
JINJA_ENV = jinja2.Environment(
    loader=jinja2.FileSystemLoader(
        os.path.join(os.path.dirname(__file__), 'templates', 'reports')),
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
    undefined=jinja2.StrictUndefined)
JINJA_ENV.filters['sig17'] = sig17


def render_fidelity_report(result: EstimatorResult,
                           cardinal_fidelities: Sequence[float],
                           target_kind: str, completely_positive: bool) -> str:
  return JINJA_ENV.get_template('fidelity.txt.jinja2').render(
      result=result,
      cardinals=list(zip(CARDINAL_LABELS, cardinal_fidelities)),
      target_kind=target_kind,
      completely_positive=completely_positive)


def render_verify_report(reference: EstimatorResult,
                         results: Sequence[EstimatorResult],
                         max_discrepancy: float, threshold: float) -> str:
  """Table of estimator, value and distance from the six-state reference.

  Rows with a standard error are shown but do not count towards
  `max_discrepancy`.
  """
  rows = [{
      'name': r.name,
      'value': r.fidelity.value,
      'discrepancy': abs(r.fidelity.raw - reference.fidelity.raw),
      'standard_error': r.standard_error,
  } for r in results]
  return JINJA_ENV.get_template('verify.txt.jinja2').render(
      rows=rows,
      width=max(len(r.name) for r in results),
      max_discrepancy=max_discrepancy,
      threshold=threshold,
      passed=max_discrepancy < threshold)


def sweep_csv(rows: Iterable[Sequence[float]]) -> str:
  buffer = io.StringIO()
  writer = csv.writer(buffer, lineterminator='\n')
  writer.writerow(SWEEP_HEADER)
  for row in rows:
    writer.writerow([sig17(v) for v in row])
  return buffer.getvalue()


def write_atomically(path: str | Path, text: str) -> None:
  """Writes `text` to a sibling temp file, then renames it over `path`."""
  path = Path(path)
  with tempfile.NamedTemporaryFile('w',
                                   encoding='utf-8',
                                   newline='',
                                   dir=path.parent,
                                   prefix=f'.{path.name}.',
                                   delete=False) as f:
    f.write(text)
  try:
    os.replace(f.name, path)
  except OSError:
    os.unlink(f.name)
    raise
