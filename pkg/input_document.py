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
"""Parser for the JSON input document.

See docs/input_format.md for the schema. Structural problems and out-of-range
parameters raise errors.InputError naming the field path and, where it can be
found, the line of the enclosing top-level section. Values that parse but
violate a domain invariant (a non-unitary target, a non-TP Kraus set) raise
the domain error from the module that owns the type.
"""

import contextlib
import dataclasses
import json
import math
import re
from pathlib import Path
from typing import Any

import numpy as np

import errors
from channels import (AffineSpec, ChannelSpec, CompositionSpec, KrausSpec,
                      NamedNoiseSpec, TargetKind, TargetMap, UnitarySpec)
from pulses import PulseSequence, PulseSpec, named_sequence
from states import BlochVector, DensityMatrix, bloch_to_density


@dataclasses.dataclass(frozen=True)
class SweepGrid:
  """Error grid; rows run over epsilon (outer) then off-resonance (inner)."""
  epsilon_min: float
  epsilon_max: float
  epsilon_steps: int
  off_resonance_min: float = 0.0
  off_resonance_max: float = 0.0
  off_resonance_steps: int = 1

  def __post_init__(self):
    for axis in ('epsilon', 'off_resonance'):
      low = getattr(self, f'{axis}_min')
      high = getattr(self, f'{axis}_max')
      steps = getattr(self, f'{axis}_steps')
      if steps < 1:
        raise errors.InvalidSpec(f'{axis} steps must be >= 1, got {steps}')
      if low > high:
        raise errors.InvalidSpec(f'{axis} range has min {low} > max {high}')
      if low < -1.0 or high > 1.0:
        raise errors.InvalidSpec(
            f'{axis} range [{low}, {high}] leaves [-1, 1]')

  def points(self) -> list[tuple[float, float]]:
    epsilons = np.linspace(self.epsilon_min, self.epsilon_max,
                           self.epsilon_steps)
    offsets = np.linspace(self.off_resonance_min, self.off_resonance_max,
                          self.off_resonance_steps)
    return [(float(e), float(f)) for e in epsilons for f in offsets]


@dataclasses.dataclass(frozen=True)
class EstimatorBlock:
  name: str | None = None
  n_theta: int | None = None
  n_phi: int | None = None
  samples: int | None = None
  seed: int | None = None


@dataclasses.dataclass(frozen=True, eq=False)
class InputDocument:
  target: TargetMap | None = None
  channel: ChannelSpec | None = None
  sequence: PulseSequence | None = None
  sweep: SweepGrid | None = None
  start: DensityMatrix | None = None
  goal: DensityMatrix | None = None
  estimator: EstimatorBlock = EstimatorBlock()


_ESTIMATOR_RANGES = {
    'n_theta': (2, math.inf),
    'n_phi': (4, math.inf),
    'samples': (1, math.inf),
    'seed': (0, 2**64),
}

_SECTIONS = ('target', 'channel', 'sequence', 'sweep', 'start', 'goal',
             'estimator')


def _line_of(text: str, key: str) -> int | None:
  match = re.search(rf'"{re.escape(key)}"\s*:', text)
  if match is None:
    return None
  return text.count('\n', 0, match.start()) + 1


class _Parser:
  """Walks the decoded document, tracking field paths for diagnostics."""

  def __init__(self, text: str):
    self._text = text
    self._section = ''

  def fail(self, message: str, field: str):
    raise errors.InputError(message,
                            field=field,
                            line=_line_of(self._text, self._section))

  @contextlib.contextmanager
  def values_at(self, field: str):
    """Reports an out-of-range value raised inside the block at `field`."""
    try:
      yield
    except errors.InvalidSpec as e:
      self.fail(str(e), field)

  def mapping(self, value: Any, field: str) -> dict:
    if not isinstance(value, dict):
      self.fail('expected an object', field)
    return value

  def require(self, obj: dict, key: str, field: str) -> Any:
    if key not in obj:
      self.fail(f'missing required field {key!r}', field)
    return obj[key]

  def number(self, value: Any, field: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
      self.fail(f'expected a number, got {value!r}', field)
    if not math.isfinite(value):
      self.fail('number must be finite', field)
    return float(value)

  def integer(self, value: Any, field: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
      self.fail(f'expected an integer, got {value!r}', field)
    return value

  def vector(self, value: Any, length: int, field: str) -> np.ndarray:
    if not isinstance(value, list) or len(value) != length:
      self.fail(f'expected a list of {length} numbers', field)
    return np.array(
        [self.number(v, f'{field}[{i}]') for i, v in enumerate(value)])

  def complex_entry(self, value: Any, field: str) -> complex:
    if isinstance(value, list):
      if len(value) != 2:
        self.fail('expected a [re, im] pair', field)
      return complex(self.number(value[0], f'{field}[0]'),
                     self.number(value[1], f'{field}[1]'))
    return complex(self.number(value, field))

  def complex_matrix(self, value: Any, field: str) -> np.ndarray:
    if not isinstance(value, list) or len(value) != 2:
      self.fail('expected a 2x2 matrix of [re, im] pairs', field)
    rows = []
    for i, row in enumerate(value):
      if not isinstance(row, list) or len(row) != 2:
        self.fail('expected a row of two entries', f'{field}[{i}]')
      rows.append([
          self.complex_entry(entry, f'{field}[{i}][{j}]')
          for j, entry in enumerate(row)
      ])
    return np.array(rows, dtype=complex)

  def real_matrix(self, value: Any, field: str) -> np.ndarray:
    if not isinstance(value, list) or len(value) != 3:
      self.fail('expected a 3x3 matrix', field)
    return np.array(
        [self.vector(row, 3, f'{field}[{i}]') for i, row in enumerate(value)])

  def angle(self, obj: dict, key: str, field: str,
            default: float | None = None) -> float:
    """Reads `key` in radians or `key`_deg in degrees."""
    if key in obj:
      return self.number(obj[key], f'{field}.{key}')
    if f'{key}_deg' in obj:
      return math.radians(self.number(obj[f'{key}_deg'], f'{field}.{key}_deg'))
    if default is None:
      self.fail(f'missing required field {key!r} (or {key}_deg)', field)
    return default

  def target(self, value: Any) -> TargetMap:
    obj = self.mapping(value, 'target')
    kind_name = obj.get('kind', 'unitary')
    try:
      kind = TargetKind(kind_name)
    except ValueError:
      self.fail(f'kind must be "unitary" or "anti_unitary", got {kind_name!r}',
                'target.kind')
    if 'matrix' in obj:
      return TargetMap(self.complex_matrix(obj['matrix'], 'target.matrix'),
                       kind)
    if 'axis' in obj:
      axis = self.vector(obj['axis'], 3, 'target.axis')
      if not np.any(axis):
        self.fail('axis must be nonzero', 'target.axis')
      return TargetMap.from_axis_angle(axis, self.angle(obj, 'angle', 'target'),
                                       kind)
    self.fail('expected either "matrix" or "axis" and "angle"', 'target')

  def channel(self, value: Any, field: str = 'channel') -> ChannelSpec:
    obj = self.mapping(value, field)
    kind = self.require(obj, 'type', field)
    match kind:
      case 'unitary':
        axis = self.vector(self.require(obj, 'axis', field), 3, f'{field}.axis')
        if not np.any(axis):
          self.fail('axis must be nonzero', f'{field}.axis')
        return UnitarySpec(tuple(axis), self.angle(obj, 'angle', field))
      case 'named':
        name = self.require(obj, 'name', field)
        if not isinstance(name, str):
          self.fail('expected a string', f'{field}.name')
        parameter = self.number(obj.get('parameter', 0.0), f'{field}.parameter')
        return NamedNoiseSpec(name, parameter)
      case 'kraus':
        matrices = self.require(obj, 'operators', field)
        if not isinstance(matrices, list) or not matrices:
          self.fail('expected a nonempty list of matrices',
                    f'{field}.operators')
        return KrausSpec(
            tuple(
                self.complex_matrix(m, f'{field}.operators[{i}]')
                for i, m in enumerate(matrices)))
      case 'affine':
        return AffineSpec(
            self.real_matrix(self.require(obj, 'a', field), f'{field}.a'),
            self.vector(obj.get('t', [0.0, 0.0, 0.0]), 3, f'{field}.t'))
      case 'composition':
        parts = self.require(obj, 'parts', field)
        if not isinstance(parts, list) or not parts:
          self.fail('expected a nonempty list of channels', f'{field}.parts')
        return CompositionSpec(
            tuple(
                self.channel(p, f'{field}.parts[{i}]')
                for i, p in enumerate(parts)))
    self.fail(
        f'unknown channel type {kind!r}; expected unitary, named, kraus, '
        'affine or composition', f'{field}.type')

  def sequence(self, value: Any) -> PulseSequence:
    obj = self.mapping(value, 'sequence')
    if 'preset' in obj:
      if not isinstance(obj['preset'], str):
        self.fail('expected a string', 'sequence.preset')
      with self.values_at('sequence.preset'):
        return named_sequence(obj['preset'])
    pulses = self.require(obj, 'pulses', 'sequence')
    if not isinstance(pulses, list) or not pulses:
      self.fail('expected a nonempty list of pulses', 'sequence.pulses')
    specs = []
    for i, pulse in enumerate(pulses):
      field = f'sequence.pulses[{i}]'
      pulse = self.mapping(pulse, field)
      angle = self.angle(pulse, 'angle', field)
      phase = self.angle(pulse, 'phase', field, default=0.0)
      with self.values_at(field):
        specs.append(PulseSpec(angle, phase))
    return PulseSequence(tuple(specs), str(obj.get('label', '')))

  def _range(self, obj: dict, key: str) -> tuple[float, float, int]:
    field = f'sweep.{key}'
    block = self.mapping(self.require(obj, key, 'sweep'), field)
    return (self.number(self.require(block, 'min', field), f'{field}.min'),
            self.number(self.require(block, 'max', field), f'{field}.max'),
            self.integer(self.require(block, 'steps', field), f'{field}.steps'))

  def sweep(self, value: Any) -> SweepGrid:
    obj = self.mapping(value, 'sweep')
    epsilon = self._range(obj, 'epsilon')
    if 'off_resonance' in obj:
      off_resonance = self._range(obj, 'off_resonance')
    else:
      off_resonance = (0.0, 0.0, 1)
    with self.values_at('sweep'):
      return SweepGrid(*epsilon, *off_resonance)

  def bloch_state(self, value: Any, field: str) -> DensityMatrix:
    return bloch_to_density(
        BlochVector.from_array(self.vector(value, 3, field)))

  def estimator(self, value: Any) -> EstimatorBlock:
    obj = self.mapping(value, 'estimator')
    fields = {}
    if 'name' in obj:
      if not isinstance(obj['name'], str):
        self.fail('expected a string', 'estimator.name')
      fields['name'] = obj['name']
    for key, (low, high) in _ESTIMATOR_RANGES.items():
      if key in obj:
        field = f'estimator.{key}'
        value = self.integer(obj[key], field)
        if not low <= value < high:
          self.fail(f'{key} must lie in [{low}, {high}), got {value}', field)
        fields[key] = value
    return EstimatorBlock(**fields)

  def document(self, data: Any) -> InputDocument:
    data = self.mapping(data, '<root>')
    unknown = sorted(set(data) - set(_SECTIONS))
    if unknown:
      self.fail(f'unknown top-level fields {unknown}', '<root>')
    fields = {}
    for section in _SECTIONS:
      if section not in data:
        continue
      self._section = section
      value = data[section]
      match section:
        case 'start' | 'goal':
          fields[section] = self.bloch_state(value, section)
        case _:
          fields[section] = getattr(self, section)(value)
    return InputDocument(**fields)


def parse_document(text: str) -> InputDocument:
  """Parses an input document from JSON text.

  Raises:
    errors.InputError: On malformed JSON or a structurally invalid field.
  """
  try:
    data = json.loads(text)
  except json.JSONDecodeError as e:
    raise errors.InputError(f'{e.msg} (column {e.colno})', line=e.lineno) from e
  return _Parser(text).document(data)


def load_document(path: str | Path) -> InputDocument:
  try:
    text = Path(path).read_text(encoding='utf-8')
  except OSError as e:
    raise errors.InputError(f'cannot read input: {e.strerror}',
                            field=str(path)) from e
  return parse_document(text)
