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
"""Composite NMR rotation sequences under systematic errors.

A pulse of nominal angle theta and phase phi rotates about (cos phi, sin phi,
0). The error model scales every angle by (1 + eps) and tilts every axis to
(cos phi, sin phi, f) / sqrt(1 + f^2) with angle theta (1 + eps) sqrt(1 + f^2),
where f is the off-resonance fraction. Pulses are listed in the order they are
applied, so the sequence unitary is U_n ... U_1.

Three figures of merit are reported for a realized sequence: the average map
fidelity (measurable with six probe states), the quaternion fidelity |q_u .
q_v| (the adopted convention for Levitt's measure) and the point-to-point
fidelity between fixed start and goal states.
"""

import dataclasses
import functools
import logging
import math
from typing import Iterable

import numpy as np

import errors
from channels import TargetMap, unitary_channel
from fidelity import FidelityValue, average_fidelity_six_state
from linalg_core import PAULI_I, as_mat2, quaternion_from_su2, rotation_unitary
from states import DensityMatrix

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class PulseSpec:
  nominal_angle: float
  phase: float = 0.0

  def __post_init__(self):
    if not (math.isfinite(self.nominal_angle) and math.isfinite(self.phase)):
      raise errors.InvalidSpec('pulse angle and phase must be finite')
    if self.nominal_angle < 0:
      raise errors.InvalidSpec(
          f'pulse angle must be >= 0, got {self.nominal_angle!r}')


@dataclasses.dataclass(frozen=True)
class PulseSequence:
  pulses: tuple[PulseSpec, ...]
  label: str = ''

  def __post_init__(self):
    if not self.pulses:
      raise errors.InvalidSpec('a pulse sequence needs at least one pulse')
    object.__setattr__(self, 'pulses', tuple(self.pulses))


@dataclasses.dataclass(frozen=True)
class ErrorModel:
  """Pulse length error eps and off-resonance fraction f, both in [-1, 1]."""
  pulse_length_fraction: float = 0.0
  off_resonance_fraction: float = 0.0

  def __post_init__(self):
    for name in ('pulse_length_fraction', 'off_resonance_fraction'):
      value = getattr(self, name)
      if not (math.isfinite(value) and abs(value) <= 1.0):
        raise errors.InvalidSpec(f'{name} must lie in [-1, 1], got {value!r}')


@dataclasses.dataclass(frozen=True, eq=False)
class SequenceReport:
  realized_unitary: np.ndarray
  average_fidelity: FidelityValue
  quaternion_fidelity: float
  point_to_point: FidelityValue


def plain_180x() -> PulseSequence:
  return PulseSequence((PulseSpec(math.pi, 0.0),), 'plain_180x')


def composite_90x_180y_90x() -> PulseSequence:
  return PulseSequence((
      PulseSpec(math.pi / 2, 0.0),
      PulseSpec(math.pi, math.pi / 2),
      PulseSpec(math.pi / 2, 0.0),
  ), 'composite_90x_180y_90x')


PRESETS = {
    'plain_180x': plain_180x,
    'composite_90x_180y_90x': composite_90x_180y_90x,
}


def named_sequence(name: str) -> PulseSequence:
  if name not in PRESETS:
    raise errors.InvalidSpec(
        f'unknown sequence preset {name!r}; expected one of {sorted(PRESETS)}')
  return PRESETS[name]()


def pulse_unitary(p: PulseSpec, e: ErrorModel = ErrorModel()) -> np.ndarray:
  f = e.off_resonance_fraction
  axis = (math.cos(p.phase), math.sin(p.phase), f)
  angle = p.nominal_angle * (1.0 + e.pulse_length_fraction) * math.hypot(1.0, f)
  return rotation_unitary(axis, angle)


def sequence_unitary(s: PulseSequence,
                     e: ErrorModel = ErrorModel()) -> np.ndarray:
  """Net unitary U_n ... U_1 of the pulses in chronological order."""
  return functools.reduce(lambda acc, p: pulse_unitary(p, e) @ acc, s.pulses,
                          PAULI_I)


def quaternion_fidelity(u, v) -> float:
  """|q_u . q_v|, one when the rotations coincide up to global phase.

  Raises:
    errors.NotUnitary: If either input is not unitary.
  """
  dot = quaternion_from_su2(u).dot(quaternion_from_su2(v))
  return min(1.0, abs(dot))


def _transfer(v: np.ndarray, start: DensityMatrix,
              goal: DensityMatrix) -> FidelityValue:
  return FidelityValue(np.trace(goal.m @ v @ start.m @ v.conj().T).real)


def _require_pure_endpoints(start: DensityMatrix, target: DensityMatrix) -> None:
  for name, state in (('start', start), ('target', target)):
    if not state.is_pure():
      raise errors.NotPure(f'{name} state has purity {state.purity()!r}')


def point_to_point_fidelity(s: PulseSequence, e: ErrorModel,
                            start: DensityMatrix,
                            target: DensityMatrix) -> FidelityValue:
  """Tr(target V start V^+) for the realized sequence unitary V.

  Raises:
    errors.NotPure: If `start` or `target` is not pure.
  """
  _require_pure_endpoints(start, target)
  return _transfer(sequence_unitary(s, e), start, target)


def sequence_report(s: PulseSequence, e: ErrorModel, ideal_target: TargetMap,
                    start: DensityMatrix,
                    target: DensityMatrix) -> SequenceReport:
  """All three figures of merit from one realized unitary."""
  if ideal_target.is_anti_unitary:
    raise errors.InvalidSpec('the ideal target of a pulse sequence is unitary')
  _require_pure_endpoints(start, target)
  realized = as_mat2(sequence_unitary(s, e))
  return SequenceReport(
      realized_unitary=realized,
      average_fidelity=average_fidelity_six_state(ideal_target,
                                                  unitary_channel(realized)),
      quaternion_fidelity=quaternion_fidelity(ideal_target.u, realized),
      point_to_point=_transfer(realized, start, target),
  )


def sweep_rows(s: PulseSequence, points: Iterable[tuple[float, float]],
               ideal_target: TargetMap, start: DensityMatrix,
               target: DensityMatrix) -> list[tuple[float, ...]]:
  """Rows (eps, f, avg, quaternion, point_to_point) in the order of `points`."""
  rows = []
  for epsilon, off_resonance in points:
    report = sequence_report(s, ErrorModel(epsilon, off_resonance),
                             ideal_target, start, target)
    rows.append((epsilon, off_resonance, report.average_fidelity.value,
                 report.quaternion_fidelity, report.point_to_point.value))
  logger.info(f'Swept {s.label or "sequence"} over {len(rows)} grid points.')
  return rows
