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
"""Target operations and single-qubit maps.

The target is a unitary U, or an anti-unitary written as U composed with
complex conjugation in the computational basis. The map under test is any
linear trace-preserving map, held in Kraus form or as an affine action on
Bloch vectors. Every map exposes `apply_operator`, its linear action on 2x2
operators, and that is all the fidelity code needs. Complete positivity is
checked separately through the Choi matrix and is never required.
"""

import dataclasses
import enum
import functools
import logging
import math
from typing import Callable, Protocol

import numpy as np

import errors
from linalg_core import (PAULI_I, PAULI_X, PAULI_Y, PAULI_Z, PAULIS, as_herm4,
                         as_mat2, herm4_eigh, is_unitary, rotation_unitary)
from states import DensityMatrix

logger = logging.getLogger(__name__)

TP_TOL = 1e-9
CP_TOL = 1e-9
BALL_TOL = 1e-9
MAX_KRAUS_OPERATORS = 4

_PAULI_STACK = np.stack(PAULIS)
_MATRIX_UNITS = tuple(
    np.outer(np.eye(2)[i], np.eye(2)[j]).astype(complex)
    for i in range(2)
    for j in range(2))


def _dagger(a: np.ndarray) -> np.ndarray:
  return np.swapaxes(a, -1, -2).conj()


class LinearMap(Protocol):
  """Anything with a linear action on (batches of) 2x2 operators."""

  def apply_operator(self, op: np.ndarray) -> np.ndarray:
    ...


class TargetKind(enum.Enum):
  UNITARY = 'unitary'
  ANTI_UNITARY = 'anti_unitary'


@dataclasses.dataclass(frozen=True, eq=False)
class TargetMap:
  """Ideal operation: rho -> U rho U^+, or U conj(rho) U^+ when anti-unitary."""
  u: np.ndarray
  kind: TargetKind = TargetKind.UNITARY

  def __post_init__(self):
    u = as_mat2(self.u)
    if not is_unitary(u):
      raise errors.NotUnitary('target matrix is not unitary within 1e-10')
    object.__setattr__(self, 'u', u)
    object.__setattr__(self, 'kind', TargetKind(self.kind))

  @classmethod
  def from_axis_angle(cls,
                      axis,
                      angle: float,
                      kind: TargetKind = TargetKind.UNITARY) -> 'TargetMap':
    return cls(rotation_unitary(axis, angle), kind)

  @classmethod
  def conjugation(cls) -> 'TargetMap':
    """Complex conjugation itself, the anti-unitary with U = I."""
    return cls(PAULI_I, TargetKind.ANTI_UNITARY)

  @property
  def is_anti_unitary(self) -> bool:
    return self.kind is TargetKind.ANTI_UNITARY

  def apply_operator(self, op: np.ndarray) -> np.ndarray:
    # The linear extension of conj() off the Hermitian operators is the
    # transpose.
    op = np.asarray(op, dtype=complex)
    if self.is_anti_unitary:
      op = np.swapaxes(op, -1, -2)
    return self.u @ op @ self.u.conj().T

  def affine(self) -> np.ndarray:
    """Orthogonal 3x3 action on Bloch vectors (det -1 when anti-unitary)."""
    return affine_representation(self).a


def apply_target(t: TargetMap, rho: DensityMatrix) -> DensityMatrix:
  return DensityMatrix(t.apply_operator(rho.m))


@dataclasses.dataclass(frozen=True, eq=False)
class KrausChannel:
  """Map rho -> sum_i K_i rho K_i^+ with one to four operators."""
  operators: tuple[np.ndarray, ...]

  def __post_init__(self):
    operators = tuple(as_mat2(k) for k in self.operators)
    if not 1 <= len(operators) <= MAX_KRAUS_OPERATORS:
      raise errors.InvalidSpec(
          f'a Kraus channel needs 1 to {MAX_KRAUS_OPERATORS} operators, '
          f'got {len(operators)}')
    completeness = sum(k.conj().T @ k for k in operators)
    deviation = float(np.max(np.abs(completeness - PAULI_I)))
    if deviation > TP_TOL:
      raise errors.NotTracePreserving(
          f'sum of K^+ K deviates from I by {deviation:.3e}')
    object.__setattr__(self, 'operators', operators)

  def apply_operator(self, op: np.ndarray) -> np.ndarray:
    op = np.asarray(op, dtype=complex)
    return sum(k @ op @ k.conj().T for k in self.operators)


def _sphere_samples(count: int = 256) -> np.ndarray:
  # Fibonacci lattice plus the six axes.
  index = np.arange(count) + 0.5
  z = 1.0 - 2.0 * index / count
  radius = np.sqrt(1.0 - z * z)
  azimuth = math.pi * (1.0 + math.sqrt(5.0)) * index
  lattice = np.column_stack(
      [radius * np.cos(azimuth), radius * np.sin(azimuth), z])
  axes = np.vstack([np.eye(3), -np.eye(3)])
  return np.vstack([lattice, axes])


_SPHERE_SAMPLES = _sphere_samples()


@dataclasses.dataclass(frozen=True, eq=False)
class AffineBlochMap:
  """Map acting on Bloch vectors as r -> a r + t.

  Trace preservation is built in. Containment of the unit ball is checked on
  a fixed lattice of sphere points; complete positivity is not required.
  """
  a: np.ndarray
  t: np.ndarray

  def __post_init__(self):
    a = np.array(self.a, dtype=float)
    t = np.array(self.t, dtype=float)
    if a.shape != (3, 3) or t.shape != (3,):
      raise errors.InvalidSpec(
          f'affine map needs a 3x3 matrix and a 3-vector, got {a.shape} '
          f'and {t.shape}')
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(t))):
      raise errors.NonFiniteValue('affine map has non-finite entries')
    longest = float(np.max(np.linalg.norm(_SPHERE_SAMPLES @ a.T + t, axis=1)))
    if longest > 1.0 + BALL_TOL:
      raise errors.MapLeavesBlochBall(
          f'affine map sends a pure state to Bloch length {longest!r}')
    a.setflags(write=False)
    t.setflags(write=False)
    object.__setattr__(self, 'a', a)
    object.__setattr__(self, 't', t)

  def apply_operator(self, op: np.ndarray) -> np.ndarray:
    # op = (c0 I + c . sigma) / 2 with c0 = Tr(op) and c_j = Tr(sigma_j op).
    op = np.asarray(op, dtype=complex)
    c0 = np.trace(op, axis1=-2, axis2=-1)
    c = np.einsum('jab,...ba->...j', _PAULI_STACK, op)
    image = c @ self.a.T + c0[..., np.newaxis] * self.t
    return 0.5 * (c0[..., np.newaxis, np.newaxis] * PAULI_I +
                  np.einsum('...j,jab->...ab', image, _PAULI_STACK))

  def compose(self, then: 'AffineBlochMap') -> 'AffineBlochMap':
    """The map `then` applied after this one."""
    return AffineBlochMap(then.a @ self.a, then.a @ self.t + then.t)


def apply_channel(m: LinearMap, rho: DensityMatrix) -> DensityMatrix:
  return DensityMatrix(m.apply_operator(rho.m))


def affine_representation(m: LinearMap) -> AffineBlochMap:
  """Bloch-picture form of any trace-preserving linear map.

  a_jk = Tr(s_j M[s_k]) / 2 and t_j = Tr(s_j M[I]) / 2.
  """
  images = m.apply_operator(np.stack([PAULI_I, *PAULIS]))
  coefficients = 0.5 * np.einsum('jab,kba->jk', _PAULI_STACK, images).real
  return AffineBlochMap(coefficients[:, 1:], coefficients[:, 0])


def kraus_to_affine(m: KrausChannel) -> AffineBlochMap:
  return affine_representation(m)


@dataclasses.dataclass(frozen=True, eq=False)
class ChoiMatrix:
  """Choi matrix sum_ij M[|i><j|] (x) |i><j|, normalised to trace 2."""
  c: np.ndarray

  def __post_init__(self):
    c = as_herm4(self.c)
    c.setflags(write=False)
    object.__setattr__(self, 'c', c)

  def eigenvalues(self) -> np.ndarray:
    return herm4_eigh(self.c)[0]


def choi_matrix(m: LinearMap) -> ChoiMatrix:
  return ChoiMatrix(
      sum(np.kron(m.apply_operator(unit), unit) for unit in _MATRIX_UNITS))


def kraus_to_choi(m: KrausChannel) -> ChoiMatrix:
  return choi_matrix(m)


def choi_is_cp(c: ChoiMatrix) -> bool:
  return bool(c.eigenvalues()[-1] >= -CP_TOL)


def is_completely_positive(m: LinearMap) -> bool:
  return choi_is_cp(choi_matrix(m))


def _choi_from_operators(operators) -> ChoiMatrix:
  vectors = [np.asarray(k, dtype=complex).reshape(4) for k in operators]
  return ChoiMatrix(sum(np.outer(v, v.conj()) for v in vectors))


def kraus_from_choi(c: ChoiMatrix) -> KrausChannel:
  """Canonical Kraus operators sqrt(l_k) unvec(v_k) from the Choi spectrum.

  Raises:
    errors.NotPSD: If the Choi matrix has an eigenvalue below -1e-9.
  """
  values, vectors = herm4_eigh(c.c)
  if values[-1] < -CP_TOL:
    raise errors.NotPSD(
        f'Choi matrix has eigenvalue {values[-1]!r}; the map is not CP')
  operators = tuple(
      math.sqrt(value) * vectors[:, k].reshape(2, 2)
      for k, value in enumerate(values)
      if value > 1e-12)
  return KrausChannel(operators)


def unitary_channel(v) -> KrausChannel:
  return KrausChannel((as_mat2(v),))


def transpose_map() -> AffineBlochMap:
  """rho -> rho^T: positive and trace-preserving but not CP."""
  return AffineBlochMap(np.diag([1.0, -1.0, 1.0]), np.zeros(3))


def _depolarizing(p: float) -> list[np.ndarray]:
  return [
      math.sqrt(1.0 - 0.75 * p) * PAULI_I,
      math.sqrt(p / 4) * PAULI_X,
      math.sqrt(p / 4) * PAULI_Y,
      math.sqrt(p / 4) * PAULI_Z,
  ]


def _amplitude_damping(gamma: float) -> list[np.ndarray]:
  return [
      np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - gamma)]]),
      np.array([[0.0, math.sqrt(gamma)], [0.0, 0.0]]),
  ]


def _phase_damping(lam: float) -> list[np.ndarray]:
  return [
      np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - lam)]]),
      np.array([[0.0, 0.0], [0.0, math.sqrt(lam)]]),
  ]


NAMED_CHANNELS: dict[str, Callable[[float], list[np.ndarray]]] = {
    'identity': lambda _: [PAULI_I],
    'depolarizing': _depolarizing,
    'amplitude_damping': _amplitude_damping,
    'phase_damping': _phase_damping,
    'bit_flip': lambda p: [math.sqrt(1 - p) * PAULI_I, math.sqrt(p) * PAULI_X],
    'phase_flip': lambda p: [math.sqrt(1 - p) * PAULI_I,
                             math.sqrt(p) * PAULI_Z],
}


def named_channel(name: str, parameter: float = 0.0) -> KrausChannel:
  """Standard noise channel by name.

  Operators with zero weight are dropped, so depolarizing(0) is {I}.

  Args:
    name: One of NAMED_CHANNELS.
    parameter: Noise strength in [0, 1]; ignored for 'identity'.

  Raises:
    errors.UnknownChannel: If `name` is not a known channel.
    errors.ParameterOutOfRange: If `parameter` is outside [0, 1].
  """
  if name not in NAMED_CHANNELS:
    raise errors.UnknownChannel(
        f'unknown channel {name!r}; expected one of {sorted(NAMED_CHANNELS)}')
  parameter = float(parameter)
  if not (math.isfinite(parameter) and 0.0 <= parameter <= 1.0):
    raise errors.ParameterOutOfRange(
        f'{name} parameter {parameter!r} is outside [0, 1]')
  operators = [k for k in NAMED_CHANNELS[name](parameter) if np.any(k != 0)]
  return KrausChannel(tuple(operators))


def compose_channels(first: KrausChannel, then: KrausChannel) -> KrausChannel:
  """`first` followed by `then`, with Kraus set {L_j K_i}.

  Products with more than four nonzero operators are reduced to the
  canonical Kraus form of their Choi matrix, which has rank at most four.
  """
  operators = [
      l @ k for l in then.operators for k in first.operators if np.any(l @ k)
  ]
  if len(operators) <= MAX_KRAUS_OPERATORS:
    return KrausChannel(tuple(operators))
  logger.debug(f'Reducing {len(operators)} composed Kraus operators.')
  return kraus_from_choi(_choi_from_operators(operators))


def compose_maps(first: LinearMap, then: LinearMap) -> LinearMap:
  """Composition of any two maps; Kraus stays Kraus, otherwise affine."""
  if isinstance(first, KrausChannel) and isinstance(then, KrausChannel):
    return compose_channels(first, then)
  return affine_representation(first).compose(affine_representation(then))


@dataclasses.dataclass(frozen=True)
class UnitarySpec:
  axis: tuple[float, float, float]
  angle: float


@dataclasses.dataclass(frozen=True)
class NamedNoiseSpec:
  name: str
  parameter: float = 0.0


@dataclasses.dataclass(frozen=True, eq=False)
class KrausSpec:
  matrices: tuple[np.ndarray, ...]


@dataclasses.dataclass(frozen=True, eq=False)
class AffineSpec:
  a: np.ndarray
  t: np.ndarray


@dataclasses.dataclass(frozen=True, eq=False)
class CompositionSpec:
  """Parts applied in list order, first part first."""
  parts: tuple['ChannelSpec', ...]


ChannelSpec = (UnitarySpec | NamedNoiseSpec | KrausSpec | AffineSpec |
               CompositionSpec)


def build_channel(spec: ChannelSpec) -> KrausChannel | AffineBlochMap:
  match spec:
    case UnitarySpec(axis=axis, angle=angle):
      return unitary_channel(rotation_unitary(axis, angle))
    case NamedNoiseSpec(name=name, parameter=parameter):
      return named_channel(name, parameter)
    case KrausSpec(matrices=matrices):
      return KrausChannel(tuple(matrices))
    case AffineSpec(a=a, t=t):
      return AffineBlochMap(a, t)
    case CompositionSpec(parts=parts):
      if not parts:
        raise errors.InvalidSpec('a composition needs at least one part')
      return functools.reduce(compose_maps, (build_channel(p) for p in parts))
  raise errors.InvalidSpec(f'unsupported channel spec {spec!r}')
