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
"""Qubit states and probe-state sets.

A state is held either as a Bloch vector (x, y, z) or as the density matrix
rho = (I + x sx + y sy + z sz) / 2. Probe sets are the weighted lists of pure
states whose average fidelity equals the Haar average: the six cardinal
states, the four tetrahedral states and rotated copies of either.
"""

import dataclasses
import math

import numpy as np

import errors
from linalg_core import PAULI_I, PAULIS, UnitQuaternion, herm2_eigenvalues

BLOCH_TOL = 1e-10
STATE_TOL = 1e-10
PURITY_TOL = 1e-10


@dataclasses.dataclass(frozen=True)
class BlochVector:
  x: float
  y: float
  z: float

  def __post_init__(self):
    if not all(math.isfinite(c) for c in (self.x, self.y, self.z)):
      raise errors.NonFiniteValue('Bloch vector is not finite')
    if self.norm() > 1.0 + BLOCH_TOL:
      raise errors.BlochVectorTooLong(
          f'Bloch vector {self.as_array()} has length {self.norm()!r}')

  @classmethod
  def from_array(cls, v) -> 'BlochVector':
    x, y, z = (float(c) for c in v)
    return cls(x, y, z)

  def as_array(self) -> np.ndarray:
    return np.array([self.x, self.y, self.z])

  def norm(self) -> float:
    return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

  def is_pure(self) -> bool:
    return abs(self.norm() - 1.0) <= BLOCH_TOL


@dataclasses.dataclass(frozen=True, eq=False)
class DensityMatrix:
  """A validated qubit density matrix.

  Hermitian, unit trace and eigenvalues >= -1e-10, all within 1e-10.
  """
  m: np.ndarray

  def __post_init__(self):
    arr = np.array(self.m, dtype=complex)
    if arr.shape != (2, 2) or not np.all(np.isfinite(arr)):
      raise errors.InvalidState(f'not a finite 2x2 matrix: {arr!r}')
    if np.max(np.abs(arr - arr.conj().T)) > STATE_TOL:
      raise errors.InvalidState('density matrix is not Hermitian')
    trace = arr[0, 0] + arr[1, 1]
    if abs(trace - 1.0) > STATE_TOL:
      raise errors.InvalidState(f'density matrix has trace {trace!r}')
    low = herm2_eigenvalues(arr)[1]
    if low < -STATE_TOL:
      raise errors.InvalidState(f'density matrix has eigenvalue {low!r}')
    arr.setflags(write=False)
    object.__setattr__(self, 'm', arr)

  def purity(self) -> float:
    return float(np.real(np.trace(self.m @ self.m)))

  def is_pure(self) -> bool:
    return abs(self.purity() - 1.0) <= PURITY_TOL

  def allclose(self, other: 'DensityMatrix', atol: float = 1e-12) -> bool:
    return bool(np.allclose(self.m, other.m, rtol=0.0, atol=atol))


def _bloch_matrix(x: float, y: float, z: float) -> np.ndarray:
  return 0.5 * (PAULI_I + x * PAULIS[0] + y * PAULIS[1] + z * PAULIS[2])


def maximally_mixed() -> DensityMatrix:
  return DensityMatrix(0.5 * PAULI_I)


def pure_state(theta: float, phi: float) -> DensityMatrix:
  """Pure state at polar angle theta and azimuth phi on the Bloch sphere."""
  return DensityMatrix(
      _bloch_matrix(
          math.sin(theta) * math.cos(phi),
          math.sin(theta) * math.sin(phi), math.cos(theta)))


def bloch_to_density(v: BlochVector) -> DensityMatrix:
  return DensityMatrix(_bloch_matrix(v.x, v.y, v.z))


def density_to_bloch(rho: DensityMatrix) -> BlochVector:
  """Returns (Tr(rho sx), Tr(rho sy), Tr(rho sz))."""
  return BlochVector.from_array(
      [np.real(np.trace(rho.m @ sigma)) for sigma in PAULIS])


@dataclasses.dataclass(frozen=True, eq=False)
class ProbeSet:
  """Weighted pure states whose average fidelity equals the Haar average."""
  states: tuple[DensityMatrix, ...]
  weights: tuple[float, ...]
  label: str

  def __post_init__(self):
    if len(self.states) != len(self.weights) or not self.states:
      raise errors.InvalidProbeSet(
          f'{self.label}: {len(self.states)} states but '
          f'{len(self.weights)} weights')
    if any(w <= 0 for w in self.weights):
      raise errors.InvalidProbeSet(f'{self.label}: weights must be positive')
    if abs(math.fsum(self.weights) - 1.0) > 1e-12:
      raise errors.InvalidProbeSet(f'{self.label}: weights do not sum to 1')
    if not all(state.is_pure() for state in self.states):
      raise errors.InvalidProbeSet(f'{self.label}: all states must be pure')

  def __len__(self) -> int:
    return len(self.states)

  def bloch_vectors(self) -> np.ndarray:
    return np.array([density_to_bloch(s).as_array() for s in self.states])

  def mean_state(self) -> np.ndarray:
    """Sum of w_k rho_k; I/2 for every regular probe set."""
    return sum(w * s.m for w, s in zip(self.weights, self.states))


_CARDINAL_AXES = (
    (1.0, 0.0, 0.0),
    (-1.0, 0.0, 0.0),
    (0.0, 1.0, 0.0),
    (0.0, -1.0, 0.0),
    (0.0, 0.0, 1.0),
    (0.0, 0.0, -1.0),
)

# Sign patterns in the order (+++), (--+), (-+-), (+--).
_TETRAHEDRON_SIGNS = (
    (1.0, 1.0, 1.0),
    (-1.0, -1.0, 1.0),
    (-1.0, 1.0, -1.0),
    (1.0, -1.0, -1.0),
)


def _probe_set(vectors, label: str) -> ProbeSet:
  states = tuple(
      bloch_to_density(BlochVector.from_array(v)) for v in vectors)
  weight = 1.0 / len(states)
  return ProbeSet(states, (weight,) * len(states), label)


def cardinal_probe_set() -> ProbeSet:
  """The six axial states +x, -x, +y, -y, +z, -z, each with weight 1/6."""
  return _probe_set(_CARDINAL_AXES, 'cardinal')


def tetrahedron_probe_set() -> ProbeSet:
  scale = 1.0 / math.sqrt(3.0)
  return _probe_set([np.array(s) * scale for s in _TETRAHEDRON_SIGNS],
                    'tetrahedron')


def rotated_octahedron_probe_set(q: UnitQuaternion) -> ProbeSet:
  """Cardinal set with every Bloch vector rotated by `q`."""
  rotation = q.rotation_matrix()
  return _probe_set([rotation @ np.array(v) for v in _CARDINAL_AXES],
                    'rotated_octahedron')


def rotated_tetrahedron_probe_set(q: UnitQuaternion) -> ProbeSet:
  rotation = q.rotation_matrix()
  scale = 1.0 / math.sqrt(3.0)
  return _probe_set(
      [rotation @ (np.array(s) * scale) for s in _TETRAHEDRON_SIGNS],
      'rotated_tetrahedron')
