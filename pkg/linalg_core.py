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
"""Small-matrix linear algebra for single-qubit work.

2x2 matrices are numpy complex arrays of shape (2, 2) marked read-only, so
they can be shared freely. Only the decompositions the rest of qfid needs are
here: a closed-form 2x2 Hermitian square root, a Jacobi eigensolver for 4x4
Hermitian (Choi) matrices and unit quaternions for SU(2).
"""

import dataclasses
import math

import numpy as np

import errors

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10
DET_CANCELLATION = 64 * np.finfo(float).eps
HERM4_TOL = 1e-12
UNITARY_TOL = 1e-10
QUATERNION_TOL = 1e-12
JACOBI_TOL = 1e-13
MAX_JACOBI_SWEEPS = 100


def _frozen(a) -> np.ndarray:
  arr = np.array(a, dtype=complex)
  arr.setflags(write=False)
  return arr


PAULI_I = _frozen([[1, 0], [0, 1]])
PAULI_X = _frozen([[0, 1], [1, 0]])
PAULI_Y = _frozen([[0, -1j], [1j, 0]])
PAULI_Z = _frozen([[1, 0], [0, -1]])
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


def as_mat2(a) -> np.ndarray:
  """Returns `a` as a read-only 2x2 complex array.

  Raises:
    ValueError: If `a` is not 2x2.
    errors.NonFiniteValue: If any entry is NaN or Inf.
  """
  arr = np.array(a, dtype=complex)
  if arr.shape != (2, 2):
    raise ValueError(f'expected a 2x2 matrix, got shape {arr.shape}')
  if not np.all(np.isfinite(arr)):
    raise errors.NonFiniteValue('matrix has non-finite entries')
  arr.setflags(write=False)
  return arr


def mat2_mul(a, b) -> np.ndarray:
  return _frozen(as_mat2(a) @ as_mat2(b))


def mat2_trace(a) -> complex:
  a = as_mat2(a)
  return complex(a[0, 0] + a[1, 1])


def mat2_dagger(a) -> np.ndarray:
  return _frozen(as_mat2(a).conj().T)


def is_unitary(u, tol: float = UNITARY_TOL) -> bool:
  u = np.asarray(u, dtype=complex)
  identity = np.eye(u.shape[0], dtype=complex)
  return bool(np.max(np.abs(u.conj().T @ u - identity)) <= tol)


def _check_hermitian(a: np.ndarray, tol: float) -> None:
  deviation = np.max(np.abs(a - a.conj().T))
  if deviation > tol:
    raise errors.NotHermitian(
        f'matrix deviates from Hermitian by {deviation:.3e} (tol {tol:.0e})')


def herm2_eigenvalues(a) -> tuple[float, float]:
  """Eigenvalues of a 2x2 Hermitian matrix, largest first.

  Uses the mean of the diagonal plus or minus the half-gap
  sqrt(((a00 - a11) / 2)^2 + |a01|^2).
  """
  a = as_mat2(a)
  _check_hermitian(a, HERMITIAN_TOL)
  mean = 0.5 * (a[0, 0].real + a[1, 1].real)
  half_gap = math.hypot(0.5 * (a[0, 0].real - a[1, 1].real), abs(a[0, 1]))
  return mean + half_gap, mean - half_gap


def herm2_determinant(a) -> float:
  """a00 a11 - |a01|^2 of a 2x2 Hermitian matrix.

  Returns exactly zero when the difference is below the rounding error of its
  two terms, as for a pure state assembled in floating point.
  """
  a = as_mat2(a)
  _check_hermitian(a, HERMITIAN_TOL)
  product = a[0, 0].real * a[1, 1].real
  coupling = abs(a[0, 1])**2
  det = product - coupling
  if abs(det) <= DET_CANCELLATION * (abs(product) + coupling):
    return 0.0
  return det


def herm2_psd_eigenvalues(a) -> tuple[float, float]:
  """Eigenvalues of a 2x2 Hermitian PSD matrix, largest first.

  The small eigenvalue is det / high, which keeps its relative accuracy when
  it is many orders below the large one. Eigenvalues in [-1e-10, 0) are
  clamped to 0.

  Raises:
    errors.NotPSD: If an eigenvalue is below -1e-10.
  """
  high, low = herm2_eigenvalues(a)
  if low < -PSD_TOL:
    raise errors.NotPSD(f'eigenvalue {low:.3e} is below -{PSD_TOL:.0e}')
  if high <= 0.0:
    return 0.0, 0.0
  return high, max(herm2_determinant(a) / high, 0.0)


def herm2_sqrt(a) -> np.ndarray:
  """Square root of a 2x2 Hermitian positive semidefinite matrix.

  For a PSD 2x2 matrix with eigenvalue square roots s1, s2 the Cayley-Hamilton
  theorem gives sqrt(a) = (a + s1 s2 I) / (s1 + s2), so no iteration is
  needed.

  Args:
    a: Hermitian matrix. Eigenvalues in [-1e-10, 0) are treated as zero.

  Returns:
    The PSD square root as a read-only array.

  Raises:
    errors.NotHermitian: If `a` is not Hermitian within 1e-10.
    errors.NotPSD: If an eigenvalue is below -1e-10.
  """
  a = as_mat2(a)
  high, low = herm2_psd_eigenvalues(a)
  root_high = math.sqrt(high)
  root_low = math.sqrt(low)
  total = root_high + root_low
  if total == 0.0:
    return _frozen(np.zeros((2, 2)))
  hermitian = 0.5 * (a + a.conj().T)
  return _frozen((hermitian + root_high * root_low * PAULI_I) / total)


def as_herm4(a) -> np.ndarray:
  arr = np.array(a, dtype=complex)
  if arr.shape != (4, 4):
    raise ValueError(f'expected a 4x4 matrix, got shape {arr.shape}')
  if not np.all(np.isfinite(arr)):
    raise errors.NonFiniteValue('matrix has non-finite entries')
  _check_hermitian(arr, HERM4_TOL)
  return 0.5 * (arr + arr.conj().T)


def _off_diagonal_norm(a: np.ndarray) -> float:
  return float(np.linalg.norm(a - np.diag(np.diag(a))))


def herm4_eigh(a) -> tuple[np.ndarray, np.ndarray]:
  """Eigen-decomposition of a 4x4 Hermitian matrix by cyclic Jacobi sweeps.

  Each (p, q) step first removes the phase of a[p, q] with a diagonal unitary
  and then applies the real Jacobi rotation that zeroes it. Sweeps stop once
  the off-diagonal Frobenius norm drops below 1e-13 (relative to the matrix
  norm when that exceeds one).

  Args:
    a: Hermitian 4x4 matrix (tolerance 1e-12).

  Returns:
    (eigenvalues, eigenvectors): real eigenvalues in descending order and the
    unitary whose columns are the matching eigenvectors.

  Raises:
    errors.NotHermitian: If `a` is not Hermitian.
    errors.NoConvergence: If 100 sweeps were not enough.
  """
  work = as_herm4(a)
  vectors = np.eye(4, dtype=complex)
  threshold = JACOBI_TOL * max(1.0, float(np.linalg.norm(work)))
  for sweep in range(MAX_JACOBI_SWEEPS + 1):
    if _off_diagonal_norm(work) < threshold:
      break
    if sweep == MAX_JACOBI_SWEEPS:
      raise errors.NoConvergence(
          f'Jacobi did not converge in {MAX_JACOBI_SWEEPS} sweeps')
    for p in range(3):
      for q in range(p + 1, 4):
        magnitude = abs(work[p, q])
        if magnitude == 0.0:
          continue
        phase = work[p, q] / magnitude
        theta = (work[q, q].real - work[p, p].real) / (2.0 * magnitude)
        t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
        c = 1.0 / math.hypot(t, 1.0)
        s = t * c
        rotation = np.eye(4, dtype=complex)
        rotation[p, p] = c
        rotation[p, q] = s
        rotation[q, p] = -s * np.conj(phase)
        rotation[q, q] = c * np.conj(phase)
        work = rotation.conj().T @ work @ rotation
        vectors = vectors @ rotation
  values = np.diag(work).real
  order = np.argsort(-values, kind='stable')
  return values[order], vectors[:, order]


def herm4_eigenvalues(a) -> np.ndarray:
  return herm4_eigh(a)[0]


def rotation_unitary(axis, angle: float) -> np.ndarray:
  """Returns exp(-i angle (n . sigma) / 2) for the unit vector n along `axis`."""
  axis = np.asarray(axis, dtype=float)
  norm = float(np.linalg.norm(axis))
  if axis.shape != (3,) or norm == 0.0:
    raise ValueError(f'rotation axis must be a nonzero 3-vector, got {axis}')
  n = axis / norm
  generator = n[0] * PAULI_X + n[1] * PAULI_Y + n[2] * PAULI_Z
  return _frozen(
      math.cos(angle / 2) * PAULI_I - 1j * math.sin(angle / 2) * generator)


@dataclasses.dataclass(frozen=True)
class UnitQuaternion:
  """Unit quaternion (w, x, y, z) for u = w I - i (x sx + y sy + z sz)."""
  w: float
  x: float
  y: float
  z: float

  def __post_init__(self):
    components = (self.w, self.x, self.y, self.z)
    if not all(math.isfinite(c) for c in components):
      raise errors.NonFiniteValue(f'quaternion {components} is not finite')
    norm_sq = sum(c * c for c in components)
    if abs(norm_sq - 1.0) > QUATERNION_TOL:
      raise errors.InvalidQuaternion(
          f'quaternion {components} has squared norm {norm_sq!r}')

  @classmethod
  def normalized(cls, w: float, x: float, y: float,
                 z: float) -> 'UnitQuaternion':
    norm = math.sqrt(w * w + x * x + y * y + z * z)
    if norm == 0.0:
      raise errors.InvalidQuaternion('cannot normalize the zero quaternion')
    return cls(w / norm, x / norm, y / norm, z / norm)

  @classmethod
  def identity(cls) -> 'UnitQuaternion':
    return cls(1.0, 0.0, 0.0, 0.0)

  @classmethod
  def from_axis_angle(cls, axis, angle: float) -> 'UnitQuaternion':
    axis = np.asarray(axis, dtype=float)
    n = axis / np.linalg.norm(axis)
    s = math.sin(angle / 2)
    return cls.normalized(math.cos(angle / 2), s * n[0], s * n[1], s * n[2])

  def as_array(self) -> np.ndarray:
    return np.array([self.w, self.x, self.y, self.z])

  def __mul__(self, other: 'UnitQuaternion') -> 'UnitQuaternion':
    # Hamilton product; matches the SU(2) product of the two matrices.
    w1, v1 = self.w, np.array([self.x, self.y, self.z])
    w2, v2 = other.w, np.array([other.x, other.y, other.z])
    w = w1 * w2 - float(v1 @ v2)
    v = w1 * v2 + w2 * v1 + np.cross(v1, v2)
    return UnitQuaternion.normalized(w, *v)

  def conjugate(self) -> 'UnitQuaternion':
    return UnitQuaternion(self.w, -self.x, -self.y, -self.z)

  def dot(self, other: 'UnitQuaternion') -> float:
    return (self.w * other.w + self.x * other.x + self.y * other.y +
            self.z * other.z)

  def to_su2(self) -> np.ndarray:
    generator = self.x * PAULI_X + self.y * PAULI_Y + self.z * PAULI_Z
    return _frozen(self.w * PAULI_I - 1j * generator)

  def rotation_matrix(self) -> np.ndarray:
    """3x3 rotation acting on Bloch vectors: u (v . sigma) u^+ = (R v) . sigma."""
    w = self.w
    v = np.array([self.x, self.y, self.z])
    cross = np.array([
        [0.0, -v[2], v[1]],
        [v[2], 0.0, -v[0]],
        [-v[1], v[0], 0.0],
    ])
    return (w * w - v @ v) * np.eye(3) + 2.0 * np.outer(v, v) + 2.0 * w * cross

  def rotate(self, vector) -> np.ndarray:
    return self.rotation_matrix() @ np.asarray(vector, dtype=float)


def quaternion_from_su2(u) -> UnitQuaternion:
  """Unit quaternion of a single-qubit unitary.

  The unitary is first divided by sqrt(det u) so that it lies in SU(2). Since
  quaternions double-cover rotations the sign is fixed: w >= 0, and when
  |w| <= 1e-12 the first nonzero of (x, y, z) is made positive.

  Raises:
    errors.NotUnitary: If u^+ u differs from I by more than 1e-10.
  """
  u = as_mat2(u)
  if not is_unitary(u):
    raise errors.NotUnitary('matrix is not unitary within 1e-10')
  u = u / np.sqrt(np.linalg.det(u))
  w = (0.5 * (u[0, 0] + u[1, 1])).real
  x = -(0.5 * (u[0, 1] + u[1, 0])).imag
  y = (0.5 * (u[1, 0] - u[0, 1])).real
  z = (0.5 * (u[1, 1] - u[0, 0])).imag
  components = [w, x, y, z]
  if abs(w) > QUATERNION_TOL:
    flip = w < 0
  else:
    components[0] = 0.0
    leading = next((c for c in components[1:] if abs(c) > QUATERNION_TOL), 0.0)
    flip = leading < 0
  if flip:
    components = [-c for c in components]
  return UnitQuaternion.normalized(*components)
