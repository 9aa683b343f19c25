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
"""Seeded random targets, maps and states.

Used by the `verify` command to pick a rotated octahedron and by the tests to
draw inputs for the estimator cross-checks. Every function takes a
numpy Generator so results are reproducible.
"""

import numpy as np

from channels import AffineBlochMap, KrausChannel, TargetKind, TargetMap
from linalg_core import UnitQuaternion
from states import BlochVector, DensityMatrix, bloch_to_density


def random_unitary(rng: np.random.Generator, dim: int = 2) -> np.ndarray:
  """Haar-random unitary from the QR decomposition of a Ginibre matrix."""
  z = (rng.standard_normal((dim, dim)) +
       1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
  q, r = np.linalg.qr(z)
  phases = np.diag(r) / np.abs(np.diag(r))
  return q * phases


def random_target(rng: np.random.Generator,
                  kind: TargetKind | None = None) -> TargetMap:
  """Haar-random target; the kind is a fair coin when not given."""
  if kind is None:
    kind = TargetKind.ANTI_UNITARY if rng.random() < 0.5 else TargetKind.UNITARY
  return TargetMap(random_unitary(rng), kind)


def random_kraus_channel(rng: np.random.Generator,
                         operators: int = 4) -> KrausChannel:
  """Kraus operators cut from a random 2k x 2 isometry."""
  isometry = random_unitary(rng, 2 * operators)[:, :2]
  return KrausChannel(
      tuple(isometry[2 * i:2 * i + 2, :] for i in range(operators)))


def random_affine_map(rng: np.random.Generator,
                      proper: bool | None = None) -> AffineBlochMap:
  """Random r -> s R r + t with s + |t| < 1, so the ball maps into itself.

  Improper R (det -1) gives positive maps that are generally not CP.
  """
  rotation = TargetMap(random_unitary(rng)).affine()
  if proper is None:
    proper = bool(rng.random() < 0.5)
  if not proper:
    rotation = -rotation
  scale = rng.uniform(0.0, 1.0)
  direction = rng.standard_normal(3)
  direction /= np.linalg.norm(direction)
  shift = rng.uniform(0.0, 1.0 - scale) * direction
  return AffineBlochMap(scale * rotation, shift)


def random_quaternion(rng: np.random.Generator) -> UnitQuaternion:
  return UnitQuaternion.normalized(*rng.standard_normal(4))


def random_bloch_vector(rng: np.random.Generator,
                        pure: bool = False) -> BlochVector:
  direction = rng.standard_normal(3)
  direction /= np.linalg.norm(direction)
  length = 1.0 if pure else rng.uniform(0.0, 1.0)**(1.0 / 3.0)
  return BlochVector.from_array(length * direction)


def random_density_matrix(rng: np.random.Generator,
                          pure: bool = False) -> DensityMatrix:
  return bloch_to_density(random_bloch_vector(rng, pure))
