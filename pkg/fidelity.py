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
"""State fidelities and average map fidelity estimators.

The average fidelity of a map M against a unitary or anti-unitary target U is
the mean over Haar-uniform pure inputs psi of Tr(U psi U^+ M[psi]). Because
the integrand is a degree-2 polynomial in the Bloch coordinates it can be
evaluated exactly in several ways, and every one of them is implemented here
so they can be checked against each other:

  six_state          mean over the six cardinal states (the reference)
  pauli              1/2 + 1/3 sum_j Tr(U s_j/2 U^+ M[s_j/2])
  three_state_plus   1/2 + 1/3 sum_j (F(rho_j) - Tr(U rho_j U^+ M[rho_0]))
  three_state_minus  the same with rho_{-j}
  tetrahedron        mean over the four tetrahedral states
  octahedron         mean over a rotated set of six axial states
  quadrature         Gauss-Legendre in cos(theta), uniform in phi
  monte_carlo        seeded Haar sampling, with a standard error

Only trace preservation of M is assumed, never complete positivity.
"""

import dataclasses
import logging
import math

import numpy as np

import errors
from channels import LinearMap, TargetMap
from linalg_core import (PAULI_I, PAULIS, UnitQuaternion,
                         herm2_determinant, herm2_sqrt)
from states import (DensityMatrix, ProbeSet, cardinal_probe_set,
                    rotated_octahedron_probe_set, tetrahedron_probe_set)

logger = logging.getLogger(__name__)

RANGE_TOL = 1e-12
TP_TOL = 1e-9
UHLMANN_AGREEMENT_TOL = 1e-9
MONTE_CARLO_CHUNK = 1 << 16
ROUNDING_SPREAD = 16 * np.finfo(float).eps

DEFAULT_OCTAHEDRON_ROTATION = UnitQuaternion.from_axis_angle((1.0, 2.0, 3.0),
                                                             0.7)

_RHO_0 = 0.5 * PAULI_I


@dataclasses.dataclass(frozen=True)
class FidelityValue:
  """A fidelity, clamped to [0, 1] on output but kept raw for comparisons."""
  raw: float

  def __post_init__(self):
    raw = float(self.raw)
    if not math.isfinite(raw):
      raise errors.NonFiniteValue(f'fidelity {raw!r} is not finite')
    if not -RANGE_TOL <= raw <= 1.0 + RANGE_TOL:
      logger.debug(f'Fidelity {raw!r} lies outside [0, 1]; clamping.')
    object.__setattr__(self, 'raw', raw)

  @property
  def value(self) -> float:
    return min(1.0, max(0.0, self.raw))

  def __float__(self) -> float:
    return self.value


@dataclasses.dataclass(frozen=True)
class QuadratureSpec:
  n_theta: int = 2
  n_phi: int = 4

  def __post_init__(self):
    if self.n_theta < 2 or self.n_phi < 4:
      raise errors.InvalidSpec(
          f'quadrature needs n_theta >= 2 and n_phi >= 4, got '
          f'({self.n_theta}, {self.n_phi})')


@dataclasses.dataclass(frozen=True)
class MonteCarloSpec:
  samples: int = 100_000
  seed: int = 0

  def __post_init__(self):
    if self.samples < 1:
      raise errors.InvalidSpec(f'samples must be >= 1, got {self.samples}')
    if not 0 <= self.seed < 2**64:
      raise errors.InvalidSpec(
          f'seed must be a 64-bit unsigned integer, got {self.seed}')


@dataclasses.dataclass(frozen=True)
class MonteCarloEstimate:
  fidelity: FidelityValue
  standard_error: float


def _as_state(rho) -> DensityMatrix:
  return rho if isinstance(rho, DensityMatrix) else DensityMatrix(rho)


def _require_pure(psi: DensityMatrix) -> None:
  if not psi.is_pure():
    raise errors.NotPure(f'state has purity {psi.purity()!r}, expected 1')


def _overlap(t: TargetMap, m: LinearMap, ops: np.ndarray) -> np.ndarray:
  """Re Tr(U[op] M[op]) for each operator in a batch."""
  ideal = t.apply_operator(ops)
  actual = m.apply_operator(ops)
  return np.einsum('...ab,...ba->...', ideal, actual).real


def _bloch_states(x, y, z) -> np.ndarray:
  x, y, z = (np.asarray(c, dtype=float) for c in (x, y, z))
  coefficients = np.stack([x, y, z], axis=-1)
  return 0.5 * (PAULI_I + np.einsum('...j,jab->...ab', coefficients,
                                    np.stack(PAULIS)))


def uhlmann_fidelity(rho1, rho2) -> FidelityValue:
  """Uhlmann fidelity (Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)))^2.

  The returned value uses the qubit closed form
  Tr(rho1 rho2) + 2 sqrt(det rho1 det rho2); the square-root chain is
  evaluated as well and must agree within 1e-9.

  Raises:
    errors.InvalidState: If either input is not a density matrix.
  """
  rho1, rho2 = _as_state(rho1), _as_state(rho2)
  det_product = max(herm2_determinant(rho1.m), 0.0) * max(
      herm2_determinant(rho2.m), 0.0)
  closed = np.trace(rho1.m @ rho2.m).real + 2.0 * math.sqrt(det_product)
  root = herm2_sqrt(rho1.m)
  inner = root @ rho2.m @ root
  chained = np.trace(herm2_sqrt(0.5 * (inner + inner.conj().T))).real**2
  assert abs(closed - chained) <= UHLMANN_AGREEMENT_TOL, (
      f'closed form {closed!r} and square-root chain {chained!r} disagree')
  return FidelityValue(closed)


def pure_overlap_fidelity(psi: DensityMatrix, rho: DensityMatrix) -> FidelityValue:
  """Tr(psi rho), the Uhlmann fidelity when psi is pure.

  Raises:
    errors.NotPure: If `psi` is not pure within 1e-10.
  """
  psi, rho = _as_state(psi), _as_state(rho)
  _require_pure(psi)
  return FidelityValue(np.trace(psi.m @ rho.m).real)


def state_fidelity_under_map(t: TargetMap, m: LinearMap,
                             psi: DensityMatrix) -> FidelityValue:
  psi = _as_state(psi)
  _require_pure(psi)
  return FidelityValue(float(_overlap(t, m, psi.m)))


def average_fidelity_quadrature(
    t: TargetMap,
    m: LinearMap,
    q: QuadratureSpec = QuadratureSpec()) -> FidelityValue:
  """Haar average by product quadrature over the Bloch sphere.

  Gauss-Legendre nodes in u = cos(theta) times a uniform trapezoid in phi.
  The integrand is quadratic in the Bloch vector, so (2, 4) nodes are already
  exact.
  """
  u, u_weights = np.polynomial.legendre.leggauss(q.n_theta)
  phi = 2.0 * math.pi * np.arange(q.n_phi) / q.n_phi
  u_grid, phi_grid = np.meshgrid(u, phi, indexing='ij')
  sin_theta = np.sqrt(1.0 - u_grid**2)
  states = _bloch_states(sin_theta * np.cos(phi_grid),
                         sin_theta * np.sin(phi_grid), u_grid)
  values = _overlap(t, m, states)
  # The u weights sum to 2; the phi rule is a plain mean.
  return FidelityValue(float(0.5 * u_weights @ values.mean(axis=1)))


def average_fidelity_pauli(t: TargetMap, m: LinearMap) -> FidelityValue:
  """1/2 + 1/3 sum_j Tr(U (s_j/2) U^+ M[s_j/2]).

  M is extended to the traceless s_j/2 as M[rho_j] - M[rho_0].

  Raises:
    errors.NotTracePreserving: If Tr M[I/2] differs from 1 by more than 1e-9.
  """
  image_of_mixed = m.apply_operator(_RHO_0)
  trace = np.trace(image_of_mixed)
  if abs(trace - 1.0) > TP_TOL:
    raise errors.NotTracePreserving(f'Tr M[I/2] = {trace!r}, expected 1')
  total = 0.0
  for sigma in PAULIS:
    half_sigma = 0.5 * sigma
    actual = m.apply_operator(_RHO_0 + half_sigma) - image_of_mixed
    total += np.trace(t.apply_operator(half_sigma) @ actual).real
  return FidelityValue(0.5 + total / 3.0)


def cardinal_state_fidelities(t: TargetMap,
                              m: LinearMap) -> tuple[FidelityValue, ...]:
  """Fidelities of the six axial states in the order +x, -x, +y, -y, +z, -z."""
  states = np.stack([s.m for s in cardinal_probe_set().states])
  return tuple(FidelityValue(float(v)) for v in _overlap(t, m, states))


def average_fidelity_six_state(t: TargetMap, m: LinearMap) -> FidelityValue:
  return FidelityValue(
      math.fsum(f.raw for f in cardinal_state_fidelities(t, m)) / 6.0)


def average_fidelity_three_state(t: TargetMap,
                                 m: LinearMap,
                                 side: int = 1) -> FidelityValue:
  """Single-sided form using only the +j (side=1) or -j (side=-1) states.

  1/2 + 1/3 sum_j (Tr(U rho U^+ M[rho]) - Tr(U rho U^+ M[rho_0])) with
  rho = rho_{side j}. The six-state average is the mean of the two sides.
  """
  if side not in (1, -1):
    raise errors.InvalidSpec(f'side must be 1 or -1, got {side}')
  image_of_mixed = m.apply_operator(_RHO_0)
  total = 0.0
  for sigma in PAULIS:
    rho = _RHO_0 + 0.5 * side * sigma
    ideal = t.apply_operator(rho)
    total += np.trace(ideal @ (m.apply_operator(rho) - image_of_mixed)).real
  return FidelityValue(0.5 + total / 3.0)


def average_fidelity_probe_set(t: TargetMap, m: LinearMap,
                               p: ProbeSet) -> FidelityValue:
  values = _overlap(t, m, np.stack([s.m for s in p.states]))
  return FidelityValue(math.fsum(w * v for w, v in zip(p.weights, values)))


def average_fidelity_monte_carlo(t: TargetMap, m: LinearMap,
                                 s: MonteCarloSpec) -> MonteCarloEstimate:
  """Mean state fidelity over seeded Haar-random pure inputs.

  Inputs are drawn as cos(theta) ~ U[-1, 1], phi ~ U[0, 2 pi) in fixed-size
  chunks; chunk k uses the substream SeedSequence(seed, spawn_key=(k,)), so
  the result depends only on (seed, samples).
  """
  values = []
  for chunk, start in enumerate(range(0, s.samples, MONTE_CARLO_CHUNK)):
    size = min(MONTE_CARLO_CHUNK, s.samples - start)
    rng = np.random.default_rng(
        np.random.SeedSequence(s.seed, spawn_key=(chunk,)))
    u = rng.uniform(-1.0, 1.0, size)
    phi = rng.uniform(0.0, 2.0 * math.pi, size)
    sin_theta = np.sqrt(1.0 - u * u)
    states = _bloch_states(sin_theta * np.cos(phi), sin_theta * np.sin(phi), u)
    values.append(_overlap(t, m, states))
  values = np.concatenate(values)
  mean = float(np.mean(values))
  spread = float(np.std(values, ddof=1)) if s.samples > 1 else 0.0
  # Spread at the rounding level of the overlaps is no spread.
  if spread <= ROUNDING_SPREAD * float(np.max(np.abs(values))):
    spread = 0.0
  standard_error = spread / math.sqrt(s.samples)
  logger.debug(f'Monte Carlo over {s.samples} samples (seed {s.seed}): '
               f'{mean!r} +/- {standard_error!r}')
  return MonteCarloEstimate(FidelityValue(mean), standard_error)


def unitary_pair_fidelity(u, v) -> FidelityValue:
  """Average fidelity of unitary v against target u: (2 + |Tr(u^+ v)|^2) / 6."""
  overlap = abs(np.trace(np.asarray(u).conj().T @ np.asarray(v)))
  return FidelityValue((2.0 + overlap**2) / 6.0)


@dataclasses.dataclass(frozen=True)
class EstimatorResult:
  name: str
  fidelity: FidelityValue
  standard_error: float | None = None


ESTIMATORS = (
    'six_state',
    'pauli',
    'three_state_plus',
    'three_state_minus',
    'tetrahedron',
    'octahedron',
    'quadrature',
    'monte_carlo',
)


def estimate(name: str,
             t: TargetMap,
             m: LinearMap,
             *,
             quadrature: QuadratureSpec = QuadratureSpec(),
             monte_carlo: MonteCarloSpec = MonteCarloSpec(),
             octahedron_rotation: UnitQuaternion = DEFAULT_OCTAHEDRON_ROTATION
            ) -> EstimatorResult:
  """Runs one named estimator.

  Raises:
    errors.InvalidSpec: If `name` is not in ESTIMATORS.
  """
  match name:
    case 'six_state':
      value = average_fidelity_six_state(t, m)
    case 'pauli':
      value = average_fidelity_pauli(t, m)
    case 'three_state_plus':
      value = average_fidelity_three_state(t, m, 1)
    case 'three_state_minus':
      value = average_fidelity_three_state(t, m, -1)
    case 'tetrahedron':
      value = average_fidelity_probe_set(t, m, tetrahedron_probe_set())
    case 'octahedron':
      value = average_fidelity_probe_set(
          t, m, rotated_octahedron_probe_set(octahedron_rotation))
    case 'quadrature':
      value = average_fidelity_quadrature(t, m, quadrature)
    case 'monte_carlo':
      result = average_fidelity_monte_carlo(t, m, monte_carlo)
      return EstimatorResult(name, result.fidelity, result.standard_error)
    case _:
      raise errors.InvalidSpec(
          f'unknown estimator {name!r}; expected one of {ESTIMATORS}')
  return EstimatorResult(name, value)
