"""Tests for density matrices, Bloch vectors and probe sets.
"""

import math
import unittest

import numpy as np

import errors
from linalg_core import PAULI_I, UnitQuaternion
from states import (BlochVector, DensityMatrix, ProbeSet, bloch_to_density,
                    cardinal_probe_set, density_to_bloch, maximally_mixed,
                    pure_state, rotated_octahedron_probe_set,
                    rotated_tetrahedron_probe_set, tetrahedron_probe_set)


class TestBlochVector(unittest.TestCase):
  """Bloch vector validation and conversion."""

  def test_rejects_long_vector(self):
    with self.assertRaises(errors.BlochVectorTooLong):
      BlochVector(0.8, 0.8, 0.0)

  def test_rejects_nan(self):
    with self.assertRaises(errors.NonFiniteValue):
      BlochVector(math.nan, 0.0, 0.0)

  def test_unit_vector_is_pure(self):
    self.assertTrue(BlochVector(0.6, 0.0, 0.8).is_pure())
    self.assertFalse(BlochVector(0.6, 0.0, 0.0).is_pure())

  def test_density_round_trip(self):
    v = BlochVector(0.1, -0.2, 0.3)
    rho = bloch_to_density(v)
    np.testing.assert_allclose(density_to_bloch(rho).as_array(), v.as_array(),
                               atol=1e-15)

  def test_plus_z_is_ket_zero(self):
    rho = bloch_to_density(BlochVector(0.0, 0.0, 1.0))
    np.testing.assert_array_equal(rho.m, [[1, 0], [0, 0]])


class TestDensityMatrix(unittest.TestCase):
  """Density matrix invariants."""

  def test_maximally_mixed(self):
    rho = maximally_mixed()
    np.testing.assert_array_equal(rho.m, 0.5 * PAULI_I)
    self.assertAlmostEqual(rho.purity(), 0.5)
    self.assertFalse(rho.is_pure())

  def test_pure_state_angles(self):
    rho = pure_state(math.pi / 2, math.pi / 2)
    np.testing.assert_allclose(density_to_bloch(rho).as_array(), [0, 1, 0],
                               atol=1e-15)
    self.assertTrue(rho.is_pure())

  def test_rejects_bad_trace(self):
    with self.assertRaises(errors.InvalidState):
      DensityMatrix(PAULI_I)

  def test_rejects_non_hermitian(self):
    with self.assertRaises(errors.InvalidState):
      DensityMatrix([[0.5, 0.5], [0.0, 0.5]])

  def test_rejects_negative_eigenvalue(self):
    with self.assertRaises(errors.InvalidState):
      DensityMatrix([[1.2, 0.0], [0.0, -0.2]])

  def test_matrix_is_read_only(self):
    rho = maximally_mixed()
    with self.assertRaises(ValueError):
      rho.m[0, 0] = 1.0


class TestProbeSets(unittest.TestCase):
  """Regular probe sets average to the maximally mixed state."""

  def assert_regular(self, probes: ProbeSet, size: int):
    self.assertEqual(len(probes), size)
    self.assertAlmostEqual(math.fsum(probes.weights), 1.0, places=15)
    np.testing.assert_allclose(probes.mean_state(), 0.5 * PAULI_I, atol=1e-15)
    np.testing.assert_allclose(np.linalg.norm(probes.bloch_vectors(), axis=1),
                               np.ones(size),
                               atol=1e-15)

  def test_cardinal_order(self):
    probes = cardinal_probe_set()
    self.assert_regular(probes, 6)
    np.testing.assert_allclose(probes.bloch_vectors(), [
        [1, 0, 0],
        [-1, 0, 0],
        [0, 1, 0],
        [0, -1, 0],
        [0, 0, 1],
        [0, 0, -1],
    ],
                               atol=1e-15)

  def test_tetrahedron(self):
    probes = tetrahedron_probe_set()
    self.assert_regular(probes, 4)
    vectors = probes.bloch_vectors()
    np.testing.assert_allclose(vectors[0], np.ones(3) / math.sqrt(3.0),
                               atol=1e-15)
    # Distinct vertices of a regular tetrahedron meet at cos = -1/3.
    gram = vectors @ vectors.T
    off_diagonal = gram[~np.eye(4, dtype=bool)]
    np.testing.assert_allclose(off_diagonal, -1.0 / 3.0, atol=1e-15)

  def test_rotated_sets_stay_regular(self):
    q = UnitQuaternion.from_axis_angle([1, -1, 2], 0.4)
    self.assert_regular(rotated_octahedron_probe_set(q), 6)
    self.assert_regular(rotated_tetrahedron_probe_set(q), 4)

  def test_identity_rotation_gives_cardinal_set(self):
    rotated = rotated_octahedron_probe_set(UnitQuaternion.identity())
    np.testing.assert_allclose(rotated.bloch_vectors(),
                               cardinal_probe_set().bloch_vectors(),
                               atol=1e-15)

  def test_rejects_mixed_state(self):
    with self.assertRaises(errors.InvalidProbeSet):
      ProbeSet((maximally_mixed(),), (1.0,), 'mixed')

  def test_rejects_bad_weights(self):
    state = pure_state(0.0, 0.0)
    with self.assertRaises(errors.InvalidProbeSet):
      ProbeSet((state, state), (0.7, 0.7), 'heavy')
    with self.assertRaises(errors.InvalidProbeSet):
      ProbeSet((state,), (0.5, 0.5), 'mismatched')


if __name__ == '__main__':
  unittest.main()
