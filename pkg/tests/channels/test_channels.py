"""Tests for targets, Kraus and affine maps, and Choi matrices.
"""

import math
import unittest

import numpy as np

import errors
from channels import (AffineBlochMap, AffineSpec, CompositionSpec,
                      KrausChannel, KrausSpec, NamedNoiseSpec, TargetKind,
                      TargetMap, UnitarySpec, affine_representation,
                      apply_channel, apply_target, build_channel, choi_is_cp,
                      choi_matrix, compose_maps, is_completely_positive,
                      kraus_from_choi, kraus_to_affine, kraus_to_choi,
                      named_channel, transpose_map, unitary_channel)
from linalg_core import PAULI_I, PAULI_X, PAULI_Z
from random_maps import random_kraus_channel, random_unitary
from states import BlochVector, bloch_to_density, density_to_bloch


def random_operators(rng, count=5):
  return (rng.standard_normal((count, 2, 2)) +
          1j * rng.standard_normal((count, 2, 2)))


class TestTargetMap(unittest.TestCase):
  """Unitary and anti-unitary targets."""

  def test_rejects_non_unitary(self):
    with self.assertRaises(errors.NotUnitary):
      TargetMap(PAULI_I + PAULI_X)

  def test_unitary_action(self):
    t = TargetMap.from_axis_angle([1, 0, 0], math.pi)
    rho = bloch_to_density(BlochVector(0.0, 0.0, 1.0))
    np.testing.assert_allclose(
        density_to_bloch(apply_target(t, rho)).as_array(), [0, 0, -1],
        atol=1e-15)

  def test_conjugation_flips_y(self):
    t = TargetMap.conjugation()
    self.assertTrue(t.is_anti_unitary)
    rho = bloch_to_density(BlochVector(0.2, 0.5, -0.1))
    np.testing.assert_allclose(
        density_to_bloch(apply_target(t, rho)).as_array(), [0.2, -0.5, -0.1],
        atol=1e-15)
    np.testing.assert_allclose(t.affine(), np.diag([1.0, -1.0, 1.0]),
                               atol=1e-15)

  def test_anti_unitary_extends_by_transpose(self):
    rng = np.random.default_rng(3)
    u = random_unitary(rng)
    t = TargetMap(u, TargetKind.ANTI_UNITARY)
    ops = random_operators(rng)
    np.testing.assert_allclose(t.apply_operator(ops),
                               u @ np.swapaxes(ops, -1, -2) @ u.conj().T,
                               atol=1e-14)

  def test_affine_is_orthogonal(self):
    rng = np.random.default_rng(4)
    for kind, det in ((TargetKind.UNITARY, 1.0), (TargetKind.ANTI_UNITARY,
                                                  -1.0)):
      a = TargetMap(random_unitary(rng), kind).affine()
      np.testing.assert_allclose(a @ a.T, np.eye(3), atol=1e-14)
      self.assertAlmostEqual(np.linalg.det(a), det, places=13)

  def test_kind_from_string(self):
    self.assertIs(TargetMap(PAULI_I, 'anti_unitary').kind,
                  TargetKind.ANTI_UNITARY)


class TestKrausChannel(unittest.TestCase):
  """Kraus channel validation and action."""

  def test_rejects_non_trace_preserving(self):
    with self.assertRaises(errors.NotTracePreserving):
      KrausChannel((PAULI_I, PAULI_X))

  def test_rejects_too_many_operators(self):
    half = 0.5 * PAULI_I
    with self.assertRaises(errors.InvalidSpec):
      KrausChannel((half,) * 5)

  def test_rejects_empty(self):
    with self.assertRaises(errors.InvalidSpec):
      KrausChannel(())

  def test_unitary_channel(self):
    m = unitary_channel(PAULI_X)
    rho = bloch_to_density(BlochVector(0.1, 0.2, 0.3))
    np.testing.assert_allclose(
        density_to_bloch(apply_channel(m, rho)).as_array(), [0.1, -0.2, -0.3],
        atol=1e-15)


class TestNamedChannels(unittest.TestCase):
  """Bloch-picture forms of the standard noise channels."""

  def assert_affine(self, m, a, t=(0.0, 0.0, 0.0)):
    affine = kraus_to_affine(m)
    np.testing.assert_allclose(affine.a, a, atol=1e-15)
    np.testing.assert_allclose(affine.t, t, atol=1e-15)

  def test_identity(self):
    self.assert_affine(named_channel('identity'), np.eye(3))

  def test_depolarizing(self):
    self.assert_affine(named_channel('depolarizing', 0.3), 0.7 * np.eye(3))

  def test_depolarizing_zero_keeps_one_operator(self):
    self.assertEqual(len(named_channel('depolarizing', 0.0).operators), 1)

  def test_amplitude_damping(self):
    gamma = 0.36
    self.assert_affine(named_channel('amplitude_damping', gamma),
                       np.diag([0.8, 0.8, 0.64]), (0.0, 0.0, gamma))

  def test_phase_damping(self):
    self.assert_affine(named_channel('phase_damping', 0.19),
                       np.diag([0.9, 0.9, 1.0]))

  def test_flips(self):
    self.assert_affine(named_channel('bit_flip', 0.25), np.diag([1.0, 0.5,
                                                                 0.5]))
    self.assert_affine(named_channel('phase_flip', 0.25),
                       np.diag([0.5, 0.5, 1.0]))

  def test_unknown_name(self):
    with self.assertRaises(errors.UnknownChannel):
      named_channel('erasure', 0.1)

  def test_parameter_out_of_range(self):
    with self.assertRaises(errors.ParameterOutOfRange):
      named_channel('depolarizing', 1.5)
    with self.assertRaises(errors.ParameterOutOfRange):
      named_channel('bit_flip', -0.1)


class TestAffineBlochMap(unittest.TestCase):
  """Affine maps of the Bloch ball."""

  def setUp(self):
    self.rng = np.random.default_rng(11)

  def test_rejects_map_leaving_ball(self):
    with self.assertRaises(errors.MapLeavesBlochBall):
      AffineBlochMap(np.eye(3), [0.0, 0.0, 0.5])

  def test_rejects_bad_shape(self):
    with self.assertRaises(errors.InvalidSpec):
      AffineBlochMap(np.eye(2), [0.0, 0.0])

  def test_matches_kraus_on_arbitrary_operators(self):
    m = random_kraus_channel(self.rng)
    ops = random_operators(self.rng)
    np.testing.assert_allclose(affine_representation(m).apply_operator(ops),
                               m.apply_operator(ops),
                               atol=1e-14)

  def test_transpose_map(self):
    ops = random_operators(self.rng)
    np.testing.assert_allclose(transpose_map().apply_operator(ops),
                               np.swapaxes(ops, -1, -2),
                               atol=1e-15)

  def test_compose_order(self):
    rotate = affine_representation(unitary_channel(PAULI_X))
    shift = AffineBlochMap(0.5 * np.eye(3), [0.0, 0.0, 0.5])
    composed = rotate.compose(shift)
    # +z goes to -z under the rotation, then to (0, 0, 0) under the shift.
    np.testing.assert_allclose(composed.a @ [0, 0, 1] + composed.t, [0, 0, 0],
                               atol=1e-15)


class TestChoi(unittest.TestCase):
  """Choi matrices and complete positivity."""

  def setUp(self):
    self.rng = np.random.default_rng(5)

  def test_unitary_channel_is_rank_one(self):
    c = kraus_to_choi(unitary_channel(random_unitary(self.rng)))
    self.assertAlmostEqual(np.trace(c.c).real, 2.0, places=14)
    np.testing.assert_allclose(c.eigenvalues(), [2.0, 0.0, 0.0, 0.0],
                               atol=1e-12)
    self.assertTrue(choi_is_cp(c))

  def test_transpose_is_not_cp(self):
    c = choi_matrix(transpose_map())
    np.testing.assert_allclose(c.eigenvalues(), [1.0, 1.0, 1.0, -1.0],
                               atol=1e-12)
    self.assertFalse(is_completely_positive(transpose_map()))
    with self.assertRaises(errors.NotPSD):
      kraus_from_choi(c)

  def test_kraus_from_choi_reproduces_channel(self):
    for _ in range(10):
      m = random_kraus_channel(self.rng)
      rebuilt = kraus_from_choi(kraus_to_choi(m))
      ops = random_operators(self.rng)
      np.testing.assert_allclose(rebuilt.apply_operator(ops),
                                 m.apply_operator(ops),
                                 atol=1e-11)

  def test_random_kraus_channels_are_cp(self):
    for _ in range(10):
      self.assertTrue(is_completely_positive(random_kraus_channel(self.rng)))


class TestComposition(unittest.TestCase):
  """Composing maps and building them from specs."""

  def test_depolarizing_composition_reduces_operators(self):
    m = compose_maps(named_channel('depolarizing', 0.2),
                     named_channel('depolarizing', 0.5))
    self.assertIsInstance(m, KrausChannel)
    self.assertLessEqual(len(m.operators), 4)
    np.testing.assert_allclose(kraus_to_affine(m).a, 0.4 * np.eye(3),
                               atol=1e-11)

  def test_mixed_composition_is_affine(self):
    m = compose_maps(unitary_channel(PAULI_Z), transpose_map())
    self.assertIsInstance(m, AffineBlochMap)
    np.testing.assert_allclose(m.a, np.diag([-1.0, 1.0, 1.0]), atol=1e-15)

  def test_build_composition_applies_first_part_first(self):
    spec = CompositionSpec((
        UnitarySpec((1.0, 0.0, 0.0), math.pi / 2),
        NamedNoiseSpec('amplitude_damping', 1.0),
    ))
    m = build_channel(spec)
    # Full damping sends everything to +z whatever came before.
    rho = bloch_to_density(BlochVector(0.0, 0.3, 0.0))
    np.testing.assert_allclose(
        density_to_bloch(apply_channel(m, rho)).as_array(), [0, 0, 1],
        atol=1e-12)

  def test_build_composition_order_matters(self):
    first_rotate = build_channel(
        CompositionSpec((UnitarySpec((1.0, 0.0, 0.0), math.pi / 2),
                         NamedNoiseSpec('phase_damping', 0.75))))
    rho = bloch_to_density(BlochVector(0.0, 0.0, 1.0))
    # +z becomes -y, whose coherence phase damping halves.
    np.testing.assert_allclose(
        density_to_bloch(apply_channel(first_rotate, rho)).as_array(),
        [0, -0.5, 0],
        atol=1e-12)

  def test_build_kraus_and_affine_specs(self):
    self.assertIsInstance(build_channel(KrausSpec((PAULI_X,))), KrausChannel)
    self.assertIsInstance(
        build_channel(AffineSpec(np.diag([1.0, -1.0, 1.0]), np.zeros(3))),
        AffineBlochMap)

  def test_build_rejects_empty_composition(self):
    with self.assertRaises(errors.InvalidSpec):
      build_channel(CompositionSpec(()))


if __name__ == '__main__':
  unittest.main()
