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
"""Exceptions raised by qfid.

Everything derives from QfidError so the CLI can map failures to exit codes.
"""


class QfidError(Exception):
  """Base class for all qfid errors."""


class NonFiniteValue(QfidError):
  """A matrix or vector contained NaN or Inf."""


class NotHermitian(QfidError):
  pass


class NotPSD(QfidError):
  """A matrix has an eigenvalue below the clamp window."""


class NoConvergence(QfidError):
  """Jacobi iteration did not reach the off-diagonal threshold."""


class NotUnitary(QfidError):
  pass


class InvalidQuaternion(QfidError):
  pass


class BlochVectorTooLong(QfidError):
  pass


class InvalidState(QfidError):
  """The matrix is not a valid density matrix."""


class NotPure(QfidError):
  pass


class InvalidProbeSet(QfidError):
  pass


class NotTracePreserving(QfidError):
  pass


class MapLeavesBlochBall(QfidError):
  """An affine map sends some Bloch vector outside the unit ball."""


class UnknownChannel(QfidError):
  pass


class ParameterOutOfRange(QfidError):
  pass


class InvalidSpec(QfidError):
  """A spec value (quadrature, Monte Carlo, pulse, sweep) is out of range."""


class InputError(QfidError):
  """The input document could not be parsed.

  Attributes:
    field: Dotted path of the offending field, e.g. 'channel.parts[1].name'.
    line: Line number in the JSON source, when known.
  """

  def __init__(self, message: str, field: str = '', line: int | None = None):
    self.field = field
    self.line = line
    where = []
    if line is not None:
      where.append(f'line {line}')
    if field:
      where.append(f'field {field}')
    prefix = f'{", ".join(where)}: ' if where else ''
    super().__init__(f'{prefix}{message}')
