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
"""qfid Settings Helper Module.

This module manages setting retrieval. A run parameter is taken from the
command line first, then from a QFID_* environment variable, then from the
input document, and finally from the built-in default.
"""

import logging
import os
from typing import Callable, TypeVar

import errors

logger = logging.getLogger(__name__)

ENV_PREFIX = 'QFID_'

T = TypeVar('T')


def get_setting(key_name: str) -> str | None:
  """Gets a setting from environment variables.

    Args:
        key_name: The name of the setting without prefix, e.g. 'SEED'.

    Returns:
        The setting value as a string, or None if not found.
    """
  val = os.environ.get(ENV_PREFIX + key_name)
  if val:
    logger.info(f"Retrieved setting {key_name} from environment variables.")
    return val
  return None


def resolve(key_name: str,
            flag: T | None,
            from_document: T | None,
            default: T,
            convert: Callable[[str], T] = str) -> T:
  """Picks a run parameter by precedence: flag, environment, document, default.

  Args:
    key_name: Setting name, looked up as QFID_<key_name>.
    flag: Value given on the command line, or None.
    from_document: Value from the input document, or None.
    default: Built-in default.
    convert: Parser for the environment string.

  Returns:
    The chosen value.

  Raises:
    errors.InputError: If the environment value cannot be converted.
  """
  if flag is not None:
    return flag
  val = get_setting(key_name)
  if val is not None:
    try:
      return convert(val)
    except ValueError as e:
      raise errors.InputError(f'cannot parse {val!r}: {e}',
                              field=ENV_PREFIX + key_name) from e
  if from_document is not None:
    logger.info(f"Using {key_name} from the input document.")
    return from_document
  return default
