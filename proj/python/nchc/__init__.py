# SPDX-License-Identifier: Apache-2.0
"""Nearest convex hull classification of noisy linear observations."""

from ._nchc import *  # noqa: F401,F403
from ._nchc import __version__, InputError, IoError  # noqa: F401
