# Copyright 2026 The mlmbias Authors
# SPDX-License-Identifier: Apache-2.0
"""Social-bias evaluation of masked language models."""

from mlmbias._core import *  # noqa: F401,F403
from mlmbias._core import __version__  # noqa: F401
