"""Decentralized two-robot belief-space planning with action-consistency checks.

The compiled extension carries the full API; this package simply re-exports it.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401

__version__ = "0.1.0"
