"""Python bindings for the encoded two-qubit NMR control library."""

from ._core import *  # noqa: F401,F403
from ._core import InvalidInput, NumericalError

__all__ = [name for name in dir() if not name.startswith("_")]
