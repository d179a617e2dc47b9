"""Mixtures of thermal coherent states from a longitudinally coupled qubit-resonator."""

__version__ = "0.1.0"

from .errors import MtcsError, TruncationError  # noqa: E402
from .model import MtcsParams, SystemParams, mtcs_params  # noqa: E402

__all__ = ["MtcsError", "TruncationError", "MtcsParams", "SystemParams", "mtcs_params", "__version__"]
