"""Lagged causal network discovery by optimal causation entropy."""
__version__ = "1.0.0"

from .discovery import DiscoveryConfig, discover_network  # noqa: E402
from .estimators import EstimatorKind, EstimatorSpec  # noqa: E402
from .graph import CausalGraph, EdgeRecord  # noqa: E402

__all__ = [
    "CausalGraph",
    "DiscoveryConfig",
    "EdgeRecord",
    "EstimatorKind",
    "EstimatorSpec",
    "discover_network",
]
