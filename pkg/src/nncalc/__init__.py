"""Exact symbolic calculus for ReLU-power networks."""

from .affine import AffineMap
from .network import (Act, ComplexityReport, Layer, Network, complexity,
                      compress, constant_network, evaluate, evaluate_float,
                      from_json, register_activation, to_json, validate)

__all__ = [
    "Act", "AffineMap", "ComplexityReport", "Layer", "Network",
    "complexity", "compress", "constant_network", "evaluate",
    "evaluate_float", "from_json", "register_activation", "to_json",
    "validate",
]

__version__ = "0.1.0"
