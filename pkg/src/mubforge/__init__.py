"""Numerical search for mutually unbiased constellations of pure states in C^d."""

__version__ = "0.1.0"

from .backend import DEFAULT as KERNEL
from .constellation import (
    ConstellationSpec,
    ParameterPoint,
    StateSet,
    classify,
    enumerate_subspecs,
    leq,
    parse_spec,
    realize,
)
from .objective import evaluate, f_upper_bound, verify_mu
from .optimizer import LmConfig, minimize

__all__ = [
    "KERNEL",
    "ConstellationSpec",
    "LmConfig",
    "ParameterPoint",
    "StateSet",
    "classify",
    "enumerate_subspecs",
    "evaluate",
    "f_upper_bound",
    "leq",
    "minimize",
    "parse_spec",
    "realize",
    "verify_mu",
]
