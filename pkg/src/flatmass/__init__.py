"""Scattering, bound states and bands for piecewise-flat potentials and masses
under the ordering family ``H = m^a p m^b p m^a / 2 + V`` with ``2a + b = -1``."""

from .core import (
    DomainError,
    Layer,
    Lead,
    NoOpenChannelError,
    OrderingScheme,
    PhysicalConstants,
    ResolutionError,
    Structure,
    ThresholdError,
    sigma,
    wavenumber,
)
from .matching import ScatteringSolution, interface_matrix, propagation_matrix, scatter

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "Layer",
    "Lead",
    "NoOpenChannelError",
    "OrderingScheme",
    "PhysicalConstants",
    "ResolutionError",
    "ScatteringSolution",
    "Structure",
    "ThresholdError",
    "interface_matrix",
    "propagation_matrix",
    "scatter",
    "sigma",
    "wavenumber",
]
