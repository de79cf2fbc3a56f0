"""Band structure of the periodic potential-and-mass multibarrier.

One period is a well of width ``b`` (mass ``m1``, potential 0) followed by a
barrier of width ``a`` (mass ``m2``, potential ``V0``). Bloch states exist where

    cos(p d) = cos(k1 b) cos(k2 a) - h sin(k1 b) sin(k2 a),   d = a + b.

With ``rho = k2 m2**beta / (k1 m1**beta)`` the factor is ``h = (rho + 1/rho)/2``,
which equals ``sqrt(1 + g)`` above the barrier. The right-hand side is
evaluated as ``cos cos - (rho sin + sin/rho)/2 sin``, in which every product is
real for real or imaginary ``k2``, so the same expression covers the
sub-barrier range and ``E = V0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from .closed_forms import sinc
from .core import (
    NATURAL_UNITS,
    DomainError,
    OrderingScheme,
    PhysicalConstants,
    ResolutionError,
    sigma,
)

EDGE_RTOL = 1e-10
# rounding slack on |RHS| <= 1 so touching points of a gapless spectrum stay allowed
ALLOWED_TOL = 1e-13


@dataclass(frozen=True)
class LatticeParams:
    m1: float
    m2: float
    V0: float
    a: float
    b: float
    scheme: OrderingScheme = field(default_factory=OrderingScheme)
    constants: PhysicalConstants = NATURAL_UNITS

    def __post_init__(self):
        for name in ("m1", "m2", "a", "b"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be positive and finite, got {value!r}")
        if not (math.isfinite(self.V0) and self.V0 >= 0):
            raise DomainError(f"barrier height must be non-negative, got {self.V0!r}")

    @property
    def d(self) -> float:
        return self.a + self.b

    @property
    def sigma(self) -> float:
        return sigma(self.m1 / self.m2, self.scheme.beta)


@dataclass(frozen=True)
class BandDiagram:
    """Allowed intervals in increasing order and the gaps between neighbours."""

    bands: Tuple[Tuple[float, float], ...]
    E_min: float
    E_max: float

    @property
    def gaps(self) -> Tuple[Tuple[float, float], ...]:
        return tuple((lo[1], hi[0]) for lo, hi in zip(self.bands, self.bands[1:]))

    @property
    def gap_widths(self) -> np.ndarray:
        return np.array([hi - lo for lo, hi in self.gaps])


def _energies(E):
    E = np.asarray(E, dtype=float)
    if np.any(~(E > 0)):
        raise DomainError("energies must be positive")
    return E


def _out(x, like):
    return float(x) if np.ndim(like) == 0 else x


def dispersion_rhs(p: LatticeParams, E):
    """Right-hand side of the Bloch condition ``cos(p d) = ...``."""
    E = _energies(E)
    hbar = p.constants.hbar
    beta = p.scheme.beta
    k1 = np.sqrt(2 * p.m1 * E) / hbar
    k2sq = 2 * p.m2 * (E - p.V0) / hbar**2
    k2 = np.sqrt(k2sq.astype(complex))
    z = k2 * p.a
    cos2 = np.cos(z).real
    # sin(k2 a) / k2 and k2 sin(k2 a), both real on either side of the barrier top
    sin_over_k2 = p.a * sinc(z).real
    k2_sin = k2sq * sin_over_k2
    mass = (p.m1 / p.m2) ** beta
    sin_over_rho = k1 * mass * sin_over_k2
    rho_sin = k2_sin / (k1 * mass)
    with np.errstate(invalid="ignore"):
        rhs = np.cos(k1 * p.b) * cos2 - 0.5 * np.sin(k1 * p.b) * (rho_sin + sin_over_rho)
    return _out(rhs, E)


def h_factor(p: LatticeParams, E):
    """``(rho + 1/rho)/2 = sqrt(1 + g)`` for energies above the barrier."""
    E = _energies(E)
    if np.any(~(E > p.V0)):
        raise DomainError("h is real only above the barrier (E > V0)")
    rho = np.sqrt(p.m2 * (E - p.V0) / (p.m1 * E)) * (p.m2 / p.m1) ** p.scheme.beta
    return _out((rho + 1 / rho) / 2, E)


def h_limit(p: LatticeParams) -> float:
    """``lim h`` as ``E -> inf``, ``(sigma^2 + 1) / (2 sigma)``."""
    s = p.sigma
    return (s * s + 1) / (2 * s)


def quasimomentum(p: LatticeParams, E: float) -> Optional[float]:
    """Bloch wavenumber in ``[0, pi/d]``, or ``None`` inside a gap."""
    value = dispersion_rhs(p, E)
    if abs(value) > 1:
        return None
    return math.acos(value) / p.d


def _edge(p: LatticeParams, lo: float, hi: float) -> float:
    return brentq(lambda e: abs(dispersion_rhs(p, e)) - 1 - ALLOWED_TOL, lo, hi,
                  xtol=1e-300, rtol=EDGE_RTOL)


def band_diagram(p: LatticeParams, E_min: float, E_max: float, grid: int = 1000) -> BandDiagram:
    """Allowed bands in ``[E_min, E_max]`` from a linear scan refined by brentq.

    Raises ``ResolutionError`` when the scan skips a band or a gap: a band is
    entered and left on the same side (``RHS`` near +1 at both ends) or ``RHS``
    jumps from above +1 to below -1 between neighbouring samples.
    """
    if not 0 < E_min < E_max:
        raise DomainError("need 0 < E_min < E_max")
    if grid < 2:
        raise DomainError("grid needs at least two points")
    E = np.linspace(E_min, E_max, grid)
    rhs = dispersion_rhs(p, E)
    allowed = np.abs(rhs) <= 1 + ALLOWED_TOL

    for i in np.flatnonzero(~allowed[:-1] & ~allowed[1:]):
        if rhs[i] * rhs[i + 1] < 0:
            raise ResolutionError(
                f"grid of {grid} points skips a band near E = {E[i]:.6g}; use a finer grid")

    bands: List[Tuple[float, float]] = []
    start = E_min if allowed[0] else None
    start_sign = 0.0
    for i in range(grid - 1):
        if allowed[i] == allowed[i + 1]:
            continue
        edge = _edge(p, E[i], E[i + 1])
        if allowed[i + 1]:
            start, start_sign = edge, math.copysign(1.0, rhs[i])
        else:
            # entering and leaving on the same side hides a gap the grid missed
            if start_sign and math.copysign(1.0, rhs[i + 1]) == start_sign:
                raise ResolutionError(
                    f"grid of {grid} points skips a gap between E = {start:.6g} and "
                    f"{edge:.6g}; use a finer grid")
            bands.append((start, edge))
            start = None
    if start is not None:
        bands.append((start, E_max))
    return BandDiagram(tuple(bands), E_min, E_max)


def energy_for_gap_count(p: LatticeParams, count: int) -> float:
    """Upper energy of a scan expected to contain at least ``count`` gaps.

    Uses the free-particle phase ``k1 b + k2 a`` reaching ``(count + 1) pi``.
    """
    hbar = p.constants.hbar
    speed = (math.sqrt(2 * p.m1) * p.b + math.sqrt(2 * p.m2) * p.a) / hbar
    return p.V0 + ((count + 1.5) * math.pi / speed) ** 2


def resolved_band_diagram(p: LatticeParams, E_min: float, E_max: float,
                          grid: int = 1000, max_grid: int = 1 << 23) -> BandDiagram:
    """``band_diagram`` with the grid doubled until no resolution error remains."""
    while True:
        try:
            return band_diagram(p, E_min, E_max, grid)
        except ResolutionError:
            if grid * 2 > max_grid:
                raise
            grid *= 2


def indexed_gap_widths(p: LatticeParams, first: int, last: int,
                       grid: int = 4000) -> np.ndarray:
    """Widths of gaps ``first..last`` (1-based, counted from the lowest band)."""
    E_max = energy_for_gap_count(p, last + 1)
    diagram = resolved_band_diagram(p, 1e-9 * E_max, E_max, grid)
    widths = diagram.gap_widths
    if len(widths) < last:
        raise ResolutionError(f"found only {len(widths)} gaps below E = {E_max:.6g}")
    return widths[first - 1:last]
