"""Bound states of the symmetric rectangular potential-and-mass well.

The well occupies ``-a/2 < x < a/2`` with mass ``m2`` and potential ``-V0``;
outside the mass is ``m1`` and the potential zero. Continuity of
``m**beta * psi'/psi`` at the walls gives

    even:  p sin(pa/2) m2**beta - kappa cos(pa/2) m1**beta = 0
    odd:   p cos(pa/2) m2**beta + kappa sin(pa/2) m1**beta = 0

(the tan/cot conditions multiplied through to remove their poles), where
``p**2 = 2 m2 (E + V0)/hbar**2`` and ``kappa**2 = -2 m1 E/hbar**2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, NamedTuple, Tuple

import numpy as np
from scipy.optimize import brentq

from .core import NATURAL_UNITS, DomainError, OrderingScheme, PhysicalConstants, ResolutionError

EVEN = "even"
ODD = "odd"

_RTOL = 1e-13
_MAX_GRID = 1 << 22


@dataclass(frozen=True)
class WellParams:
    m1: float
    m2: float
    V0: float
    a: float
    scheme: OrderingScheme = field(default_factory=OrderingScheme)
    constants: PhysicalConstants = NATURAL_UNITS

    def __post_init__(self):
        for name in ("m1", "m2", "V0", "a"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be positive and finite, got {value!r}")

    def p(self, E):
        return np.sqrt(np.maximum(2 * self.m2 * (E + self.V0), 0.0)) / self.constants.hbar

    def kappa(self, E):
        return np.sqrt(np.maximum(-2 * self.m1 * E, 0.0)) / self.constants.hbar


class Level(NamedTuple):
    energy: float
    parity: str


class Spectrum(tuple):
    """Bound levels sorted by energy; a tuple of ``Level``."""

    @property
    def energies(self) -> np.ndarray:
        return np.array([lvl.energy for lvl in self])

    @property
    def parities(self) -> Tuple[str, ...]:
        return tuple(lvl.parity for lvl in self)


def matching_function(w: WellParams, E, parity: str):
    """Pole-free even/odd matching function; bound states are its zeros."""
    p = w.p(E)
    kap = w.kappa(E)
    half = p * w.a / 2
    inner = w.m2**w.scheme.beta * p
    outer = w.m1**w.scheme.beta * kap
    if parity == EVEN:
        return inner * np.sin(half) - outer * np.cos(half)
    if parity == ODD:
        return inner * np.cos(half) + outer * np.sin(half)
    raise ValueError(f"unknown parity {parity!r}")


def matching_residual(w: WellParams, E: float, parity: str) -> float:
    """Matching function normalised to lie in [-1, 1]."""
    scale = math.hypot(w.m2**w.scheme.beta * w.p(E), w.m1**w.scheme.beta * w.kappa(E))
    return float(matching_function(w, E, parity)) / scale


def _scan(fn, p_grid, to_energy) -> List[float]:
    E = to_energy(p_grid)
    values = fn(E)
    roots = []
    for i in np.flatnonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0):
        lo, hi = E[i], E[i + 1]
        roots.append(brentq(fn, lo, hi, xtol=1e-300, rtol=_RTOL))
    for i in np.flatnonzero(values[1:-1] == 0):
        roots.append(float(E[i + 1]))
    return roots


def _consistent(levels: List[Level]) -> bool:
    if not levels or levels[0].parity != EVEN:
        return False
    return all(a.parity != b.parity for a, b in zip(levels, levels[1:]))


def well_spectrum(w: WellParams) -> Spectrum:
    """All bound states with energies in ``(-V0, 0)``, from a sign scan refined by brentq.

    The scan is uniform in ``p`` (where the matching functions oscillate
    evenly) with at least eight samples per expected level. It is doubled
    until the levels start with an even state and alternate in parity.
    """
    hbar = w.constants.hbar
    p_max = math.sqrt(2 * w.m2 * w.V0) / hbar
    expected = int(p_max * w.a / math.pi) + 1
    n = max(256, 8 * (expected + 1))

    def to_energy(p):
        return (hbar * p) ** 2 / (2 * w.m2) - w.V0

    while n <= _MAX_GRID:
        # open interval: both endpoints are trivial zeros of one of the functions
        p_grid = np.linspace(0.0, p_max, n + 2)[1:-1]
        levels = []
        for parity in (EVEN, ODD):
            fn = lambda E, parity=parity: matching_function(w, E, parity)
            levels.extend(Level(float(E), parity) for E in _scan(fn, p_grid, to_energy))
        levels.sort(key=lambda lvl: lvl.energy)
        if _consistent(levels):
            return Spectrum(levels)
        n *= 2
    raise ResolutionError("could not resolve an alternating-parity spectrum; "
                          "the well is too deep or too wide for the grid limit")


def constant_mass_well_spectrum(m: float, V0: float, a: float,
                                constants: PhysicalConstants = NATURAL_UNITS) -> Spectrum:
    """Textbook finite square well, solved branch by branch in ``z = p a / 2``.

    With ``z0 = (a/2) sqrt(2 m V0)/hbar`` the even levels solve
    ``z tan z = sqrt(z0^2 - z^2)`` on ``[n pi, n pi + pi/2)`` and the odd levels
    ``-z cot z = sqrt(z0^2 - z^2)`` on ``[n pi + pi/2, (n+1) pi)``; each branch
    holds at most one root.
    """
    for name, value in (("m", m), ("V0", V0), ("a", a)):
        if not (math.isfinite(value) and value > 0):
            raise DomainError(f"{name} must be positive and finite, got {value!r}")
    hbar = constants.hbar
    z0 = a / 2 * math.sqrt(2 * m * V0) / hbar

    def even(z):
        return z * math.tan(z) - math.sqrt(max(z0 * z0 - z * z, 0.0))

    def odd(z):
        return -z / math.tan(z) - math.sqrt(max(z0 * z0 - z * z, 0.0))

    levels = []
    branch = 0
    while branch * math.pi / 2 < z0:
        fn, parity = (even, EVEN) if branch % 2 == 0 else (odd, ODD)
        lo = branch * math.pi / 2
        hi = (branch + 1) * math.pi / 2
        if hi < z0:
            hi = math.nextafter(hi, lo)
        else:
            hi = z0
        if branch == 0:
            z = brentq(fn, 0.0, hi, xtol=1e-300, rtol=_RTOL) if hi > 0 else None
        else:
            z = brentq(fn, lo, hi, xtol=1e-300, rtol=_RTOL) if fn(lo) * fn(hi) < 0 else None
        if z is not None and z < z0:
            E = (hbar * 2 * z / a) ** 2 / (2 * m) - V0
            levels.append(Level(E, parity))
        branch += 1
    return Spectrum(levels)


def printed_well_residual(w: WellParams, E: float) -> float:
    """Left minus right side of the printed eigenvalue condition for the well.

    ``cos(p a/2) - p^2 / (p^2 [1 - r] + (2 m2 V0/hbar^2) r)`` with
    ``r = (m1/m2)**(2 beta + 1)``. Diagnostic only: its zeros are compared
    with ``well_spectrum`` by the audit.
    """
    if not (-w.V0 < E < 0):
        raise DomainError("energy must lie inside the well, -V0 < E < 0")
    hbar = w.constants.hbar
    p2 = 2 * w.m2 * (E + w.V0) / hbar**2
    r = (w.m1 / w.m2) ** (2 * w.scheme.beta + 1)
    rhs = p2 / (p2 * (1 - r) + 2 * w.m2 * w.V0 / hbar**2 * r)
    return math.cos(math.sqrt(p2) * w.a / 2) - rhs


def printed_well_roots(w: WellParams, samples: int = 20001) -> List[float]:
    """Sign changes of ``printed_well_residual`` inside the well, refined by brentq."""
    E = np.linspace(-w.V0, 0.0, samples)[1:-1]
    values = np.array([printed_well_residual(w, e) for e in E])
    roots = []
    for i in np.flatnonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0):
        roots.append(brentq(lambda e: printed_well_residual(w, e), E[i], E[i + 1], xtol=1e-300,
                            rtol=_RTOL))
    return roots
