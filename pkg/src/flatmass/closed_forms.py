"""Analytic transmission results for the abrupt step and the rectangular barrier.

All energy-dependent functions accept a scalar or an array of energies and
return the same shape (a Python float for scalar input).

The barrier formula is evaluated as

    T = 1 / (1 + N**2 * 2 m2 a**2 / (4 sigma**2 E hbar**2) * sinc(k2 a)**2)

with ``N = (sigma**2 - 1) E + V0``. This equals ``1 / (1 + g sin^2(k2 a))``
above the barrier, its ``sinh`` continuation below it, and stays finite at
``E = V0`` where ``g`` alone diverges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .core import NATURAL_UNITS, DomainError, OrderingScheme, PhysicalConstants, sigma

SERIES_THRESHOLD = 1e-3


class _MassRatio:
    @property
    def sigma(self) -> float:
        return sigma(self.m1 / self.m2, self.scheme.beta)

    def _check(self):
        if not (self.m1 > 0 and self.m2 > 0):
            raise DomainError("masses must be positive")


@dataclass(frozen=True)
class StepParams(_MassRatio):
    m1: float
    m2: float
    V0: float
    scheme: OrderingScheme = field(default_factory=OrderingScheme)
    constants: PhysicalConstants = NATURAL_UNITS

    def __post_init__(self):
        self._check()


@dataclass(frozen=True)
class BarrierParams(_MassRatio):
    """Barrier of height ``V0`` (a well when ``V0 < 0``) and width ``a``."""

    m1: float
    m2: float
    V0: float
    a: float
    scheme: OrderingScheme = field(default_factory=OrderingScheme)
    constants: PhysicalConstants = NATURAL_UNITS

    def __post_init__(self):
        self._check()
        if not (math.isfinite(self.a) and self.a > 0):
            raise DomainError(f"barrier width must be positive, got {self.a!r}")

    @property
    def step(self) -> StepParams:
        return StepParams(self.m1, self.m2, self.V0, self.scheme, self.constants)


def _energies(E):
    E = np.asarray(E, dtype=float)
    if np.any(~(E > 0)):
        raise DomainError("energies must be positive")
    return E


def _out(x, like):
    return float(x) if np.ndim(like) == 0 else x


def sinc(z):
    """``sin(z)/z`` for real or complex ``z``, with the series near zero."""
    z = np.asarray(z)
    small = np.abs(z) < SERIES_THRESHOLD
    safe = np.where(small, 1.0, z)
    with np.errstate(over="ignore", invalid="ignore"):
        direct = np.sin(safe) / safe
    # sinh overflow for large imaginary arguments
    direct = np.where(np.isfinite(direct), direct, np.inf)
    z2 = z * z
    series = 1 - z2 / 6 + z2 * z2 / 120 - z2 * z2 * z2 / 5040
    return np.where(small, series, direct)


def step_transmission(p: StepParams, E):
    E = _energies(E)
    s = p.sigma
    with np.errstate(invalid="ignore"):
        root = np.sqrt(np.where(E > p.V0, E - p.V0, 0.0))
        T = 4 * s * np.sqrt(E) * root / (s * np.sqrt(E) + root) ** 2
    return _out(np.where(E > p.V0, T, 0.0), E)


def step_reflection(p: StepParams, E):
    E = _energies(E)
    s = p.sigma
    root = np.sqrt(np.where(E > p.V0, E - p.V0, 0.0))
    with np.errstate(invalid="ignore"):
        R = ((s * np.sqrt(E) - root) / (s * np.sqrt(E) + root)) ** 2
    return _out(np.where(E > p.V0, R, 1.0), E)


def step_asymptote(p: StepParams) -> float:
    """High-energy limit of the step transmission, ``4 sigma / (sigma + 1)**2``."""
    s = p.sigma
    return 4 * s / (s + 1) ** 2


def transparency_energy(p: StepParams) -> Optional[float]:
    """Energy above an up-step at which nothing is reflected, if one exists."""
    if not p.V0 > 0:
        raise DomainError("transparency energy is defined for an up-step (V0 > 0)")
    s2 = p.sigma**2
    if s2 >= 1:
        return None
    return p.V0 / (1 - s2)


def _barrier_core(p: BarrierParams, E):
    s2 = p.sigma**2
    hbar = p.constants.hbar
    k2 = np.sqrt((2 * p.m2 * (E - p.V0)).astype(complex)) / hbar
    N = (s2 - 1) * E + p.V0
    sc = sinc(k2 * p.a).real
    with np.errstate(over="ignore"):
        term = N**2 * 2 * p.m2 * p.a**2 / (4 * s2 * E * hbar**2) * sc**2
    return term


def barrier_transmission(p: BarrierParams, E):
    E = _energies(E)
    with np.errstate(over="ignore"):
        T = 1.0 / (1.0 + _barrier_core(p, E))
    return _out(T, E)


def g_factor(p: StepParams, E):
    """``[(sigma^2 - 1) E + V0]^2 / (4 sigma^2 E (E - V0))`` above the barrier."""
    E = _energies(E)
    if np.any(~(E > p.V0)):
        raise DomainError("g is defined for E > V0; below the barrier use the continuation")
    s2 = p.sigma**2
    g = ((s2 - 1) * E + p.V0) ** 2 / (4 * s2 * E * (E - p.V0))
    return _out(g, E)


def g_limit(p: StepParams) -> float:
    """``lim g`` as ``E -> inf``, ``((sigma^2 - 1) / (2 sigma))^2``."""
    s = p.sigma
    return ((s * s - 1) / (2 * s)) ** 2


def thick_barrier_transmission(p: BarrierParams, E):
    """Exponential tunnelling asymptote, valid when ``kappa a >> 1``."""
    E = _energies(E)
    if np.any(~(E < p.V0)):
        raise DomainError("thick-barrier form needs 0 < E < V0")
    s2 = p.sigma**2
    kappa = np.sqrt(2 * p.m2 * (p.V0 - E)) / p.constants.hbar
    prefactor = 16 * s2 * E * (p.V0 - E) / ((s2 - 1) * E + p.V0) ** 2
    return _out(prefactor * np.exp(-2 * kappa * p.a), E)


def tunnelling_prefactor(p: StepParams, E):
    """``E (V0 - E) / [(sigma^2 - 1) E + V0]^2``, the energy shape of the prefactor."""
    E = np.asarray(E, dtype=float)
    s2 = p.sigma**2
    return _out(E * (p.V0 - E) / ((s2 - 1) * E + p.V0) ** 2, E)


def prefactor_max_energy(p: StepParams) -> float:
    """Energy in ``(0, V0)`` maximising the thick-barrier prefactor.

    Located as the root of the logarithmic derivative, which changes sign
    exactly once on the interval.
    """
    if not p.V0 > 0:
        raise DomainError("prefactor maximum needs V0 > 0")
    V0 = p.V0
    s2 = p.sigma**2

    def dlog(E):
        return 1 / E - 1 / (V0 - E) - 2 * (s2 - 1) / ((s2 - 1) * E + V0)

    eps = 1e-12 * V0
    return brentq(dlog, eps, V0 - eps, xtol=1e-15 * V0, rtol=4 * np.finfo(float).eps)


def ramsauer_energies(p: BarrierParams, E_max: float):
    """Above-barrier energies with ``k2 a = n pi`` (``T = 1`` for every ordering)."""
    out = []
    n = 1
    unit = (math.pi * p.constants.hbar / p.a) ** 2 / (2 * p.m2)
    while True:
        E = p.V0 + n * n * unit
        if E > E_max:
            return out
        if E > 0:
            out.append(E)
        n += 1
