"""Domain types, unit conventions and ordering-parameter algebra.

Everything here is an immutable value. Energies, masses, lengths and the
reduced Planck constant are in whatever consistent unit system the caller
picks; the default ``hbar = 1`` gives dimensionless natural units.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence, Tuple


class DomainError(ValueError):
    """An argument lies outside the domain of the requested quantity."""


class ThresholdError(DomainError):
    """A plane-wave basis degenerates because a wavenumber is exactly zero."""


class NoOpenChannelError(DomainError):
    """The incoming lead carries no propagating wave at this energy."""


class ResolutionError(RuntimeError):
    """A grid scan was too coarse to resolve the features it is looking for."""


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.hbar) and self.hbar > 0):
            raise DomainError(f"hbar must be positive and finite, got {self.hbar!r}")


NATURAL_UNITS = PhysicalConstants()


@dataclass(frozen=True)
class OrderingScheme:
    """Kinetic-operator ordering ``m^a p m^b p m^a / 2`` with ``2a + b = -1``.

    Only ``beta`` is free. The outer exponents are equal (the Morrow-Brownstein
    restriction), so ``gamma`` is just another name for ``alpha``.
    """

    beta: float = -0.5

    def __post_init__(self):
        if not math.isfinite(self.beta):
            raise DomainError(f"beta must be finite, got {self.beta!r}")

    @property
    def alpha(self) -> float:
        return -(1.0 + self.beta) / 2.0

    @property
    def gamma(self) -> float:
        return self.alpha

    @classmethod
    def ben_daniel_duke(cls) -> "OrderingScheme":
        return cls(beta=-1.0)


def _check_mass(mass, what="mass"):
    if not (math.isfinite(mass) and mass > 0):
        raise DomainError(f"{what} must be positive and finite, got {mass!r}")


@dataclass(frozen=True)
class Layer:
    width: float
    mass: float
    potential: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.width) and self.width > 0):
            raise DomainError(f"layer width must be positive and finite, got {self.width!r}")
        _check_mass(self.mass, "layer mass")
        if not math.isfinite(self.potential):
            raise DomainError(f"layer potential must be finite, got {self.potential!r}")


@dataclass(frozen=True)
class Lead:
    mass: float
    potential: float = 0.0

    def __post_init__(self):
        _check_mass(self.mass, "lead mass")
        if not math.isfinite(self.potential):
            raise DomainError(f"lead potential must be finite, got {self.potential!r}")


@dataclass(frozen=True)
class Structure:
    """Piecewise-constant profile: semi-infinite lead, layers, semi-infinite lead.

    The first interface sits at ``x = 0``; later ones follow at the cumulative
    layer widths.
    """

    left_lead: Lead
    layers: Tuple[Layer, ...] = field(default_factory=tuple)
    right_lead: Lead = None

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        if self.right_lead is None:
            object.__setattr__(self, "right_lead", self.left_lead)

    @property
    def interfaces(self) -> Tuple[float, ...]:
        positions = [0.0]
        for layer in self.layers:
            positions.append(positions[-1] + layer.width)
        return tuple(positions)

    @property
    def regions(self) -> Tuple:
        """Left lead, every layer, right lead, in order."""
        return (self.left_lead, *self.layers, self.right_lead)

    def mirrored(self) -> "Structure":
        return Structure(self.right_lead, tuple(reversed(self.layers)), self.left_lead)

    @classmethod
    def step(cls, m1: float, m2: float, V0: float) -> "Structure":
        return cls(Lead(m1, 0.0), (), Lead(m2, V0))

    @classmethod
    def barrier(cls, m1: float, m2: float, V0: float, a: float) -> "Structure":
        return cls(Lead(m1, 0.0), (Layer(a, m2, V0),), Lead(m1, 0.0))

    @classmethod
    def multibarrier(cls, m1: float, m2: float, V0: float, a: float, b: float,
                     periods: int) -> "Structure":
        """``periods`` barriers of width ``a`` separated by wells of width ``b``."""
        if periods < 1:
            raise DomainError("need at least one period")
        layers = []
        for n in range(periods):
            if n:
                layers.append(Layer(b, m1, 0.0))
            layers.append(Layer(a, m2, V0))
        return cls(Lead(m1, 0.0), tuple(layers), Lead(m1, 0.0))

    @classmethod
    def from_regions(cls, masses: Sequence[float], potentials: Sequence[float],
                     widths: Sequence[float]) -> "Structure":
        """Build from flat lists; ``widths`` has two fewer entries than the others."""
        if not (len(masses) == len(potentials) == len(widths) + 2):
            raise DomainError("masses/potentials need len(widths) + 2 entries")
        layers = tuple(Layer(w, m, v) for w, m, v in zip(widths, masses[1:-1], potentials[1:-1]))
        return cls(Lead(masses[0], potentials[0]), layers, Lead(masses[-1], potentials[-1]))


def sigma(mu: float, beta: float) -> float:
    """Return ``mu ** (beta + 1/2)`` for the mass ratio ``mu = m1/m2``."""
    if not mu > 0:
        raise DomainError(f"mass ratio must be positive, got {mu!r}")
    return math.exp((beta + 0.5) * math.log(mu))


def wavenumber(E: float, m: float, V: float, hbar: float = 1.0) -> complex:
    """``sqrt(2 m (E - V)) / hbar`` on the branch Im k >= 0 (Re k >= 0 if real).

    Below the local potential the result is ``1j * kappa`` so that
    ``exp(1j * k * x)`` decays towards ``+inf``.
    """
    _check_mass(m)
    k2 = 2.0 * m * (E - V) / hbar**2
    if isinstance(k2, complex):
        k = cmath.sqrt(k2)
        if k.imag < 0 or (k.imag == 0 and k.real < 0):
            k = -k
        return k
    if k2 >= 0:
        return complex(math.sqrt(k2), 0.0)
    return complex(0.0, math.sqrt(-k2))
