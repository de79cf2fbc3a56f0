"""Heterojunction matching and scattering through piecewise-constant structures.

Across every interface the pair ``(m**alpha * psi, m**(alpha+beta) * psi')`` is
continuous. Inside a uniform region the solution is a combination of
``exp(+-1j k (x - x_left))`` with the basis origin at the region's left edge.

Two views are offered:

* ``interface_matrix`` / ``propagation_matrix`` act on plane-wave amplitude
  pairs ``(A, B)``; ``transfer_matrix`` multiplies them out naively.
* ``scatter`` walks the structure from the right lead to the left carrying the
  continuous pair itself, renormalising after every layer. Walking against
  the incoming wave keeps the physically dominant solution dominant, so thick
  evanescent layers neither overflow nor lose the small transmitted amplitude,
  and ``k = 0`` inside a layer is handled by the analytic ``sin(z)/z`` limit.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .core import (
    NATURAL_UNITS,
    NoOpenChannelError,
    OrderingScheme,
    PhysicalConstants,
    Structure,
    ThresholdError,
    wavenumber,
)

# |k * width| below which sin(z)/z and cos(z) come from their Taylor series
SERIES_THRESHOLD = 1e-3
# imaginary phase above which cos/sin are built from rescaled exponentials
_SCALED_PHASE = 20.0


@dataclass(frozen=True)
class ScatteringSolution:
    """Result of one scattering evaluation.

    ``amplitudes`` holds one ``(A, B)`` pair per region (left lead, layers,
    right lead), each in the basis whose origin is the region's left edge
    (``x = 0`` for the left lead). The incoming amplitude is normalised to 1.
    Pairs are NaN for a region whose wavenumber is exactly zero.
    """

    energy: float
    wavenumbers: Tuple[complex, ...]
    amplitudes: Tuple[Tuple[complex, complex], ...]
    transmission: float
    reflection: float
    r: complex
    t: complex

    @property
    def channel_open(self) -> bool:
        k = self.wavenumbers[-1]
        return k.imag == 0 and k.real > 0


def _basis(m: float, k: complex, x0: float, scheme: OrderingScheme) -> np.ndarray:
    """Map (A, B) to (m^a psi, m^(a+b) psi') at x0."""
    alpha, beta = scheme.alpha, scheme.beta
    ep = cmath.exp(1j * k * x0)
    em = cmath.exp(-1j * k * x0)
    outer = m**alpha
    inner = m ** (alpha + beta) * 1j * k
    return np.array([[outer * ep, outer * em], [inner * ep, -inner * em]], dtype=complex)


def interface_matrix(mL: float, kL: complex, mR: float, kR: complex, x0: float = 0.0,
                     scheme: OrderingScheme = OrderingScheme()) -> np.ndarray:
    """Transfer matrix ``M`` with ``(A_L, B_L) = M @ (A_R, B_R)`` at position ``x0``.

    Both wavenumbers must be non-zero; at ``k = 0`` the plane-wave pair stops
    being a basis.
    """
    if kL == 0 or kR == 0:
        raise ThresholdError("interface matrix undefined at a zero wavenumber")
    return np.linalg.solve(_basis(mL, kL, x0, scheme), _basis(mR, kR, x0, scheme))


def propagation_matrix(k: complex, width: float) -> np.ndarray:
    """``diag(exp(-ikw), exp(ikw))``: right-edge amplitudes to left-edge amplitudes."""
    if not width > 0:
        raise ValueError(f"width must be positive, got {width!r}")
    return np.array([[cmath.exp(-1j * k * width), 0], [0, cmath.exp(1j * k * width)]],
                    dtype=complex)


def transfer_matrix(structure: Structure, E: float, scheme: OrderingScheme = OrderingScheme(),
                    constants: PhysicalConstants = NATURAL_UNITS) -> np.ndarray:
    """Naive product of interface and propagation matrices, left lead to right lead.

    Fine for structures without thick evanescent layers; ``scatter`` is the
    robust route.
    """
    regions = structure.regions
    ks = [wavenumber(E, r.mass, r.potential, constants.hbar) for r in regions]
    total = np.eye(2, dtype=complex)
    for j in range(len(regions) - 1):
        if j > 0:
            total = total @ propagation_matrix(ks[j], regions[j].width)
        total = total @ interface_matrix(regions[j].mass, ks[j], regions[j + 1].mass, ks[j + 1],
                                         0.0, scheme)
    return total


def _cos_sinc(k: complex, width: float):
    """Return ``(cos(kw), sin(kw)/(kw), s)`` with both values scaled by ``exp(-s)``."""
    z = k * width
    s = abs(z.imag)
    if abs(z) < SERIES_THRESHOLD:
        z2 = z * z
        c = 1 - z2 / 2 + z2 * z2 / 24 - z2 * z2 * z2 / 720
        sc = 1 - z2 / 6 + z2 * z2 / 120 - z2 * z2 * z2 / 5040
        return c, sc, 0.0
    if s < _SCALED_PHASE:
        return cmath.cos(z), cmath.sin(z) / z, 0.0
    # |exp(i z)| = exp(-s) with Im z >= 0, so both terms below are bounded
    up = cmath.exp(1j * z - s)
    down = cmath.exp(-1j * z - s)
    return (up + down) / 2, (up - down) / (2j * z), s


def _layer_step(u: np.ndarray, m: float, k: complex, width: float,
                scheme: OrderingScheme) -> Tuple[np.ndarray, float]:
    """Carry the continuous pair from a layer's right edge to its left edge."""
    c, sc, shift = _cos_sinc(k, width)
    kw_sinc = width * sc
    u0, u1 = u
    left = np.array([
        c * u0 - m ** (-scheme.beta) * kw_sinc * u1,
        c * u1 + m**scheme.beta * (k * k) * kw_sinc * u0,
    ])
    return left, shift


def _amplitudes_from_pair(u: np.ndarray, m: float, k: complex,
                          scheme: OrderingScheme) -> Tuple[complex, complex]:
    if k == 0:
        return complex("nan"), complex("nan")
    psi = u[0] / m**scheme.alpha
    dpsi = u[1] / m ** (scheme.alpha + scheme.beta)
    return (psi + dpsi / (1j * k)) / 2, (psi - dpsi / (1j * k)) / 2


def _safe_exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def scatter(structure: Structure, E: float, scheme: OrderingScheme = OrderingScheme(),
            constants: PhysicalConstants = NATURAL_UNITS) -> ScatteringSolution:
    """Transmission and reflection for a unit wave incident from the left lead.

    ``T`` and ``R`` are ratios of the conserved current ``Im(psi* psi') / m``.
    When the right lead is closed (``E`` at or below its potential) ``T = 0``
    and ``R = 1``.

    Raises
    ------
    NoOpenChannelError
        If ``E`` does not exceed the left-lead potential.
    """
    regions = structure.regions
    hbar = constants.hbar
    left, right = structure.left_lead, structure.right_lead
    if not E > left.potential:
        raise NoOpenChannelError(
            f"energy {E!r} does not exceed the left-lead potential {left.potential!r}")
    ks = [wavenumber(E, r.mass, r.potential, hbar) for r in regions]

    # outgoing (or decaying, or flat at threshold) wave in the right lead, unit amplitude
    kR = ks[-1]
    u = np.array([right.mass**scheme.alpha,
                  right.mass ** (scheme.alpha + scheme.beta) * 1j * kR], dtype=complex)
    log_scale = 0.0
    pairs: List[Optional[Tuple[np.ndarray, float]]] = [None] * len(regions)
    pairs[-1] = (u, 0.0)
    for j in range(len(regions) - 2, 0, -1):
        u, shift = _layer_step(u, regions[j].mass, ks[j], regions[j].width, scheme)
        norm = float(np.max(np.abs(u)))
        u = u / norm
        log_scale += shift + math.log(norm)
        pairs[j] = (u, log_scale)
    pairs[0] = (u, log_scale)

    A0, B0 = _amplitudes_from_pair(u, left.mass, ks[0], scheme)
    r = B0 / A0
    # t multiplies the right-lead wave; incoming amplitude is A0 * exp(log_scale)
    log_t = -log_scale - math.log(abs(A0))
    t = _safe_exp(log_t) * (abs(A0) / A0)

    amplitudes = []
    for j, (pair, scale) in enumerate(pairs):
        if j == len(regions) - 1:
            amplitudes.append((t, 0j))
            continue
        a, b = _amplitudes_from_pair(pair, regions[j].mass, ks[j], scheme)
        factor = _safe_exp(scale + log_t) * (abs(A0) / A0)
        amplitudes.append((a * factor, b * factor))

    kL = ks[0].real
    if kR.imag == 0 and kR.real > 0:
        flux_ratio = (kR.real / right.mass) / (kL / left.mass)
        T = flux_ratio * _safe_exp(2 * log_t)
        R = abs(r) ** 2
    else:
        T, R = 0.0, 1.0
    return ScatteringSolution(
        energy=E,
        wavenumbers=tuple(ks),
        amplitudes=tuple(amplitudes),
        transmission=float(T),
        reflection=float(R),
        r=complex(r),
        t=complex(t),
    )


def current(m: float, psi: complex, dpsi: complex, scheme: OrderingScheme) -> float:
    """``Im[(m^a psi)* (m^(a+b) psi')]``, the quantity continuous at every interface."""
    return ((m**scheme.alpha * psi).conjugate() * (m ** (scheme.alpha + scheme.beta) * dpsi)).imag


def wavefunction(solution: ScatteringSolution, structure: Structure, region: int,
                 x: float) -> Tuple[complex, complex]:
    """``(psi, psi')`` at global position ``x`` using the amplitudes of ``region``."""
    origin = structure.interfaces[max(region - 1, 0)]
    k = solution.wavenumbers[region]
    A, B = solution.amplitudes[region]
    ep = cmath.exp(1j * k * (x - origin))
    em = cmath.exp(-1j * k * (x - origin))
    return A * ep + B * em, 1j * k * (A * ep - B * em)
