"""Side-by-side check of printed closed forms against recomputed values.

Each entry pairs a value as printed with the value this package computes and
states only whether the two agree numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import bound_states, closed_forms
from .bands import LatticeParams, h_factor, h_limit
from .core import OrderingScheme, sigma, wavenumber

AGREEMENT_RTOL = 1e-9

DEFAULT_WELLS = (
    bound_states.WellParams(2.0, 1.0, 50.0, 1.0, OrderingScheme(-0.5)),
    bound_states.WellParams(0.5, 1.0, 50.0, 1.0, OrderingScheme(-1.0)),
    bound_states.WellParams(1.0, 1.0, 20.0, 2.0, OrderingScheme(0.0)),
)


@dataclass(frozen=True)
class AuditEntry:
    claim: str
    printed: float
    computed: float
    note: str = ""
    abs_tol: float = 0.0

    @property
    def agrees(self) -> bool:
        return math.isclose(self.printed, self.computed, rel_tol=AGREEMENT_RTOL,
                            abs_tol=self.abs_tol)


@dataclass(frozen=True)
class AuditReport:
    entries: Tuple[AuditEntry, ...]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def by_claim(self, claim: str) -> AuditEntry:
        for entry in self.entries:
            if entry.claim == claim:
                return entry
        raise KeyError(claim)


def solve_step_amplitudes(m1, m2, V0, E, scheme, hbar=1.0) -> Tuple[complex, complex, complex]:
    """``(k1, k2, C/A)`` from the two junction conditions of the abrupt step."""
    a, b = scheme.alpha, scheme.beta
    k1 = wavenumber(E, m1, 0.0, hbar)
    k2 = wavenumber(E, m2, V0, hbar)
    # m1^a (A + B) = m2^a C ;  k1 m1^(a+b) (A - B) = k2 m2^(a+b) C, with A = 1
    lhs = np.array([[m1**a, -(m2**a)], [-k1 * m1 ** (a + b), -k2 * m2 ** (a + b)]], dtype=complex)
    rhs = np.array([-(m1**a), -k1 * m1 ** (a + b)], dtype=complex)
    _, C = np.linalg.solve(lhs, rhs)
    return k1, k2, C


def flux_transmission(m1, m2, V0, E, scheme, hbar=1.0) -> float:
    """``(k2/m2)/(k1/m1) |C/A|^2``, the current ratio."""
    k1, k2, C = solve_step_amplitudes(m1, m2, V0, E, scheme, hbar)
    return float((k2.real / m2) / (k1.real / m1) * abs(C) ** 2)


def printed_transmission(m1, m2, V0, E, scheme, hbar=1.0) -> float:
    """``(k1/m1)(m2/k2) |C/A|^2`` with the prefactor as printed."""
    k1, k2, C = solve_step_amplitudes(m1, m2, V0, E, scheme, hbar)
    return float((k1.real / m1) * (m2 / k2.real) * abs(C) ** 2)


def flux_reproduction_error(n_cases: int = 20, seed: int = 0) -> float:
    """Largest relative gap between the current-ratio T and the closed step form."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_cases):
        m1, m2 = rng.uniform(0.05, 5.0, size=2)
        V0 = rng.uniform(-2.0, 2.0)
        beta = rng.uniform(-1.5, 0.5)
        E = max(V0, 0.0) + rng.uniform(0.01, 10.0)
        scheme = OrderingScheme(beta)
        T_flux = flux_transmission(m1, m2, V0, E, scheme)
        T_closed = closed_forms.step_transmission(closed_forms.StepParams(m1, m2, V0, scheme), E)
        worst = max(worst, abs(T_flux - T_closed) / T_closed)
    return worst


def run_audit(m1: float = 1.0, m2: float = 4.0, V0: float = 1.0, beta: float = -1.0,
              E: float = 2.0,
              wells: Optional[Sequence[bound_states.WellParams]] = None) -> AuditReport:
    """The fixed audit suite; defaults give ``sigma = 2``.

    The printed well condition is checked on each of ``wells``; rows after the
    first are named ``well_condition_roots_2``, ``well_condition_roots_3`` and so on.
    """
    scheme = OrderingScheme(beta)
    s = sigma(m1 / m2, beta)
    step = closed_forms.StepParams(m1, m2, V0, scheme)
    entries: List[AuditEntry] = []

    T_printed = printed_transmission(m1, m2, V0, E, scheme)
    T_flux = flux_transmission(m1, m2, V0, E, scheme)
    T_closed = closed_forms.step_transmission(step, E)
    ratio = T_printed / T_flux
    expected_ratio = (m2 / m1) * E / (E - V0)
    entries.append(AuditEntry(
        "step_prefactor", T_printed, T_flux,
        f"printed/flux ratio {ratio:.12g} = (m2/m1) E/(E-V0) = {expected_ratio:.12g}; "
        f"closed step form {T_closed:.12g}"))
    entries.append(AuditEntry(
        "step_flux_reproduction", 0.0, flux_reproduction_error(),
        "max relative difference, current-ratio T vs closed step form, 20 random cases",
        abs_tol=1e-12))

    g_printed = (s * s - 1) / (4 * s * s)
    g_computed = closed_forms.g_limit(step)
    g_far = closed_forms.g_factor(step, 1e8 * abs(V0) if V0 else 1e8)
    entries.append(AuditEntry(
        "barrier_g_limit", g_printed, g_computed,
        f"sigma={s:.12g}; printed (s^2-1)/(4 s^2); computed ((s^2-1)/(2 s))^2; "
        f"g at E=1e8 V0 is {g_far:.12g}"))

    lattice = LatticeParams(m1, m2, V0 if V0 > 0 else 1.0, 1.0, 1.0, scheme)
    h_printed = (s * s + 1) ** 2 / (4 * s * s)
    entries.append(AuditEntry(
        "lattice_h_limit", h_printed, h_limit(lattice),
        f"printed (s^2+1)^2/(4 s^2) equals the square of the computed (s^2+1)/(2 s); "
        f"h at E=1e8 V0 is {h_factor(lattice, 1e8 * lattice.V0):.12g}"))

    barrier = closed_forms.StepParams(m1, m2, abs(V0) or 1.0, scheme)
    E_star = closed_forms.prefactor_max_energy(barrier)
    entries.append(AuditEntry(
        "tunnelling_prefactor_max", barrier.V0 / (1 + s), E_star,
        f"printed V0/(1+sigma); alternative V0/(1+sigma^2) = {barrier.V0 / (1 + s * s):.12g}"))

    if wells is None:
        wells = DEFAULT_WELLS
    for i, well in enumerate(wells):
        levels = bound_states.well_spectrum(well).energies
        roots = bound_states.printed_well_roots(well)
        first_root = roots[0] if roots else math.nan
        entries.append(AuditEntry(
            "well_condition_roots" if i == 0 else f"well_condition_roots_{i + 1}", first_root, float(levels[0]),
            f"printed condition has {len(roots)} root(s) "
            f"{[round(r, 9) for r in roots]}; matching conditions give {len(levels)} level(s) "
            f"{[round(float(e), 9) for e in levels]} (m1={well.m1}, m2={well.m2}, "
            f"V0={well.V0}, a={well.a}, beta={well.scheme.beta})"))
    return AuditReport(tuple(entries))
