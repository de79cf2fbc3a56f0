import math

import numpy as np
import pytest

from flatmass import DomainError, OrderingScheme, ResolutionError, Structure, scatter
from flatmass.bands import (
    LatticeParams,
    band_diagram,
    dispersion_rhs,
    h_factor,
    h_limit,
    indexed_gap_widths,
    quasimomentum,
    resolved_band_diagram,
)

HALF = OrderingScheme(-0.5)
BDD = OrderingScheme(-1.0)


def direct_rhs(p, E):
    """Complex-arithmetic form of the Bloch condition, used as a cross-check."""
    k1 = math.sqrt(2 * p.m1 * E) / p.constants.hbar
    k2 = complex(2 * p.m2 * (E - p.V0)) ** 0.5 / p.constants.hbar
    rho = k2 * p.m2**p.scheme.beta / (k1 * p.m1**p.scheme.beta)
    h = (rho + 1 / rho) / 2
    value = math.cos(k1 * p.b) * np.cos(k2 * p.a) - h * math.sin(k1 * p.b) * np.sin(k2 * p.a)
    return value.real


def test_free_lattice_is_gapless():
    p = LatticeParams(1.0, 1.0, 0.0, 0.7, 0.6, BDD)
    E = np.linspace(0.01, 40, 301)
    np.testing.assert_allclose(dispersion_rhs(p, E), np.cos(np.sqrt(2 * E) * 1.3), atol=1e-13)
    diagram = band_diagram(p, 0.01, 40)
    assert len(diagram.bands) == 1
    # k = 2 lies in the first zone (pi/d = 2.42), so the Bloch wavenumber is k itself
    assert quasimomentum(p, 2.0) == pytest.approx(2.0, rel=1e-12)


def test_quasimomentum_in_gap_is_none():
    p = LatticeParams(1.0, 2.0, 1.0, 1.0, 1.0, HALF)
    lo, hi = band_diagram(p, 0.05, 20.0, grid=4000).gaps[0]
    assert quasimomentum(p, (lo + hi) / 2) is None
    assert 0 <= quasimomentum(p, lo / 2) <= math.pi / p.d


@pytest.mark.parametrize("beta", [-1.0, -0.5, 0.0])
def test_rhs_matches_complex_form(beta, rng):
    p = LatticeParams(1.0, 2.0, 1.0, 1.0, 1.0, OrderingScheme(beta))
    for E in rng.uniform(0.01, 30, 50):
        if abs(E - 1.0) < 1e-6:
            continue
        assert dispersion_rhs(p, E) == pytest.approx(direct_rhs(p, E), abs=1e-11)


def test_rhs_continuous_at_barrier_top():
    p = LatticeParams(1.0, 2.0, 1.0, 1.0, 1.0, BDD)
    lo, mid, hi = dispersion_rhs(p, np.array([1 - 1e-9, 1.0, 1 + 1e-9]))
    assert abs(lo - mid) < 1e-7 and abs(hi - mid) < 1e-7


def test_h_factor():
    p = LatticeParams(1.0, 1.0, 1.0, 1.0, 1.0, BDD)
    assert h_factor(p, 2.0) == pytest.approx(math.sqrt(9 / 8), rel=1e-14)
    assert h_limit(p) == 1.0
    q = LatticeParams(1.0, 4.0, 1.0, 1.0, 1.0, BDD)
    assert h_limit(q) == pytest.approx(1.25, rel=1e-15)
    assert h_factor(q, 1e8) == pytest.approx(1.25, abs=1e-3)
    with pytest.raises(DomainError):
        h_factor(q, 0.5)


def test_band_edges_and_interiors(rng):
    p = LatticeParams(1.0, 2.0, 1.0, 1.0, 1.0, BDD)
    diagram = band_diagram(p, 0.01, 60.0, grid=4000)
    assert len(diagram.bands) > 5
    for lo, hi in diagram.bands:
        if lo > 0.01:
            assert abs(abs(dispersion_rhs(p, lo)) - 1) < 1e-8
        for E in rng.uniform(lo, hi, 10):
            assert abs(dispersion_rhs(p, E)) <= 1 + 1e-12
    for lo, hi in diagram.gaps:
        assert hi > lo
        for E in rng.uniform(lo, hi, 10)[1:-1]:
            assert abs(dispersion_rhs(p, E)) >= 1 - 1e-12


def test_coarse_grid_raises():
    p = LatticeParams(1.0, 2.0, 1.0, 1.0, 1.0, BDD)
    with pytest.raises(ResolutionError):
        band_diagram(p, 0.01, 2000.0, grid=50)
    fine = resolved_band_diagram(p, 0.01, 2000.0, grid=50)
    assert len(fine.bands) > 20


def test_gaps_show_up_in_finite_lattice_transmission():
    p = LatticeParams(1.0, 2.0, 1.0, 1.0, 1.0, HALF)
    diagram = band_diagram(p, 0.05, 20.0, grid=4000)
    structure = Structure.multibarrier(1.0, 2.0, 1.0, 1.0, 1.0, 20)
    lo, hi = max(diagram.gaps, key=lambda g: g[1] - g[0])
    gap_T = scatter(structure, (lo + hi) / 2, HALF).transmission
    band = next(b for b in diagram.bands if b[0] > hi)
    band_T = max(scatter(structure, E, HALF).transmission
                 for E in np.linspace(band[0], band[1], 41)[1:-1])
    assert band_T / gap_T >= 1e2


def test_gap_shrinks_for_half_ordering():
    p = LatticeParams(1.0, 2.0, 1.0, 1.0, 1.0, HALF)
    widths = indexed_gap_widths(p, 1, 20)
    assert widths[-1] < 0.05 * widths[0]


def test_validation():
    with pytest.raises(DomainError):
        LatticeParams(1.0, 2.0, -1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        LatticeParams(1.0, 2.0, 1.0, 0.0, 1.0)
    p = LatticeParams(1.0, 2.0, 1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        band_diagram(p, 2.0, 1.0)
    with pytest.raises(DomainError):
        dispersion_rhs(p, 0.0)
