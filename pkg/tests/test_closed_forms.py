import math

import numpy as np
import pytest
from conftest import BETAS
from hypothesis import given, settings
from hypothesis import strategies as st

from flatmass import DomainError, OrderingScheme, Structure, scatter
from flatmass.closed_forms import (
    BarrierParams,
    StepParams,
    barrier_transmission,
    g_factor,
    g_limit,
    prefactor_max_energy,
    ramsauer_energies,
    sinc,
    step_asymptote,
    step_reflection,
    step_transmission,
    thick_barrier_transmission,
    transparency_energy,
    tunnelling_prefactor,
)

BDD = OrderingScheme(-1.0)
HALF = OrderingScheme(-0.5)


def test_sinc_series_and_direct_agree():
    z = np.array([1e-3 * 0.999, 1e-3 * 1.001, 0.5j, 0.0])
    np.testing.assert_allclose(sinc(z[:2]), np.sin(z[:2]) / z[:2], rtol=1e-15)
    assert sinc(0.5j) == pytest.approx(math.sinh(0.5) / 0.5, rel=1e-15)
    assert sinc(0.0) == 1.0
    assert np.isinf(sinc(800j).real)


class TestStep:
    def test_uniform_medium(self):
        assert step_transmission(StepParams(2.0, 2.0, 0.0, HALF), 5.0) == pytest.approx(1.0)

    def test_worked_example(self):
        p = StepParams(1, 4, 1, BDD)
        T = step_transmission(p, 2.0)
        assert T == pytest.approx(8 * math.sqrt(2) / (2 * math.sqrt(2) + 1) ** 2, rel=1e-15)
        assert T == pytest.approx(0.77190, abs=1e-5)
        assert step_reflection(p, 2.0) == pytest.approx(0.22810, abs=1e-5)

    def test_pure_mass_step_is_energy_independent(self):
        p = StepParams(1, 4, 0, BDD)
        np.testing.assert_allclose(step_transmission(p, np.geomspace(1e-3, 1e3, 7)), 8 / 9,
                                   rtol=1e-14)

    def test_total_reflection_below_step(self):
        p = StepParams(1.7, 0.3, 2.0, OrderingScheme(-0.2))
        assert step_reflection(p, 1.0) == 1.0
        assert step_transmission(p, 1.0) == 0.0
        assert step_transmission(p, 2.0) == 0.0

    def test_non_positive_energy_rejected(self):
        with pytest.raises(DomainError):
            step_transmission(StepParams(1, 1, 0), 0.0)
        with pytest.raises(DomainError):
            step_reflection(StepParams(1, 1, 0), -1.0)

    @given(st.floats(0.05, 20), st.floats(0.05, 20), st.floats(-5, 5), st.floats(-2, 1),
           st.floats(1e-3, 100))
    def test_conservation(self, m1, m2, V0, beta, E):
        p = StepParams(m1, m2, V0, OrderingScheme(beta))
        assert step_transmission(p, E) + step_reflection(p, E) == pytest.approx(1.0, abs=1e-12)

    def test_asymptote(self):
        assert step_asymptote(StepParams(1, 4, 1, HALF)) == 1.0
        assert step_asymptote(StepParams(3, 3, 1, BDD)) == 1.0
        p = StepParams(1, 4, 1, BDD)
        assert step_asymptote(p) == pytest.approx(8 / 9, rel=1e-15)
        assert abs(step_transmission(p, 1e8) - step_asymptote(p)) <= 1e-3

    def test_transparency_energy(self):
        p = StepParams(4, 1, 1, BDD)
        E_t = transparency_energy(p)
        assert E_t == pytest.approx(4 / 3, rel=1e-15)
        assert step_reflection(p, E_t) <= 1e-12
        # independent: root of R(E) located by a dense scan
        grid = np.linspace(1.01, 3.0, 20001)
        assert grid[np.argmin(step_reflection(p, grid))] == pytest.approx(4 / 3, abs=1e-4)
        assert transparency_energy(StepParams(4, 1, 1, HALF)) is None
        assert transparency_energy(StepParams(1, 4, 1, BDD)) is None
        with pytest.raises(DomainError):
            transparency_energy(StepParams(4, 1, 0.0, BDD))

    @pytest.mark.parametrize("beta", BETAS)
    @pytest.mark.parametrize("ratio", [0.25, 1.0, 4.0])
    def test_matches_oracle(self, beta, ratio):
        scheme = OrderingScheme(beta)
        p = StepParams(ratio, 1.0, 1.0, scheme)
        for E in (1.0 + 1e-6, 1.3, 2.0, 7.5, 40.0):
            sol = scatter(Structure.step(ratio, 1.0, 1.0), E, scheme)
            assert step_transmission(p, E) == pytest.approx(sol.transmission, rel=1e-10)


class TestBarrier:
    def test_ramsauer_transparency(self):
        p = BarrierParams(1, 2, 1, 2, HALF)
        E = 1 + math.pi**2 / 16
        assert ramsauer_energies(p, 2.0) == [pytest.approx(E, rel=1e-15)]
        assert barrier_transmission(p, E) == pytest.approx(1.0, abs=1e-14)
        assert scatter(Structure.barrier(1, 2, 1, 2), E, HALF).transmission == pytest.approx(
            1.0, abs=1e-12)

    def test_sub_barrier_example(self):
        p = BarrierParams(1, 2, 1, 2, BDD)
        expected = 1 / (1 + 1.125 * math.sinh(2 * math.sqrt(2)) ** 2)
        assert math.sinh(2 * math.sqrt(2)) ** 2 == pytest.approx(71.06, abs=5e-3)
        assert barrier_transmission(p, 0.5) == pytest.approx(expected, rel=1e-14)

    def test_no_barrier(self):
        p = BarrierParams(1.5, 1.5, 0.0, 3.0, HALF)
        np.testing.assert_allclose(barrier_transmission(p, np.linspace(0.1, 10, 11)), 1.0)

    def test_threshold_continuity(self):
        p = BarrierParams(1, 2, 1, 2, BDD)
        lo, mid, hi = barrier_transmission(p, [1 - 1e-8, 1.0, 1 + 1e-8])
        assert abs(hi - lo) <= 1e-6
        # the finite limit N^2 2 m2 a^2 / (4 sigma^2 V0 hbar^2) with N = sigma^2 V0
        limit = 1 / (1 + (2 * 1.0) ** 2 * 2 * 2 * 4 / (4 * 2 * 1.0))
        assert mid == pytest.approx(limit, rel=1e-14)

    def test_well_is_allowed(self):
        p = BarrierParams(1, 0.5, -2.0, 1.0, BDD)
        T = barrier_transmission(p, 0.7)
        assert T == pytest.approx(scatter(Structure.barrier(1, 0.5, -2.0, 1.0), 0.7,
                                          BDD).transmission, rel=1e-12)

    def test_half_is_constant_mass(self):
        E = np.linspace(0.01, 6, 301)
        a = barrier_transmission(BarrierParams(0.3, 2, 1, 1.5, HALF), E)
        b = barrier_transmission(BarrierParams(2, 2, 1, 1.5, HALF), E)
        np.testing.assert_allclose(a, b, rtol=1e-12, atol=0)

    def test_transparency_energy_makes_barrier_transparent(self):
        p = BarrierParams(4, 1, 1, 0.8, BDD)
        E_t = transparency_energy(p.step)
        assert barrier_transmission(p, E_t) == pytest.approx(1.0, abs=1e-10)
        assert scatter(Structure.barrier(4, 1, 1, 0.8), E_t, BDD).transmission == pytest.approx(
            1.0, abs=1e-10)


class TestG:
    def test_half_reduces_to_constant_mass(self):
        p = StepParams(0.2, 3, 1.5, HALF)
        E = 4.0
        assert g_factor(p, E) == pytest.approx(1.5**2 / (4 * E * (E - 1.5)), rel=1e-14)

    def test_limit(self):
        p = StepParams(1, 4, 1, BDD)
        assert g_limit(p) == pytest.approx(9 / 16, rel=1e-15)
        assert g_factor(p, 1e9) == pytest.approx(9 / 16, rel=1e-8)

    def test_zero(self):
        assert g_factor(StepParams(1, 1, 0.0, HALF), 3.0) == 0.0

    def test_domain(self):
        with pytest.raises(DomainError):
            g_factor(StepParams(1, 2, 1), 0.5)


class TestThickBarrier:
    def test_worked_example(self):
        p = BarrierParams(1, 2, 1, 2, BDD)
        approx = thick_barrier_transmission(p, 0.5)
        assert approx == pytest.approx(16 * 2 * 0.25 / 1.5**2 * math.exp(-4 * math.sqrt(2)),
                                       rel=1e-14)
        assert approx == pytest.approx(1.24e-2, rel=5e-3)
        exact = barrier_transmission(p, 0.5)
        assert abs(approx - exact) / exact < 0.01

    def test_constant_mass_reduction(self):
        p = BarrierParams(1.3, 1.3, 2.0, 3.0, BDD)
        E = 0.7
        kappa = math.sqrt(2 * 1.3 * (2.0 - E))
        expected = 16 * E * (2.0 - E) / 4.0 * math.exp(-2 * kappa * 3.0)
        assert thick_barrier_transmission(p, E) == pytest.approx(expected, rel=1e-14)

    @pytest.mark.parametrize("m1,m2,beta", [(1, 4, -1.0), (1, 1, -1.0), (4, 1, -1.0)])
    def test_accuracy_when_thick(self, m1, m2, beta):
        E = np.linspace(0.1, 0.9, 81)
        p = BarrierParams(m1, m2, 1.0, 6.0, OrderingScheme(beta))
        kappa_a = np.sqrt(2 * m2 * (1 - E)) * 6.0
        mask = kappa_a >= 5
        exact = barrier_transmission(p, E[mask])
        approx = thick_barrier_transmission(p, E[mask])
        assert mask.any()
        assert np.max(np.abs(approx - exact) / exact) < 0.02

    def test_domain(self):
        with pytest.raises(DomainError):
            thick_barrier_transmission(BarrierParams(1, 2, 1, 2), 1.5)


class TestPrefactorMax:
    def test_constant_mass(self):
        assert prefactor_max_energy(StepParams(1, 1, 3.0, BDD)) == pytest.approx(1.5, rel=1e-12)
        assert prefactor_max_energy(StepParams(1, 5, 3.0, HALF)) == pytest.approx(1.5, rel=1e-12)

    def test_sigma_two_matches_one_over_one_plus_sigma_squared(self):
        p = StepParams(1, 4, 1.0, BDD)
        E_star = prefactor_max_energy(p)
        assert E_star == pytest.approx(1 / 5, rel=1e-10)
        assert abs(E_star - 1 / 3) > 0.1
        # golden-section style brute force on the prefactor itself
        grid = np.linspace(1e-6, 1 - 1e-6, 200001)
        assert grid[np.argmax(tunnelling_prefactor(p, grid))] == pytest.approx(0.2, abs=1e-5)

    def test_continuity_at_sigma_one(self):
        for m1 in (0.999999, 1.000001):
            p = StepParams(m1, 1.0, 2.0, BDD)
            assert prefactor_max_energy(p) == pytest.approx(1.0, rel=1e-5)

    @settings(max_examples=50)
    @given(st.floats(0.01, 100), st.floats(0.1, 10))
    def test_general_sigma(self, mu, V0):
        p = StepParams(mu, 1.0, V0, BDD)
        s2 = p.sigma**2
        assert prefactor_max_energy(p) == pytest.approx(V0 / (1 + s2), rel=1e-10)
