"""scikit-learn style wrappers.

Each estimator takes its physical parameters in ``__init__`` (so
``get_params``/``set_params``/``clone`` work), validates them in ``fit`` and
maps an array of energies to per-energy outputs. Energies may be given as a
1-D array or as a single-column 2-D array.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from . import bands, bound_states, closed_forms, matching
from .core import DomainError, Lead, OrderingScheme, PhysicalConstants, Structure


def check_energies(X, positive=True) -> np.ndarray:
    """Validate an energy array and return it flattened to 1-D floats."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 0:
        X = X.reshape(1)
    X = check_array(X, ensure_2d=False, dtype=float)
    if X.ndim == 2:
        if X.shape[1] != 1:
            raise ValueError(f"energies must be a single column, got shape {X.shape}")
        X = X[:, 0]
    if positive and np.any(X <= 0):
        raise DomainError("energies must be positive")
    return X


class _EnergyModel(TransformerMixin, BaseEstimator):
    """Shared ``fit``/``transform``: subclasses build ``params_`` and ``_columns``."""

    def fit(self, X=None, y=None):
        if self.hbar <= 0:
            raise DomainError("hbar must be positive")
        self.scheme_ = OrderingScheme(self.beta)
        self.constants_ = PhysicalConstants(self.hbar)
        self._build()
        return self

    def transform(self, X):
        check_is_fitted(self, "scheme_")
        return np.column_stack(self._columns(check_energies(X)))

    def predict(self, X):
        """Transmission probability for each energy."""
        return self.transform(X)[:, 0]


class StepScatterer(_EnergyModel):
    """Abrupt potential-and-mass step; ``transform`` gives ``[T, R]`` columns.

    Attributes set by ``fit``: ``sigma_``, ``asymptote_`` and
    ``transparency_energy_`` (``None`` when the step never turns transparent).
    """

    def __init__(self, m1=1.0, m2=1.0, V0=0.0, beta=-0.5, hbar=1.0):
        self.m1 = m1
        self.m2 = m2
        self.V0 = V0
        self.beta = beta
        self.hbar = hbar

    def _build(self):
        self.params_ = closed_forms.StepParams(self.m1, self.m2, self.V0, self.scheme_,
                                               self.constants_)
        self.sigma_ = self.params_.sigma
        self.asymptote_ = closed_forms.step_asymptote(self.params_)
        self.transparency_energy_ = (closed_forms.transparency_energy(self.params_)
                                     if self.V0 > 0 else None)

    def _columns(self, E):
        return (closed_forms.step_transmission(self.params_, E),
                closed_forms.step_reflection(self.params_, E))


class BarrierScatterer(_EnergyModel):
    """Rectangular barrier (``V0 > 0``) or well (``V0 < 0``) of width ``a``."""

    def __init__(self, m1=1.0, m2=1.0, V0=1.0, a=1.0, beta=-0.5, hbar=1.0):
        self.m1 = m1
        self.m2 = m2
        self.V0 = V0
        self.a = a
        self.beta = beta
        self.hbar = hbar

    def _build(self):
        self.params_ = closed_forms.BarrierParams(self.m1, self.m2, self.V0, self.a,
                                                  self.scheme_, self.constants_)
        self.sigma_ = self.params_.sigma
        self.g_limit_ = closed_forms.g_limit(self.params_)

    def _columns(self, E):
        T = closed_forms.barrier_transmission(self.params_, E)
        return T, 1.0 - T


class StructureScatterer(_EnergyModel):
    """Any piecewise-constant ``Structure`` through the transfer-matrix oracle.

    ``structure`` may be a ``Structure`` or ``None`` for a uniform unit-mass line.
    """

    def __init__(self, structure=None, beta=-0.5, hbar=1.0):
        self.structure = structure
        self.beta = beta
        self.hbar = hbar

    def _build(self):
        structure = self.structure
        if structure is None:
            structure = Structure(Lead(1.0))
        if not isinstance(structure, Structure):
            raise TypeError(f"expected a Structure, got {type(structure).__name__}")
        self.structure_ = structure

    def solve(self, X):
        check_is_fitted(self, "structure_")
        return [matching.scatter(self.structure_, float(e), self.scheme_, self.constants_)
                for e in check_energies(X, positive=False)]

    def transform(self, X):
        sols = self.solve(X)
        return np.array([[s.transmission, s.reflection] for s in sols]).reshape(-1, 2)


class WellSpectrum(BaseEstimator):
    """Bound states of the symmetric potential-and-mass well.

    ``fit`` sets ``energies_``, ``parities_`` and ``n_levels_``.
    """

    def __init__(self, m1=1.0, m2=1.0, V0=1.0, a=1.0, beta=-0.5, hbar=1.0):
        self.m1 = m1
        self.m2 = m2
        self.V0 = V0
        self.a = a
        self.beta = beta
        self.hbar = hbar

    def fit(self, X=None, y=None):
        params = bound_states.WellParams(self.m1, self.m2, self.V0, self.a,
                                         OrderingScheme(self.beta), PhysicalConstants(self.hbar))
        spectrum = bound_states.well_spectrum(params)
        self.params_ = params
        self.energies_ = spectrum.energies
        self.parities_ = spectrum.parities
        self.n_levels_ = len(spectrum)
        return self


class LatticeDispersion(_EnergyModel):
    """Periodic multibarrier; ``transform`` gives ``[rhs, quasimomentum]``.

    The quasimomentum column is NaN inside gaps and ``predict`` returns the
    allowed-band mask.
    """

    def __init__(self, m1=1.0, m2=1.0, V0=1.0, a=1.0, b=1.0, beta=-0.5, hbar=1.0):
        self.m1 = m1
        self.m2 = m2
        self.V0 = V0
        self.a = a
        self.b = b
        self.beta = beta
        self.hbar = hbar

    def _build(self):
        self.params_ = bands.LatticeParams(self.m1, self.m2, self.V0, self.a, self.b,
                                           self.scheme_, self.constants_)
        self.sigma_ = self.params_.sigma
        self.h_limit_ = bands.h_limit(self.params_)

    def _columns(self, E):
        rhs = np.atleast_1d(bands.dispersion_rhs(self.params_, E))
        with np.errstate(invalid="ignore"):
            p = np.where(np.abs(rhs) <= 1, np.arccos(np.clip(rhs, -1, 1)) / self.params_.d,
                         np.nan)
        return rhs, p

    def predict(self, X):
        return ~np.isnan(self.transform(X)[:, 1])

    def band_diagram(self, E_min, E_max, grid=1000):
        check_is_fitted(self, "params_")
        return bands.band_diagram(self.params_, E_min, E_max, grid)
