"""Scikit-learn style wrappers.

``fit`` takes the symmetry operator and builds the projector; ``transform``
projects state vectors (rows) onto the selected sector.  Both estimators
support ``get_params``/``set_params``/``clone`` and can sit in a
:class:`sklearn.pipeline.Pipeline` after any step producing state vectors.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import projector as _proj
from .core import SpectrumSpec
from .validation import check_operator, check_states

__all__ = ["SymmetryProjector", "SectorProjector"]


class SymmetryProjector(TransformerMixin, BaseEstimator):
    """Projector onto one eigenvalue sector of a Hermitian symmetry operator.

    Parameters
    ----------
    method : {'lagrange', 'fourier_equidistant', 'cyclic_quadrature', 'riesz'}
        Constructor used in ``fit``.
    target : float
        Eigenvalue whose eigenspace is selected.
    spectrum : sequence of float or SpectrumSpec, optional
        Distinct eigenvalues (lagrange, riesz).  Derived by diagonalization
        when omitted; ``report_.spectrum_source`` then reads ``"oracle"``.
    spacing : float
        Eigenvalue spacing ``d`` (fourier_equidistant).
    n_terms : int, optional
        Terms ``M`` of the Fourier sum or quadrature nodes.  Defaults to the
        number of distinct eigenvalues, which needs the spectrum.
    rescale : float
        Divisor making eigenvalue offsets integers (cyclic_quadrature).
    radius : float, optional
        Contour radius (riesz); half the nearest gap when omitted.
    nodes : int
        Trapezoid nodes on the contour (riesz).
    tol : float
        Convergence threshold for the report residuals.
    strict : bool
        Raise in ``fit`` when the projector is flagged unconverged.

    Attributes
    ----------
    projector_ : ndarray of shape (n_features, n_features)
    report_ : ProjectorReport
    n_features_in_ : int
    """

    _methods = ("lagrange", "fourier_equidistant", "cyclic_quadrature", "riesz")

    def __init__(self, method="lagrange", target=0.0, spectrum=None, spacing=1.0,
                 n_terms=None, rescale=1.0, radius=None, nodes=64, tol=1e-6, strict=True):
        self.method = method
        self.target = target
        self.spectrum = spectrum
        self.spacing = spacing
        self.n_terms = n_terms
        self.rescale = rescale
        self.radius = radius
        self.nodes = nodes
        self.tol = tol
        self.strict = strict

    def fit(self, X, y=None):
        if self.method not in self._methods:
            raise ValueError(f"method must be one of {self._methods}, got {self.method!r}")
        op = check_operator(X)
        if self.method == "lagrange":
            report = _proj.lagrange_projector(op, self.spectrum, target=self.target, tol=self.tol)
        elif self.method == "riesz":
            report = _proj.riesz_projector(op, self.target, self.radius, self.nodes,
                                           self.spectrum, tol=self.tol)
        else:
            m = self.n_terms
            if m is None:
                spec = self.spectrum
                if spec is None:
                    spec = SpectrumSpec.from_operator(op)
                m = len(spec) if self.method == "fourier_equidistant" else len(spec) + 1
            if self.method == "fourier_equidistant":
                report = _proj.equidistant_fourier_projector(op, self.target, self.spacing, m,
                                                             tol=self.tol)
            else:
                report = _proj.cyclic_quadrature_projector(op, self.target, m, self.rescale,
                                                           tol=self.tol)
        if self.strict and not report.converged:
            raise ValueError("projector did not converge: " + "; ".join(report.notes))
        self.report_ = report
        self.projector_ = np.array(report.matrix)
        self.n_features_in_ = op.shape[0]
        return self

    def transform(self, X):
        """Project each row of ``X`` onto the sector."""
        check_is_fitted(self, "projector_")
        states, squeeze = check_states(X, self.n_features_in_)
        out = states @ self.projector_.T
        return out[0] if squeeze else out

    def weight(self, X):
        """Fraction of each row's squared norm inside the sector."""
        check_is_fitted(self, "projector_")
        states, squeeze = check_states(X, self.n_features_in_)
        proj = states @ self.projector_.T
        w = np.einsum("ij,ij->i", proj.conj(), proj).real / np.einsum("ij,ij->i", states.conj(), states).real
        return w[0] if squeeze else w


class SectorProjector(TransformerMixin, BaseEstimator):
    """Product of commuting :class:`SymmetryProjector` instances.

    ``fit`` takes a list of symmetry operators, one per entry of ``steps``.

    Parameters
    ----------
    steps : list of (str, SymmetryProjector)
    """

    def __init__(self, steps):
        self.steps = steps

    def fit(self, X, y=None):
        if len(X) != len(self.steps):
            raise ValueError(f"expected {len(self.steps)} operators, got {len(X)}")
        from sklearn.base import clone

        self.steps_ = [(name, clone(est).fit(op)) for (name, est), op in zip(self.steps, X)]
        self.report_ = _proj.composite_projector([est.projector_ for _, est in self.steps_])
        self.projector_ = np.array(self.report_.matrix)
        self.n_features_in_ = self.projector_.shape[0]
        return self

    def transform(self, X):
        check_is_fitted(self, "projector_")
        states, squeeze = check_states(X, self.n_features_in_)
        out = states @ self.projector_.T
        return out[0] if squeeze else out
