"""Dense operator arithmetic and the spectral-decomposition oracle.

Every projector constructor in :mod:`symproj.projector` is built from
commutators, products, inverses and exponentials only.  The eigen-solver
entry points here (:func:`hermitian_eigensystem`,
:func:`spectral_projector_oracle`) exist to check those constructions, and
are never called by them implicitly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from ._jsonfmt import dumps as _json_dumps

__all__ = [
    "CLUSTER_TOL",
    "Operator",
    "SpectrumSpec",
    "EigenSystem",
    "as_matrix",
    "commutator",
    "matrix_exponential",
    "hermitian_eigensystem",
    "cluster_eigenvalues",
    "spectral_projector_oracle",
    "frobenius_inner",
    "dumps_operator",
    "loads_operator",
    "save_operator",
    "load_operator",
]

CLUSTER_TOL = 1e-8
HERMITIAN_HINT_TOL = 1e-12
MAX_DIM = 4096


class Operator:
    """Immutable dense complex square matrix.

    Parameters
    ----------
    entries : array_like, shape (dim, dim)
        Matrix elements; copied and stored as read-only ``complex128``.
    hermitian_hint : bool or None
        ``True`` asserts hermiticity and is checked on construction
        (``max |A - A^H| <= 1e-12``); ``False`` and ``None`` are recorded
        but not verified.
    """

    __slots__ = ("_m", "hermitian_hint")
    __array_priority__ = 100

    def __init__(self, entries, hermitian_hint: bool | None = None):
        m = np.array(entries, dtype=np.complex128, copy=True)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"operator must be a square matrix, got shape {m.shape}")
        if m.shape[0] < 1:
            raise ValueError("operator dimension must be positive")
        if m.shape[0] > MAX_DIM:
            raise ValueError(f"operator dimension {m.shape[0]} exceeds supported maximum {MAX_DIM}")
        if hermitian_hint:
            dev = float(np.max(np.abs(m - m.conj().T)))
            if dev > HERMITIAN_HINT_TOL:
                raise ValueError(f"hermitian_hint=True but max |A - A^H| = {dev:.3e}")
        m.setflags(write=False)
        self._m = m
        self.hermitian_hint = hermitian_hint

    @property
    def entries(self) -> np.ndarray:
        return self._m

    @property
    def dim(self) -> int:
        return self._m.shape[0]

    @property
    def H(self) -> "Operator":
        """Hermitian adjoint."""
        return Operator(self._m.conj().T, self.hermitian_hint)

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._m if not copy else self._m.copy()
        return self._m.astype(dtype)

    def __matmul__(self, other):
        return Operator(self._m @ as_matrix(other))

    def __rmatmul__(self, other):
        return Operator(as_matrix(other) @ self._m)

    def __add__(self, other):
        return Operator(self._m + as_matrix(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Operator(self._m - as_matrix(other))

    def __rsub__(self, other):
        return Operator(as_matrix(other) - self._m)

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return Operator(self._m * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return Operator(self._m / scalar)

    def __neg__(self):
        return Operator(-self._m, self.hermitian_hint)

    def __repr__(self) -> str:
        return f"Operator(dim={self.dim}, hermitian_hint={self.hermitian_hint})"

    def hermiticity_residual(self) -> float:
        """Frobenius norm of ``A - A^H``."""
        return float(np.linalg.norm(self._m - self._m.conj().T))

    @classmethod
    def identity(cls, dim: int) -> "Operator":
        return cls(np.eye(dim), hermitian_hint=True)


def as_matrix(a) -> np.ndarray:
    """Return the complex ndarray behind an :class:`Operator` or array-like."""
    if isinstance(a, Operator):
        return a.entries
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"operator must be a square matrix, got shape {m.shape}")
    return m


def _check_same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")


@dataclass(frozen=True)
class SpectrumSpec:
    """Distinct eigenvalues of a symmetry operator.

    ``source`` is ``"declared"`` when the caller supplied the values and
    ``"oracle"`` when they came from :meth:`from_operator`.
    """

    values: tuple[float, ...]
    degeneracies: tuple[int, ...] | None = None
    spacing: float | None = None
    source: str = "declared"
    cluster_tol: float = field(default=CLUSTER_TOL, compare=False)

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise ValueError("spectrum must contain at least one value")
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("spectrum values must be finite")
        for a, b in zip(vals, vals[1:]):
            if b - a < self.cluster_tol:
                if abs(b - a) < self.cluster_tol:
                    raise ValueError(f"duplicate spectrum values {a!r} and {b!r}")
                raise ValueError("spectrum values must be strictly increasing")
        object.__setattr__(self, "values", vals)
        if self.degeneracies is not None:
            degs = tuple(int(g) for g in self.degeneracies)
            if len(degs) != len(vals) or any(g < 1 for g in degs):
                raise ValueError("degeneracies must be positive, one per value")
            object.__setattr__(self, "degeneracies", degs)
        if self.spacing is not None:
            d = float(self.spacing)
            if not d > 0:
                raise ValueError("spacing must be positive")
            for a, b in zip(vals, vals[1:]):
                if abs((b - a) - d) > 1e-10:
                    raise ValueError(f"gap {b - a!r} between {a!r} and {b!r} differs from spacing {d!r}")
            object.__setattr__(self, "spacing", d)
        if self.source not in ("declared", "oracle"):
            raise ValueError(f"unknown spectrum source {self.source!r}")

    def __len__(self) -> int:
        return len(self.values)

    def index_of(self, target: float, tol: float | None = None) -> int:
        """Index of the value within ``tol`` of ``target``."""
        tol = self.cluster_tol if tol is None else tol
        diffs = [abs(v - target) for v in self.values]
        k = int(np.argmin(diffs))
        if diffs[k] > tol:
            raise ValueError(
                f"target {target!r} not in spectrum; nearest value is {self.values[k]!r}"
            )
        return k

    def check_dimension(self, dim: int) -> None:
        if self.degeneracies is not None and sum(self.degeneracies) != dim:
            raise ValueError(
                f"degeneracies sum to {sum(self.degeneracies)}, operator dimension is {dim}"
            )

    @classmethod
    def declared(cls, values: Iterable[float], spacing: float | None = None,
                 degeneracies: Sequence[int] | None = None) -> "SpectrumSpec":
        return cls(tuple(sorted(float(v) for v in values)), degeneracies, spacing, "declared")

    @classmethod
    def from_operator(cls, a, cluster_tol: float = CLUSTER_TOL,
                      spacing_tol: float = 1e-10) -> "SpectrumSpec":
        """Derive the spectrum by diagonalization (oracle provenance).

        Equidistant spacing is detected and recorded when all gaps agree to
        ``spacing_tol``.
        """
        es = hermitian_eigensystem(a)
        clusters = cluster_eigenvalues(es.eigenvalues, cluster_tol)
        values = tuple(float(np.mean(c)) for c in clusters)
        degs = tuple(len(c) for c in clusters)
        spacing = None
        if len(values) > 1:
            gaps = np.diff(values)
            if np.ptp(gaps) <= spacing_tol:
                spacing = float(np.mean(gaps))
        return cls(values, degs, spacing, "oracle", cluster_tol)


@dataclass(frozen=True)
class EigenSystem:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def commutator(a, b) -> Operator:
    """Return ``ab - ba``."""
    am, bm = as_matrix(a), as_matrix(b)
    _check_same_dim(am, bm)
    return Operator(am @ bm - bm @ am)


def frobenius_inner(a, b) -> complex:
    """Return ``trace(a^H b)``."""
    am, bm = as_matrix(a), as_matrix(b)
    _check_same_dim(am, bm)
    return complex(np.vdot(am, bm))


_EPS = np.finfo(float).eps


def _expm_taylor(b: np.ndarray) -> np.ndarray:
    # Scale to 1-norm <= 1/2, sum the series until terms fall below eps, square back.
    n = b.shape[0]
    norm = np.linalg.norm(b, 1)
    squarings = max(0, int(math.ceil(math.log2(norm / 0.5)))) if norm > 0.5 else 0
    b = b / (2.0 ** squarings)
    result = np.eye(n, dtype=np.complex128)
    term = np.eye(n, dtype=np.complex128)
    for k in range(1, 60):
        term = term @ b / k
        result = result + term
        if np.linalg.norm(term, 1) <= _EPS * np.linalg.norm(result, 1):
            break
    for _ in range(squarings):
        result = result @ result
    return result


def matrix_exponential(a, scalar: complex = 1.0) -> Operator:
    """Return ``exp(scalar * a)`` by scaling and squaring of the Taylor series.

    No diagonalization is involved.
    """
    m = as_matrix(a)
    if not np.all(np.isfinite(m)) or not np.isfinite(complex(scalar)):
        raise ValueError("matrix_exponential: non-finite entries")
    b = complex(scalar) * m
    if not np.all(np.isfinite(b)):
        raise ValueError("matrix_exponential: non-finite entries in scalar * a")
    return Operator(_expm_taylor(b))


def hermitian_eigensystem(a, tol: float = 1e-10) -> EigenSystem:
    """Eigendecomposition of a Hermitian operator, eigenvalues ascending."""
    m = as_matrix(a)
    dev = float(np.max(np.abs(m - m.conj().T)))
    if dev > tol:
        raise ValueError(f"operator is not Hermitian: max |A - A^H| = {dev:.3e}")
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    return EigenSystem(w, v)


def cluster_eigenvalues(eigenvalues: Sequence[float], tol: float = CLUSTER_TOL) -> list[list[float]]:
    """Group ascending eigenvalues whose consecutive gaps are ``<= tol``."""
    clusters: list[list[float]] = []
    for w in eigenvalues:
        if clusters and w - clusters[-1][-1] <= tol:
            clusters[-1].append(float(w))
        else:
            clusters.append([float(w)])
    return clusters


def spectral_projector_oracle(a, target: float, cluster_tol: float = CLUSTER_TOL) -> Operator:
    """Sum of ``|phi_n><phi_n|`` over eigenvalues within ``cluster_tol`` of ``target``."""
    es = hermitian_eigensystem(a)
    sel = np.abs(es.eigenvalues - target) <= cluster_tol
    if not np.any(sel):
        nearest = float(es.eigenvalues[np.argmin(np.abs(es.eigenvalues - target))])
        raise ValueError(
            f"no eigenvalue within {cluster_tol:g} of target {target!r}; nearest is {nearest!r}"
        )
    v = es.eigenvectors[:, sel]
    return Operator(v @ v.conj().T, hermitian_hint=None)


# -- text format ------------------------------------------------------------

def dumps_operator(a) -> str:
    """Serialize as JSON ``{"dim": n, "entries": [[re, im], ...]}`` (row-major)."""
    m = as_matrix(a)
    entries = [[float(z.real), float(z.imag)] for z in m.ravel()]
    return _json_dumps({"dim": int(m.shape[0]), "entries": entries}, indent=None) + "\n"


def loads_operator(text: str) -> Operator:
    data = json.loads(text)
    try:
        dim = int(data["dim"])
        entries = data["entries"]
    except (KeyError, TypeError) as exc:
        raise ValueError("operator file needs 'dim' and 'entries' fields") from exc
    if len(entries) != dim * dim:
        raise ValueError(f"expected {dim * dim} entries for dim {dim}, got {len(entries)}")
    flat = np.array([complex(re, im) for re, im in entries], dtype=np.complex128)
    return Operator(flat.reshape(dim, dim))


def save_operator(path, a) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_operator(a))


def load_operator(path) -> Operator:
    with open(path, encoding="utf-8") as fh:
        return loads_operator(fh.read())
