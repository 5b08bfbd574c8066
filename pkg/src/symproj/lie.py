"""Commutator closure, structure constants, commuting subsets and Casimirs.

Basis elements are compared and orthogonalized under the Frobenius inner
product ``<a, b> = trace(a^H b)``.  A LieBasis only ever holds linear
combinations of commutators; operator products (Casimirs) live outside it.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import Operator, as_matrix

__all__ = [
    "LieBasis",
    "CommutingSet",
    "NotClosedError",
    "NotSemisimpleError",
    "lie_closure",
    "structure_constants",
    "maximal_commuting_subset",
    "quadratic_casimir",
    "is_casimir",
    "jacobi_residual",
]

logger = logging.getLogger(__name__)

CLOSURE_TOL = 1e-10


class NotClosedError(ValueError):
    """The operator set is not closed under commutation."""


class NotSemisimpleError(ValueError):
    """The Killing form is singular or too badly conditioned to invert."""


def _vec(mats: Sequence[np.ndarray]) -> np.ndarray:
    return np.stack([m.ravel() for m in mats], axis=1)


def _hermitian_phase(r: np.ndarray, tol: float) -> np.ndarray:
    # Rotate r by a global phase so that it is Hermitian, when that is possible.
    norm = np.linalg.norm(r)
    if norm == 0 or np.linalg.norm(r - r.conj().T) <= tol * norm:
        return r
    k = np.unravel_index(np.argmax(np.abs(r)), r.shape)
    a, b = r[k], r[k[::-1]]
    if abs(b) == 0:
        return r
    phase = np.sqrt(a / np.conj(b))
    cand = r / phase
    # sign convention: the largest entry has positive real part
    pivot = cand[k]
    if pivot.real < 0 or (pivot.real == 0 and pivot.imag < 0):
        cand = -cand
    if np.linalg.norm(cand - cand.conj().T) <= tol * norm:
        return cand
    return r


def _structure_tensor(mats: list[np.ndarray]) -> tuple[np.ndarray, float]:
    n = len(mats)
    basis = _vec(mats)
    c = np.zeros((n, n, n), dtype=np.complex128)
    worst = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            comm = mats[i] @ mats[j] - mats[j] @ mats[i]
            coef, *_ = np.linalg.lstsq(basis, comm.ravel(), rcond=None)
            resid = np.linalg.norm(basis @ coef - comm.ravel())
            worst = max(worst, resid / max(1.0, np.linalg.norm(comm)))
            c[i, j] = coef
            c[j, i] = -coef
    return c, worst


@dataclass(frozen=True, eq=False)
class LieBasis:
    """Linearly independent operators closed under commutation.

    ``structure[i, j, k]`` is the coefficient of ``elements[k]`` in
    ``[elements[i], elements[j]]``.
    """

    elements: tuple[Operator, ...]
    structure: np.ndarray
    gram_tol: float = 1e-10

    def __post_init__(self):
        if not self.elements:
            raise ValueError("LieBasis needs at least one element")
        dims = {e.dim for e in self.elements}
        if len(dims) != 1:
            raise ValueError(f"elements have mixed dimensions {sorted(dims)}")
        g = self.gram()
        smallest = float(np.linalg.eigvalsh(g).min())
        if smallest <= self.gram_tol:
            raise ValueError(f"elements are linearly dependent (Gram eigenvalue {smallest:.3e})")
        n = len(self.elements)
        if self.structure.shape != (n, n, n):
            raise ValueError(f"structure tensor must have shape {(n, n, n)}")
        self.structure.setflags(write=False)

    @property
    def dim(self) -> int:
        """Operator dimension (not the algebra dimension, which is ``len``)."""
        return self.elements[0].dim

    def __len__(self) -> int:
        return len(self.elements)

    def gram(self) -> np.ndarray:
        v = _vec([e.entries for e in self.elements])
        return v.conj().T @ v

    def closure_residual(self) -> float:
        """Max over pairs of ``|[e_i, e_j] - sum_k c_ij^k e_k|`` (Frobenius)."""
        mats = [e.entries for e in self.elements]
        worst = 0.0
        for i, a in enumerate(mats):
            for j, b in enumerate(mats):
                lhs = a @ b - b @ a
                rhs = np.tensordot(self.structure[i, j], np.stack(mats), axes=1)
                worst = max(worst, float(np.linalg.norm(lhs - rhs)))
        return worst

    @classmethod
    def from_elements(cls, elements: Sequence, tol: float = CLOSURE_TOL) -> "LieBasis":
        """Wrap an already-closed, independent set; raises :class:`NotClosedError` otherwise."""
        ops = tuple(e if isinstance(e, Operator) else Operator(e) for e in elements)
        c, worst = _structure_tensor([o.entries for o in ops])
        if worst > tol:
            raise NotClosedError(f"set not closed: commutator residual {worst:.3e} exceeds {tol:g}")
        return cls(ops, c)


def lie_closure(seed: Sequence, max_dim: int = 64, tol: float = CLOSURE_TOL) -> LieBasis:
    """Close ``seed`` under commutation.

    Breadth-first over commutator pairs; every candidate is Gram-Schmidt
    orthogonalized (twice) against the current span and admitted, after
    normalization, when its residual exceeds ``tol`` times its norm.
    Residuals that are a phase times a Hermitian matrix are rotated to be
    Hermitian, so Hermitian seeds yield a Hermitian basis.
    """
    seed = list(seed)
    if not seed:
        raise ValueError("seed must be non-empty")
    mats = [as_matrix(s) for s in seed]
    n = mats[0].shape[0]
    if any(m.shape != (n, n) for m in mats):
        raise ValueError("seed operators must share one dimension")
    if max_dim < len(mats):
        raise ValueError(f"max_dim={max_dim} is smaller than the seed ({len(mats)})")

    basis: list[np.ndarray] = []

    def admit(cand: np.ndarray) -> bool:
        norm = np.linalg.norm(cand)
        if norm == 0:
            return False
        r = cand.copy()
        for _ in range(2):
            for e in basis:
                r = r - np.vdot(e, r) * e
        rn = np.linalg.norm(r)
        if rn <= tol * norm:
            return False
        r = _hermitian_phase(r / rn, 1e-12)
        basis.append(r / np.linalg.norm(r))
        return True

    dropped = 0
    for m in mats:
        if not admit(m):
            dropped += 1
    if dropped:
        msg = f"{dropped} linearly dependent seed operator(s) dropped"
        logger.info(msg)
        warnings.warn(msg, stacklevel=2)

    i = 0
    while i < len(basis):
        for j in range(i):
            c = basis[j] @ basis[i] - basis[i] @ basis[j]
            if admit(c) and len(basis) > max_dim:
                raise ValueError(f"closure exceeded max_dim={max_dim} (reached {len(basis)})")
        i += 1

    ops = tuple(Operator(b) for b in basis)
    c, worst = _structure_tensor(basis)
    if worst > tol:
        raise NotClosedError(f"set not closed: commutator residual {worst:.3e}")
    return LieBasis(ops, c)


def structure_constants(basis: LieBasis, tol: float = CLOSURE_TOL) -> np.ndarray:
    """Least-squares ``c[i, j, k]`` with ``[e_i, e_j] = sum_k c[i, j, k] e_k``."""
    c, worst = _structure_tensor([e.entries for e in basis.elements])
    if worst > tol:
        raise NotClosedError(f"set not closed: commutator residual {worst:.3e} exceeds {tol:g}")
    return c


def jacobi_residual(c: np.ndarray) -> float:
    """Largest violation of the Jacobi identity expressed through ``c``."""
    t1 = np.einsum("ijm,mkl->ijkl", c, c)
    t2 = np.einsum("jkm,mil->ijkl", c, c)
    t3 = np.einsum("kim,mjl->ijkl", c, c)
    return float(np.max(np.abs(t1 + t2 + t3))) if c.size else 0.0


@dataclass(frozen=True, eq=False)
class CommutingSet:
    member_indices: tuple[int, ...]
    casimirs: tuple[Operator, ...] = ()

    def members(self, basis: LieBasis) -> list[Operator]:
        return [basis.elements[i] for i in self.member_indices]


def maximal_commuting_subset(basis: LieBasis, tol: float = 1e-10,
                             casimirs: Sequence | None = None) -> CommutingSet:
    """Greedy maximal set of mutually commuting elements, in basis order.

    When ``casimirs`` is not given, the quadratic Casimir is attached if the
    Killing form allows it; otherwise the set carries none.
    """
    mats = [e.entries for e in basis.elements]
    chosen: list[int] = []
    for i, a in enumerate(mats):
        if all(np.linalg.norm(a @ mats[k] - mats[k] @ a) <= tol for k in chosen):
            chosen.append(i)
    if casimirs is None:
        try:
            cas = (quadratic_casimir(basis),)
        except NotSemisimpleError:
            cas = ()
    else:
        cas = tuple(c if isinstance(c, Operator) else Operator(c) for c in casimirs)
        for c in cas:
            res = is_casimir(c, basis)
            if res > tol:
                raise ValueError(f"supplied Casimir fails to commute with the basis (residual {res:.3e})")
    return CommutingSet(tuple(chosen), cas)


def killing_form(basis: LieBasis) -> np.ndarray:
    c = np.asarray(basis.structure)
    # (ad_i)_{kj} = c[i, j, k]
    ad = np.transpose(c, (0, 2, 1))
    return np.einsum("ikj,mjk->im", ad, ad)


def quadratic_casimir(basis: LieBasis, max_cond: float = 1e8) -> Operator:
    """``sum_ij (kappa^-1)_ij e_i e_j`` with ``kappa`` the Killing form."""
    kappa = killing_form(basis)
    if not np.any(np.abs(kappa) > 1e-14):
        raise NotSemisimpleError("algebra not semi-simple; supply Casimir manually")
    cond = np.linalg.cond(kappa)
    if not np.isfinite(cond) or cond > max_cond:
        raise NotSemisimpleError(
            f"algebra not semi-simple (Killing form condition number {cond:.3e}); "
            "supply Casimir manually"
        )
    kinv = np.linalg.inv(kappa)
    mats = [e.entries for e in basis.elements]
    n = basis.dim
    cas = np.zeros((n, n), dtype=np.complex128)
    for i, a in enumerate(mats):
        for j, b in enumerate(mats):
            if kinv[i, j] != 0:
                cas += kinv[i, j] * (a @ b)
    return Operator(cas)


def is_casimir(c, basis: LieBasis) -> float:
    """Max Frobenius norm of ``[c, e]`` over basis elements."""
    cm = as_matrix(c)
    if cm.shape[0] != basis.dim:
        raise ValueError(f"dimension mismatch: {cm.shape[0]} vs {basis.dim}")
    return max(float(np.linalg.norm(cm @ e.entries - e.entries @ cm)) for e in basis.elements)
