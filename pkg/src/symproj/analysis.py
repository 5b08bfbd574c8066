"""Sector diagnostics: dimensions and projected-Hamiltonian spectra.

A sector dimension above one, with non-commuting symmetries present, is the
degeneracy those symmetries force on the Hamiltonian.
"""

from __future__ import annotations

import numpy as np

from .core import as_matrix

__all__ = ["sector_basis", "sector_spectrum", "lowest_sector_energy", "is_block_consistent"]


def sector_basis(p, threshold: float = 0.5) -> np.ndarray:
    """Orthonormal columns spanning the range of projector ``p``."""
    pm = as_matrix(p)
    w, v = np.linalg.eigh(0.5 * (pm + pm.conj().T))
    return v[:, w > threshold]


def sector_spectrum(p, h) -> np.ndarray:
    """Eigenvalues of ``P H P`` restricted to the range of ``P``."""
    v = sector_basis(p)
    if v.shape[1] == 0:
        return np.zeros(0)
    hm = as_matrix(h)
    return np.linalg.eigvalsh(v.conj().T @ hm @ v)


def lowest_sector_energy(p, h) -> float | None:
    spec = sector_spectrum(p, h)
    return float(spec[0]) if spec.size else None


def is_block_consistent(p, h, tol: float = 1e-8) -> bool:
    """True when every eigenvalue of the projected block is an eigenvalue of ``H``."""
    full = np.linalg.eigvalsh(as_matrix(h))
    return all(np.min(np.abs(full - e)) <= tol for e in sector_spectrum(p, h))
