"""Spin and Jordan-Wigner fermion operators, Heisenberg and Hubbard Hamiltonians.

Layout is little-endian: site (or mode) 0 is the least significant tensor
factor, i.e. the last factor in a Kronecker product.  For spins, local state
0 is spin up; for fermions, local state 1 is occupied.  The Jordan-Wigner
sign string runs over modes of lower index.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .core import Operator

__all__ = [
    "SpinSystem",
    "FermionSystem",
    "SPIN_HALF",
    "site_operator",
    "total_spin_operators",
    "jordan_wigner_ladder",
    "number_operator",
    "hubbard_spin_operators",
    "heisenberg_chain",
    "hubbard_model",
    "site_permutation",
    "spin_flip",
]

MAX_SPIN_SITES = 12
MAX_HUBBARD_SITES = 4

_SX = np.array([[0, 1], [1, 0]], dtype=complex) / 2
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex) / 2
_SZ = np.array([[1, 0], [0, -1]], dtype=complex) / 2
SPIN_HALF = {"x": _SX, "y": _SY, "z": _SZ}

_ANNIHILATE = np.array([[0, 1], [0, 0]], dtype=complex)
_PARITY = np.diag([1.0, -1.0]).astype(complex)


@dataclass(frozen=True)
class SpinSystem:
    n_sites: int

    def __post_init__(self):
        if not 1 <= self.n_sites <= MAX_SPIN_SITES:
            raise ValueError(f"n_sites must be in [1, {MAX_SPIN_SITES}], got {self.n_sites}")

    @property
    def dim(self) -> int:
        return 2 ** self.n_sites


@dataclass(frozen=True)
class FermionSystem:
    n_modes: int
    mapping: str = "jordan-wigner"

    def __post_init__(self):
        if not 1 <= self.n_modes <= MAX_SPIN_SITES:
            raise ValueError(f"n_modes must be in [1, {MAX_SPIN_SITES}], got {self.n_modes}")
        if self.mapping != "jordan-wigner":
            raise ValueError("only the Jordan-Wigner mapping is supported")

    @property
    def dim(self) -> int:
        return 2 ** self.n_modes


def _as_spins(sys) -> SpinSystem:
    return sys if isinstance(sys, SpinSystem) else SpinSystem(int(sys))


def _as_fermions(sys) -> FermionSystem:
    return sys if isinstance(sys, FermionSystem) else FermionSystem(int(sys))


def _embed(local: dict[int, np.ndarray], n: int, fill=None) -> np.ndarray:
    eye = np.eye(2, dtype=complex)
    factors = []
    for site in reversed(range(n)):
        if site in local:
            factors.append(local[site])
        elif fill is not None and site < fill[0]:
            factors.append(fill[1])
        else:
            factors.append(eye)
    return reduce(np.kron, factors)


def site_operator(op: np.ndarray, site: int, n_sites: int) -> np.ndarray:
    """Place a 2x2 ``op`` on ``site`` of an ``n_sites`` register."""
    if not 0 <= site < n_sites:
        raise IndexError(f"site {site} out of range for {n_sites} sites")
    return _embed({site: np.asarray(op, dtype=complex)}, n_sites)


def total_spin_operators(sys) -> tuple[Operator, Operator, Operator, Operator]:
    """``(Sx, Sy, Sz, S^2)`` summed over all sites."""
    sys = _as_spins(sys)
    n = sys.n_sites
    tot = {a: sum(site_operator(SPIN_HALF[a], i, n) for i in range(n)) for a in "xyz"}
    s2 = sum(tot[a] @ tot[a] for a in "xyz")
    return (
        Operator(tot["x"], hermitian_hint=True),
        Operator(tot["y"], hermitian_hint=True),
        Operator(tot["z"], hermitian_hint=True),
        Operator(0.5 * (s2 + s2.conj().T), hermitian_hint=True),
    )


def jordan_wigner_ladder(sys, mode: int) -> tuple[Operator, Operator]:
    """``(a_p, a_p^dagger)`` with a parity string on modes ``< p``."""
    sys = _as_fermions(sys)
    if not 0 <= mode < sys.n_modes:
        raise IndexError(f"mode {mode} out of range for {sys.n_modes} modes")
    a = _embed({mode: _ANNIHILATE}, sys.n_modes, fill=(mode, _PARITY))
    return Operator(a), Operator(a.conj().T)


def number_operator(sys) -> Operator:
    """``sum_p a_p^dagger a_p``."""
    sys = _as_fermions(sys)
    n = np.zeros((sys.dim, sys.dim), dtype=complex)
    for p in range(sys.n_modes):
        a, ad = jordan_wigner_ladder(sys, p)
        n += ad.entries @ a.entries
    return Operator(n, hermitian_hint=True)


def heisenberg_chain(n: int, J: float = 1.0, periodic: bool = False) -> Operator:
    """``J sum_<ij> S_i . S_j`` on a chain of ``n`` spin-1/2 sites."""
    if not 2 <= n <= MAX_SPIN_SITES:
        raise ValueError(f"n must be in [2, {MAX_SPIN_SITES}], got {n}")
    bonds = [(i, i + 1) for i in range(n - 1)]
    if periodic and n > 2:
        bonds.append((n - 1, 0))
    h = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for i, j in bonds:
        for s in SPIN_HALF.values():
            h += _embed({i: s, j: s}, n)
    return Operator(J * h, hermitian_hint=True)


def _hubbard_modes(n_sites: int) -> FermionSystem:
    if not 1 <= n_sites <= MAX_HUBBARD_SITES:
        raise ValueError(f"n_sites must be in [1, {MAX_HUBBARD_SITES}], got {n_sites}")
    return FermionSystem(2 * n_sites)


def _mode(site: int, spin: int) -> int:
    # interleaved: (site 0 up, site 0 down, site 1 up, ...)
    return 2 * site + spin


def hubbard_spin_operators(n_sites: int) -> tuple[Operator, Operator, Operator, Operator]:
    """Total ``(Sx, Sy, Sz, S^2)`` of a Hubbard chain in its fermion basis."""
    sys = _hubbard_modes(n_sites)
    ladders = [jordan_wigner_ladder(sys, p) for p in range(sys.n_modes)]
    dim = sys.dim
    s_plus = np.zeros((dim, dim), dtype=complex)
    sz = np.zeros((dim, dim), dtype=complex)
    for i in range(n_sites):
        a_up, ad_up = (x.entries for x in ladders[_mode(i, 0)])
        a_dn, ad_dn = (x.entries for x in ladders[_mode(i, 1)])
        s_plus += ad_up @ a_dn
        sz += 0.5 * (ad_up @ a_up - ad_dn @ a_dn)
    s_minus = s_plus.conj().T
    sx = 0.5 * (s_plus + s_minus)
    sy = -0.5j * (s_plus - s_minus)
    s2 = s_minus @ s_plus + sz @ sz + sz
    return (
        Operator(sx, hermitian_hint=True),
        Operator(sy, hermitian_hint=True),
        Operator(sz, hermitian_hint=True),
        Operator(0.5 * (s2 + s2.conj().T), hermitian_hint=True),
    )


def hubbard_model(n_sites: int, t: float = 1.0, U: float = 4.0) -> Operator:
    """Open-chain Hubbard Hamiltonian on ``2 * n_sites`` Jordan-Wigner modes."""
    sys = _hubbard_modes(n_sites)
    ladders = [jordan_wigner_ladder(sys, p) for p in range(sys.n_modes)]
    h = np.zeros((sys.dim, sys.dim), dtype=complex)
    for i in range(n_sites - 1):
        for s in (0, 1):
            a_i, ad_i = (x.entries for x in ladders[_mode(i, s)])
            a_j, ad_j = (x.entries for x in ladders[_mode(i + 1, s)])
            hop = ad_i @ a_j
            h -= t * (hop + hop.conj().T)
    for i in range(n_sites):
        n_up = ladders[_mode(i, 0)][1].entries @ ladders[_mode(i, 0)][0].entries
        n_dn = ladders[_mode(i, 1)][1].entries @ ladders[_mode(i, 1)][0].entries
        h += U * (n_up @ n_dn)
    return Operator(0.5 * (h + h.conj().T), hermitian_hint=True)


def site_permutation(perm, n_sites: int) -> Operator:
    """Unitary moving the state of site ``i`` to site ``perm[i]``."""
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(n_sites)):
        raise ValueError(f"{perm} is not a permutation of {n_sites} sites")
    dim = 2 ** n_sites
    u = np.zeros((dim, dim), dtype=complex)
    for idx in range(dim):
        out = 0
        for i in range(n_sites):
            if idx >> i & 1:
                out |= 1 << perm[i]
        u[out, idx] = 1.0
    return Operator(u)


def spin_flip(n_sites: int) -> Operator:
    """Global spin flip, the product of ``2 Sx`` over all sites."""
    return Operator(reduce(np.kron, [2 * _SX] * n_sites), hermitian_hint=True)
