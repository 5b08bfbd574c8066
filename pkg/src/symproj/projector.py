"""Projectors onto symmetry eigen-subspaces, written as functions of the operators.

Constructors
------------
* :func:`lagrange_projector` - Lowdin product over the other eigenvalues.
* :func:`equidistant_fourier_projector` - finite sum of powers of one unitary.
* :func:`cyclic_quadrature_projector` - uniform quadrature of ``exp(i phi (O - o))``.
* :func:`riesz_projector` - trapezoid rule for the resolvent contour integral.
* :func:`finite_group_projector` - character-weighted sum over group elements.
* :func:`angular_momentum_projector` - single-angle SO(3) integral.
* :func:`composite_projector` - ordered product of commuting projectors.

None of these diagonalize the symmetry operator.  Where a spectrum is not
supplied it is derived from the oracle and the report records
``spectrum_source="oracle"``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import (
    Operator,
    SpectrumSpec,
    as_matrix,
    matrix_exponential,
)

__all__ = [
    "CONVERGENCE_TOL",
    "TRIVIAL_TOL",
    "ProjectorReport",
    "CharacterTable",
    "GroupRep",
    "lagrange_projector",
    "equidistant_fourier_projector",
    "cyclic_quadrature_projector",
    "riesz_projector",
    "finite_group_projector",
    "su2_irrep_generators",
    "wigner_character",
    "angular_momentum_projector",
    "composite_projector",
    "cyclic_table",
    "s3_table",
    "cyclic_group_rep",
    "s3_permutation_rep",
    "make_report",
]

CONVERGENCE_TOL = 1e-6
TRIVIAL_TOL = 1e-10
PART_TOL = 1e-8
GROUP_TOL = 1e-10

METHODS = (
    "lagrange",
    "fourier_equidistant",
    "cyclic_quadrature",
    "riesz",
    "group_character",
    "angular_momentum",
    "composite",
    "oracle",
)


@dataclass(frozen=True, eq=False)
class ProjectorReport:
    """A projector matrix together with its self-consistency diagnostics.

    All residuals are Frobenius norms.  ``eigen_residual`` is
    ``|(O - target) P|`` and ``commutator_residual`` is ``|[P, O]|`` for the
    source operator ``O`` when there is one.  Neither needs a diagonalization,
    so ``converged`` is an honest check of diagonalization-free runs.
    """

    matrix: Operator
    method: str
    idempotency_residual: float
    hermiticity_residual: float
    trace: float
    converged: bool
    trivial: bool = False
    commutator_residual: float | None = None
    eigen_residual: float | None = None
    spectrum_source: str | None = None
    notes: tuple[str, ...] = field(default=())

    @property
    def rank(self) -> int:
        """Sector dimension, the trace rounded to an integer."""
        return int(round(self.trace))

    def __array__(self, dtype=None, copy=None):
        return self.matrix.__array__(dtype, copy)


def make_report(p, method: str, source=None, target: float | None = None,
                tol: float = CONVERGENCE_TOL, spectrum_source: str | None = None,
                notes: Sequence[str] = (), trivial: bool = False) -> ProjectorReport:
    """Compute diagnostics for ``p`` and decide convergence at ``tol``."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    pm = as_matrix(p)
    idem = float(np.linalg.norm(pm @ pm - pm))
    herm = float(np.linalg.norm(pm - pm.conj().T))
    tr = complex(np.trace(pm))
    comm = eig = None
    if source is not None:
        om = as_matrix(source)
        comm = float(np.linalg.norm(pm @ om - om @ pm))
        if target is not None:
            eig = float(np.linalg.norm(om @ pm - target * pm))
    notes = list(notes)
    ok = idem <= tol and herm <= tol and abs(tr.imag) <= tol
    if abs(tr.real - round(tr.real)) > tol or tr.real < -tol:
        ok = False
        notes.append(f"trace {tr.real:.12g} is not a non-negative integer")
    if eig is not None and eig > tol:
        ok = False
        notes.append(f"range is not the target eigenspace: |(O - o)P| = {eig:.3e}")
    if comm is not None and comm > tol:
        ok = False
    if not ok and idem > tol:
        notes.append(f"not idempotent: |P^2 - P| = {idem:.3e}")
    return ProjectorReport(
        matrix=Operator(pm),
        method=method,
        idempotency_residual=idem,
        hermiticity_residual=herm,
        trace=float(tr.real),
        converged=bool(ok),
        trivial=trivial,
        commutator_residual=comm,
        eigen_residual=eig,
        spectrum_source=spectrum_source,
        notes=tuple(notes),
    )


def _require_hermitian(om: np.ndarray, tol: float = 1e-10) -> None:
    dev = float(np.max(np.abs(om - om.conj().T)))
    if dev > tol:
        raise ValueError(f"symmetry operator must be Hermitian (max |O - O^H| = {dev:.3e})")


def _spectrum_for(o, spectrum) -> SpectrumSpec:
    if spectrum is None:
        return SpectrumSpec.from_operator(o)
    if isinstance(spectrum, SpectrumSpec):
        return spectrum
    return SpectrumSpec.declared(spectrum)


# -- Lowdin / Lagrange -------------------------------------------------------

def lagrange_projector(o, spectrum=None, target_index: int | None = None, *,
                       target: float | None = None,
                       tol: float = CONVERGENCE_TOL) -> ProjectorReport:
    """``prod_{n != j} (O - o_n) / (o_j - o_n)``, factors in ascending order.

    Give the target either by ``target_index`` into the spectrum values or by
    value through ``target``.  If ``spectrum`` omits an eigenvalue of ``O``
    the product is not idempotent and the report is flagged unconverged.
    """
    om = as_matrix(o)
    _require_hermitian(om)
    spec = _spectrum_for(o, spectrum)
    spec.check_dimension(om.shape[0])
    if target_index is None:
        if target is None:
            raise ValueError("give target_index or target")
        target_index = spec.index_of(target)
    if not 0 <= target_index < len(spec):
        raise IndexError(f"target_index {target_index} out of range for {len(spec)} values")
    oj = spec.values[target_index]
    eye = np.eye(om.shape[0], dtype=np.complex128)
    p = eye.copy()
    for n, on in enumerate(spec.values):
        if n != target_index:
            p = p @ ((om - on * eye) / (oj - on))
    return make_report(p, "lagrange", o, oj, tol, spec.source)


# -- finite Fourier sums -----------------------------------------------------

def equidistant_fourier_projector(o, target: float, d: float, M: int, *,
                                  tol: float = CONVERGENCE_TOL) -> ProjectorReport:
    """``(1/M) sum_{k=1}^{M} U^k`` with ``U = exp(2 pi i (O - target)/(d M))``.

    Exact when the spectrum is equidistant with spacing ``d`` and has at most
    ``M`` distinct values.  Aliasing (too small ``M``) or a wrong ``d`` leave
    a nonzero eigen residual and the report is flagged unconverged.
    """
    om = as_matrix(o)
    _require_hermitian(om)
    if not d > 0:
        raise ValueError("spacing d must be positive")
    if int(M) != M or M < 1:
        raise ValueError("M must be a positive integer")
    M = int(M)
    n = om.shape[0]
    shifted = om - target * np.eye(n)
    u = matrix_exponential(shifted, 2j * np.pi / (d * M)).entries
    acc = np.zeros((n, n), dtype=np.complex128)
    power = np.eye(n, dtype=np.complex128)
    for _ in range(M):
        power = power @ u
        acc += power
    return make_report(acc / M, "fourier_equidistant", o, target, tol, "declared")


def cyclic_quadrature_projector(o, target: float, M: int, rescale: float = 1.0, *,
                                tol: float = CONVERGENCE_TOL) -> ProjectorReport:
    """Uniform ``M``-node quadrature of ``(1/2pi) int exp(i phi (O - target)/rescale) dphi``.

    Each group element ``exp(i phi_m (O - target)/rescale)`` is exponentiated
    separately.  Exact when ``(o_n - target)/rescale`` are integers with
    spread below ``M``.
    """
    om = as_matrix(o)
    _require_hermitian(om)
    if not rescale > 0:
        raise ValueError("rescale must be positive")
    if int(M) != M or M < 1:
        raise ValueError("M must be a positive integer")
    M = int(M)
    n = om.shape[0]
    shifted = (om - target * np.eye(n)) / rescale
    acc = np.zeros((n, n), dtype=np.complex128)
    for m in range(M):
        phi = 2 * np.pi * m / M
        acc += matrix_exponential(shifted, 1j * phi).entries
    return make_report(acc / M, "cyclic_quadrature", o, target, tol, "declared")


# -- resolvent ---------------------------------------------------------------

def riesz_projector(o, target: float, radius: float | None = None, nodes: int = 64,
                    spectrum=None, *, tol: float = CONVERGENCE_TOL) -> ProjectorReport:
    """``(1/2 pi i) oint (z - O)^{-1} dz`` on a circle about ``target``.

    The circle is checked against the spectrum (declared, or from the oracle
    when ``spectrum`` is None) before any linear solve: it must enclose the
    target cluster only and keep clear of every eigenvalue.  ``radius``
    defaults to half the distance to the nearest other eigenvalue.
    """
    om = as_matrix(o)
    _require_hermitian(om)
    spec = _spectrum_for(o, spectrum)
    j = spec.index_of(target)
    others = [v for k, v in enumerate(spec.values) if k != j]
    if radius is None:
        radius = min(abs(v - target) for v in others) / 2 if others else 1.0
    if not radius > 0:
        raise ValueError("radius must be positive")
    if nodes < 1:
        raise ValueError("nodes must be positive")
    clear = 1e-9 * max(1.0, radius)
    for v in spec.values:
        dist = abs(v - target)
        if abs(dist - radius) <= clear:
            raise ValueError(f"contour of radius {radius!r} crosses eigenvalue {v!r}")
        if v in others and dist < radius:
            raise ValueError(f"contour of radius {radius!r} encloses foreign eigenvalue {v!r}")
    n = om.shape[0]
    eye = np.eye(n, dtype=np.complex128)
    acc = np.zeros((n, n), dtype=np.complex128)
    for m in range(nodes):
        w = radius * np.exp(2j * np.pi * m / nodes)
        shifted = (target + w) * eye - om
        try:
            res = np.linalg.solve(shifted, eye)
        except np.linalg.LinAlgError as exc:
            raise ValueError(
                f"resolvent singular at node {m}; change the radius") from exc
        acc += w * res
    return make_report(acc / nodes, "riesz", o, target, tol, spec.source)


# -- finite groups -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CharacterTable:
    """Characters per irrep, one complex number per group element."""

    labels: tuple[str, ...]
    dimensions: tuple[int, ...]
    characters: np.ndarray
    complete: bool = True

    def __post_init__(self):
        chi = np.asarray(self.characters, dtype=np.complex128)
        if chi.ndim != 2 or chi.shape[0] != len(self.labels) or len(self.dimensions) != len(self.labels):
            raise ValueError("character table shape does not match labels and dimensions")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("irrep labels must be unique")
        order = chi.shape[1]
        gram = chi.conj() @ chi.T
        dev = float(np.max(np.abs(gram - order * np.eye(len(self.labels)))))
        if dev > GROUP_TOL:
            raise ValueError(f"character table violates row orthogonality (deviation {dev:.3e})")
        for d, row in zip(self.dimensions, chi):
            if abs(row[0] - d) > GROUP_TOL:
                raise ValueError("character of the identity must equal the irrep dimension")
        if self.complete and sum(d * d for d in self.dimensions) != order:
            raise ValueError("sum of squared irrep dimensions differs from the group order")
        chi.setflags(write=False)
        object.__setattr__(self, "characters", chi)

    @property
    def group_order(self) -> int:
        return self.characters.shape[1]

    def row(self, label: str) -> tuple[int, np.ndarray]:
        try:
            k = self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown irrep {label!r}; table has {list(self.labels)}") from None
        return self.dimensions[k], self.characters[k]


@dataclass(frozen=True, eq=False)
class GroupRep:
    """Operators representing a finite group; element 0 must be the identity."""

    elements: tuple[Operator, ...]
    element_labels: tuple[str, ...]
    table: CharacterTable

    def __post_init__(self):
        mats = [e.entries for e in self.elements]
        if len(mats) != self.table.group_order or len(self.element_labels) != len(mats):
            raise ValueError("element count differs from the character table's group order")
        n = mats[0].shape[0]
        if np.max(np.abs(mats[0] - np.eye(n))) > GROUP_TOL:
            raise ValueError("element 0 must be the identity")
        flat = np.stack([m.ravel() for m in mats])

        def find(m):
            dev = np.max(np.abs(flat - m.ravel()), axis=1)
            k = int(np.argmin(dev))
            return k if dev[k] <= GROUP_TOL else None

        for i, a in enumerate(mats):
            inverse_found = False
            for j, b in enumerate(mats):
                k = find(a @ b)
                if k is None:
                    raise ValueError(
                        f"product {self.element_labels[i]}*{self.element_labels[j]} is not in the group")
                inverse_found |= k == 0
            if not inverse_found:
                raise ValueError(f"element {self.element_labels[i]} has no inverse in the group")

    @property
    def dim(self) -> int:
        return self.elements[0].dim


def cyclic_table(n: int) -> CharacterTable:
    """Z_n with irreps ``k0 .. k{n-1}`` (``A``/``B`` for n = 2); elements ordered g^0..g^{n-1}."""
    if not 1 <= n <= 8:
        raise ValueError("built-in cyclic tables cover n <= 8")
    k = np.arange(n)
    chi = np.exp(2j * np.pi * np.outer(k, k) / n)
    labels = ("A", "B") if n == 2 else tuple(f"k{i}" for i in range(n))
    return CharacterTable(labels, (1,) * n, chi)


# S3 elements: e, (01), (02), (12), (012), (021)
S3_ELEMENTS = ((0, 1, 2), (1, 0, 2), (2, 1, 0), (0, 2, 1), (1, 2, 0), (2, 0, 1))
S3_LABELS = ("e", "(01)", "(02)", "(12)", "(012)", "(021)")


def s3_table() -> CharacterTable:
    """S3 with irreps A1 (trivial), A2 (sign), E (standard), per element of ``S3_ELEMENTS``."""
    by_class = {"A1": (1, 1, 1), "A2": (1, -1, 1), "E": (2, 0, -1)}
    cls = (0, 1, 1, 1, 2, 2)
    chi = np.array([[row[c] for c in cls] for row in by_class.values()], dtype=complex)
    return CharacterTable(tuple(by_class), (1, 1, 2), chi)


def cyclic_group_rep(generator, n: int) -> GroupRep:
    """Z_n represented by the powers of ``generator`` (which must satisfy g^n = 1)."""
    g = as_matrix(generator)
    elems = [np.eye(g.shape[0], dtype=complex)]
    for _ in range(n - 1):
        elems.append(elems[-1] @ g)
    return GroupRep(tuple(Operator(e) for e in elems),
                    tuple(f"g^{i}" for i in range(n)), cyclic_table(n))


def s3_permutation_rep() -> GroupRep:
    """S3 permuting the sites of three spin-1/2 sites."""
    from .models import site_permutation

    ops = tuple(site_permutation(p, 3) for p in S3_ELEMENTS)
    return GroupRep(ops, S3_LABELS, s3_table())


def finite_group_projector(rep: GroupRep, irrep_label: str, *,
                           tol: float = CONVERGENCE_TOL) -> ProjectorReport:
    """``(d / |G|) sum_k conj(chi(g_k)) g_k``."""
    d, chi = rep.table.row(irrep_label)
    acc = np.zeros((rep.dim, rep.dim), dtype=np.complex128)
    for c, g in zip(chi, rep.elements):
        acc += np.conj(c) * g.entries
    p = acc * (d / rep.table.group_order)
    trivial = float(np.linalg.norm(p)) <= TRIVIAL_TOL
    return make_report(p, "group_character", tol=tol, trivial=trivial)


# -- SO(3) -------------------------------------------------------------------

def _half_integer(x, name: str) -> Fraction:
    f = Fraction(x).limit_denominator(2)
    if abs(float(f) - float(x)) > 1e-12 or f.denominator not in (1, 2):
        raise ValueError(f"{name} must be an integer or half-integer, got {x!r}")
    return f


def su2_irrep_generators(j) -> tuple[Operator, Operator, Operator]:
    """``(Jx, Jy, Jz)`` of the spin-``j`` irrep, basis ordered m = j, j-1, ..., -j."""
    jf = _half_integer(j, "j")
    if jf < 0:
        raise ValueError(f"j must be non-negative, got {j!r}")
    jv = float(jf)
    ms = jv - np.arange(int(2 * jf) + 1)
    # <m+1|J+|m> sits one row above m's column
    jp = np.diag(np.sqrt(jv * (jv + 1) - ms[1:] * (ms[1:] + 1)), k=1).astype(complex)
    jm = jp.conj().T
    jx = (jp + jm) / 2
    jy = (jp - jm) / 2j
    jz = np.diag(ms).astype(complex)
    return (Operator(jx, hermitian_hint=True), Operator(jy, hermitian_hint=True),
            Operator(jz, hermitian_hint=True))


def wigner_character(j, m, beta: float) -> float:
    """``<j m| exp(i beta Jy) |j m>`` from the exponentiated irrep generator."""
    jf, mf = _half_integer(j, "j"), _half_integer(m, "m")
    if abs(mf) > jf or (jf - mf).denominator != 1:
        raise ValueError(f"invalid (j, m) = ({j!r}, {m!r})")
    _, jy, _ = su2_irrep_generators(jf)
    k = int(jf - mf)
    val = matrix_exponential(jy, 1j * beta).entries[k, k]
    return float(val.real)


def angular_momentum_projector(jy_total, j, m, nodes: int = 32, jz_projector=None, *,
                               tol: float = CONVERGENCE_TOL) -> ProjectorReport:
    """``(j + 1/2) int_0^pi sin(b) <jm|e^{i b Jy}|jm> e^{i b Jy_total} db`` by Gauss-Legendre.

    The integral selects total angular momentum ``j`` only on states with
    ``Jz = m``.  Pass the ``Jz = m`` eigen-projector as ``jz_projector`` to get
    the sandwich ``Pm K Pm``, which is the projector onto the ``|j m>``
    sector.  Without it the bare integral ``K`` is returned and is generally
    not idempotent.
    """
    jf, mf = _half_integer(j, "j"), _half_integer(m, "m")
    if abs(mf) > jf or (jf - mf).denominator != 1:
        raise ValueError(f"invalid (j, m) = ({j!r}, {m!r})")
    if nodes < 16:
        raise ValueError("nodes must be at least 16")
    jym = as_matrix(jy_total)
    _require_hermitian(jym)
    x, w = np.polynomial.legendre.leggauss(nodes)
    betas = 0.5 * np.pi * (x + 1)
    weights = 0.5 * np.pi * w
    n = jym.shape[0]
    acc = np.zeros((n, n), dtype=np.complex128)
    for b, wt in zip(betas, weights):
        chi = wigner_character(jf, mf, b)
        acc += (wt * np.sin(b) * chi) * matrix_exponential(jym, 1j * b).entries
    k = (float(jf) + 0.5) * acc
    if jz_projector is None:
        return make_report(k, "angular_momentum", tol=tol,
                           notes=("no Jz projector supplied; bare single-angle integral",))
    pm = as_matrix(jz_projector)
    p = pm @ k @ pm
    trivial = float(np.linalg.norm(p)) <= TRIVIAL_TOL
    return make_report(p, "angular_momentum", tol=tol, trivial=trivial)


# -- products ----------------------------------------------------------------

def composite_projector(parts: Sequence, *, tol: float = CONVERGENCE_TOL) -> ProjectorReport:
    """Ordered product of mutually commuting projectors.

    Each part must be idempotent and Hermitian, and every pair must commute,
    to 1e-8.  The product is compared with the reversed-order product; a
    product of Frobenius norm at most 1e-10 is flagged ``trivial`` (the
    eigenvalue combination does not occur).
    """
    mats = [as_matrix(p) for p in parts]
    if not mats:
        raise ValueError("composite_projector needs at least one part")
    n = mats[0].shape[0]
    for i, a in enumerate(mats):
        if a.shape != (n, n):
            raise ValueError(f"part {i} has dimension {a.shape[0]}, expected {n}")
        if np.linalg.norm(a @ a - a) > PART_TOL or np.linalg.norm(a - a.conj().T) > PART_TOL:
            raise ValueError(f"part {i} is not a Hermitian projector")
    for i in range(len(mats)):
        for k in range(i + 1, len(mats)):
            c = float(np.linalg.norm(mats[i] @ mats[k] - mats[k] @ mats[i]))
            if c > PART_TOL:
                raise ValueError(f"parts {i} and {k} do not commute (|[Pi, Pk]| = {c:.3e})")
    prod = mats[0]
    for a in mats[1:]:
        prod = prod @ a
    rev = mats[-1]
    for a in reversed(mats[:-1]):
        rev = rev @ a
    notes = []
    order_dev = float(np.linalg.norm(prod - rev))
    if order_dev > TRIVIAL_TOL:
        notes.append(f"product depends on order: deviation {order_dev:.3e}")
    trivial = float(np.linalg.norm(prod)) <= TRIVIAL_TOL
    report = make_report(prod, "composite", tol=tol, trivial=trivial, notes=notes)
    if order_dev > tol and report.converged:
        report = ProjectorReport(**{**report.__dict__, "converged": False})
    return report
