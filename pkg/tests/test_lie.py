import numpy as np
import pytest

from symproj.core import Operator, frobenius_inner
from symproj.lie import (
    LieBasis,
    NotClosedError,
    NotSemisimpleError,
    is_casimir,
    jacobi_residual,
    lie_closure,
    maximal_commuting_subset,
    quadratic_casimir,
    structure_constants,
)
from symproj.models import SPIN_HALF, hubbard_spin_operators, number_operator, site_operator

from conftest import spin_ops

EPS = np.zeros((3, 3, 3))
for (i, j, k), s in {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1,
                     (1, 0, 2): -1, (2, 1, 0): -1, (0, 2, 1): -1}.items():
    EPS[i, j, k] = s

SU2_HALF = [SPIN_HALF[a] for a in "xyz"]


def _span_rank(mats, tol=1e-10):
    v = np.stack([np.asarray(m).ravel() for m in mats], axis=1)
    s = np.linalg.svd(v, compute_uv=False)
    return int(np.sum(s > tol * s[0]))


class TestClosure:
    def test_su2_from_two(self):
        basis = lie_closure(SU2_HALF[:2])
        assert len(basis) == 3
        assert _span_rank([*basis.elements, *SU2_HALF]) == 3

    def test_abelian_single(self):
        assert len(lie_closure([SU2_HALF[2]])) == 1

    def test_three_spins(self):
        sx, sy, sz, _ = spin_ops(3)
        basis = lie_closure([sx, sy])
        assert len(basis) == 3
        # explicit commutators of the 8x8 matrices stay in span{Sx, Sy, Sz}
        for a in (sx, sy, sz):
            for b in (sx, sy, sz):
                assert _span_rank([sx, sy, sz, a @ b - b @ a]) == 3
        assert basis.closure_residual() <= 1e-12

    def test_elements_hermitian_orthonormal(self):
        basis = lie_closure(spin_ops(3)[:2])
        for e in basis.elements:
            assert e.hermiticity_residual() <= 1e-12
        np.testing.assert_allclose(basis.gram(), np.eye(3), atol=1e-12)

    def test_idempotent(self):
        x0x1 = site_operator(2 * SPIN_HALF["x"], 0, 2) @ site_operator(2 * SPIN_HALF["x"], 1, 2)
        z0 = site_operator(2 * SPIN_HALF["z"], 0, 2)
        first = lie_closure([x0x1, z0])
        second = lie_closure(first.elements)
        assert len(first) == len(second)
        assert _span_rank([*first.elements, *second.elements]) == len(first)

    def test_dependent_seed_dropped(self):
        with pytest.warns(UserWarning, match="1 linearly dependent"):
            basis = lie_closure([SU2_HALF[0], 2 * SU2_HALF[0], SU2_HALF[1]])
        assert len(basis) == 3

    def test_max_dim_exceeded(self):
        with pytest.raises(ValueError, match="max_dim"):
            lie_closure(SU2_HALF[:2], max_dim=2)

    def test_empty_seed(self):
        with pytest.raises(ValueError, match="non-empty"):
            lie_closure([])

    def test_mixed_dims(self):
        with pytest.raises(ValueError, match="one dimension"):
            lie_closure([np.eye(2), np.eye(3)])


class TestStructureConstants:
    def test_orthonormal_su2(self):
        basis = lie_closure(SU2_HALF)
        # orthonormal elements are sqrt(2) S_a, so [e_a, e_b] = i sqrt(2) eps e_c
        np.testing.assert_allclose(structure_constants(basis), 1j * np.sqrt(2) * EPS, atol=1e-12)

    def test_abelian_zero(self):
        sz = hubbard_spin_operators(1)[2]
        n = number_operator(2)
        basis = LieBasis.from_elements([sz, n])
        np.testing.assert_array_equal(structure_constants(basis), np.zeros((2, 2, 2)))

    def test_two_spin_matches_one_spin(self):
        sx, sy, sz, _ = spin_ops(2)
        c2 = structure_constants(LieBasis.from_elements([sx, sy, sz]))
        c1 = structure_constants(LieBasis.from_elements(SU2_HALF))
        np.testing.assert_allclose(c2, c1, atol=1e-12)
        np.testing.assert_allclose(c2, 1j * EPS, atol=1e-12)

    def test_not_closed(self):
        with pytest.raises(NotClosedError, match="not closed"):
            LieBasis.from_elements(SU2_HALF[:2])

    def test_dependent_elements_rejected(self):
        with pytest.raises(ValueError, match="linearly dependent"):
            LieBasis(tuple(Operator(m) for m in (SU2_HALF[0], SU2_HALF[0])), np.zeros((2, 2, 2)))

    def test_jacobi(self):
        x0x1 = site_operator(2 * SPIN_HALF["x"], 0, 2) @ site_operator(2 * SPIN_HALF["x"], 1, 2)
        z0 = site_operator(2 * SPIN_HALF["z"], 0, 2)
        basis = lie_closure([x0x1, z0])
        assert jacobi_residual(structure_constants(basis)) <= 1e-9


class TestCommutingSubset:
    def test_su2_rank_one(self):
        cs = maximal_commuting_subset(LieBasis.from_elements(SU2_HALF))
        assert cs.member_indices == (0,)
        assert len(cs.casimirs) == 1

    def test_abelian_all(self):
        basis = LieBasis.from_elements([hubbard_spin_operators(1)[2], number_operator(2)])
        cs = maximal_commuting_subset(basis)
        assert cs.member_indices == (0, 1)
        assert cs.casimirs == ()

    def test_u1_plus_su2(self):
        sx, sy, sz, _ = hubbard_spin_operators(2)
        n = number_operator(4)
        mats = [np.asarray(x) for x in (n, sx, sy, sz)]
        # explicit pairwise commutator norms
        norms = np.array([[np.linalg.norm(a @ b - b @ a) for b in mats] for a in mats])
        assert norms[0, 1] <= 1e-12 and norms[1, 2] > 0.1 and norms[1, 3] > 0.1
        cs = maximal_commuting_subset(LieBasis.from_elements([n, sx, sy, sz]))
        assert cs.member_indices == (0, 1)

    def test_supplied_casimir_checked(self):
        basis = LieBasis.from_elements(SU2_HALF)
        with pytest.raises(ValueError, match="Casimir"):
            maximal_commuting_subset(basis, casimirs=[SU2_HALF[2]])


class TestCasimir:
    def test_spin_half(self):
        basis = LieBasis.from_elements(SU2_HALF)
        c = np.asarray(quadratic_casimir(basis))
        s2 = sum(m @ m for m in SU2_HALF)
        scale = frobenius_inner(s2, c) / frobenius_inner(s2, s2)
        np.testing.assert_allclose(c / scale, 0.75 * np.eye(2), atol=1e-12)

    def test_two_spins(self):
        sx, sy, sz, s2 = spin_ops(2)
        c = np.asarray(quadratic_casimir(lie_closure([sx, sy])))
        scale = frobenius_inner(s2, c) / frobenius_inner(s2, s2)
        np.testing.assert_allclose(np.linalg.eigvalsh(c / scale), [0, 2, 2, 2], atol=1e-12)

    def test_abelian_raises(self):
        with pytest.raises(NotSemisimpleError, match="not semi-simple"):
            quadratic_casimir(LieBasis.from_elements([SU2_HALF[2]]))

    def test_is_casimir_values(self):
        basis = LieBasis.from_elements(SU2_HALF)
        s2 = sum(m @ m for m in SU2_HALF)
        assert is_casimir(s2, basis) <= 1e-12
        assert is_casimir(np.eye(2), basis) == 0
        # |[Sz, Sx]| = |Sy| = 1/sqrt(2)
        assert is_casimir(SU2_HALF[2], basis) == pytest.approx(np.linalg.norm(SU2_HALF[1]))
        assert is_casimir(SU2_HALF[2], basis) >= 0.1

    def test_is_casimir_dims(self):
        with pytest.raises(ValueError, match="mismatch"):
            is_casimir(np.eye(3), LieBasis.from_elements(SU2_HALF))
