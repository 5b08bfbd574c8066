import json

import numpy as np
import pytest
import scipy.linalg

from symproj.core import (
    Operator,
    SpectrumSpec,
    commutator,
    dumps_operator,
    frobenius_inner,
    hermitian_eigensystem,
    load_operator,
    loads_operator,
    matrix_exponential,
    save_operator,
    spectral_projector_oracle,
)
from symproj.models import SPIN_HALF, heisenberg_chain

from conftest import S2_2, SINGLET, SZ2, random_hermitian

SX, SY, SZ = SPIN_HALF["x"], SPIN_HALF["y"], SPIN_HALF["z"]


class TestOperator:
    def test_square_required(self):
        with pytest.raises(ValueError, match="square"):
            Operator(np.zeros((2, 3)))

    def test_hermitian_hint_checked(self):
        Operator(SX, hermitian_hint=True)
        with pytest.raises(ValueError, match="hermitian_hint"):
            Operator([[0, 1], [0, 0]], hermitian_hint=True)

    def test_immutable(self):
        op = Operator(np.eye(2))
        with pytest.raises(ValueError):
            op.entries[0, 0] = 3

    def test_input_copied(self):
        a = np.eye(2)
        op = Operator(a)
        a[0, 0] = 5
        assert op.entries[0, 0] == 1

    def test_arithmetic(self):
        a, b = Operator(SX), Operator(SZ)
        np.testing.assert_allclose(np.asarray(a @ b), SX @ SZ)
        np.testing.assert_allclose(np.asarray(2 * a - b), 2 * SX - SZ)
        np.testing.assert_allclose(np.asarray(Operator(SY).H), SY)


class TestCommutator:
    def test_identity_commutes(self, rng):
        a = random_hermitian(rng, 5)
        np.testing.assert_array_equal(np.asarray(commutator(np.eye(5), a)), np.zeros((5, 5)))

    def test_pauli_algebra(self):
        np.testing.assert_allclose(np.asarray(commutator(SX, SY)), 1j * SZ, atol=1e-15)

    def test_sz_s2_two_spins_handbuilt(self):
        assert np.max(np.abs(np.asarray(commutator(SZ2, S2_2)))) <= 1e-14

    def test_library_two_spin_matrices_match_handbuilt(self, two_spins):
        np.testing.assert_allclose(two_spins[2], SZ2, atol=1e-15)
        np.testing.assert_allclose(two_spins[3], S2_2, atol=1e-14)

    def test_antisymmetric(self, rng):
        a, b = random_hermitian(rng, 4), random_hermitian(rng, 4)
        np.testing.assert_allclose(np.asarray(commutator(a, b)), -np.asarray(commutator(b, a)))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="2 vs 3"):
            commutator(np.eye(2), np.eye(3))


class TestMatrixExponential:
    def test_zero_scalar(self, rng):
        a = random_hermitian(rng, 6)
        np.testing.assert_allclose(np.asarray(matrix_exponential(a, 0)), np.eye(6), atol=0)

    def test_sz_full_turn(self):
        u = np.asarray(matrix_exponential(SZ, 2j * np.pi))
        np.testing.assert_allclose(u, -np.eye(2), atol=1e-14)

    def test_two_spin_jy_against_eigen_oracle(self, two_spins):
        jy = two_spins[1]
        es = hermitian_eigensystem(jy)
        oracle = (es.eigenvectors * np.exp(1j * np.pi * es.eigenvalues)) @ es.eigenvectors.conj().T
        u = np.asarray(matrix_exponential(jy, 1j * np.pi))
        assert np.linalg.norm(u - oracle) <= 1e-11

    @pytest.mark.parametrize("n, scale", [(3, 0.1), (8, 1.0), (16, 10.0), (32, 3.0)])
    def test_relative_residual_hermitian(self, rng, n, scale):
        a = random_hermitian(rng, n, scale)
        es = hermitian_eigensystem(a)
        oracle = (es.eigenvectors * np.exp(0.7j * es.eigenvalues)) @ es.eigenvectors.conj().T
        u = np.asarray(matrix_exponential(a, 0.7j))
        assert np.linalg.norm(u - oracle) / np.linalg.norm(oracle) <= 1e-12

    def test_non_hermitian_against_scipy(self, rng):
        a = rng.normal(size=(7, 7)) + 1j * rng.normal(size=(7, 7))
        u = np.asarray(matrix_exponential(a, -0.3))
        ref = scipy.linalg.expm(-0.3 * a)
        assert np.linalg.norm(u - ref) / np.linalg.norm(ref) <= 1e-12

    def test_non_finite(self):
        with pytest.raises(ValueError, match="non-finite"):
            matrix_exponential(np.array([[np.inf, 0], [0, 0]]))


class TestEigensystem:
    def test_diag(self):
        es = hermitian_eigensystem(np.diag([3.0, 1.0, 2.0]))
        np.testing.assert_allclose(es.eigenvalues, [1, 2, 3])

    def test_sz_two_spins(self, two_spins):
        np.testing.assert_allclose(hermitian_eigensystem(two_spins[2]).eigenvalues, [-1, 0, 0, 1], atol=1e-15)

    def test_invariants(self, rng):
        a = random_hermitian(rng, 12)
        es = hermitian_eigensystem(a)
        assert np.max(np.abs(a - es.reconstruct())) <= 1e-10 * np.max(np.abs(a))
        v = es.eigenvectors
        assert np.max(np.abs(v.conj().T @ v - np.eye(12))) <= 1e-12

    def test_heisenberg_against_independent_solver(self):
        # second route: bit-flip construction, scipy's LAPACK driver
        n = 4
        dim = 2 ** n
        h = np.zeros((dim, dim))
        for i in range(n):
            j = (i + 1) % n
            for s in range(dim):
                si, sj = s >> i & 1, s >> j & 1
                h[s, s] += 0.25 if si == sj else -0.25
                if si != sj:
                    h[s ^ (1 << i) ^ (1 << j), s] += 0.5
        ref = scipy.linalg.eigh(h, eigvals_only=True, driver="ev")
        got = hermitian_eigensystem(heisenberg_chain(4, 1.0, periodic=True)).eigenvalues
        np.testing.assert_allclose(got, ref, atol=1e-12)
        assert got[0] == pytest.approx(-2.0, abs=1e-12)

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError, match="not Hermitian"):
            hermitian_eigensystem([[0, 1], [0, 0]])


class TestOracle:
    def test_diag(self):
        p = np.asarray(spectral_projector_oracle(np.diag([1.0, 2.0, 3.0]), 2))
        np.testing.assert_allclose(p, np.diag([0, 1, 0]), atol=1e-15)

    def test_sz_degenerate(self, two_spins):
        p = np.asarray(spectral_projector_oracle(two_spins[2], 0))
        np.testing.assert_allclose(p, np.diag([0, 1, 1, 0]), atol=1e-15)
        assert np.trace(p).real == pytest.approx(2)

    def test_s2_singlet(self, two_spins):
        p = np.asarray(spectral_projector_oracle(two_spins[3], 0))
        np.testing.assert_allclose(p, np.outer(SINGLET, SINGLET), atol=1e-14)

    def test_no_eigenvalue(self):
        with pytest.raises(ValueError, match="nearest is 2"):
            spectral_projector_oracle(np.diag([1.0, 2.0]), 2.5)

    def test_resolution_of_identity(self, rng):
        a = np.diag(rng.integers(-2, 3, size=10).astype(float))
        u = scipy.linalg.qr(rng.normal(size=(10, 10)))[0]
        a = u @ a @ u.T
        spec = SpectrumSpec.from_operator(a)
        total = sum(np.asarray(spectral_projector_oracle(a, v)) for v in spec.values)
        assert np.linalg.norm(total - np.eye(10)) <= 1e-11


class TestFrobenius:
    def test_values(self):
        assert frobenius_inner(np.eye(2), np.eye(2)) == 2
        assert frobenius_inner(SX, SY) == 0
        assert frobenius_inner(SZ, SZ) == pytest.approx(0.5)


class TestSpectrumSpec:
    def test_duplicates_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            SpectrumSpec((1.0, 1.0))

    def test_spacing_checked(self):
        SpectrumSpec((0.0, 1.0, 2.0), spacing=1.0)
        with pytest.raises(ValueError, match="spacing"):
            SpectrumSpec((0.0, 1.0, 3.0), spacing=1.0)

    def test_from_operator(self, four_spins):
        spec = SpectrumSpec.from_operator(four_spins[2])
        assert spec.source == "oracle"
        np.testing.assert_allclose(spec.values, [-2, -1, 0, 1, 2], atol=1e-12)
        assert spec.degeneracies == (1, 4, 6, 4, 1)
        assert spec.spacing == pytest.approx(1.0)

    def test_degeneracy_dimension(self):
        with pytest.raises(ValueError, match="degeneracies sum"):
            SpectrumSpec((0.0, 1.0), degeneracies=(1, 2)).check_dimension(4)


class TestSerialization:
    def test_roundtrip_bits(self, rng):
        a = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
        b = np.asarray(loads_operator(dumps_operator(a)))
        np.testing.assert_array_equal(a, b)

    def test_format(self):
        data = json.loads(dumps_operator(np.array([[1, 2j], [0, 0.1]])))
        assert data["dim"] == 2
        assert data["entries"] == [[1.0, 0.0], [0.0, 2.0], [0.0, 0.0], [0.1, 0.0]]

    def test_decimal17(self):
        text = dumps_operator(np.array([[0.1]]))
        assert "0.10000000000000001" in text

    def test_file_roundtrip(self, tmp_path, two_spins):
        path = tmp_path / "sy.json"
        save_operator(path, two_spins[1])
        np.testing.assert_array_equal(np.asarray(load_operator(path)), two_spins[1])

    def test_bad_entry_count(self):
        with pytest.raises(ValueError, match="expected 4 entries"):
            loads_operator('{"dim": 2, "entries": [[1, 0]]}')
