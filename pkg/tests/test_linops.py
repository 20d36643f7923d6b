import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bosonharness import linops
from bosonharness.errors import (
    InvalidDimensionError,
    InvalidElementError,
    InvalidUnitaryError,
    ShapeError,
    SizeLimitError,
)
from bosonharness.linops import (
    ElementSequence,
    TwoModeElement,
    balanced_beamsplitter,
    haar_unitary,
    permanent,
    recompose,
    reck_decompose,
)

from oracles import naive_permanent


def random_complex(rng, m):
    return rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))


class TestHaar:
    def test_dim_one_is_a_phase(self):
        U = haar_unitary(1, seed=3)
        assert U.shape == (1, 1)
        assert abs(abs(U[0, 0]) - 1) < 1e-14

    @pytest.mark.parametrize("seed", range(5))
    def test_unitary(self, seed):
        U = haar_unitary(4, seed)
        assert np.max(np.abs(U @ U.conj().T - np.eye(4))) <= 1e-10

    def test_column_norms(self):
        U = haar_unitary(9, 11)
        assert np.allclose(np.linalg.norm(U, axis=0), 1, atol=1e-12, rtol=0)

    def test_deterministic(self):
        assert np.array_equal(haar_unitary(5, 42), haar_unitary(5, 42))
        assert not np.array_equal(haar_unitary(5, 42), haar_unitary(5, 43))

    def test_zero_dim(self):
        with pytest.raises(InvalidDimensionError):
            haar_unitary(0, 1)

    def test_marginal_mean(self):
        # Haar marginal: E|U_00|^2 = 1/dim; 1e5 draws put the mean within 0.01
        vals = [abs(haar_unitary(2, s)[0, 0]) ** 2 for s in range(100_000)]
        assert abs(np.mean(vals) - 0.5) < 0.01

    def test_phase_of_first_entry_uniform(self):
        # without the diag(R) phase fix the QR output has a biased phase
        phases = np.array([np.angle(haar_unitary(3, s)[0, 0]) for s in range(4000)])
        assert abs(np.mean(np.cos(phases))) < 0.05
        assert abs(np.mean(np.sin(phases))) < 0.05


class TestReck:
    def test_identity(self):
        seq = reck_decompose(np.eye(4))
        assert seq.n_beamsplitters == 0
        assert np.allclose(recompose(seq), np.eye(4), atol=1e-14)

    def test_balanced_beamsplitter(self):
        B = balanced_beamsplitter()
        seq = reck_decompose(B)
        bs = [e for e in seq.elements if e.kind == "beamsplitter"]
        assert len(bs) == 1
        assert bs[0].angle == pytest.approx(math.pi / 4, abs=1e-12)
        assert np.linalg.norm(recompose(seq) - B) <= 1e-8

    @pytest.mark.parametrize("dim", [1, 2, 3, 6, 12])
    def test_round_trip(self, dim):
        for seed in range(3):
            U = haar_unitary(dim, seed)
            seq = reck_decompose(U)
            assert np.linalg.norm(recompose(seq) - U) <= 1e-8
            assert seq.n_beamsplitters <= dim * (dim - 1) // 2
            assert seq.n_phase_shifters <= dim

    def test_elements_are_nearest_neighbour(self):
        seq = reck_decompose(haar_unitary(5, 2))
        for e in seq.elements:
            if e.kind == "beamsplitter":
                assert e.modes[1] == e.modes[0] + 1

    def test_non_unitary_rejected(self):
        with pytest.raises(InvalidUnitaryError):
            reck_decompose(np.ones((3, 3)))

    def test_unitary_with_zero_pivot(self):
        # U[0, 0] = 0 forces a full swap in the first nulling step
        P = np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]], dtype=complex)
        assert np.linalg.norm(recompose(reck_decompose(P)) - P) <= 1e-12


class TestRecompose:
    def test_empty_is_identity(self):
        assert np.array_equal(recompose(ElementSequence(3, ())), np.eye(3))

    def test_single_phase(self):
        phi = 0.7
        U = recompose(ElementSequence(2, (TwoModeElement("phase", (0,), phase=phi),)))
        assert np.allclose(U, np.diag([np.exp(1j * phi), 1]))

    def test_order_is_application_order(self):
        a = TwoModeElement("beamsplitter", (0, 1), 0.3, 0.2)
        b = TwoModeElement("phase", (1,), phase=1.1)
        U = recompose(ElementSequence(2, (a, b)))
        expected = np.diag([1, np.exp(1.1j)]) @ linops.beamsplitter(0.3, 0.2)
        assert np.allclose(U, expected)

    def test_beamsplitter_adjoint_identity(self):
        B = linops.beamsplitter(0.4, 0.9)
        assert np.allclose(B.conj().T, linops.beamsplitter(0.4, 0.9 + math.pi))

    @pytest.mark.parametrize("el", [
        TwoModeElement("beamsplitter", (0, 3)),
        TwoModeElement("beamsplitter", (1, 1)),
        TwoModeElement("phase", (-1,)),
        TwoModeElement("phase", (0, 1)),
        TwoModeElement("phase", (0,), phase=float("nan")),
    ])
    def test_invalid_elements(self, el):
        with pytest.raises(InvalidElementError):
            recompose(ElementSequence(3, (el,)))

    def test_result_unitary(self):
        U = recompose(reck_decompose(haar_unitary(7, 5)))
        assert linops.is_unitary(U, 1e-10)


class TestPermanent:
    def test_empty(self):
        assert permanent(np.zeros((0, 0))) == 1

    @pytest.mark.parametrize("m", [1, 2, 5, 9])
    def test_identity(self, m):
        assert permanent(np.eye(m)) == pytest.approx(1)

    @pytest.mark.parametrize("m", [1, 2, 3, 4, 6, 8])
    def test_all_ones(self, m):
        assert permanent(np.ones((m, m))) == pytest.approx(math.factorial(m), rel=1e-12)

    def test_two_by_two(self):
        assert permanent([[1, -2], [-3, 4]]) == pytest.approx(10)

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_naive_expansion(self, seed):
        A = random_complex(np.random.default_rng(seed), 4)
        ref = naive_permanent(A)
        assert abs(permanent(A) - ref) <= 1e-12 * abs(ref)

    def test_matches_naive_7x7(self):
        A = random_complex(np.random.default_rng(99), 7)
        ref = naive_permanent(A)
        assert abs(permanent(A) - ref) <= 1e-11 * abs(ref)

    def test_pure_python_kernel_agrees(self):
        A = random_complex(np.random.default_rng(7), 6)
        assert abs(linops._ryser_gray_py(A) - permanent(A)) <= 1e-12 * abs(permanent(A))

    def test_non_square(self):
        with pytest.raises(ShapeError):
            permanent(np.ones((2, 3)))

    def test_size_limit(self):
        with pytest.raises(SizeLimitError):
            permanent(np.eye(31))
        with pytest.raises(SizeLimitError):
            permanent(np.eye(5), max_size=4)

    def test_conjugate(self):
        A = random_complex(np.random.default_rng(3), 5)
        assert permanent(A.conj()) == pytest.approx(np.conj(permanent(A)))

    @settings(max_examples=50, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), row=st.integers(0, 2),
           c=st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False))
    def test_row_multilinear(self, seed, row, c):
        A = random_complex(np.random.default_rng(seed), 3)
        B = A.copy()
        B[row] *= c
        assert permanent(B) == pytest.approx(c * permanent(A), rel=1e-10, abs=1e-10)

    @settings(max_examples=50, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_permutation_invariant(self, seed):
        rng = np.random.default_rng(seed)
        A = random_complex(rng, 5)
        B = A[rng.permutation(5)][:, rng.permutation(5)]
        assert permanent(B) == pytest.approx(permanent(A), rel=1e-10)


def test_matrix_json_round_trip():
    U = haar_unitary(3, 1)
    data = linops.matrix_to_json(U)
    assert np.array_equal(linops.matrix_from_json(data), U)
    assert len(data[0][0]) == 2
