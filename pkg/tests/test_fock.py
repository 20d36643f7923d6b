import json
import math

import numpy as np
import pytest

from bosonharness.errors import EnumerationTooLargeError, InvalidInputError, SectorError
from bosonharness.fock import (
    OutputDistribution,
    amplitude,
    configurations,
    distinguishable_distribution,
    distinguishable_parameter_count,
    hilbert_dimension,
    output_distribution,
    sample,
    standard_input,
)
from bosonharness.linops import balanced_beamsplitter, haar_unitary

from oracles import fock_evolve

HOM = balanced_beamsplitter()


class TestStandardInput:
    def test_cases(self):
        assert standard_input(0, 3) == (0, 0, 0)
        assert standard_input(2, 4) == (1, 1, 0, 0)
        assert standard_input(3, 9) == (1, 1, 1, 0, 0, 0, 0, 0, 0)

    def test_custom_modes(self):
        assert standard_input(2, 4, modes=[1, 3]) == (0, 1, 0, 1)

    @pytest.mark.parametrize("args", [(5, 3), (-1, 3), (2, 4, [0, 0]), (1, 3, [3])])
    def test_invalid(self, args):
        with pytest.raises(InvalidInputError):
            standard_input(*args)


class TestHilbertDimension:
    def test_small(self):
        assert hilbert_dimension(2, 2) == 3
        assert [hilbert_dimension(1, N) for N in (1, 5, 400)] == [1, 5, 400]

    @pytest.mark.parametrize("n,N", [(0, 4), (2, 3), (3, 4), (4, 2)])
    def test_matches_enumeration(self, n, N):
        assert hilbert_dimension(n, N) == len(list(configurations(n, N)))

    def test_large_exact(self):
        d = hilbert_dimension(20, 400)
        assert isinstance(d, int)
        assert d == math.comb(419, 20)
        assert 7.0e33 < d < 7.5e33


def test_enumeration_order():
    assert list(configurations(2, 2)) == [(2, 0), (1, 1), (0, 2)]
    cfgs = list(configurations(3, 3))
    assert cfgs == sorted(cfgs, reverse=True)


class TestAmplitude:
    def test_identity(self):
        assert amplitude(np.eye(3), (1, 1, 0), (1, 1, 0)) == pytest.approx(1)
        assert amplitude(np.eye(3), (1, 1, 0), (1, 0, 1)) == 0

    def test_hong_ou_mandel(self):
        assert abs(amplitude(HOM, (1, 1), (1, 1))) < 1e-15
        assert abs(amplitude(HOM, (1, 1), (2, 0))) ** 2 == pytest.approx(0.5, abs=1e-14)

    def test_sector_mismatch(self):
        with pytest.raises(SectorError):
            amplitude(np.eye(2), (1, 1), (1, 0))

    @pytest.mark.parametrize("seed", range(4))
    def test_matches_polynomial_oracle(self, seed):
        U = haar_unitary(4, seed)
        s = (2, 0, 1, 0)
        ref = fock_evolve(U, s)
        for t in configurations(3, 4):
            assert amplitude(U, s, t) == pytest.approx(ref.get(t, 0), abs=1e-12)

    def test_bounded(self):
        U = haar_unitary(5, 3)
        for t in configurations(3, 5):
            assert abs(amplitude(U, (1, 1, 1, 0, 0), t)) <= 1 + 1e-12


class TestOutputDistribution:
    def test_identity_point_mass(self):
        d = output_distribution(np.eye(4), (1, 0, 1, 0))
        assert d[(1, 0, 1, 0)] == pytest.approx(1)
        assert d.total() == pytest.approx(1, abs=1e-14)

    def test_hom(self):
        d = output_distribution(HOM, (1, 1))
        assert list(d.entries) == [(2, 0), (1, 1), (0, 2)]
        assert d[(2, 0)] == pytest.approx(0.5)
        assert d[(0, 2)] == pytest.approx(0.5)
        assert d[(1, 1)] == 0.0

    @pytest.mark.parametrize("seed", range(5))
    def test_normalized(self, seed):
        d = output_distribution(haar_unitary(6, seed), standard_input(3, 6))
        assert abs(d.total() - 1) <= 1e-10
        assert np.all((d.probabilities >= 0) & (d.probabilities <= 1))

    def test_permutation_point_mass(self):
        perm = [2, 0, 3, 1]
        P = np.zeros((4, 4))
        for j, i in enumerate(perm):
            P[i, j] = 1
        s = (2, 1, 0, 1)
        t = [0] * 4
        for j, occ in enumerate(s):
            t[perm[j]] += occ
        d = output_distribution(P, s)
        assert d[tuple(t)] == pytest.approx(1)
        assert sum(p > 0 for p in d.entries.values()) == 1

    def test_ceiling(self):
        with pytest.raises(EnumerationTooLargeError, match="330"):
            output_distribution(haar_unitary(8, 0), standard_input(4, 8), ceiling=100)

    def test_first_moment_law(self):
        U = haar_unitary(5, 8)
        s = standard_input(3, 5)
        expected = np.abs(U) ** 2 @ np.asarray(s)
        for d in (output_distribution(U, s), distinguishable_distribution(U, s)):
            assert np.allclose(d.mean_occupations(), expected, atol=1e-12)
        samples = np.array(sample(output_distribution(U, s), 40_000, seed=5))
        assert np.allclose(samples.mean(axis=0), expected, atol=0.03)


class TestSample:
    def test_point_mass(self):
        d = output_distribution(np.eye(3), (1, 1, 0))
        assert set(sample(d, 100, 1)) == {(1, 1, 0)}

    def test_empty(self):
        assert sample(output_distribution(HOM, (1, 1)), 0, 1) == []

    def test_hom_frequencies(self):
        d = output_distribution(HOM, (1, 1))
        s = sample(d, 10_000, seed=2)
        assert s.count((1, 1)) == 0
        s = sample(d, 100_000, seed=3)
        assert abs(s.count((2, 0)) / len(s) - 0.5) < 0.01

    def test_deterministic(self):
        d = output_distribution(haar_unitary(4, 1), (1, 1, 0, 0))
        assert sample(d, 50, seed=9) == sample(d, 50, seed=9)


class TestDistinguishable:
    def test_hom(self):
        d = distinguishable_distribution(HOM, (1, 1))
        assert d[(2, 0)] == pytest.approx(0.25)
        assert d[(1, 1)] == pytest.approx(0.5)
        assert d[(0, 2)] == pytest.approx(0.25)

    @pytest.mark.parametrize("seed", range(4))
    def test_single_photon_equivalence(self, seed):
        U = haar_unitary(5, seed)
        s = standard_input(1, 5, modes=[seed])
        a = output_distribution(U, s).probabilities
        b = distinguishable_distribution(U, s).probabilities
        assert np.max(np.abs(a - b)) <= 1e-12

    @pytest.mark.parametrize("n,N", [(2, 4), (3, 5), (4, 8)])
    def test_normalized(self, n, N):
        U = haar_unitary(N, n)
        for d in (output_distribution(U, standard_input(n, N)), distinguishable_distribution(U, standard_input(n, N))):
            assert abs(d.total() - 1) <= 1e-10

    def test_parameter_count(self):
        assert distinguishable_parameter_count(20, 400) == 8000


def test_serialization_round_trip():
    d = output_distribution(haar_unitary(3, 0), (1, 1, 0))
    data = json.loads(json.dumps(d.to_dict()))
    assert data["modes"] == 3 and data["photons"] == 2
    assert OutputDistribution.from_dict(data).entries == d.entries
    lines = d.to_csv().splitlines()
    assert lines[0] == "config,p"
    assert lines[1].startswith("2-0-0,")
    assert len(lines) == 7
