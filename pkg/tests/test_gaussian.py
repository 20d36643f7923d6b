import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bosonharness.errors import DomainError, SizeLimitError
from bosonharness.gaussian import (
    SqueezedParams,
    distance_curve,
    grid_distances,
    hermite,
    minimize_distance,
    photon_number_prob,
    photon_number_probs,
    trace_distance_lossy,
    trace_distance_pure_copies,
)

from oracles import number_basis_distance

params_st = st.builds(SqueezedParams, beta=st.floats(0, 2), V=st.floats(0.1, 1))


def lossy_photon(eta):
    return [1 - eta, eta]


class TestHermite:
    @pytest.mark.parametrize("x", [-1.3, 0.0, 0.5, 2.0])
    def test_closed_forms(self, x):
        assert hermite(0, x) == 1
        assert hermite(1, x) == pytest.approx(2 * x)
        assert hermite(2, x) == pytest.approx(4 * x**2 - 2)
        assert hermite(4, x) == pytest.approx(16 * x**4 - 48 * x**2 + 12)

    def test_parity(self):
        assert hermite(7, -0.8) == pytest.approx(-hermite(7, 0.8))

    def test_guard(self):
        hermite(60, 0.1)
        with pytest.raises(SizeLimitError):
            hermite(61, 0.1)


class TestSqueezedParams:
    def test_vacuum(self):
        p = SqueezedParams(0.0, 1.0)
        assert p.mu == pytest.approx(1) and p.nu == pytest.approx(0)
        assert photon_number_prob(0, p) == pytest.approx(1)
        assert photon_number_prob(3, p) == 0

    @pytest.mark.parametrize("beta,V", [(-0.1, 0.5), (1.0, 0.0), (1.0, 1.5)])
    def test_invalid(self, beta, V):
        with pytest.raises(DomainError):
            SqueezedParams(beta, V)

    @given(params_st)
    def test_mu_nu(self, p):
        assert p.mu**2 - p.nu**2 == pytest.approx(1, abs=1e-9)
        assert p.mu >= 1 and p.nu >= 0


class TestPhotonNumber:
    def test_odd_terms_vanish_without_displacement(self):
        p = SqueezedParams(0.0, 0.3)
        for i in (1, 3, 5, 7):
            assert photon_number_prob(i, p) == pytest.approx(0, abs=1e-15)
        assert photon_number_prob(2, p) > 0

    def test_single_photon_weight_at_optimum(self):
        assert photon_number_prob(1, SqueezedParams(math.sqrt(2), 1 / 3)) == pytest.approx(0.478, abs=5e-4)

    def test_coherent_limit_is_poisson(self):
        p = SqueezedParams(1.3, 1.0)
        for i in range(8):
            ref = math.exp(-1.69) * 1.69**i / math.factorial(i)
            assert photon_number_prob(i, p) == pytest.approx(ref, rel=1e-12)

    @settings(max_examples=60)
    @given(params_st)
    def test_partial_normalization(self, p):
        s = math.fsum(photon_number_probs(p))
        assert 1 - 1e-6 <= s <= 1 + 1e-9

    @settings(max_examples=60)
    @given(params_st)
    def test_scaled_recurrence_matches_direct(self, p):
        fast = photon_number_probs(p, 30)
        direct = [photon_number_prob(i, p) for i in range(31)]
        assert np.allclose(fast, direct, rtol=1e-9, atol=1e-15)

    @given(params_st)
    def test_vacuum_plus_one_photon_at_most_one(self, p):
        c = photon_number_probs(p, 1)
        assert c[0] + c[1] <= 1 + 1e-12

    def test_guard(self):
        with pytest.raises(SizeLimitError):
            photon_number_prob(61, SqueezedParams(1, 0.5))


class TestTraceDistance:
    def test_disjoint_support(self):
        # vacuum against a perfect photon
        assert trace_distance_lossy(3, 1.0, SqueezedParams(0.0, 1.0)).distance == pytest.approx(1)

    def test_identical_states(self):
        # a fully lost photon is vacuum
        assert trace_distance_lossy(5, 0.0, SqueezedParams(0.0, 1.0)).distance == pytest.approx(0, abs=1e-15)

    @settings(max_examples=40)
    @given(p=params_st, eta=st.floats(0, 1))
    def test_single_copy_matches_number_basis(self, p, eta):
        ref = number_basis_distance(lossy_photon(eta), photon_number_probs(p))
        assert trace_distance_lossy(1, eta, p).distance == pytest.approx(ref, abs=1e-6)

    @settings(max_examples=40)
    @given(p=params_st, n=st.integers(1, 60))
    def test_lossless_reduces_to_pure_copies(self, p, n):
        c1 = photon_number_prob(1, p)
        D = trace_distance_lossy(n, 1.0, p).distance
        assert D == pytest.approx(1 - c1**n, abs=1e-12)
        assert D == pytest.approx(trace_distance_pure_copies(n, 1 - c1), abs=1e-12)

    @settings(max_examples=40)
    @given(p=params_st, n=st.integers(1, 300), eta=st.floats(0, 1))
    def test_bounded(self, p, n, eta):
        assert 0 <= trace_distance_lossy(n, eta, p).distance <= 1

    def test_invalid(self):
        with pytest.raises(DomainError):
            trace_distance_lossy(0, 0.5, SqueezedParams(1, 0.5))
        with pytest.raises(DomainError):
            trace_distance_lossy(3, 1.2, SqueezedParams(1, 0.5))

    def test_pure_copies(self):
        assert trace_distance_pure_copies(1, 0.3) == pytest.approx(0.3)
        assert trace_distance_pure_copies(5, 0.0) == 0
        assert trace_distance_pure_copies(5, 1.0) == 1
        assert trace_distance_pure_copies(2, 0.5) == pytest.approx(0.75)


class TestMinimize:
    def test_single_lossless_photon(self):
        r = minimize_distance(1, 1.0)
        assert r.distance == pytest.approx(0.522, abs=1e-3)
        assert r.params.beta == pytest.approx(math.sqrt(2), abs=1e-3)
        assert r.params.V == pytest.approx(1 / 3, abs=1e-3)

    def test_fully_lost_photon_is_vacuum(self):
        assert minimize_distance(1, 0.0).distance == pytest.approx(0, abs=1e-9)
        assert minimize_distance(30, 0.0).distance == pytest.approx(0, abs=1e-9)

    @pytest.mark.parametrize("n,eta", [(1, 1.0), (5, 0.8), (20, 0.96), (50, 0.5)])
    def test_beats_every_grid_point(self, n, eta):
        _, _, D = grid_distances(n, eta)
        assert minimize_distance(n, eta).distance <= D.min() + 1e-9

    def test_result_consistent_with_direct_evaluation(self):
        r = minimize_distance(10, 0.7)
        assert trace_distance_lossy(10, 0.7, r.params).distance == pytest.approx(r.distance, abs=1e-15)

    def test_deterministic(self):
        assert minimize_distance(7, 0.9) == minimize_distance(7, 0.9)

    def test_curve_monotone(self):
        ns, etas = [2, 5, 10], [0.3, 0.6, 0.9]
        D = np.array([r.distance for r in distance_curve(ns, etas)]).reshape(3, 3)
        assert np.all(np.diff(D, axis=0) >= -1e-6)
        assert np.all(np.diff(D, axis=1) >= -1e-6)

    def test_curve_threads_agree(self):
        a = distance_curve([3, 4], [0.5, 0.75])
        b = distance_curve([3, 4], [0.5, 0.75], threads=3)
        assert [r.distance for r in a] == [r.distance for r in b]
