import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pagingsim.markov import (
    AbsorbingChain,
    SearchDistribution,
    absorption_probabilities,
    build_paging_chain,
    expected_steps,
    fundamental_matrix,
)


def enumerate_success_mass(chain):
    """Oracle: per-position absorption mass by explicit path products."""
    mass = []
    reach = 1.0
    for j in range(chain.transient_count):
        mass.append(reach * chain.r_block[j, j])
        if j + 1 < chain.transient_count:
            reach *= chain.q_block[j, j + 1]
    return mass


def direct_expected_steps(probs):
    """Oracle: E[steps] = sum_j j * p_j over positions 1..n."""
    return sum((j + 1) * p for j, p in enumerate(probs))


@st.composite
def distributions(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    weights = draw(
        st.lists(st.floats(0.01, 1.0, allow_nan=False), min_size=n, max_size=n)
    )
    total = sum(weights)
    return tuple(w / total for w in weights)


class TestSearchDistribution:
    def test_valid(self):
        d = SearchDistribution((0.5, 0.3, 0.2))
        assert d.n == 3

    def test_zero_entries_allowed(self):
        # empty carriers produce zero location probability
        SearchDistribution((1.0, 0.0))

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            SearchDistribution(())

    def test_rejects_bad_sum(self):
        with pytest.raises(ValueError, match="sum to 1"):
            SearchDistribution((0.5, 0.4))

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            SearchDistribution((1.5, -0.5))


class TestBuildPagingChain:
    def test_two_equal_carriers_matches_canonical_form(self):
        chain = build_paging_chain(SearchDistribution((0.5, 0.5)))
        assert chain.q_block.tolist() == [[0.0, 0.5], [0.0, 0.0]]
        assert chain.r_block.tolist() == [[0.5, 0.0], [0.0, 1.0]]

    def test_single_carrier_absorbs_immediately(self):
        chain = build_paging_chain(SearchDistribution((1.0,)))
        assert chain.transient_count == 1
        assert chain.r_block.tolist() == [[1.0]]

    def test_hazards(self):
        chain = build_paging_chain(SearchDistribution((0.5, 0.3, 0.2)))
        hazards = np.diag(chain.r_block)
        assert hazards == pytest.approx([0.5, 0.6, 1.0], abs=1e-12)

    def test_success_mass_equals_input(self):
        probs = (0.5, 0.3, 0.2)
        chain = build_paging_chain(SearchDistribution(probs))
        assert enumerate_success_mass(chain) == pytest.approx(list(probs), abs=1e-12)

    def test_exhausted_mass_before_final_position_rejected(self):
        with pytest.raises(ValueError, match="no probability mass left"):
            build_paging_chain(SearchDistribution((1.0, 0.0, 0.0)))

    def test_certain_first_hit_with_empty_tail_carrier(self):
        # the final position's hazard is 1 by definition, so no division occurs
        chain = build_paging_chain(SearchDistribution((1.0, 0.0)))
        assert expected_steps(chain)[0] == pytest.approx(1.0, abs=1e-12)

    def test_interior_zero_ok(self):
        chain = build_paging_chain(SearchDistribution((0.5, 0.0, 0.5)))
        assert expected_steps(chain)[0] == pytest.approx(2.0, abs=1e-12)

    @given(distributions())
    def test_rows_stochastic_and_q_strictly_upper_triangular(self, probs):
        chain = build_paging_chain(SearchDistribution(probs))
        full = np.hstack([chain.q_block, chain.r_block])
        assert np.allclose(full.sum(axis=1), 1.0, atol=1e-12)
        assert np.all(np.tril(chain.q_block) == 0.0)


class TestFundamentalMatrix:
    def test_two_equal_carriers(self):
        # hand inverse of I - Q for the 2x2 case
        chain = build_paging_chain(SearchDistribution((0.5, 0.5)))
        assert fundamental_matrix(chain).tolist() == [[1.0, 0.5], [0.0, 1.0]]

    def test_single_state(self):
        chain = build_paging_chain(SearchDistribution((1.0,)))
        assert fundamental_matrix(chain).tolist() == [[1.0]]

    def test_matches_matrix_power_series(self):
        # Q is nilpotent, so N = sum_{k<n} Q^k exactly
        chain = build_paging_chain(SearchDistribution((0.5, 0.3, 0.2)))
        N = fundamental_matrix(chain)
        series = sum(
            np.linalg.matrix_power(chain.q_block, k) for k in range(chain.transient_count)
        )
        assert np.allclose(N, series, atol=1e-12)

    def test_inverse_property_and_nonnegative(self):
        chain = build_paging_chain(SearchDistribution((0.4, 0.1, 0.3, 0.2)))
        N = fundamental_matrix(chain)
        eye = N @ (np.eye(4) - chain.q_block)
        assert np.allclose(eye, np.eye(4), atol=1e-10)
        assert np.all(N >= 0.0)

    def test_singular_chain_rejected(self):
        # a self-looping transient state never absorbs
        stuck = AbsorbingChain(
            transient_count=1, q_block=[[1.0]], r_block=[[0.0]]
        )
        with pytest.raises(ValueError, match="not absorbing"):
            fundamental_matrix(stuck)


class TestExpectedSteps:
    def test_two_equal_carriers(self):
        chain = build_paging_chain(SearchDistribution((0.5, 0.5)))
        assert expected_steps(chain)[0] == pytest.approx(1.5, abs=1e-12)

    def test_three_to_one_populations(self):
        # closed form 2 - M/(M+N) with M=3, N=1
        chain = build_paging_chain(SearchDistribution((0.75, 0.25)))
        assert expected_steps(chain)[0] == pytest.approx(1.25, abs=1e-12)

    def test_direct_expectation_oracle(self):
        chain = build_paging_chain(SearchDistribution((0.5, 0.3, 0.2)))
        assert expected_steps(chain)[0] == pytest.approx(1.7, abs=1e-12)

    @given(st.integers(1, 1000), st.integers(1, 1000))
    def test_two_carrier_closed_form(self, m, n):
        p1 = m / (m + n)
        chain = build_paging_chain(SearchDistribution((p1, n / (m + n))))
        assert abs(expected_steps(chain)[0] - (2.0 - p1)) <= 1e-12

    @given(distributions())
    def test_matrix_method_agrees_with_direct_sum(self, probs):
        chain = build_paging_chain(SearchDistribution(probs))
        assert abs(expected_steps(chain)[0] - direct_expected_steps(probs)) <= 1e-10


class TestAbsorptionProbabilities:
    def test_symmetric_split(self):
        chain = build_paging_chain(SearchDistribution((0.5, 0.5)))
        assert absorption_probabilities(chain)[0].tolist() == [0.5, 0.5]

    def test_single(self):
        chain = build_paging_chain(SearchDistribution((1.0,)))
        assert absorption_probabilities(chain).tolist() == [[1.0]]

    def test_path_enumeration_oracle(self):
        probs = (0.5, 0.3, 0.2)
        chain = build_paging_chain(SearchDistribution(probs))
        B = absorption_probabilities(chain)
        assert B[0] == pytest.approx(enumerate_success_mass(chain), abs=1e-12)
        assert B[0] == pytest.approx(list(probs), abs=1e-10)

    @given(distributions())
    def test_mass_conservation(self, probs):
        chain = build_paging_chain(SearchDistribution(probs))
        B = absorption_probabilities(chain)
        assert np.allclose(B[0], probs, atol=1e-10)
        assert np.allclose(B.sum(axis=1), 1.0, atol=1e-10)


class TestOrderingMonotonicity:
    @given(distributions(max_n=5))
    def test_descending_order_minimizes_expected_steps(self, probs):
        best = min(
            direct_expected_steps(perm) for perm in itertools.permutations(probs)
        )
        descending = tuple(sorted(probs, reverse=True))
        assert direct_expected_steps(descending) <= best + 1e-10

    def test_sorting_never_hurts_via_chain(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            n = rng.integers(2, 6)
            w = rng.random(n) + 0.05
            probs = tuple(w / w.sum())
            base = expected_steps(build_paging_chain(SearchDistribution(probs)))[0]
            descending = tuple(sorted(probs, reverse=True))
            sorted_cost = expected_steps(
                build_paging_chain(SearchDistribution(descending))
            )[0]
            assert sorted_cost <= base + 1e-10


class TestAbsorbingChainValidation:
    def test_row_sum_enforced(self):
        with pytest.raises(ValueError, match="sums to"):
            AbsorbingChain(transient_count=1, q_block=[[0.2]], r_block=[[0.5]])

    def test_shape_enforced(self):
        with pytest.raises(ValueError):
            AbsorbingChain(transient_count=2, q_block=[[0.0]], r_block=[[1.0]])

    def test_blocks_read_only(self):
        chain = build_paging_chain(SearchDistribution((0.5, 0.5)))
        with pytest.raises(ValueError):
            chain.q_block[0, 1] = 0.9
