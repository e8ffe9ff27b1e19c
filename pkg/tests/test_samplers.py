"""Sampler behavior: metadata, determinism, tree structure, text format."""

import numpy as np
import pytest

from exmcmc import fixtures
from exmcmc.errors import TreeFormatError, TreeValidationError
from exmcmc.kernel import KernelPair
from exmcmc.rng import substream
from exmcmc.samplers import (
    MarkedTree,
    build_path_tree,
    build_split_star,
    build_star_tree,
    format_marked_tree,
    parse_marked_tree,
    sample_iid,
    sample_parallel,
    sample_permuted_serial,
    sample_sequential,
    sample_tree,
)


class TestMarkedTreeValidation:
    def test_minimal_tree(self):
        tree = MarkedTree(1, (), (0,))
        assert tree.n_draws == 0

    def test_rejects_self_loop(self):
        with pytest.raises(TreeValidationError):
            MarkedTree(2, ((0, 0),), (0, 1))

    def test_rejects_duplicate_edge(self):
        with pytest.raises(TreeValidationError):
            MarkedTree(3, ((0, 1), (1, 0)), (0, 1))

    def test_rejects_wrong_edge_count(self):
        with pytest.raises(TreeValidationError):
            MarkedTree(3, ((0, 1),), (0, 1))

    def test_rejects_disconnected(self):
        with pytest.raises(TreeValidationError):
            MarkedTree(4, ((0, 1), (2, 3), (0, 1)), (0, 1))

    def test_rejects_duplicate_marks(self):
        with pytest.raises(TreeValidationError):
            MarkedTree(2, ((0, 1),), (0, 0))

    def test_rejects_mark_out_of_range(self):
        with pytest.raises(TreeValidationError):
            MarkedTree(2, ((0, 1),), (0, 5))

    def test_adjacency_flow_direction(self):
        tree = MarkedTree(2, ((0, 1),), (0, 1))
        adj = tree.adjacency()
        assert adj[0] == [(1, True)]
        assert adj[1] == [(0, False)]


class TestTreeBuilders:
    def test_path_tree_shape(self):
        tree = build_path_tree(3, 2)
        assert tree.vertex_count == 7
        assert tree.n_draws == 3
        assert tree.marks == (0, 2, 4, 6)
        assert tree.edges == tuple((i, i + 1) for i in range(6))

    def test_star_tree_shape(self):
        tree = build_star_tree(3, 1)
        # an unmarked hub with one arm per mark, M+1 marks in total
        assert tree.vertex_count == 5
        assert tree.n_draws == 3
        assert len(tree.marks) == 4
        assert all(u == 0 for u, _ in tree.edges)

    def test_star_tree_longer_arms(self):
        tree = build_star_tree(2, 3)
        assert tree.vertex_count == 1 + 3 * 3
        assert tree.n_draws == 2

    def test_split_star_shape(self):
        tree = build_split_star(2, 2, 1)
        # marked hub plus 2 arms x 2 marks
        assert tree.n_draws == 4
        assert tree.marks[0] == 0
        assert tree.vertex_count == 5

    def test_builders_reject_bad_sizes(self):
        with pytest.raises(ValueError):
            build_path_tree(0, 1)
        with pytest.raises(ValueError):
            build_star_tree(1, 0)
        with pytest.raises(ValueError):
            build_split_star(0, 1, 1)


class TestSampleSets:
    def test_iid_metadata(self, rng):
        _, target = fixtures.lazy_walk_skewed()
        out = sample_iid(target.sampler(), "a", 5, rng)
        assert out.method == "iid"
        assert out.n_draws == 5
        assert out.exchangeable

    def test_sequential_flagged_not_exchangeable(self, skewed_pair, rng):
        out = sample_sequential(skewed_pair, "a", 4, rng)
        assert out.method == "sequential"
        assert not out.exchangeable
        assert out.n_draws == 4

    def test_parallel_records_hub(self, skewed_pair, rng):
        out = sample_parallel(skewed_pair, "a", 4, rng)
        assert out.hub in ("a", "b", "c")
        assert out.exchangeable

    def test_permuted_serial_records_permutation(self, skewed_pair, rng):
        out = sample_permuted_serial(skewed_pair, "a", 4, rng)
        assert sorted(out.sigma) == list(range(5))
        assert out.m_star == out.sigma[0]
        assert out.y_sequence[out.m_star] == "a"
        # draws are the chain states read off through the permutation
        for i in range(1, 5):
            assert out.draws[i - 1] == out.y_sequence[out.sigma[i]]

    def test_zero_draws(self, skewed_pair, rng):
        assert sample_parallel(skewed_pair, "a", 0, rng).draws == []

    def test_tree_sampler_runs_every_tree(self, skewed_pair, rng):
        for tree in (build_path_tree(3, 1), build_star_tree(3, 1), build_split_star(2, 1, 1)):
            out = sample_tree(skewed_pair, "a", tree, rng)
            assert out.n_draws == tree.n_draws
            assert all(d in ("a", "b", "c") for d in out.draws)

    def test_parallel_split_streams_deterministic(self, skewed_pair):
        """Spoke-parallel and spoke-sequential runs agree bit-for-bit."""
        seq = sample_parallel(skewed_pair, "a", 8, substream(7, 0), split_streams=True)
        par = sample_parallel(skewed_pair, "a", 8, substream(7, 0), workers=4)
        assert seq.draws == par.draws
        assert seq.hub == par.hub

    def test_same_stream_reproduces(self, skewed_pair):
        a = sample_permuted_serial(skewed_pair, "a", 6, substream(3, 1))
        b = sample_permuted_serial(skewed_pair, "a", 6, substream(3, 1))
        assert a.draws == b.draws and a.sigma == b.sigma


class TestAverageWorkOfPermutedSerial:
    def test_average_chain_distance_is_m_plus_2_thirds(self):
        """Each draw sits an average of (M+2)/3 super-steps from the observed
        point: exact enumeration of all 120 permutations at M=4."""
        from fractions import Fraction
        from itertools import permutations

        m = 4
        perms = list(permutations(range(m + 1)))
        assert len(perms) == 120
        for i in range(1, m + 1):
            total = sum(abs(sigma[i] - sigma[0]) for sigma in perms)
            assert Fraction(total, len(perms)) == Fraction(m + 2, 3)

    def test_reverse_steps_uniform(self, skewed_pair):
        """m* is uniform on {0..M} over many runs."""
        m = 3
        counts = np.zeros(m + 1)
        n = 20_000
        for i in range(n):
            out = sample_permuted_serial(skewed_pair, "a", m, substream(11, i))
            counts[out.m_star] += 1
        p = 1 / (m + 1)
        se = np.sqrt(p * (1 - p) / n)
        assert np.all(np.abs(counts / n - p) <= 4 * se)


class TestTreeTextFormat:
    def test_round_trip_bit_exact(self):
        for tree in (build_path_tree(3, 2), build_star_tree(2, 2), build_split_star(2, 2, 1)):
            text = format_marked_tree(tree)
            parsed = parse_marked_tree(text)
            assert parsed == tree
            assert format_marked_tree(parsed) == text

    def test_format_shape(self):
        text = format_marked_tree(MarkedTree(2, ((0, 1),), (0, 1)))
        assert text == "vertices 2\nedge 0 1\nmark 0 0\nmark 1 1\n"

    def test_parse_error_names_line(self):
        with pytest.raises(TreeFormatError, match="line 2"):
            parse_marked_tree("vertices 2\nedge 0\nmark 0 0\nmark 1 1\n")

    def test_unknown_directive_names_line(self):
        with pytest.raises(TreeFormatError, match="line 3"):
            parse_marked_tree("vertices 2\nedge 0 1\nfrob 1\n")

    def test_repeated_vertices_line(self):
        with pytest.raises(TreeFormatError, match="line 2"):
            parse_marked_tree("vertices 2\nvertices 2\n")

    def test_repeated_mark_index(self):
        with pytest.raises(TreeFormatError, match="line 4"):
            parse_marked_tree("vertices 2\nedge 0 1\nmark 0 0\nmark 0 1\n")

    def test_missing_vertices(self):
        with pytest.raises(TreeFormatError, match="vertices"):
            parse_marked_tree("edge 0 1\n")

    def test_gap_in_mark_indices(self):
        with pytest.raises(TreeFormatError, match="without gaps"):
            parse_marked_tree("vertices 2\nedge 0 1\nmark 0 0\nmark 2 1\n")

    def test_parsed_tree_still_validated(self):
        with pytest.raises(TreeValidationError):
            parse_marked_tree("vertices 2\nedge 0 1\nmark 0 0\nmark 1 0\n")
