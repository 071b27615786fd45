"""Synthetic stream generation, ground-truth accounting, and CSV I/O."""

import math

import numpy as np
import pytest

from qsketch.streams import (
    StreamSpec,
    WeightedElement,
    generate,
    load_csv,
    true_cardinality,
    write_csv,
)


class TestGenerate:
    def test_constant_weights_truth_is_count(self):
        stream = generate(StreamSpec("constant", 100, seed=1, params=(7.0,)))
        assert stream.drawn_weight_sum == 700.0
        assert true_cardinality(stream) == 700.0
        assert len(stream) == 100

    def test_truth_matches_exact_sum_of_draws(self):
        stream = generate(StreamSpec("uniform", 5000, seed=9))
        assert true_cardinality(stream) == stream.drawn_weight_sum
        assert stream.drawn_weight_sum == math.fsum(stream.weights.tolist())

    def test_uniform_mean_in_band(self):
        n = 20000
        stream = generate(StreamSpec("uniform", n, seed=3))
        # mean of U(0,1) is 0.5 with sd 1/sqrt(12n)
        assert abs(stream.weights.mean() - 0.5) < 3 / math.sqrt(12 * n)
        assert stream.weights.min() > 0.0
        assert stream.weights.max() <= 1.0

    @pytest.mark.parametrize("dist", ["uniform", "gauss", "gamma", "constant"])
    def test_weights_strictly_positive(self, dist):
        stream = generate(StreamSpec(dist, 5000, seed=11))
        assert np.all(stream.weights > 0.0)

    def test_deterministic_by_seed(self):
        a = generate(StreamSpec("gauss", 500, seed=42))
        b = generate(StreamSpec("gauss", 500, seed=42))
        c = generate(StreamSpec("gauss", 500, seed=43))
        np.testing.assert_array_equal(a.keys, b.keys)
        np.testing.assert_array_equal(a.weights, b.weights)
        assert not np.array_equal(a.weights, c.weights)

    def test_keys_distinct(self):
        stream = generate(StreamSpec("uniform", 100000, seed=5))
        assert np.unique(stream.keys).size == 100000

    def test_duplication_repeats_without_changing_truth(self):
        base = StreamSpec("gamma", 1000, seed=7)
        dup = StreamSpec("gamma", 1000, seed=7, duplication_factor=4)
        clean = generate(base)
        noisy = generate(dup)
        assert len(noisy) == 4000
        assert true_cardinality(noisy) == true_cardinality(clean)
        # same distinct pairs, just repeated and shuffled
        assert set(zip(noisy.keys.tolist(), noisy.weights.tolist())) == set(
            zip(clean.keys.tolist(), clean.weights.tolist())
        )

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            StreamSpec("zipf", 10, seed=0)
        with pytest.raises(ValueError):
            StreamSpec("uniform", -1, seed=0)
        with pytest.raises(ValueError):
            StreamSpec("uniform", 10, seed=0, duplication_factor=0)

    def test_param_validation_at_generation(self):
        with pytest.raises(ValueError):
            generate(StreamSpec("uniform", 10, seed=0, params=(2.0, 1.0)))  # low >= high
        with pytest.raises(ValueError):
            generate(StreamSpec("constant", 10, seed=0, params=(-1.0,)))
        with pytest.raises(ValueError):
            generate(StreamSpec("gamma", 10, seed=0, params=(1.0,)))  # arity


class TestTrueCardinality:
    def test_empty(self):
        assert true_cardinality([]) == 0.0

    def test_duplicates_counted_once(self):
        elems = [
            WeightedElement(10, 2.0),
            WeightedElement(11, 3.0),
            WeightedElement(10, 2.0),
        ]
        assert true_cardinality(elems) == 5.0

    def test_first_weight_wins(self):
        elems = [WeightedElement(10, 2.0), WeightedElement(10, 9.0)]
        assert true_cardinality(elems) == 2.0


class TestCsv:
    def test_load_simple(self, tmp_path):
        p = tmp_path / "s.csv"
        p.write_text("a,1.5\nb,2.0\n")
        stream = load_csv(p)
        assert len(stream) == 2
        assert true_cardinality(stream) == 3.5
        assert stream.keys.dtype == np.uint64
        assert stream.keys[0] != stream.keys[1]

    def test_skips_comments_and_blanks(self, tmp_path):
        p = tmp_path / "s.csv"
        p.write_text("# header comment\n\na,1.0\n   \nb,2.0\n")
        assert len(load_csv(p)) == 2

    def test_same_key_same_weight_truth_once(self, tmp_path):
        p = tmp_path / "s.csv"
        p.write_text("a,1.0\na,1.0\n")
        stream = load_csv(p)
        assert len(stream) == 2  # both occurrences kept in the stream
        assert true_cardinality(stream) == 1.0

    def test_inconsistent_weight_warns_first_wins(self, tmp_path):
        p = tmp_path / "s.csv"
        p.write_text("a,1.0\na,4.0\n")
        with pytest.warns(UserWarning, match="weight"):
            stream = load_csv(p)
        assert true_cardinality(stream) == 1.0

    def test_rejects_nonpositive_weight_with_location(self, tmp_path):
        p = tmp_path / "s.csv"
        p.write_text("a,1.0\nb,0\n")
        with pytest.raises(ValueError, match=r":2:"):
            load_csv(p)

    def test_rejects_malformed_line(self, tmp_path):
        p = tmp_path / "s.csv"
        p.write_text("a,1.0\nb\n")
        with pytest.raises(ValueError, match=r":2:"):
            load_csv(p)

    def test_rejects_unparseable_weight(self, tmp_path):
        p = tmp_path / "s.csv"
        p.write_text("a,banana\n")
        with pytest.raises(ValueError, match=r":1:"):
            load_csv(p)

    def test_write_then_load_preserves_truth(self, tmp_path):
        stream = generate(StreamSpec("gamma", 300, seed=21, duplication_factor=2))
        p = tmp_path / "round.csv"
        write_csv(stream, p)
        back = load_csv(p)
        assert len(back) == len(stream)
        # keys are re-hashed from their decimal spelling, so compare truth
        assert true_cardinality(back) == true_cardinality(stream)
