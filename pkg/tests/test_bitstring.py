import random
from collections import Counter
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import chisquare

from negabent.bitstring import (
    TruthTableEncoding,
    one_point_crossover,
    random_init,
    random_span,
    shuffle_mutation,
    simple_bit_mutation,
    uniform_crossover,
)
from negabent.boolfunc import TruthTable


def chrom(n):
    return st.integers(0, (1 << (1 << n)) - 1)


def bits_of(c, n):
    return [(c >> k) & 1 for k in range(1 << n)]


def assert_fits_chi2(observed, expected, alpha=1e-4):
    stat, p = chisquare(observed, expected)
    assert p > alpha, (stat, p)


class TestInit:
    def test_weight_near_half(self):
        rng = random.Random(0)
        n = 8
        mean = sum(random_init(n, rng).bit_count() for _ in range(2000)) / 2000
        assert abs(mean - 128) < 2

    def test_seeded(self):
        assert random_init(6, random.Random(7)) == random_init(6, random.Random(7))
        assert random_init(6, random.Random(7)) != random_init(6, random.Random(8))

    def test_fits_width(self):
        rng = random.Random(1)
        assert all(random_init(3, rng) < 256 for _ in range(100))

    def test_identity_to_table(self):
        c = random_init(4, random.Random(2))
        assert TruthTable.from_int(4, c).to_int() == c
        assert TruthTableEncoding(4).to_table(c).bits.tolist() == bits_of(c, 4)


class TestBitMutation:
    @given(chrom(5), st.integers(0, 2**32))
    def test_distance_one(self, c, seed):
        out = simple_bit_mutation(c, 5, random.Random(seed))
        assert (out ^ c).bit_count() == 1
        assert out < 1 << 32

    def test_forced_involution(self):
        c = 0b1011_0010
        assert simple_bit_mutation(simple_bit_mutation(c, 3, None, 5), 3, None, 5) == c

    def test_positions_uniform(self):
        rng = random.Random(3)
        n = 4
        counts = Counter((simple_bit_mutation(0, n, rng)).bit_length() - 1 for _ in range(100_000))
        observed = [counts[k] for k in range(16)]
        assert_fits_chi2(observed, [100_000 / 16] * 16)


class TestShuffle:
    @given(chrom(6), st.integers(0, 2**32))
    def test_weight_invariant(self, c, seed):
        out = shuffle_mutation(c, 6, random.Random(seed))
        assert out.bit_count() == c.bit_count()
        assert out < 1 << 64

    @given(chrom(5), st.integers(0, 31), st.integers(0, 2**32))
    def test_length_one_identity(self, c, i, seed):
        assert shuffle_mutation(c, 5, random.Random(seed), span=(i, i)) == c

    def test_zeros_stay_zero(self):
        rng = random.Random(4)
        assert all(shuffle_mutation(0, 6, rng) == 0 for _ in range(200))

    @given(chrom(5), st.integers(0, 2**32))
    def test_outside_window_untouched(self, c, seed):
        rng = random.Random(seed)
        i = rng.randrange(32)
        j = rng.randrange(i, 32)
        out = shuffle_mutation(c, 5, rng, span=(i, j))
        outside = ~(((1 << (j - i + 1)) - 1) << i) & ((1 << 32) - 1)
        assert out & outside == c & outside

    def test_window_arrangements_uniform(self):
        # 2 ones in a 4-bit window: all C(4,2) = 6 arrangements equally likely
        rng = random.Random(5)
        c = 0b0011 << 2
        counts = Counter(shuffle_mutation(c, 3, rng, span=(2, 5)) for _ in range(60_000))
        assert len(counts) == 6
        assert_fits_chi2(list(counts.values()), [10_000] * 6)

    def test_span_distribution_uniform_over_pairs(self):
        rng = random.Random(6)
        counts = Counter(random_span(4, rng) for _ in range(50_000))
        assert set(counts) == {(i, j) for i in range(4) for j in range(i, 4)}
        assert_fits_chi2(list(counts.values()), [5_000] * 10)

    def test_bad_span(self):
        with pytest.raises(ValueError):
            shuffle_mutation(0, 2, random.Random(), span=(3, 1))


class TestOnePoint:
    def test_example(self):
        # positions 0,1 from a=0000 and 2,3 from b=1111
        child = one_point_crossover(0b0000, 0b1111, 2, None, breakpoint=2)
        assert bits_of(child, 2) == [0, 0, 1, 1]

    @given(chrom(4), st.integers(0, 2**32))
    def test_identical_parents(self, a, seed):
        assert one_point_crossover(a, a, 4, random.Random(seed)) == a

    @given(chrom(4), chrom(4), st.integers(0, 2**32))
    def test_positional_membership(self, a, b, seed):
        child = one_point_crossover(a, b, 4, random.Random(seed))
        assert child & ~(a | b) == 0
        assert ~child & (a & b) & 0xFFFF == 0

    def test_bad_breakpoint(self):
        with pytest.raises(ValueError):
            one_point_crossover(0, 1, 2, None, breakpoint=4)

    def test_parent_order_randomized(self):
        rng = random.Random(7)
        low_from_a = sum(one_point_crossover(0b1111, 0, 2, rng) & 1 for _ in range(10_000))
        assert 4700 < low_from_a < 5300


class TestUniform:
    @given(chrom(4), st.integers(0, 2**32))
    def test_identical_parents(self, a, seed):
        assert uniform_crossover(a, a, 4, random.Random(seed)) == a

    @given(chrom(5), chrom(5), st.integers(0, 2**32))
    def test_positional_membership(self, a, b, seed):
        child = uniform_crossover(a, b, 5, random.Random(seed))
        assert child & ~(a | b) == 0
        assert ~child & (a & b) & ((1 << 32) - 1) == 0

    def test_weight_binomial(self):
        rng = random.Random(8)
        trials = 100_000
        counts = Counter(uniform_crossover(0b0000, 0b1111, 2, rng).bit_count() for _ in range(trials))
        expected = [trials * comb(4, k) / 16 for k in range(5)]
        assert_fits_chi2([counts[k] for k in range(5)], expected)


class TestVary:
    def test_membership_without_mutation(self):
        enc = TruthTableEncoding(5, p_mut=0.0)
        rng = random.Random(9)
        for _ in range(500):
            a, b = enc.random(rng), enc.random(rng)
            child = enc.vary(a, b, rng)
            assert child & ~(a | b) == 0
            assert ~child & (a & b) & ((1 << 32) - 1) == 0

    def test_operator_frequencies(self):
        enc = TruthTableEncoding(4)
        rng = random.Random(10)
        ops = Counter()
        for _ in range(40_000):
            enc.vary(enc.random(rng), enc.random(rng), rng)
            ops.update(o for o in enc.last_ops if o)
        assert_fits_chi2([ops["one_point"], ops["uniform"]], [20_000, 20_000])
        mutated = ops["bit"] + ops["shuffle"]
        assert abs(mutated / 40_000 - 0.5) < 0.01
        assert_fits_chi2([ops["bit"], ops["shuffle"]], [mutated / 2] * 2)

    def test_reproducible_stream(self):
        def stream(seed):
            enc = TruthTableEncoding(6)
            rng = random.Random(seed)
            pop = [enc.random(rng) for _ in range(4)]
            return [enc.vary(pop[k % 4], pop[(k + 1) % 4], rng) for k in range(200)]

        assert stream(11) == stream(11)

    @given(st.integers(2, 8), st.integers(0, 2**32))
    def test_length_preserved(self, n, seed):
        enc = TruthTableEncoding(n)
        rng = random.Random(seed)
        for _ in range(20):
            assert enc.vary(enc.random(rng), enc.random(rng), rng) < 1 << (1 << n)


def test_chi2_helper_rejects_skew():
    with pytest.raises(AssertionError):
        assert_fits_chi2([900, 100], [500, 500])
