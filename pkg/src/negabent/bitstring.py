"""Truth-table (TT) encoding: a chromosome is the 2**n-bit truth table.

Chromosomes are plain ints with bit k holding f(k), the same layout as
:meth:`TruthTable.to_int`, so decoding is the identity. Every operator
takes an explicit ``random.Random``.
"""
from __future__ import annotations

import random
from typing import Optional, Sequence

from .boolfunc import TruthTable


def _full(n: int) -> int:
    return (1 << (1 << n)) - 1


def random_init(n: int, rng: random.Random) -> int:
    return rng.getrandbits(1 << n)


def simple_bit_mutation(c: int, n: int, rng: random.Random, position: Optional[int] = None) -> int:
    if position is None:
        position = rng.randrange(1 << n)
    return c ^ (1 << position)


def random_span(size: int, rng: random.Random) -> tuple[int, int]:
    """(i, j) uniform over the size*(size+1)/2 pairs with i <= j.

    Two distinct cut points out of 0..size bound the substring.
    """
    a, b = rng.sample(range(size + 1), 2)
    return min(a, b), max(a, b) - 1


def shuffle_mutation(
    c: int, n: int, rng: random.Random, span: Optional[tuple[int, int]] = None
) -> int:
    """Randomly permute the bits of the substring [i, j]."""
    size = 1 << n
    if span is None:
        i, j = random_span(size, rng)
    else:
        i, j = span
        if not 0 <= i <= j < size:
            raise ValueError(f"invalid span {span} for size {size}")
    length = j - i + 1
    window = ((1 << length) - 1) << i
    ones = (c & window).bit_count()
    if ones in (0, length):
        return c
    # a uniform permutation of the window equals a uniform placement of its
    # ones; place whichever value is rarer
    minority = min(ones, length - ones)
    placed = 0
    for p in rng.sample(range(length), minority):
        placed |= 1 << p
    if minority != ones:
        placed ^= (1 << length) - 1
    return (c & ~window) | (placed << i)


def one_point_crossover(
    a: int, b: int, n: int, rng: random.Random, breakpoint: Optional[int] = None
) -> int:
    """Child takes positions [0, k) from one parent and [k, 2**n) from the other.

    Parent order is randomized unless ``breakpoint`` is forced, in which case
    ``a`` supplies the low part.
    """
    size = 1 << n
    if breakpoint is None:
        breakpoint = rng.randrange(1, size)
        if rng.random() < 0.5:
            a, b = b, a
    elif not 0 < breakpoint < size:
        raise ValueError(f"breakpoint must lie in [1, {size - 1}]")
    low = (1 << breakpoint) - 1
    return (a & low) | (b & ~low & _full(n))


def uniform_crossover(a: int, b: int, n: int, rng: random.Random) -> int:
    pick = rng.getrandbits(1 << n)
    return (a & pick) | (b & ~pick & _full(n))


CROSSOVERS = ("one_point", "uniform")
MUTATIONS = ("bit", "shuffle")


class TruthTableEncoding:
    """Bitstring encoding plugged into the steady-state engine."""

    name = "tt"

    def __init__(
        self,
        n: int,
        p_mut: float = 0.5,
        mutation_weights: Sequence[float] = (1.0, 1.0),
    ):
        self.n = n
        self.p_mut = p_mut
        self.mutation_weights = tuple(mutation_weights)
        self.last_ops: tuple[str, Optional[str]] = ("", None)

    def random(self, rng: random.Random) -> int:
        return random_init(self.n, rng)

    def crossover(self, a: int, b: int, rng: random.Random) -> int:
        if rng.random() < 0.5:
            op = "one_point"
            child = one_point_crossover(a, b, self.n, rng)
        else:
            op = "uniform"
            child = uniform_crossover(a, b, self.n, rng)
        self.last_ops = (op, None)
        return child

    def mutate(self, c: int, rng: random.Random) -> int:
        op = rng.choices(MUTATIONS, weights=self.mutation_weights)[0]
        self.last_ops = (self.last_ops[0], op)
        if op == "bit":
            return simple_bit_mutation(c, self.n, rng)
        return shuffle_mutation(c, self.n, rng)

    def vary(self, a: int, b: int, rng: random.Random) -> int:
        child = self.crossover(a, b, rng)
        if rng.random() < self.p_mut:
            child = self.mutate(child, rng)
        return child

    def decode(self, genome: int) -> int:
        return genome

    def describe(self, genome: int) -> Optional[str]:
        return None

    def to_table(self, genome: int) -> TruthTable:
        return TruthTable.from_int(self.n, genome)
