"""Fitness functions for bent-negabent (even n) and negabent (odd n) search.

Scores are rationals with a power-of-two denominator. The engine compares
them as integers scaled by that denominator, which keeps comparisons exact;
public helpers return :class:`fractions.Fraction`.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from .boolfunc import (
    TruthTable,
    _peak_extended,
    _peak_pair,
    covering_bound,
    extension_mask,
    int_to_bits,
    sigma2,
)

EXTENDED = "extended"
LITERAL = "literal"


def fitness_optimum(n: int) -> Fraction:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n % 2 == 0:
        return Fraction(2 * covering_bound(n))
    return Fraction(covering_bound(n + 1))


class FitnessEvaluator:
    """Per-n evaluator with the sigma tables precomputed.

    ``odd_denominator`` selects the divisor of the odd-n gradient term:
    ``"extended"`` uses 2**(n+1), the spectrum size of the extended
    function; ``"literal"`` uses 2**n as the formula is printed. With the
    literal divisor the bent optimum scores covering_bound(n+1) - 1.
    """

    def __init__(self, n: int, odd_denominator: str = EXTENDED):
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        if odd_denominator not in (EXTENDED, LITERAL):
            raise ValueError(f"unknown odd_denominator {odd_denominator!r}")
        self.n = n
        self.even = n % 2 == 0
        self.odd_denominator = odd_denominator
        if self.even:
            self._mask = sigma2(n).bits
            self.denominator = 1 << n
            self._half_nl = 1 << (n - 1)
        else:
            self._mask = extension_mask(n)
            self.denominator = 1 << n if odd_denominator == LITERAL else 1 << (n + 1)
            self._spectrum_size = 1 << (n + 1)
            self._half_nl = 1 << n
        self.optimum = fitness_optimum(n)
        if not self.even and odd_denominator == LITERAL:
            # a bent extension has 2**(n+1) peak values, so the term is -1
            self.optimum -= 1
        self.optimum_scaled = self.optimum.numerator * self.denominator

    def scaled(self, bits: np.ndarray) -> int:
        """Fitness times ``self.denominator``, as an exact integer."""
        s = self.denominator
        if self.even:
            m1, c1, m2, c2 = _peak_pair(bits, self._mask)
            nl = 2 * self._half_nl - (m1 + m2) // 2
            return int(nl * s + (s - c1) + (s - c2))
        m, c = _peak_extended(bits, self._mask)
        nl = self._half_nl - m // 2
        return int(nl * s + (s - c))

    def is_optimal(self, scaled: int, bits: np.ndarray) -> bool:
        """True iff the scored table reaches the search target.

        Under the literal odd divisor the bent score is not guaranteed to be
        unique, so the target is confirmed on the spectrum itself.
        """
        if scaled != self.optimum_scaled:
            return False
        if self.even or self.odd_denominator == EXTENDED:
            return True
        m, _ = _peak_extended(bits, self._mask)
        return int(m) == 1 << ((self.n + 1) // 2)

    def scaled_int(self, table: int) -> int:
        return self.scaled(int_to_bits(table, self.n))

    def to_fraction(self, scaled: int) -> Fraction:
        return Fraction(scaled, self.denominator)

    def __call__(self, tt: TruthTable) -> Fraction:
        if tt.n != self.n:
            raise ValueError(f"evaluator is for n={self.n}, got n={tt.n}")
        return self.to_fraction(self.scaled(tt.bits))


_cache: dict[tuple[int, str], FitnessEvaluator] = {}


def evaluator(n: int, odd_denominator: str = EXTENDED) -> FitnessEvaluator:
    key = (n, odd_denominator)
    if key not in _cache:
        _cache[key] = FitnessEvaluator(n, odd_denominator)
    return _cache[key]


def fitness_even(tt: TruthTable) -> Fraction:
    if tt.n % 2:
        raise ValueError(f"fitness_even needs even n, got {tt.n}")
    return evaluator(tt.n)(tt)


def fitness_odd(tt: TruthTable, odd_denominator: str = EXTENDED) -> Fraction:
    if tt.n % 2 == 0:
        raise ValueError(f"fitness_odd needs odd n, got {tt.n}")
    return evaluator(tt.n, odd_denominator)(tt)


def fitness(tt: TruthTable) -> Fraction:
    return fitness_even(tt) if tt.n % 2 == 0 else fitness_odd(tt)
