"""Brute-force reference transforms and exhaustive property suites.

The naive transforms evaluate the defining double sums directly and share
no code with the butterfly path, so they serve as independent checks.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .boolfunc import (
    TruthTable,
    extend_odd,
    is_bent,
    is_negabent_direct,
    nega_transform,
    sigma2,
    wht,
)
from .fitness import fitness_even, fitness_odd, fitness_optimum


def _parity_matrix(n: int) -> np.ndarray:
    """M[a, x] = popcount(a & x) mod 2."""
    idx = np.arange(1 << n)
    anded = idx[:, None] & idx[None, :]
    par = np.zeros_like(anded)
    for j in range(n):
        par ^= (anded >> j) & 1
    return par


def _weight_vector(n: int) -> np.ndarray:
    idx = np.arange(1 << n)
    return np.array([bin(int(x)).count("1") for x in idx])


def naive_wht(tt: TruthTable) -> np.ndarray:
    """sum_x (-1)**(f(x) xor a.x) for every a, as a dense double sum."""
    exponent = (tt.bits.astype(np.int64)[None, :] + _parity_matrix(tt.n)) & 1
    return (1 - 2 * exponent).sum(axis=1)


def naive_nega(tt: TruthTable) -> tuple[np.ndarray, np.ndarray]:
    """Real and imaginary parts of sum_x (-1)**(f(x) xor a.x) * i**wt(x)."""
    sign = 1 - 2 * ((tt.bits.astype(np.int64)[None, :] + _parity_matrix(tt.n)) & 1)
    w = _weight_vector(tt.n) % 4
    unit_re = np.select([w == 0, w == 2], [1, -1], 0)
    unit_im = np.select([w == 1, w == 3], [1, -1], 0)
    return (sign * unit_re).sum(axis=1), (sign * unit_im).sum(axis=1)


def all_tables(n: int):
    """Every Boolean function of n variables, in integer order."""
    shifts = np.arange(1 << n)
    for k in range(1 << (1 << n)):
        yield TruthTable(n, (k >> shifts) & 1)


def affine_tables(n: int):
    """The 2**(n+1) functions a.x xor c."""
    idx = np.arange(1 << n)
    for a in range(1 << n):
        par = np.zeros(1 << n, dtype=np.int64)
        for j in range(n):
            if (a >> j) & 1:
                par ^= (idx >> j) & 1
        for c in (0, 1):
            yield TruthTable(n, par ^ c)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checked: int
    failures: int
    info: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = "".join(f" {k}={v}" for k, v in self.info.items())
        return f"[{status}] {self.name}: checked={self.checked} failures={self.failures}{extra}"


def even_reduction_suite(n: int) -> SuiteResult:
    """negabent(f) <=> bent(f xor sigma2), exhaustively."""
    s2 = sigma2(n)
    bad = checked = 0
    for f in all_tables(n):
        checked += 1
        if is_negabent_direct(f) != is_bent(f ^ s2):
            bad += 1
    return SuiteResult(f"even-n reduction n={n}", bad == 0, checked, bad)


def odd_reduction_suite(n: int) -> SuiteResult:
    """bent(extend_odd(f)) => negabent(f), plus a census of the converse."""
    bad = checked = 0
    census = {"negabent_ext_bent": 0, "negabent_ext_not_bent": 0}
    for f in all_tables(n):
        checked += 1
        ext_bent = is_bent(extend_odd(f))
        nb = is_negabent_direct(f)
        if ext_bent and not nb:
            bad += 1
        if nb:
            census["negabent_ext_bent" if ext_bent else "negabent_ext_not_bent"] += 1
    return SuiteResult(f"odd-n reduction n={n}", bad == 0, checked, bad, census)


def affine_suite(n: int) -> SuiteResult:
    bad = checked = 0
    for f in affine_tables(n):
        checked += 1
        if not is_negabent_direct(f):
            bad += 1
    return SuiteResult(f"affine negabent n={n}", bad == 0, checked, bad)


def parseval_suite(n: int, tables=None) -> SuiteResult:
    """Sum W**2 and sum |N|**2 both equal 4**n."""
    target = 1 << (2 * n)
    bad = checked = 0
    for f in tables if tables is not None else all_tables(n):
        checked += 1
        w = wht(f).values
        if int((w * w).sum()) != target or int(nega_transform(f).squared_norms().sum()) != target:
            bad += 1
    return SuiteResult(f"parseval n={n}", bad == 0, checked, bad)


def transform_suite(n: int, tables) -> SuiteResult:
    """Butterfly transforms agree exactly with the naive double sums."""
    bad = checked = 0
    for f in tables:
        checked += 1
        re, im = naive_nega(f)
        ns = nega_transform(f)
        if not (
            np.array_equal(wht(f).values, naive_wht(f))
            and np.array_equal(ns.re, re)
            and np.array_equal(ns.im, im)
        ):
            bad += 1
    return SuiteResult(f"transforms n={n}", bad == 0, checked, bad)


def fitness_suite(n: int) -> SuiteResult:
    """Even n: no function beats the optimum, and hitting it means
    bent-negabent. Odd n: hitting the optimum implies negabent."""
    opt = fitness_optimum(n)
    bad = checked = 0
    hits = 0
    top = None
    for f in all_tables(n):
        checked += 1
        if n % 2 == 0:
            v = fitness_even(f)
            hit = v == opt
            ok = v <= opt and hit == (is_bent(f) and is_negabent_direct(f))
        else:
            v = fitness_odd(f)
            hit = v == opt
            ok = v <= opt and (not hit or is_negabent_direct(f))
        hits += hit
        top = v if top is None else max(top, v)
        bad += not ok
    return SuiteResult(
        f"fitness n={n}", bad == 0, checked, bad, {"optimum": str(opt), "max": str(top), "hits": hits}
    )


def run_suites(max_n: int = 4) -> list[SuiteResult]:
    if not 1 <= max_n <= 4:
        raise ValueError("exhaustive suites support max_n in [1, 4]")
    results = []
    for n in range(1, max_n + 1):
        results.append(parseval_suite(n))
        results.append(transform_suite(n, all_tables(n)) if n <= 3 else transform_suite(n, affine_tables(n)))
        results.append(affine_suite(n))
        if n % 2 == 0:
            results.append(even_reduction_suite(n))
        else:
            results.append(odd_reduction_suite(n))
        if n >= 2:
            results.append(fitness_suite(n))
    return results


def brute_force_nonlinearity(tt: TruthTable) -> int:
    """Minimum Hamming distance to the affine functions, by enumeration."""
    return min(int(np.count_nonzero(tt.bits != g.bits)) for g in affine_tables(tt.n))
