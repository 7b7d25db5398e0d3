"""Truth tables, Walsh-Hadamard and nega-Hadamard spectra, and the
bent / negabent predicates built on them.

Index convention: the output for x = (x1, ..., xn) lives at
idx(x) = sum(x_j * 2**(j-1)), so x1 is the least significant index bit.
All sigma constructions and the odd-n extension use this convention; the
extension variable y becomes the new most significant bit.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from numba import njit

MIN_VARS = 1
MAX_VARS = 20


# --------------------------------------------------------------------------
# numba kernels
# --------------------------------------------------------------------------

@njit(cache=True)
def _butterfly(a):
    """In-place natural-order Walsh-Hadamard butterfly on an int64 array."""
    size = a.shape[0]
    h = 1
    while h < size:
        for i in range(0, size, 2 * h):
            for j in range(i, i + h):
                x = a[j]
                y = a[j + h]
                a[j] = x + y
                a[j + h] = x - y
        h *= 2


@njit(cache=True)
def _signed(bits):
    out = np.empty(bits.shape[0], np.int64)
    for k in range(bits.shape[0]):
        out[k] = 1 - 2 * np.int64(bits[k])
    return out


@njit(cache=True)
def _peak(a):
    top = 0
    count = 0
    for k in range(a.shape[0]):
        v = abs(a[k])
        if v > top:
            top = v
            count = 1
        elif v == top:
            count += 1
    return top, count


@njit(cache=True)
def _wht_bits(bits):
    a = _signed(bits)
    _butterfly(a)
    return a


@njit(cache=True)
def _peak_of(bits):
    a = _signed(bits)
    _butterfly(a)
    return _peak(a)


@njit(cache=True)
def _peak_pair(bits, mask):
    """Spectral peaks of f and of f xor mask, fused to one kernel call."""
    size = bits.shape[0]
    a = np.empty(size, np.int64)
    b = np.empty(size, np.int64)
    for k in range(size):
        a[k] = 1 - 2 * np.int64(bits[k])
        b[k] = 1 - 2 * np.int64(bits[k] ^ mask[k])
    _butterfly(a)
    _butterfly(b)
    m1, c1 = _peak(a)
    m2, c2 = _peak(b)
    return m1, c1, m2, c2


@njit(cache=True)
def _peak_extended(bits, ext):
    """Spectral peak of F(x, y) = f(x) xor ext(x, y), y the top index bit."""
    half = bits.shape[0]
    a = np.empty(2 * half, np.int64)
    for k in range(2 * half):
        a[k] = 1 - 2 * np.int64(bits[k & (half - 1)] ^ ext[k])
    _butterfly(a)
    return _peak(a)


@njit(cache=True)
def _nega_components(bits):
    # i**wt(x) cycles through 1, i, -1, -i
    size = bits.shape[0]
    re = np.zeros(size, np.int64)
    im = np.zeros(size, np.int64)
    for x in range(size):
        w = 0
        v = x
        while v:
            w += v & 1
            v >>= 1
        s = 1 - 2 * np.int64(bits[x])
        r = w & 3
        if r == 0:
            re[x] = s
        elif r == 1:
            im[x] = s
        elif r == 2:
            re[x] = -s
        else:
            im[x] = -s
    _butterfly(re)
    _butterfly(im)
    return re, im


# --------------------------------------------------------------------------
# types
# --------------------------------------------------------------------------

def _check_n(n: int) -> None:
    if not MIN_VARS <= n <= MAX_VARS:
        raise ValueError(f"variable count must be in [{MIN_VARS}, {MAX_VARS}], got {n}")


def int_to_bits(value: int, n: int) -> np.ndarray:
    """Unpack a 2**n-bit integer (bit k = f(k)) into a uint8 array."""
    size = 1 << n
    raw = value.to_bytes(max(1, size >> 3), "little")
    return np.unpackbits(np.frombuffer(raw, np.uint8), bitorder="little")[:size]


def bits_to_int(bits: np.ndarray) -> int:
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


class TruthTable:
    """A Boolean function of ``n`` variables stored as its 2**n outputs."""

    __slots__ = ("n", "bits")

    def __init__(self, n: int, bits: Iterable[int] | np.ndarray):
        _check_n(n)
        arr = np.array(bits, dtype=np.uint8).reshape(-1)
        if arr.size != 1 << n:
            raise ValueError(f"expected {1 << n} outputs for n={n}, got {arr.size}")
        if arr.size and arr.max() > 1:
            raise ValueError("truth table entries must be 0 or 1")
        arr.flags.writeable = False
        self.n = n
        self.bits = arr

    @classmethod
    def from_int(cls, n: int, value: int) -> "TruthTable":
        return cls(n, int_to_bits(value, n))

    @classmethod
    def from_hex(cls, text: str) -> "TruthTable":
        """Parse the hex format: f(0) f(1) ... read as a big-endian number."""
        digits = text.strip().lower()
        if digits.startswith("0x"):
            digits = digits[2:]
        if not digits or any(c not in "0123456789abcdef" for c in digits):
            raise ValueError(f"malformed hex truth table: {text!r}")
        length = 4 * len(digits)
        n = length.bit_length() - 1
        if 1 << n != length or n < 2:
            raise ValueError(f"hex length {len(digits)} is not 2**(n-2) for any n >= 2")
        return cls(n, [int(c) for c in format(int(digits, 16), f"0{length}b")])

    @classmethod
    def from_function(cls, n: int, func) -> "TruthTable":
        """Tabulate ``func(x)`` where x is the tuple (x1, ..., xn)."""
        return cls(n, [func(tuple((k >> j) & 1 for j in range(n))) & 1 for k in range(1 << n)])

    def to_int(self) -> int:
        return bits_to_int(self.bits)

    def to_hex(self) -> str:
        if self.n < 2:
            raise ValueError("hex format requires n >= 2")
        value = int("".join("1" if b else "0" for b in self.bits), 2)
        return format(value, f"0{1 << (self.n - 2)}x")

    def __call__(self, x: Sequence[int]) -> int:
        return int(self.bits[index_of(x)])

    def __len__(self) -> int:
        return self.bits.size

    def __xor__(self, other: "TruthTable") -> "TruthTable":
        return xor_tables(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruthTable):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.bits, other.bits)

    def __hash__(self) -> int:
        return hash((self.n, self.bits.tobytes()))

    def __repr__(self) -> str:
        return f"TruthTable(n={self.n}, bits={self.bits.tolist() if self.n <= 5 else '...'})"


def index_of(x: Sequence[int]) -> int:
    """idx(x) with x1 as the least significant bit."""
    return sum((b & 1) << j for j, b in enumerate(x))


@dataclass(frozen=True, eq=False)
class WalshSpectrum:
    n: int
    values: np.ndarray


class GaussianInt(NamedTuple):
    re: int
    im: int

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def __complex__(self) -> complex:
        return complex(self.re, self.im)


@dataclass(frozen=True, eq=False)
class NegaSpectrum:
    """Exact nega-Hadamard spectrum, held as parallel real/imaginary arrays."""

    n: int
    re: np.ndarray
    im: np.ndarray

    @property
    def values(self) -> list[GaussianInt]:
        return [GaussianInt(int(r), int(i)) for r, i in zip(self.re, self.im)]

    def squared_norms(self) -> np.ndarray:
        return self.re * self.re + self.im * self.im


# --------------------------------------------------------------------------
# transforms and spectral measures
# --------------------------------------------------------------------------

def wht(tt: TruthTable) -> WalshSpectrum:
    return WalshSpectrum(tt.n, _wht_bits(tt.bits))


def nega_transform(tt: TruthTable) -> NegaSpectrum:
    """Nega-Hadamard transform as the WHT of (-1)**f(x) * i**wt(x)."""
    re, im = _nega_components(tt.bits)
    return NegaSpectrum(tt.n, re, im)


def nonlinearity(ws: WalshSpectrum) -> int:
    return (1 << (ws.n - 1)) - int(np.abs(ws.values).max()) // 2


def max_abs_count(ws: WalshSpectrum) -> tuple[int, int]:
    top, count = _peak(ws.values)
    return int(top), int(count)


def covering_bound(n: int) -> int:
    """2**(n-1) - 2**(n/2 - 1), the bent nonlinearity for even n."""
    if n < 2 or n % 2:
        raise ValueError(f"covering bound is only attained for even n >= 2, got {n}")
    return (1 << (n - 1)) - (1 << (n // 2 - 1))


def is_bent(tt: TruthTable) -> bool:
    if tt.n % 2:
        return False
    top, _ = _peak_of(tt.bits)
    return int(top) == 1 << (tt.n // 2)


def is_negabent_direct(tt: TruthTable) -> bool:
    """Flatness of the nega-Hadamard spectrum, checked on exact squared norms."""
    return bool(np.all(nega_transform(tt).squared_norms() == 1 << tt.n))


# --------------------------------------------------------------------------
# symmetric functions and reductions
# --------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _weights(n: int) -> np.ndarray:
    w = np.zeros(1 << n, dtype=np.int64)
    for j in range(n):
        w += (np.arange(1 << n) >> j) & 1
    w.flags.writeable = False
    return w


@lru_cache(maxsize=None)
def sigma1(n: int) -> TruthTable:
    """Parity x1 xor ... xor xn."""
    _check_n(n)
    return TruthTable(n, _weights(n) & 1)


@lru_cache(maxsize=None)
def sigma2(n: int) -> TruthTable:
    """XOR of all pairwise products x_i x_j, i.e. C(wt(x), 2) mod 2."""
    _check_n(n)
    w = _weights(n)
    return TruthTable(n, (w * (w - 1) // 2) & 1)


@lru_cache(maxsize=None)
def extension_mask(n: int) -> np.ndarray:
    """sigma2(x) xor sigma1(x)*y over n+1 variables (y on top)."""
    s2 = sigma2(n).bits
    mask = np.concatenate([s2, s2 ^ sigma1(n).bits])
    mask.flags.writeable = False
    return mask


def xor_tables(a: TruthTable, b: TruthTable) -> TruthTable:
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: {a.n} vs {b.n}")
    return TruthTable(a.n, a.bits ^ b.bits)


def extend_odd(tt: TruthTable) -> TruthTable:
    """F(x, y) = f(x) xor sigma2(x) xor sigma1(x)*y in n+1 variables."""
    if tt.n % 2 == 0:
        raise ValueError(f"extend_odd needs odd n, got {tt.n}")
    return TruthTable(tt.n + 1, np.tile(tt.bits, 2) ^ extension_mask(tt.n))


def is_negabent_reduced(tt: TruthTable) -> bool:
    if tt.n % 2 == 0:
        return is_bent(tt ^ sigma2(tt.n))
    return is_bent(extend_odd(tt))


def is_bent_negabent(tt: TruthTable) -> bool:
    if tt.n % 2:
        raise ValueError(f"bent-negabent is defined for even n only, got {tt.n}")
    return is_bent(tt) and is_negabent_reduced(tt)


def anf(tt: TruthTable) -> np.ndarray:
    """ANF coefficients via the binary Moebius transform."""
    a = tt.bits.astype(np.uint8)
    for j in range(tt.n):
        view = a.reshape(-1, 2, 1 << j)
        view[:, 1, :] ^= view[:, 0, :]
    return a


def anf_degree(tt: TruthTable) -> int:
    coeffs = anf(tt)
    nz = np.flatnonzero(coeffs)
    if nz.size == 0:
        return 0
    return int(_weights(tt.n)[nz].max())
