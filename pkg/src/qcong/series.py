"""
Truncated formal power series in q over Z or Z/mZ.

A ``Series`` knows the coefficients of q^0 .. q^(N-1) and nothing beyond.
Every operation returns the tightest precision it can vouch for, so an
expansion never silently claims more terms than were actually computed.

Modular coefficients live in numpy int64 arrays whenever the modulus is small
enough for word arithmetic; the exact ring uses Python integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "CoefficientRing",
    "EXACT",
    "Mod",
    "Series",
    "SeriesError",
    "make_series",
    "zero",
    "one",
    "monomial",
    "add",
    "sub",
    "neg",
    "scale",
    "mul",
    "invert",
    "power",
    "dilate",
    "shift",
    "truncate",
    "extract_progression",
    "reduce_mod",
]

_WORD_LIMIT = 2**31
_INT64_MAX = 2**63 - 1


class SeriesError(ValueError):
    pass


@dataclass(frozen=True)
class CoefficientRing:
    """Z when ``modulus`` is None, otherwise Z/mZ with m >= 2 (m need not be prime)."""

    modulus: int | None = None

    def __post_init__(self):
        if self.modulus is not None and self.modulus < 2:
            raise SeriesError(f"modulus must be >= 2, got {self.modulus}")

    @property
    def is_exact(self) -> bool:
        return self.modulus is None

    @property
    def uses_words(self) -> bool:
        return self.modulus is not None and self.modulus < _WORD_LIMIT

    def canon(self, x: int) -> int:
        return x if self.modulus is None else x % self.modulus

    def is_unit(self, x: int) -> bool:
        if self.modulus is None:
            return x in (1, -1)
        return gcd(x, self.modulus) == 1

    def unit_inverse(self, x: int) -> int:
        if not self.is_unit(x):
            raise SeriesError(f"not invertible: constant term {x} is not a unit in {self}")
        if self.modulus is None:
            return x
        return pow(x, -1, self.modulus)

    def __str__(self):
        return "ZZ" if self.modulus is None else f"Z/{self.modulus}"


EXACT = CoefficientRing()


def Mod(m: int) -> CoefficientRing:
    return CoefficientRing(int(m))


class Series:
    """Immutable truncated power series. Build with :func:`make_series`."""

    __slots__ = ("ring", "_c")

    def __init__(self, ring: CoefficientRing, data):
        # data is trusted: canonical tuple of ints, or a read-only int64 array
        self.ring = ring
        self._c = data

    @property
    def precision(self) -> int:
        return len(self._c)

    @property
    def coeffs(self) -> list[int]:
        if isinstance(self._c, np.ndarray):
            return self._c.tolist()
        return list(self._c)

    def __len__(self):
        return len(self._c)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return self.coeffs[i]
        if i < 0 or i >= len(self._c):
            raise IndexError(f"coefficient {i} outside precision {len(self._c)}")
        return int(self._c[i])

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ring, tuple(self.coeffs)))

    def __repr__(self):
        head = self.coeffs[:10]
        tail = ", ..." if self.precision > 10 else ""
        return f"Series({self.ring}, [{', '.join(map(str, head))}{tail}], N={self.precision})"

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def nonzero_indices(self) -> list[int]:
        if isinstance(self._c, np.ndarray):
            return np.flatnonzero(self._c).tolist()
        return [i for i, x in enumerate(self._c) if x]

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return sub(self, other)

    def __neg__(self):
        return neg(self)

    def __mul__(self, other):
        if isinstance(other, int):
            return scale(self, other)
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return scale(self, other)
        return NotImplemented

    def __pow__(self, e):
        return power(self, e)


# -- construction ------------------------------------------------------------

def _pack(ring: CoefficientRing, values) -> Series:
    """Canonicalize raw integer data into a Series of ``ring``."""
    if ring.uses_words:
        if isinstance(values, np.ndarray):
            arr = np.mod(values, ring.modulus).astype(np.int64, copy=False)
        else:
            arr = np.array([v % ring.modulus for v in values], dtype=np.int64)
        arr.setflags(write=False)
        return Series(ring, arr)
    if isinstance(values, np.ndarray):
        values = values.tolist()
    if ring.modulus is None:
        return Series(ring, tuple(int(v) for v in values))
    m = ring.modulus
    return Series(ring, tuple(int(v) % m for v in values))


def make_series(ring: CoefficientRing, coeffs: Iterable[int]) -> Series:
    coeffs = list(coeffs)
    if not coeffs:
        raise SeriesError("zero precision")
    return _pack(ring, coeffs)


def zero(ring: CoefficientRing, n: int) -> Series:
    return make_series(ring, [0] * n)


def one(ring: CoefficientRing, n: int) -> Series:
    return monomial(ring, n, 0)


def monomial(ring: CoefficientRing, n: int, exponent: int, coeff: int = 1) -> Series:
    c = [0] * n
    if exponent < n:
        c[exponent] = coeff
    return make_series(ring, c)


def _check_ring(a: Series, b: Series):
    if a.ring != b.ring:
        raise SeriesError(f"ring mismatch: {a.ring} vs {b.ring}")


# -- arithmetic --------------------------------------------------------------

def add(a: Series, b: Series) -> Series:
    _check_ring(a, b)
    n = min(a.precision, b.precision)
    if a.ring.uses_words:
        return _pack(a.ring, a._c[:n] + b._c[:n])
    return _pack(a.ring, [x + y for x, y in zip(a._c[:n], b._c[:n])])


def sub(a: Series, b: Series) -> Series:
    _check_ring(a, b)
    n = min(a.precision, b.precision)
    if a.ring.uses_words:
        return _pack(a.ring, a._c[:n] - b._c[:n])
    return _pack(a.ring, [x - y for x, y in zip(a._c[:n], b._c[:n])])


def neg(a: Series) -> Series:
    if a.ring.uses_words:
        return _pack(a.ring, -a._c)
    return _pack(a.ring, [-x for x in a._c])


def scale(a: Series, c: int) -> Series:
    if a.ring.uses_words:
        return _pack(a.ring, a._c * (c % a.ring.modulus))
    return _pack(a.ring, [c * x for x in a._c])


def _word_dot_safe(m: int, terms: int) -> bool:
    return (m - 1) ** 2 * max(terms, 1) <= _INT64_MAX


def _mul_ints(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    # Cauchy product truncated to n terms; loops over the sparser operand
    nza = [(i, x) for i, x in enumerate(a[:n]) if x]
    nzb = [(i, x) for i, x in enumerate(b[:n]) if x]
    if len(nzb) < len(nza):
        nza, b = nzb, a
    out = [0] * n
    for i, x in nza:
        row = b[: n - i]
        for j, y in enumerate(row):
            if y:
                out[i + j] += x * y
    return out


def mul(a: Series, b: Series) -> Series:
    _check_ring(a, b)
    n = min(a.precision, b.precision)
    ring = a.ring
    if ring.uses_words and _word_dot_safe(ring.modulus, n):
        prod = np.convolve(a._c[:n], b._c[:n])[:n]
        return _pack(ring, prod)
    return _pack(ring, _mul_ints(a.coeffs, b.coeffs, n))


def invert(a: Series) -> Series:
    """Multiplicative inverse by the recurrence b_n = -a_0^{-1} sum_{i>=1} a_i b_{n-i}."""
    ring = a.ring
    a0 = a[0]
    inv0 = ring.unit_inverse(a0)
    n = a.precision
    idx = [i for i in a.nonzero_indices() if i > 0]
    if ring.uses_words and _word_dot_safe(ring.modulus, len(idx)):
        m = ring.modulus
        idx_arr = np.array(idx, dtype=np.int64)
        vals = a._c[idx_arr] if idx else np.zeros(0, dtype=np.int64)
        b = np.zeros(n, dtype=np.int64)
        b[0] = inv0
        factor = (-inv0) % m
        for k in range(1, n):
            cnt = int(np.searchsorted(idx_arr, k, side="right"))
            if cnt:
                s = int(vals[:cnt] @ b[k - idx_arr[:cnt]])
                b[k] = (factor * (s % m)) % m
        return _pack(ring, b)
    c = a.coeffs
    terms = [(i, c[i]) for i in idx]
    b = [0] * n
    b[0] = inv0
    for k in range(1, n):
        s = 0
        for i, x in terms:
            if i > k:
                break
            s += x * b[k - i]
        b[k] = ring.canon(-inv0 * s)
    return _pack(ring, b)


def power(a: Series, e: int) -> Series:
    """a**e by binary exponentiation; negative e inverts first, then raises."""
    if e < 0:
        return power(invert(a), -e)
    result = one(a.ring, a.precision)
    base = a
    first = True
    while e:
        if e & 1:
            result = base if first else mul(result, base)
            first = False
        e >>= 1
        if e:
            base = mul(base, base)
    return result


def dilate(a: Series, t: int) -> Series:
    """Substitute q -> q^t. Precision becomes (N - 1) * t + 1."""
    if t < 1:
        raise SeriesError(f"dilation factor must be >= 1, got {t}")
    if t == 1:
        return a
    n = (a.precision - 1) * t + 1
    if a.ring.uses_words:
        out = np.zeros(n, dtype=np.int64)
        out[::t] = a._c
        return _pack(a.ring, out)
    out = [0] * n
    out[::t] = a.coeffs
    return _pack(a.ring, out)


def shift(a: Series, t: int) -> Series:
    """Multiply by q^t. Precision grows by t."""
    if t < 0:
        raise SeriesError(f"shift must be >= 0, got {t}")
    if t == 0:
        return a
    if a.ring.uses_words:
        return _pack(a.ring, np.concatenate([np.zeros(t, dtype=np.int64), a._c]))
    return _pack(a.ring, [0] * t + a.coeffs)


def truncate(a: Series, n: int) -> Series:
    if n < 1:
        raise SeriesError("zero precision")
    if n >= a.precision:
        return a
    return Series(a.ring, a._c[:n])


def extract_progression(a: Series, A: int, B: int) -> Series:
    """Series whose n-th coefficient is the (A*n + B)-th coefficient of ``a``."""
    if A < 1:
        raise SeriesError(f"progression step must be >= 1, got {A}")
    if B < 0 or B >= a.precision:
        raise SeriesError(f"empty extraction: offset {B} with precision {a.precision}")
    return Series(a.ring, a._c[B::A])


def reduce_mod(a: Series, m: int) -> Series:
    if m < 2:
        raise SeriesError(f"modulus must be >= 2, got {m}")
    if not a.ring.is_exact:
        raise SeriesError(f"reduce_mod expects an exact series, got {a.ring}")
    return _pack(Mod(m), a.coeffs)
