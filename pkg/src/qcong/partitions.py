"""
Partition tables by three independent routes.

* series: coefficients of the eta quotient f_2^{k-1} / f_1^k
* recurrence: a_k(n) = p(n) + sum_{v>=1} D_{k-1}(v) p(n - v), where D_j counts
  j-colored partitions into distinct parts (generating function (f_2/f_1)^j)
* brute force: direct count of multisets of colored parts

The three never share code, so agreement between them is a real check.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

from .eta import EtaQuotientSpec, eta_quotient
from .series import EXACT, CoefficientRing

__all__ = [
    "PartitionTable",
    "OracleBoundError",
    "BRUTEFORCE_LIMIT",
    "p_table",
    "a_table_series",
    "distinct_colored_table",
    "a_table_recurrence",
    "a_bruteforce",
    "a_spec",
]

BRUTEFORCE_LIMIT = 40


class OracleBoundError(ValueError):
    pass


@dataclass(frozen=True)
class PartitionTable:
    kind: str  # "p", "a_k" or "distinct_colored"
    param: int | None
    values: tuple[int, ...]
    ring: CoefficientRing = EXACT

    def __getitem__(self, n):
        return self.values[n]

    def __len__(self):
        return len(self.values)

    def rows(self):
        return list(enumerate(self.values))


def p_table(n: int) -> PartitionTable:
    """p(0), ..., p(n-1) by Euler's pentagonal recurrence."""
    if n < 1:
        raise ValueError("need at least one term")
    p = [0] * n
    p[0] = 1
    for m in range(1, n):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > m:
                break
            term = p[m - g1]
            g2 = g1 + k
            if g2 <= m:
                term += p[m - g2]
            total += term if k % 2 else -term
            k += 1
        p[m] = total
    return PartitionTable("p", None, tuple(p))


def a_spec(k: int) -> EtaQuotientSpec:
    return EtaQuotientSpec(((2, k - 1), (1, -k)))


def a_table_series(k: int, ring: CoefficientRing = EXACT, n: int = 100) -> PartitionTable:
    if k < 1:
        raise ValueError(f"a_k needs k >= 1, got {k}")
    s = eta_quotient(a_spec(k), ring, n)
    return PartitionTable("a_k", k, tuple(s.coeffs), ring)


def distinct_colored_table(j: int, ring: CoefficientRing = EXACT, n: int = 100) -> PartitionTable:
    """Coefficients of (f_2/f_1)^j: j-colored partitions into distinct parts."""
    if j < 0:
        raise ValueError(f"color count must be >= 0, got {j}")
    s = eta_quotient(EtaQuotientSpec(((2, j), (1, -j))), ring, n)
    return PartitionTable("distinct_colored", j, tuple(s.coeffs), ring)


def a_table_recurrence(k: int, n: int = 100) -> PartitionTable:
    if k < 1:
        raise ValueError(f"a_k needs k >= 1, got {k}")
    p = p_table(n).values
    d = distinct_colored_table(k - 1, EXACT, n).values
    out = []
    for m in range(n):
        out.append(p[m] + sum(d[v] * p[m - v] for v in range(1, m + 1)))
    return PartitionTable("a_k", k, tuple(out))


def a_bruteforce(k: int, n: int) -> int:
    """Count partitions of n whose odd parts carry one of k colors.

    Parts are chosen in decreasing order; m copies of an odd part can be
    colored in C(m + k - 1, k - 1) ways (a multiset of m colors).
    """
    if k < 1:
        raise ValueError(f"a_k needs k >= 1, got {k}")
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > BRUTEFORCE_LIMIT:
        raise OracleBoundError(f"oracle bound exceeded: n = {n} > {BRUTEFORCE_LIMIT}")

    @lru_cache(maxsize=None)
    def count(remaining, largest):
        if remaining == 0:
            return 1
        total = 0
        for part in range(min(largest, remaining), 0, -1):
            for copies in range(1, remaining // part + 1):
                ways = 1 if part % 2 == 0 else comb(copies + k - 1, k - 1)
                total += ways * count(remaining - copies * part, part - 1)
        return total

    return count(n, n)
