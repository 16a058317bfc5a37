"""
Congruence claims of the form

    a_{c*j + k0}(A*n + B) == 0  (mod M)   for all j, n >= 0,

with finite verification, a catalog of the known families, and a grid scanner
for new ones. Everything here is a check to a stated bound, never a proof.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from functools import lru_cache

from .eta import f_ell, eta_quotient
from .partitions import a_spec
from .series import Mod, Series, extract_progression, power

__all__ = [
    "CongruenceClaim",
    "Witness",
    "VerificationResult",
    "ScanConfig",
    "ScanEntry",
    "ScanReport",
    "ScanCeilingError",
    "a_series_mod",
    "verify_claim",
    "builtin_catalog",
    "select_catalog",
    "verify_catalog",
    "catalog_lists",
    "scan",
    "verify_frobenius_congruence",
    "default_workers",
]

FIXED = "fixed"
TWO_POWER = "two_power"

DEFAULT_SCAN_CEILING = 10**8


def default_workers() -> int:
    env = os.environ.get("QCONG_THREADS")
    if env:
        return max(1, int(env))
    return min(4, os.cpu_count() or 1)


def _pmap(fn, items, workers=None):
    items = list(items)
    workers = default_workers() if workers is None else workers
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _is_power_of_two(x):
    return x >= 1 and x & (x - 1) == 0


@dataclass(frozen=True)
class CongruenceClaim:
    k0: int
    A: int
    B: int
    M: int
    c: int = 0
    modulus_family: str = FIXED

    def __post_init__(self):
        if self.k0 < 1 or self.c < 0:
            raise ValueError(f"bad color family c={self.c}, k0={self.k0}")
        if self.A < 1 or self.B < 0:
            raise ValueError(f"bad progression ({self.A}, {self.B})")
        if self.modulus_family == TWO_POWER:
            # M = 2^r is tied to k = 2^r, so the family is a single k
            if self.c != 0 or not _is_power_of_two(self.k0) or self.M != self.k0:
                raise ValueError("two_power claims need c = 0 and M = k0 = 2^r")
        elif self.modulus_family != FIXED:
            raise ValueError(f"unknown modulus family {self.modulus_family!r}")
        elif self.M < 2:
            raise ValueError(f"modulus must be >= 2, got {self.M}")

    def k_for(self, j: int) -> int:
        return self.c * j + self.k0

    def js(self, j_max: int) -> range:
        return range(1) if self.c == 0 else range(j_max + 1)

    def covers(self, k: int) -> bool:
        if self.c == 0:
            return k == self.k0
        return k >= self.k0 and (k - self.k0) % self.c == 0

    def describe(self) -> str:
        kk = str(self.k0) if self.c == 0 else f"{self.c}j+{self.k0}"
        return f"a_{{{kk}}}({self.A}n+{self.B}) == 0 (mod {self.M})"

    def to_json(self) -> dict:
        out = {"k": {"c": self.c, "k0": self.k0}, "A": self.A, "B": self.B, "M": self.M}
        if self.modulus_family != FIXED:
            out["modulus_family"] = self.modulus_family
        return out

    @classmethod
    def from_json(cls, d: dict) -> "CongruenceClaim":
        k = d["k"]
        if isinstance(k, int):
            k = {"c": 0, "k0": k}
        return cls(
            k0=int(k["k0"]),
            c=int(k.get("c", 0)),
            A=int(d["A"]),
            B=int(d["B"]),
            M=int(d["M"]),
            modulus_family=d.get("modulus_family", FIXED),
        )


@dataclass(frozen=True)
class Witness:
    j: int
    k: int
    n: int
    residue: int


@dataclass(frozen=True)
class VerificationResult:
    claim: CongruenceClaim
    status: str  # "verified" | "counterexample"
    checked_n_up_to: int
    checked_j_up_to: int
    witness: Witness | None = None

    @property
    def verified(self) -> bool:
        return self.status == "verified"

    def to_json(self) -> dict:
        return {
            "claim": self.claim.to_json(),
            "status": self.status,
            "checked_n_up_to": self.checked_n_up_to,
            "checked_j_up_to": self.checked_j_up_to,
            "witness": None if self.witness is None else asdict(self.witness),
        }

    @classmethod
    def from_json(cls, d: dict) -> "VerificationResult":
        w = d.get("witness")
        return cls(
            claim=CongruenceClaim.from_json(d["claim"]),
            status=d["status"],
            checked_n_up_to=int(d["checked_n_up_to"]),
            checked_j_up_to=int(d["checked_j_up_to"]),
            witness=None if w is None else Witness(**w),
        )


@lru_cache(maxsize=128)
def a_series_mod(k: int, M: int, n: int) -> Series:
    """a_k(0..n-1) reduced mod M."""
    return eta_quotient(a_spec(k), Mod(M), n)


def _first_nonzero(s: Series):
    nz = s.nonzero_indices()
    if not nz:
        return None
    return nz[0], s[nz[0]]


def verify_claim(claim: CongruenceClaim, n: int = 2000, j_max: int = 3) -> VerificationResult:
    """Check every coefficient a_k(A*m + B) with A*m + B < n, for each j <= j_max."""
    if n <= claim.B:
        raise ValueError(f"precision {n} does not reach offset B = {claim.B}")
    if j_max < 0:
        raise ValueError("j_max must be >= 0")
    js = claim.js(j_max)
    checked_n = (n - 1 - claim.B) // claim.A
    checked_j = js[-1]
    if claim.M == 1:
        # 2^0: every integer is 0 mod 1
        return VerificationResult(claim, "verified", checked_n, checked_j)
    for j in js:
        k = claim.k_for(j)
        sub = extract_progression(a_series_mod(k, claim.M, n), claim.A, claim.B)
        hit = _first_nonzero(sub)
        if hit is not None:
            idx, residue = hit
            return VerificationResult(
                claim, "counterexample", checked_n, checked_j, Witness(j, k, idx, residue)
            )
    return VerificationResult(claim, "verified", checked_n, checked_j)


# -- the catalog ---------------------------------------------------------------

def _mod3_offset(alpha: int) -> tuple[int, int]:
    # 153 * 3^{2 alpha} - 1 is divisible by 8 for every alpha
    return 3 ** (2 * alpha + 2), (153 * 9**alpha - 1) // 8


def builtin_catalog() -> list[tuple[str, CongruenceClaim]]:
    cat: list[tuple[str, CongruenceClaim]] = []

    def add(name, **kw):
        cat.append((name, CongruenceClaim(**kw)))

    for k0, b in [(1, 5), (3, 2), (4, 4), (5, 6), (7, 3)]:
        add(f"T1:a_{{7j+{k0}}}(7n+{b}) mod 7", c=7, k0=k0, A=7, B=b, M=7)

    add("T2:a_5(5n+3) mod 5", k0=5, A=5, B=3, M=5)

    for alpha in (0, 1):
        A, B = _mod3_offset(alpha)
        add(f"T3[alpha={alpha}]:a_5({A}n+{B}) mod 3", k0=5, A=A, B=B, M=3)

    add("T4:a_{5j+5}(5n+3) mod 5", c=5, k0=5, A=5, B=3, M=5)

    for r in range(0, 7):
        k = 2**r
        add(f"T5[r={r}]:a_{k}(2n+1) mod {k}", k0=k, A=2, B=1, M=k, modulus_family=TWO_POWER)

    for r in range(1, 9):
        add(f"T6[r={r}]:a_{2 * r}(2n+1) mod 2", k0=2 * r, A=2, B=1, M=2)

    for p, b in [(5, 3), (7, 3), (11, 3), (13, 3), (17, 3), (5, 4), (7, 4), (7, 6), (11, 6), (13, 6)]:
        add(f"T7:a_3({p}n+{b}) mod 2", k0=3, A=p, B=b, M=2)

    for p in (7, 11, 13, 17, 19):
        add(f"T8.1:a_5({p}n+3) mod 2", k0=5, A=p, B=3, M=2)
    add("T8.2:a_5(3n+2) mod 2", k0=5, A=3, B=2, M=2)
    add("T8.3:a_5(6n+5) mod 2", k0=5, A=6, B=5, M=2)
    add("T8.4:a_11(9n+6) mod 2", k0=11, A=9, B=6, M=2)

    for k0, b in [(1, 6), (4, 10), (6, 9), (8, 8), (11, 1)]:
        add(f"T9:a_{{11j+{k0}}}(11n+{b}) mod 11", c=11, k0=k0, A=11, B=b, M=11)

    for k, p, b in [(3, 13, 3), (3, 17, 3), (3, 13, 6), (5, 13, 3), (5, 17, 3), (5, 19, 3)]:
        add(f"S5:a_{k}({p}n+{b}) mod 2", k0=k, A=p, B=b, M=2)

    return cat


def select_catalog(selector: str = "all") -> list[tuple[str, CongruenceClaim]]:
    """``all``, or a comma list of name prefixes such as ``T1,T9,S5``."""
    cat = builtin_catalog()
    if selector in ("", "all"):
        return cat
    prefixes = [s.strip() for s in selector.split(",") if s.strip()]
    chosen = [(name, c) for name, c in cat if any(name.startswith(p) for p in prefixes)]
    if not chosen:
        raise KeyError(f"no catalog entry matches {selector!r}")
    return chosen


def verify_catalog(n: int = 2000, j_max: int = 3, selector: str = "all", workers=None):
    entries = select_catalog(selector)
    results = _pmap(lambda e: verify_claim(e[1], n, j_max), entries, workers)
    return [(name, r) for (name, _), r in zip(entries, results)]


def catalog_lists(k: int, M: int, A: int, B: int) -> list[str]:
    """Names of catalog claims asserting exactly a_k(A n + B) == 0 (mod M)."""
    return [
        name
        for name, c in builtin_catalog()
        if c.A == A and c.B == B and c.M == M and c.covers(k)
    ]


# -- scanning ------------------------------------------------------------------

class ScanCeilingError(RuntimeError):
    def __init__(self, cost: int, ceiling: int):
        super().__init__(
            f"scan grid too large: {cost:,} coefficient checks exceeds ceiling {ceiling:,}"
        )
        self.cost = cost
        self.ceiling = ceiling


@dataclass(frozen=True)
class ScanConfig:
    k_values: tuple[int, ...]
    moduli: tuple[int, ...]
    A_values: tuple[int, ...]
    n: int = 2000
    B_values: tuple[int, ...] | None = None  # None: every 0 <= B < A
    survivors_only: bool = False
    ceiling: int = DEFAULT_SCAN_CEILING

    def offsets(self, A: int) -> list[int]:
        if self.B_values is None:
            return list(range(A))
        return [b for b in self.B_values if 0 <= b < A]

    def grid(self):
        for M in self.moduli:
            for k in self.k_values:
                for A in self.A_values:
                    for B in self.offsets(A):
                        yield k, M, A, B

    def grid_size(self) -> int:
        return len(self.k_values) * len(self.moduli) * sum(len(self.offsets(A)) for A in self.A_values)

    def cost(self) -> int:
        return self.grid_size() * self.n

    def to_json(self) -> dict:
        return {
            "k": list(self.k_values),
            "moduli": list(self.moduli),
            "A": list(self.A_values),
            "B": None if self.B_values is None else list(self.B_values),
            "N": self.n,
            "survivors_only": self.survivors_only,
            "ceiling": self.ceiling,
        }

    @classmethod
    def from_json(cls, d: dict) -> "ScanConfig":
        def ints(v):
            if isinstance(v, dict):
                return tuple(range(int(v["min"]), int(v["max"]) + 1))
            if isinstance(v, int):
                return (v,)
            return tuple(int(x) for x in v)

        B = d.get("B")
        return cls(
            k_values=ints(d["k"]),
            moduli=ints(d.get("moduli", d.get("M"))),
            A_values=ints(d["A"]),
            n=int(d.get("N", 2000)),
            B_values=None if B is None else ints(B),
            survivors_only=bool(d.get("survivors_only", False)),
            ceiling=int(d.get("ceiling", DEFAULT_SCAN_CEILING)),
        )


@dataclass(frozen=True)
class ScanEntry:
    k: int
    M: int
    A: int
    B: int
    status: str
    checked_n_up_to: int
    witness: dict | None = None
    listed_as: tuple[str, ...] = ()

    @property
    def survived(self) -> bool:
        return self.status == "verified"

    @property
    def listed(self) -> bool:
        return bool(self.listed_as)

    def to_json(self) -> dict:
        d = {
            "k": self.k,
            "M": self.M,
            "A": self.A,
            "B": self.B,
            "status": self.status,
            "checked_n_up_to": self.checked_n_up_to,
            "witness": self.witness,
        }
        if self.survived:
            d["listed"] = "listed" if self.listed else "unlisted"
            d["listed_as"] = list(self.listed_as)
        return d

    @classmethod
    def from_json(cls, d: dict) -> "ScanEntry":
        return cls(
            k=d["k"], M=d["M"], A=d["A"], B=d["B"],
            status=d["status"],
            checked_n_up_to=d["checked_n_up_to"],
            witness=d.get("witness"),
            listed_as=tuple(d.get("listed_as", ())),
        )


@dataclass
class ScanReport:
    config: ScanConfig
    entries: list[ScanEntry]
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    @property
    def survivors(self) -> list[ScanEntry]:
        return sorted(
            (e for e in self.entries if e.survived), key=lambda e: (e.M, e.k, e.A, e.B)
        )

    def to_json(self) -> dict:
        shown = self.survivors if self.config.survivors_only else self.entries
        return {
            "config": self.config.to_json(),
            "timestamp": self.timestamp,
            "checked_n_up_to_note": "survivors are verified to the stated bound, not proved",
            "survivors": [e.to_json() for e in self.survivors],
            "results": [e.to_json() for e in shown],
        }

    @classmethod
    def from_json(cls, d: dict) -> "ScanReport":
        return cls(
            config=ScanConfig.from_json(d["config"]),
            entries=[ScanEntry.from_json(e) for e in d["results"]],
            timestamp=d["timestamp"],
        )


def scan(config: ScanConfig, workers=None) -> ScanReport:
    if config.grid_size() == 0:
        raise ValueError("empty scan grid")
    if config.cost() > config.ceiling:
        raise ScanCeilingError(config.cost(), config.ceiling)
    if any(M < 2 for M in config.moduli):
        raise ValueError("scan moduli must be >= 2")
    if any(k < 1 for k in config.k_values):
        raise ValueError("scan k values must be >= 1")
    if max(config.A_values) > config.n:
        raise ValueError(f"precision {config.n} is shorter than progression step {max(config.A_values)}")

    pairs = [(k, M) for M in config.moduli for k in config.k_values]
    series = dict(zip(pairs, _pmap(lambda km: a_series_mod(km[0], km[1], config.n), pairs, workers)))

    entries = []
    for k, M, A, B in config.grid():
        sub = extract_progression(series[(k, M)], A, B)
        hit = _first_nonzero(sub)
        checked = sub.precision - 1
        if hit is None:
            entries.append(ScanEntry(k, M, A, B, "verified", checked, None, tuple(catalog_lists(k, M, A, B))))
        else:
            entries.append(
                ScanEntry(k, M, A, B, "counterexample", checked, {"j": 0, "k": k, "n": hit[0], "residue": hit[1]})
            )
    return ScanReport(config, entries)


# -- binomial (Frobenius) congruence ------------------------------------------

def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def verify_frobenius_congruence(m: int, p: int, kexp: int, n: int = 500):
    """Check f_m^{p^k} == f_{mp}^{p^{k-1}} (mod p^k) to n terms.

    Returns ``(holds, first_mismatch_index)``.
    """
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if m < 1 or kexp < 1:
        raise ValueError("need m >= 1 and k >= 1")
    ring = Mod(p**kexp)
    lhs = power(f_ell(m, ring, n), p**kexp)
    rhs = power(f_ell(m * p, ring, n), p ** (kexp - 1))
    for i, (x, y) in enumerate(zip(lhs.coeffs, rhs.coeffs)):
        if x != y:
            return False, i
    return True, None
