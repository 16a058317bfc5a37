"""
Named q-products: f_l = (q^l; q^l)_inf, eta quotients prod f_l^e, generalized
Pochhammer quotients prod (q^a; q^b)_inf^{+-1}, and the sum sides of the
pentagonal, cubic (Jacobi) and triple-product identities.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .series import (
    EXACT,
    CoefficientRing,
    Series,
    _pack,
    dilate,
    invert,
    make_series,
    mul,
    one,
    power,
    truncate,
)

__all__ = [
    "EtaQuotientSpec",
    "PochhammerProductSpec",
    "ParseError",
    "f_ell",
    "partition_series",
    "eta_quotient",
    "pochhammer_product",
    "rogers_ramanujan_a",
    "jacobi_cube_sum",
    "theta_sum",
    "theta_product",
    "theta_triple_product_check",
    "parse_eta",
    "parse_pochhammer",
    "parse_product",
]


@dataclass(frozen=True)
class EtaQuotientSpec:
    """prod f_l^e over (scale, exponent) pairs, normalized on construction."""

    factors: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        merged: dict[int, int] = {}
        for scale, e in self.factors:
            scale, e = int(scale), int(e)
            if scale < 1:
                raise ValueError(f"eta scale must be positive, got {scale}")
            merged[scale] = merged.get(scale, 0) + e
        norm = tuple(sorted((s, e) for s, e in merged.items() if e))
        object.__setattr__(self, "factors", norm)

    @classmethod
    def of(cls, *pairs):
        return cls(tuple(pairs))

    def __str__(self):
        if not self.factors:
            return "1"
        return " * ".join(f"{s}^{e}" for s, e in self.factors)


@dataclass(frozen=True)
class PochhammerProductSpec:
    """prod_a (q^a; q^b)_inf over numerator residues / denominator residues."""

    modulus: int
    numerator: tuple[int, ...] = ()
    denominator: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError(f"Pochhammer modulus must be positive, got {self.modulus}")
        for a in self.numerator + self.denominator:
            if a < 1:
                raise ValueError(f"Pochhammer residue must be >= 1, got {a}")
        object.__setattr__(self, "numerator", tuple(int(a) for a in self.numerator))
        object.__setattr__(self, "denominator", tuple(int(a) for a in self.denominator))

    def __str__(self):
        def side(res):
            return f"[{','.join(map(str, res))};{self.modulus}]" if res else "1"
        if not self.denominator:
            return side(self.numerator)
        return f"{side(self.numerator)}/{side(self.denominator)}"


# -- building blocks ---------------------------------------------------------

def _pentagonal_exponents(limit: int):
    """Yield (exponent, sign) of f_1 = sum (-1)^k q^{k(3k-1)/2}, exponent < limit."""
    yield 0, 1
    k = 1
    while True:
        e1 = k * (3 * k - 1) // 2
        if e1 >= limit:
            break
        sign = -1 if k % 2 else 1
        yield e1, sign
        e2 = e1 + k  # k(3k+1)/2, the k -> -k partner
        if e2 < limit:
            yield e2, sign
        k += 1


@lru_cache(maxsize=256)
def f_ell(ell: int, ring: CoefficientRing = EXACT, n: int = 100) -> Series:
    """(q^ell; q^ell)_inf to n terms, read off the pentagonal number theorem."""
    if ell < 1 or n < 1:
        raise ValueError("f_ell needs ell >= 1 and n >= 1")
    c = [0] * n
    for e, sign in _pentagonal_exponents((n - 1) // ell + 1):
        c[e * ell] = sign
    return make_series(ring, c)


@lru_cache(maxsize=256)
def partition_series(ring: CoefficientRing = EXACT, n: int = 100) -> Series:
    """1/f_1 = sum p(n) q^n."""
    return invert(f_ell(1, ring, n))


def _dilated_power(ell: int, e: int, ring: CoefficientRing, n: int) -> Series:
    # f_ell^e is a series in q^ell: raise the compressed series, then dilate
    p = -(-(n - 1) // ell) + 1
    base = f_ell(1, ring, p) if e > 0 else partition_series(ring, p)
    return truncate(dilate(power(base, abs(e)), ell), n)


def eta_quotient(spec: EtaQuotientSpec, ring: CoefficientRing = EXACT, n: int = 100) -> Series:
    if isinstance(spec, (list, tuple)):
        spec = EtaQuotientSpec(tuple(spec))
    result = None
    # multiply sparse (large-scale) factors first
    for ell, e in sorted(spec.factors, key=lambda f: -f[0]):
        factor = _dilated_power(ell, e, ring, n)
        result = factor if result is None else mul(result, factor)
    return one(ring, n) if result is None else result


def _binomial_product(ring: CoefficientRing, n: int, exponents, plus=False, inverse=False):
    """In-place prod (1 -+ q^e)^{+-1} over exponents on a coefficient array."""
    word = ring.uses_words
    if word:
        c = np.zeros(n, dtype=np.int64)
    else:
        c = np.zeros(n, dtype=object)
        c[:] = 0
    c[0] = 1
    m = ring.modulus
    for e in exponents:
        if e >= n:
            continue
        if not inverse:
            # times (1 - q^e) or (1 + q^e); right side evaluates before assignment
            if plus:
                c[e:] = c[e:] + c[: n - e]
            else:
                c[e:] = c[e:] - c[: n - e]
        else:
            # divide: c_i <- c_i +- c_{i-e}, sequential in blocks of length e
            for start in range(e, n, e):
                stop = min(start + e, n)
                if plus:
                    c[start:stop] -= c[start - e : stop - e]
                else:
                    c[start:stop] += c[start - e : stop - e]
                if word:
                    c[start:stop] %= m
        if word:
            c %= m
    return c


def _progression(a: int, b: int, n: int):
    return range(a, n, b)


def pochhammer_product(spec: PochhammerProductSpec, ring: CoefficientRing = EXACT, n: int = 100) -> Series:
    b = spec.modulus
    exps_num = [x for a in spec.numerator for x in _progression(a, b, n)]
    exps_den = [x for a in spec.denominator for x in _progression(a, b, n)]
    c = _binomial_product(ring, n, exps_num)
    if exps_den:
        den = _binomial_product(ring, n, exps_den, inverse=True)
        num = _pack(ring, c)
        return mul(num, _pack(ring, den))
    return _pack(ring, c)


def rogers_ramanujan_a(ring: CoefficientRing = EXACT, n: int = 100) -> Series:
    """The quintic quotient (q^2, q^3; q^5)_inf / (q, q^4; q^5)_inf."""
    return pochhammer_product(PochhammerProductSpec(5, (2, 3), (1, 4)), ring, n)


def jacobi_cube_sum(ring: CoefficientRing = EXACT, n: int = 100) -> Series:
    """Sum side of f_1^3 = sum_{k>=0} (-1)^k (2k+1) q^{k(k+1)/2}."""
    c = [0] * n
    k = 0
    while k * (k + 1) // 2 < n:
        c[k * (k + 1) // 2] = (-1) ** k * (2 * k + 1)
        k += 1
    return make_series(ring, c)


def theta_sum(s: int, t: int, ring: CoefficientRing = EXACT, n: int = 100) -> Series:
    """sum_{j in Z} q^{s j(j+1)/2 + t j(j-1)/2}, i.e. f(q^s, q^t)."""
    c = [0] * n

    def expo(j):
        return s * j * (j + 1) // 2 + t * j * (j - 1) // 2

    c[0] += 1
    j = 1
    while True:
        up, down = expo(j), expo(-j)
        if up >= n and down >= n:
            break
        if up < n:
            c[up] += 1
        if down < n:
            c[down] += 1
        j += 1
    return make_series(ring, c)


def theta_product(s: int, t: int, ring: CoefficientRing = EXACT, n: int = 100) -> Series:
    """(-q^s; q^{s+t})_inf (-q^t; q^{s+t})_inf (q^{s+t}; q^{s+t})_inf."""
    st = s + t
    a = _pack(ring, _binomial_product(ring, n, range(s, n, st), plus=True))
    b = _pack(ring, _binomial_product(ring, n, range(t, n, st), plus=True))
    c = f_ell(st, ring, n)
    return mul(mul(a, b), c)


def theta_triple_product_check(s: int, t: int, n: int = 300, ring: CoefficientRing = EXACT):
    """Compare both sides of the triple product at a = q^s, b = q^t.

    Returns ``(equal, first_mismatch_index)``; the index is None when equal.
    """
    if s < 1 or t < 1:
        raise ValueError("triple product specialization needs s, t >= 1")
    lhs = theta_sum(s, t, ring, n).coeffs
    rhs = theta_product(s, t, ring, n).coeffs
    for i, (x, y) in enumerate(zip(lhs, rhs)):
        if x != y:
            return False, i
    return True, None


# -- text grammar ------------------------------------------------------------

class ParseError(ValueError):
    def __init__(self, message: str, text: str, column: int):
        super().__init__(message)
        self.message = message
        self.text = text
        self.column = column

    def pointer(self) -> str:
        return f"{self.text}\n{' ' * self.column}^ {self.message}"


_TOKEN = re.compile(r"\s*(?:(?P<int>-?\d+)|(?P<op>[\^*/\[\];,]))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            col = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[col]!r}", text, col)
        kind = "int" if m.group("int") is not None else "op"
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind, value=None, what=None):
        tok = self.tokens[self.i]
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = what or (repr(value) if value else kind)
            got = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {want}, got {got}", self.text, tok[2])
        self.i += 1
        return tok

    def positive(self, what):
        tok = self.take("int", what=what)
        if int(tok[1]) < 1:
            raise ParseError(f"{what} must be positive", self.text, tok[2])
        return int(tok[1])

    def at(self, kind, value=None):
        tok = self.peek()
        return tok[0] == kind and (value is None or tok[1] == value)


def parse_eta(text: str) -> EtaQuotientSpec:
    """Parse ``"2^3 * 1^-4"``: scale^exponent factors joined by ``*``."""
    p = _Parser(text)
    pairs = []
    while True:
        scale = p.positive("eta scale")
        e = 1
        if p.at("op", "^"):
            p.take("op", "^")
            e = int(p.take("int", what="exponent")[1])
        pairs.append((scale, e))
        if p.at("op", "*"):
            p.take("op", "*")
            continue
        break
    p.take("end", what="'*' or end of input")
    return EtaQuotientSpec(tuple(pairs))


def parse_pochhammer(text: str) -> PochhammerProductSpec:
    """Parse ``"[2,3;5]/[1,4;5]"``; every bracket must share the same modulus."""
    p = _Parser(text)
    moduli = []

    def side():
        res = []
        if p.at("int") and p.peek()[1] == "1":
            p.take("int")
            return res
        while True:
            p.take("op", "[")
            res.append(p.positive("residue"))
            while p.at("op", ","):
                p.take("op", ",")
                res.append(p.positive("residue"))
            p.take("op", ";")
            col = p.peek()[2]
            moduli.append((p.positive("modulus"), col))
            p.take("op", "]")
            if p.at("op", "*"):
                p.take("op", "*")
                continue
            return res

    num = side()
    den = []
    if p.at("op", "/"):
        p.take("op", "/")
        den = side()
    p.take("end", what="'/', '*' or end of input")
    if not moduli:
        raise ParseError("no Pochhammer factor given", text, 0)
    b = moduli[0][0]
    for other, col in moduli[1:]:
        if other != b:
            raise ParseError(f"all factors must share modulus {b}", text, col)
    return PochhammerProductSpec(b, tuple(num), tuple(den))


def parse_product(text: str):
    """Dispatch on syntax: brackets mean a Pochhammer quotient, otherwise an eta quotient."""
    if "[" in text:
        return parse_pochhammer(text)
    return parse_eta(text)


def expand(spec, ring: CoefficientRing = EXACT, n: int = 100) -> Series:
    if isinstance(spec, PochhammerProductSpec):
        return pochhammer_product(spec, ring, n)
    return eta_quotient(spec, ring, n)
