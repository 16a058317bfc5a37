"""
Dissection identities and residue-class support claims, checked to N terms.

Expressions form a small closed algebra (eta quotient, Pochhammer quotient,
shift, scalar, sum, product, power, dilation, progression extraction) that
evaluates to a :class:`~qcong.series.Series` at any requested precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from . import series as S
from .eta import (
    EtaQuotientSpec,
    PochhammerProductSpec,
    eta_quotient,
    jacobi_cube_sum,
    pochhammer_product,
)
from .series import EXACT, CoefficientRing, Mod, Series

__all__ = [
    "Expr",
    "Eta",
    "Poch",
    "CubeSum",
    "Shift",
    "Scale",
    "Sum",
    "Prod",
    "Pow",
    "Dilate",
    "Extract",
    "addend_shifts",
    "DissectionIdentity",
    "SupportClaim",
    "IdentityResult",
    "verify_identity",
    "support_classes",
    "verify_support_claim",
    "builtin_identities",
    "registry",
    "check",
]


class Expr:
    def evaluate(self, ring: CoefficientRing, n: int) -> Series:
        raise NotImplementedError

    def __add__(self, other):
        return Sum((self, other))

    def __sub__(self, other):
        return Sum((self, Scale(-1, other)))

    def __mul__(self, other):
        return Prod((self, other))

    def __rmul__(self, c):
        return Scale(c, self)


@dataclass(frozen=True)
class Eta(Expr):
    spec: EtaQuotientSpec

    def evaluate(self, ring, n):
        return eta_quotient(self.spec, ring, n)

    def __str__(self):
        return f"eta({self.spec})"


def eta(*pairs) -> Eta:
    return Eta(EtaQuotientSpec(tuple(pairs)))


@dataclass(frozen=True)
class Poch(Expr):
    spec: PochhammerProductSpec

    def evaluate(self, ring, n):
        return pochhammer_product(self.spec, ring, n)

    def __str__(self):
        return f"poch({self.spec})"


def poch(modulus, numerator=(), denominator=()) -> Poch:
    return Poch(PochhammerProductSpec(modulus, tuple(numerator), tuple(denominator)))


@dataclass(frozen=True)
class CubeSum(Expr):
    """sum (-1)^k (2k+1) q^{k(k+1)/2}."""

    def evaluate(self, ring, n):
        return jacobi_cube_sum(ring, n)

    def __str__(self):
        return "cube_sum"


@dataclass(frozen=True)
class Shift(Expr):
    t: int
    inner: Expr

    def evaluate(self, ring, n):
        if self.t >= n:
            return S.zero(ring, n)
        return S.truncate(S.shift(self.inner.evaluate(ring, n - self.t), self.t), n)

    def __str__(self):
        return f"q^{self.t}*{self.inner}"


@dataclass(frozen=True)
class Scale(Expr):
    c: int
    inner: Expr

    def evaluate(self, ring, n):
        return S.scale(self.inner.evaluate(ring, n), self.c)

    def __str__(self):
        return f"{self.c}*{self.inner}"


@dataclass(frozen=True)
class Sum(Expr):
    terms: tuple

    def evaluate(self, ring, n):
        out = self.terms[0].evaluate(ring, n)
        for t in self.terms[1:]:
            out = S.add(out, t.evaluate(ring, n))
        return out

    def __str__(self):
        return "(" + " + ".join(map(str, self.terms)) + ")"


@dataclass(frozen=True)
class Prod(Expr):
    factors: tuple

    def evaluate(self, ring, n):
        out = self.factors[0].evaluate(ring, n)
        for f in self.factors[1:]:
            out = S.mul(out, f.evaluate(ring, n))
        return out

    def __str__(self):
        return " * ".join(map(str, self.factors))


@dataclass(frozen=True)
class Pow(Expr):
    inner: Expr
    e: int

    def evaluate(self, ring, n):
        return S.power(self.inner.evaluate(ring, n), self.e)

    def __str__(self):
        return f"({self.inner})^{self.e}"


@dataclass(frozen=True)
class Dilate(Expr):
    inner: Expr
    t: int

    def evaluate(self, ring, n):
        inner_n = -(-(n - 1) // self.t) + 1
        return S.truncate(S.dilate(self.inner.evaluate(ring, inner_n), self.t), n)

    def __str__(self):
        return f"({self.inner})[q->q^{self.t}]"


@dataclass(frozen=True)
class Extract(Expr):
    """Coefficients at A*m + B, re-indexed by m."""

    inner: Expr
    A: int
    B: int

    def evaluate(self, ring, n):
        return S.extract_progression(self.inner.evaluate(ring, self.A * (n - 1) + self.B + 1), self.A, self.B)

    def __str__(self):
        return f"extract({self.inner}; {self.A}m+{self.B})"


def addend_shifts(expr: Expr) -> list[int]:
    """Shifts of the addends in the first Sum found in ``expr`` (0 when unshifted)."""

    def find(e):
        if isinstance(e, Sum):
            return e
        for child in _children(e):
            hit = find(child)
            if hit is not None:
                return hit
        return None

    def shift_of(e):
        while isinstance(e, Scale):
            e = e.inner
        return e.t if isinstance(e, Shift) else 0

    s = find(expr)
    return [] if s is None else [shift_of(t) for t in s.terms]


def _children(e):
    if isinstance(e, (Shift, Scale, Pow, Dilate, Extract)):
        return (e.inner,)
    if isinstance(e, Sum):
        return e.terms
    if isinstance(e, Prod):
        return e.factors
    return ()


# -- statements ----------------------------------------------------------------

@dataclass(frozen=True)
class DissectionIdentity:
    name: str
    lhs: Expr
    rhs: Expr
    modulus: int | None = None  # None: exact identity; m: congruence mod m
    expect_failure: bool = False  # documented negative controls

    @property
    def mode(self) -> str:
        return "exact" if self.modulus is None else f"congruent({self.modulus})"

    @property
    def ring(self) -> CoefficientRing:
        return EXACT if self.modulus is None else Mod(self.modulus)


@dataclass(frozen=True)
class SupportClaim:
    """Nonzero coefficients (mod ``m``) sit only on exponents == allowed (mod ``t``)."""

    name: str
    expr: Expr
    m: int
    t: int
    allowed: frozenset

    def __post_init__(self):
        if not self.allowed or any(not 0 <= r < self.t for r in self.allowed):
            raise ValueError(f"allowed residues must be a nonempty subset of [0, {self.t})")
        object.__setattr__(self, "allowed", frozenset(self.allowed))

    @property
    def mode(self) -> str:
        return f"support(mod {self.m}, exponents mod {self.t})"

    expect_failure = False


@dataclass(frozen=True)
class IdentityResult:
    name: str
    mode: str
    verified_to: int
    mismatch: dict | None = None
    residues: tuple[int, ...] | None = None

    @property
    def ok(self) -> bool:
        return self.mismatch is None

    def to_json(self) -> dict:
        d = {"name": self.name, "mode": self.mode, "verified_to": self.verified_to, "mismatch": self.mismatch}
        if self.residues is not None:
            d["residues"] = list(self.residues)
        return d


def verify_identity(ident: DissectionIdentity, n: int = 1000) -> IdentityResult:
    if n < 1:
        raise ValueError("need n >= 1")
    ring = ident.ring
    lhs = ident.lhs.evaluate(ring, n).coeffs
    rhs = ident.rhs.evaluate(ring, n).coeffs
    for i, (x, y) in enumerate(zip(lhs, rhs)):
        if x != y:
            return IdentityResult(ident.name, ident.mode, i, {"index": i, "lhs": x, "rhs": y})
    return IdentityResult(ident.name, ident.mode, n)


def support_classes(s: Series, t: int, m: int | None = None) -> set[int]:
    """Exponent residues mod t carrying a coefficient that is nonzero mod m."""
    if t < 2:
        raise ValueError("exponent modulus must be >= 2")
    coeffs = s.coeffs
    if m is not None:
        coeffs = [c % m for c in coeffs]
    return {i % t for i, c in enumerate(coeffs) if c}


def verify_support_claim(claim: SupportClaim, n: int = 2000) -> IdentityResult:
    s = claim.expr.evaluate(Mod(claim.m), n)
    found = set()
    for i in s.nonzero_indices():
        r = i % claim.t
        if r not in claim.allowed:
            return IdentityResult(
                claim.name, claim.mode, i, {"index": i, "residue": r, "coefficient": s[i]}
            )
        found.add(r)
    return IdentityResult(claim.name, claim.mode, n, residues=tuple(sorted(found)))


# -- registry --------------------------------------------------------------------

def _identity_7():
    a5 = Dilate(poch(5, (2, 3), (1, 4)), 5)
    inner = Sum((a5, Scale(-1, Shift(1, eta())), Scale(-1, Shift(2, Pow(a5, -1)))))
    return DissectionIdentity("L7", eta((1, 1)), Prod((eta((25, 1)), inner)))


def _identity_8():
    A = poch(49, (14, 35), (7, 42))
    B = poch(49, (21, 28), (14, 35))
    C = poch(49, (7, 42), (21, 28))
    inner = Sum((A, Scale(-1, Shift(1, B)), Scale(-1, Shift(2, eta())), Shift(5, C)))
    return DissectionIdentity("L8", eta((1, 1)), Prod((eta((49, 1)), inner)))


def _identity_9():
    t0 = poch(121, (44, 77), (22, 99))
    t1 = poch(121, (22, 99), (11, 110))
    t2 = poch(121, (55, 66), (33, 88))
    t7 = poch(121, (33, 88), (44, 77))
    t15 = poch(121, (11, 110), (55, 66))
    inner = Sum(
        (
            t0,
            Scale(-1, Shift(1, t1)),
            Scale(-1, Shift(2, t2)),
            Shift(5, eta()),
            Shift(7, t7),
            Scale(-1, Shift(15, t15)),
        )
    )
    return DissectionIdentity("L9", eta((1, 1)), Prod((eta((121, 1)), inner)))


def builtin_identities() -> list:
    f1cube = eta((1, 3))
    # 3-dissection pieces: f_2^2/f_1 = U + qV and f_1^3 = X - 3qY + 4q^3 Z
    U = eta((6, 1), (9, 2), (3, -1), (18, -1))
    V = eta((18, 2), (9, -1))
    X = eta((6, 1), (9, 6), (3, -1), (18, -3))
    Y = eta((9, 3))
    Z = eta((3, 2), (18, 6), (6, -2), (9, -3))
    l6_rhs = Sum((X, Scale(-3, Shift(1, Y)), Scale(4, Shift(3, Z))))

    a11 = eta((2, 10), (1, -11))
    a11_product = Prod((Pow(f1cube, 2), eta((2, 2), (1, -1))))
    # q^{3n} terms of (X - 3qY + 4q^3 Z)^2 (U + qV), left at exponents 3n
    a11_3n = Dilate(Extract(a11_product, 3, 0), 3)
    a11_3n_exact = Sum(
        (
            Prod((X, X, U)),
            Scale(9, Shift(3, Prod((Y, Y, V)))),
            Scale(8, Shift(3, Prod((X, Z, U)))),
            Scale(16, Shift(6, Prod((Z, Z, U)))),
        )
    )
    a11_3n_coeff4 = Sum(
        (
            eta((6, 3), (9, 14), (3, -3), (18, -7)),
            Scale(16, Shift(6, eta((3, 3), (18, 1), (6, -3), (9, -4)))),
            Scale(4, Shift(3, eta((18, 2), (9, 5)))),
        )
    )
    a11_3n_mod2 = Sum((eta((6, 3), (9, 14), (3, -3), (18, -7)), Shift(3, eta((18, 2), (9, 5)))))
    zero = Scale(0, eta())

    return [
        DissectionIdentity("L1", Poch(PochhammerProductSpec(1, (1, 1, 1))), CubeSum()),
        DissectionIdentity("L1-pentagonal", Poch(PochhammerProductSpec(1, (1,))), eta((1, 1))),
        DissectionIdentity("L2", f1cube, CubeSum()),
        SupportClaim("L2-support", CubeSum(), 11, 11, frozenset({0, 1, 3, 6, 10})),
        SupportClaim("L3-support", f1cube, 2, 7, frozenset({0, 1, 3, 6})),
        SupportClaim("L4-support", f1cube, 2, 11, frozenset({0, 1, 3, 4, 6, 10})),
        DissectionIdentity("L5", eta((2, 2), (1, -1)), Sum((U, Shift(1, V)))),
        DissectionIdentity("L5-literal", eta((2, 2), (1, -1)), Sum((U, V)), expect_failure=True),
        DissectionIdentity("L6", f1cube, l6_rhs),
        _identity_7(),
        _identity_8(),
        _identity_9(),
        DissectionIdentity("T8-a11-product", a11, a11_product, modulus=2),
        DissectionIdentity("T8-a11-3n-exact", a11_3n, a11_3n_exact),
        DissectionIdentity("T8-a11-3n", Dilate(Extract(a11, 3, 0), 3), a11_3n_mod2, modulus=2),
        DissectionIdentity(
            "T8-a11-3n-coeff4", Dilate(Extract(a11, 3, 0), 3), a11_3n_coeff4, modulus=2, expect_failure=True
        ),
        DissectionIdentity("T8-a5-3n+2", Extract(eta((2, 4), (1, -5)), 3, 2), zero, modulus=2),
    ]


def registry() -> dict:
    return {item.name: item for item in builtin_identities()}


def check(item, n: int) -> IdentityResult:
    if isinstance(item, SupportClaim):
        return verify_support_claim(item, n)
    return verify_identity(item, n)
