"""Exact GF(2) Laurent-polynomial arithmetic for lamp configurations.

A lamp configuration is a finite set of integer exponents read as a
Laurent polynomial over GF(2): the set holds the exponents whose
coefficient is 1, so addition is symmetric difference and every value is
its own additive inverse.  Localizing at (1+x) gives pairs num/(1+x)^k,
the form the stretched lamp groups need because conjugation by the
stretching generator multiplies a configuration by (1+x).

Also here: Pascal rows mod 2 (the toggle pattern of a single button
press at height p) and a dense GF(2) subset-XOR solver used to decide
which buttons along a path to press.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

# Exponents beyond this guard signal a runaway computation, not a real need.
EXPONENT_GUARD = 2**31


class NotDivisibleError(ValueError):
    """Raised when dividing by (1+x) a polynomial with odd support."""


class ExponentRangeError(ValueError):
    """Raised when an exponent exceeds the configured guard."""


def _check_support(support: frozenset) -> None:
    for e in support:
        if not isinstance(e, int) or isinstance(e, bool):
            raise TypeError(f"exponent {e!r} is not an int")
        if abs(e) > EXPONENT_GUARD:
            raise ExponentRangeError(f"exponent {e} exceeds guard {EXPONENT_GUARD}")


def _div1(support: frozenset) -> frozenset:
    # f/(1+x) over GF(2): coefficient of x^e in the quotient is the parity
    # of |{s in support : s <= e}|; the quotient support is a union of
    # intervals between consecutive support points.
    exps = sorted(support)
    out: set[int] = set()
    for i in range(0, len(exps), 2):
        out.update(range(exps[i], exps[i + 1]))
    return frozenset(out)


@dataclass(frozen=True)
class LaurentPolyZ2:
    """Finite exponent set of a GF(2) Laurent polynomial; empty set is zero."""

    support: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not isinstance(self.support, frozenset):
            object.__setattr__(self, "support", frozenset(self.support))
        _check_support(self.support)

    @classmethod
    def zero(cls) -> "LaurentPolyZ2":
        return cls(frozenset())

    @classmethod
    def one(cls) -> "LaurentPolyZ2":
        return cls(frozenset({0}))

    @classmethod
    def from_exponents(cls, exps: Iterable[int]) -> "LaurentPolyZ2":
        return cls(frozenset(exps))

    def __add__(self, other: "LaurentPolyZ2") -> "LaurentPolyZ2":
        return LaurentPolyZ2(self.support ^ other.support)

    __xor__ = __add__

    def shift(self, m: int) -> "LaurentPolyZ2":
        """Multiply by x^m."""
        return LaurentPolyZ2(frozenset(e + m for e in self.support))

    def mul_onepx(self) -> "LaurentPolyZ2":
        """Multiply by (1+x)."""
        return LaurentPolyZ2(self.support ^ frozenset(e + 1 for e in self.support))

    def div_onepx(self) -> "LaurentPolyZ2":
        """Divide by (1+x); exact iff the support size is even (f(1) = 0)."""
        if len(self.support) % 2 != 0:
            raise NotDivisibleError(f"{self} is not divisible by (1+x)")
        return LaurentPolyZ2(_div1(self.support))

    def is_zero(self) -> bool:
        return not self.support

    def __len__(self) -> int:
        return len(self.support)

    def __contains__(self, e: int) -> bool:
        return e in self.support

    def __str__(self) -> str:
        return "[" + ",".join(str(e) for e in sorted(self.support)) + "]"

    __repr__ = __str__

    @classmethod
    def parse(cls, text: str) -> "LaurentPolyZ2":
        text = text.strip()
        if not (text.startswith("[") and text.endswith("]")):
            raise ValueError(f"bad polynomial literal {text!r}")
        body = text[1:-1].strip()
        if not body:
            return cls.zero()
        return cls.from_exponents(int(part) for part in body.split(","))


@dataclass(frozen=True)
class LocalizedLamp:
    """Canonical pair (num, k) denoting num/(1+x)^k in the (1+x)-localization.

    Canonical means num = 0 forces k = 0, and otherwise (1+x) does not
    divide num (equivalently the support size is odd).  Equal values have
    equal fields, so equality and hashing are exact.
    """

    num: LaurentPolyZ2
    k: int = 0

    def __post_init__(self):
        if self.num.is_zero():
            if self.k != 0:
                raise ValueError("zero numerator requires k = 0")
        elif len(self.num) % 2 == 0:
            raise ValueError(f"numerator {self.num} is divisible by (1+x)")

    @classmethod
    def zero(cls) -> "LocalizedLamp":
        return cls(LaurentPolyZ2.zero(), 0)

    @classmethod
    def one(cls) -> "LocalizedLamp":
        return cls(LaurentPolyZ2.one(), 0)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.k <= 0

    def expand(self) -> LaurentPolyZ2:
        """Clear the denominator of a polynomial value (k <= 0)."""
        if self.k > 0:
            raise ValueError(f"{self} is a proper fraction")
        out = self.num
        for _ in range(-self.k):
            out = out.mul_onepx()
        return out

    def __add__(self, other: "LocalizedLamp") -> "LocalizedLamp":
        return loc_add(self, other)

    def __str__(self) -> str:
        return f"num={self.num};k={self.k}"

    __repr__ = __str__


def poly_add(f: LaurentPolyZ2, g: LaurentPolyZ2) -> LaurentPolyZ2:
    """Sum over GF(2): symmetric difference of supports."""
    return f + g


def poly_shift(f: LaurentPolyZ2, m: int) -> LaurentPolyZ2:
    """Multiply by x^m, shifting every exponent by m."""
    return f.shift(m)


def mul_onepx(f: LaurentPolyZ2) -> LaurentPolyZ2:
    """Multiply by (1+x): f + x*f."""
    return f.mul_onepx()


def div_onepx(f: LaurentPolyZ2) -> LaurentPolyZ2:
    """Exact division by (1+x); raises NotDivisibleError on odd support."""
    return f.div_onepx()


def loc_canonicalize(num: LaurentPolyZ2, k: int) -> LocalizedLamp:
    """Reduce num/(1+x)^k to canonical form, dividing out (1+x) factors."""
    if num.is_zero():
        return LocalizedLamp.zero()
    while len(num) % 2 == 0:
        num = num.div_onepx()
        k -= 1
    return LocalizedLamp(num, k)


def loc_add(f: LocalizedLamp, g: LocalizedLamp) -> LocalizedLamp:
    """Add over the common denominator (1+x)^max(k_f, k_g)."""
    k = max(f.k, g.k)
    a, b = f.num, g.num
    for _ in range(k - f.k):
        a = a.mul_onepx()
    for _ in range(k - g.k):
        b = b.mul_onepx()
    return loc_canonicalize(a + b, k)


def loc_scale(f: LocalizedLamp, m: int, p: int) -> LocalizedLamp:
    """Multiply by x^m (1+x)^p; p may be negative."""
    if f.is_zero():
        return f
    # Shifting preserves support parity, so the result is already canonical.
    return LocalizedLamp(f.num.shift(m), f.k - p)


def pascal_row(p: int) -> LaurentPolyZ2:
    """(1+x)^p for p >= 0: the exponents j <= p with binom(p, j) odd."""
    if p < 0:
        raise ValueError(f"pascal_row needs p >= 0, got {p}")
    row = LaurentPolyZ2.one()
    for _ in range(p):
        row = row.mul_onepx()
    return row


@dataclass(frozen=True)
class Gf2System:
    """Ordered button vectors plus a target configuration to hit by XOR."""

    columns: tuple
    target: LaurentPolyZ2

    def __post_init__(self):
        if not isinstance(self.columns, tuple):
            object.__setattr__(self, "columns", tuple(self.columns))


def gf2_solve(system: Gf2System) -> list[int] | None:
    """Return column indices whose XOR equals the target, or None.

    Gaussian elimination takes columns in insertion order, so the reported
    subset is deterministic and prefers the earliest independent columns.
    None is a verdict (target outside the span), not a failure.
    """
    exps = set(system.target.support)
    for col in system.columns:
        exps.update(col.support)
    pos = {e: i for i, e in enumerate(sorted(exps))}

    basis: dict[int, tuple[int, int]] = {}  # pivot bit -> (vector, combo)
    for idx, col in enumerate(system.columns):
        vec = 0
        for e in col.support:
            vec |= 1 << pos[e]
        combo = 1 << idx
        while vec:
            low = vec & -vec
            if low not in basis:
                basis[low] = (vec, combo)
                break
            bv, bc = basis[low]
            vec ^= bv
            combo ^= bc

    vec = 0
    for e in system.target.support:
        vec |= 1 << pos[e]
    combo = 0
    while vec:
        low = vec & -vec
        if low not in basis:
            return None
        bv, bc = basis[low]
        vec ^= bv
        combo ^= bc

    solution = [i for i in range(len(system.columns)) if (combo >> i) & 1]
    if __debug__:
        acc: frozenset = frozenset()
        for i in solution:
            acc ^= system.columns[i].support
        assert acc == system.target.support, "gf2_solve produced a bad subset"
    return solution


def loc_solve(columns: list[LocalizedLamp], target: LocalizedLamp) -> list[int] | None:
    """Subset-XOR solve over localized values by clearing denominators."""
    kmax = max([target.k] + [c.k for c in columns], default=0)

    def clear(v: LocalizedLamp) -> LaurentPolyZ2:
        out = v.num
        for _ in range(kmax - v.k):
            out = out.mul_onepx()
        return out

    return gf2_solve(Gf2System(tuple(clear(c) for c in columns), clear(target)))
