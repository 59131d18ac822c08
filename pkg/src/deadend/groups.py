"""Canonical element arithmetic for the five groups under study.

Each element is a normal form (lamp part, translation part), so equality,
hashing, and serialization are exact:

* ``ZElem``  -- the integers.
* ``LLElem`` -- lamplighter Z2 wr Z: finite lamp set plus a position.
* ``HElem``  -- lamps indexed by diagonals of the plane, position in Z^2;
  both plane generators shift the lamp index the same way.
* ``GElem``  -- lamps in the (1+x)-localization, position (p, q); the
  vertical generator scales lamps by (1+x).
* ``KElem``  -- same lamp module as G with position (p, q, r).

Words are strings over ``astu`` with uppercase meaning the inverse
letter.  A word is a left-to-right product; its action on states applies
letters rightmost first.  ``act_on_state`` implements the letter action
directly and is kept as an independent oracle for the multiplication
formulas.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

from .lamps import (
    LaurentPolyZ2,
    LocalizedLamp,
    loc_add,
    loc_canonicalize,
    loc_scale,
    pascal_row,
)


class GroupMismatchError(TypeError):
    """Raised when combining elements of different groups."""


class IllegalLetterError(ValueError):
    """Raised when a word contains a letter the group does not have."""


class NonPolynomialLampsError(ValueError):
    """Raised when the lamp part is a proper fraction and has no lamp set."""


def word_inverse(word: str) -> str:
    """Inverse of a letter word: reverse, swap case, keep 'a' lowercase."""
    return word[::-1].swapcase().replace("A", "a")


def _check_word(word: str, letters: str) -> None:
    for ch in word:
        if ch.lower() not in letters:
            raise IllegalLetterError(f"letter {ch!r} not in alphabet {letters!r}")


_ZERO = LaurentPolyZ2.zero()
_LOC_ZERO = LocalizedLamp.zero()
_LOC_ONE = LocalizedLamp.one()


@dataclass(frozen=True)
class ZElem:
    """Element of the integers."""

    value: int = 0

    letters = ""
    group_name = "Z"

    def __mul__(self, other: "ZElem") -> "ZElem":
        if not isinstance(other, ZElem):
            raise GroupMismatchError(f"cannot multiply ZElem by {type(other).__name__}")
        return ZElem(self.value + other.value)

    def inv(self) -> "ZElem":
        return ZElem(-self.value)

    @classmethod
    def identity(cls) -> "ZElem":
        return cls(0)

    def key(self):
        return self.value

    @classmethod
    def from_key(cls, key) -> "ZElem":
        return cls(key)

    def serialize(self) -> str:
        return f"Z{{value={self.value}}}"


class _LampShiftElem:
    """Shared behaviour of LL and H: letter action shifts lamps by x^m."""

    __slots__ = ()

    def _shift_amount(self) -> int:
        raise NotImplementedError

    def _make(self, lamps, pos):
        raise NotImplementedError


@dataclass(frozen=True)
class LLElem(_LampShiftElem):
    """Lamplighter element: lamp set and lamplighter position on the line."""

    lamps: LaurentPolyZ2 = _ZERO
    pos: int = 0

    letters = "at"
    group_name = "LL"

    def __mul__(self, other: "LLElem") -> "LLElem":
        if not isinstance(other, LLElem):
            raise GroupMismatchError(f"cannot multiply LLElem by {type(other).__name__}")
        return LLElem(self.lamps.shift(other.pos) + other.lamps, self.pos + other.pos)

    def inv(self) -> "LLElem":
        return LLElem(self.lamps.shift(-self.pos), -self.pos)

    @classmethod
    def identity(cls) -> "LLElem":
        return cls()

    @classmethod
    def letter(cls, ch: str) -> "LLElem":
        if ch == "a" or ch == "A":
            return cls(LaurentPolyZ2.one(), 0)
        if ch == "t":
            return cls(_ZERO, 1)
        if ch == "T":
            return cls(_ZERO, -1)
        raise IllegalLetterError(f"letter {ch!r} not in LL")

    @classmethod
    def eval_word(cls, word: str) -> "LLElem":
        _check_word(word, cls.letters)
        out = cls.identity()
        for ch in word:
            out = out * cls.letter(ch)
        return out

    def proj_L(self) -> int:
        return self.pos

    def proj_I(self) -> frozenset:
        return self.lamps.support

    def key(self):
        return (self.lamps.support, self.pos)

    @classmethod
    def from_key(cls, key) -> "LLElem":
        lamps, pos = key
        return cls(LaurentPolyZ2(lamps), pos)

    def serialize(self) -> str:
        return f"LL{{lamps={self.lamps};pos={self.pos}}}"


@dataclass(frozen=True)
class HElem(_LampShiftElem):
    """Element of the doubled lamplighter H: lamps plus a plane position.

    Both plane directions advance the lamp index, so the lamp a word
    touches is indexed by q + r.
    """

    lamps: LaurentPolyZ2 = _ZERO
    pos: tuple[int, int] = (0, 0)

    letters = "atu"
    group_name = "H"

    def __mul__(self, other: "HElem") -> "HElem":
        if not isinstance(other, HElem):
            raise GroupMismatchError(f"cannot multiply HElem by {type(other).__name__}")
        q, r = other.pos
        return HElem(
            self.lamps.shift(q + r) + other.lamps,
            (self.pos[0] + q, self.pos[1] + r),
        )

    def inv(self) -> "HElem":
        q, r = self.pos
        return HElem(self.lamps.shift(-(q + r)), (-q, -r))

    @classmethod
    def identity(cls) -> "HElem":
        return cls()

    @classmethod
    def letter(cls, ch: str) -> "HElem":
        if ch == "a" or ch == "A":
            return cls(LaurentPolyZ2.one(), (0, 0))
        if ch == "t":
            return cls(_ZERO, (1, 0))
        if ch == "T":
            return cls(_ZERO, (-1, 0))
        if ch == "u":
            return cls(_ZERO, (0, 1))
        if ch == "U":
            return cls(_ZERO, (0, -1))
        raise IllegalLetterError(f"letter {ch!r} not in H")

    @classmethod
    def eval_word(cls, word: str) -> "HElem":
        _check_word(word, cls.letters)
        out = cls.identity()
        for ch in word:
            out = out * cls.letter(ch)
        return out

    def proj_L(self) -> tuple[int, int]:
        return self.pos

    def proj_I(self) -> frozenset:
        return self.lamps.support

    def key(self):
        return (self.lamps.support, self.pos)

    @classmethod
    def from_key(cls, key) -> "HElem":
        lamps, pos = key
        return cls(LaurentPolyZ2(lamps), pos)

    def serialize(self) -> str:
        return f"H{{lamps={self.lamps};pos=({self.pos[0]},{self.pos[1]})}}"


@dataclass(frozen=True)
class GElem:
    """Element of the stretched lamplighter G: localized lamps, position (p, q)."""

    lamps: LocalizedLamp = _LOC_ZERO
    pos: tuple[int, int] = (0, 0)

    letters = "ast"
    group_name = "G"

    def __mul__(self, other: "GElem") -> "GElem":
        if not isinstance(other, GElem):
            raise GroupMismatchError(f"cannot multiply GElem by {type(other).__name__}")
        p, q = other.pos
        return GElem(
            loc_add(loc_scale(self.lamps, q, p), other.lamps),
            (self.pos[0] + p, self.pos[1] + q),
        )

    def inv(self) -> "GElem":
        p, q = self.pos
        return GElem(loc_scale(self.lamps, -q, -p), (-p, -q))

    @classmethod
    def identity(cls) -> "GElem":
        return cls()

    @classmethod
    def letter(cls, ch: str) -> "GElem":
        if ch == "a" or ch == "A":
            return cls(_LOC_ONE, (0, 0))
        if ch == "s":
            return cls(_LOC_ZERO, (1, 0))
        if ch == "S":
            return cls(_LOC_ZERO, (-1, 0))
        if ch == "t":
            return cls(_LOC_ZERO, (0, 1))
        if ch == "T":
            return cls(_LOC_ZERO, (0, -1))
        raise IllegalLetterError(f"letter {ch!r} not in G")

    @classmethod
    def eval_word(cls, word: str) -> "GElem":
        _check_word(word, cls.letters)
        out = cls.identity()
        for ch in word:
            out = out * cls.letter(ch)
        return out

    def proj_L(self) -> tuple[int, int]:
        return self.pos

    def proj_I(self) -> frozenset:
        if not self.lamps.is_polynomial():
            raise NonPolynomialLampsError(f"lamp part {self.lamps} has no lamp set")
        return self.lamps.expand().support

    def key(self):
        return (self.lamps.num.support, self.lamps.k, self.pos)

    @classmethod
    def from_key(cls, key) -> "GElem":
        num, k, pos = key
        return cls(LocalizedLamp(LaurentPolyZ2(num), k), pos)

    def serialize(self) -> str:
        return f"G{{{self.lamps};pos=({self.pos[0]},{self.pos[1]})}}"


@dataclass(frozen=True)
class KElem:
    """Element of K: localized lamps, position (p, q, r).

    Both horizontal directions shift lamps by x, the vertical direction
    scales by (1+x), so a button pressed at (p, q, r) toggles the
    configuration x^(q+r) (1+x)^p.
    """

    lamps: LocalizedLamp = _LOC_ZERO
    pos: tuple[int, int, int] = (0, 0, 0)

    letters = "astu"
    group_name = "K"

    def __mul__(self, other: "KElem") -> "KElem":
        if not isinstance(other, KElem):
            raise GroupMismatchError(f"cannot multiply KElem by {type(other).__name__}")
        p, q, r = other.pos
        return KElem(
            loc_add(loc_scale(self.lamps, q + r, p), other.lamps),
            (self.pos[0] + p, self.pos[1] + q, self.pos[2] + r),
        )

    def inv(self) -> "KElem":
        p, q, r = self.pos
        return KElem(loc_scale(self.lamps, -(q + r), -p), (-p, -q, -r))

    @classmethod
    def identity(cls) -> "KElem":
        return cls()

    @classmethod
    def letter(cls, ch: str) -> "KElem":
        if ch == "a" or ch == "A":
            return cls(_LOC_ONE, (0, 0, 0))
        if ch == "s":
            return cls(_LOC_ZERO, (1, 0, 0))
        if ch == "S":
            return cls(_LOC_ZERO, (-1, 0, 0))
        if ch == "t":
            return cls(_LOC_ZERO, (0, 1, 0))
        if ch == "T":
            return cls(_LOC_ZERO, (0, -1, 0))
        if ch == "u":
            return cls(_LOC_ZERO, (0, 0, 1))
        if ch == "U":
            return cls(_LOC_ZERO, (0, 0, -1))
        raise IllegalLetterError(f"letter {ch!r} not in K")

    @classmethod
    def eval_word(cls, word: str) -> "KElem":
        _check_word(word, cls.letters)
        out = cls.identity()
        for ch in word:
            out = out * cls.letter(ch)
        return out

    def proj_L(self) -> tuple[int, int, int]:
        return self.pos

    def proj_I(self) -> frozenset:
        if not self.lamps.is_polynomial():
            raise NonPolynomialLampsError(f"lamp part {self.lamps} has no lamp set")
        return self.lamps.expand().support

    def key(self):
        return (self.lamps.num.support, self.lamps.k, self.pos)

    @classmethod
    def from_key(cls, key) -> "KElem":
        num, k, pos = key
        return cls(LocalizedLamp(LaurentPolyZ2(num), k), pos)

    def serialize(self) -> str:
        p, q, r = self.pos
        return f"K{{{self.lamps};pos=({p},{q},{r})}}"


GROUPS = {"Z": ZElem, "LL": LLElem, "H": HElem, "G": GElem, "K": KElem}


def act_on_state(group, letter: str, state):
    """Apply one letter to a lamplighter state of LL or H.

    For H a state is (lamps, (q, r)) and the button toggles lamp q + r;
    for LL it is (lamps, q).  This is the semantics the multiplication
    formulas are derived from, kept separate as an oracle.
    """
    lamps, pos = state
    if group is HElem:
        q, r = pos
        if letter in ("a", "A"):
            return (lamps + LaurentPolyZ2.from_exponents([q + r]), pos)
        if letter == "t":
            return (lamps, (q + 1, r))
        if letter == "T":
            return (lamps, (q - 1, r))
        if letter == "u":
            return (lamps, (q, r + 1))
        if letter == "U":
            return (lamps, (q, r - 1))
        raise IllegalLetterError(f"letter {letter!r} not in H")
    if group is LLElem:
        if letter in ("a", "A"):
            return (lamps + LaurentPolyZ2.from_exponents([pos]), pos)
        if letter == "t":
            return (lamps, pos + 1)
        if letter == "T":
            return (lamps, pos - 1)
        raise IllegalLetterError(f"letter {letter!r} not in LL")
    raise GroupMismatchError("act_on_state is defined for H and LL only")


def eval_word_by_action(group, word: str):
    """Fold act_on_state over a word, rightmost letter first."""
    state = (LaurentPolyZ2.zero(), (0, 0) if group is HElem else 0)
    for ch in reversed(word):
        state = act_on_state(group, ch, state)
    return state


def retract_H_to_LL(g: HElem) -> LLElem:
    """Identify the two plane directions of H, landing in the lamplighter."""
    return LLElem(g.lamps, g.pos[0] + g.pos[1])


def retract_K_to_G(g: KElem) -> GElem:
    """Identify the two horizontal directions of K, landing in G."""
    p, q, r = g.pos
    return GElem(g.lamps, (p, q + r))


def special_element(group, n: int):
    """The deep element: lamps {-n, n} lit, lamplighter back at the origin."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    lamps = LaurentPolyZ2.from_exponents([-n, n])
    if group is HElem or group == "H":
        return HElem(lamps, (0, 0))
    if group is KElem or group == "K":
        return KElem(loc_canonicalize(lamps, 0), (0, 0, 0))
    raise GroupMismatchError("special elements live in H or K")


def button_effect(p: int, d: int) -> LaurentPolyZ2:
    """Lamps toggled by one press at height p >= 0 and diagonal coordinate d."""
    if p < 0:
        raise ValueError(f"button_effect needs p >= 0, got {p}")
    return pascal_row(p).shift(d)


def in_Dn(pos: tuple[int, int], n: int) -> bool:
    """Closed diamond |q| + |r| <= n."""
    q, r = pos
    return abs(q) + abs(r) <= n


def in_Hn(pos: tuple[int, int], n: int) -> bool:
    """Closed hexagon with corners (±n,0), (0,±n), (n,-n), (-n,n)."""
    x, y = pos
    return abs(x) <= n and abs(y) <= n and abs(x + y) <= n


def in_Tn(pos: tuple[int, int], n: int) -> bool:
    """Closed triangle with vertices (0,0), (0,-n), (n,-n)."""
    x, y = pos
    return 0 <= x and -n <= y <= 0 and x <= -y


def in_Pn(pos: tuple[int, int, int], n: int) -> bool:
    """Prism region: (p, q+r) in the hexagon and |q| + |r| <= n."""
    p, q, r = pos
    return in_Hn((p, q + r), n) and abs(q) + abs(r) <= n


# Built-in generating sets, one label per word over the base letters.
_C_WORDS = ("a", "t", "u", "at", "ta", "ata", "au", "ua", "aua")
_EXTRA_WORDS = (
    "tu", "atu", "tau", "tua", "atau", "atua", "taua", "ataua",
    "uT", "auT", "taT", "Tat", "ataT", "aTat",
)
_A_WORDS = ("a", "s", "t", "u", "as", "at", "au", "sa", "ta", "ua", "asa", "ata", "aua")
_S_WORDS = ("a", "s", "t", "at", "ta", "ata", "as", "sa", "asa")


class GenSet:
    """A named list of (label, element) generators for one group.

    Inversion closure happens in ``moves``; labels are the defining words
    (or integers for Z) and inverse moves get a ``^-1`` suffix.
    """

    def __init__(self, name: str, group, items: list[tuple[str, object]]):
        seen = set()
        for label, _ in items:
            if label in seen:
                raise ValueError(f"duplicate generator label {label!r}")
            seen.add(label)
        if not items:
            raise ValueError("a generating set needs at least one generator")
        self.name = name
        self.group = group
        self.items = tuple(items)
        self._moves = None

    @classmethod
    def from_words(cls, name: str, group, words) -> "GenSet":
        items = []
        for w in words:
            if not w:
                raise ValueError("generator words must be nonempty")
            items.append((w, group.eval_word(w)))
        return cls(name, group, items)

    def moves(self) -> tuple:
        """(label, sign, element) for generators and inverses, duplicates collapsed."""
        if self._moves is None:
            out = []
            seen = {}
            for label, elem in self.items:
                for sign, e in ((1, elem), (-1, elem.inv())):
                    k = e.key()
                    if k in seen:
                        # A self-inverse generator collapsing onto itself is
                        # ordinary closure; only cross-label collisions are odd.
                        if seen[k][0] != label:
                            warnings.warn(
                                f"{label}^{sign} duplicates {seen[k][0]}^{seen[k][1]}"
                                f" in {self.name}; collapsed",
                                stacklevel=2,
                            )
                        continue
                    seen[k] = (label, sign)
                    out.append((label, sign, e))
            self._moves = tuple(out)
        return self._moves

    def move_label(self, label: str, sign: int) -> str:
        return label if sign == 1 else f"{label}^-1"

    def cache_token(self) -> str:
        return f"{self.group.group_name}-{self.name}-" + ",".join(l for l, _ in self.items)

    def __repr__(self) -> str:
        return f"GenSet({self.name!r}, {self.group.group_name}, {len(self.items)} gens)"


def builtin_genset(name: str) -> GenSet:
    """Look up a generating set by its public name.

    Names: ``A``, ``B`` (for K), ``C``, ``D`` (for H), ``S`` (for G),
    ``LL-std``, and ``Z:{m,n}`` with integer generators.
    """
    if name == "C":
        return GenSet.from_words("C", HElem, _C_WORDS)
    if name == "D":
        return GenSet.from_words("D", HElem, _C_WORDS + _EXTRA_WORDS)
    if name == "A":
        return GenSet.from_words("A", KElem, _A_WORDS)
    if name == "B":
        return GenSet.from_words("B", KElem, _A_WORDS + _EXTRA_WORDS)
    if name == "S":
        return GenSet.from_words("S", GElem, _S_WORDS)
    if name == "LL-std":
        return GenSet.from_words("LL-std", LLElem, ("a", "t"))
    if name.startswith("Z:{") and name.endswith("}"):
        gens = [int(part) for part in name[3:-1].split(",")]
        items = [(str(g), ZElem(g)) for g in gens]
        return GenSet(name, ZElem, items)
    raise KeyError(f"unknown generating set {name!r}")


def genset_from_json(path: str) -> GenSet:
    """Load a custom generating set: {"name", "group", "generators": [words]}."""
    with open(path) as fh:
        data = json.load(fh)
    group = GROUPS[data["group"]]
    gens = data["generators"]
    if group is ZElem:
        items = [(str(g), ZElem(int(g))) for g in gens]
        return GenSet(data.get("name", "custom"), ZElem, items)
    return GenSet.from_words(data.get("name", "custom"), group, gens)
