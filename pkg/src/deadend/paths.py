"""Diagonal-path machinery: codecs, analytic distances, witnesses, escapes.

Words over the enriched generating sets correspond to polylines built
from length-(1/sqrt 2) diagonal segments (and, in K, unit vertical
segments).  Working coordinates are d = q + r (the lamp index under the
current position) and c = q - r (the offset across the mirror plane
q = r); every diagonal segment changes exactly one of (d, c) by one,
verticals change p by one.  A vertex is a lattice point of the group's
grid exactly when d + c is even; paths alternate lattice and half-lattice
vertices along diagonals.

A decorated path carries a set of pressed vertices.  Pressing at a
vertex toggles the lamp through it: lamp d for the planar groups, the
configuration x^d (1+x)^p for K.  Two consecutive diagonal segments,
together with the presses on their three vertices, translate to exactly
one generator of the enriched sets; verticals translate to the
stretching generator with optional presses at either end.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .lamps import (
    Gf2System,
    LaurentPolyZ2,
    LocalizedLamp,
    gf2_solve,
    loc_add,
    loc_canonicalize,
    loc_scale,
    loc_solve,
)
from .groups import (
    GenSet,
    HElem,
    KElem,
    NonPolynomialLampsError,
    button_effect,
    in_Dn,
    in_Pn,
    in_Tn,
    word_inverse,
)


class PathNotWordlikeError(ValueError):
    """A planar segment pair has no generator (dead out-and-back)."""


class NotWordlikeError(ValueError):
    """A decorated path cannot be read as a word (bad verticals or presses)."""


class WitnessSolveError(RuntimeError):
    """The button system along a witness path was unsolvable."""


class NoEscapeError(RuntimeError):
    """No unit move increased the distance from the identity."""


class ReSolveFailedError(RuntimeError):
    """Button reassignment after a geometric rewrite found no solution."""


# ---------------------------------------------------------------------------
# Token tables: family -> {frozenset of toggled lamp offsets: token word}.
# Offsets are relative to the lamp index at the pair's first vertex.

_PLAIN = {
    "t": (1, 1), "u": (1, -1), "T": (-1, -1), "U": (-1, 1),
    "tu": (2, 0), "UT": (-2, 0), "tU": (0, 2), "uT": (0, -2),
}

_VARIANTS: dict[str, dict[frozenset, str]] = {
    "t": {frozenset(): "t", frozenset({0}): "ta", frozenset({1}): "at",
          frozenset({0, 1}): "ata"},
    "u": {frozenset(): "u", frozenset({0}): "ua", frozenset({1}): "au",
          frozenset({0, 1}): "aua"},
    "T": {frozenset(): "T", frozenset({0}): "Ta", frozenset({-1}): "aT",
          frozenset({0, -1}): "aTa"},
    "U": {frozenset(): "U", frozenset({0}): "Ua", frozenset({-1}): "aU",
          frozenset({0, -1}): "aUa"},
    "tu": {frozenset(): "tu", frozenset({0}): "tua", frozenset({1}): "tau",
           frozenset({2}): "atu", frozenset({0, 1}): "taua",
           frozenset({0, 2}): "atua", frozenset({1, 2}): "atau",
           frozenset({0, 1, 2}): "ataua"},
    "UT": {frozenset(): "UT", frozenset({0}): "UTa", frozenset({-1}): "UaT",
           frozenset({-2}): "aUT", frozenset({0, -1}): "UaTa",
           frozenset({0, -2}): "aUTa", frozenset({-1, -2}): "aUaT",
           frozenset({0, -1, -2}): "aUaTa"},
    "uT": {frozenset(): "uT", frozenset({0}): "auT"},
    "tU": {frozenset(): "tU", frozenset({0}): "tUa"},
    # Out-and-back pairs: the midpoint lamp must be toggled.
    "Tat": {frozenset({1}): "Tat", frozenset({0, 1}): "aTat"},
    "taT": {frozenset({-1}): "taT", frozenset({0, -1}): "ataT"},
    "s": {frozenset(): "s", frozenset({0}): "sa", frozenset({1}): "as",
          frozenset({0, 1}): "asa"},
    "S": {frozenset(): "S", frozenset({0}): "Sa", frozenset({1}): "aS",
          frozenset({0, 1}): "aSa"},
}

# Canonical segments per family, as (dd, dc) pairs; verticals handled apart.
_CANON_SEGS = {
    "t": ((1, 0), (0, 1)), "u": ((1, 0), (0, -1)),
    "T": ((-1, 0), (0, -1)), "U": ((-1, 0), (0, 1)),
    "tu": ((1, 0), (1, 0)), "UT": ((-1, 0), (-1, 0)),
    "tU": ((0, 1), (0, 1)), "uT": ((0, -1), (0, -1)),
    "Tat": ((1, 0), (-1, 0)), "taT": ((-1, 0), (1, 0)),
}

# Canonical press vertex within the pair for each lamp offset.
_CANON_VERTEX = {
    "t": {0: 0, 1: 2}, "u": {0: 0, 1: 2}, "T": {0: 0, -1: 2}, "U": {0: 0, -1: 2},
    "tu": {0: 0, 1: 1, 2: 2}, "UT": {0: 0, -1: 1, -2: 2},
    "tU": {0: 0}, "uT": {0: 2},
    "Tat": {1: 1, 0: 2}, "taT": {-1: 1, 0: 2},
    "s": {0: 0, 1: 1}, "S": {0: 0, 1: 1},
}

# token word -> (family, toggled offsets)
_TOKEN_INFO: dict[str, tuple[str, frozenset]] = {}
for _fam, _table in _VARIANTS.items():
    for _offs, _tok in _table.items():
        _TOKEN_INFO[_tok] = (_fam, _offs)


def _pair_family(seg1: tuple[int, int], seg2: tuple[int, int]) -> str:
    dd, dc = seg1[0] + seg2[0], seg1[1] + seg2[1]
    if (dd, dc) == (0, 0):
        if seg1[0] == 1:
            return "Tat"
        if seg1[0] == -1:
            return "taT"
        raise PathNotWordlikeError("out-and-back across the mirror plane has no generator")
    for fam, disp in _PLAIN.items():
        if (dd, dc) == disp:
            return fam
    raise AssertionError(f"impossible pair {seg1}, {seg2}")


def _token_of(family: str, offsets: frozenset, exc) -> str:
    tok = _VARIANTS[family].get(offsets)
    if tok is None:
        raise exc(f"presses {sorted(offsets)} have no generator in family {family!r}")
    return tok


# ---------------------------------------------------------------------------
# Plane paths for H.


@dataclass(frozen=True)
class DecoratedDPath:
    """Diagonal polyline for the plane groups plus pressed vertices.

    Segments are (dd, dc) with exactly one entry +-1; presses index the
    vertices 0..len(segments).
    """

    start: tuple[int, int] = (0, 0)
    segments: tuple = ()
    presses: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        for seg in self.segments:
            dd, dc = seg
            if (abs(dd), abs(dc)) not in ((1, 0), (0, 1)):
                raise ValueError(f"bad segment {seg}")
        if not isinstance(self.presses, frozenset):
            object.__setattr__(self, "presses", frozenset(self.presses))
        for v in self.presses:
            if not 0 <= v <= len(self.segments):
                raise ValueError(f"press index {v} outside the path")

    def vertices(self) -> list[tuple[int, int]]:
        """(d, c) coordinates of every vertex, start first."""
        x, y = self.start
        d, c = x + y, x - y
        out = [(d, c)]
        for dd, dc in self.segments:
            d += dd
            c += dc
            out.append((d, c))
        return out

    def length(self) -> int:
        return len(self.segments)

    def element(self) -> HElem:
        verts = self.vertices()
        lamps = frozenset()
        for v in self.presses:
            lamps ^= {verts[v][0]}
        d, c = verts[-1]
        if (d + c) % 2:
            raise ValueError("path does not end on a lattice point")
        return HElem(LaurentPolyZ2(lamps), ((d + c) // 2, (d - c) // 2))


def _tokens_in(tokens) -> list[tuple[str, int]]:
    return [(t, 1) if isinstance(t, str) else (t[0], t[1]) for t in tokens]


def _token_word(label: str, sign: int) -> str:
    return label if sign == 1 else word_inverse(label)


def dpath_from_word(tokens) -> DecoratedDPath:
    """Decorated path of a word over the enriched plane generators.

    Tokens are labels or (label, sign) pairs; the path follows the word's
    action, rightmost token first.  The bare lamp generator is rejected:
    it moves nothing and has no segment pair.
    """
    segs: list[tuple[int, int]] = []
    presses: set[int] = set()
    for label, sign in reversed(_tokens_in(tokens)):
        word = _token_word(label, sign)
        info = _TOKEN_INFO.get(word)
        if info is None or word in ("a",):
            raise ValueError(f"token {word!r} is not an enriched plane generator")
        fam, offs = info
        if fam in ("s", "S"):
            raise ValueError(f"token {word!r} is vertical; plane paths have no verticals")
        base = len(segs)
        segs.extend(_CANON_SEGS[fam])
        for off in offs:
            presses.add(base + _CANON_VERTEX[fam][off])
    return DecoratedDPath((0, 0), tuple(segs), frozenset(presses))


def word_from_dpath(path: DecoratedDPath) -> list[tuple[str, int]]:
    """Read a decorated plane path back as a word, rejecting dead pairs.

    Presses at a vertex shared by two pairs belong to the earlier pair.
    Raises PathNotWordlikeError when a pair plus its toggles matches no
    generator (the dead out-and-back across the mirror plane included).
    """
    if len(path.segments) % 2:
        raise PathNotWordlikeError("odd number of segments")
    verts = path.vertices()
    npairs = len(path.segments) // 2
    toggles: list[set[int]] = [set() for _ in range(npairs)]
    for v in sorted(path.presses):
        owner = 0 if v == 0 else (v - 1) // 2
        lamp = verts[v][0]
        toggles[owner] ^= {lamp}
    tokens: list[tuple[str, int]] = []
    for i in range(npairs):
        seg1, seg2 = path.segments[2 * i], path.segments[2 * i + 1]
        fam = _pair_family(seg1, seg2)
        base_lamp = verts[2 * i][0]
        offs = frozenset(l - base_lamp for l in toggles[i])
        tok = _token_of(fam, offs, PathNotWordlikeError)
        tokens.append(_label_of(tok))
    tokens.reverse()
    return tokens


# The listed generators of the enriched sets; every other token word is
# the inverse of one of these.
_POSITIVE = {
    "a", "t", "u", "s",
    "ta", "at", "ata", "ua", "au", "aua", "sa", "as", "asa",
    "tu", "tua", "tau", "atu", "taua", "atua", "atau", "ataua",
    "uT", "auT", "taT", "Tat", "ataT", "aTat",
}

_LABEL_OF: dict[str, tuple[str, int]] = {}
for _tok in _TOKEN_INFO:
    if _tok in _POSITIVE:
        _LABEL_OF[_tok] = (_tok, 1)
    else:
        _winv = word_inverse(_tok)
        assert _winv in _POSITIVE, _tok
        _LABEL_OF[_tok] = (_winv, -1)
_LABEL_OF["a"] = ("a", 1)


def _label_of(token_word: str) -> tuple[str, int]:
    return _LABEL_OF[token_word]


# ---------------------------------------------------------------------------
# Space paths for K.


@dataclass(frozen=True)
class DecoratedBPath:
    """Polyline of diagonal and vertical segments plus pressed vertices.

    Segments are (dp, dd, dc) with exactly one entry +-1.  Paths start at
    the origin; a press at a vertex toggles x^d (1+x)^p.
    """

    segments: tuple = ()
    presses: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        for seg in self.segments:
            if sorted(abs(x) for x in seg) != [0, 0, 1]:
                raise ValueError(f"bad segment {seg}")
        if not isinstance(self.presses, frozenset):
            object.__setattr__(self, "presses", frozenset(self.presses))
        for v in self.presses:
            if not 0 <= v <= len(self.segments):
                raise ValueError(f"press index {v} outside the path")

    def vertices(self) -> list[tuple[int, int, int]]:
        """(p, d, c) coordinates of every vertex."""
        p = d = c = 0
        out = [(0, 0, 0)]
        for dp, dd, dc in self.segments:
            p += dp
            d += dd
            c += dc
            out.append((p, d, c))
        return out

    def counts(self) -> tuple[int, int]:
        """(vertical count, diagonal count)."""
        v = sum(1 for s in self.segments if s[0])
        return v, len(self.segments) - v

    def word_length(self) -> int:
        if not self.segments:
            return 1 if self.presses else 0
        v, dg = self.counts()
        return v + dg // 2

    def is_wordlike(self) -> bool:
        """True when every vertical segment sits over a lattice point."""
        verts = self.vertices()
        return all(
            (verts[i][1] + verts[i][2]) % 2 == 0
            for i, seg in enumerate(self.segments) if seg[0]
        )

    def element(self) -> KElem:
        verts = self.vertices()
        lamps = LocalizedLamp.zero()
        for v in self.presses:
            p, d, _ = verts[v]
            lamps = loc_add(lamps, loc_scale(LocalizedLamp.one(), d, p))
        p, d, c = verts[-1]
        if (d + c) % 2:
            raise ValueError("path does not end on a lattice point")
        return KElem(lamps, (p, (d + c) // 2, (d - c) // 2))


def bpath_from_word(tokens) -> DecoratedBPath:
    """Decorated path of a word over the enriched space generators.

    The bare lamp generator is allowed and becomes a press at the current
    vertex with no segments.
    """
    segs: list[tuple[int, int, int]] = []
    press_lamps: list[tuple[int, int, int]] = []  # (vertex, p, d) pressed
    presses: set[int] = set()
    for label, sign in reversed(_tokens_in(tokens)):
        word = _token_word(label, sign)
        if word == "a":
            v = len(segs)
            if v in presses:
                presses.discard(v)
            else:
                presses.add(v)
            continue
        info = _TOKEN_INFO.get(word)
        if info is None:
            raise ValueError(f"token {word!r} is not an enriched generator")
        fam, offs = info
        base = len(segs)
        if fam == "s":
            segs.append((1, 0, 0))
        elif fam == "S":
            segs.append((-1, 0, 0))
        else:
            segs.extend((0, dd, dc) for dd, dc in _CANON_SEGS[fam])
        for off in offs:
            v = base + _CANON_VERTEX[fam][off]
            if v in presses:
                presses.discard(v)
            else:
                presses.add(v)
    return DecoratedBPath(tuple(segs), frozenset(presses))


def _b_tokenize(segments) -> list[tuple[int, int, str]]:
    """Split into (start index, length, kind) tokens: verticals and pairs.

    Requires word-likeness for the pairing to be meaningful; a diagonal
    followed by a vertical mid-pair means that vertical sits over a
    half-lattice point.
    """
    out = []
    i = 0
    while i < len(segments):
        if segments[i][0]:
            out.append((i, 1, "v"))
            i += 1
        else:
            if i + 1 >= len(segments) or segments[i + 1][0]:
                raise NotWordlikeError("unpaired diagonal segment")
            out.append((i, 2, "d"))
            i += 2
    return out


def word_from_bpath(path: DecoratedBPath) -> list[tuple[str, int]]:
    """Read a word-like decorated space path back as a word.

    Raises NotWordlikeError when a vertical sits over a half-lattice
    point or some pair's toggles match no generator.
    """
    if not path.is_wordlike():
        raise NotWordlikeError("a vertical segment sits over a half-lattice point")
    verts = path.vertices()
    if not path.segments:
        if path.presses:
            return [("a", 1)]
        return []
    tokens_geom = _b_tokenize(path.segments)
    # Assign each press to the token that arrives at its vertex; vertex 0
    # belongs to the first token.
    starts = [t[0] for t in tokens_geom]
    toggles: list[set] = [set() for _ in tokens_geom]
    for v in sorted(path.presses):
        if v == 0:
            owner = 0
        else:
            owner = max(i for i, s in enumerate(starts) if s < v)
        p, d, _ = verts[v]
        toggles[owner] ^= {(p, d)}
    out: list[tuple[str, int]] = []
    for (start, length, kind), tog in zip(tokens_geom, toggles):
        p0, d0, _ = verts[start]
        if kind == "v":
            fam = "s" if path.segments[start][0] == 1 else "S"
            offs = frozenset(p - p0 if fam == "s" else p0 - p for p, _d in tog)
            if any(d != d0 for _p, d in tog):
                raise NotWordlikeError("press off the vertical's lamp")
        else:
            seg1 = path.segments[start][1:]
            seg2 = path.segments[start + 1][1:]
            fam = _pair_family(seg1, seg2)
            if any(p != p0 for p, _d in tog):
                raise NotWordlikeError("press off the pair's level")
            offs = frozenset(d - d0 for _p, d in tog)
        out.append(_label_of(_token_of(fam, offs, NotWordlikeError)))
    out.reverse()
    return out


# ---------------------------------------------------------------------------
# Analytic distances in the plane group.


def dpath_min_length(q: int, r: int) -> int:
    """Shortest diagonal polyline from the origin to (q, r): |q+r| + |q-r|."""
    return abs(q + r) + abs(q - r)


def _cover_cost(lamps, e: int) -> int:
    """Walk cost on the line: start at 0, visit every lamp, stop at e."""
    lo = min(min(lamps, default=0), 0, e)
    hi = max(max(lamps, default=0), 0, e)
    return (hi - lo) + min((hi - e) - lo, hi + (e - lo))


def d_C_analytic(g: HElem) -> int:
    """Word length over the compact plane set: grid tour cost.

    The shortest word is the shortest grid path from the origin that
    visits every lit lamp's diagonal and ends at the element's position;
    each grid step moves both diagonal coordinates by one, independently,
    so the cost is the larger of the lamp-tour cost and |q - r|.
    The lone lamp generator is excluded (its path has length 0).
    """
    if g == HElem.letter("a"):
        raise ValueError("the bare lamp generator is excluded")
    q, r = g.pos
    return max(_cover_cost(g.proj_I(), q + r), abs(q - r))


def d_D_analytic(g: HElem) -> int:
    """Word length over the enriched plane set: half the diagonal tour.

    The shortest diagonal polyline tours the lamps along the mirror line
    and then runs across it, so its length is the lamp-tour cost plus
    |q - r|; a word costs half a polyline.
    """
    if g == HElem.letter("a"):
        raise ValueError("the bare lamp generator is excluded")
    q, r = g.pos
    return (_cover_cost(g.proj_I(), q + r) + abs(q - r)) // 2


# ---------------------------------------------------------------------------
# Witness words.


@dataclass(frozen=True)
class WitnessPath:
    """Axis-aligned unit polyline with button presses at vertices."""

    polyline: tuple
    presses: tuple

    def __post_init__(self):
        for v in self.presses:
            if not 0 <= v < len(self.polyline):
                raise ValueError(f"press index {v} outside the polyline")
            if len(self.polyline[v]) == 3 and self.polyline[v][0] < 0:
                raise ValueError("press below the base plane")


class WitnessPreconditionError(ValueError):
    """The element is outside the region the witness construction covers."""


class UnsupportedNegativePError(WitnessPreconditionError):
    """Witness construction is only built for nonnegative heights."""


def _assemble_tokens(moves: list[str], presses: set[int]) -> list[tuple[str, int]]:
    """Attach presses to moves: each vertex's press rides the arriving move,
    the origin's press rides the first move's start."""
    tokens = []
    for i, letter in enumerate(moves, start=1):
        tok = ("a" if i in presses else "") + letter + ("a" if i == 1 and 0 in presses else "")
        tokens.append(_label_of(tok))
    tokens.reverse()
    return tokens


def _h_vertices(moves: list[str]) -> list[tuple[int, int]]:
    q = r = 0
    out = [(0, 0)]
    for ch in moves:
        if ch == "t":
            q += 1
        elif ch == "T":
            q -= 1
        elif ch == "u":
            r += 1
        else:
            r -= 1
        out.append((q, r))
    return out


def witness_H(g: HElem, n: int) -> list[tuple[str, int]]:
    """A word of length <= 4n over the compact plane set evaluating to g.

    The route runs from the origin to one end of the lamp band, sweeps
    across to the other end, and backtracks to the element's position,
    pressing each lit lamp at its first visit.  Requires the position in
    the closed diamond of radius n and the lamps within [-n, n].
    """
    if n < 1:
        raise WitnessPreconditionError(f"need n >= 1, got {n}")
    if g == HElem.letter("a"):
        raise WitnessPreconditionError("the bare lamp generator is excluded")
    lamps = g.proj_I()
    q, r = g.pos
    if not in_Dn((q, r), n):
        raise WitnessPreconditionError(f"position {g.pos} outside the radius-{n} diamond")
    if not all(-n <= l <= n for l in lamps):
        raise WitnessPreconditionError(f"lamps {sorted(lamps)} outside [-{n}, {n}]")

    e, c = q + r, q - r
    moves: list[str] = []
    if (n + c) % 2 == 0:
        # Band endpoints on the element's own cross line.
        x1, y1 = (n + c) // 2, (n - c) // 2
        x2, y2 = (-n + c) // 2, (-n - c) // 2
        if e >= 0:
            moves += "T" * (-x2) + "U" * (-y2)      # origin to the low end
            moves += "tu" * n                       # sweep low to high
            moves += "TU" * ((n - e) // 2)          # back down to (q, r)
        else:
            moves += "t" * x1 + "u" * y1            # origin to the high end
            moves += "TU" * n                       # sweep high to low
            moves += "tu" * ((e + n) // 2)          # back up to (q, r)
    else:
        # Band endpoints sit off-lattice; run one cross line over and zigzag.
        x1, y1 = (n + c + 1) // 2, (n - c - 1) // 2
        x2, y2 = (-n + c + 1) // 2, (-n - c - 1) // 2
        if e >= 0:
            moves += "T" * (-x2) + "U" * (-y2)
            moves += "ut" * n                       # zigzag up, dipping to c
            zig = "TU" * n
            moves += zig[: n - e]                   # odd length, ends on the dip
        else:
            moves += "t" * x1 + "u" * y1
            moves += "TU" * n                       # zigzag down, dipping to c
            zig = "ut" * n
            moves += zig[: e + n]
    verts = _h_vertices(moves)
    assert verts[-1] == (q, r), "witness route must end at the element"

    presses: set[int] = set()
    for lamp in sorted(lamps):
        for i, (vq, vr) in enumerate(verts):
            if vq + vr == lamp:
                presses.add(i)
                break
        else:
            raise AssertionError(f"route misses lamp {lamp}")
    tokens = _assemble_tokens(moves, presses)
    assert len(tokens) <= 4 * n
    return tokens


def witness_H_path(g: HElem, n: int) -> WitnessPath:
    """The polyline behind witness_H, for reports."""
    tokens = witness_H(g, n)
    moves, presses = _tokens_to_moves(tokens)
    return WitnessPath(tuple(_h_vertices(moves)), tuple(sorted(presses)))


def _tokens_to_moves(tokens) -> tuple[list[str], set[int]]:
    """Flatten witness tokens back into unit moves plus pressed vertices."""
    moves: list[str] = []
    presses: set[int] = set()
    for label, sign in reversed(_tokens_in(tokens)):
        word = _token_word(label, sign)
        for ch in reversed(word):
            if ch == "a":
                presses.add(len(moves))
            else:
                moves.append(ch)
    return moves, presses


def _k_vertices(moves: list[str]) -> list[tuple[int, int, int]]:
    p = q = r = 0
    out = [(0, 0, 0)]
    for ch in moves:
        if ch == "s":
            p += 1
        elif ch == "S":
            p -= 1
        elif ch == "t":
            q += 1
        elif ch == "T":
            q -= 1
        elif ch == "u":
            r += 1
        else:
            r -= 1
        out.append((p, q, r))
    return out


def witness_K(g: KElem, n: int) -> list[tuple[str, int]]:
    """A word of length <= 4n over the compact space set evaluating to g.

    Builds the region-appropriate polyline, collects the button vector at
    every vertex, and solves the GF(2) system for which buttons to press.
    Unsolvability would refute the distance bound and raises loudly.
    Only nonnegative heights are supported.
    """
    if n < 1:
        raise WitnessPreconditionError(f"need n >= 1, got {n}")
    try:
        lamps = g.proj_I()
    except NonPolynomialLampsError as exc:
        raise WitnessPreconditionError(str(exc)) from None
    p, q, r = g.pos
    if p < 0:
        raise UnsupportedNegativePError("witness construction requires p >= 0")
    if not in_Pn(g.pos, n):
        raise WitnessPreconditionError(f"position {g.pos} outside the prism of radius {n}")
    if not all(-n <= l <= n for l in lamps):
        raise WitnessPreconditionError(f"lamps {sorted(lamps)} outside [-{n}, {n}]")

    if lamps <= {0} and g.pos == (0, 0, 0):
        return [("a", 1)] if lamps else []

    e = q + r
    moves: list[str] = []
    if in_Tn((p, e), n):
        moves += "t" * n + "T" * (n - q) + "U" * (n + q) + "u" * (n + q + r) + "s" * p
    elif r >= 0:
        moves += "T" * n + "t" * (n - p) + "s" * p + "u" * r + "t" * (n - r)
        moves += "T" * (n - p - q - r)
    else:
        moves += "T" * n + "t" * (n - p) + "s" * p + "t" * n + "U" * (-r)
        gap = n - p - q
        moves += ("T" * gap) if gap >= 0 else ("t" * (-gap))
    verts = _k_vertices(moves)
    assert verts[-1] == (p, q, r), "witness route must end at the element"
    assert len(moves) <= 4 * n

    columns = tuple(button_effect(vp, vq + vr) for vp, vq, vr in verts)
    target = g.lamps.expand()
    solution = gf2_solve(Gf2System(columns, target))
    if solution is None:
        raise WitnessSolveError(
            f"button system along the witness route for {g.serialize()} is unsolvable")
    return _assemble_tokens(moves, set(solution))


def witness_K_path(g: KElem, n: int) -> WitnessPath:
    """The polyline behind witness_K, for reports."""
    tokens = witness_K(g, n)
    moves, presses = _tokens_to_moves(tokens)
    return WitnessPath(tuple(_k_vertices(moves)), tuple(sorted(presses)))


# ---------------------------------------------------------------------------
# Escape moves.


def escape_move(g, dm) -> tuple[str, int]:
    """A unit move across the mirror plane that increases |g| by one.

    Tries the side that shifts the position q - r away from the plane
    first.  The mover is central, so the same element results on either
    side of g; the table certifies d(1, move * g) = d(1, g) + 1 either by
    value or by absence from the closed ball.
    """
    group = type(g)
    if g == group.letter("a"):
        raise ValueError("the bare lamp generator has no unit escape")
    n = dm.table.get(g.key())
    if n is None:
        raise ValueError("element lies outside the tabulated ball")
    ut1 = group.eval_word("uT")
    pos = g.pos
    c = (pos[-2] - pos[-1])  # q - r in both H and K
    candidates = [(("uT", -1), ut1.inv()), (("uT", 1), ut1)]
    if c < 0:
        candidates.reverse()
    for label, move in candidates:
        h = move * g
        d = dm.table.get(h.key())
        if d is None or d == n + 1:
            return label
    raise NoEscapeError(f"no unit escape from {g.serialize()} at distance {n}")


# ---------------------------------------------------------------------------
# Normalization of decorated space paths.


def _solve_presses(segments, target, limit_vertex: int,
                   verts) -> frozenset | None:
    """Choose presses on vertices[0..limit_vertex] producing the target lamps.

    Out-and-back pairs force their midpoint press (the only generators for
    such pairs carry it); the rest is a subset-XOR problem over the
    remaining vertices, solved deterministically.
    """
    mandatory: set[int] = set()
    idx = 0
    segs = segments
    while idx < len(segs):
        if segs[idx][0]:
            idx += 1
            continue
        if idx + 1 >= len(segs) or segs[idx + 1][0]:
            raise NotWordlikeError("unpaired diagonal segment")
        pair = (segs[idx][1:], segs[idx + 1][1:])
        if pair in (((1, 0), (-1, 0)), ((-1, 0), (1, 0))):
            mandatory.add(idx + 1)
        idx += 2

    base = LocalizedLamp.zero()
    for v in mandatory:
        p, d, _ = verts[v]
        base = loc_add(base, loc_scale(LocalizedLamp.one(), d, p))
    residual = loc_add(target.lamps, base)

    free = [v for v in range(limit_vertex + 1) if v not in mandatory]
    columns = []
    for v in free:
        p, d, _ = verts[v]
        columns.append(loc_scale(LocalizedLamp.one(), d, p))
    solution = loc_solve(columns, residual)
    if solution is None:
        return None
    return frozenset(mandatory | {free[i] for i in solution})


def _drop_dead_pairs(segments):
    """Yield candidate segment tuples with one out-and-back pair removed."""
    idx = 0
    while idx + 1 < len(segments):
        if segments[idx][0]:
            idx += 1
            continue
        pair = (segments[idx][1:], segments[idx + 1][1:])
        if pair in (((1, 0), (-1, 0)), ((-1, 0), (1, 0))):
            yield segments[:idx] + segments[idx + 2:]
        idx += 2


def normalize_decorated(path: DecoratedBPath) -> DecoratedBPath:
    """Rewrite a decorated space path into the word-like normal shape.

    The output represents the same element, never has more verticals or
    more total segments, and decomposes as: a part in the mirror plane,
    at most one cross diagonal, a monotone vertical run, and a monotone
    cross run carrying no presses.  Button presses are re-solved against
    the represented configuration after the geometry settles; the
    rewrites keep every pressed button's effect expressible, so a failed
    re-solve is a bug, not a verdict.

    Height bumps (up, across, down) flatten to one level lower, possibly
    overshooting by half a step so the top row of button effects stays
    expressible.  Dips below both endpoints are kept: a button pressed
    below a level cannot be replicated above it, so such geodesics are
    genuinely non-monotone in height.
    """
    target = path.element()
    v_in, d_in = path.counts()

    # (i) pull every cross diagonal to the end, cancelling backtracking.
    plane = [s for s in path.segments if s[2] == 0]
    cnet = sum(s[2] for s in path.segments)
    tail = [(0, 0, 1 if cnet > 0 else -1)] * abs(cnet)

    guard = 0
    while True:
        guard += 1
        assert guard < 100_000, "normalization failed to settle"
        if _flatten_one_bump(plane, tail, target):
            continue
        if _fix_offplane_run(plane, tail):
            continue
        break

    segments = tuple(plane) + tuple(tail)
    verts = DecoratedBPath(segments, frozenset()).vertices()
    limit = len(plane)  # presses stop at the start of the trailing cross run

    presses = _solve_presses(segments, target, limit, verts)
    trimmed = list(segments)
    while presses is None:
        # A forced midpoint press nobody needs: drop that dead pair and retry.
        for candidate in _drop_dead_pairs(tuple(trimmed)):
            cverts = DecoratedBPath(tuple(candidate), frozenset()).vertices()
            climit = limit - (len(trimmed) - len(candidate))
            cpresses = _solve_presses(tuple(candidate), target, climit, cverts)
            if cpresses is not None:
                trimmed, presses = list(candidate), cpresses
                break
        else:
            raise ReSolveFailedError(
                f"cannot re-press buttons for {target.serialize()} after rewriting")
    out = DecoratedBPath(tuple(trimmed), presses)

    v_out, d_out = out.counts()
    assert v_out <= v_in and v_out + d_out <= v_in + d_in, "rewriting grew the path"
    assert out.element() == target, "rewriting changed the element"
    return out


def _flatten_one_bump(plane: list, tail: list, target) -> bool:
    """Flatten the first up-across-down height bump; True if one was found.

    The replacement runs one level lower and tours the same lamp range,
    overshooting by one when the top row's button effects are needed
    (a press at height p equals two presses at height p-1, one of them
    shifted right).
    """
    for j in range(len(plane)):
        if plane[j][0] != -1:
            continue
        i = max((k for k in range(j) if plane[k][0] == 1), default=None)
        if i is None or any(plane[k][0] or plane[k][2] for k in range(i + 1, j)):
            continue
        d0 = sum(s[1] for s in plane[:i])
        ds = [d0]
        for s in plane[i:j + 1]:
            ds.append(ds[-1] + s[1])
        d1 = ds[-1]
        lo, hi = min(ds), max(ds)
        walk = _cover_walk(d0, d1, lo, hi)
        if not _span_reaches(plane, tail, i, j, walk, target):
            walk = _cover_walk(d0, d1, lo, hi + 1)
        plane[i:j + 1] = [(0, step, 0) for step in walk]
        return True
    return False


def _cover_walk(d0: int, d1: int, lo: int, hi: int) -> list[int]:
    """Steps of the cheaper one-dimensional tour d0 -> d1 visiting [lo, hi]."""

    def steps(path_points):
        out = []
        cur = path_points[0]
        for nxt in path_points[1:]:
            step = 1 if nxt > cur else -1
            out.extend([step] * abs(nxt - cur))
            cur = nxt
        return out

    a = steps([d0, lo, hi, d1])
    b = steps([d0, hi, lo, d1])
    return a if len(a) <= len(b) else b


def _span_reaches(plane, tail, i, j, walk, target) -> bool:
    """Would the flattened geometry still span the target configuration?"""
    candidate = plane[:i] + [(0, step, 0) for step in walk] + plane[j + 1:]
    segments = tuple(candidate) + tuple(tail)
    verts = DecoratedBPath(segments, frozenset()).vertices()
    columns = [loc_scale(LocalizedLamp.one(), d, p) for p, d, _ in verts]
    return loc_solve(columns, target.lamps) is not None


def _fix_offplane_run(plane: list, tail: list) -> bool:
    """Move one vertical run sitting over a half-lattice point; True if moved.

    A run between two diagonals swaps past a neighbouring diagonal; the
    run ending the plane part swaps with the first cross diagonal.
    Either way the run lands over a lattice point.
    """
    d = c = 0
    idx = 0
    while idx < len(plane):
        seg = plane[idx]
        if not seg[0]:
            d += seg[1]
            c += seg[2]
            idx += 1
            continue
        run_start = idx
        while idx < len(plane) and plane[idx][0]:
            idx += 1
        run = plane[run_start:idx]
        if (d + c) % 2 == 0:
            continue
        # The run sits over a half-lattice point; push it across a diagonal.
        # Press effects only transport downward (a press at height p equals
        # two at height p-1), so the diagonal must end up at the run's top:
        # a rising run slides before the previous diagonal, a falling run
        # slides after the next one.
        if sum(s[0] for s in run) >= 0:
            xi0 = plane[run_start - 1]
            plane[run_start - 1:idx] = run + [xi0]
        elif idx < len(plane):
            xi2 = plane[idx]
            plane[run_start:idx + 1] = [xi2] + run
        else:
            assert tail, "path ends off-lattice"
            first = tail.pop(0)
            plane[run_start:idx] = [first] + run
        return True
    return False
