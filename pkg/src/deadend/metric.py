"""Exact word metrics and dead-end depth by breadth-first search.

A ``DistMap`` is the exact closed ball of a chosen radius in the Cayley
graph of a plugged-in group: a table from canonical element keys to
distances from the identity.  Neighbors are ``g*x`` (right convention)
or ``x*g`` (left convention) with x running over the generators and
their inverses; the distances from the identity agree either way, but
the convention decides what one *step* from an interior element means,
which is what depth, escapes, and geodesic extraction use.

Depth of g is the distance from g to the nearest element outside the
closed ball of radius d(1, g).  Absence from a radius-R table certifies
distance > R, so searches outward from g are exact, not heuristic.
"""

from __future__ import annotations

import hashlib
import os
import pickle
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .groups import GenSet, GroupMismatchError, NonPolynomialLampsError, in_Pn, special_element

CACHE_FORMAT_VERSION = 1


@dataclass(frozen=True)
class Beyond:
    """Certificate that an element lies outside the tabulated radius."""

    radius: int

    def __str__(self) -> str:
        return f"Beyond({self.radius})"


@dataclass(frozen=True)
class Exact:
    """Depth known exactly."""

    value: int

    def __str__(self) -> str:
        return f"Exact({self.value})"


@dataclass(frozen=True)
class AtLeast:
    """Depth known only to be at least this large (search cap reached)."""

    value: int

    def __str__(self) -> str:
        return f"AtLeast({self.value})"


DepthResult = Exact | AtLeast


class ElementLimitExceeded(RuntimeError):
    """Ball construction hit the element cap; carries the completed partial ball."""

    def __init__(self, message: str, partial: "DistMap"):
        super().__init__(message)
        self.partial = partial


@dataclass
class DistMap:
    """Exact distance table for the closed ball of the given radius."""

    group: type
    genset: GenSet
    radius: int
    convention: str
    table: dict = field(repr=False)

    def distance(self, g) -> int | Beyond:
        d = self.table.get(g.key())
        return Beyond(self.radius) if d is None else d

    def sphere_sizes(self) -> list[int]:
        sizes = [0] * (self.radius + 1)
        for d in self.table.values():
            sizes[d] += 1
        return sizes

    def elements(self):
        for key in self.table:
            yield self.group.from_key(key)

    def __len__(self) -> int:
        return len(self.table)


def _expand_chunk(chunk, moves, convention, table):
    found = {}
    if convention == "right":
        for g in chunk:
            for _, _, m in moves:
                h = g * m
                k = h.key()
                if k not in table and k not in found:
                    found[k] = h
    else:
        for g in chunk:
            for _, _, m in moves:
                h = m * g
                k = h.key()
                if k not in table and k not in found:
                    found[k] = h
    return found


def ball(group, genset: GenSet, radius: int, convention: str = "right", *,
         max_elements: int | None = None, threads: int = 1) -> DistMap:
    """Breadth-first ball of the given radius; deterministic for any thread count.

    Raises ElementLimitExceeded once the table would pass ``max_elements``;
    the exception carries the largest completed ball.
    """
    if radius < 0:
        raise ValueError(f"radius must be >= 0, got {radius}")
    if convention not in ("right", "left"):
        raise ValueError(f"convention must be 'right' or 'left', got {convention!r}")
    if genset.group is not group:
        raise GroupMismatchError(f"generating set {genset.name} is for {genset.group.group_name}")

    moves = genset.moves()
    identity = group.identity()
    table = {identity.key(): 0}
    frontier = [identity]

    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        for layer in range(1, radius + 1):
            if pool is not None and len(frontier) >= 4 * threads:
                size = (len(frontier) + threads - 1) // threads
                chunks = [frontier[i:i + size] for i in range(0, len(frontier), size)]
                results = list(pool.map(
                    lambda c: _expand_chunk(c, moves, convention, table), chunks))
            else:
                results = [_expand_chunk(frontier, moves, convention, table)]

            frontier = []
            for found in results:
                for k, h in found.items():
                    if k not in table:
                        if max_elements is not None and len(table) >= max_elements:
                            partial = DistMap(group, genset, layer - 1, convention,
                                              {kk: d for kk, d in table.items() if d < layer})
                            raise ElementLimitExceeded(
                                f"element cap {max_elements} reached at radius {layer}", partial)
                        table[k] = layer
                        frontier.append(h)
    finally:
        if pool is not None:
            pool.shutdown()
    return DistMap(group, genset, radius, convention, table)


def distance(dm: DistMap, g) -> int | Beyond:
    """Distance from the identity, or a Beyond certificate."""
    return dm.distance(g)


def depth(dm: DistMap, g, cap: int = 32) -> DepthResult:
    """Distance from g to the complement of the ball of radius d(1, g).

    Searches outward layer by layer in the table's convention; an element
    absent from the table or tabulated deeper than d(1, g) is an escape.
    """
    n = dm.table.get(g.key())
    if n is None:
        raise ValueError("element lies outside the tabulated ball")
    moves = dm.genset.moves()
    right = dm.convention == "right"
    seen = {g.key()}
    frontier = [g]
    for layer in range(1, cap + 1):
        nxt = []
        for h in frontier:
            for _, _, m in moves:
                x = h * m if right else m * h
                k = x.key()
                if k in seen:
                    continue
                seen.add(k)
                d = dm.table.get(k)
                if d is None or d > n:
                    return Exact(layer)
                nxt.append(x)
        frontier = nxt
        assert frontier, "ball exhausted without an escape; table inconsistent"
    return AtLeast(cap + 1)


def geodesic_word(dm: DistMap, g) -> list[tuple[str, int]]:
    """A word of length d(1, g) for g, as (label, sign) tokens.

    Descends the distance table; ties break by generator order, so the
    result is deterministic.  Token order multiplies out left to right.
    """
    d = dm.table.get(g.key())
    if d is None:
        raise ValueError("element lies outside the tabulated ball")
    moves = dm.genset.moves()
    right = dm.convention == "right"
    tokens = []
    cur = g
    while d > 0:
        for label, sign, m in moves:
            prev = cur * m.inv() if right else m.inv() * cur
            if dm.table.get(prev.key()) == d - 1:
                tokens.append((label, sign))
                cur = prev
                d -= 1
                break
        else:
            raise AssertionError("no descent step found; table inconsistent")
    if right:
        tokens.reverse()
    return tokens


def eval_tokens(genset: GenSet, tokens) -> object:
    """Multiply out (label, sign) tokens over a generating set."""
    elems = {label: e for label, e in genset.items}
    out = genset.group.identity()
    for label, sign in tokens:
        e = elems[label]
        out = out * (e if sign == 1 else e.inv())
    return out


def tokens_to_word(tokens) -> str:
    """Flatten (label, sign) tokens into a plain letter word."""
    from .groups import word_inverse

    return "".join(label if sign == 1 else word_inverse(label) for label, sign in tokens)


def verify_region_claim(dm: DistMap, n: int) -> dict:
    """Scan a (K, A) ball for the distance bound on the prism region.

    The checked claim: every tabulated element with a genuine lamp set
    contained in {-n..n}, position inside the prism, and p >= 0 lies
    within 4n of the identity, and the deep element sits at distance
    exactly 4n.  Qualifying elements at p < 0 that exceed the bound are
    not counted as failures; the bound is only established for p >= 0,
    and such elements do exist (the scan reports them).  Elements whose
    lamp part is a proper fraction are counted and skipped.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    report = {"n": n, "radius": dm.radius, "checked": 0, "skipped_nonpolynomial": 0,
              "violations": [], "negative_p_exceptions": [],
              "deep_element_distance": None, "pass": True}
    if n == 0:
        return report
    if dm.radius < 4 * n:
        raise ValueError(f"need radius >= {4 * n}, have {dm.radius}")
    window = set(range(-n, n + 1))
    for key, dist in dm.table.items():
        g = dm.group.from_key(key)
        try:
            lampset = g.proj_I()
        except NonPolynomialLampsError:
            report["skipped_nonpolynomial"] += 1
            continue
        if in_Pn(g.pos, n) and lampset <= window:
            report["checked"] += 1
            if dist > 4 * n:
                record = {"element": g.serialize(), "distance": dist}
                if g.pos[0] >= 0:
                    report["violations"].append(record)
                else:
                    report["negative_p_exceptions"].append(record)
    gn = special_element(dm.group, n)
    d = dm.table.get(gn.key())
    report["deep_element_distance"] = d
    report["pass"] = not report["violations"] and d == 4 * n
    return report


def _cache_name(group, genset: GenSet, radius: int, convention: str) -> str:
    token = f"{genset.cache_token()}|R={radius}|{convention}|v{CACHE_FORMAT_VERSION}"
    digest = hashlib.sha256(token.encode()).hexdigest()[:16]
    return f"ball-{group.group_name}-{genset.name}-{radius}-{convention}-{digest}.pkl"


def save_distmap(dm: DistMap, cache_dir: str) -> str:
    os.makedirs(cache_dir, exist_ok=True)
    path = os.path.join(cache_dir, _cache_name(dm.group, dm.genset, dm.radius, dm.convention))
    payload = {
        "format_version": CACHE_FORMAT_VERSION,
        "group": dm.group.group_name,
        "genset_token": dm.genset.cache_token(),
        "radius": dm.radius,
        "convention": dm.convention,
        "table": dm.table,
    }
    with open(path, "wb") as fh:
        pickle.dump(payload, fh, protocol=pickle.HIGHEST_PROTOCOL)
    return path


def load_distmap(group, genset: GenSet, radius: int, convention: str,
                 cache_dir: str) -> DistMap | None:
    path = os.path.join(cache_dir, _cache_name(group, genset, radius, convention))
    if not os.path.exists(path):
        return None
    with open(path, "rb") as fh:
        payload = pickle.load(fh)
    if (payload.get("format_version") != CACHE_FORMAT_VERSION
            or payload.get("genset_token") != genset.cache_token()
            or payload.get("radius") != radius
            or payload.get("convention") != convention):
        return None
    return DistMap(group, genset, radius, convention, payload["table"])


def cached_ball(group, genset: GenSet, radius: int, convention: str = "right", *,
                cache_dir: str | None = None, max_elements: int | None = None,
                threads: int = 1) -> DistMap:
    """Build a ball, reusing and refreshing an on-disk cache when given."""
    if cache_dir is not None:
        dm = load_distmap(group, genset, radius, convention, cache_dir)
        if dm is not None:
            return dm
    dm = ball(group, genset, radius, convention, max_elements=max_elements, threads=threads)
    if cache_dir is not None:
        save_distmap(dm, cache_dir)
    return dm
