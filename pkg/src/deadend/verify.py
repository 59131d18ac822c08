"""Named verification suites over the group models and the metric engine.

Each suite checks one cluster of claims at desk scale and returns a
report dict: suite id, parameters, one record per claim with the
expected and computed values, and resource statistics.  A claim passes
only when the stated relation holds exactly; there are no tolerances
anywhere, every quantity is an integer.

Reports are deterministic for fixed parameters: randomized suites use a
fixed seed and the engine's tables are a pure function of their inputs
regardless of thread count.  Wall time lives in a separate resources
field so reports can be compared with timing stripped.
"""

from __future__ import annotations

import random
import time

from . import paths
from .groups import (
    GROUPS,
    GElem,
    HElem,
    KElem,
    LLElem,
    ZElem,
    builtin_genset,
    eval_word_by_action,
    special_element,
    word_inverse,
)
from .metric import (
    AtLeast,
    Exact,
    ball,
    depth,
    eval_tokens,
    geodesic_word,
    verify_region_claim,
)

DEFAULT_SEED = 20240817

SUITES = (
    "relators", "oracles", "Z-depth",
    "H-unbounded", "H-bounded", "K-unbounded", "K-bounded",
    "lemmas-H", "lemmas-K",
)


class _Recorder:
    def __init__(self, suite: str, params: dict):
        self.report = {"suite": suite, "parameters": dict(params), "claims": []}
        self.t0 = time.perf_counter()
        self.expanded = 0
        self.peak = 0

    def claim(self, name: str, expected, computed, ok: bool | None = None) -> bool:
        if ok is None:
            ok = expected == computed
        self.report["claims"].append(
            {"claim": name, "expected": str(expected), "computed": str(computed),
             "pass": bool(ok)})
        return bool(ok)

    def ball(self, group, genset, radius, convention="left", threads=1):
        dm = ball(group, genset, radius, convention, threads=threads)
        self.expanded += len(dm)
        self.peak = max(self.peak, len(dm))
        return dm

    def done(self) -> dict:
        self.report["pass"] = all(c["pass"] for c in self.report["claims"])
        self.report["resources"] = {
            "elements_expanded": self.expanded,
            "peak_elements": self.peak,
            "wall_time_s": round(time.perf_counter() - self.t0, 3),
        }
        return self.report


def _conj(word: str, by: str) -> str:
    return word_inverse(by) + word + by


def _comm(x: str, y: str) -> str:
    return word_inverse(x) + word_inverse(y) + x + y


def run_relators(**_ignored) -> dict:
    """Every defining relator of the four lamp groups is the identity."""
    rec = _Recorder("relators", {})
    suites = {
        "H": (HElem, ["aa", _comm("t", "u"), word_inverse(_conj("a", "u")) + _conj("a", "t")]
              + [_comm("a", _conj("a", "t" * i)) for i in range(1, 11)]
              + [_comm("a", _conj("a", "T" * i)) for i in range(1, 11)]),
        "K": (KElem, ["aa", _comm("a", _conj("a", "t")), _comm("s", "t"), _comm("s", "u"),
                      _comm("t", "u"),
                      word_inverse(_conj("a", "s")) + "a" + _conj("a", "t"),
                      word_inverse(_conj("a", "u")) + _conj("a", "t")]),
        "G": (GElem, ["aa", _comm("a", _conj("a", "t")), _comm("s", "t"),
                      word_inverse(_conj("a", "s")) + "a" + _conj("a", "t")]),
        "LL": (LLElem, ["aa"] + [_comm(_conj("a", "t" * i), "a") for i in range(1, 11)]
               + [_comm(_conj("a", "T" * i), "a") for i in range(1, 11)]),
    }
    for name, (group, relators) in suites.items():
        bad = [w for w in relators if group.eval_word(w) != group.identity()]
        rec.claim(f"all {len(relators)} defining relators of {name} are trivial",
                  "no nontrivial relators", f"nontrivial: {bad}" if bad else "no nontrivial relators")
    return rec.done()


def run_oracles(trials: int = 10_000, max_len: int = 12, seed: int = DEFAULT_SEED,
                **_ignored) -> dict:
    """The H group law reproduces the letter action on states exactly."""
    rec = _Recorder("oracles", {"trials": trials, "max_len": max_len, "seed": seed})
    rng = random.Random(seed)
    letters = "atuATU"
    mismatches = 0
    first_bad = None
    for _ in range(trials):
        w = "".join(rng.choice(letters) for _ in range(rng.randint(0, max_len)))
        g = HElem.eval_word(w)
        lamps, pos = eval_word_by_action(HElem, w)
        if (g.lamps, g.pos) != (lamps, pos):
            mismatches += 1
            first_bad = first_bad or w
    rec.claim(f"group law equals the letter-action fold on {trials} random words",
              "0 mismatches", f"{mismatches} mismatches" + (f", first {first_bad!r}" if first_bad else ""))
    return rec.done()


def _z_dist_exact(z: int, n: int) -> int:
    """Fewest steps writing z = a*n + b*(n+1), by direct minimization."""
    span = abs(z) // n + n + 2
    best = None
    for a in range(-span, span + 1):
        rem = z - a * n
        if rem % (n + 1) == 0:
            cost = abs(a) + abs(rem // (n + 1))
            if best is None or cost < best:
                best = cost
    assert best is not None
    return best


def _z_depth_exact(m: int, n: int) -> int:
    """Depth of m over {n, n+1} by scanning a provably sufficient window."""
    dist_m = _z_dist_exact(m, n)
    window = (dist_m + 3) * (n + 1)
    best = None
    for z in range(m - window, m + window + 1):
        if _z_dist_exact(z, n) > dist_m:
            step = _z_dist_exact(z - m, n)
            if best is None or step < best:
                best = step
    return best


def run_z_depth(n_range: tuple[int, int] = (2, 12), threads: int = 1, **_ignored) -> dict:
    """Depth in the integers grows without bound as the two-generator set varies."""
    rec = _Recorder("Z-depth", {"n_range": list(n_range)})
    dm = rec.ball(ZElem, builtin_genset("Z:{2,3}"), 4, threads=threads)
    rec.claim("depth of 1 over {2,3}", Exact(2), depth(dm, ZElem(1), cap=8))
    for n in range(n_range[0], n_range[1] + 1):
        gs = builtin_genset(f"Z:{{{n},{n + 1}}}")
        m = (n + 1) // 2
        dm = rec.ball(ZElem, gs, n, threads=threads)
        d = dm.distance(ZElem(m))
        rec.claim(f"d(0, {m}) over {{{n},{n + 1}}}", n, d)
        got = depth(dm, ZElem(m), cap=n + 4)
        oracle = _z_depth_exact(m, n)
        rec.claim(f"depth({m}) over {{{n},{n + 1}}} matches the direct oracle",
                  Exact(oracle), got)
        rec.claim(f"depth({m}) over {{{n},{n + 1}}} is at least {n}",
                  f">= {n}", got,
                  ok=isinstance(got, Exact) and got.value >= n or
                     isinstance(got, AtLeast) and got.value >= n)
    return rec.done()


def run_h_unbounded(radius: int | None = None, deep: bool = False, threads: int = 1,
                    **_ignored) -> dict:
    """Deep elements of the plane group over the compact set."""
    n_max = 2 if deep else 1
    radius = radius if radius is not None else (11 if deep else 6)
    rec = _Recorder("H-unbounded", {"radius": radius, "deep": deep, "n_max": n_max})
    dm = rec.ball(HElem, builtin_genset("C"), radius, threads=threads)
    for n in range(1, n_max + 1):
        gn = special_element(HElem, n)
        rec.claim(f"d(1, g{n}) over C", 4 * n, dm.distance(gn))
        got = depth(dm, gn, cap=n + 2)
        rec.claim(f"depth(g{n}) over C is at least {n + 1}", f">= {n + 1}", got,
                  ok=got.value >= n + 1)
    return rec.done()


def run_h_bounded(radius: int = 6, threads: int = 1, **_ignored) -> dict:
    """Over the enriched plane set, only the lamp generator is a dead end."""
    rec = _Recorder("H-bounded", {"radius": radius})
    dm = rec.ball(HElem, builtin_genset("D"), radius, threads=threads)
    a = HElem.letter("a")
    bad = []
    count = 0
    for key in dm.table:
        g = HElem.from_key(key)
        if g == a:
            continue
        count += 1
        got = depth(dm, g, cap=2)
        if got != Exact(1):
            bad.append((g.serialize(), str(got)))
    rec.claim(f"every non-lamp element of the radius-{radius} ball has depth 1",
              f"0 of {count} exceptions", f"{len(bad)} of {count} exceptions"
              + (f", first {bad[0]}" if bad else ""))
    rec.claim("depth of the lamp generator", Exact(2), depth(dm, a, cap=4))
    return rec.done()


def run_k_unbounded(radius: int = 5, witness_n: int = 20, threads: int = 1,
                    **_ignored) -> dict:
    """Deep elements of the space group over the compact set, with witnesses."""
    rec = _Recorder("K-unbounded", {"radius": radius, "witness_n": witness_n})
    gsA = builtin_genset("A")
    bad = []
    for n in range(1, witness_n + 1):
        gn = special_element(KElem, n)
        tokens = paths.witness_K(gn, n)
        if len(tokens) > 4 * n or eval_tokens(gsA, tokens) != gn:
            bad.append(n)
    rec.claim(f"witness words for g1..g{witness_n} have length <= 4n and evaluate back",
              "all good", "all good" if not bad else f"failures at n={bad}")

    dm = rec.ball(KElem, gsA, radius, threads=threads)
    rec.claim("d(1, g1) over A", 4, dm.distance(special_element(KElem, 1)))
    region = verify_region_claim(dm, 1)
    rec.claim("region distance bound at n=1 (p >= 0)", "0 violations",
              f"{len(region['violations'])} violations")
    rec.claim("region bound misses at n=1 below the base plane (known exceptions)",
              2, len(region["negative_p_exceptions"]))
    rec.claim("deep element distance from the region scan", 4,
              region["deep_element_distance"])
    return rec.done()


def run_k_bounded(radius: int | None = None, deep: bool = False, threads: int = 1,
                  **_ignored) -> dict:
    """Over the enriched space set, every non-lamp element escapes in one step."""
    radius = radius if radius is not None else (5 if deep else 4)
    rec = _Recorder("K-bounded", {"radius": radius, "deep": deep})
    dm = rec.ball(KElem, builtin_genset("B"), radius, threads=threads)
    a = KElem.letter("a")
    no_escape = []
    count = 0
    for key in dm.table:
        g = KElem.from_key(key)
        if g == a:
            continue
        count += 1
        try:
            paths.escape_move(g, dm)
        except paths.NoEscapeError:
            no_escape.append(g.serialize())
    rec.claim(f"every non-lamp element of the radius-{radius} ball has a unit escape",
              f"0 of {count} stuck", f"{len(no_escape)} of {count} stuck"
              + (f", first {no_escape[0]}" if no_escape else ""))
    rec.claim("depth of the lamp generator", Exact(2), depth(dm, a, cap=4))

    rng = random.Random(DEFAULT_SEED)
    sample = rng.sample(sorted(dm.table, key=str), min(500, len(dm.table)))
    bad_depth = [KElem.from_key(k).serialize() for k in sample
                 if KElem.from_key(k) != a and depth(dm, KElem.from_key(k), cap=2) != Exact(1)]
    rec.claim("sampled depth computations agree with the escape argument",
              "0 disagreements", f"{len(bad_depth)} disagreements")
    return rec.done()


def _dpath_search_oracle(bound: int) -> dict:
    """Distances over single diagonal steps in (d, c) coordinates, by search."""
    from collections import deque

    dist = {(0, 0): 0}
    queue = deque([(0, 0)])
    limit = 4 * bound + 2
    while queue:
        d, c = queue.popleft()
        base = dist[(d, c)]
        if base >= limit:
            continue
        for nd, nc in ((d + 1, c), (d - 1, c), (d, c + 1), (d, c - 1)):
            if abs(nd) <= limit and abs(nc) <= limit and (nd, nc) not in dist:
                dist[(nd, nc)] = base + 1
                queue.append((nd, nc))
    return dist


def run_lemmas_h(radius: int = 6, gn_analytic: int = 50, deep: bool = False,
                 threads: int = 1, **_ignored) -> dict:
    """Plane-group path machinery: analytic distances and the segment codec."""
    rec = _Recorder("lemmas-H", {"radius": radius, "gn_analytic": gn_analytic, "deep": deep})
    a = HElem.letter("a")

    oracle = _dpath_search_oracle(6)
    bad = [(q, r) for q in range(-6, 7) for r in range(-6, 7)
           if paths.dpath_min_length(q, r) != oracle[(q + r, q - r)]]
    rec.claim("shortest diagonal polyline length matches search for |q|,|r| <= 6",
              "0 mismatches", f"{len(bad)} mismatches")

    gsC, gsD = builtin_genset("C"), builtin_genset("D")
    dmC = rec.ball(HElem, gsC, radius, threads=threads)
    dmD = rec.ball(HElem, gsD, radius, threads=threads)
    for dm, fn, name in ((dmC, paths.d_C_analytic, "C"), (dmD, paths.d_D_analytic, "D")):
        mism = []
        for key, dist in dm.table.items():
            g = HElem.from_key(key)
            if g == a:
                if dist != 1:
                    mism.append((g.serialize(), dist, 1))
                continue
            got = fn(g)
            if got != dist:
                mism.append((g.serialize(), dist, got))
        rec.claim(f"analytic distance over {name} equals search on the whole ball "
                  f"({len(dm)} elements)", "0 mismatches",
                  f"{len(mism)} mismatches" + (f", first {mism[0]}" if mism else ""))

    bad_n = [n for n in range(1, gn_analytic + 1)
             if paths.d_C_analytic(special_element(HElem, n)) != 4 * n]
    rec.claim(f"analytic d(1, gn) = 4n over C for n <= {gn_analytic}",
              "all equal", "all equal" if not bad_n else f"failures at n={bad_n}")
    if deep:
        dm8 = rec.ball(HElem, gsC, 8, threads=threads)
        rec.claim("search d(1, g2) over C", 8, dm8.distance(special_element(HElem, 2)))

    cap = radius - 1
    bad_rt = []
    checked = 0
    for key, dist in dmD.table.items():
        if dist > cap:
            continue
        g = HElem.from_key(key)
        if g == a:
            continue
        checked += 1
        w1 = geodesic_word(dmD, g)
        path = paths.dpath_from_word(w1)
        w2 = paths.word_from_dpath(path)
        ok = (eval_tokens(gsD, w2) == g and len(w2) == len(w1)
              and paths.word_from_dpath(paths.dpath_from_word(w2)) == w2)
        if not ok:
            bad_rt.append(g.serialize())
    rec.claim(f"plane codec round-trips the {checked} search geodesics of length <= {cap}",
              "0 failures", f"{len(bad_rt)} failures"
              + (f", first {bad_rt[0]}" if bad_rt else ""))
    return rec.done()


def run_lemmas_k(radius: int = 4, threads: int = 1, **_ignored) -> dict:
    """Space-group path machinery: the codec and the normal-shape rewrite."""
    rec = _Recorder("lemmas-K", {"radius": radius})
    gsB = builtin_genset("B")
    dm = rec.ball(KElem, gsB, radius, threads=threads)
    bad_rt = []
    bad_norm = []
    for key in dm.table:
        g = KElem.from_key(key)
        w1 = geodesic_word(dm, g)
        path = paths.bpath_from_word(w1)
        w2 = paths.word_from_bpath(path)
        if not (eval_tokens(gsB, w2) == g and len(w2) == len(w1)
                and paths.word_from_bpath(paths.bpath_from_word(w2)) == w2):
            bad_rt.append(g.serialize())
            continue
        norm = paths.normalize_decorated(path)
        if not (norm.element() == g and norm.word_length() == len(w1)
                and norm.is_wordlike()):
            bad_norm.append(g.serialize())
    rec.claim(f"space codec round-trips all {len(dm)} search geodesics of length <= {radius}",
              "0 failures", f"{len(bad_rt)} failures"
              + (f", first {bad_rt[0]}" if bad_rt else ""))
    rec.claim("the normal-shape rewrite preserves element and word length on them",
              "0 failures", f"{len(bad_norm)} failures"
              + (f", first {bad_norm[0]}" if bad_norm else ""))
    return rec.done()


_RUNNERS = {
    "relators": run_relators,
    "oracles": run_oracles,
    "Z-depth": run_z_depth,
    "H-unbounded": run_h_unbounded,
    "H-bounded": run_h_bounded,
    "K-unbounded": run_k_unbounded,
    "K-bounded": run_k_bounded,
    "lemmas-H": run_lemmas_h,
    "lemmas-K": run_lemmas_k,
}


def run_suite(name: str, **params) -> dict:
    """Run one named suite and return its report."""
    if name not in _RUNNERS:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return _RUNNERS[name](**params)
