"""Exhaustive small-scale verification: naive definition-chasing oracles
and the lemma suite that checks every structural claim over all bridges
up to a length bound.

The oracles here deliberately re-derive everything from first principles
(quantifier translations, generate-and-filter enumeration, dynamic
programming) so each check pits two independent routes against each
other.  A failing lemma carries its first counterexample, serialized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product

from . import structure as structure_mod
from . import surgery as surgery_mod
from .counting import enumerate_sab, enumerate_saw, hw_unfold
from .errors import WalkError
from .structure import level_class, level_profile, renewal_points
from .walks import (
    Bridge,
    Walk,
    is_bridge,
    is_self_avoiding,
    origin,
    serialize,
    step_vectors,
    translate_to_origin,
)


def naive_count_saw(n: int, d: int = 2) -> int:
    """Generate-and-filter oracle: walk every one of the (2d)^n step
    strings and keep those whose point set has no repeat.  No pruning, no
    sharing with the production enumerator."""
    vecs = step_vectors(d)
    count = 0
    start = origin(d)
    for string in product(vecs, repeat=n):
        p = start
        seen = {p}
        ok = True
        for s in string:
            p = tuple(a + b for a, b in zip(p, s))
            if p in seen:
                ok = False
                break
            seen.add(p)
        if ok:
            count += 1
    return count


def naive_renewal_points(w: Walk) -> tuple[int, ...]:
    """Literal definition: indices whose two sub-walks are both bridges."""
    n = w.length
    return tuple(
        i
        for i in range(n + 1)
        if is_bridge(w.segment(0, i)) and is_bridge(w.segment(i, n))
    )


def naive_diamond_points(w: Walk) -> tuple[int, ...]:
    """Literal quantifier translation of the diamond-point conditions,
    including the no-later-(x,y)-tie clause."""
    pts = w.points
    n = len(pts) - 1
    out = []
    for i in range(n + 1):
        ui = pts[i][0] + pts[i][1]
        vi = pts[i][1] - pts[i][0]
        ok = True
        for j in range(n + 1):
            uj = pts[j][0] + pts[j][1]
            vj = pts[j][1] - pts[j][0]
            if j >= i and (uj < ui or vj < vi):
                ok = False
                break
            if j <= i and (uj > ui or vj > vi):
                ok = False
                break
            if j > i and pts[j][0] == pts[i][0] and pts[j][1] == pts[i][1]:
                ok = False
                break
        if ok:
            out.append(i)
    return tuple(out)


def naive_zigzags(w: Walk) -> tuple[tuple[int, int], ...]:
    """Check every candidate pair directly against the two window
    conditions."""
    ys = w.y_values()
    n = len(ys) - 1
    out = []
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            window = ys[1 : j + 1]
            if max(window) != ys[i]:
                continue
            if max(k for k in range(1, j + 1) if ys[k] == ys[i]) != i:
                continue
            tail = ys[i:]
            if min(tail) != ys[j]:
                continue
            if max(k for k in range(i, n + 1) if ys[k] == ys[j]) != j:
                continue
            out.append((i, j))
    return tuple(out)


def pd_distinct_parts(n: int) -> int:
    """Number of partitions of n into distinct positive parts, by the
    standard 0/1 dynamic program."""
    ways = [0] * (n + 1)
    ways[0] = 1
    for part in range(1, n + 1):
        for total in range(n, part - 1, -1):
            ways[total] += ways[total - part]
    return ways[n]


def hw_preimage_multiplicities(n: int, d: int = 2) -> dict[Bridge, int]:
    """Exhaustive preimage counts of the walk-to-bridge folding over all
    self-avoiding walks of length n."""
    counts: dict[Bridge, int] = {}
    for w in enumerate_saw(n, d):
        b = hw_unfold(w)
        counts[b] = counts.get(b, 0) + 1
    return counts


@dataclass
class LemmaResult:
    name: str
    passed: bool
    checked: int
    counterexample: str | None = None
    note: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  [{self.counterexample}]" if self.counterexample else ""
        note = f" ({self.note})" if self.note else ""
        return f"{status} {self.name}: {self.checked} checks{note}{extra}"


class _Suite:
    def __init__(self) -> None:
        self.results: list[LemmaResult] = []

    def record(self, name: str, failures: list[str], checked: int, note: str = "") -> None:
        self.results.append(
            LemmaResult(
                name=name,
                passed=not failures,
                checked=checked,
                counterexample=failures[0] if failures else None,
                note=note,
            )
        )


def _bridges_by_length(max_n: int, d: int) -> dict[int, list[Bridge]]:
    return {n: list(enumerate_sab(n, d)) for n in range(1, max_n + 1)}


def run_lemma_suite(max_n: int, d: int = 2, commute_max_n: int = 8) -> list[LemmaResult]:
    """Run every exhaustive structural check over all bridges of length
    <= max_n (and all walks where a lemma quantifies over walks)."""
    suite = _Suite()
    bridges = _bridges_by_length(max_n, d)
    tag = lambda b: serialize(b)  # noqa: E731

    # --- oracle agreement -------------------------------------------------
    fails: list[str] = []
    checked = 0
    for group in bridges.values():
        for b in group:
            checked += 1
            if renewal_points(b) != naive_renewal_points(b):
                fails.append(tag(b))
    suite.record("renewal-matches-naive", fails, checked)

    fails, checked = [], 0
    for group in bridges.values():
        for b in group:
            checked += 1
            if structure_mod.diamond_points(b) != naive_diamond_points(b):
                fails.append(tag(b))
    suite.record("diamond-matches-naive", fails, checked)

    fails, checked = [], 0
    for group in bridges.values():
        for b in group:
            checked += 1
            if structure_mod.zigzags(b) != naive_zigzags(b):
                fails.append(tag(b))
    suite.record("zigzag-matches-naive", fails, checked)

    # --- zigzag geometry --------------------------------------------------
    fails, checked = [], 0
    for group in bridges.values():
        for b in group:
            zs = structure_mod.zigzags(b)
            for (i1, j1), (i2, j2) in combinations(zs, 2):
                checked += 1
                s1 = set(b.points[i1 : j1 + 1])
                s2 = set(b.points[i2 : j2 + 1])
                if s1 & s2:
                    fails.append(f"{tag(b)} sections {(i1, j1)}/{(i2, j2)}")
    suite.record("zigzag-sections-disjoint", fails, checked)

    fails, checked = [], 0
    for group in bridges.values():
        for b in group:
            rset = set(renewal_points(b))
            for i, j in structure_mod.zigzags(b):
                if i == j:
                    checked += 1
                    if i not in rset:
                        fails.append(f"{tag(b)} index {i}")
    suite.record("zigzag-diagonal-renewal", fails, checked)

    # --- unfolding --------------------------------------------------------
    fails, checked = [], 0
    for group in bridges.values():
        for b in group:
            zs = structure_mod.zigzags(b)
            for z in zs:
                checked += 1
                try:
                    out = surgery_mod.unfold(b, z)
                except WalkError as exc:
                    fails.append(f"{tag(b)} at {z}: {exc}")
                    continue
                if out.length != b.length or out.end[1] < b.end[1]:
                    fails.append(f"{tag(b)} at {z}")
            if zs:
                checked += 1
                try:
                    out = surgery_mod.unfold_set(b, zs)
                    if out.length != b.length or out.end[1] < b.end[1]:
                        fails.append(f"{tag(b)} full set")
                except WalkError as exc:
                    fails.append(f"{tag(b)} full set: {exc}")
    suite.record("unfold-closure", fails, checked)

    fails, checked = [], 0
    top = min(max_n, commute_max_n)
    for n in range(1, top + 1):
        for b in bridges[n]:
            zs = structure_mod.zigzags(b)
            for z1, z2 in combinations(zs, 2):
                checked += 1
                one = surgery_mod.unfold(surgery_mod.unfold(b, z1), z2)
                two = surgery_mod.unfold(surgery_mod.unfold(b, z2), z1)
                if one != two:
                    fails.append(f"{tag(b)} pair {z1}/{z2}")
    suite.record("unfold-commutes", fails, checked, note=f"pairs up to n={top}")

    fails, checked = [], 0
    for group in bridges.values():
        for b in group:
            for z in structure_mod.zigzags(b):
                checked += 1
                out = surgery_mod.unfold(b, z)
                rset = set(renewal_points(out))
                if z[0] not in rset or z[1] not in rset:
                    fails.append(f"{tag(b)} at {z}")
    suite.record("unfold-creates-renewals", fails, checked)

    fails, checked = [], 0
    for group in bridges.values():
        for b in group:
            for i, j in structure_mod.zigzags(b):
                if i == j:
                    continue
                out = surgery_mod.unfold(b, (i, j))
                before = level_profile(b)
                after = level_profile(out)
                for h in range(b.points[j][1], b.points[i][1]):
                    checked += 1
                    if after.get(h, 0) > before.get(h, 0) - 2:
                        fails.append(f"{tag(b)} at {(i, j)} level {h}")
    suite.record("unfold-drops-crossings", fails, checked)

    # --- diamonds and stickbreak -------------------------------------------
    fails, checked = [], 0
    for group in bridges.values():
        for b in group:
            checked += 1
            rset = set(renewal_points(b))
            if not set(structure_mod.diamond_points(b)).issubset(rset):
                fails.append(tag(b))
    suite.record("diamond-subset-of-renewal", fails, checked)

    fails_sa: list[str] = []
    fails_len: list[str] = []
    fails_rec: list[str] = []
    fails_bound: list[str] = []
    checked = 0
    for group in bridges.values():
        for b in group:
            dlist = structure_mod.diamond_points(b)
            for di, dj in combinations(dlist, 2):
                checked += 1
                try:
                    out = surgery_mod.stickbreak(b, di, dj)
                except WalkError as exc:
                    fails_sa.append(f"{tag(b)} at ({di},{dj}): {exc}")
                    continue
                if out.length != b.length + 2:
                    fails_len.append(f"{tag(b)} at ({di},{dj})")
                back, ri, rj = surgery_mod.stickbreak_reconstruct(out, di, dj + 1)
                if back != b or (ri, rj) != (di, dj):
                    fails_rec.append(f"{tag(b)} at ({di},{dj})")
                if is_bridge(out):
                    inner = [
                        k
                        for k in renewal_points(out)
                        if di < k < dj + 2
                    ]
                    span_width = max(
                        p[0] for p in b.points[di : dj + 1]
                    ) - min(p[0] for p in b.points[di : dj + 1])
                    if len(inner) > 3 * span_width:
                        fails_bound.append(f"{tag(b)} at ({di},{dj})")
    suite.record("stickbreak-self-avoiding", fails_sa, checked)
    suite.record("stickbreak-length", fails_len, checked)
    suite.record("stickbreak-reconstruct", fails_rec, checked)
    suite.record(
        "stickbreak-new-renewals-bound",
        fails_bound,
        checked,
        note="bridge-valued outputs only",
    )

    # --- level sets ---------------------------------------------------------
    fails, checked = [], 0
    for group in bridges.values():
        for b in group:
            profile = level_profile(b)
            ys = b.y_values()
            for h, count in profile.items():
                if count != 1:
                    continue
                checked += 1
                crossing = [
                    k
                    for k in range(b.length)
                    if {ys[k], ys[k + 1]} == {h, h + 1}
                ]
                idx = crossing[0]
                low_index = idx if ys[idx] == h else idx + 1
                if low_index not in renewal_points(b):
                    fails.append(f"{tag(b)} level {h}")
    suite.record("single-crossing-renewal", fails, checked)

    fails, checked = [], 0
    for v_num, v_den in ((1, 2), (1, 3)):
        m = math.ceil(2 * v_den / v_num)
        for n, group in bridges.items():
            for b in group:
                if b.end[1] * v_den < n * v_num:
                    continue
                checked += 1
                if 2 * v_den * level_class(b, m) < v_num * n:
                    fails.append(f"{tag(b)} v={v_num}/{v_den}")
    suite.record("level-class-inclusion", fails, checked, note="v in {1/2, 1/3}")

    # --- decomposition -------------------------------------------------------
    fails, checked = [], 0
    for group in bridges.values():
        for b in group:
            checked += 1
            dec = structure_mod.decompose(b)
            if dec.reassemble() != translate_to_origin(b):
                fails.append(tag(b))
                continue
            if len(dec.blocks) != len(renewal_points(b)) - 1:
                fails.append(tag(b))
                continue
            if not all(structure_mod.is_irreducible(blk) for blk in dec.blocks):
                fails.append(tag(b))
    suite.record("decompose-roundtrip", fails, checked)

    # --- enumeration cross-routes -------------------------------------------
    fails, checked = [], 0
    for n in range(1, max_n + 1):
        checked += 1
        via_filter = sum(1 for w in enumerate_saw(n, d) if is_bridge(w))
        if via_filter != len(bridges[n]):
            fails.append(f"n={n}: {len(bridges[n])} vs {via_filter}")
    suite.record("sab-two-routes", fails, checked)

    fails, checked = [], 0
    for n in range(1, max_n + 1):
        for w in enumerate_saw(n, d):
            checked += 1
            b = hw_unfold(w)
            if b.length != n:
                fails.append(serialize(w))
                continue
            if hw_unfold(b) != b:
                fails.append(serialize(w))
    suite.record("hw-unfold-closure", fails, checked)

    fails, checked = [], 0
    top = min(max_n, commute_max_n)
    for n in range(1, top + 1):
        for b in bridges[n]:
            shorts = surgery_mod.short_zigzags(b, 2)
            for k in range(0, min(2, len(shorts)) + 1):
                checked += 1
                outs = list(surgery_mod.multi_unfold(b, k, 2))
                if len(outs) != math.comb(len(shorts), k):
                    fails.append(f"{tag(b)} k={k}")
                if len(set(outs)) != len(outs):
                    fails.append(f"{tag(b)} k={k} duplicate")
    suite.record("multi-unfold-counts", fails, checked, note=f"up to n={top}")

    return suite.results
