"""Structural analysis of a single walk or bridge: renewal points,
irreducible decomposition, diamond points, zigzags, visiting edge-sets
and the level profile.

Everything here is a pure function of an immutable walk.  The shipped
implementations are the O(n) running-extrema scans; the literal
definition-chasing versions live in ``verify`` and are cross-checked
against these exhaustively.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotBridge, NotSelfAvoiding, WalkError
from .walks import (
    Bridge,
    Point,
    SelfAvoidingWalk,
    Walk,
    as_bridge,
    concat,
    is_bridge,
    is_self_avoiding,
    translate_to_origin,
    serialize,
)


def _require_bridge(w: Walk) -> Walk:
    if not isinstance(w, Bridge):
        if not (is_self_avoiding(w) and is_bridge(w)):
            raise NotBridge(f"not a bridge: {serialize(w)!r}")
    return w


def renewal_points(w: Walk) -> tuple[int, ...]:
    """Indices i such that both w[0..i] and w[i..n] are bridges.

    Single O(n) pass: i qualifies iff y_i equals the running prefix
    maximum and every later y exceeds it.  For a bridge, 0 and n always
    qualify.
    """
    _require_bridge(w)
    ys = w.y_values()
    n = len(ys) - 1
    pmax = ys[0]
    result = []
    # strict minimum of the suffix after each index, scanned from the right
    smin = [0] * (n + 1)
    running = ys[n] + 1  # +inf sentinel: condition at i = n is vacuous
    for k in range(n, -1, -1):
        smin[k] = running
        running = min(running, ys[k])
    for i, yi in enumerate(ys):
        if yi > pmax:
            pmax = yi
        if yi == pmax and yi < smin[i]:
            result.append(i)
    return tuple(result)


def is_irreducible(w: Walk) -> bool:
    """A bridge of positive length with no interior renewal index."""
    if w.length < 1:
        raise WalkError("irreducibility is defined for length >= 1")
    return renewal_points(w) == (0, w.length)


@dataclass(frozen=True)
class Decomposition:
    """Ordered irreducible blocks whose concatenation is the input bridge.

    Blocks are translated to start at the origin; block boundaries are
    exactly the renewal indices of the input.
    """

    blocks: tuple[Bridge, ...]

    def reassemble(self) -> Bridge:
        out: Walk = self.blocks[0]
        for block in self.blocks[1:]:
            out = concat(out, block)
        return as_bridge(out)


def decompose(w: Walk) -> Decomposition:
    """Cut a bridge at every interior renewal index."""
    if w.length < 1:
        raise WalkError("cannot decompose a length-zero walk")
    cuts = renewal_points(w)
    blocks = []
    for a, b in zip(cuts, cuts[1:]):
        blocks.append(as_bridge(translate_to_origin(w.segment(a, b))))
    return Decomposition(blocks=tuple(blocks))


def diamond_points(w: Walk) -> tuple[int, ...]:
    """Indices whose past lies in the lower and whose future lies in the
    upper quadrant of the rotated coordinates x+y and y-x.

    Formally i qualifies iff (x+y) and (y-x) are both <= their value at i
    on [0, i] and >= it on [i, n], and no later point shares the (x, y)
    projection of point i.  The projection clause is vacuous in d = 2 by
    self-avoidance; in d >= 3 it rules out vertical-shadow ties, which is
    exactly what keeps every diamond point a renewal point.

    Defined for any self-avoiding walk; only coordinates 1 and 2 enter.
    """
    if not isinstance(w, SelfAvoidingWalk) and not is_self_avoiding(w):
        raise NotSelfAvoiding("diamond points need a self-avoiding walk")
    pts = w.points
    n = len(pts) - 1
    u = [p[0] + p[1] for p in pts]
    v = [p[1] - p[0] for p in pts]
    out = []
    pu = pv = None
    su = [0] * (n + 1)
    sv = [0] * (n + 1)
    ru, rv = u[n], v[n]
    for k in range(n, -1, -1):
        ru, rv = min(ru, u[k]), min(rv, v[k])
        su[k], sv[k] = ru, rv
    last_xy: dict[tuple[int, int], int] = {}
    for k, p in enumerate(pts):
        last_xy[(p[0], p[1])] = k
    for i in range(n + 1):
        pu = u[i] if pu is None else max(pu, u[i])
        pv = v[i] if pv is None else max(pv, v[i])
        if (
            u[i] == pu == su[i]
            and v[i] == pv == sv[i]
            and last_xy[(pts[i][0], pts[i][1])] == i
        ):
            out.append(i)
    return tuple(out)


def zigzags(w: Walk) -> tuple[tuple[int, int], ...]:
    """All index pairs (i, j), i <= j, such that i is the last maximiser
    of y over [1, j] and j is the last minimiser of y over [i, n].

    Scans each candidate j and keeps the pairs where the two extremal
    picks close into a fixed point.  Pairs with j = 0 cannot arise (the
    first window is [1, j]).
    """
    _require_bridge(w)
    ys = w.y_values()
    n = len(ys) - 1
    if n < 1:
        return ()
    # last_min[i] = largest index attaining the minimum of y over [i, n]
    last_min = [0] * (n + 1)
    last_min[n] = n
    for i in range(n - 1, -1, -1):
        # ties go to the later index: "the largest of the values k"
        last_min[i] = i if ys[i] < ys[last_min[i + 1]] else last_min[i + 1]
    out = []
    best_i = 1
    for j in range(1, n + 1):
        if ys[j] >= ys[best_i]:
            best_i = j
        if last_min[best_i] == j:
            out.append((best_i, j))
    return tuple(out)


def visiting_edge_set(w: Walk, h: int) -> frozenset[tuple[Point, Point]]:
    """The walk's north-south edges with endpoint heights {h, h+1},
    each stored lower-endpoint first."""
    edges = []
    for a, b in zip(w.points, w.points[1:]):
        ya, yb = a[1], b[1]
        if ya == yb:
            continue
        lo, hi_pt = (a, b) if ya < yb else (b, a)
        if lo[1] == h:
            edges.append((lo, hi_pt))
    return frozenset(edges)


def level_profile(w: Walk) -> dict[int, int]:
    """Map h -> number of crossings of the slab between heights h and h+1."""
    profile: dict[int, int] = {}
    for a, b in zip(w.points, w.points[1:]):
        ya, yb = a[1], b[1]
        if ya == yb:
            continue
        h = min(ya, yb)
        profile[h] = profile.get(h, 0) + 1
    return profile


def level_class(w: Walk, m: int) -> int:
    """Number of heights h crossed at least once and at most m times."""
    if m < 1:
        raise WalkError("m must be at least 1")
    return sum(1 for count in level_profile(w).values() if count <= m)


@dataclass(frozen=True)
class StructureReport:
    """Joint structural summary of one walk.

    ``renewal`` and ``zigzag`` data only exist for bridges and are None
    otherwise; diamond points and the level profile apply to any
    self-avoiding walk.
    """

    is_bridge: bool
    diamond: tuple[int, ...]
    levels: dict[int, int]
    renewal: tuple[int, ...] | None = None
    zigzag_pairs: tuple[tuple[int, int], ...] | None = None

    def to_json_dict(self) -> dict:
        out: dict = {
            "is_bridge": self.is_bridge,
            "diamond": list(self.diamond),
            "levels": {str(h): c for h, c in sorted(self.levels.items())},
        }
        if self.renewal is not None:
            out["renewal"] = list(self.renewal)
        if self.zigzag_pairs is not None:
            out["zigzags"] = [list(z) for z in self.zigzag_pairs]
        return out


def analyze(w: Walk) -> StructureReport:
    """Full structural report; input must be self-avoiding."""
    saw = w if isinstance(w, SelfAvoidingWalk) else None
    if saw is None:
        if not is_self_avoiding(w):
            raise NotSelfAvoiding("structure analysis needs a self-avoiding walk")
        saw = SelfAvoidingWalk(w.points)
    bridge = is_bridge(saw)
    report = StructureReport(
        is_bridge=bridge,
        diamond=diamond_points(saw),
        levels=level_profile(saw),
        renewal=renewal_points(saw) if bridge else None,
        zigzag_pairs=zigzags(saw) if bridge and saw.length >= 1 else None,
    )
    return report
