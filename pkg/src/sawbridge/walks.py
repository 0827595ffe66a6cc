"""Lattice points, walks and the bridge hierarchy on Z^d.

Points are bare int tuples.  A walk is an immutable sequence of points
joined by unit steps; ``SelfAvoidingWalk`` and ``Bridge`` refine it by
construction, so holding a value of one of those types is itself the
certificate of the corresponding invariant.  Every transform returns a
fresh walk; nothing here mutates, so values are safe to share across
threads and processes.

Axis 2 (the second coordinate, ``p[1]``) is the distinguished vertical
direction for all bridge-related predicates.  Dimension is a per-walk
runtime value, two or more.

Text format: a walk is a comma-separated list of signed axis tokens,
``"+2,+1,+2"`` meaning steps +e2, +e1, +e2.  The empty string is the
length-zero walk.  Signed axis indices rather than compass letters keep
the format uniform in any dimension.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import (
    DimensionMismatch,
    NotBridge,
    NotSelfAvoiding,
    ParseError,
    WalkError,
)

Point = tuple[int, ...]

#: Dense-grid occupancy is used while the bounding box has at most this
#: many cells; beyond it a hash set takes over.  Semantics identical.
GRID_CELL_BUDGET = 1 << 22

_TOKEN_RE = re.compile(r"^[+-][1-9][0-9]*$")


def origin(d: int) -> Point:
    return (0,) * d


def unit(axis: int, sign: int, d: int) -> Point:
    """Unit step vector along 1-based ``axis`` with the given sign."""
    if not 1 <= axis <= d:
        raise DimensionMismatch(f"axis {axis} out of range for dimension {d}")
    return tuple((sign if k == axis - 1 else 0) for k in range(d))


def step_vectors(d: int) -> tuple[Point, ...]:
    """All 2d unit steps in canonical order: +e1, -e1, +e2, -e2, ...

    This order fixes the deterministic enumeration order used everywhere.
    """
    out = []
    for axis in range(1, d + 1):
        out.append(unit(axis, +1, d))
        out.append(unit(axis, -1, d))
    return tuple(out)


def _add(p: Point, q: Point) -> Point:
    return tuple(a + b for a, b in zip(p, q))


def _sub(p: Point, q: Point) -> Point:
    return tuple(a - b for a, b in zip(p, q))


@dataclass(frozen=True)
class Walk:
    """A nearest-neighbour lattice walk, kept as its full point sequence.

    The length of a walk is its number of edges; a single point is the
    valid length-zero walk.
    """

    points: tuple[Point, ...]

    def __post_init__(self) -> None:
        pts = self.points
        if not isinstance(pts, tuple):
            pts = tuple(tuple(p) for p in pts)
            object.__setattr__(self, "points", pts)
        if len(pts) == 0:
            raise WalkError("a walk has at least one point")
        d = len(pts[0])
        if d < 2:
            raise WalkError(f"dimension must be at least 2, got {d}")
        for a, b in zip(pts, pts[1:]):
            if len(b) != d:
                raise DimensionMismatch("points of mixed dimension in one walk")
            if sum(abs(u - v) for u, v in zip(a, b)) != 1:
                raise WalkError(f"non-unit step {a} -> {b}")

    @property
    def d(self) -> int:
        return len(self.points[0])

    @property
    def length(self) -> int:
        return len(self.points) - 1

    @property
    def start(self) -> Point:
        return self.points[0]

    @property
    def end(self) -> Point:
        return self.points[-1]

    def steps(self) -> Iterator[Point]:
        for a, b in zip(self.points, self.points[1:]):
            yield _sub(b, a)

    def y_values(self) -> list[int]:
        return [p[1] for p in self.points]

    def segment(self, i: int, j: int) -> "Walk":
        """The sub-walk on indices [i, j], keeping absolute positions."""
        if not 0 <= i <= j <= self.length:
            raise WalkError(f"bad segment [{i},{j}] of a length-{self.length} walk")
        return Walk(self.points[i : j + 1])

    @classmethod
    def from_steps(cls, steps: Iterable[Point], d: int, start: Point | None = None):
        p = origin(d) if start is None else tuple(start)
        pts = [p]
        for s in steps:
            p = _add(p, s)
            pts.append(p)
        return cls(tuple(pts))


@dataclass(frozen=True)
class SelfAvoidingWalk(Walk):
    """A walk whose points are pairwise distinct."""

    def __post_init__(self) -> None:
        super().__post_init__()
        if not _points_distinct(self.points):
            raise NotSelfAvoiding("walk revisits a point")


@dataclass(frozen=True)
class Bridge(SelfAvoidingWalk):
    """A self-avoiding walk whose start uniquely attains the minimal
    y-coordinate and whose end attains (ties allowed) the maximal one.

    The length-zero walk qualifies.
    """

    def __post_init__(self) -> None:
        super().__post_init__()
        if not _bridge_conditions(self.points):
            raise NotBridge("walk fails the bridge conditions")


def _points_distinct(pts: tuple[Point, ...], cell_budget: int = GRID_CELL_BUDGET) -> bool:
    # Grid occupancy while the bounding box is small, hash set otherwise.
    d = len(pts[0])
    lo = [min(p[k] for p in pts) for k in range(d)]
    hi = [max(p[k] for p in pts) for k in range(d)]
    cells = 1
    for a, b in zip(lo, hi):
        cells *= b - a + 1
        if cells > cell_budget:
            return len(set(pts)) == len(pts)
    strides = [1] * d
    for k in range(1, d):
        strides[k] = strides[k - 1] * (hi[k - 1] - lo[k - 1] + 1)
    occ = bytearray(cells)
    for p in pts:
        key = sum((p[k] - lo[k]) * strides[k] for k in range(d))
        if occ[key]:
            return False
        occ[key] = 1
    return True


def _bridge_conditions(pts: tuple[Point, ...]) -> bool:
    if len(pts) == 1:
        return True
    y0 = pts[0][1]
    yn = pts[-1][1]
    rest = [p[1] for p in pts[1:]]
    return y0 < min(rest) and yn == max(y0, max(rest))


def is_self_avoiding(w: Walk) -> bool:
    """True iff all points of ``w`` are pairwise distinct."""
    return _points_distinct(w.points)


def is_bridge(w: Walk) -> bool:
    """True iff the bridge conditions hold (``w`` assumed self-avoiding)."""
    return _bridge_conditions(w.points)


def as_saw(w: Walk) -> SelfAvoidingWalk:
    """Upgrade to ``SelfAvoidingWalk``, validating; raises if it revisits."""
    if isinstance(w, SelfAvoidingWalk):
        return w
    return SelfAvoidingWalk(w.points)


def as_bridge(w: Walk) -> Bridge:
    """Upgrade to ``Bridge``, validating both invariant layers."""
    if isinstance(w, Bridge):
        return w
    return Bridge(w.points)


def concat(a: Walk, b: Walk) -> Walk:
    """Concatenation: ``b`` is translated so its start lands on ``a``'s end.

    The result is a plain ``Walk``; it need not be self-avoiding.
    """
    if a.d != b.d:
        raise DimensionMismatch(f"cannot concatenate d={a.d} with d={b.d}")
    shift = _sub(a.end, b.start)
    return Walk(a.points + tuple(_add(p, shift) for p in b.points[1:]))


def translate(w: Walk, delta: Point) -> Walk:
    if len(delta) != w.d:
        raise DimensionMismatch("translation vector of wrong dimension")
    return type(w)(tuple(_add(p, delta) for p in w.points))


def translate_to_origin(w: Walk) -> Walk:
    if w.start == origin(w.d):
        return w
    return translate(w, _sub(origin(w.d), w.start))


def reverse(w: Walk) -> Walk:
    return Walk(tuple(reversed(w.points)))


def reflect_across_y_level(w: Walk, v: Point) -> Walk:
    """Reflect in the horizontal hyperplane through ``v``: y -> 2*y(v) - y."""
    level = v[1]
    return Walk(
        tuple(p[:1] + (2 * level - p[1],) + p[2:] for p in w.points)
    )


def rotate_quarter_cw(w: Walk, pivot: Point) -> Walk:
    """Clockwise quarter turn in the (x, y)-plane about ``pivot``.

    Coordinates beyond the first two are unchanged, so in d > 2 the map
    acts within each hyperplane of fixed remaining coordinates.
    """
    if len(pivot) != w.d:
        raise DimensionMismatch("pivot of wrong dimension")
    px, py = pivot[0], pivot[1]
    return Walk(
        tuple(
            (px + (p[1] - py), py - (p[0] - px)) + p[2:]
            for p in w.points
        )
    )


def width(w: Walk) -> int:
    """Maximal x-spread: max over i, j of x(p_i) - x(p_j)."""
    xs = [p[0] for p in w.points]
    return max(xs) - min(xs)


def y_extent(w: Walk) -> int:
    """Maximal y-spread (the quarter turn exchanges this with width)."""
    ys = w.y_values()
    return max(ys) - min(ys)


def serialize(w: Walk) -> str:
    """Render as comma-separated signed axis tokens; '' for length zero."""
    tokens = []
    for s in w.steps():
        axis = next(k for k, v in enumerate(s) if v != 0)
        tokens.append(f"{'+' if s[axis] > 0 else '-'}{axis + 1}")
    return ",".join(tokens)


def parse(text: str, d: int = 2) -> Walk:
    """Parse the step format into a walk starting at the origin.

    Rejects malformed tokens and axes outside [1, d].
    """
    if d < 2:
        raise ParseError(f"dimension must be at least 2, got {d}")
    if text == "":
        return Walk((origin(d),))
    steps = []
    for token in text.split(","):
        token = token.strip()
        if not _TOKEN_RE.match(token):
            raise ParseError(f"malformed step token {token!r}")
        axis = int(token[1:])
        if axis > d:
            raise ParseError(f"axis {axis} out of range for dimension {d}")
        steps.append(unit(axis, 1 if token[0] == "+" else -1, d))
    return Walk.from_steps(steps, d)


def walk_to_json_dict(w: Walk) -> dict:
    return {"d": w.d, "steps": serialize(w)}


def walk_from_json_dict(obj: dict) -> Walk:
    try:
        d = int(obj["d"])
        steps = obj["steps"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad walk object: {obj!r}") from exc
    return parse(steps, d)
