"""Walk-rewriting surgery: zigzag unfolding (single, set-wise and
multi-valued) and the stickbreak rotation between two diamond points.

All operations validate their site arguments by recomputation rather
than trusting the caller; at desk scale the cost is negligible and it
rules out undefined surgeries.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator

from .errors import ConsistencyError, SurgeryError
from .structure import diamond_points, renewal_points, zigzags
from .walks import (
    Bridge,
    SelfAvoidingWalk,
    Walk,
    as_bridge,
    as_saw,
    concat,
    origin,
    reflect_across_y_level,
    rotate_quarter_cw,
    translate,
    unit,
)


def unfold(w: Walk, z: tuple[int, int]) -> Bridge:
    """Reflect the central section of one zigzag across the horizontal
    level of its point of zig: prefix + reflected middle + suffix.

    Output is a bridge of the same length whose endpoint is at least as
    high as the input's.
    """
    b = as_bridge(w)
    i, j = z
    if z not in zigzags(b):
        raise SurgeryError(f"({i},{j}) is not a zigzag of the walk")
    if i == j:
        return b
    prefix = b.segment(0, i)
    middle = reflect_across_y_level(b.segment(i, j), b.points[i])
    suffix = b.segment(j, b.length)
    return as_bridge(concat(concat(prefix, middle), suffix))


def unfold_set(w: Walk, zset: Iterable[tuple[int, int]]) -> Bridge:
    """Unfold several zigzags; the order of application does not matter,
    so the set is processed in sorted order for determinism."""
    b = as_bridge(w)
    zs = sorted(set(zset))
    known = set(zigzags(b))
    for z in zs:
        if z not in known:
            raise SurgeryError(f"{z} is not a zigzag of the walk")
    for z in zs:
        b = unfold(b, z)
    return b


def short_zigzags(w: Walk, max_central: int) -> tuple[tuple[int, int], ...]:
    """Strict zigzags (i < j) whose central section has length at most
    ``max_central``.

    Degenerate pairs (i, i) unfold to the identity, so including them
    would both duplicate multi-unfold outputs and break the subset count;
    they are excluded here.
    """
    return tuple(
        z for z in zigzags(as_bridge(w)) if 1 <= z[1] - z[0] <= max_central
    )


def multi_unfold(w: Walk, k: int, max_central: int) -> Iterator[Bridge]:
    """Yield the unfolding of every size-k subset of the short zigzags.

    The subset-to-output map is injective; that is asserted while
    streaming and a collision raises ``ConsistencyError``.
    """
    b = as_bridge(w)
    if k < 0:
        raise SurgeryError("subset size must be non-negative")
    shorts = short_zigzags(b, max_central)
    if len(shorts) < k:
        raise SurgeryError(
            f"walk has {len(shorts)} short zigzags, needs at least {k}"
        )
    seen: set[Bridge] = set()
    for subset in combinations(shorts, k):
        out = unfold_set(b, subset)
        if out in seen:
            raise ConsistencyError("multi-unfold produced a duplicate output")
        seen.add(out)
        yield out


@dataclass(frozen=True)
class UnfoldRecord:
    """One set-unfolding with its bookkeeping: the zig/zag indices turn
    into renewal indices of the output."""

    input: Bridge
    zigzag_set: tuple[tuple[int, int], ...]
    output: Bridge
    generated_renewals: tuple[int, ...]


def unfold_record(w: Walk, zset: Iterable[tuple[int, int]]) -> UnfoldRecord:
    b = as_bridge(w)
    zs = tuple(sorted(set(zset)))
    out = unfold_set(b, zs)
    if out.length != b.length:
        raise ConsistencyError("unfolding changed the length")
    if out.end[1] < b.end[1]:
        raise ConsistencyError("unfolding lowered the endpoint")
    generated = sorted({idx for z in zs for idx in z})
    return UnfoldRecord(
        input=b,
        zigzag_set=zs,
        output=out,
        generated_renewals=tuple(generated),
    )


def _east_edge(d: int) -> Walk:
    return Walk((origin(d), unit(1, +1, d)))


def stickbreak(w: Walk, i: int, j: int) -> SelfAvoidingWalk:
    """Rotate the span between two diamond indices a quarter turn
    clockwise, buffered by one east edge on each side.

    Output has length |input| + 2 and is self-avoiding; it need not be a
    bridge, so the caller tests bridge-hood when it matters.
    """
    b = as_bridge(w)
    if not i < j:
        raise SurgeryError(f"need i < j, got ({i}, {j})")
    diamonds = set(diamond_points(b))
    if i not in diamonds or j not in diamonds:
        raise SurgeryError(f"({i}, {j}) are not both diamond indices")
    east = _east_edge(b.d)
    prefix = b.segment(0, i)
    middle = rotate_quarter_cw(b.segment(i, j), b.points[i])
    suffix = b.segment(j, b.length)
    out = concat(concat(concat(concat(prefix, east), middle), east), suffix)
    return as_saw(out)


def stickbreak_reconstruct(
    w: Walk, first_east: int, second_east: int
) -> tuple[Bridge, int, int]:
    """Invert ``stickbreak`` given the output walk and the edge indices of
    the two inserted east edges; returns (input bridge, i, j).

    The pair (input, (i, j)) is uniquely determined by this data.
    """
    saw = as_saw(w)
    n_out = saw.length
    if not 0 <= first_east < second_east <= n_out - 1:
        raise SurgeryError("east-edge indices out of order or out of range")
    east = unit(1, +1, saw.d)
    for idx in (first_east, second_east):
        step = tuple(
            b - a for a, b in zip(saw.points[idx], saw.points[idx + 1])
        )
        if step != east:
            raise SurgeryError(f"edge {idx} of the output is not an east edge")
    i = first_east
    j = second_east - 1
    prefix = saw.segment(0, first_east)
    pivot = saw.points[first_east]
    rotated = translate(
        saw.segment(first_east + 1, second_east),
        tuple(-v for v in east),
    )
    # three quarter turns the same way undo one
    middle = rotated
    for _ in range(3):
        middle = rotate_quarter_cw(middle, pivot)
    suffix = saw.segment(second_east + 1, n_out)
    original = concat(concat(prefix, middle), suffix)
    b = as_bridge(original)
    diamonds = set(diamond_points(b))
    if i not in diamonds or j not in diamonds:
        raise SurgeryError("reconstructed indices are not diamond points")
    return b, i, j
