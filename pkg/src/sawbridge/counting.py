"""Exact enumeration and counting of walks, bridges and irreducible
bridges, plus the counting identities that tie the three together.

Counting is a pruned depth-first search over an occupancy grid; walks are
never materialized on the counting path.  All counts are exact Python
integers.  Enumeration streams walks in the deterministic lexicographic
order induced by the step order +e1, -e1, +e2, -e2, ...

The search is data-parallel: the DFS frontier at a fixed split depth is
partitioned into independent prefix tasks whose results merge by integer
addition, so counts are identical for any worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Iterator, Mapping

from .errors import BudgetExceeded, ConsistencyError, WalkError
from .walks import (
    Bridge,
    GRID_CELL_BUDGET,
    Point,
    SelfAvoidingWalk,
    Walk,
    as_bridge,
    as_saw,
    is_bridge,
    origin,
    step_vectors,
    translate_to_origin,
)

#: Hard ceilings on exact-enumeration length per dimension.  Derived from
#: what a desk machine finishes in minutes; requests beyond them raise.
ENUMERATION_BUDGETS = {2: 15, 3: 9, 4: 7}
DEFAULT_BUDGET = 5

#: DFS depth at which parallel prefix splitting happens.
SPLIT_DEPTH = 3


def budget_for(d: int) -> int:
    return ENUMERATION_BUDGETS.get(d, DEFAULT_BUDGET)


def _check_budget(n: int, d: int) -> None:
    if d < 2:
        raise WalkError(f"dimension must be at least 2, got {d}")
    if n < 0:
        raise WalkError(f"negative length {n}")
    if n > budget_for(d):
        raise BudgetExceeded(
            f"length {n} exceeds the exact-enumeration budget {budget_for(d)} for d={d}"
        )


class _Grid:
    """Occupancy for a DFS rooted at the origin with at most max_n steps.

    Flat bytearray over the [-max_n, max_n]^d box when that fits the cell
    budget, otherwise a set of packed keys.  Only the packed-key interface
    is exposed: position = key, neighbours = key +/- stride.
    """

    __slots__ = ("deltas", "dy", "start", "_occ", "_dense")

    def __init__(self, max_n: int, d: int):
        side = 2 * max_n + 1
        strides = [side**k for k in range(d)]
        self.start = sum(max_n * s for s in strides)
        deltas = []
        dy = []
        for axis in range(d):
            deltas.extend((strides[axis], -strides[axis]))
            dy.extend((1, -1) if axis == 1 else (0, 0))
        self.deltas = tuple(deltas)
        self.dy = tuple(dy)
        cells = side**d
        self._dense = cells <= GRID_CELL_BUDGET
        if self._dense:
            occ = bytearray(cells)
            occ[self.start] = 1
            self._occ = occ
        else:
            self._occ = {self.start}

    def occupied(self, key: int) -> bool:
        if self._dense:
            return bool(self._occ[key])
        return key in self._occ

    def set(self, key: int) -> None:
        if self._dense:
            self._occ[key] = 1
        else:
            self._occ.add(key)

    def clear(self, key: int) -> None:
        if self._dense:
            self._occ[key] = 0
        else:
            self._occ.discard(key)


def _walk_prefixes(depth: int, d: int) -> list[tuple[int, ...]]:
    """All self-avoiding step-index prefixes of the given depth, lex order."""
    out: list[tuple[int, ...]] = []
    grid = _Grid(depth, d)
    n_steps = 2 * d

    def rec(pos: int, path: tuple[int, ...]) -> None:
        if len(path) == depth:
            out.append(path)
            return
        for s in range(n_steps):
            q = pos + grid.deltas[s]
            if not grid.occupied(q):
                grid.set(q)
                rec(q, path + (s,))
                grid.clear(q)

    rec(grid.start, ())
    return out


def _bridge_prefixes(depth: int, d: int) -> list[tuple[int, ...]]:
    """Half-space (y >= 1 after the start) prefixes, lex order."""
    out: list[tuple[int, ...]] = []
    grid = _Grid(depth, d)
    n_steps = 2 * d

    def rec(pos: int, yy: int, path: tuple[int, ...]) -> None:
        if len(path) == depth:
            out.append(path)
            return
        for s in range(n_steps):
            ny = yy + grid.dy[s]
            if ny < 1:
                continue
            q = pos + grid.deltas[s]
            if not grid.occupied(q):
                grid.set(q)
                rec(q, ny, path + (s,))
                grid.clear(q)

    rec(grid.start, 0, ())
    return out


def _saw_counts_from(prefix: tuple[int, ...], max_n: int, d: int) -> list[int]:
    """Counts per depth of self-avoiding extensions of ``prefix``."""
    grid = _Grid(max_n, d)
    pos = grid.start
    for s in prefix:
        pos += grid.deltas[s]
        grid.set(pos)
    counts = [0] * (max_n + 1)
    counts[len(prefix)] = 1
    deltas = grid.deltas
    occupied, set_, clear = grid.occupied, grid.set, grid.clear

    def rec(p: int, depth: int) -> None:
        nxt = depth + 1
        deeper = nxt < max_n
        for dl in deltas:
            q = p + dl
            if not occupied(q):
                counts[nxt] += 1
                if deeper:
                    set_(q)
                    rec(q, nxt)
                    clear(q)

    if len(prefix) < max_n:
        rec(pos, len(prefix))
    return counts


def _bridge_counts_from(
    prefix: tuple[int, ...], max_n: int, d: int
) -> tuple[list[int], list[int]]:
    """Counts per depth of bridges and irreducible bridges extending
    a half-space ``prefix``.

    A node at depth k is a bridge iff its current y equals the running
    maximum; irreducibility is decided by a backward scan over the y path
    (no interior index that is a prefix maximum and a strict suffix
    minimum).
    """
    grid = _Grid(max_n, d)
    pos = grid.start
    ys = [0]
    pmax = [0]
    for s in prefix:
        pos += grid.deltas[s]
        y = ys[-1] + grid.dy[s]
        if y < 1 and len(ys) >= 1:
            raise ConsistencyError("bridge prefix leaves the half-space")
        ys.append(y)
        pmax.append(max(pmax[-1], y))
        grid.set(pos)
    b = [0] * (max_n + 1)
    irr = [0] * (max_n + 1)
    deltas, dys = grid.deltas, grid.dy
    occupied, set_, clear = grid.occupied, grid.set, grid.clear

    def tally(depth: int) -> None:
        if ys[depth] != pmax[depth]:
            return
        b[depth] += 1
        if depth >= 1:
            m = ys[depth]
            for i in range(depth - 1, 0, -1):
                yi = ys[i]
                if yi == pmax[i] and yi < m:
                    return  # interior renewal: reducible
                if yi < m:
                    m = yi
            irr[depth] += 1

    tally(len(prefix))

    def rec(p: int, depth: int) -> None:
        nxt = depth + 1
        deeper = nxt < max_n
        for s in range(len(deltas)):
            ny = ys[depth] + dys[s]
            if ny < 1:
                continue
            q = p + deltas[s]
            if not occupied(q):
                ys.append(ny)
                pmax.append(ny if ny > pmax[depth] else pmax[depth])
                tally(nxt)
                if deeper:
                    set_(q)
                    rec(q, nxt)
                    clear(q)
                ys.pop()
                pmax.pop()

    if len(prefix) < max_n:
        rec(pos, len(prefix))
    return b, irr


def _saw_task(args: tuple[tuple[int, ...], int, int]) -> list[int]:
    prefix, max_n, d = args
    return _saw_counts_from(prefix, max_n, d)


def _bridge_task(args: tuple[tuple[int, ...], int, int]) -> tuple[list[int], list[int]]:
    prefix, max_n, d = args
    return _bridge_counts_from(prefix, max_n, d)


def _merge_vectors(acc: list[int], extra: list[int]) -> None:
    for k, v in enumerate(extra):
        acc[k] += v


def saw_count_series(max_n: int, d: int = 2, workers: int = 1) -> list[int]:
    """Exact [c_0, ..., c_max_n] for self-avoiding walks from the origin."""
    _check_budget(max_n, d)
    if workers <= 1 or max_n <= SPLIT_DEPTH:
        return _saw_counts_from((), max_n, d)
    split = min(SPLIT_DEPTH, max_n)
    prefixes = _walk_prefixes(split, d)
    counts = _saw_counts_from((), split, d)  # depths 0..split counted once
    counts += [0] * (max_n - split)
    tasks = [(p, max_n, d) for p in prefixes]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_saw_task, tasks, chunksize=max(1, len(tasks) // (8 * workers))):
            for k in range(split + 1, max_n + 1):
                counts[k] += part[k]
    return counts


def bridge_count_series(
    max_n: int, d: int = 2, workers: int = 1
) -> tuple[list[int], list[int]]:
    """Exact ([b_0..b_max_n], [i_0..i_max_n]) with i_0 fixed at 0."""
    _check_budget(max_n, d)
    if workers <= 1 or max_n <= SPLIT_DEPTH:
        return _bridge_counts_from((), max_n, d)
    split = min(SPLIT_DEPTH, max_n)
    prefixes = _bridge_prefixes(split, d)
    b, irr = _bridge_counts_from((), split, d)
    b += [0] * (max_n - split)
    irr += [0] * (max_n - split)
    tasks = [(p, max_n, d) for p in prefixes]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for pb, pi in pool.map(_bridge_task, tasks, chunksize=max(1, len(tasks) // (8 * workers))):
            for k in range(split + 1, max_n + 1):
                b[k] += pb[k]
                irr[k] += pi[k]
    return b, irr


def count_saw(n: int, d: int = 2, workers: int = 1) -> int:
    """Exact number of self-avoiding walks of length ``n`` from the origin."""
    return saw_count_series(n, d, workers)[n]


def _iter_step_paths(n: int, d: int, half_space: bool) -> Iterator[tuple[int, ...]]:
    grid = _Grid(n, d)
    n_steps = 2 * d
    path: list[int] = []
    ys = [0]

    def rec(pos: int) -> Iterator[tuple[int, ...]]:
        if len(path) == n:
            yield tuple(path)
            return
        for s in range(n_steps):
            ny = ys[-1] + grid.dy[s]
            if half_space and ny < 1:
                continue
            q = pos + grid.deltas[s]
            if not grid.occupied(q):
                grid.set(q)
                path.append(s)
                ys.append(ny)
                yield from rec(q)
                ys.pop()
                path.pop()
                grid.clear(q)

    yield from rec(grid.start)


def _steps_to_walk(path: tuple[int, ...], d: int) -> Walk:
    vecs = step_vectors(d)
    return Walk.from_steps((vecs[s] for s in path), d)


def enumerate_saw(n: int, d: int = 2) -> Iterator[SelfAvoidingWalk]:
    """Stream all self-avoiding walks of length ``n``, lex order."""
    _check_budget(n, d)
    for path in _iter_step_paths(n, d, half_space=False):
        yield SelfAvoidingWalk(_steps_to_walk(path, d).points)


def enumerate_sab(n: int, d: int = 2) -> Iterator[Bridge]:
    """Stream all bridges of length ``n``, lex order.

    The DFS keeps y >= 1 from the first step on (forcing the unique
    minimum at the start) and filters the terminal-maximum condition at
    full depth.
    """
    _check_budget(n, d)
    if n == 0:
        yield Bridge((origin(d),))
        return
    for path in _iter_step_paths(n, d, half_space=True):
        w = _steps_to_walk(path, d)
        ys = w.y_values()
        if ys[-1] == max(ys):
            yield Bridge(w.points)


def enumerate_isab(n: int, d: int = 2) -> Iterator[Bridge]:
    """Stream all irreducible bridges of length ``n``, lex order."""
    if n < 1:
        raise WalkError("irreducibility needs length >= 1")
    from . import structure  # local import; structure depends on walks only

    for b in enumerate_sab(n, d):
        if structure.is_irreducible(b):
            yield b


@dataclass(frozen=True)
class CountsTable:
    """Per-length exact counts: walks c_n, bridges b_n, irreducible
    bridges i_n (i_0 undefined, stored as None)."""

    d: int
    max_n: int
    c: tuple[int, ...]
    b: tuple[int, ...]
    i: tuple[int | None, ...]

    def validate(self) -> None:
        """Check every structural invariant; raise ConsistencyError if any
        fails (that signals an enumeration bug, not bad input)."""
        n = self.max_n
        if not (len(self.c) == len(self.b) == len(self.i) == n + 1):
            raise ConsistencyError("ragged counts table")
        if self.c[0] != 1 or self.b[0] != 1 or self.i[0] is not None:
            raise ConsistencyError("bad length-zero row")
        for k in range(1, n + 1):
            if self.i[k] is None or self.i[k] < 1:
                raise ConsistencyError(f"i_{k} must be >= 1, got {self.i[k]}")
        for k in range(n + 1):
            if self.b[k] > self.c[k]:
                raise ConsistencyError(f"b_{k} = {self.b[k]} exceeds c_{k} = {self.c[k]}")
        for a in range(n + 1):
            for m in range(n + 1 - a):
                if self.c[a + m] > self.c[a] * self.c[m]:
                    raise ConsistencyError(f"submultiplicativity fails at ({a},{m})")
        for k in range(1, n + 1):
            conv = sum(self.i[j] * self.b[k - j] for j in range(1, k + 1))
            if conv != self.b[k]:
                raise ConsistencyError(f"convolution identity fails at n={k}")

    def to_csv(self) -> str:
        lines = ["n,c,b,i"]
        for k in range(self.max_n + 1):
            i = "" if self.i[k] is None else str(self.i[k])
            lines.append(f"{k},{self.c[k]},{self.b[k]},{i}")
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "d": self.d,
            "max_n": self.max_n,
            "rows": [
                {
                    "n": k,
                    "c": str(self.c[k]),
                    "b": str(self.b[k]),
                    "i": None if self.i[k] is None else str(self.i[k]),
                }
                for k in range(self.max_n + 1)
            ],
        }


def build_counts_table(max_n: int, d: int = 2, workers: int = 1) -> CountsTable:
    """Fill all three count sequences and verify the table's invariants."""
    if max_n < 1:
        raise WalkError("max_n must be at least 1")
    c = saw_count_series(max_n, d, workers)
    b, irr = bridge_count_series(max_n, d, workers)
    table = CountsTable(
        d=d,
        max_n=max_n,
        c=tuple(c),
        b=tuple(b),
        i=(None,) + tuple(irr[1:]),
    )
    table.validate()
    return table


@dataclass(frozen=True)
class KestenAudit:
    """Truncated partial sums S_L of the irreducible-bridge generating
    function evaluated at 1/mu_hat."""

    mu_hat: float
    partial_sums: tuple[float, ...]

    def to_csv(self) -> str:
        lines = ["L,S_L"]
        for idx, s in enumerate(self.partial_sums, start=1):
            lines.append(f"{idx},{s!r}")
        return "\n".join(lines) + "\n"


def kesten_partial_sums(table: CountsTable, mu_hat: float) -> KestenAudit:
    """S_L = sum_{k<=L} i_k * mu_hat^(-k).  For any upper bound mu_hat on
    the connective constant every S_L stays below one."""
    if not mu_hat > 1:
        raise WalkError("mu_hat must exceed 1")
    sums = []
    acc = 0.0
    for k in range(1, table.max_n + 1):
        acc += table.i[k] * mu_hat ** (-k)
        sums.append(acc)
    return KestenAudit(mu_hat=mu_hat, partial_sums=tuple(sums))


def series_identity_check(table: CountsTable, degree: int) -> bool:
    """Coefficient-wise check that B(z) * (1 - I(z)) = 1 up to ``degree``,
    with B, I the truncated generating functions of b and i."""
    if degree > table.max_n:
        raise WalkError("degree exceeds the table range")
    for n in range(degree + 1):
        conv = table.b[n] - sum(
            table.i[k] * table.b[n - k] for k in range(1, n + 1)
        )
        if conv != (1 if n == 0 else 0):
            return False
    return True


def generating_bridge_audit(table: CountsTable, degree: int) -> bool:
    """Coefficient-wise audit of the walk-vs-bridge generating function
    bound: c_n <= [z^(n+1)] exp(2 * sum_{m>=1} b_m z^m).

    Truncation is exact here because the exponential has non-negative
    coefficients and b_m with m > n+1 cannot contribute below z^(n+2).
    """
    if degree > table.max_n:
        raise WalkError("degree exceeds the table range")
    top = degree  # audit c_n for n <= degree - 1, needing degree coefficients
    a = [Fraction(0)] + [Fraction(2 * table.b[m]) for m in range(1, top + 1)]
    e = [Fraction(1)] + [Fraction(0)] * top
    for k in range(1, top + 1):
        e[k] = sum(j * a[j] * e[k - j] for j in range(1, k + 1)) / k
    for n in range(top):
        if table.c[n] > e[n + 1]:
            return False
    return True


@dataclass(frozen=True)
class ConnectiveEstimate:
    n: int
    upper_bound: float  # c_n^(1/n), rigorous upper bound on the growth rate
    ratio: float | None  # c_{n+1} / c_n


def connective_estimates(table: CountsTable) -> tuple[ConnectiveEstimate, ...]:
    """Both standard finite-size estimates of the connective constant."""
    if table.max_n < 2:
        raise WalkError("need max_n >= 2 for connective estimates")
    out = []
    for n in range(1, table.max_n + 1):
        upper = float(table.c[n]) ** (1.0 / n)
        ratio = (
            table.c[n + 1] / table.c[n] if n + 1 <= table.max_n else None
        )
        out.append(ConnectiveEstimate(n=n, upper_bound=upper, ratio=ratio))
    return tuple(out)


def mu_hat_from_table(table: CountsTable) -> float:
    """The rigorous upper bound c_N^(1/N) at the table's largest N."""
    return float(table.c[table.max_n]) ** (1.0 / table.max_n)


def hw_unfold(w: Walk) -> Bridge:
    """Fold an arbitrary self-avoiding walk into a bridge of equal length
    by iterated reflection; the classical walk-to-bridge construction.

    Rules, applied until both bridge conditions hold:

    * if the endpoint misses the maximal y, reflect the suffix after the
      last maximising index across that level;
    * if the minimal y is attained again after the start, reflect the
      prefix up to the last minimising index across the minimal level;
    * a y-flat prefix (which reflections cannot move) is straightened
      into a vertical descent into its junction; in d = 2 this equals a
      quarter turn of the straight run.

    Output is translated to start at the origin.  Bridges are fixed
    points, so the map is idempotent.
    """
    saw = as_saw(w)
    pts = list(translate_to_origin(saw).points)
    guard = 4 * len(pts) + 8
    for _ in range(guard):
        ys = [p[1] for p in pts]
        ymax = max(ys)
        n = len(pts) - 1
        if ys[n] != ymax:
            i = max(k for k, v in enumerate(ys) if v == ymax)
            level = ys[i]
            pts[i + 1 :] = [
                p[:1] + (2 * level - p[1],) + p[2:] for p in pts[i + 1 :]
            ]
            continue
        ymin = min(ys)
        j = max(k for k, v in enumerate(ys) if v == ymin)
        if j == 0:
            out = as_bridge(translate_to_origin(Walk(tuple(pts))))
            return out
        if all(v == ymin for v in ys[:j]):
            # Flat prefix: replace with a straight vertical run into the
            # junction (no reflection can lower a flat run).
            junction = pts[j]
            pts[:j] = [
                junction[:1] + (junction[1] - (j - k),) + junction[2:]
                for k in range(j)
            ]
        else:
            pts[:j] = [p[:1] + (2 * ymin - p[1],) + p[2:] for p in pts[:j]]
    raise ConsistencyError("walk-to-bridge folding failed to terminate")


@dataclass(frozen=True)
class MvmpAudit:
    lhs: int
    rhs: Fraction
    holds: bool
    max_preimage: int
    min_image: int
    codomain_size: int


def mvmp_audit(
    mapping: Mapping[Hashable, frozenset | set],
    codomain_size: int | None = None,
) -> MvmpAudit:
    """Audit the multi-valued map cardinality bound
    |A| <= max_b |f^{-1}(b)| / min_a |f(a)| * |B| on an explicit multimap.

    ``codomain_size`` defaults to the size of the union of the images.
    """
    if not mapping:
        return MvmpAudit(0, Fraction(0), True, 0, 0, 0)
    min_image = min(len(v) for v in mapping.values())
    if min_image == 0:
        raise WalkError("multi-valued map principle requires nonempty images")
    preimages: dict = {}
    for a, image in mapping.items():
        for b in image:
            preimages[b] = preimages.get(b, 0) + 1
    max_pre = max(preimages.values())
    size_b = len(preimages) if codomain_size is None else codomain_size
    if size_b < len(preimages):
        raise WalkError("codomain smaller than the union of the images")
    rhs = Fraction(max_pre, min_image) * size_b
    return MvmpAudit(
        lhs=len(mapping),
        rhs=rhs,
        holds=len(mapping) <= rhs,
        max_preimage=max_pre,
        min_image=min_image,
        codomain_size=size_b,
    )


def binom_ratio_check(n1: int, n2: int, m: int) -> bool:
    """Exact-rational check of C(n1,m)/C(n2,m) >= ((n1-m)/n2)^m
    for n1 >= n2 >= m >= 0."""
    if not (n1 >= n2 >= m >= 0):
        raise WalkError(f"need n1 >= n2 >= m >= 0, got ({n1}, {n2}, {m})")
    if m == 0:
        return True  # both sides equal one
    lhs = Fraction(math.comb(n1, m), math.comb(n2, m))
    rhs = Fraction(n1 - m, n2) ** m
    return lhs >= rhs
