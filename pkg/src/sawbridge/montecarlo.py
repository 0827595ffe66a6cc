"""Sampling from the truncated irreducible-bridge law and derived
measures, with statistics cross-checked against exactly computable
truncated expectations.

The law weights an irreducible bridge gamma of length k by
mu_hat^(-k) / Z_L with Z_L the truncated normaliser; the support is every
irreducible bridge of length at most L.  Replay is deterministic: sample
index i always draws from the Philox substream keyed (seed, i), so
results are bitwise identical for any worker count.  All aggregation
runs over exact integer/rational sufficient statistics and converts to
float once at the end.
"""

from __future__ import annotations

import json
import math
from bisect import bisect_right
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np

from .errors import ConsistencyError, WalkError
from .counting import enumerate_isab
from .structure import diamond_points, renewal_points
from .surgery import stickbreak
from .walks import (
    Bridge,
    Walk,
    is_bridge,
    origin,
    reflect_across_y_level,
    reverse,
    serialize,
    translate_to_origin,
    width,
)

WEIGHT_TOLERANCE = 1e-12


@dataclass(frozen=True)
class TruncatedIsabLaw:
    """Truncated irreducible-bridge law: support, weights, cumulative
    table for O(log) inverse-transform sampling, and the exact truncated
    normaliser and mean length."""

    L: int
    d: int
    mu_hat: float
    blocks: tuple[Bridge, ...]
    weights: tuple[float, ...]
    cumulative: tuple[float, ...]
    partition: float  # Z_L, the truncated normaliser
    exact_mean_length: float

    def sample_index(self, u: float) -> int:
        idx = bisect_right(self.cumulative, u)
        return min(idx, len(self.blocks) - 1)


def build_truncated_law(L: int, mu_hat: float, d: int = 2) -> TruncatedIsabLaw:
    """Materialise every irreducible bridge of length <= L with weight
    proportional to mu_hat^(-length)."""
    if L < 1:
        raise WalkError("truncation length must be at least 1")
    if not mu_hat > 1:
        raise WalkError("mu_hat must exceed 1")
    blocks: list[Bridge] = []
    for k in range(1, L + 1):
        blocks.extend(enumerate_isab(k, d))
    raw = [mu_hat ** (-b.length) for b in blocks]
    z = math.fsum(raw)
    weights = [r / z for r in raw]
    total = math.fsum(weights)
    if abs(total - 1.0) > WEIGHT_TOLERANCE:
        raise ConsistencyError(f"law weights sum to {total!r}, not 1")
    cum = []
    acc = 0.0
    for wgt in weights:
        acc += wgt
        cum.append(acc)
    cum[-1] = 1.0
    mean = math.fsum(b.length * w for b, w in zip(blocks, weights))
    return TruncatedIsabLaw(
        L=L,
        d=d,
        mu_hat=mu_hat,
        blocks=tuple(blocks),
        weights=tuple(weights),
        cumulative=tuple(cum),
        partition=z,
        exact_mean_length=mean,
    )


def substream(seed: int, index: int) -> np.random.Generator:
    """The Philox substream for one sample: a pure function of
    (seed, index), independent of how samples are batched."""
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence(seed, spawn_key=(index,)))
    )


def sample_block(law: TruncatedIsabLaw, rng: np.random.Generator) -> Bridge:
    """Draw one irreducible bridge with the law's weights."""
    return law.blocks[law.sample_index(float(rng.random()))]


def sample_halfspace_walk(
    law: TruncatedIsabLaw, n_blocks: int, rng: np.random.Generator
) -> tuple[Bridge, tuple[int, ...]]:
    """Concatenate ``n_blocks`` independent blocks; returns the walk and
    the cumulative renewal boundary indices r_0..r_{n_blocks}.

    Bridges concatenate to bridges; the constructor re-verifies both
    self-avoidance and the bridge conditions on every sample.
    """
    if n_blocks < 1:
        raise WalkError("need at least one block")
    us = rng.random(n_blocks)
    pts = [origin(law.d)]
    boundaries = [0]
    for u in us:
        block = law.blocks[law.sample_index(float(u))]
        base = pts[-1]
        start = block.points[0]
        pts.extend(
            tuple(b + (q - s) for b, q, s in zip(base, p, start))
            for p in block.points[1:]
        )
        boundaries.append(len(pts) - 1)
    walk = Bridge(tuple(pts))
    return walk, tuple(boundaries)


def pstar_transform(block: Bridge) -> Walk:
    """Drop the block's first (north) edge and translate one unit south,
    so the remainder starts at the origin."""
    if block.length < 1:
        raise WalkError("the empty bridge has no first edge")
    pts = block.points[1:]
    base = pts[0]
    return Walk(tuple(tuple(c - b for c, b in zip(p, base)) for p in pts))


def sample_pstar(law: TruncatedIsabLaw, rng: np.random.Generator) -> Walk:
    """Draw from the truncated first-edge-removed law; the length-one
    block maps to the length-zero walk, which carries weight
    mu_hat^(-1)/Z_L."""
    return pstar_transform(sample_block(law, rng))


def pstar_weight_table(law: TruncatedIsabLaw) -> dict[Walk, float]:
    """Exact weight table of the truncated first-edge-removed law."""
    table: dict[Walk, float] = {}
    for block, wgt in zip(law.blocks, law.weights):
        key = pstar_transform(block)
        if key in table:
            raise ConsistencyError("first-edge removal must be injective")
        table[key] = wgt
    return table


def pstar_reflect(w: Walk) -> Walk:
    """The vertical-flip symmetry of the first-edge-removed law: reflect
    across height zero, traverse backwards, re-anchor at the origin."""
    return translate_to_origin(
        reverse(reflect_across_y_level(w, origin(w.d)))
    )


def pstar_table_is_reflection_invariant(
    law: TruncatedIsabLaw, tolerance: float = WEIGHT_TOLERANCE
) -> bool:
    """Entrywise equality of the weight table with its reflected image."""
    table = pstar_weight_table(law)
    for walk, wgt in table.items():
        image = pstar_reflect(walk)
        other = table.get(image)
        if other is None or abs(other - wgt) > tolerance:
            return False
    return True


@dataclass
class _Accumulator:
    """Exact sufficient statistics; merging is plain addition, so the
    result does not depend on how samples were partitioned."""

    n_samples: int = 0
    n_blocks_total: int = 0
    sum_block_len: int = 0
    sum_block_len_sq: int = 0
    sum_vx: Fraction = field(default_factory=lambda: Fraction(0))
    sum_vx_sq: Fraction = field(default_factory=lambda: Fraction(0))
    sum_vy: Fraction = field(default_factory=lambda: Fraction(0))
    sum_vy_sq: Fraction = field(default_factory=lambda: Fraction(0))
    sum_renewal_density: Fraction = field(default_factory=lambda: Fraction(0))
    sum_diamond_density: Fraction = field(default_factory=lambda: Fraction(0))
    sum_width_over_height: Fraction = field(default_factory=lambda: Fraction(0))

    def merge(self, other: "_Accumulator") -> None:
        self.n_samples += other.n_samples
        self.n_blocks_total += other.n_blocks_total
        self.sum_block_len += other.sum_block_len
        self.sum_block_len_sq += other.sum_block_len_sq
        self.sum_vx += other.sum_vx
        self.sum_vx_sq += other.sum_vx_sq
        self.sum_vy += other.sum_vy
        self.sum_vy_sq += other.sum_vy_sq
        self.sum_renewal_density += other.sum_renewal_density
        self.sum_diamond_density += other.sum_diamond_density
        self.sum_width_over_height += other.sum_width_over_height


def _mean_stderr_int(total: int, total_sq: int, count: int) -> tuple[float, float]:
    mean = Fraction(total, count)
    if count < 2:
        return float(mean), 0.0
    var = (Fraction(total_sq, 1) - count * mean * mean) / (count - 1)
    return float(mean), math.sqrt(float(var) / count)


def _mean_stderr_frac(total: Fraction, total_sq: Fraction, count: int) -> tuple[float, float]:
    mean = total / count
    if count < 2:
        return float(mean), 0.0
    var = (total_sq - count * mean * mean) / (count - 1)
    return float(mean), math.sqrt(max(0.0, float(var)) / count)


def _accumulate_sample(
    acc: _Accumulator,
    law: TruncatedIsabLaw,
    n_blocks: int,
    seed: int,
    index: int,
) -> None:
    rng = substream(seed, index)
    walk, bounds = sample_halfspace_walk(law, n_blocks, rng)
    renewals = renewal_points(walk)
    if not set(bounds).issubset(renewals):
        raise ConsistencyError("block boundaries must be renewal indices")
    diamonds = diamond_points(walk)
    total_len = walk.length
    acc.n_samples += 1
    acc.n_blocks_total += n_blocks
    for a, b in zip(bounds, bounds[1:]):
        length = b - a
        acc.sum_block_len += length
        acc.sum_block_len_sq += length * length
    vx = Fraction(walk.end[0], n_blocks)
    vy = Fraction(walk.end[1], n_blocks)
    acc.sum_vx += vx
    acc.sum_vx_sq += vx * vx
    acc.sum_vy += vy
    acc.sum_vy_sq += vy * vy
    acc.sum_renewal_density += Fraction(len(renewals), total_len + 1)
    acc.sum_diamond_density += Fraction(len(diamonds), total_len + 1)
    acc.sum_width_over_height += Fraction(width(walk), walk.end[1])


def _stats_chunk(args) -> _Accumulator:
    law, n_blocks, seed, start, stop = args
    acc = _Accumulator()
    for index in range(start, stop):
        _accumulate_sample(acc, law, n_blocks, seed, index)
    return acc


@dataclass(frozen=True)
class SampleStats:
    """Monte Carlo aggregates with exact-oracle companions."""

    L: int
    d: int
    mu_hat: float
    seed: int
    n_samples: int
    n_blocks: int
    mean_block_length: float
    stderr_block_length: float
    exact_mean_block_length: float
    velocity_x_mean: float
    velocity_x_stderr: float
    velocity_y_mean: float
    velocity_y_stderr: float
    renewal_density_mean: float
    diamond_density_mean: float
    width_over_height_mean: float

    def to_json(self) -> str:
        return json.dumps(self.__dict__, sort_keys=True)

    def to_csv(self) -> str:
        keys = sorted(self.__dict__)
        head = ",".join(keys)
        row = ",".join(repr(self.__dict__[k]) for k in keys)
        return f"{head}\n{row}\n"


def run_stats(
    law: TruncatedIsabLaw,
    n_blocks: int,
    n_samples: int,
    seed: int,
    workers: int = 1,
) -> SampleStats:
    """Sample, analyse per-sample structure, and aggregate exactly."""
    if n_samples < 1:
        raise WalkError("need at least one sample")
    acc = _Accumulator()
    if workers <= 1:
        for index in range(n_samples):
            _accumulate_sample(acc, law, n_blocks, seed, index)
    else:
        chunk = max(1, n_samples // (workers * 4))
        tasks = [
            (law, n_blocks, seed, start, min(start + chunk, n_samples))
            for start in range(0, n_samples, chunk)
        ]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_stats_chunk, tasks):
                acc.merge(part)
    mean_len, se_len = _mean_stderr_int(
        acc.sum_block_len, acc.sum_block_len_sq, acc.n_blocks_total
    )
    vx_mean, vx_se = _mean_stderr_frac(acc.sum_vx, acc.sum_vx_sq, acc.n_samples)
    vy_mean, vy_se = _mean_stderr_frac(acc.sum_vy, acc.sum_vy_sq, acc.n_samples)
    ren = acc.sum_renewal_density / acc.n_samples
    dia = acc.sum_diamond_density / acc.n_samples
    woh = acc.sum_width_over_height / acc.n_samples
    for density in (ren, dia):
        if not 0 <= density <= 1:
            raise ConsistencyError("density outside [0, 1]")
    return SampleStats(
        L=law.L,
        d=law.d,
        mu_hat=law.mu_hat,
        seed=seed,
        n_samples=acc.n_samples,
        n_blocks=n_blocks,
        mean_block_length=mean_len,
        stderr_block_length=se_len,
        exact_mean_block_length=law.exact_mean_length,
        velocity_x_mean=vx_mean,
        velocity_x_stderr=vx_se,
        velocity_y_mean=vy_mean,
        velocity_y_stderr=vy_se,
        renewal_density_mean=float(ren),
        diamond_density_mean=float(dia),
        width_over_height_mean=float(woh),
    )


@dataclass(frozen=True)
class StickbreakExperimentReport:
    """Bookkeeping of the rotation surgery on sampled walks.

    Ordinal windows are fractions of each sample's diamond count; samples
    without enough diamonds to populate both windows are skipped and
    counted, never silently dropped.
    """

    L: int
    d: int
    mu_hat: float
    seed: int
    n_samples: int
    n_blocks: int
    windows: tuple[float, float, float, float]
    n_processed: int
    n_skipped: int
    n_self_avoiding: int
    n_length_plus_two: int
    n_width_above_input: int
    min_width_margin: int | None  # min over samples of width(out) - diamonds between
    n_bridge_outputs: int
    mean_renewal_change: float | None
    first_failure: str | None

    @property
    def fraction_self_avoiding(self) -> float:
        return self.n_self_avoiding / self.n_processed if self.n_processed else 0.0

    def to_json(self) -> str:
        out = dict(self.__dict__)
        out["windows"] = list(self.windows)
        out["fraction_self_avoiding"] = self.fraction_self_avoiding
        return json.dumps(out, sort_keys=True)


def stickbreak_experiment(
    law: TruncatedIsabLaw,
    n_blocks: int,
    windows: tuple[float, float, float, float],
    n_samples: int,
    seed: int,
) -> StickbreakExperimentReport:
    """For each sampled walk, pick one diamond ordinal from each window,
    apply the rotation surgery and record the bookkeeping: self-avoidance
    (expected to always hold), the +2 length change, the width against
    the count of diamonds between the chosen pair, and the renewal-count
    change when the output happens to be a bridge."""
    f1, f2, f3, f4 = windows
    if not (0 < f1 < f2 < f3 < f4 <= 1):
        raise WalkError("windows must satisfy 0 < f1 < f2 < f3 < f4 <= 1")
    processed = skipped = n_sa = n_len = n_wider = n_bridge = 0
    renewal_change_total = 0
    min_margin: int | None = None
    first_failure: str | None = None
    for index in range(n_samples):
        rng = substream(seed, index)
        walk, _bounds = sample_halfspace_walk(law, n_blocks, rng)
        dlist = diamond_points(walk)
        m = len(dlist)
        lo1, hi1 = max(1, math.ceil(f1 * m)), math.floor(f2 * m)
        lo2, hi2 = math.ceil(f3 * m), math.floor(f4 * m)
        if hi1 < lo1 or hi2 < lo2 or hi1 >= lo2:
            skipped += 1
            continue
        i_ord = int(rng.integers(lo1, hi1 + 1))
        j_ord = int(rng.integers(lo2, hi2 + 1))
        di, dj = dlist[i_ord - 1], dlist[j_ord - 1]
        processed += 1
        try:
            out = stickbreak(walk, di, dj)
        except WalkError as exc:
            if first_failure is None:
                first_failure = f"{serialize(walk)} at ({di},{dj}): {exc}"
            continue
        n_sa += 1
        if out.length == walk.length + 2:
            n_len += 1
        if width(out) > width(walk):
            n_wider += 1
        margin = width(out) - (j_ord - i_ord - 1)
        min_margin = margin if min_margin is None else min(min_margin, margin)
        if is_bridge(out):
            n_bridge += 1
            renewal_change_total += len(renewal_points(out)) - len(
                renewal_points(walk)
            )
    return StickbreakExperimentReport(
        L=law.L,
        d=law.d,
        mu_hat=law.mu_hat,
        seed=seed,
        n_samples=n_samples,
        n_blocks=n_blocks,
        windows=windows,
        n_processed=processed,
        n_skipped=skipped,
        n_self_avoiding=n_sa,
        n_length_plus_two=n_len,
        n_width_above_input=n_wider,
        min_width_margin=min_margin,
        n_bridge_outputs=n_bridge,
        mean_renewal_change=(
            renewal_change_total / n_bridge if n_bridge else None
        ),
        first_failure=first_failure,
    )
