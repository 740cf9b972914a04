"""Covering numbers, separated sets, and the empirical doubling constant.

A cover of S at scale r is a list of blocks (index sets) whose union
contains S, each of diameter <= r. Covers come back as certificates so
callers can re-check them instead of trusting a count.

Two covering modes:
    * exact  -- branch and bound over maximal diameter-<= r candidate
                blocks, feasible up to EXACT_COVER_LIMIT points;
    * greedy -- deterministic first-fit gather scan, any size. On sorted
                line-like data the scan reproduces the optimal interval
                cover; in general it only upper-bounds the covering number,
                and the certificate says which mode produced it.

Blocks are always subsets of S itself (the ambient space contributes no
extra block points); every certificate records that convention implicitly
by listing blocks as indices into the base space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EmptySubsetError, ExactLimitExceededError
from .spaces import TOL_METRIC, FiniteMetricSpace, SubsetView

__all__ = [
    "EXACT_COVER_LIMIT",
    "CoverCertificate",
    "covering_number",
    "max_separated_set",
    "doubling_constant_empirical",
]

EXACT_COVER_LIMIT = 20


@dataclass(frozen=True)
class CoverCertificate:
    """A verified cover: blocks of diameter <= r whose union contains S."""

    r: float
    count: int
    exact: bool
    blocks: tuple[tuple[int, ...], ...]

    def to_document(self) -> dict:
        return {
            "r": self.r,
            "count": self.count,
            "exactness": "exact" if self.exact else "upper-bound",
            "blocks": [list(b) for b in self.blocks],
            # blocks are drawn from S itself, never from the ambient space
            "blocks_within_subset": True,
        }

    def check(self, subset: SubsetView, tol: float = TOL_METRIC) -> bool:
        """Re-verify the certificate against the subset it was built for."""
        covered: set[int] = set()
        base = subset.base
        for block in self.blocks:
            ix = np.asarray(block, dtype=np.intp)
            if len(block) > 1 and base.d[np.ix_(ix, ix)].max() > self.r + tol:
                return False
            covered.update(block)
        return covered >= set(subset.indices)


def _as_view(s: FiniteMetricSpace | SubsetView) -> SubsetView:
    if isinstance(s, FiniteMetricSpace):
        return s.full_subset()
    return s


# ── separated sets ───────────────────────────────────────────────────────

def max_separated_set(s: FiniteMetricSpace | SubsetView, r: float) -> tuple[int, ...]:
    """Greedy maximal r-separated subset, scanning points in index order.

    Every kept pair is at distance >= r and every rejected point is within
    < r of some kept point, so the result is maximal (not maximum).
    Indices refer to the base space.
    """
    view = _as_view(s)
    if view.card == 0:
        raise EmptySubsetError()
    d = view.base.d
    kept: list[int] = []
    for i in view.indices:
        row = d[i]
        if all(row[j] >= r for j in kept):
            kept.append(i)
    return tuple(kept)


# ── greedy cover ─────────────────────────────────────────────────────────

def _greedy_blocks(view: SubsetView, r: float, tol: float) -> list[tuple[int, ...]]:
    # First-fit gather: open a block at the lowest uncovered index, then add
    # every later uncovered point that keeps the block diameter <= r. Each
    # admission is checked against all current members (via `reach`, the
    # farthest distance from a candidate to the block), so pairs are valid.
    d = view.base.d
    order = np.asarray(view.indices, dtype=np.intp)
    alive = np.ones(len(order), dtype=bool)
    blocks: list[tuple[int, ...]] = []
    limit = r + tol
    while alive.any():
        positions = np.flatnonzero(alive)
        seed = int(order[positions[0]])
        members = [seed]
        taken = [int(positions[0])]
        reach = d[seed].copy()
        for pos in positions[1:]:
            i = int(order[pos])
            if reach[i] <= limit:
                members.append(i)
                taken.append(int(pos))
                np.maximum(reach, d[i], out=reach)
        blocks.append(tuple(members))
        alive[taken] = False
    return blocks


# ── exact cover ──────────────────────────────────────────────────────────

def _maximal_candidate_blocks(sub: np.ndarray, limit: float) -> list[int]:
    """All maximal diameter-<= limit subsets, as bitmasks over local indices.

    Bron-Kerbosch with pivoting on the threshold graph (edges d <= limit).
    """
    m = sub.shape[0]
    adj = [0] * m
    for a in range(m):
        mask = 0
        for b in range(m):
            if b != a and sub[a, b] <= limit:
                mask |= 1 << b
        adj[a] = mask
    out: list[int] = []

    def expand(rset: int, pset: int, xset: int):
        if pset == 0 and xset == 0:
            out.append(rset)
            return
        pivot_pool = pset | xset
        pivot = (pivot_pool & -pivot_pool).bit_length() - 1
        best = pivot
        best_cnt = -1
        pool = pivot_pool
        while pool:
            v = (pool & -pool).bit_length() - 1
            pool &= pool - 1
            c = bin(pset & adj[v]).count("1")
            if c > best_cnt:
                best_cnt, best = c, v
        cand = pset & ~adj[best]
        while cand:
            v = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            bit = 1 << v
            expand(rset | bit, pset & adj[v], xset & adj[v])
            pset &= ~bit
            xset |= bit

    expand(0, (1 << m) - 1, 0)
    return out


def _exact_cover_count(
    sub: np.ndarray, limit: float, upper: int
) -> list[int]:
    """Minimum cover by maximal diameter-<= limit blocks; returns bitmasks."""
    m = sub.shape[0]
    candidates = _maximal_candidate_blocks(sub, limit)
    full = (1 << m) - 1
    covers_point: list[list[int]] = [[] for _ in range(m)]
    for ci, mask in enumerate(candidates):
        t = mask
        while t:
            v = (t & -t).bit_length() - 1
            t &= t - 1
            covers_point[v].append(ci)

    # greedy packing dual: points pairwise > limit apart need distinct blocks
    def packing_bound(uncovered: int) -> int:
        count = 0
        pool = uncovered
        while pool:
            v = (pool & -pool).bit_length() - 1
            count += 1
            pool &= adj_far_mask[v]
        return count

    adj_far_mask = []
    for a in range(m):
        mask = 0
        for b in range(m):
            if b != a and sub[a, b] > limit:
                mask |= 1 << b
        adj_far_mask.append(mask)

    best_masks: list[int] = []
    best = upper + 1

    def search(uncovered: int, chosen: list[int]):
        nonlocal best, best_masks
        if uncovered == 0:
            if len(chosen) < best:
                best = len(chosen)
                best_masks = chosen.copy()
            return
        if len(chosen) + packing_bound(uncovered) >= best:
            return
        # branch on the uncovered point with fewest candidate blocks
        pick, fewest = -1, math.inf
        t = uncovered
        while t:
            v = (t & -t).bit_length() - 1
            t &= t - 1
            k = len(covers_point[v])
            if k < fewest:
                fewest, pick = k, v
        for ci in covers_point[pick]:
            chosen.append(candidates[ci])
            search(uncovered & ~candidates[ci], chosen)
            chosen.pop()

    search(full, [])
    return best_masks


def covering_number(
    s: FiniteMetricSpace | SubsetView,
    r: float,
    mode: str = "auto",
    tol: float = TOL_METRIC,
) -> CoverCertificate:
    """Smallest (exact mode) or small (greedy mode) cover of S at scale r.

    mode: "exact" raises ExactLimitExceededError above EXACT_COVER_LIMIT
    points; "greedy" always runs; "auto" picks exact when it is feasible.
    """
    view = _as_view(s)
    n = view.card
    if n == 0:
        raise EmptySubsetError()
    if mode not in ("exact", "greedy", "auto"):
        raise ValueError(f"unknown covering mode {mode!r}")
    limit = r + tol

    greedy_blocks = _greedy_blocks(view, r, tol)
    if mode == "greedy" or (mode == "auto" and n > EXACT_COVER_LIMIT):
        return CoverCertificate(r, len(greedy_blocks), False, tuple(greedy_blocks))
    if mode == "exact" and n > EXACT_COVER_LIMIT:
        raise ExactLimitExceededError(n, EXACT_COVER_LIMIT)

    sub = view.matrix()
    masks = _exact_cover_count(sub, limit, upper=len(greedy_blocks))
    assert masks, "maximal candidate blocks always admit a cover"
    local = list(view.indices)
    blocks = []
    for mask in masks:
        ix = []
        t = mask
        while t:
            v = (t & -t).bit_length() - 1
            t &= t - 1
            ix.append(local[v])
        blocks.append(tuple(sorted(ix)))
    return CoverCertificate(r, len(blocks), True, tuple(blocks))


# ── doubling ─────────────────────────────────────────────────────────────

def _min_ball_cover(
    base: FiniteMetricSpace,
    members: np.ndarray,
    radius: float,
    tol: float,
) -> tuple[int, bool]:
    """Fewest base-space balls of the given radius covering `members`.

    Candidate centers range over the whole base space. Exact (set cover
    branch and bound over ball candidates) when the member count is small,
    greedy max-coverage otherwise.
    """
    d = base.d
    cover_sets: list[set[int]] = []
    seen: set[frozenset] = set()
    member_set = set(int(i) for i in members)
    for f in range(base.card):
        hit = frozenset(int(i) for i in members if d[f, i] <= radius + tol)
        if hit and hit not in seen:
            seen.add(hit)
            cover_sets.append(set(hit))
    # drop candidates dominated by a superset
    cover_sets.sort(key=lambda s: (-len(s), sorted(s)))
    kept: list[set[int]] = []
    for cs in cover_sets:
        if not any(cs <= other for other in kept):
            kept.append(cs)

    if len(members) <= EXACT_COVER_LIMIT:
        best = [len(kept) + 1]

        def search(uncovered: set[int], used: int):
            if not uncovered:
                best[0] = min(best[0], used)
                return
            if used + 1 >= best[0]:
                return
            pick = min(uncovered)
            for cs in kept:
                if pick in cs:
                    search(uncovered - cs, used + 1)

        search(set(member_set), 0)
        return best[0], True

    uncovered = set(member_set)
    used = 0
    while uncovered:
        bestset = max(kept, key=lambda cs: (len(cs & uncovered), -min(cs)))
        gain = bestset & uncovered
        if not gain:
            break
        uncovered -= gain
        used += 1
    return used, False


def doubling_constant_empirical(
    space: FiniteMetricSpace,
    max_balls: int = 4096,
    tol: float = TOL_METRIC,
) -> tuple[int, bool]:
    """Empirical doubling constant with an exactness flag.

    Max over balls S = B(x, R), R ranging over the distance set, of the
    fewest points F in the whole space whose (diam(S)/2)-balls cover S.
    When every inner cover was solved exactly the flag is True. Ball
    instances are deterministically thinned to at most `max_balls`.
    """
    n = space.card
    d = space.d
    instances: list[tuple[int, float]] = []
    for x in range(n):
        radii = np.unique(d[x])
        for rad in radii:
            instances.append((x, float(rad)))
    if len(instances) > max_balls:
        step = len(instances) / max_balls
        instances = [instances[int(i * step)] for i in range(max_balls)]

    worst = 1
    all_exact = True
    for x, rad in instances:
        members = np.flatnonzero(d[x] <= rad + tol)
        if len(members) <= 1:
            continue
        diam = float(d[np.ix_(members, members)].max())
        if diam <= 0:
            continue
        count, exact = _min_ball_cover(space, members, diam / 2.0, tol)
        all_exact = all_exact and exact
        if count > worst:
            worst = count
    return worst, all_exact
