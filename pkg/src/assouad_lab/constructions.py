"""Model spaces: telescopes, Cantor endpoint samples, graph length
spaces, and the indexed-block space whose rescalings realize every
dictionary set as a ball limit.

The telescope glues rescaled components along a basepoint at infinity:
block i sits at distance exactly 2^-i from the basepoint, so the closed
ball B(infty, 2^-i) is the basepoint together with all blocks from i on.
The indexed-block construction weights block i by 2^(i*i)/alpha(G_i) and
joins blocks through the basepoint (the distance between points of
different blocks is the sum of their distances to it), which makes the
triangle inequality exact in real arithmetic; the float check below only
has to absorb rounding of the sums.

Index maps: H folds the line onto the naturals with H(n) the distance
from n to the nearest square, so H hits every value infinitely often and
moves by at most 1 per step. A walks N^2 x Z through growing boxes
[0,s]^2 x [-s,s], serpentine within each z-layer, with unit-step
connectors between boxes: every step changes a single coordinate by 1,
so coordinates of A(m) are at most m in absolute value. C = A after H
inherits both properties and visits every triple infinitely often.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse
from scipy.sparse.csgraph import connected_components, shortest_path

from .errors import (
    BasePointMissingError,
    BucketUnrealizableError,
    DiameterBoundViolatedError,
    DisconnectedGraphError,
    InputFormatError,
    LevelTooLargeError,
    SingletonError,
    TriangleViolationError,
    TruncationTooSmallError,
)
from .spaces import TOL_METRIC, FiniteMetricSpace, _triangle_scan

__all__ = [
    "TelescopeSpec",
    "telescope",
    "tangent_rescale_schedule",
    "sup_grid",
    "progression",
    "cantor_points",
    "cantor_sample",
    "graph_length_space",
    "path_graph_space",
    "cycle_graph_space",
    "IndexTriple",
    "index_map_H",
    "index_map_A",
    "index_map_C",
    "classify_F",
    "AsymptoticExampleSpec",
    "AsymptoticExample",
    "asymptotic_example",
]

CANTOR_LEVEL_LIMIT = 14
SCHEDULE_LIMIT = 20
BLOCK_LIMIT = 16


# ---------------------------------------------------------------------------
# telescopes


@dataclass(frozen=True)
class TelescopeSpec:
    """Components to glue along a point at infinity.

    With rescale on (the default) block i is shrunk to diameter exactly
    2^-i; with it off the components are used as-is and any block whose
    diameter exceeds 2^-i is rejected.
    """

    components: tuple[FiniteMetricSpace, ...]
    rescale: bool = True
    base_label: str = "infty"

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))


def _checked_space(labels: list[str], d: np.ndarray, tol: float) -> FiniteMetricSpace:
    # Symmetry and the zero diagonal hold by construction; positivity and
    # the triangle inequality are what float rounding could plausibly break.
    if len(set(labels)) != len(labels):
        raise InputFormatError("duplicate labels in constructed space")
    n = d.shape[0]
    if n > 1:
        off = d[~np.eye(n, dtype=bool)]
        if off.min() <= 0:
            raise InputFormatError("constructed space has a zero off-diagonal entry")
    if n > 2:
        deficit, i, j, k = _triangle_scan(d)
        if deficit > tol:
            raise TriangleViolationError(i, j, k, deficit)
    return FiniteMetricSpace(tuple(labels), d)


def telescope(spec: TelescopeSpec) -> FiniteMetricSpace:
    """Glue the components into one space with a basepoint at infinity.

    Distances: the basepoint sits at exactly 2^-i from every point of
    block i, two blocks i < j sit at exactly 2^-i from each other, and
    within block i the component metric is kept (optionally rescaled to
    diameter 2^-i). Labels are "b{i}:{component label}".
    """
    comps = spec.components
    sizes = [c.card for c in comps]
    n = 1 + sum(sizes)
    d = np.zeros((n, n))
    labels = [spec.base_label]

    offsets = []
    pos = 1
    for i, comp in enumerate(comps):
        offsets.append(pos)
        labels.extend(f"b{i}:{lab}" for lab in comp.labels)
        pos += comp.card

    for i, comp in enumerate(comps):
        bound = 2.0**-i
        sl = slice(offsets[i], offsets[i] + comp.card)
        delta = comp.diameter()
        if spec.rescale:
            block = comp.d * (bound / delta) if delta > 0 else comp.d
        else:
            if delta > bound:
                raise DiameterBoundViolatedError(i, delta, bound)
            block = comp.d
        d[sl, sl] = block
        d[0, sl] = bound
        d[sl, 0] = bound
        for j in range(i):
            far = 2.0**-j
            sj = slice(offsets[j], offsets[j] + comps[j].card)
            d[sl, sj] = far
            d[sj, sl] = far
    return _checked_space(labels, d, TOL_METRIC)


def tangent_rescale_schedule(components: Sequence[FiniteMetricSpace]) -> tuple[float, ...]:
    """Divisors r_i = (i+1)! * diameter(F_i), so F_i / r_i has diameter
    1/(i+1)! <= 2^-i and the rescaled sequence telescopes without further
    shrinking. Singleton components get the bare factorial (any positive
    divisor works for them). Capped at 20 components: beyond that the
    factorials leave exact float range.
    """
    if len(components) > SCHEDULE_LIMIT:
        raise LevelTooLargeError(len(components), SCHEDULE_LIMIT)
    out = []
    for i, comp in enumerate(components):
        delta = comp.diameter()
        out.append(float(math.factorial(i + 1)) * (delta if delta > 0 else 1.0))
    return tuple(out)


# ---------------------------------------------------------------------------
# Cantor endpoint samples


def sup_grid(n: int, spacing: float = 1.0) -> FiniteMetricSpace:
    """n x n grid under the sup metric, points labeled g{row}_{col}."""
    if n < 1:
        raise InputFormatError("grid needs at least one point per side")
    if not (spacing > 0 and math.isfinite(spacing)):
        raise InputFormatError(f"grid spacing must be positive and finite: {spacing!r}")
    xs = np.arange(n, dtype=np.float64) * spacing
    gx, gy = np.meshgrid(xs, xs, indexing="ij")
    px, py = gx.ravel(), gy.ravel()
    d = np.maximum(
        np.abs(px[:, None] - px[None, :]), np.abs(py[:, None] - py[None, :])
    )
    labels = tuple(f"g{i}_{j}" for i in range(n) for j in range(n))
    return FiniteMetricSpace(labels, d)


def progression(n: int, step: float = 1.0) -> FiniteMetricSpace:
    """Arithmetic progression 0, step, ..., (n-1)*step on the line."""
    if n < 1:
        raise InputFormatError("progression needs at least one point")
    if not (step > 0 and math.isfinite(step)):
        raise InputFormatError(f"progression step must be positive and finite: {step!r}")
    xs = np.arange(n, dtype=np.float64) * step
    d = np.abs(xs[:, None] - xs[None, :])
    return FiniteMetricSpace(tuple(f"p{i}" for i in range(n)), d)


def cantor_points(level: int) -> np.ndarray:
    """Endpoints of the level-`level` middle-thirds sets in [0, 1].

    Computed over integers at scale 3^level and divided once, so equal
    values across levels land on identical floats. 2^(level+1) points.
    """
    if level < 0 or level > CANTOR_LEVEL_LIMIT:
        raise LevelTooLargeError(level, CANTOR_LEVEL_LIMIT)
    segs = [(0, 3**level)]
    for _ in range(level):
        nxt = []
        for a, b in segs:
            w = (b - a) // 3
            nxt.append((a, a + w))
            nxt.append((b - w, b))
        segs = nxt
    pts = sorted({e for seg in segs for e in seg})
    return np.array(pts, dtype=np.float64) / float(3**level)


def cantor_sample(level: int) -> FiniteMetricSpace:
    """The endpoint sample as a metric space under |x - y|."""
    pts = cantor_points(level)
    d = np.abs(pts[:, None] - pts[None, :])
    return FiniteMetricSpace(tuple(f"e{i}" for i in range(len(pts))), d)


# ---------------------------------------------------------------------------
# graph length spaces


def graph_length_space(
    n_vertices: int,
    edges: Iterable[tuple[int, int, float]],
    labels: Sequence[str] | None = None,
) -> FiniteMetricSpace:
    """Shortest-path metric of a weighted undirected graph.

    Edges are (u, v, weight) with positive finite weights; parallel edges
    keep the lightest. The graph must be connected.
    """
    if n_vertices < 1:
        raise InputFormatError("graph needs at least one vertex")
    w = np.full((n_vertices, n_vertices), np.inf)
    for e in edges:
        try:
            u, v, wt = int(e[0]), int(e[1]), float(e[2])
        except (TypeError, ValueError, IndexError) as exc:
            raise InputFormatError(f"bad edge {e!r}") from exc
        if not (0 <= u < n_vertices and 0 <= v < n_vertices):
            raise InputFormatError(f"edge {e!r} out of range for {n_vertices} vertices")
        if u == v:
            raise InputFormatError(f"loop edge at vertex {u}")
        if not (wt > 0 and math.isfinite(wt)):
            raise InputFormatError(f"edge weight must be positive and finite: {e!r}")
        if wt < w[u, v]:
            w[u, v] = wt
            w[v, u] = wt

    mask = np.isfinite(w)
    graph = scipy.sparse.csr_matrix((w[mask], np.nonzero(mask)), shape=w.shape)
    ncomp, assign = connected_components(graph, directed=False)
    if ncomp > 1:
        a = int(np.flatnonzero(assign == assign[0])[0])
        b = int(np.flatnonzero(assign != assign[0])[0])
        raise DisconnectedGraphError(a, b)
    d = shortest_path(graph, method="D", directed=False)
    if labels is None:
        labels = tuple(f"v{i}" for i in range(n_vertices))
    return FiniteMetricSpace(tuple(labels), d)


def path_graph_space(n_vertices: int, step: float = 1.0) -> FiniteMetricSpace:
    """Path on n vertices with uniform edge length `step`."""
    edges = [(i, i + 1, step) for i in range(n_vertices - 1)]
    return graph_length_space(n_vertices, edges)


def cycle_graph_space(n_vertices: int, step: float = 1.0) -> FiniteMetricSpace:
    """Cycle on n >= 3 vertices with uniform edge length `step`."""
    if n_vertices < 3:
        raise InputFormatError("cycle needs at least three vertices")
    edges = [(i, (i + 1) % n_vertices, step) for i in range(n_vertices)]
    return graph_length_space(n_vertices, edges)


# ---------------------------------------------------------------------------
# index maps


@dataclass(frozen=True)
class IndexTriple:
    x: int
    y: int
    z: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.x, self.y, self.z)


def _isqrt_array(n: np.ndarray) -> np.ndarray:
    # floor(sqrt) with integer correction; exact for n < 2**52.
    s = np.floor(np.sqrt(n.astype(np.float64))).astype(np.int64)
    s = np.where((s + 1) * (s + 1) <= n, s + 1, s)
    s = np.where(s * s > n, s - 1, s)
    return s


def index_map_H(n):
    """Distance to the nearest square: H(n) = min_k |n - k^2|.

    Accepts a nonnegative int (returns int) or an integer array
    (returns an array)."""
    if isinstance(n, (int, np.integer)):
        if n < 0:
            raise InputFormatError(f"H is defined on nonnegative integers, got {n}")
        s = math.isqrt(int(n))
        return min(n - s * s, (s + 1) * (s + 1) - n)
    arr = np.asarray(n)
    if not np.issubdtype(arr.dtype, np.integer):
        raise InputFormatError("H needs integer input")
    if arr.size and arr.min() < 0:
        raise InputFormatError("H is defined on nonnegative integers")
    a = arr.astype(np.int64)
    s = _isqrt_array(a)
    return np.minimum(a - s * s, (s + 1) * (s + 1) - a)


_A_VALUES: list[tuple[int, int, int]] = []
_A_NEXT_BOX = 0


def _serpentine(s: int) -> list[tuple[int, int]]:
    out = []
    for x in range(s + 1):
        ys = range(s + 1) if x % 2 == 0 else range(s, -1, -1)
        out.extend((x, y) for y in ys)
    return out


def _extend_index_table(upto: int) -> None:
    """Grow the A table to at least `upto` entries (amortized, memoized)."""
    global _A_NEXT_BOX
    while len(_A_VALUES) < upto:
        s = _A_NEXT_BOX
        if s == 0:
            _A_VALUES.append((0, 0, 0))
        else:
            x, y, z = _A_VALUES[-1]
            while x > 0:
                x -= 1
                _A_VALUES.append((x, y, z))
            while y > 0:
                y -= 1
                _A_VALUES.append((x, y, z))
            while z > -s:
                z -= 1
                _A_VALUES.append((x, y, z))
            plane = _serpentine(s)
            box = [
                (px, py, pz)
                for t, pz in enumerate(range(-s, s + 1))
                for px, py in (plane if t % 2 == 0 else plane[::-1])
            ]
            # the connector already emitted box[0] = (0, 0, -s)
            _A_VALUES.extend(box[1:])
        _A_NEXT_BOX += 1


def index_map_A(m: int) -> IndexTriple:
    """The m-th triple of the box-sweep walk through N^2 x Z.

    The walk starts at the origin, changes exactly one coordinate by 1
    per step, and sweeps every box [0,s]^2 x [-s,s], so it is onto and
    |each coordinate of A(m)| <= m.
    """
    if m < 0:
        raise InputFormatError(f"A is defined on nonnegative integers, got {m}")
    _extend_index_table(m + 1)
    return IndexTriple(*_A_VALUES[m])


def index_map_C(n: int) -> IndexTriple:
    """C = A after H; hits every triple infinitely often, coordinates <= n."""
    return index_map_A(index_map_H(int(n)))


# ---------------------------------------------------------------------------
# dictionary classification and the indexed-block example


def classify_F(space: FiniteMetricSpace, base_label: str = "q") -> tuple[int, int]:
    """Dyadic class (j, k) of a pointed space: diameter in [2^-k, 2^-k+1)
    and separation/diameter in [2^-j, 2^-j+1).

    j >= 0 always; k is any integer. Scaling the space by 2 decrements k
    and leaves j unchanged (exactly, including in floats: both reads come
    from the binary exponent). The basepoint must be present even though
    the class does not depend on it — dictionary entries are pointed.
    """
    if base_label not in space.labels:
        raise BasePointMissingError(base_label)
    if space.card < 2:
        raise SingletonError("classification input")
    delta = space.diameter()
    alpha = space.separation()
    k = 1 - math.frexp(delta)[1]
    j = 1 - math.frexp(alpha / delta)[1]
    return (j, k)


@dataclass(frozen=True)
class AsymptoticExampleSpec:
    """Dictionary of pointed spaces plus a block count.

    Block i realizes a dictionary entry from the class C(i) asks for;
    finite dictionaries are reused cyclically inside each class.
    """

    dictionary: tuple[FiniteMetricSpace, ...]
    n_blocks: int = 8
    base_label: str = "q"

    def __post_init__(self):
        object.__setattr__(self, "dictionary", tuple(self.dictionary))
        if self.n_blocks < 1:
            raise InputFormatError("need at least one block")
        if self.n_blocks > BLOCK_LIMIT:
            raise LevelTooLargeError(self.n_blocks, BLOCK_LIMIT)


@dataclass(frozen=True)
class AsymptoticExample:
    """The assembled space with its block bookkeeping.

    blocks[i] lists the indices of block i's points in `space`
    (the shared basepoint, index `base_index`, is not listed);
    components[i] is the unscaled dictionary entry realized by block i
    and weights[i] its multiplier 2^(i*i)/alpha(G_i).
    """

    space: FiniteMetricSpace
    weights: tuple[float, ...]
    blocks: tuple[tuple[int, ...], ...]
    components: tuple[FiniteMetricSpace, ...]
    base_label: str
    base_index: int = 0


def asymptotic_example(spec: AsymptoticExampleSpec) -> AsymptoticExample:
    """Assemble the weighted block space along a single basepoint.

    Block i is the entry of class (y, z) = projection of C(i), cycled by
    the first coordinate; it is scaled by a_i = 2^(i*i)/alpha(G_i), which
    puts every point of block i at distance >= 2^(i*i) from the basepoint
    while its rescaled copy a_i^-1 X converges to the entry. Distances
    between blocks route through the basepoint.
    """
    buckets: dict[tuple[int, int], list[int]] = {}
    for idx, entry in enumerate(spec.dictionary):
        cls = classify_F(entry, spec.base_label)
        buckets.setdefault(cls, []).append(idx)

    chosen: list[FiniteMetricSpace] = []
    weights: list[float] = []
    for i in range(spec.n_blocks):
        t = index_map_C(i)
        cls = (t.y, t.z)
        pool = buckets.get(cls)
        if not pool:
            raise BucketUnrealizableError(i, cls)
        entry = spec.dictionary[pool[t.x % len(pool)]]
        chosen.append(entry)
        weights.append(2.0 ** (i * i) / entry.separation())

    sizes = [c.card - 1 for c in chosen]
    n = 1 + sum(sizes)
    d = np.zeros((n, n))
    labels = [spec.base_label]
    blocks: list[tuple[int, ...]] = []
    to_base: list[np.ndarray] = []

    pos = 1
    for i, comp in enumerate(chosen):
        qi = comp.labels.index(spec.base_label)
        others = [t for t in range(comp.card) if t != qi]
        ids = tuple(range(pos, pos + len(others)))
        blocks.append(ids)
        labels.extend(f"b{i}:{comp.labels[t]}" for t in others)
        dq = weights[i] * comp.d[qi, others]
        to_base.append(dq)
        sl = slice(pos, pos + len(others))
        d[0, sl] = dq
        d[sl, 0] = dq
        d[sl, sl] = weights[i] * comp.d[np.ix_(others, others)]
        for j in range(i):
            sj = slice(blocks[j][0], blocks[j][-1] + 1)
            cross = to_base[j][:, None] + dq[None, :]
            d[sj, sl] = cross
            d[sl, sj] = cross.T
        pos += len(others)

    tol = TOL_METRIC * max(1.0, float(d.max()))
    space = _checked_space(labels, d, tol)
    return AsymptoticExample(
        space=space,
        weights=tuple(weights),
        blocks=tuple(blocks),
        components=tuple(chosen),
        base_label=spec.base_label,
        base_index=0,
    )
