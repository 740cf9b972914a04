"""Finite metric spaces as immutable distance matrices.

Implements:
    * FiniteMetricSpace / SubsetView value types (labels + float64 matrix)
    * validate_metric  -- full axiom check with witness-carrying errors
    * scale, restrict, closed_ball, diameter, separation
    * hausdorff_distance between two subsets of a common space
    * frechet_embed    -- row embedding into (R^n, sup) reproducing d up to
      the matrix's triangle deficit (exactly, for exact metrics)

Everything here treats the matrix as the space: points are indices, labels
are presentation only. Matrices are kept read-only; operations that "modify"
return new spaces.

NOTES
-----
Separation of a singleton is returned as +inf (there is no positive pair to
take a minimum over); callers that need a finite value must guard on card.
The triangle scan is O(n^3); for large inputs a compiled kernel is used when
numba is importable, with a pure-numpy fallback kept behaviourally identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    AsymmetryError,
    DifferentBaseSpaceError,
    EmptySubsetError,
    InputFormatError,
    NegativeDistanceError,
    NonPositiveScaleError,
    NonzeroDiagonalError,
    SingletonError,
    TriangleViolationError,
    ZeroOffDiagonalError,
)

__all__ = [
    "TOL_METRIC",
    "FiniteMetricSpace",
    "SubsetView",
    "EmbeddedVectors",
    "validate_metric",
    "scale",
    "restrict",
    "closed_ball",
    "hausdorff_distance",
    "frechet_embed",
]

# Absolute tolerance for every metric comparison in the toolkit.
TOL_METRIC = 1e-9

_NUMBA_MIN_SIZE = 192  # below this the jit overhead dominates; use numpy


# ── triangle scan ────────────────────────────────────────────────────────

def _triangle_scan_numpy(d: np.ndarray) -> tuple[float, int, int, int]:
    """Worst triangle deficit d[i,j] - d[i,k] - d[k,j] and its witness."""
    n = d.shape[0]
    worst = -math.inf
    witness = (0, 0, 0)
    for k in range(n):
        t = d - d[:, k : k + 1] - d[k : k + 1, :]
        m = float(t.max())
        if m > worst:
            i, j = np.unravel_index(int(t.argmax()), t.shape)
            worst, witness = m, (int(i), int(j), k)
    return worst, *witness


def _make_triangle_scan_numba():
    from numba import njit, prange

    @njit(cache=True, parallel=True)
    def scan(d):  # pragma: no cover - compiled
        n = d.shape[0]
        worst_k = np.empty(n)
        wi = np.empty(n, dtype=np.int64)
        wj = np.empty(n, dtype=np.int64)
        for k in prange(n):
            best = -1e300
            bi = 0
            bj = 0
            for i in range(n):
                dik = d[i, k]
                for j in range(n):
                    t = d[i, j] - dik - d[k, j]
                    if t > best:
                        best = t
                        bi = i
                        bj = j
            worst_k[k] = best
            wi[k] = bi
            wj[k] = bj
        k = int(np.argmax(worst_k))
        return worst_k[k], wi[k], wj[k], k

    return scan


_numba_scan = None


def _triangle_scan(d: np.ndarray) -> tuple[float, int, int, int]:
    global _numba_scan
    if d.shape[0] >= _NUMBA_MIN_SIZE:
        if _numba_scan is None:
            try:
                _numba_scan = _make_triangle_scan_numba()
            except ImportError:
                _numba_scan = False
        if _numba_scan:
            worst, i, j, k = _numba_scan(d)
            return float(worst), int(i), int(j), int(k)
    return _triangle_scan_numpy(d)


# ── value types ──────────────────────────────────────────────────────────

@dataclass(frozen=True)
class FiniteMetricSpace:
    """An immutable finite metric space.

    Attributes
    ----------
    labels : tuple of str
        Presentation names, one per point.
    d : numpy.ndarray
        Square float64 distance matrix, read-only.
    """

    labels: tuple[str, ...]
    d: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.ascontiguousarray(self.d, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise InputFormatError(f"distance matrix must be square, got {arr.shape}")
        if len(self.labels) != arr.shape[0]:
            raise InputFormatError(
                f"{len(self.labels)} labels for {arr.shape[0]} points"
            )
        if not np.all(np.isfinite(arr)):
            raise InputFormatError("distance matrix contains non-finite entries")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "d", arr)
        object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))

    @property
    def card(self) -> int:
        return self.d.shape[0]

    def __len__(self) -> int:
        return self.card

    def diameter(self) -> float:
        if self.card <= 1:
            return 0.0
        return float(self.d.max())

    def separation(self) -> float:
        """Minimum positive distance; +inf for a singleton."""
        if self.card <= 1:
            return math.inf
        off = self.d[~np.eye(self.card, dtype=bool)]
        return float(off.min())

    def distance(self, i: int, j: int) -> float:
        return float(self.d[i, j])

    def subset(self, indices: Iterable[int]) -> "SubsetView":
        return SubsetView(self, tuple(int(i) for i in indices))

    def full_subset(self) -> "SubsetView":
        return SubsetView(self, tuple(range(self.card)))

    def __repr__(self) -> str:
        return f"FiniteMetricSpace(card={self.card}, diameter={self.diameter():g})"


@dataclass(frozen=True)
class SubsetView:
    """An index view into a base space; O(1) to hold, no matrix copy."""

    base: FiniteMetricSpace
    indices: tuple[int, ...]

    def __post_init__(self):
        if not self.indices:
            raise EmptySubsetError()
        n = self.base.card
        for i in self.indices:
            if not 0 <= i < n:
                raise InputFormatError(f"subset index {i} out of range 0..{n - 1}")
        if len(set(self.indices)) != len(self.indices):
            raise InputFormatError("subset indices repeat")

    @property
    def card(self) -> int:
        return len(self.indices)

    def __len__(self) -> int:
        return self.card

    def matrix(self) -> np.ndarray:
        ix = np.asarray(self.indices, dtype=np.intp)
        return self.base.d[np.ix_(ix, ix)]

    def diameter(self) -> float:
        if self.card <= 1:
            return 0.0
        return float(self.matrix().max())

    def separation(self) -> float:
        if self.card <= 1:
            return math.inf
        m = self.matrix()
        return float(m[~np.eye(self.card, dtype=bool)].min())

    def as_space(self) -> FiniteMetricSpace:
        """Materialize the subset as a standalone space."""
        labels = tuple(self.base.labels[i] for i in self.indices)
        return FiniteMetricSpace(labels, self.matrix())


@dataclass(frozen=True)
class EmbeddedVectors:
    """Points as vectors whose sup-metric reproduces the source distances."""

    labels: tuple[str, ...]
    vectors: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.ascontiguousarray(self.vectors, dtype=np.float64).copy()
        arr.flags.writeable = False
        object.__setattr__(self, "vectors", arr)
        object.__setattr__(self, "labels", tuple(self.labels))

    def sup_distance(self, i: int, j: int) -> float:
        return float(np.abs(self.vectors[i] - self.vectors[j]).max())

    def as_space(self) -> FiniteMetricSpace:
        v = self.vectors
        d = np.abs(v[:, None, :] - v[None, :, :]).max(axis=2)
        return FiniteMetricSpace(self.labels, d)


# ── operations ───────────────────────────────────────────────────────────

def validate_metric(
    labels: Sequence[str],
    d: np.ndarray,
    tol: float = TOL_METRIC,
) -> FiniteMetricSpace:
    """Check all metric axioms and return the space, or raise with a witness.

    Checks, in order: symmetry, zero diagonal, nonnegativity, positivity off
    the diagonal, triangle inequality. All comparisons use absolute
    tolerance `tol`.
    """
    arr = np.ascontiguousarray(d, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InputFormatError(f"distance matrix must be square, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputFormatError("distance matrix contains non-finite entries")
    n = arr.shape[0]

    asym = np.abs(arr - arr.T)
    if asym.max() > tol:
        i, j = np.unravel_index(int(asym.argmax()), asym.shape)
        raise AsymmetryError(int(i), int(j), float(arr[i, j]), float(arr[j, i]))

    diag = np.abs(np.diag(arr))
    if n and diag.max() > tol:
        i = int(diag.argmax())
        raise NonzeroDiagonalError(i, float(arr[i, i]))

    if arr.min() < -tol:
        i, j = np.unravel_index(int(arr.argmin()), arr.shape)
        raise NegativeDistanceError(int(i), int(j), float(arr[i, j]))

    off = arr + np.where(np.eye(n, dtype=bool), math.inf, 0.0)
    if n > 1 and off.min() <= tol:
        i, j = np.unravel_index(int(off.argmin()), off.shape)
        raise ZeroOffDiagonalError(int(i), int(j))

    if n > 2:
        deficit, i, j, k = _triangle_scan(arr)
        if deficit > tol:
            raise TriangleViolationError(i, j, k, deficit)

    return FiniteMetricSpace(tuple(labels), arr)


def scale(space: FiniteMetricSpace, factor: float) -> FiniteMetricSpace:
    """Multiply every distance by `factor` (> 0)."""
    if not (factor > 0) or not math.isfinite(factor):
        raise NonPositiveScaleError(factor)
    return FiniteMetricSpace(space.labels, space.d * factor)


def restrict(space: FiniteMetricSpace, indices: Iterable[int]) -> SubsetView:
    return space.subset(indices)


def closed_ball(space: FiniteMetricSpace, center: int, radius: float) -> SubsetView:
    """Indices within distance <= radius of `center`, as a view."""
    if not 0 <= center < space.card:
        raise InputFormatError(f"center {center} out of range")
    members = np.flatnonzero(space.d[center] <= radius)
    return SubsetView(space, tuple(int(i) for i in members))


def _directed_hausdorff(m: np.ndarray) -> float:
    # m[s, t] = d(source point s, target point t); sup over s of inf over t
    return float(m.min(axis=1).max())


def hausdorff_distance(s: SubsetView, t: SubsetView) -> float:
    """Hausdorff distance between two subsets of the same base space."""
    if s.base is not t.base:
        raise DifferentBaseSpaceError()
    si = np.asarray(s.indices, dtype=np.intp)
    ti = np.asarray(t.indices, dtype=np.intp)
    cross = s.base.d[np.ix_(si, ti)]
    return max(_directed_hausdorff(cross), _directed_hausdorff(cross.T))


def frechet_embed(space: FiniteMetricSpace) -> EmbeddedVectors:
    """Embed x -> (d(x, p_1), ..., d(x, p_n)); the sup-metric returns d.

    The coordinate at the partner point attains d(x, x') exactly, and every
    other coordinate difference is capped by the matrix's worst triangle
    deficit: zero when the stored entries satisfy the triangle inequality
    in exact arithmetic (rounding is monotone), and at most the validation
    tolerance for any matrix validate_metric accepted.
    """
    return EmbeddedVectors(space.labels, space.d.copy())


def separation_or_raise(space: FiniteMetricSpace) -> float:
    """Finite separation, raising on singletons instead of returning +inf."""
    s = space.separation()
    if math.isinf(s):
        raise SingletonError("space")
    return s
