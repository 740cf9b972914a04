"""Empirical Assouad-type dimension estimates on finite samples.

A finite space has no asymptotic scaling regime, so every number reported
here is a window-restricted exponent of the sampled space. Over a
deterministic pool of observations the estimators regress log count
against log scale ratio; beta_hat is the least-squares slope. Single
observations are noisy (a net at an awkward scale can have cardinality
equal to its ratio, exponent 1, on a set whose true exponent is 0.63),
while the slope across the window is stable, so the extremal single-point
exponents are reported as diagnostics next to the slope rather than as
the estimate.

Two pools:
  * subset pool -- the full space, greedy r-separated nets across an
    octave ladder of scales, and balls intersected with those nets.
    Observation: (log delta(A)/alpha(A), log card(A)).
  * (ball, scale) pairs -- balls B(c, R) for ladder radii R against
    cover scales r from the same ladder, counted by the greedy cover.
    Observation: (log (delta(S)+g)/(r+g), log count).

The covering abscissa applies a discreteness correction with g the
minimum positive distance of the space: covering counts of a finite
sample saturate once r falls below g, and the raw ratio delta/r
overstates the usable scale range by exactly that floor. Eligibility of
a pair is still decided on the raw ratio delta(S)/r >= rho_min. The
subset pool needs no correction: its denominator alpha(A) is itself a
realized distance of the sample, never below g.

All pools are deterministic for reproducible runs; a seeded random
subset augmentation can be switched on through the parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .covering import covering_number, max_separated_set
from .errors import NoEligibleScalePairError, NoEligibleSubsetError
from .spaces import FiniteMetricSpace

__all__ = [
    "EstimatorParams",
    "DimensionEstimate",
    "subset_pool",
    "ball_scale_pairs",
    "assouad_estimate_subsets",
    "assouad_estimate_covering",
    "lower_assouad_estimate",
]


@dataclass(frozen=True)
class EstimatorParams:
    """Pool and window controls shared by all three estimators.

    r_min / r_max default to twice the minimum positive distance and half
    the diameter: below the former counts are frozen at the sample floor,
    above the latter a single block wins for the wrong reason.
    """

    rho_min: float = 4.0
    r_min: float | None = None
    r_max: float | None = None
    ladder_factor: float = 2.0
    ball_centers: int = 4
    random_subsets: int = 0
    seed: int = 0

    def __post_init__(self):
        if not self.rho_min > 1:
            raise ValueError(f"rho_min must exceed 1, got {self.rho_min!r}")
        if not self.ladder_factor > 1:
            raise ValueError("ladder_factor must exceed 1")

    def resolve_window(self, space: FiniteMetricSpace) -> tuple[float, float]:
        sep = space.separation()
        r_min = self.r_min if self.r_min is not None else 2.0 * sep
        r_max = self.r_max if self.r_max is not None else space.diameter() / 2.0
        return float(r_min), float(r_max)


@dataclass(frozen=True)
class DimensionEstimate:
    """A window-restricted empirical exponent, never "the dimension".

    points holds the (log ratio, log count) cloud the slope was fitted
    to; extremal_max / extremal_min are the largest and smallest
    single-point exponents log count / log ratio over the same cloud
    (the constant-1 extremal values).
    """

    beta_hat: float
    constant_C: float
    method: str  # "subset-extremal" | "covering-fit"
    kind: str  # "assouad" | "lower-assouad"
    window: tuple[float, float, float]  # (rho_min, r_min, r_max)
    samples: int
    points: tuple[tuple[float, float], ...]
    extremal_max: float
    extremal_min: float

    def to_document(self) -> dict:
        rho_min, r_min, r_max = self.window
        return {
            "beta_hat": self.beta_hat,
            "constant_C": self.constant_C,
            "method": self.method,
            "kind": self.kind,
            "window": {"rho_min": rho_min, "r_min": r_min, "r_max": r_max},
            "samples": self.samples,
            "points": [[x, y] for x, y in self.points],
            "extremal_max": self.extremal_max,
            "extremal_min": self.extremal_min,
            "empirical": True,
        }


def _ladder(r_min: float, r_max: float, factor: float) -> list[float]:
    if not r_min > 0 or r_min > r_max * (1 + 1e-12):
        return []
    out = []
    r = r_min
    while r <= r_max * (1 + 1e-12):
        out.append(r)
        r *= factor
    return out


def subset_pool(
    space: FiniteMetricSpace, params: EstimatorParams | None = None
) -> tuple[tuple[int, ...], ...]:
    """Deterministic subset pool: full space, ladder nets, balls x nets.

    Subsets come back as index tuples, unfiltered; the estimators apply
    the rho_min ratio gate. Ball centers are the first few points of the
    coarsest net so they spread across the space at every input size.
    """
    if params is None:
        params = EstimatorParams()
    d = space.d
    r_min, r_max = params.resolve_window(space)
    ladder = _ladder(r_min, r_max, params.ladder_factor)

    pool: list[tuple[int, ...]] = [tuple(range(space.card))]
    nets: list[tuple[float, tuple[int, ...]]] = []
    for r in ladder:
        net = max_separated_set(space, r)
        nets.append((r, net))
        pool.append(net)

    if nets:
        coarse = nets[-1][1]
        centers = list(coarse[: params.ball_centers])
        for r, net in nets:
            net_arr = np.asarray(net, dtype=np.intp)
            for radius in ladder:
                if radius < params.rho_min * r:
                    continue
                for c in centers:
                    ball = np.flatnonzero(d[c] <= radius)
                    members = np.intersect1d(ball, net_arr)
                    if len(members):
                        pool.append(tuple(int(i) for i in members))

    if params.random_subsets > 0:
        rng = np.random.default_rng(params.seed)
        for _ in range(params.random_subsets):
            size = int(rng.integers(2, space.card + 1))
            members = np.sort(rng.choice(space.card, size=size, replace=False))
            pool.append(tuple(int(i) for i in members))
    return tuple(pool)


def ball_scale_pairs(
    space: FiniteMetricSpace, params: EstimatorParams | None = None
) -> tuple[tuple[tuple[int, ...], float], ...]:
    """Eligible (ball member indices, cover scale r) pairs.

    Balls B(c, R) for ladder radii R around r_max-separated centers
    (separating at r_max itself, not the top ladder rung, spreads the
    centers across the space instead of along its first row); a pair is
    eligible when delta(S)/r >= rho_min with both from the ladder window.
    """
    if params is None:
        params = EstimatorParams()
    d = space.d
    r_min, r_max = params.resolve_window(space)
    ladder = _ladder(r_min, r_max, params.ladder_factor)
    if not ladder:
        return ()
    coarse = max_separated_set(space, r_max)
    centers = list(coarse[: params.ball_centers])

    pairs: list[tuple[tuple[int, ...], float]] = []
    for c in centers:
        for radius in ladder:
            members = np.flatnonzero(d[c] <= radius)
            if len(members) < 2:
                continue
            delta = float(d[np.ix_(members, members)].max())
            ball = tuple(int(i) for i in members)
            for r in ladder:
                if delta / r < params.rho_min:
                    continue
                pairs.append((ball, r))
    return tuple(pairs)


def _dedup_sorted(points: list[tuple[float, float]]) -> tuple[tuple[float, float], ...]:
    return tuple(sorted(set(points)))


def _fit(points: tuple[tuple[float, float], ...]) -> tuple[float, float, bool]:
    """Least-squares slope and intercept; degenerate flag when x has no spread."""
    xs = np.array([p[0] for p in points])
    ys = np.array([p[1] for p in points])
    if len(xs) < 2 or float(np.ptp(xs)) < 1e-12:
        return math.nan, math.nan, True
    coeffs = np.linalg.lstsq(np.vstack([xs, np.ones_like(xs)]).T, ys, rcond=None)[0]
    return float(coeffs[0]), float(coeffs[1]), False


def _extremals(points: tuple[tuple[float, float], ...]) -> tuple[float, float]:
    exps = [y / x for x, y in points]
    return max(exps), min(exps)


def _subset_points(
    space: FiniteMetricSpace, params: EstimatorParams
) -> tuple[tuple[float, float], ...]:
    d = space.d
    points: list[tuple[float, float]] = []
    for members in subset_pool(space, params):
        if len(members) < 2:
            continue
        ix = np.asarray(members, dtype=np.intp)
        sub = d[np.ix_(ix, ix)]
        delta = float(sub.max())
        alpha = float(sub[~np.eye(len(members), dtype=bool)].min())
        if alpha <= 0:
            continue
        ratio = delta / alpha
        if ratio < params.rho_min:
            continue
        points.append((math.log(ratio), math.log(len(members))))
    return _dedup_sorted(points)


def assouad_estimate_subsets(
    space: FiniteMetricSpace, params: EstimatorParams | None = None
) -> DimensionEstimate:
    """Upper Assouad-type exponent from the card <= C (delta/alpha)^beta law."""
    if params is None:
        params = EstimatorParams()
    points = _subset_points(space, params)
    if not points:
        raise NoEligibleSubsetError(
            f"no subset reaches ratio {params.rho_min:g} on {space.card} points"
        )
    slope, intercept, degenerate = _fit(points)
    ex_max, ex_min = _extremals(points)
    if degenerate:
        beta, const = ex_max, 1.0
    else:
        beta, const = max(slope, 0.0), math.exp(intercept)
    r_min, r_max = params.resolve_window(space)
    return DimensionEstimate(
        beta_hat=beta,
        constant_C=const,
        method="subset-extremal",
        kind="assouad",
        window=(params.rho_min, r_min, r_max),
        samples=len(points),
        points=points,
        extremal_max=ex_max,
        extremal_min=ex_min,
    )


def lower_assouad_estimate(
    space: FiniteMetricSpace, params: EstimatorParams | None = None
) -> DimensionEstimate:
    """Lower Assouad-type exponent from the card >= C (delta/alpha)^beta law.

    Computed over the same subset pool. The reported value is the smaller
    of the fitted slope and the smallest single-point exponent, which
    keeps lower <= upper on every input by construction.
    """
    if params is None:
        params = EstimatorParams()
    points = _subset_points(space, params)
    if not points:
        raise NoEligibleSubsetError(
            f"no subset reaches ratio {params.rho_min:g} on {space.card} points"
        )
    slope, intercept, degenerate = _fit(points)
    ex_max, ex_min = _extremals(points)
    if degenerate or ex_min <= slope:
        beta, const = ex_min, 1.0
    else:
        beta, const = max(slope, 0.0), math.exp(intercept)
    r_min, r_max = params.resolve_window(space)
    return DimensionEstimate(
        beta_hat=max(beta, 0.0),
        constant_C=const,
        method="subset-extremal",
        kind="lower-assouad",
        window=(params.rho_min, r_min, r_max),
        samples=len(points),
        points=points,
        extremal_max=ex_max,
        extremal_min=ex_min,
    )


def assouad_estimate_covering(
    space: FiniteMetricSpace, params: EstimatorParams | None = None
) -> DimensionEstimate:
    """Upper Assouad-type exponent from greedy covering counts of balls."""
    if params is None:
        params = EstimatorParams()
    g = space.separation()
    if math.isinf(g):
        raise NoEligibleScalePairError("singleton space has no scales")
    d = space.d
    points: list[tuple[float, float]] = []
    for members, r in ball_scale_pairs(space, params):
        ix = np.asarray(members, dtype=np.intp)
        delta = float(d[np.ix_(ix, ix)].max())
        cert = covering_number(space.subset(members), r, mode="greedy")
        if cert.count < 2:
            continue
        x = math.log((delta + g) / (r + g))
        points.append((x, math.log(cert.count)))
    deduped = _dedup_sorted(points)
    if not deduped:
        raise NoEligibleScalePairError(
            f"no (ball, scale) pair reaches ratio {params.rho_min:g}"
        )
    slope, intercept, degenerate = _fit(deduped)
    ex_max, ex_min = _extremals(deduped)
    if degenerate:
        beta, const = ex_max, 1.0
    else:
        beta, const = max(slope, 0.0), math.exp(intercept)
    r_min, r_max = params.resolve_window(space)
    return DimensionEstimate(
        beta_hat=beta,
        constant_C=const,
        method="covering-fit",
        kind="assouad",
        window=(params.rho_min, r_min, r_max),
        samples=len(deduped),
        points=deduped,
        extremal_max=ex_max,
        extremal_min=ex_min,
    )
