"""Gromov-Hausdorff solvers against exhaustive enumeration, plus the
scaling identity, bound sandwiches, and witness contracts."""

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from assouad_lab import (
    GH_EXACT_LIMIT,
    Correspondence,
    FiniteMetricSpace,
    distortion,
    extract_approximation,
    gh_auto,
    gh_bounds,
    gh_exact,
    scale,
)
from assouad_lab.errors import ExactLimitExceededError, NotSurjectiveError
from assouad_lab.gh import gh_lower_bound

from conftest import euclidean_space, random_metric_space


def _line_space(points: list[float]) -> FiniteMetricSpace:
    arr = np.asarray(points)
    d = np.abs(arr[:, None] - arr[None, :])
    return FiniteMetricSpace(tuple(f"p{i}" for i in range(len(points))), d)


def gh_oracle(x: FiniteMetricSpace, y: FiniteMetricSpace) -> float:
    """Half the minimum distortion over ALL surjective relations, by brute
    force over the 2^(|X||Y|) subsets of X x Y. Slot s = a*ny + b."""
    nx, ny = x.card, y.card
    nm = nx * ny
    assert nm <= 16
    pair_d = np.empty((nm, nm))
    for s in range(nm):
        a, b = divmod(s, ny)
        for t in range(nm):
            c, e = divmod(t, ny)
            pair_d[s, t] = abs(x.d[a, c] - y.d[b, e])
    masks = np.arange(1 << nm, dtype=np.uint32)
    rowmax = np.zeros((nm, 1 << nm))
    for j in range(nm):
        has = (masks >> j) & 1 == 1
        rowmax[:, has] = np.maximum(rowmax[:, has], pair_d[:, j][:, None])
    dis = np.zeros(1 << nm)
    for s in range(nm):
        has = (masks >> s) & 1 == 1
        dis[has] = np.maximum(dis[has], rowmax[s, has])
    valid = np.ones(1 << nm, dtype=bool)
    for a in range(nx):
        bits = sum(1 << (a * ny + b) for b in range(ny))
        valid &= (masks & bits) != 0
    for b in range(ny):
        bits = sum(1 << (a * ny + b) for a in range(nx))
        valid &= (masks & bits) != 0
    return 0.5 * float(dis[valid].min())


def _pair(seed: int, max_pts: int):
    r = np.random.default_rng(seed)
    maker = euclidean_space if seed % 2 else random_metric_space
    x = maker(r, int(r.integers(2, max_pts + 1)), prefix="x")
    y = maker(r, int(r.integers(2, max_pts + 1)), prefix="y")
    return x, y


class TestExactSolver:
    @pytest.mark.parametrize("seed", range(40))
    def test_matches_enumeration(self, seed):
        x, y = _pair(seed, 4)
        res = gh_exact(x, y)
        assert res.kind == "exact"
        assert res.value == pytest.approx(gh_oracle(x, y), abs=1e-12)
        assert res.lower == res.upper == res.value
        # the witness certifies the value
        assert distortion(x, y, res.witness) == pytest.approx(
            2.0 * res.value, abs=1e-12
        )

    @pytest.mark.parametrize("seed", range(10))
    def test_self_distance_zero(self, seed):
        r = np.random.default_rng(seed)
        s = euclidean_space(r, int(r.integers(2, 8)))
        assert gh_exact(s, s).value == 0.0

    def test_symmetry(self):
        x, y = _pair(7, 5)
        assert gh_exact(x, y).value == pytest.approx(gh_exact(y, x).value, abs=1e-12)

    def test_point_against_space(self, rng):
        s = euclidean_space(rng, 5)
        p = FiniteMetricSpace(("p",), np.zeros((1, 1)))
        # best correspondence pairs everything with the point: dis = diam
        assert gh_exact(s, p).value == pytest.approx(s.diameter() / 2)

    def test_limit_enforced(self, rng):
        big = euclidean_space(rng, GH_EXACT_LIMIT + 1)
        small = euclidean_space(rng, 3)
        with pytest.raises(ExactLimitExceededError):
            gh_exact(big, small)

    def test_two_two_known_value(self):
        x = FiniteMetricSpace(("a", "b"), np.array([[0.0, 2.0], [2.0, 0.0]]))
        y = FiniteMetricSpace(("c", "d"), np.array([[0.0, 6.0], [6.0, 0.0]]))
        # only distance discrepancy is |2-6|; value = 2
        assert gh_exact(x, y).value == pytest.approx(2.0)


class TestScalingIdentity:
    @pytest.mark.parametrize("seed", range(15))
    @pytest.mark.parametrize("h", [0.5, 2.0, 10.0])
    def test_exact_scales(self, seed, h):
        x, y = _pair(seed, 5)
        base = gh_exact(x, y).value
        scaled = gh_exact(scale(x, h), scale(y, h)).value
        assert math.isclose(scaled, h * base, rel_tol=1e-9, abs_tol=1e-12)

    @settings(max_examples=20, deadline=None)
    @given(
        st.integers(0, 10_000),
        st.floats(0.1, 8.0, allow_nan=False, allow_infinity=False),
    )
    def test_property_scaling(self, seed, h):
        x, y = _pair(seed, 4)
        base = gh_exact(x, y).value
        scaled = gh_exact(scale(x, h), scale(y, h)).value
        assert math.isclose(scaled, h * base, rel_tol=1e-9, abs_tol=1e-12)


class TestLowerBounds:
    @pytest.mark.parametrize("seed", range(25))
    def test_lower_bound_below_exact(self, seed):
        x, y = _pair(seed, 4)
        exact = gh_exact(x, y).value
        assert gh_lower_bound(x, y) <= exact + 1e-12

    def test_diameter_gap_detected(self):
        x = FiniteMetricSpace(("a", "b"), np.array([[0.0, 1.0], [1.0, 0.0]]))
        y = scale(x, 9.0)
        assert gh_lower_bound(x, y) >= (9.0 - 1.0) / 2 - 1e-12

    def test_cardinality_pigeonhole_tight(self):
        # {0, 1, 10} vs {0, 10}: equal diameters, but any correspondence
        # must collide two of the three points, so d_GH = separation/2.
        x = _line_space([0.0, 1.0, 10.0])
        y = _line_space([0.0, 10.0])
        assert gh_lower_bound(x, y) == pytest.approx(0.5, abs=1e-15)
        assert gh_exact(x, y).value == pytest.approx(0.5, abs=1e-12)

    def test_spectrum_comparison_would_be_unsound(self):
        # Sorted-pair-distance comparison (truncated to the shorter list)
        # would claim 1.5 here; the true distance is 1.0. Guards against
        # reintroducing that bound.
        x = _line_space([0.0, 1.0, 4.0, 5.0])
        y = _line_space([3.0, 4.0, 6.0])
        assert gh_exact(x, y).value == pytest.approx(1.0, abs=1e-12)
        assert gh_lower_bound(x, y) <= 1.0 + 1e-12


class TestBoundsMode:
    @pytest.mark.parametrize("seed", range(12))
    def test_interval_sandwiches_exact(self, seed):
        x, y = _pair(seed, 6)
        res = gh_bounds(x, y)
        exact = gh_exact(x, y).value
        assert res.kind == "interval"
        assert res.lower - 1e-12 <= exact <= res.upper + 1e-12
        assert res.lower <= res.value <= res.upper
        # upper bound is certified by its witness correspondence
        assert distortion(x, y, res.witness) == pytest.approx(
            2.0 * res.upper, abs=1e-12
        )

    def test_large_spaces_fast_and_ordered(self, rng):
        x = euclidean_space(rng, 120)
        y = euclidean_space(rng, 90)
        res = gh_bounds(x, y)
        assert 0.0 <= res.lower <= res.upper

    def test_auto_dispatch(self, rng):
        small = euclidean_space(rng, 4)
        big = euclidean_space(rng, GH_EXACT_LIMIT + 2)
        assert gh_auto(small, small).kind == "exact"
        assert gh_auto(big, big).kind == "interval"


class TestCorrespondences:
    def test_surjectivity_enforced(self):
        rel = Correspondence(pairs=((0, 0), (1, 0)))
        rel.check_surjective(2, 1)
        with pytest.raises(NotSurjectiveError):
            rel.check_surjective(3, 1)
        with pytest.raises(NotSurjectiveError):
            rel.check_surjective(2, 2)

    def test_distortion_known(self):
        x = FiniteMetricSpace(("a", "b"), np.array([[0.0, 3.0], [3.0, 0.0]]))
        y = FiniteMetricSpace(("c", "d"), np.array([[0.0, 1.0], [1.0, 0.0]]))
        rel = Correspondence(pairs=((0, 0), (1, 1)))
        assert distortion(x, y, rel) == 2.0

    def test_extract_approximation(self, rng):
        x = euclidean_space(rng, 5, prefix="x")
        y = euclidean_space(rng, 5, prefix="y")
        res = gh_exact(x, y)
        approx = extract_approximation(x, y, res.witness)
        assert approx.epsilon == pytest.approx(2.0 * res.value, abs=1e-6)
        f, g = approx.f, approx.g
        for i in range(x.card):
            for j in range(x.card):
                assert abs(x.d[i, j] - y.d[f[i], f[j]]) < approx.epsilon
            assert x.d[g[f[i]], i] < approx.epsilon


class TestDiameterBound:
    """|diam X - diam Y| <= 2 d_GH on every exact computation."""

    @pytest.mark.parametrize("seed", range(30))
    def test_corpus(self, seed):
        x, y = _pair(seed, 5)
        res = gh_exact(x, y)
        assert abs(x.diameter() - y.diameter()) <= 2.0 * res.value + 1e-12
