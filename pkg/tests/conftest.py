"""Shared generators for the test suite.

Two space families:
    * euclidean_space -- points in the unit square, plane distances; always
      a metric, generic (no ties) almost surely.
    * random_metric_space -- random symmetric weights closed under
      shortest paths, so the triangle inequality holds exactly; produces
      less structured metrics than the euclidean family.

Both are driven by an explicit Generator so every test is seeded.
"""

from __future__ import annotations

import numpy as np
import pytest

from assouad_lab import FiniteMetricSpace


def euclidean_space(
    rng: np.random.Generator, n: int, dim: int = 2, prefix: str = "x"
) -> FiniteMetricSpace:
    pts = rng.uniform(0.0, 1.0, size=(n, dim))
    d = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2))
    return FiniteMetricSpace(tuple(f"{prefix}{i}" for i in range(n)), d)


def random_metric_space(
    rng: np.random.Generator, n: int, prefix: str = "m"
) -> FiniteMetricSpace:
    raw = rng.uniform(0.5, 2.0, size=(n, n))
    d = np.minimum(raw, raw.T)
    np.fill_diagonal(d, 0.0)
    for k in range(n):  # shortest-path closure enforces the triangle inequality
        d = np.minimum(d, d[:, k : k + 1] + d[k : k + 1, :])
    return FiniteMetricSpace(tuple(f"{prefix}{i}" for i in range(n)), d)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(0)
