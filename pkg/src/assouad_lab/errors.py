"""Exception types shared across the toolkit.

Every error that reports a concrete witness carries it as attributes so
callers (and the CLI) can show which points broke which requirement instead
of a bare message.
"""

from __future__ import annotations

__all__ = [
    "AssouadLabError",
    "MetricValidationError",
    "AsymmetryError",
    "NegativeDistanceError",
    "NonzeroDiagonalError",
    "ZeroOffDiagonalError",
    "TriangleViolationError",
    "NonPositiveScaleError",
    "EmptySubsetError",
    "DifferentBaseSpaceError",
    "ExactLimitExceededError",
    "NotSurjectiveError",
    "VerificationFailedError",
    "NoEligibleSubsetError",
    "NoEligibleScalePairError",
    "DiameterBoundViolatedError",
    "LevelTooLargeError",
    "DisconnectedGraphError",
    "BasePointMissingError",
    "SingletonError",
    "BucketUnrealizableError",
    "TruncationTooSmallError",
    "HypothesisViolatedError",
    "PrerequisiteNotMetError",
    "InputFormatError",
]


class AssouadLabError(Exception):
    """Base class for all toolkit errors."""


class MetricValidationError(AssouadLabError):
    """A candidate distance matrix failed one of the metric axioms."""


class AsymmetryError(MetricValidationError):
    def __init__(self, i: int, j: int, dij: float, dji: float):
        self.i, self.j, self.dij, self.dji = i, j, dij, dji
        super().__init__(f"d[{i},{j}]={dij!r} != d[{j},{i}]={dji!r}")


class NegativeDistanceError(MetricValidationError):
    def __init__(self, i: int, j: int, value: float):
        self.i, self.j, self.value = i, j, value
        super().__init__(f"d[{i},{j}]={value!r} is negative")


class NonzeroDiagonalError(MetricValidationError):
    def __init__(self, i: int, value: float):
        self.i, self.value = i, value
        super().__init__(f"d[{i},{i}]={value!r} is not zero")


class ZeroOffDiagonalError(MetricValidationError):
    def __init__(self, i: int, j: int):
        self.i, self.j = i, j
        super().__init__(f"d[{i},{j}]=0 for distinct points {i}, {j}")


class TriangleViolationError(MetricValidationError):
    def __init__(self, i: int, j: int, k: int, deficit: float):
        self.i, self.j, self.k, self.deficit = i, j, k, deficit
        super().__init__(
            f"d[{i},{j}] exceeds d[{i},{k}]+d[{k},{j}] by {deficit:.3e}"
        )


class NonPositiveScaleError(AssouadLabError):
    def __init__(self, factor: float):
        self.factor = factor
        super().__init__(f"scale factor must be positive, got {factor!r}")


class EmptySubsetError(AssouadLabError):
    def __init__(self, what: str = "subset"):
        super().__init__(f"{what} must contain at least one point")


class DifferentBaseSpaceError(AssouadLabError):
    def __init__(self):
        super().__init__("subsets live in different base spaces")


class ExactLimitExceededError(AssouadLabError):
    def __init__(self, size: int, limit: int):
        self.size, self.limit = size, limit
        super().__init__(f"instance size {size} exceeds exact-mode limit {limit}")


class NotSurjectiveError(AssouadLabError):
    def __init__(self, side: str, missing: int):
        self.side, self.missing = side, missing
        super().__init__(f"correspondence misses {side} point {missing}")


class VerificationFailedError(AssouadLabError):
    def __init__(self, condition: str, witness: tuple):
        self.condition, self.witness = condition, witness
        super().__init__(f"approximation condition {condition} fails at {witness}")


class NoEligibleSubsetError(AssouadLabError):
    def __init__(self, detail: str):
        super().__init__(f"no eligible diagnostic points: {detail}")


class NoEligibleScalePairError(AssouadLabError):
    def __init__(self, detail: str):
        super().__init__(f"no eligible (ball, scale) pairs: {detail}")


class DiameterBoundViolatedError(AssouadLabError):
    def __init__(self, index: int, diameter: float, bound: float):
        self.index, self.diameter, self.bound = index, diameter, bound
        super().__init__(
            f"component {index} has diameter {diameter!r} > bound {bound!r}"
        )


class LevelTooLargeError(AssouadLabError):
    def __init__(self, level: int, limit: int):
        self.level, self.limit = level, limit
        super().__init__(f"level {level} exceeds limit {limit}")


class DisconnectedGraphError(AssouadLabError):
    def __init__(self, component_a: int, component_b: int):
        self.component_a, self.component_b = component_a, component_b
        super().__init__(
            f"vertices {component_a} and {component_b} are not connected"
        )


class BasePointMissingError(AssouadLabError):
    def __init__(self, label: str):
        self.label = label
        super().__init__(f"base point {label!r} not found")


class SingletonError(AssouadLabError):
    def __init__(self, what: str):
        super().__init__(f"{what} is a singleton; separation is undefined")


class BucketUnrealizableError(AssouadLabError):
    def __init__(self, index: int, bucket: tuple):
        self.index, self.bucket = index, bucket
        super().__init__(f"dictionary has no set in bucket {bucket} (step {index})")


class TruncationTooSmallError(AssouadLabError):
    def __init__(self, n: int, minimum: int):
        self.n, self.minimum = n, minimum
        super().__init__(f"truncation {n} below required minimum {minimum}")


class HypothesisViolatedError(AssouadLabError):
    def __init__(self, name: str, detail: str):
        self.name, self.detail = name, detail
        super().__init__(f"hypothesis {name} violated: {detail}")


class PrerequisiteNotMetError(AssouadLabError):
    def __init__(self, detail: str):
        super().__init__(detail)


class InputFormatError(AssouadLabError):
    """A matrix/config file could not be parsed into the expected shape."""
