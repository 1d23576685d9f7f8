"""Domain types, parameter validation and the cut-off base distance.

Everything downstream (assignment, metrics, scenarios, file I/O) builds on the
three value types defined here: ``PointSet`` for one instant of targets,
``MetricParams`` for a validated parameter bundle, and ``MetricResult`` for a
metric value with its error decomposition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterator, Mapping

import numpy as np

if TYPE_CHECKING:
    from .assignment import Assignment

INFINITY = math.inf


class ParameterError(ValueError):
    """A metric parameter bundle violates one or more allowed ranges.

    Carries ``violations``, a list of ``(field_name, reason)`` pairs so callers
    can report every problem at once instead of the first one hit.
    """

    def __init__(self, violations: list[tuple[str, str]]):
        self.violations = list(violations)
        super().__init__("; ".join(f"{name}: {reason}" for name, reason in self.violations))


class DimensionMismatchError(ValueError):
    """Two state vectors or point sets disagree on dimension."""


class UnsupportedOrderError(ValueError):
    """The requested metric order is not defined for this distance."""


def _is_number(value: object) -> bool:
    return isinstance(value, (int, float, np.integer, np.floating)) and not isinstance(value, bool)


class PointSet:
    """A finite set of same-dimension real state vectors at one instant.

    Points are stored as a read-only ``(n, dim)`` float array. Duplicates are
    allowed and element order never affects any metric value. An empty set
    still carries a dimension so that downstream code can shape cost matrices
    and serialized rows.

    Args:
        points: array-like of shape ``(n, dim)``; a 1-D array is read as
            ``n`` scalar (one-dimensional) states.
        dim: required when ``points`` is empty and the dimension cannot be
            inferred from its shape.
    """

    __slots__ = ("points", "dim")

    def __init__(self, points, dim: int | None = None):
        arr = np.asarray(points, dtype=float)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1) if arr.size else arr.reshape(0, dim or 1)
        if arr.ndim != 2:
            raise ValueError(f"points must be a 2-D array of row vectors, got shape {arr.shape}")
        if arr.size == 0:
            arr = arr.reshape(0, dim if dim is not None else max(arr.shape[1], 1))
        if dim is not None and arr.shape[1] != dim:
            raise DimensionMismatchError(f"expected dimension {dim}, got {arr.shape[1]}")
        if arr.shape[1] < 1:
            raise ValueError("state dimension must be at least 1")
        if not np.isfinite(arr).all():
            raise ValueError("state vectors must be finite")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "points", arr)
        object.__setattr__(self, "dim", int(arr.shape[1]))

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("PointSet is immutable")

    @classmethod
    def empty(cls, dim: int = 1) -> "PointSet":
        """An empty set with the given state dimension."""
        return cls(np.empty((0, dim)), dim=dim)

    def __len__(self) -> int:
        return self.points.shape[0]

    def __iter__(self) -> Iterator[np.ndarray]:
        return iter(self.points)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self.points, other.points)

    def __repr__(self) -> str:
        return f"PointSet(n={len(self)}, dim={self.dim})"


def _check_params(p, base_norm, c, c_dot, xi, alpha) -> list[tuple[str, str]]:
    violations: list[tuple[str, str]] = []
    if not _is_number(p) or math.isnan(p) or p < 1:
        violations.append(("p", f"order must satisfy 1 <= p <= inf, got {p!r}"))
    if not _is_number(base_norm) or math.isnan(base_norm) or base_norm < 1:
        violations.append(("base_norm", f"vector norm order must satisfy 1 <= p' <= inf, got {base_norm!r}"))
    if not _is_number(c) or not math.isfinite(c) or c <= 0:
        violations.append(("c", f"cut-off must be a finite positive number, got {c!r}"))
    if not _is_number(c_dot) or not math.isfinite(c_dot):
        violations.append(("c_dot", f"cardinality penalty must be a finite number, got {c_dot!r}"))
    elif _is_number(c) and math.isfinite(c) and c > 0 and c_dot < c:
        violations.append(("c_dot", f"cardinality penalty must satisfy c_dot >= c, got {c_dot!r} < {c!r}"))
    if not _is_number(xi) or math.isnan(xi) or not 0 <= xi <= 1:
        violations.append(("xi", f"empty-set weight must lie in [0, 1], got {xi!r}"))
    if not _is_number(alpha) or math.isnan(alpha) or not 0 < alpha <= 2:
        violations.append(("alpha", f"cardinality scale must lie in (0, 2], got {alpha!r}"))
    return violations


@dataclass(frozen=True)
class MetricParams:
    """Validated parameter bundle shared by all three set distances.

    Attributes:
        p: metric order, ``1 <= p <= math.inf``.
        base_norm: order of the vector norm used for base distances,
            ``1 <= base_norm <= math.inf`` (2 gives Euclidean distance).
        c: cut-off distance, finite and positive.
        c_dot: cardinality penalty, ``c_dot >= c``.
        xi: empty-set weight in ``[0, 1]``.
        alpha: cardinality scale in ``(0, 2]``.

    Defaults mirror the standard tracking-benchmark setting: first order,
    Euclidean base distance, ``c = 80``, ``c_dot = 81``, ``xi = 1``,
    ``alpha = 2``.
    """

    p: float = 1.0
    base_norm: float = 2.0
    c: float = 80.0
    c_dot: float = 81.0
    xi: float = 1.0
    alpha: float = 2.0

    def __post_init__(self):
        violations = _check_params(self.p, self.base_norm, self.c, self.c_dot, self.xi, self.alpha)
        if violations:
            raise ParameterError(violations)
        for name in ("p", "base_norm", "c", "c_dot", "xi", "alpha"):
            object.__setattr__(self, name, float(getattr(self, name)))


_PARAM_FIELDS = ("p", "base_norm", "c", "c_dot", "xi", "alpha")


def validate_params(raw: Mapping[str, float] | None = None, **overrides: float) -> MetricParams:
    """Build a ``MetricParams`` from a loose bundle, reporting every violation.

    Args:
        raw: optional mapping with any of the parameter fields.
        overrides: the same fields as keyword arguments (take precedence).

    Returns:
        A validated ``MetricParams``.

    Raises:
        ParameterError: listing each violated range with its field name.
        TypeError: on unknown field names.
    """
    merged: dict[str, float] = {}
    for source in (raw or {}, overrides):
        for key, value in dict(source).items():
            if key not in _PARAM_FIELDS:
                raise TypeError(f"unknown metric parameter {key!r}")
            merged[key] = value
    return MetricParams(**merged)


@dataclass(frozen=True)
class MetricResult:
    """A metric value together with its error decomposition.

    ``localization**p + outline**p + cardinality**p == total**p`` for finite
    order (the normalized metrics divide each part by the larger cardinality
    before the root, so the identity holds part-wise). ``assignment`` is the
    optimal pairing that produced the value; it is ``None`` when both sets
    were empty.
    """

    total: float
    localization: float
    outline: float
    cardinality: float
    assignment: "Assignment | None" = None


def base_distance(x, y, base_norm: float = 2.0) -> float:
    """Plain vector-norm distance between two same-dimension states."""
    xv = np.asarray(x, dtype=float)
    yv = np.asarray(y, dtype=float)
    if xv.ndim != 1 or yv.ndim != 1:
        raise ValueError("states must be 1-D vectors")
    if xv.shape != yv.shape:
        raise DimensionMismatchError(f"dimension mismatch: {xv.shape[0]} vs {yv.shape[0]}")
    if not (np.isfinite(xv).all() and np.isfinite(yv).all()):
        raise ValueError("states must be finite")
    if math.isinf(base_norm):
        return float(np.max(np.abs(xv - yv))) if xv.size else 0.0
    return float(np.linalg.norm(xv - yv, ord=base_norm))


def cutoff_distance(x, y, a: float, base_norm: float = 2.0) -> float:
    """Base distance between two states, saturated at the cut-off ``a``.

    Args:
        x, y: same-dimension state vectors.
        a: cut-off, must be positive.
        base_norm: order of the underlying vector norm, ``>= 1``.

    Returns:
        ``min(a, ||x - y||_base_norm)``.
    """
    if not _is_number(a) or math.isnan(a) or a <= 0:
        raise ParameterError([("a", f"cut-off must be positive, got {a!r}")])
    if not _is_number(base_norm) or math.isnan(base_norm) or base_norm < 1:
        raise ParameterError([("base_norm", f"vector norm order must be >= 1, got {base_norm!r}")])
    return min(float(a), base_distance(x, y, base_norm))


def proot(value: float, p: float) -> float:
    """p-th root of a nonnegative number, exact for the common orders."""
    if value < 0:
        raise ValueError(f"expected a nonnegative value, got {value!r}")
    if p == 1:
        return float(value)
    if p == 2:
        return math.sqrt(value)
    if value == 0:
        return 0.0
    return float(value) ** (1.0 / p)
