"""OSPA, GOSPA and COSPA set distances with their error decompositions.

All three metrics share the same optimal pairing: the cost-minimizing
injective map from the smaller set into the larger one over cut-off distances
raised to the p-th power. Each metric then turns that pairing into a value and
a localization / outline / cardinality split:

* ``ospa``: normalized by the larger cardinality; cut-off pairs are folded
  into the localization term, so the reported outline error is always 0.
* ``gospa``: unnormalized; the cardinality gap is penalized at ``c**p / alpha``.
* ``cospa``: normalized like OSPA but with a separate cardinality penalty
  ``c_dot >= c``, an explicit outline term for pairs at distance ``>= c``, and
  an extra ``xi``-weighted penalty when exactly one set is empty.

Decompositions are reported for the deterministic tie-broken assignment; tied
optima could split localization and outline differently, the totals never
change. The boundary case ``d == c`` counts as outline, decided on the raw
distance, never by comparing against the clamped value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np
from scipy.optimize import linear_sum_assignment

from .assignment import Assignment, CostMatrix, solve_assignment
from .core import (
    DimensionMismatchError,
    MetricParams,
    MetricResult,
    PointSet,
    UnsupportedOrderError,
    proot,
)

METRIC_NAMES = ("ospa", "gospa", "cospa")

_EMPTY_RESULT = MetricResult(0.0, 0.0, 0.0, 0.0, None)


@dataclass(frozen=True)
class AssociationReport:
    """Per-target association diagnostics for one truth/estimate pair.

    Pair indices are ``(smaller-set index, larger-set index)``;
    ``smaller_is_first`` records whether the first argument (the truth set)
    was the smaller side, so callers can map indices back to targets.

    * ``correct_pairs``: assigned pairs at raw distance ``< c``.
    * ``outline_pairs``: assigned pairs at raw distance ``>= c``; each one
      contributes a missing truth target and a false estimate.
    * ``missing``: truth indices with no estimate within the cut-off.
    * ``false_targets``: estimate indices with no truth within the cut-off.
    """

    correct_pairs: tuple[tuple[int, int], ...]
    outline_pairs: tuple[tuple[int, int], ...]
    missing: tuple[int, ...]
    false_targets: tuple[int, ...]
    smaller_is_first: bool

    @property
    def n_correct(self) -> int:
        return len(self.correct_pairs)

    @property
    def n_outline(self) -> int:
        return len(self.outline_pairs)


@dataclass(frozen=True)
class StepResult:
    """Metric results and association diagnostics for one time step."""

    time: int
    n_truth: int
    n_estimate: int
    results: Mapping[str, MetricResult]
    association: AssociationReport


@dataclass(frozen=True)
class _Pairing:
    """Shared optimal-assignment context for one pair of sets."""

    small: PointSet
    large: PointSet
    first_is_small: bool
    cost: np.ndarray
    assignment: Assignment
    pair_raw: np.ndarray

    @property
    def n_large(self) -> int:
        return len(self.large)

    @property
    def gap(self) -> int:
        return len(self.large) - len(self.small)


def _raw_matrix(a: np.ndarray, b: np.ndarray, order: float) -> np.ndarray:
    diff = a[:, None, :] - b[None, :, :]
    if math.isinf(order):
        return np.abs(diff).max(axis=-1)
    return np.linalg.norm(diff, ord=order, axis=-1)


def _make_pairing(x: PointSet, y: PointSet, params: MetricParams) -> _Pairing | None:
    """Orient, build cut-off costs and solve the shared assignment.

    Returns ``None`` when both sets are empty. For infinite order the
    assignment is solved at exponent 1, which only affects the association
    report, never the metric value.
    """
    if len(x) == 0 and len(y) == 0:
        return None
    if len(x) > 0 and len(y) > 0 and x.dim != y.dim:
        raise DimensionMismatchError(f"point sets differ in dimension: {x.dim} vs {y.dim}")
    first_is_small = len(x) <= len(y)
    small, large = (x, y) if first_is_small else (y, x)
    if len(small) == 0:
        empty = np.empty((0, len(large)))
        return _Pairing(small, large, first_is_small, empty, Assignment((), 0.0), np.empty(0))
    raw = _raw_matrix(small.points, large.points, params.base_norm)
    exponent = params.p if math.isfinite(params.p) else 1.0
    cost = np.minimum(raw, params.c) ** exponent
    assignment = solve_assignment(CostMatrix(cost))
    pair_raw = raw[np.arange(len(small)), np.asarray(assignment.mapping, dtype=int)]
    return _Pairing(small, large, first_is_small, cost, assignment, pair_raw)


def _close_cost_sum(pairing: _Pairing, params: MetricParams) -> tuple[float, int]:
    """fsum of assigned pair costs below the cut-off and the outline count."""
    terms = []
    n_outline = 0
    for i, j in enumerate(pairing.assignment.mapping):
        if pairing.pair_raw[i] >= params.c:
            n_outline += 1
        else:
            terms.append(pairing.cost[i, j])
    return math.fsum(terms), n_outline


def _bottleneck(cut: np.ndarray) -> tuple[float, tuple[int, ...]]:
    """Min-max perfect matching value and one mapping achieving it."""
    values = np.unique(cut)
    lo, hi = 0, values.size - 1
    while lo < hi:
        mid = (lo + hi) // 2
        blocked = (cut > values[mid]).astype(float)
        rows, cols = linear_sum_assignment(blocked)
        if blocked[rows, cols].sum() == 0:
            hi = mid
        else:
            lo = mid + 1
    masked = np.where(cut <= values[lo], cut, np.inf)
    rows, cols = linear_sum_assignment(masked)
    mapping = [0] * cut.shape[0]
    for r, s in zip(rows, cols):
        mapping[r] = int(s)
    return float(values[lo]), tuple(mapping)


def _infinite_order(x: PointSet, y: PointSet, params: MetricParams, penalty: float) -> MetricResult:
    """Order-infinity evaluation: min-max pair distance if the cardinalities
    agree, otherwise the flat penalty (c for OSPA, c_dot for COSPA)."""
    if len(x) != len(y):
        pairing = _make_pairing(x, y, params)
        assert pairing is not None
        return MetricResult(penalty, 0.0, 0.0, penalty, pairing.assignment)
    if len(x) == 0:
        return _EMPTY_RESULT
    if x.dim != y.dim:
        raise DimensionMismatchError(f"point sets differ in dimension: {x.dim} vs {y.dim}")
    raw = _raw_matrix(x.points, y.points, params.base_norm)
    cut = np.minimum(raw, params.c)
    value, mapping = _bottleneck(cut)
    cost = math.fsum(cut[i, j] for i, j in enumerate(mapping))
    return MetricResult(value, value, 0.0, 0.0, Assignment(mapping, cost))


def _normalized_total_p(pairing: _Pairing, penalty_p: float, xi: float) -> float:
    """Shared normalized p-th power: OSPA with xi = 0, COSPA with its xi."""
    n = pairing.n_large
    if len(pairing.small) == 0:
        return penalty_p + xi * (penalty_p * (n - 1) / n)
    return (pairing.assignment.cost + penalty_p * pairing.gap) / n


def _ospa_from(pairing: _Pairing | None, params: MetricParams) -> MetricResult:
    if pairing is None:
        return _EMPTY_RESULT
    penalty_p = params.c ** params.p
    total_p = _normalized_total_p(pairing, penalty_p, 0.0)
    n = pairing.n_large
    localization = proot(pairing.assignment.cost / n, params.p)
    cardinality = params.c * proot(pairing.gap / n, params.p)
    return MetricResult(proot(total_p, params.p), localization, 0.0, cardinality, pairing.assignment)


def _gospa_from(pairing: _Pairing | None, params: MetricParams) -> MetricResult:
    if pairing is None:
        return _EMPTY_RESULT
    penalty_p = params.c ** params.p
    close_sum, n_outline = _close_cost_sum(pairing, params)
    card_p = (penalty_p / params.alpha) * pairing.gap
    total_p = pairing.assignment.cost + card_p
    return MetricResult(
        proot(total_p, params.p),
        proot(close_sum, params.p),
        params.c * proot(float(n_outline), params.p),
        proot(card_p, params.p),
        pairing.assignment,
    )


def _cospa_from(pairing: _Pairing | None, params: MetricParams) -> MetricResult:
    if pairing is None:
        return _EMPTY_RESULT
    penalty_p = params.c_dot ** params.p
    total_p = _normalized_total_p(pairing, penalty_p, params.xi)
    n = pairing.n_large
    close_sum, n_outline = _close_cost_sum(pairing, params)
    localization = proot(close_sum / n, params.p)
    outline = params.c * proot(n_outline / n, params.p)
    card_share = pairing.gap / n
    if len(pairing.small) == 0:
        card_share += params.xi * (n - 1) / n
    cardinality = params.c_dot * proot(card_share, params.p)
    return MetricResult(proot(total_p, params.p), localization, outline, cardinality, pairing.assignment)


def ospa(x: PointSet, y: PointSet, params: MetricParams | None = None) -> MetricResult:
    """Optimal subpattern assignment distance between two point sets.

    Normalized by the larger cardinality; bounded above by ``c``. The
    decomposition folds cut-off pairs into localization, so ``outline`` is
    always 0 and ``localization**p + cardinality**p == total**p``.

    Args:
        x, y: point sets of equal dimension (either may be empty).
        params: metric parameters; defaults to ``MetricParams()``.
    """
    params = params or MetricParams()
    if math.isinf(params.p):
        return _infinite_order(x, y, params, params.c)
    return _ospa_from(_make_pairing(x, y, params), params)


def gospa(x: PointSet, y: PointSet, params: MetricParams | None = None) -> MetricResult:
    """Generalized OSPA distance (unnormalized, finite order only).

    The cardinality gap is charged ``c**p / alpha`` per unpaired target, so
    the value grows with set size instead of averaging over it.

    Raises:
        UnsupportedOrderError: for ``p = math.inf``, where the unnormalized
            form is not defined.
    """
    params = params or MetricParams()
    if math.isinf(params.p):
        raise UnsupportedOrderError("gospa is defined for finite order only")
    return _gospa_from(_make_pairing(x, y, params), params)


def gospa_alt_alpha2(x: PointSet, y: PointSet, params: MetricParams | None = None) -> MetricResult:
    """GOSPA at ``alpha = 2`` computed through the per-target mismatch form.

    Instead of charging the cardinality gap directly, this route charges
    ``c**p / 2`` for every target, on either side, that is not part of a pair
    closer than the cut-off. It must agree with ``gospa`` whenever
    ``alpha == 2``, which makes it a useful cross-check.

    Raises:
        ValueError: if ``alpha != 2``.
        UnsupportedOrderError: for ``p = math.inf``.
    """
    params = params or MetricParams()
    if params.alpha != 2:
        raise ValueError(f"the mismatch form requires alpha = 2, got {params.alpha}")
    if math.isinf(params.p):
        raise UnsupportedOrderError("gospa is defined for finite order only")
    pairing = _make_pairing(x, y, params)
    if pairing is None:
        return _EMPTY_RESULT
    penalty_p = params.c ** params.p
    close_sum, n_outline = _close_cost_sum(pairing, params)
    n_close = len(pairing.small) - n_outline
    mismatched = len(x) + len(y) - 2 * n_close
    total_p = close_sum + (penalty_p / 2.0) * mismatched
    card_p = (penalty_p / 2.0) * pairing.gap
    return MetricResult(
        proot(total_p, params.p),
        proot(close_sum, params.p),
        params.c * proot(float(n_outline), params.p),
        proot(card_p, params.p),
        pairing.assignment,
    )


def cospa(x: PointSet, y: PointSet, params: MetricParams | None = None) -> MetricResult:
    """Complete OSPA distance between two point sets.

    Like OSPA but with a separate cardinality penalty ``c_dot >= c``, an
    explicit outline term for pairs at distance ``>= c``, and an extra
    ``xi``-weighted penalty when exactly one set is empty. With
    ``c_dot == c`` and ``xi == 0`` it reduces to OSPA exactly.

    Args:
        x, y: point sets of equal dimension (either may be empty).
        params: metric parameters; defaults to ``MetricParams()``.
    """
    params = params or MetricParams()
    if math.isinf(params.p):
        return _infinite_order(x, y, params, params.c_dot)
    return _cospa_from(_make_pairing(x, y, params), params)


def _report_from(pairing: _Pairing | None, params: MetricParams) -> AssociationReport:
    if pairing is None:
        return AssociationReport((), (), (), (), True)
    correct: list[tuple[int, int]] = []
    outline: list[tuple[int, int]] = []
    for i, j in enumerate(pairing.assignment.mapping):
        (outline if pairing.pair_raw[i] >= params.c else correct).append((i, int(j)))
    assigned = set(int(j) for j in pairing.assignment.mapping)
    unpaired = [j for j in range(pairing.n_large) if j not in assigned]
    if pairing.first_is_small:
        missing = [i for i, _ in outline]
        false_targets = sorted([j for _, j in outline] + unpaired)
    else:
        missing = sorted([j for _, j in outline] + unpaired)
        false_targets = [i for i, _ in outline]
    return AssociationReport(
        tuple(correct),
        tuple(outline),
        tuple(missing),
        tuple(false_targets),
        pairing.first_is_small,
    )


def classify_associations(truth: PointSet, estimate: PointSet, params: MetricParams | None = None) -> AssociationReport:
    """Classify targets as correctly associated, missing or false.

    Runs the shared optimal assignment, then splits assigned pairs on the raw
    distance test ``d >= c``. Every outline pair contributes one missing truth
    target and one false estimate; unpaired members of the larger set are
    missing (truth side) or false (estimate side).
    """
    params = params or MetricParams()
    return _report_from(_make_pairing(truth, estimate, params), params)


_FROM_PAIRING = {"ospa": _ospa_from, "gospa": _gospa_from, "cospa": _cospa_from}
_METRIC_FUNCS = {"ospa": ospa, "gospa": gospa, "cospa": cospa}


def eval_series(truth: Mapping[int, PointSet], estimate: Mapping[int, PointSet],
                params: MetricParams | None = None,
                which: Iterable[str] = METRIC_NAMES) -> list[StepResult]:
    """Evaluate selected metrics over two time-indexed sets of point sets.

    The series are joined on the union of their time keys; a side with no
    entry at a time is treated as the empty set there. Results are ordered by
    time, metrics within each step in canonical order (ospa, gospa, cospa).
    One assignment is solved per step and shared by all selected metrics and
    the association report.

    Args:
        truth: time-indexed truth sets.
        estimate: time-indexed estimated sets.
        params: shared metric parameters.
        which: metric name selection, any subset of ``METRIC_NAMES``.

    Raises:
        ValueError: on unknown metric names.
        UnsupportedOrderError: if gospa is selected at infinite order.
        DimensionMismatchError: naming the first instant whose sets disagree
            in dimension with the rest of the series.
    """
    params = params or MetricParams()
    requested = set(which)
    unknown = requested - set(METRIC_NAMES)
    if unknown:
        raise ValueError(f"unknown metric names: {sorted(unknown)}")
    selected = [name for name in METRIC_NAMES if name in requested]
    if math.isinf(params.p) and "gospa" in selected:
        raise UnsupportedOrderError("gospa is defined for finite order only")
    times = sorted(set(truth) | set(estimate))
    dim: int | None = None
    for t in times:
        for side, series in (("truth", truth), ("estimate", estimate)):
            entry = series.get(t)
            if entry is not None and len(entry) > 0:
                if dim is None:
                    dim = entry.dim
                elif entry.dim != dim:
                    raise DimensionMismatchError(
                        f"{side} set at step {t} has dimension {entry.dim}, expected {dim}"
                    )
    fill = PointSet.empty(dim or 1)
    steps: list[StepResult] = []
    for t in times:
        x = truth.get(t, fill)
        y = estimate.get(t, fill)
        if len(x) == 0:
            x = fill
        if len(y) == 0:
            y = fill
        if math.isinf(params.p):
            results = {name: _METRIC_FUNCS[name](x, y, params) for name in selected}
            report = classify_associations(x, y, params)
        else:
            pairing = _make_pairing(x, y, params)
            results = {name: _FROM_PAIRING[name](pairing, params) for name in selected}
            report = _report_from(pairing, params)
        steps.append(StepResult(t, len(x), len(y), results, report))
    return steps
