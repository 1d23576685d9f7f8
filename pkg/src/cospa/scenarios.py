"""Analytic benchmark geometries and a desk-scale track simulator.

The figure scenarios are small planar set configurations whose metric values
have closed forms at order 1, which makes them exact regression anchors: a
truth set, one or more candidate estimates, and per-candidate formula values
for each metric. ``table_report`` sweeps their free parameters and compares
the implementation against the formulas cell by cell.

``simulate_tracks`` generates a seeded constant-velocity truth with per-step
survival, missed detections, Gaussian measurement noise and uniform Poisson
clutter, sized for quick evaluation runs rather than tracker benchmarking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .core import MetricParams, PointSet, UnsupportedOrderError, proot
from .metrics import METRIC_NAMES, cospa, gospa, ospa

FIGURE_IDS = (2, 3, 4, 5, 6, 7)

DELTA_FRACTIONS = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)


class ScenarioError(ValueError):
    """A figure scenario's geometric constraint is violated."""


def _empty_case_value(params: MetricParams, k: int) -> float:
    """COSPA between the empty set and k targets, in closed form."""
    return params.c_dot * proot(1.0 + params.xi - params.xi / k, params.p)


@dataclass(frozen=True)
class AnalyticScenario:
    """One figure geometry: a truth set, candidate estimates and formulas.

    ``candidates`` preserves the figure's candidate order. Free parameters
    (``delta``, ``eta``, ``m``, ``n``) are stored so the expected-value
    formulas can be evaluated for any compatible ``MetricParams``.
    """

    figure: int
    truth: PointSet
    candidates: dict[str, PointSet]
    delta: float | None = None
    eta: float | None = None
    m: int | None = None
    n: int | None = None

    def case_label(self) -> str:
        parts = []
        if self.m is not None:
            parts.append(f"m={self.m}")
        if self.n is not None:
            parts.append(f"n={self.n}")
        if self.delta is not None:
            parts.append(f"delta={self.delta:g}")
        if self.eta is not None:
            parts.append(f"eta={self.eta:g}")
        return ", ".join(parts) if parts else "fixed"

    def expected_values(self, params: MetricParams) -> dict[str, dict[str, float]]:
        """Closed-form metric values per candidate, valid at order 1 only."""
        if params.p != 1:
            raise UnsupportedOrderError("the analytic table formulas are stated for order 1")
        c, cd, a = params.c, params.c_dot, params.alpha
        if self.figure == 2:
            return {
                "Y": {"ospa": c, "gospa": 2 * c / a, "cospa": _empty_case_value(params, 2)},
                "Z": {"ospa": c, "gospa": 3 * c / a, "cospa": _empty_case_value(params, 3)},
            }
        if self.figure == 3:
            m, eta = self.m, self.eta
            hit = min(c, eta)
            return {
                "Z": {"ospa": c, "gospa": c * m / a, "cospa": _empty_case_value(params, m)},
                "Y": {"ospa": hit, "gospa": m * hit, "cospa": hit},
            }
        if self.figure == 4:
            d = self.delta
            return {
                "Y": {"ospa": (2 * d + c) / 3, "gospa": 2 * d + c / a, "cospa": (2 * d + cd) / 3},
                "Z": {"ospa": (2 * d + c) / 3, "gospa": 2 * d + c, "cospa": (2 * d + c) / 3},
            }
        if self.figure == 5:
            d = self.delta
            return {
                "Y_a": {"ospa": c, "gospa": 2 * c / a, "cospa": _empty_case_value(params, 2)},
                "Y_b": {"ospa": (c + d) / 2, "gospa": d + c / a, "cospa": (cd + d) / 2},
                "Y_c": {"ospa": d, "gospa": 2 * d, "cospa": d},
                "Y_d": {"ospa": (2 * d + c) / 3, "gospa": 2 * d + c / a, "cospa": (2 * d + cd) / 3},
            }
        if self.figure == 6:
            d, n = self.delta, self.n
            return {"Y": {"ospa": d, "gospa": n * d, "cospa": d}}
        d, m, n = self.delta, self.m, self.n
        return {
            "Z": {"ospa": c, "gospa": c * m / a, "cospa": _empty_case_value(params, m)},
            "Y": {
                "ospa": (m * d + (n - m) * c) / n,
                "gospa": m * d + (n - m) * c / a,
                "cospa": (m * d + (n - m) * cd) / n,
            },
        }


def _collinear(count: int, spacing: float, height: float = 0.0) -> np.ndarray:
    return np.array([[i * spacing, height] for i in range(count)], dtype=float)


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ScenarioError(message)


def make_figure_scenario(figure: int, *, c: float = 1.0, delta: float | None = None,
                         eta: float | None = None, m: int | None = None,
                         n: int | None = None, z_offset: float | None = None) -> AnalyticScenario:
    """Build one of the analytic figure geometries.

    Args:
        figure: identifier in ``FIGURE_IDS`` (2 through 7).
        c: cut-off the geometry is sized against; constraints like
            ``delta < c`` and far-point placement are checked against it.
        delta: truth-to-estimate offset (figures 4 to 7), ``0 < delta < c``.
        eta: row offset for figure 3, ``eta > 0`` (may exceed ``c``).
        m: truth cardinality (figures 3 and 7).
        n: set cardinality (figure 6) or estimate cardinality (figure 7,
            ``n > m``).
        z_offset: horizontal displacement of figure 4's far point,
            ``>= c`` so the point stays beyond the cut-off.

    Raises:
        ScenarioError: for an unknown figure identifier or a violated
            geometric constraint.
    """
    _require(c > 0, f"cut-off must be positive, got {c}")
    if figure not in FIGURE_IDS:
        raise ScenarioError(f"unknown figure {figure}; expected one of {FIGURE_IDS}")
    spacing = 0.6 * c

    if figure == 2:
        two = _collinear(2, 1.5 * c)
        three = _collinear(3, 1.5 * c)
        return AnalyticScenario(2, PointSet.empty(2), {"Y": PointSet(two), "Z": PointSet(three)})

    if figure == 3:
        m = 3 if m is None else int(m)
        eta = 0.3 * c if eta is None else float(eta)
        _require(m >= 1, f"figure 3 needs m >= 1, got {m}")
        _require(eta > 0, f"figure 3 needs eta > 0, got {eta}")
        base = _collinear(m, spacing)
        shifted = base + np.array([0.0, eta])
        return AnalyticScenario(3, PointSet(base), {"Z": PointSet.empty(2), "Y": PointSet(shifted)},
                                eta=eta, m=m)

    if figure == 4:
        delta = 0.3 * c if delta is None else float(delta)
        z_offset = c if z_offset is None else float(z_offset)
        _require(0 < delta < c, f"figure 4 needs 0 < delta < c, got delta={delta}, c={c}")
        _require(z_offset >= c, f"figure 4 needs z_offset >= c, got {z_offset}")
        base = _collinear(3, spacing)
        near_two = base[:2] + np.array([0.0, delta])
        far_point = np.array([[base[2, 0] + z_offset, delta]])
        distances = np.linalg.norm(base - far_point, axis=1)
        _require(bool((distances >= c).all()), "figure 4 far point must stay beyond the cut-off")
        return AnalyticScenario(4, PointSet(base),
                                {"Y": PointSet(near_two), "Z": PointSet(np.vstack([near_two, far_point]))},
                                delta=delta)

    if figure == 5:
        delta = 0.3 * c if delta is None else float(delta)
        _require(0 < delta < c, f"figure 5 needs 0 < delta < c, got delta={delta}, c={c}")
        base = _collinear(2, spacing)
        shifted = base + np.array([0.0, delta])
        stray = np.array([[base[1, 0], delta + c]])
        return AnalyticScenario(5, PointSet(base), {
            "Y_a": PointSet.empty(2),
            "Y_b": PointSet(shifted[:1]),
            "Y_c": PointSet(shifted),
            "Y_d": PointSet(np.vstack([shifted, stray])),
        }, delta=delta)

    if figure == 6:
        delta = 0.3 * c if delta is None else float(delta)
        n = 4 if n is None else int(n)
        _require(n >= 1, f"figure 6 needs n >= 1, got {n}")
        _require(0 < delta < c, f"figure 6 needs 0 < delta < c, got delta={delta}, c={c}")
        base = np.array([[0.0, i * 0.5 * c] for i in range(n)])
        shifted = base + np.array([delta, 0.0])
        return AnalyticScenario(6, PointSet(base), {"Y": PointSet(shifted)}, delta=delta, n=n)

    delta = 0.3 * c if delta is None else float(delta)
    m = 2 if m is None else int(m)
    n = 3 if n is None else int(n)
    _require(m >= 1, f"figure 7 needs m >= 1, got {m}")
    _require(n > m, f"figure 7 needs n > m, got m={m}, n={n}")
    _require(0 < delta < c, f"figure 7 needs 0 < delta < c, got delta={delta}, c={c}")
    base = _collinear(m, spacing)
    matched = base + np.array([0.0, delta])
    extras = np.array([[base[-1, 0] + (k + 1) * 0.35 * c, delta] for k in range(n - m)])
    estimate = np.vstack([matched, extras])
    return AnalyticScenario(7, PointSet(base), {"Z": PointSet.empty(2), "Y": PointSet(estimate)},
                            delta=delta, m=m, n=n)


_METRIC_FUNCS = {"ospa": ospa, "gospa": gospa, "cospa": cospa}


@dataclass(frozen=True)
class TableCell:
    """One computed-vs-formula comparison for a figure candidate."""

    figure: int
    case: str
    candidate: str
    metric: str
    computed: float
    expected: float

    @property
    def rel_error(self) -> float:
        scale = max(abs(self.computed), abs(self.expected))
        return 0.0 if scale == 0 else abs(self.computed - self.expected) / scale

    def passed(self, tol: float = 1e-9) -> bool:
        return self.rel_error <= tol


@dataclass(frozen=True)
class VerdictRow:
    """Which candidates a metric ranks closest, computed vs formula."""

    figure: int
    case: str
    metric: str
    computed: tuple[str, ...]
    expected: tuple[str, ...]

    def passed(self) -> bool:
        return self.computed == self.expected


def _near_minimum(values: dict[str, float], tol: float = 1e-9) -> tuple[str, ...]:
    low = min(values.values())
    slack = tol * max(abs(low), 1e-30)
    return tuple(name for name, v in values.items() if v - low <= slack)


def evaluate_scenario(scenario: AnalyticScenario, params: MetricParams) -> tuple[list[TableCell], list[VerdictRow]]:
    """Run every metric against every candidate and compare with the formulas.

    Returns the per-cell comparisons and, for figures with more than one
    candidate, a closest-candidate verdict row per metric.
    """
    expected = scenario.expected_values(params)
    case = scenario.case_label()
    cells: list[TableCell] = []
    computed: dict[str, dict[str, float]] = {name: {} for name in METRIC_NAMES}
    for candidate, point_set in scenario.candidates.items():
        for metric in METRIC_NAMES:
            value = _METRIC_FUNCS[metric](scenario.truth, point_set, params).total
            computed[metric][candidate] = value
            cells.append(TableCell(scenario.figure, case, candidate, metric,
                                   value, expected[candidate][metric]))
    verdicts: list[VerdictRow] = []
    if len(scenario.candidates) > 1:
        for metric in METRIC_NAMES:
            formula = {cand: expected[cand][metric] for cand in scenario.candidates}
            verdicts.append(VerdictRow(scenario.figure, case, metric,
                                       _near_minimum(computed[metric]),
                                       _near_minimum(formula)))
    return cells, verdicts


def table_report(params: MetricParams, figures: Iterable[int] | None = None,
                 delta_fractions: Sequence[float] = DELTA_FRACTIONS) -> tuple[list[TableCell], list[VerdictRow]]:
    """Sweep the analytic figures and compare every cell with its formula.

    Args:
        params: metric parameters; must have ``p == 1``.
        figures: subset of ``FIGURE_IDS`` (default: all).
        delta_fractions: offsets for the delta sweeps, as fractions of ``c``.

    Returns:
        ``(cells, verdicts)`` accumulated over the swept scenarios.
    """
    wanted = tuple(figures) if figures is not None else FIGURE_IDS
    for figure in wanted:
        if figure not in FIGURE_IDS:
            raise ValueError(f"unknown figure {figure}; expected one of {FIGURE_IDS}")
    c = params.c
    cells: list[TableCell] = []
    verdicts: list[VerdictRow] = []

    def run(scenario: AnalyticScenario) -> None:
        got_cells, got_verdicts = evaluate_scenario(scenario, params)
        cells.extend(got_cells)
        verdicts.extend(got_verdicts)

    for figure in wanted:
        if figure == 2:
            run(make_figure_scenario(2, c=c))
        elif figure == 3:
            for m in range(2, 7):
                for eta in (0.3 * c, 1.5 * c):
                    run(make_figure_scenario(3, c=c, m=m, eta=eta))
        elif figure in (4, 5):
            for fraction in delta_fractions:
                run(make_figure_scenario(figure, c=c, delta=fraction * c))
        elif figure == 6:
            for n in range(2, 9):
                run(make_figure_scenario(6, c=c, n=n, delta=0.3 * c))
        else:
            for m, n in ((2, 3), (2, 4), (3, 5)):
                for fraction in delta_fractions:
                    run(make_figure_scenario(7, c=c, m=m, n=n, delta=fraction * c))
    return cells, verdicts


@dataclass(frozen=True)
class SimConfig:
    """Configuration for the desk-scale track simulator.

    Targets start uniformly in ``region`` with constant random velocities,
    die permanently with per-step probability ``1 - survival_prob``, are
    detected with probability ``detection_prob`` under isotropic Gaussian
    noise, and share the frame with ``Poisson(clutter_rate)`` uniform clutter
    points per step. All randomness comes from ``seed``.
    """

    num_targets: int = 10
    num_steps: int = 50
    survival_prob: float = 0.99
    detection_prob: float = 0.8
    clutter_rate: float = 2.0
    noise_std: float = 1.0
    region: tuple[tuple[float, float], tuple[float, float]] = ((0.0, 1000.0), (0.0, 1000.0))
    seed: int = 0

    def __post_init__(self):
        problems: list[str] = []
        if not isinstance(self.num_targets, int) or self.num_targets < 0:
            problems.append(f"num_targets must be a nonnegative integer, got {self.num_targets!r}")
        if not isinstance(self.num_steps, int) or self.num_steps < 0:
            problems.append(f"num_steps must be a nonnegative integer, got {self.num_steps!r}")
        for name in ("survival_prob", "detection_prob"):
            value = getattr(self, name)
            if not 0 <= value <= 1:
                problems.append(f"{name} must lie in [0, 1], got {value!r}")
        if not (math.isfinite(self.clutter_rate) and self.clutter_rate >= 0):
            problems.append(f"clutter_rate must be a nonnegative finite number, got {self.clutter_rate!r}")
        if not (math.isfinite(self.noise_std) and self.noise_std >= 0):
            problems.append(f"noise_std must be a nonnegative finite number, got {self.noise_std!r}")
        region = self.region
        if len(region) != 2 or any(len(axis) != 2 for axis in region):
            problems.append(f"region must be ((xmin, xmax), (ymin, ymax)), got {region!r}")
        else:
            for axis, (low, high) in zip("xy", region):
                if not (math.isfinite(low) and math.isfinite(high) and high > low):
                    problems.append(f"region {axis} extent must be positive, got ({low!r}, {high!r})")
        if problems:
            raise ValueError("; ".join(problems))


def simulate_tracks(config: SimConfig) -> tuple[dict[int, PointSet], dict[int, PointSet]]:
    """Generate seeded truth and estimate series under ``config``.

    Returns:
        ``(truth, estimate)`` as time-indexed point sets over steps
        ``1..num_steps``. Truth cardinality never increases (targets die,
        none are born). The estimate carries no identity continuity.
    """
    rng = np.random.default_rng(config.seed)
    lows = np.array([config.region[0][0], config.region[1][0]])
    highs = np.array([config.region[0][1], config.region[1][1]])
    count = config.num_targets
    positions = rng.uniform(lows, highs, (count, 2))
    per_step = (highs - lows) / max(config.num_steps, 1)
    velocities = rng.uniform(-1.0, 1.0, (count, 2)) * per_step
    alive = np.ones(count, dtype=bool)
    truth: dict[int, PointSet] = {}
    estimate: dict[int, PointSet] = {}
    for t in range(1, config.num_steps + 1):
        if t > 1:
            positions = positions + velocities
            alive &= rng.random(count) < config.survival_prob
        live = positions[alive]
        truth[t] = PointSet(live, dim=2)
        detected = rng.random(live.shape[0]) < config.detection_prob
        measured = live[detected] + rng.normal(0.0, config.noise_std, (int(detected.sum()), 2))
        clutter = rng.uniform(lows, highs, (int(rng.poisson(config.clutter_rate)), 2))
        estimate[t] = PointSet(np.vstack([measured, clutter]), dim=2)
    return truth, estimate
