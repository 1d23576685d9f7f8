import math

import numpy as np
import pytest

from cospa import (
    DimensionMismatchError,
    MetricParams,
    ParameterError,
    PointSet,
    cutoff_distance,
    validate_params,
)


def test_cutoff_under_the_cutoff():
    # 3-4-5 triangle, well under a = 10
    assert cutoff_distance([0.0, 0.0], [3.0, 4.0], 10.0) == 5.0


def test_cutoff_saturates():
    assert cutoff_distance([0.0, 0.0], [3.0, 4.0], 2.5) == 2.5


def test_cutoff_identical_points():
    assert cutoff_distance([1.0, 2.0], [1.0, 2.0], 0.1) == 0.0


def test_cutoff_other_base_norms():
    # the (3, 4) offset has 1-norm 7 and max-norm 4
    assert cutoff_distance([0.0, 0.0], [3.0, 4.0], 100.0, base_norm=1.0) == 7.0
    assert cutoff_distance([0.0, 0.0], [3.0, 4.0], 100.0, base_norm=math.inf) == 4.0


def test_cutoff_symmetry_bound_and_identity():
    rng = np.random.default_rng(11)
    for _ in range(300):
        dim = int(rng.integers(1, 5))
        x = rng.normal(size=dim)
        y = rng.normal(size=dim)
        a = float(rng.uniform(0.1, 3.0))
        forward = cutoff_distance(x, y, a)
        assert forward == cutoff_distance(y, x, a)
        assert 0.0 <= forward <= a
        assert cutoff_distance(x, x, a) == 0.0


def test_cutoff_monotone_in_cutoff():
    rng = np.random.default_rng(12)
    for _ in range(100):
        x = rng.normal(size=3)
        y = rng.normal(size=3)
        small = float(rng.uniform(0.05, 1.0))
        large = small + float(rng.uniform(0.0, 2.0))
        assert cutoff_distance(x, y, small) <= cutoff_distance(x, y, large)


def test_cutoff_rejects_bad_inputs():
    with pytest.raises(ParameterError):
        cutoff_distance([0.0], [1.0], 0.0)
    with pytest.raises(ParameterError):
        cutoff_distance([0.0], [1.0], -1.0)
    with pytest.raises(ParameterError):
        cutoff_distance([0.0], [1.0], 1.0, base_norm=0.5)
    with pytest.raises(DimensionMismatchError):
        cutoff_distance([0.0, 1.0], [1.0], 1.0)
    with pytest.raises(ValueError):
        cutoff_distance([math.nan], [1.0], 1.0)


def test_metric_params_defaults():
    params = MetricParams()
    assert params.p == 1.0
    assert params.base_norm == 2.0
    assert params.c == 80.0
    assert params.c_dot == 81.0
    assert params.xi == 1.0
    assert params.alpha == 2.0


def test_validate_params_accepts_mapping_and_overrides():
    params = validate_params({"p": 2, "c": 1.0}, c_dot=1.5, xi=0.5, alpha=1.0)
    assert params.p == 2.0
    assert params.c_dot == 1.5
    assert params.alpha == 1.0


def test_validate_params_collects_every_violation():
    with pytest.raises(ParameterError) as err:
        validate_params(p=0.5, c=-1.0, xi=2.0, alpha=3.0)
    fields = [name for name, _ in err.value.violations]
    assert fields == ["p", "c", "xi", "alpha"]


def test_validate_params_rejects_penalty_below_cutoff():
    with pytest.raises(ParameterError) as err:
        validate_params(c=2.0, c_dot=1.0)
    assert [name for name, _ in err.value.violations] == ["c_dot"]


def test_validate_params_rejects_unknown_field():
    with pytest.raises(TypeError):
        validate_params(cutoff=1.0)


def test_validate_params_rejects_nan_and_infinite_cutoff():
    with pytest.raises(ParameterError):
        validate_params(p=math.nan)
    with pytest.raises(ParameterError):
        validate_params(c=math.inf)


def test_infinite_order_is_a_valid_parameter():
    params = MetricParams(p=math.inf)
    assert math.isinf(params.p)


def test_point_set_basic_shape():
    ps = PointSet([[1.0, 2.0], [3.0, 4.0]])
    assert len(ps) == 2
    assert ps.dim == 2
    assert ps.points.shape == (2, 2)


def test_point_set_scalars_become_one_dimensional():
    ps = PointSet([1.0, 2.0, 3.0])
    assert ps.dim == 1
    assert len(ps) == 3


def test_point_set_empty_carries_dimension():
    ps = PointSet.empty(3)
    assert len(ps) == 0
    assert ps.dim == 3


def test_point_set_duplicates_allowed():
    ps = PointSet([[1.0, 1.0], [1.0, 1.0]])
    assert len(ps) == 2


def test_point_set_rejects_bad_input():
    with pytest.raises(ValueError):
        PointSet([[math.nan, 0.0]])
    with pytest.raises(ValueError):
        PointSet([[math.inf, 0.0]])
    with pytest.raises(DimensionMismatchError):
        PointSet([[1.0, 2.0]], dim=3)


def test_point_set_is_read_only():
    ps = PointSet([[1.0, 2.0]])
    with pytest.raises(ValueError):
        ps.points[0, 0] = 5.0
    with pytest.raises(AttributeError):
        ps.dim = 4


def test_point_set_equality_is_elementwise():
    a = PointSet([[1.0, 2.0]])
    b = PointSet([[1.0, 2.0]])
    c = PointSet([[2.0, 1.0]])
    assert a == b
    assert a != c
