import math

import numpy as np
import pytest

from cospa import Assignment, CostMatrix, brute_force_assignment, solve_assignment


def test_single_cell():
    result = solve_assignment([[2.5]])
    assert result.mapping == (0,)
    assert result.cost == 2.5


def test_two_by_two_swap():
    # picking the off-diagonal gives 1 + 1 = 2 instead of 8
    result = solve_assignment([[4.0, 1.0], [1.0, 4.0]])
    assert result.mapping == (1, 0)
    assert result.cost == 2.0


def test_rectangular_leaves_a_column_unused():
    result = solve_assignment([[1.0, 0.0, 2.0], [2.0, 3.0, 1.0]])
    assert result.mapping == (1, 2)
    assert result.cost == 1.0


def test_all_zero_tie_is_lexicographic():
    result = solve_assignment([[0.0, 0.0], [0.0, 0.0]])
    assert result.mapping == (0, 1)
    assert result.cost == 0.0


def test_tie_between_diagonals_prefers_smaller_first_column():
    # both mappings cost 3; (0, 1) comes first lexicographically
    result = solve_assignment([[2.0, 1.0], [2.0, 1.0]])
    assert result.mapping == (0, 1)


def test_cost_equals_fsum_of_assigned_entries():
    rng = np.random.default_rng(4)
    entries = rng.uniform(0.0, 1.0, (5, 7))
    result = solve_assignment(entries)
    assert result.cost == math.fsum(entries[i, j] for i, j in enumerate(result.mapping))
    assert len(set(result.mapping)) == len(result.mapping)


def test_matches_brute_force_on_tie_heavy_matrices():
    rng = np.random.default_rng(123)
    for _ in range(150):
        n = int(rng.integers(1, 7))
        m = int(rng.integers(1, n + 1))
        # quantized entries produce many exact cost ties
        entries = rng.integers(0, 6, (m, n)).astype(float) / 2.0
        fast = solve_assignment(entries)
        slow = brute_force_assignment(entries)
        assert fast.cost == slow.cost
        assert fast.mapping == slow.mapping


def test_matches_brute_force_on_continuous_matrices():
    rng = np.random.default_rng(99)
    for _ in range(100):
        n = int(rng.integers(1, 7))
        m = int(rng.integers(1, n + 1))
        entries = rng.uniform(0.0, 10.0, (m, n))
        fast = solve_assignment(entries)
        slow = brute_force_assignment(entries)
        assert fast.cost == slow.cost
        assert fast.mapping == slow.mapping


def test_permutation_equivariance_with_unique_optimum():
    rng = np.random.default_rng(7)
    for _ in range(50):
        m, n = 4, 6
        entries = rng.uniform(0.0, 5.0, (m, n))
        base = solve_assignment(entries)
        row_perm = rng.permutation(m)
        col_perm = rng.permutation(n)
        permuted = entries[np.ix_(row_perm, col_perm)]
        moved = solve_assignment(permuted)
        inverse_col = np.argsort(col_perm)
        expected = tuple(int(inverse_col[base.mapping[row_perm[i]]]) for i in range(m))
        assert moved.mapping == expected
        assert moved.cost == base.cost


def test_constant_shift_keeps_the_optimal_mapping():
    rng = np.random.default_rng(8)
    entries = rng.uniform(0.0, 5.0, (4, 5))
    base = solve_assignment(entries)
    shifted = solve_assignment(entries + 3.25)
    assert shifted.mapping == base.mapping
    assert shifted.cost == pytest.approx(base.cost + 4 * 3.25, rel=1e-12)


def test_brute_force_prefers_lexicographic_on_ties():
    result = brute_force_assignment([[1.0, 1.0, 1.0]])
    assert result.mapping == (0,)


def test_invalid_matrices_are_rejected():
    with pytest.raises(ValueError):
        solve_assignment(np.empty((0, 3)))
    with pytest.raises(ValueError):
        solve_assignment(np.empty((2, 0)))
    with pytest.raises(ValueError):
        solve_assignment([[1.0], [2.0]])  # more rows than columns
    with pytest.raises(ValueError):
        solve_assignment([[-1.0, 0.0]])
    with pytest.raises(ValueError):
        solve_assignment([[math.inf, 0.0]])
    with pytest.raises(ValueError):
        solve_assignment([[math.nan, 0.0]])


def test_brute_force_size_guard():
    with pytest.raises(ValueError):
        brute_force_assignment(np.zeros((2, 10)))


def test_cost_matrix_exposes_shape():
    matrix = CostMatrix(np.zeros((2, 4)))
    assert matrix.rows == 2
    assert matrix.cols == 4


def test_assignment_is_a_value_type():
    assert Assignment((0, 1), 2.0) == Assignment((0, 1), 2.0)
