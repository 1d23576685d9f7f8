"""Shared helpers for the test suite."""

import numpy as np

from cospa import PointSet


def random_point_set(rng, dim, max_cardinality=6, min_cardinality=0, scale=2.0):
    """Uniform random set with cardinality drawn from the given range."""
    count = int(rng.integers(min_cardinality, max_cardinality + 1))
    return PointSet(rng.uniform(-scale, scale, (count, dim)), dim=dim)


def rel_close(a, b, tol=1e-9):
    """Relative comparison that also accepts exact equality (covers 0 == 0)."""
    return a == b or abs(a - b) <= tol * max(abs(a), abs(b))
