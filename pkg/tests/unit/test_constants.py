"""
Unit tests for constants module.
"""

from fractions import Fraction

from mdp_values.constants import (
    DEFAULT_GRID,
    DENSE_ROW_STATES,
    GADGET_BOUND,
    POLICY_CAP,
    SWITCHPOINT_WIDTH,
    TOLERANCE,
    VALUE_ITERATION_EPSILON,
)


def test_search_and_enumeration_limits():
    """Test the default gadget bound and policy cap."""
    assert GADGET_BOUND == 200
    assert POLICY_CAP == 4096


def test_default_grid():
    """Test that the default grid is 0.01, ..., 0.99."""
    assert len(DEFAULT_GRID) == 99
    assert DEFAULT_GRID[0] == 0.01
    assert DEFAULT_GRID[-1] == 0.99
    assert all(0 < lam < 1 for lam in DEFAULT_GRID)


def test_numeric_tolerances():
    """Test that the numeric tolerances are small and positive."""
    assert 0 < VALUE_ITERATION_EPSILON <= TOLERANCE < 1e-6
    assert isinstance(SWITCHPOINT_WIDTH, Fraction)
    assert DENSE_ROW_STATES == 64
