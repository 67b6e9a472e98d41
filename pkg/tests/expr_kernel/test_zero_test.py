"""Unit tests for assumption sets and the probabilistic zero test."""

import pytest
from sympy import Symbol

from jetframe._core.errors import SamplingExhausted
from jetframe.expr_kernel.assumptions import AssumptionSet
from jetframe.expr_kernel.zero_test import find_nonzero_witness, is_zero

x, y = Symbol("x"), Symbol("y")


class TestAssumptionSet:
    """Tests for AssumptionSet."""

    def test_numbers_are_ignored(self) -> None:
        """Constant assumptions carry no information."""
        assert AssumptionSet().assume_nonzero(3).nonzero == frozenset()
        assert AssumptionSet().assume_positive(2).positive == frozenset()

    def test_licenses_factors_up_to_sign(self) -> None:
        """Any factor of an asserted expression may be divided by."""
        assumptions = AssumptionSet().assume_nonzero(x * (x - y))
        assert assumptions.licenses(x)
        assert assumptions.licenses(y - x)
        assert assumptions.licenses(x**2 * (x - y))
        assert not assumptions.licenses(x + 1)

    def test_licenses_constants(self) -> None:
        """Nonzero constants are always licensed, zero never."""
        assert AssumptionSet().licenses(2)
        assert not AssumptionSet().licenses(0)

    def test_holds_at(self) -> None:
        """Points violating or missing an assumption fail it."""
        assumptions = AssumptionSet().assume_nonzero(x).assume_positive(y)
        assert assumptions.holds_at({x: 1, y: 2})
        assert not assumptions.holds_at({x: 0, y: 2})
        assert not assumptions.holds_at({x: 1, y: -2})
        assert not assumptions.holds_at({x: 1})

    def test_merged_and_describe(self) -> None:
        """Merging unions both kinds; describe lists them sorted."""
        merged = AssumptionSet().assume_nonzero(x).merged(AssumptionSet().assume_positive(y))
        assert merged.describe() == ["x != 0", "y > 0"]
        assert merged.symbols() == {x, y}


class TestZeroTest:
    """Tests for is_zero and find_nonzero_witness."""

    def test_identity_is_zero(self) -> None:
        """An identity of rational functions is recognized."""
        assert is_zero((x + 1) ** 2 - x**2 - 2 * x - 1)
        assert is_zero(x / (x * y) - 1 / y)

    def test_nonzero_has_witness(self) -> None:
        """A nonzero expression yields a point where it does not vanish."""
        witness = find_nonzero_witness(x - y)
        assert witness is not None
        assert witness[x] != witness[y]
        assert not is_zero(x - y)

    def test_witness_is_deterministic(self) -> None:
        """The same seed reproduces the same witness."""
        assert find_nonzero_witness(x * y - 1, seed=5) == find_nonzero_witness(x * y - 1, seed=5)

    def test_witness_respects_assumptions(self) -> None:
        """Witness points satisfy the branch conditions."""
        witness = find_nonzero_witness(x - y, AssumptionSet().assume_positive(x))
        assert witness is not None
        assert witness[x] > 0

    def test_invalid_trials(self) -> None:
        """At least one trial is needed."""
        with pytest.raises(ValueError, match="trials must be >= 1"):
            is_zero(x, trials=0)

    def test_unsatisfiable_assumptions(self) -> None:
        """Sampling gives up when no point satisfies the assumptions."""
        impossible = AssumptionSet().assume_positive(x).assume_positive(-x)
        with pytest.raises(SamplingExhausted):
            find_nonzero_witness(x, impossible, max_draws=20)
