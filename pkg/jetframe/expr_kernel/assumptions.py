from dataclasses import dataclass, field
from typing import Any, FrozenSet, List, Mapping, Set

from sympy import Expr, Symbol, factor_list, fraction, sympify

from jetframe._core.errors import DivisionByZero, UnboundSymbol
from jetframe.expr_kernel.kernel import eval_rational, normalize, serialize


@dataclass(frozen=True)
class AssumptionSet:
    """
    Branch conditions: expressions asserted nonvanishing or positive.

    Every stored expression is in canonical form. Division by an expression
    is licensed when each non-constant factor of its numerator is asserted
    nonzero (or positive) up to sign.
    """

    nonzero: FrozenSet[Expr] = field(default_factory=frozenset)
    positive: FrozenSet[Expr] = field(default_factory=frozenset)

    def assume_nonzero(self, e: Any) -> "AssumptionSet":
        expr = normalize(e)
        if expr.is_number:
            return self
        return AssumptionSet(self.nonzero | {expr}, self.positive)

    def assume_positive(self, e: Any) -> "AssumptionSet":
        expr = normalize(e)
        if expr.is_number:
            return self
        return AssumptionSet(self.nonzero, self.positive | {expr})

    def merged(self, other: "AssumptionSet") -> "AssumptionSet":
        return AssumptionSet(self.nonzero | other.nonzero, self.positive | other.positive)

    def symbols(self) -> Set[Symbol]:
        found: Set[Symbol] = set()
        for e in self.nonzero | self.positive:
            found |= e.free_symbols
        return found

    def holds_at(self, point: Mapping[Symbol, Any]) -> bool:
        """Whether every assumption holds at a rational point.

        Points where an assumption is undefined count as violating it.
        """
        try:
            for e in self.nonzero:
                if eval_rational(e, point) == 0:
                    return False
            for e in self.positive:
                if eval_rational(e, point) <= 0:
                    return False
        except (DivisionByZero, UnboundSymbol):
            return False
        return True

    def _asserted(self) -> Set[Expr]:
        known: Set[Expr] = set()
        for e in self.nonzero | self.positive:
            known.add(e)
            known.add(normalize(-e))
            for factor, _ in factor_list(e)[1]:
                known.add(normalize(factor))
                known.add(normalize(-factor))
        return known

    def licenses(self, divisor: Any) -> bool:
        """Whether dividing by ``divisor`` is allowed under these assumptions."""
        expr = normalize(divisor)
        if expr.is_number:
            return bool(expr != 0)
        numerator, _ = fraction(expr)
        known = self._asserted()
        if normalize(numerator) in known:
            return True
        _, factors = factor_list(numerator)
        return all(
            sympify(f).is_number or normalize(f) in known for f, _ in factors
        )

    def describe(self) -> List[str]:
        lines = [f"{serialize(e)} != 0" for e in self.nonzero]
        lines += [f"{serialize(e)} > 0" for e in self.positive]
        return sorted(lines)
