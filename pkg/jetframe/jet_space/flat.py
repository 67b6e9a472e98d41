from dataclasses import dataclass
from typing import Any, Dict, Mapping, Optional, Tuple

from sympy import Expr, Rational, Symbol, sympify

from jetframe.expr_kernel.kernel import diff
from jetframe.expr_kernel.symbols import base_symbol
from jetframe.jet_space.multiindex import MultiIndex
from jetframe.jet_space.space import JetSpace


@dataclass(frozen=True)
class FlatFrame:
    """
    The derivation d/dy^i = d/dx^i + sum_a s^a_i d/du^a along a section.

    In flat coordinates (y, w) with x = y and u = s(y) + w, the section is
    w = 0 and the pure y-derivatives of a function restricted to the graph
    are its total derivatives.
    """

    space: JetSpace
    section: Tuple[Expr, ...]

    def derivative(self, e: Any, i: int) -> Expr:
        expr = sympify(e)
        result = diff(expr, self.space.x(i))
        for alpha, s in enumerate(self.section):
            u = base_symbol(self.space.dependent[alpha])
            result += diff(s, self.space.x(i)) * diff(expr, u)
        return result

    def iterate(self, e: Any, index: MultiIndex) -> Expr:
        expr = sympify(e)
        for i, count in enumerate(index.counts):
            for _ in range(count):
                expr = self.derivative(expr, i)
        return expr

    def on_graph(self, e: Any) -> Expr:
        """Restrict to the graph u = s(x)."""
        bindings = {
            base_symbol(name): s for name, s in zip(self.space.dependent, self.section)
        }
        return sympify(e).xreplace(bindings).expand()


def flat_frame(
    space: JetSpace,
    section_jets: Mapping[Symbol, Any],
    center: Optional[Mapping[Symbol, Any]] = None,
) -> FlatFrame:
    """
    Build the flat derivation of the section with the given jets.

    The section is the Taylor polynomial of the jets around ``center``
    (the base point values of the independent variables; zero if omitted).

    Args:
        space (JetSpace): The jet space.
        section_jets (Mapping[Symbol, Any]): Values of u^α (order 0) and
            u^α_J; missing jets are taken as zero.
        center (Optional[Mapping[Symbol, Any]]): Expansion point.

    Returns:
        FlatFrame: The derivation restricted to the graph.
    """
    center = center or {}
    shifts = [space.x(i) - sympify(center.get(space.x(i), 0)) for i in range(space.n)]
    section = []
    for alpha in range(space.m):
        polynomial: Expr = sympify(0)
        for index in MultiIndex.up_to(space.n, space.max_order):
            value = section_jets.get(space.jet(alpha, index), 0)
            if value == 0:
                continue
            monomial = sympify(1)
            for shift, count in zip(shifts, index.counts):
                monomial *= shift**count
            polynomial += Rational(1, index.factorial()) * sympify(value) * monomial
        section.append(polynomial.expand())
    return FlatFrame(space, tuple(section))


def graph_jets(frame: FlatFrame, point: Dict[Symbol, Any]) -> Dict[Symbol, Any]:
    """Jets u^α_J of the section evaluated at a base point."""
    space = frame.space
    values: Dict[Symbol, Any] = {}
    for alpha, s in enumerate(frame.section):
        for index in MultiIndex.up_to(space.n, space.max_order):
            derivative = s
            for i, count in enumerate(index.counts):
                for _ in range(count):
                    derivative = diff(derivative, space.x(i))
            values[space.jet(alpha, index)] = derivative.xreplace(point)
    return values
