from dataclasses import dataclass
from math import comb
from typing import Any, List, Optional, Tuple

from sympy import Expr, Symbol, sympify

from jetframe._core.errors import OrderOverflow
from jetframe.expr_kernel.kernel import diff
from jetframe.expr_kernel.symbols import (
    SymKind,
    base_symbol,
    jet_symbol,
    lifted_symbol,
    sym_info,
)
from jetframe.jet_space.multiindex import MultiIndex

Jet = Tuple[int, MultiIndex]


def jet_dim(n: int, m: int, q: int) -> int:
    """Number of coordinates of J^q: n + m * binom(q + n, n)."""
    if n < 1 or m < 1 or q < 0:
        raise ValueError("jet_dim needs n, m >= 1 and q >= 0")
    return n + m * comb(q + n, n)


@dataclass(frozen=True)
class JetSpace:
    """Jet space of m dependent variables over n independent ones."""

    independent: Tuple[str, ...]
    dependent: Tuple[str, ...]
    max_order: int

    def __post_init__(self) -> None:
        if not self.independent or not self.dependent:
            raise ValueError("A jet space needs n >= 1 and m >= 1")
        names = self.independent + self.dependent
        if len(set(names)) != len(names):
            raise ValueError(f"Duplicate variable names in {names}")

    @property
    def n(self) -> int:
        return len(self.independent)

    @property
    def m(self) -> int:
        return len(self.dependent)

    @property
    def variables(self) -> Tuple[str, ...]:
        return self.independent + self.dependent

    def x(self, i: int) -> Symbol:
        return base_symbol(self.independent[i])

    def jet(self, alpha: int, index: MultiIndex) -> Symbol:
        name = self.dependent[alpha]
        if index.order == 0:
            return base_symbol(name)
        return jet_symbol(name, index.names(self.independent))

    def lifted(self, alpha: int, index: MultiIndex) -> Symbol:
        return lifted_symbol(self.dependent[alpha], index.names(self.independent))

    def lifted_base(self, name: str) -> Symbol:
        return lifted_symbol(name)

    def jet_info(self, symbol: Symbol) -> Optional[Jet]:
        """``(alpha, J)`` for a jet coordinate (u itself has J empty), else None."""
        try:
            info = sym_info(symbol)
        except ValueError:
            return None
        if info.kind not in (SymKind.JET, SymKind.BASE):
            return None
        if info.name not in self.dependent:
            return None
        if any(v not in self.independent for v in info.index):
            return None
        alpha = self.dependent.index(info.name)
        return alpha, MultiIndex.from_names(info.index, self.independent)

    def lifted_info(self, symbol: Symbol) -> Optional[Tuple[str, MultiIndex]]:
        """``(variable, J)`` for a lifted invariant symbol, else None."""
        try:
            info = sym_info(symbol)
        except ValueError:
            return None
        if info.kind != SymKind.LIFTED or info.name not in self.variables:
            return None
        return info.name, MultiIndex.from_names(info.index, self.independent)

    def jets(self, order: int) -> List[Jet]:
        """All (alpha, J) with |J| == order."""
        return [
            (alpha, index)
            for alpha in range(self.m)
            for index in MultiIndex.of_order(self.n, order)
        ]

    def coordinates(self, order: int) -> List[Symbol]:
        """Coordinates of J^order: base variables then jets by order."""
        result = [base_symbol(v) for v in self.independent]
        for k in range(order + 1):
            result += [self.jet(alpha, index) for alpha, index in self.jets(k)]
        return result


def total_derivative(
    space: JetSpace, e: Any, i: int, groupoid: Optional[Any] = None
) -> Expr:
    """
    Total derivative D_i on the jet space.

    ``D_i e = de/dx^i + sum u^b_{K,i} de/du^b_K``. Group jets in ``e`` are
    treated as functions of the base point when a groupoid is given:
    ``D_i Z^a_A = Z^a_{A,i} + sum_b u^b_i Z^a_{A,b}``.

    Raises:
        OrderOverflow: If the result needs jets beyond ``space.max_order``.
    """
    expr = sympify(e)
    result = diff(expr, space.x(i))
    unit = MultiIndex.unit(space.n, i)
    for s in expr.free_symbols:
        jet = space.jet_info(s)
        if jet is not None:
            alpha, index = jet
            if index.order + 1 > space.max_order:
                raise OrderOverflow(index.order + 1, space.max_order)
            result += space.jet(alpha, index + unit) * diff(expr, s)
        elif groupoid is not None:
            group_jet = groupoid.group_jet_info(s)
            if group_jet is None:
                continue
            partial = diff(expr, s)
            a, index = group_jet
            result += groupoid.chain_derivative(space, a, index, i) * partial
    return result


def total_derivative_multi(space: JetSpace, e: Any, index: MultiIndex) -> Expr:
    expr = sympify(e)
    for i, count in enumerate(index.counts):
        for _ in range(count):
            expr = total_derivative(space, expr, i)
    return expr
