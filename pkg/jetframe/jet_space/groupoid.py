from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from sympy import Expr, Integer, Symbol, sympify

from jetframe._core.errors import OrderOverflow
from jetframe.expr_kernel.kernel import diff
from jetframe.expr_kernel.symbols import SymKind, base_symbol, group_symbol, sym_info
from jetframe.jet_space.multiindex import MultiIndex

Column = Tuple[int, MultiIndex]

@dataclass(frozen=True)
class GroupoidSpace:
    """
    Jets of the target components of a pseudo-group.

    Component ``a`` is the target of base variable ``variables[a]``; its jets
    ``Z.<component>[...]`` are indexed over all base variables, restricted
    to the variables the component may depend on.
    """

    variables: Tuple[str, ...]
    n: int
    components: Tuple[str, ...]
    depends: Tuple[Tuple[int, ...], ...]
    max_order: int

    @classmethod
    def over(
        cls,
        independent: Sequence[str],
        dependent: Sequence[str],
        components: Sequence[str],
        max_order: int,
        depends: Optional[Mapping[str, Sequence[str]]] = None,
    ) -> "GroupoidSpace":
        variables = tuple(independent) + tuple(dependent)
        if len(components) != len(variables):
            raise ValueError(
                f"Expected {len(variables)} target components, got {len(components)}"
            )
        depends = depends or {}
        allowed: List[Tuple[int, ...]] = []
        for name in components:
            names = depends.get(name, variables)
            unknown = [v for v in names if v not in variables]
            if unknown:
                raise ValueError(f"Component {name} depends on unknown {unknown}")
            allowed.append(tuple(sorted(variables.index(v) for v in names)))
        return cls(variables, len(independent), tuple(components), tuple(allowed), max_order)

    @property
    def size(self) -> int:
        return len(self.variables)

    def allows(self, a: int, index: MultiIndex) -> bool:
        return all(i in self.depends[a] for i in index.support())

    def is_vertical(self, index: MultiIndex) -> bool:
        return any(index.counts[self.n :])

    def group_jet(self, a: int, index: MultiIndex) -> Symbol:
        return group_symbol(self.components[a], index.names(self.variables))

    def group_jet_or_zero(self, a: int, index: MultiIndex) -> Expr:
        if not self.allows(a, index):
            return Integer(0)
        if index.order > self.max_order:
            raise OrderOverflow(index.order, self.max_order)
        return self.group_jet(a, index)

    def group_jet_info(self, symbol: Symbol) -> Optional[Column]:
        try:
            info = sym_info(symbol)
        except ValueError:
            return None
        if info.kind != SymKind.GROUP or info.name not in self.components:
            return None
        if any(v not in self.variables for v in info.index):
            return None
        index = MultiIndex.from_names(info.index, self.variables)
        return self.components.index(info.name), index

    def columns(self, order: int) -> List[Column]:
        """Allowed group jets of exactly ``order``."""
        return [
            (a, index)
            for a in range(self.size)
            for index in MultiIndex.of_order(self.size, order)
            if self.allows(a, index)
        ]

    def columns_up_to(self, order: int) -> List[Column]:
        return [c for k in range(order + 1) for c in self.columns(k)]

    def rank_key(self, column: Column) -> Tuple[int, bool, int, Tuple[int, ...]]:
        """Larger keys are preferred as principal."""
        a, index = column
        return (index.order, self.is_vertical(index), a, index.counts)

    def ranked(self, columns: Iterable[Column]) -> List[Column]:
        return sorted(columns, key=self.rank_key, reverse=True)

    def identity_value(self, a: int, index: MultiIndex) -> Expr:
        """Value of Z^a_A at the identity jet."""
        if index.order == 0:
            return base_symbol(self.variables[a])
        if index.order == 1:
            return Integer(1) if index.counts[a] == 1 else Integer(0)
        return Integer(0)

    def identity_bindings(self, symbols: Iterable[Symbol]) -> Dict[Symbol, Expr]:
        bindings: Dict[Symbol, Expr] = {}
        for s in symbols:
            column = self.group_jet_info(s)
            if column is not None:
                bindings[s] = self.identity_value(*column)
        return bindings

    def chain_derivative(self, space: Any, a: int, index: MultiIndex, i: int) -> Expr:
        """D_i Z^a_A = Z^a_{A,i} + sum_b u^b_i Z^a_{A,b} on the jet space."""
        if index.order + 1 > self.max_order:
            raise OrderOverflow(index.order + 1, self.max_order)
        result = self.group_jet_or_zero(a, index.bump(i))
        for beta in range(len(self.variables) - self.n):
            target = self.group_jet_or_zero(a, index.bump(self.n + beta))
            if target != 0:
                result += space.jet(beta, MultiIndex.unit(space.n, i)) * target
        return result

    def partial(self, e: Any, b: int) -> Expr:
        """d/dz^b of an expression in base coordinates and group jets."""
        expr = sympify(e)
        result = diff(expr, base_symbol(self.variables[b]))
        for s in expr.free_symbols:
            column = self.group_jet_info(s)
            if column is None:
                continue
            a, index = column
            target = self.group_jet_or_zero(a, index.bump(b))
            if target != 0:
                result += target * diff(expr, s)
        return result
