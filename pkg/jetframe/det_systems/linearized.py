"""Infinitesimal determining relations and their exact row reduction.

Each solved equation is linearized at the identity jet, giving a linear
relation among the jets of a vector field's coefficients. Relations are
prolonged by differentiation along the base variables, evaluated at a base
point and reduced to row echelon form with columns in descending rank, so
that pivot columns are principal and the remaining columns parametric.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Dict, List, Mapping, Optional, Tuple

from sympy import Expr, Integer, Symbol, sympify
from sympy.polys.matrices import DomainMatrix

from jetframe._core.settings.loader import setting
from jetframe._core.utils.logger import get_logger, info
from jetframe.expr_kernel.kernel import diff, normalize
from jetframe.expr_kernel.symbols import base_symbol
from jetframe.det_systems.system import DeterminingSystem, Equation
from jetframe.jet_space.groupoid import Column, GroupoidSpace
from jetframe.jet_space.multiindex import MultiIndex

logger = get_logger(__name__)

Relation = Dict[Column, Expr]
PointItems = Tuple[Tuple[Symbol, Expr], ...]


def linearize_equation(groupoid: GroupoidSpace, eq: Equation) -> Relation:
    """Coefficients of ``principal - rhs`` differentiated at the identity jet."""
    expr = eq.principal - eq.rhs
    group_symbols = [s for s in expr.free_symbols if groupoid.group_jet_info(s)]
    identity = groupoid.identity_bindings(group_symbols)
    relation: Relation = {}
    for s in group_symbols:
        value = normalize(diff(expr, s).xreplace(identity))
        if value != 0:
            relation[groupoid.group_jet_info(s)] = value  # type: ignore[index]
    return relation


def differentiate_relation(groupoid: GroupoidSpace, relation: Relation, b: int) -> Relation:
    """Derivative along z^b: coefficient derivatives plus shifted columns."""
    z = base_symbol(groupoid.variables[b])
    result: Dict[Column, Expr] = {}
    for (a, index), coefficient in relation.items():
        d = diff(coefficient, z)
        if d != 0:
            result[(a, index)] = result.get((a, index), Integer(0)) + d
        upper = index.bump(b)
        if groupoid.allows(a, upper):
            result[(a, upper)] = result.get((a, upper), Integer(0)) + coefficient
    return {c: normalize(v) for c, v in result.items() if normalize(v) != 0}


def relation_order(relation: Relation) -> int:
    return max((index.order for _, index in relation), default=0)


@lru_cache(maxsize=32)
def prolonged_relations(system: DeterminingSystem, reach: int) -> Tuple[Relation, ...]:
    """All derivatives of the linearized equations with columns up to ``reach``."""
    groupoid = system.groupoid
    found: List[Relation] = []
    for eq in system.equations:
        base = linearize_equation(groupoid, eq)
        if not base:
            continue
        start = relation_order(base)
        if start > reach:
            continue
        memo: Dict[MultiIndex, Relation] = {MultiIndex.zero(groupoid.size): base}
        for derivative in MultiIndex.up_to(groupoid.size, reach - start):
            if derivative.order:
                last = derivative.last()
                parent = memo[derivative - MultiIndex.unit(groupoid.size, last)]
                memo[derivative] = differentiate_relation(groupoid, parent, last)
            if memo[derivative]:
                found.append(memo[derivative])
    return tuple(found)


@dataclass(frozen=True)
class RelationTable:
    """
    Reduced infinitesimal relations at one base point.

    ``rows`` maps each pivot (principal) column to its reduced row, pivot
    coefficient 1 included. Partitions are reliable up to ``order``; the
    reduction uses columns up to ``reach``.
    """

    groupoid: GroupoidSpace
    order: int
    reach: int
    columns: Tuple[Column, ...]
    rows: Mapping[Column, Mapping[Column, Expr]]

    def is_principal(self, column: Column) -> bool:
        return column in self.rows

    def principal(self, order: int) -> List[Column]:
        return [c for c in self.groupoid.ranked(self.groupoid.columns(order)) if c in self.rows]

    def parametric(self, order: int) -> List[Column]:
        return [
            c for c in self.groupoid.ranked(self.groupoid.columns(order)) if c not in self.rows
        ]

    def dim(self, q: int) -> int:
        """Number of parametric columns of order at most ``q``."""
        return sum(len(self.parametric(k)) for k in range(q + 1))

    def expansion(self, column: Column) -> Dict[Column, Expr]:
        """A column as a combination of parametric columns."""
        if column not in self.rows:
            return {column: Integer(1)}
        return {c: -v for c, v in self.rows[column].items() if c != column}

    def rows_up_to(self, order: int) -> List[Tuple[Column, Mapping[Column, Expr]]]:
        return [(p, row) for p, row in self.rows.items() if p[1].order <= order]


def _reduce(
    relations: List[Relation], columns: List[Column]
) -> Dict[Column, Dict[Column, Expr]]:
    if not relations:
        return {}
    position = {c: j for j, c in enumerate(columns)}
    elements = {
        i: {position[c]: v for c, v in relation.items()}
        for i, relation in enumerate(relations)
    }
    matrix = DomainMatrix.from_dict_sympy(len(relations), len(columns), elements)
    reduced, pivots = matrix.to_field().to_sparse().rref()
    reduced = reduced.to_sparse()
    domain = reduced.domain
    entries = reduced.rep
    rows: Dict[Column, Dict[Column, Expr]] = {}
    for i, j in enumerate(pivots):
        row = entries.get(i, {})
        rows[columns[j]] = {columns[k]: normalize(domain.to_sympy(v)) for k, v in row.items()}
    return rows


@lru_cache(maxsize=256)
def _table(system: DeterminingSystem, order: int, point: PointItems, reach: int) -> RelationTable:
    groupoid = system.groupoid
    values = dict(point)
    relations = []
    for relation in prolonged_relations(system, reach):
        evaluated = {c: normalize(v.xreplace(values)) for c, v in relation.items()}
        evaluated = {c: v for c, v in evaluated.items() if v != 0}
        if evaluated:
            relations.append(evaluated)
    columns = groupoid.ranked(groupoid.columns_up_to(reach))
    rows = _reduce(relations, columns)
    info(logger, f"Relation table to order {order}: {len(rows)} principal of {len(columns)}")
    return RelationTable(groupoid, order, reach, tuple(columns), rows)


def relation_table(
    system: DeterminingSystem,
    order: int,
    point: Optional[Mapping[Symbol, Any]] = None,
    margin: Optional[int] = None,
) -> RelationTable:
    """
    Reduced relations of ``system`` with reliable partitions up to ``order``.

    Args:
        system (DeterminingSystem): The determining equations.
        order (int): Order up to which the partition is needed.
        point (Optional[Mapping[Symbol, Any]]): Values of the base
            coordinates; unbound coordinates stay symbolic.
        margin (Optional[int]): Extra orders of prolongation, defaults to
            the ``closure_margin`` setting.

    Returns:
        RelationTable: The reduced table (cached).
    """
    reach = order + int(setting("closure_margin", margin))
    items = tuple(
        sorted(((k, sympify(v)) for k, v in (point or {}).items()), key=lambda kv: kv[0].name)
    )
    return _table(system, order, items, reach)
