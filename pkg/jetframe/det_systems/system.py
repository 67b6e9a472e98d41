from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Set, Tuple

from sympy import Expr, Symbol, sympify

from jetframe._core.errors import InconsistentSystem, Undetermined
from jetframe._core.utils.logger import get_logger, info
from jetframe.expr_kernel.assumptions import AssumptionSet
from jetframe.expr_kernel.kernel import diff, normalize, serialize
from jetframe.expr_kernel.zero_test import is_zero
from jetframe.jet_space.groupoid import Column, GroupoidSpace
from jetframe.jet_space.space import JetSpace

logger = get_logger(__name__)

_REDUCTION_ROUNDS = 64


@dataclass(frozen=True)
class Equation:
    """A solved determining equation ``principal = rhs``."""

    principal: Symbol
    rhs: Expr

    def serialize(self) -> str:
        return f"{self.principal.name} = {serialize(self.rhs)}"


@dataclass(frozen=True)
class DeterminingSystem:
    """
    A pseudo-group's determining equations in solved form.

    Each principal group jet appears once as a left-hand side; a right-hand
    side involves base coordinates and group jets of order no higher than its
    principal jet.
    """

    groupoid: GroupoidSpace
    equations: Tuple[Equation, ...] = ()
    t_max: int = 0
    _columns: Dict[Symbol, Column] = field(
        default_factory=dict, init=False, compare=False, hash=False, repr=False
    )

    def __post_init__(self) -> None:
        seen = set()
        for eq in self.equations:
            column = self.groupoid.group_jet_info(eq.principal)
            if column is None:
                raise ValueError(f"{eq.principal} is not a group jet of the pseudo-group")
            if not self.groupoid.allows(*column):
                raise ValueError(f"{eq.principal} is omitted by the declared dependencies")
            if eq.principal in seen:
                raise ValueError(f"{eq.principal} is solved twice")
            seen.add(eq.principal)
            if self.rhs_order(eq) > column[1].order:
                raise ValueError(
                    f"Right-hand side of {eq.principal} has higher order than its left side"
                )
            self._columns[eq.principal] = column

    def rhs_order(self, eq: Equation) -> int:
        orders = [
            column[1].order
            for column in map(self.groupoid.group_jet_info, eq.rhs.free_symbols)
            if column is not None
        ]
        return max(orders, default=0)

    def equation_order(self, eq: Equation) -> int:
        return self._columns[eq.principal][1].order

    @property
    def order(self) -> int:
        """Highest order among the equations (0 for the empty system)."""
        return max((self.equation_order(eq) for eq in self.equations), default=0)

    def truncated(self, t: int) -> "DeterminingSystem":
        """The equations of order at most ``t``."""
        kept = tuple(eq for eq in self.equations if self.equation_order(eq) <= t)
        return DeterminingSystem(self.groupoid, kept, self.t_max)

    def solved(self) -> Dict[Symbol, Expr]:
        return {eq.principal: eq.rhs for eq in self.equations}

    def jet_space(self, order: int) -> JetSpace:
        n = self.groupoid.n
        return JetSpace(self.groupoid.variables[:n], self.groupoid.variables[n:], order)

    def serialize(self) -> List[str]:
        return [eq.serialize() for eq in self.equations]


def reduce_by(e: Expr, solved: Mapping[Symbol, Expr]) -> Expr:
    """Replace principal jets by their right-hand sides until none remain."""
    expr = sympify(e)
    for _ in range(_REDUCTION_ROUNDS):
        hits = {s: solved[s] for s in expr.free_symbols if s in solved}
        if not hits:
            return normalize(expr)
        expr = normalize(expr.xreplace(hits))
    raise Undetermined("Principal jets keep reappearing while reducing")


def _repivot(
    groupoid: GroupoidSpace, e: Expr, solved: Mapping[Symbol, Expr]
) -> Optional[Equation]:
    """Solve ``e = 0`` for a group jet entering linearly with a constant coefficient."""
    candidates = []
    for s in e.free_symbols:
        column = groupoid.group_jet_info(s)
        if column is None or s in solved:
            continue
        coefficient = diff(e, s)
        if coefficient.is_number and coefficient != 0:
            candidates.append((groupoid.rank_key(column), s, coefficient))
    if not candidates:
        return None
    _, s, coefficient = max(candidates, key=lambda c: c[0])
    rest = normalize(e - coefficient * s)
    return Equation(s, normalize(-rest / coefficient))


def prolong_system(
    system: DeterminingSystem,
    to_order: int,
    assumptions: Optional[AssumptionSet] = None,
) -> DeterminingSystem:
    """
    Close a determining system under differentiation up to ``to_order``.

    Every equation of order below ``to_order`` is differentiated with
    respect to each base variable, right-hand sides are reduced by the
    known solved forms, and new principal jets are added. A derived
    equation whose left side is an omitted jet must reduce to zero or is
    re-pivoted onto a group jet with a nonzero constant coefficient.

    Args:
        system (DeterminingSystem): The generating equations.
        to_order (int): Highest order of the result, at most ``system.t_max``.
        assumptions (Optional[AssumptionSet]): Conditions used by the zero
            test when comparing solved forms.

    Returns:
        DeterminingSystem: The prolonged system.

    Raises:
        Undetermined: If ``to_order`` exceeds ``t_max`` or a derived equation
            cannot be put in solved form.
        InconsistentSystem: If two solved forms of one principal jet differ.
    """
    if to_order > system.t_max:
        raise Undetermined(f"Cannot prolong to order {to_order} beyond t_max={system.t_max}")
    groupoid = system.groupoid
    solved: Dict[Symbol, Expr] = {}
    order_of: Dict[Symbol, int] = {}
    for eq in system.equations:
        solved[eq.principal] = eq.rhs
        order_of[eq.principal] = system.equation_order(eq)

    def add(eq: Equation, order: int) -> None:
        rhs = reduce_by(eq.rhs, solved)
        if eq.principal in solved:
            known = reduce_by(solved[eq.principal], solved)
            if not is_zero(known - rhs, assumptions):
                raise InconsistentSystem(eq.principal.name, serialize(known), serialize(rhs))
            return
        solved[eq.principal] = rhs
        order_of[eq.principal] = order

    done: Set[Symbol] = set()
    while True:
        pending = sorted(
            (s for s, k in order_of.items() if k < to_order and s not in done),
            key=lambda s: (order_of[s], s.name),
        )
        if not pending:
            break
        for principal in pending:
            done.add(principal)
            a, index = groupoid.group_jet_info(principal)  # type: ignore[misc]
            for b in range(groupoid.size):
                upper = index.bump(b)
                lhs = groupoid.group_jet(a, upper) if groupoid.allows(a, upper) else 0
                rhs = reduce_by(groupoid.partial(solved[principal], b), solved)
                if lhs == 0:
                    if is_zero(rhs, assumptions):
                        continue
                    pivot = _repivot(groupoid, rhs, solved)
                    if pivot is None:
                        raise Undetermined(
                            f"Derivative of {principal.name} by {groupoid.variables[b]} "
                            "gives an equation with no solvable group jet"
                        )
                    column = groupoid.group_jet_info(pivot.principal)
                    add(pivot, column[1].order)  # type: ignore[index]
                    continue
                add(Equation(lhs, rhs), upper.order)

    equations = []
    for principal, rhs in solved.items():
        if order_of[principal] <= to_order:
            equations.append(Equation(principal, reduce_by(rhs, solved)))
    ranked = sorted(
        equations,
        key=lambda eq: groupoid.rank_key(groupoid.group_jet_info(eq.principal)),  # type: ignore[arg-type]
    )
    info(logger, f"Prolonged system to order {to_order}: {len(ranked)} equations")
    return DeterminingSystem(groupoid, tuple(ranked), system.t_max)
