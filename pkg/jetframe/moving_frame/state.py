"""
Partial moving frames.

A :class:`FrameState` records the lifted invariants normalized so far, the
Maurer-Cartan forms they solved for, and the branch assumptions made along
the way. States are immutable; every operation returns a new one.
"""

from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

from sympy import Expr, Symbol

from jetframe._core.errors import AmbiguousSolve, NotSolvable, OrderOverflow
from jetframe._core.utils.logger import get_logger, info
from jetframe.det_systems.linearized import RelationTable, relation_table
from jetframe.exterior_forms.form import Form
from jetframe.exterior_forms.generators import (
    Generator,
    GeneratorKind,
    horizontal,
    maurer_cartan,
)
from jetframe.expr_kernel.assumptions import AssumptionSet
from jetframe.expr_kernel.kernel import normalize as canonical
from jetframe.expr_kernel.kernel import serialize
from jetframe.expr_kernel.symbols import base_symbol, lifted_symbol
from jetframe.jet_space.groupoid import GroupoidSpace
from jetframe.jet_space.multiindex import MultiIndex
from jetframe.jet_space.space import JetSpace
from jetframe.moving_frame.problem import Problem
from jetframe.moving_frame.symbolic import solve_closed_form

logger = get_logger(__name__)

SOLVE_NONE = "none"


@dataclass(frozen=True)
class AutoSolve:
    """Solve for the highest-ranked licensed generator of ``order`` not in ``keep``."""

    order: int
    keep: frozenset = frozenset()


Solve = Union[Generator, AutoSolve, str, None]


@dataclass(frozen=True)
class Normalization:
    invariant: Symbol
    value: Expr
    solved: Optional[Generator] = None

    def describe(self) -> str:
        target = self.solved.label if self.solved is not None else SOLVE_NONE
        return f"{self.invariant.name} = {serialize(self.value)} (solve {target})"


@dataclass(frozen=True)
class FrameState:
    """
    A partial moving frame.

    Attributes:
        problem (Problem): The pseudo-group action.
        normalizations (Tuple[Normalization, ...]): In application order.
        substitutions (Mapping[Generator, Form]): Solved Maurer-Cartan
            forms, each a 1-form in the remaining free generators and the
            horizontal forms.
        values (Mapping[Symbol, Expr]): Normalized lifted invariants.
        assumptions (AssumptionSet): Branch conditions in lifted invariants
            and source jets.
        solved_parameters (Mapping[Symbol, Optional[Expr]]): Solved group
            jets and their closed forms in source jets; None where only the
            numeric path applies.
        residual (Tuple[Symbol, ...]): Lifted invariants a sweep could not
            normalize.
        order (int): Frame order r; parameters below r must all be solved
            before reading off generating invariants.
    """

    problem: Problem
    normalizations: Tuple[Normalization, ...] = ()
    substitutions: Mapping[Generator, Form] = field(default_factory=dict)
    values: Mapping[Symbol, Expr] = field(default_factory=dict)
    assumptions: AssumptionSet = field(default_factory=AssumptionSet)
    solved_parameters: Mapping[Symbol, Optional[Expr]] = field(default_factory=dict)
    residual: Tuple[Symbol, ...] = ()
    order: int = 1
    rows: Dict[Symbol, Any] = field(
        default_factory=dict, compare=False, hash=False, repr=False
    )

    @property
    def space(self) -> JetSpace:
        return self.problem.space

    @property
    def groupoid(self) -> GroupoidSpace:
        return self.problem.groupoid

    def is_normalized(self, invariant: Symbol) -> bool:
        return invariant in self.values

    def lifted_value(self, alpha: int, index: MultiIndex) -> Expr:
        """Current value of Û^alpha_J: its normalization, else its symbol."""
        symbol = self.space.lifted(alpha, index)
        return self.values.get(symbol, symbol)

    def base_value(self, b: int) -> Expr:
        symbol = lifted_symbol(self.groupoid.variables[b])
        return self.values.get(symbol, symbol)

    def base_point(self) -> Dict[Symbol, Expr]:
        """Source coordinates bound to the lifted base point."""
        return {
            base_symbol(v): self.base_value(b) for b, v in enumerate(self.groupoid.variables)
        }

    def table(self, order: int) -> RelationTable:
        return relation_table(self.problem.system, order, self.base_point())

    def closed_forms(self) -> Dict[Symbol, Expr]:
        return {s: e for s, e in self.solved_parameters.items() if e is not None}

    def mc_value(self, g: Generator) -> Form:
        """
        A Maurer-Cartan form on the current frame.

        Omitted group jets give zero, solved forms their substitution and
        principal forms the combination of parametric forms the linearized
        system dictates.
        """
        if not self.groupoid.allows(g.slot, g.index):
            return Form.zero(1)
        if g in self.substitutions:
            return self.substitutions[g]
        table = self.table(g.order)
        column = (g.slot, g.index)
        if not table.is_principal(column):
            return Form.generator(g)
        result = Form.zero(1)
        for (a, index), c in table.expansion(column).items():
            parametric = maurer_cartan(self.groupoid, a, index)
            value = self.substitutions.get(parametric, Form.generator(parametric))
            result = result + value.scale(c)
        return result

    def contact_form(self, alpha: int) -> Form:
        """Horizontal part of the order-0 contact form of u^alpha."""
        n = self.space.n
        items = [
            ((horizontal(self.groupoid.variables, i),), self.lifted_value(alpha, MultiIndex.unit(n, i)))
            for i in range(n)
        ]
        return Form.build(1, items)

    def reduce(self, form: Form) -> Form:
        """Pull ``form`` back to the frame: substitute forms, contact parts and values."""
        n = self.space.n
        rules: Dict[Generator, Form] = {}
        for g in form.generators():
            if g.kind == GeneratorKind.MAURER_CARTAN:
                rules[g] = self.mc_value(g)
            elif g.kind == GeneratorKind.HORIZONTAL and g.slot >= n:
                rules[g] = self.contact_form(g.slot - n)
        result = form.replace_generators(rules) if rules else form
        return result.subs(self.values) if self.values else result

    def free_generators(self, order: int) -> List[Generator]:
        """Parametric Maurer-Cartan forms of ``order`` still unsolved, highest rank first."""
        return [
            maurer_cartan(self.groupoid, a, index)
            for a, index in self.table(order).parametric(order)
            if maurer_cartan(self.groupoid, a, index) not in self.substitutions
        ]

    def free_parameters_by_order(self, up_to: Optional[int] = None) -> Dict[int, int]:
        last = self.order if up_to is None else up_to
        return {k: len(self.free_generators(k)) for k in range(last + 1)}

    def serialize(self) -> Dict[str, Any]:
        return {
            "normalizations": [n.describe() for n in self.normalizations],
            "substitutions": {
                g.label: f.serialize() for g, f in sorted(self.substitutions.items())
            },
            "assumptions": self.assumptions.describe(),
            "residual": sorted(s.name for s in self.residual),
        }

    def assume(self, nonzero: Any = None, positive: Any = None) -> "FrameState":
        assumptions = self.assumptions
        if nonzero is not None:
            assumptions = assumptions.assume_nonzero(nonzero)
        if positive is not None:
            assumptions = assumptions.assume_positive(positive)
        return replace(self, assumptions=assumptions, rows={})

    def prolonged(self, order: int) -> "FrameState":
        """Raise the frame order; structure equations at ``order`` need mu of that order."""
        if order > self.groupoid.max_order:
            raise OrderOverflow(order, self.groupoid.max_order)
        return replace(self, order=order, rows={})

    def with_residual(self, invariant: Symbol) -> "FrameState":
        if invariant in self.residual:
            return self
        return replace(self, residual=self.residual + (invariant,), rows={})


def initial_state(problem: Problem) -> FrameState:
    return FrameState(problem)


def _candidates(state: FrameState, row: Form) -> Dict[Generator, Expr]:
    return {
        g: row.coefficient(g)
        for g in row.generators()
        if g.kind == GeneratorKind.MAURER_CARTAN
    }


def _choose(
    state: FrameState, invariant: Symbol, row: Form, solve: Solve
) -> Tuple[Generator, Expr]:
    candidates = _candidates(state, row)
    licensed = {g: c for g, c in candidates.items() if state.assumptions.licenses(c)}
    name = invariant.name
    if isinstance(solve, Generator):
        if solve not in candidates:
            raise NotSolvable(f"{solve.label} does not occur in the recurrence of {name}")
        if solve not in licensed:
            raise NotSolvable(
                f"Coefficient {serialize(candidates[solve])} of {solve.label} in the "
                f"recurrence of {name} is not known to be nonzero"
            )
        return solve, licensed[solve]
    if isinstance(solve, AutoSolve):
        pool = [g for g in licensed if g.order == solve.order and g not in solve.keep]
        if not pool:
            raise NotSolvable(f"No free order-{solve.order} form to solve for with {name}")
        chosen = max(pool, key=lambda g: state.groupoid.rank_key((g.slot, g.index)))
        return chosen, licensed[chosen]
    if not licensed:
        raise NotSolvable(f"The recurrence of {name} has no licensed Maurer-Cartan coefficient")
    if len(licensed) > 1:
        raise AmbiguousSolve(name, sorted(g.label for g in licensed))
    chosen = next(iter(licensed))
    return chosen, licensed[chosen]


def _with_value(
    state: FrameState,
    invariant: Symbol,
    value: Expr,
    solved: Optional[Generator],
    substitutions: Mapping[Generator, Form],
    assumptions: AssumptionSet,
    solved_parameters: Mapping[Symbol, Optional[Expr]],
) -> FrameState:
    values = {**state.values, invariant: value}
    return replace(
        state,
        normalizations=state.normalizations + (Normalization(invariant, value, solved),),
        substitutions={g: f.subs({invariant: value}) for g, f in substitutions.items()},
        values=values,
        assumptions=assumptions,
        solved_parameters=solved_parameters,
        residual=tuple(s for s in state.residual if s != invariant),
        rows={},
    )


def normalize(state: FrameState, invariant: Symbol, value: Any, solve: Solve = None) -> FrameState:
    """
    Normalize a lifted invariant and solve its recurrence for one Maurer-Cartan form.

    Args:
        state (FrameState): The current partial frame.
        invariant (Symbol): A lifted invariant ``L.*`` not yet normalized.
        value (Any): Its normalized value.
        solve (Solve): The form to solve for, an :class:`AutoSolve` rule,
            ``"none"`` to record the value without solving, or None to
            require a unique candidate.

    Returns:
        FrameState: The extended frame.

    Raises:
        NotSolvable: Already normalized, or no licensed coefficient.
        AmbiguousSolve: Several candidates and no ``solve`` given.
    """
    from jetframe.moving_frame.recurrence import recurrence

    if state.is_normalized(invariant):
        raise NotSolvable(f"{invariant.name} is already normalized")
    target = canonical(value)
    if solve == SOLVE_NONE:
        info(logger, f"{invariant.name} = {serialize(target)}")
        return _with_value(
            state, invariant, target, None, state.substitutions, state.assumptions,
            state.solved_parameters,
        )
    row = recurrence(state, invariant).form.subs({invariant: target})
    g, c = _choose(state, invariant, row, solve)
    replacement = (row - Form.generator(g, c)).scale(-1 / c)
    substitutions = {
        h: f.replace_generators({g: replacement}) for h, f in state.substitutions.items()
    }
    substitutions[g] = replacement
    solved_parameters = dict(state.solved_parameters)
    jet = state.groupoid.group_jet(g.slot, g.index)
    solved_parameters[jet] = (
        solve_closed_form(state.problem, state.closed_forms(), invariant, target, jet)
        if state.problem.symbolic
        else None
    )
    info(logger, f"{invariant.name} = {serialize(target)}: {g.label} = {replacement.serialize()}")
    return _with_value(
        state, invariant, target, g, substitutions, state.assumptions.assume_nonzero(c),
        solved_parameters,
    )
