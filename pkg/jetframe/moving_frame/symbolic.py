"""Closed forms of normalized group parameters in source jets.

Lifted invariants are taken from the symbolic prolongation of the problem's
transformation; principal group jets are replaced through the prolonged
determining system, solved parameters through their closed forms.
"""

from functools import lru_cache
from typing import Dict, Mapping, Optional

from sympy import Expr, Symbol, fraction, solve

from jetframe._core.settings.loader import setting
from jetframe._core.utils.logger import get_logger, info
from jetframe.det_systems.system import prolong_system, reduce_by
from jetframe.expr_kernel.kernel import node_count, normalize, serialize
from jetframe.jet_space.prolong import ProlongedAction, prolong
from jetframe.moving_frame.problem import Problem

logger = get_logger(__name__)


@lru_cache(maxsize=16)
def prolonged_action(problem: Problem, order: int) -> ProlongedAction:
    return prolong(problem.transformation, order)


@lru_cache(maxsize=16)
def _solved_system(problem: Problem, order: int) -> Dict[Symbol, Expr]:
    system = problem.system
    return prolong_system(system, min(order, system.t_max)).solved()


def lifted_formula(problem: Problem, invariant: Symbol) -> Expr:
    """The lifted invariant as an expression in source jets and group jets."""
    parsed = problem.space.lifted_info(invariant)
    if parsed is None:
        raise ValueError(f"{invariant} is not a lifted invariant of the problem")
    order = parsed[1].order
    bindings = prolonged_action(problem, order).lifted_bindings()
    groupoid_order = min(order + 1, problem.groupoid.max_order)
    return reduce_by(bindings[invariant], _solved_system(problem, groupoid_order))


def in_source(
    problem: Problem,
    closed_forms: Mapping[Symbol, Expr],
    values: Mapping[Symbol, Expr],
    e: Expr,
) -> Expr:
    """Replace lifted invariants of ``e`` by their formulas under the closed forms."""
    bindings: Dict[Symbol, Expr] = {}
    for s in e.free_symbols:
        if problem.space.lifted_info(s) is None:
            continue
        bindings[s] = values[s] if s in values else lifted_formula(problem, s)
    expr = normalize(e.xreplace(bindings))
    order = max((problem.space.lifted_info(s)[1].order for s in bindings), default=0)  # type: ignore[index]
    solved = {**_solved_system(problem, min(order + 1, problem.groupoid.max_order))}
    solved.update(closed_forms)
    return reduce_by(expr, solved)


def solve_closed_form(
    problem: Problem,
    closed_forms: Mapping[Symbol, Expr],
    invariant: Symbol,
    value: Expr,
    unknown: Symbol,
    max_nodes: Optional[int] = None,
) -> Optional[Expr]:
    """
    Solve ``invariant = value`` for the group jet ``unknown``.

    Returns:
        Optional[Expr]: The closed form, or None when the equation is over
        the node budget or does not have exactly one solution.
    """
    budget = int(setting("max_nodes", max_nodes))
    formula = in_source(problem, closed_forms, {}, invariant)
    if node_count(formula, budget) > budget:
        info(logger, f"{invariant.name}: formula over the node budget, numeric only")
        return None
    numerator, _ = fraction(normalize(formula - value))
    try:
        solutions = solve(numerator, unknown)
    except NotImplementedError:
        return None
    if len(solutions) != 1:
        info(logger, f"{unknown.name}: {len(solutions)} solutions, numeric only")
        return None
    closed = normalize(solutions[0])
    info(logger, f"{unknown.name} = {serialize(closed)}")
    return closed
