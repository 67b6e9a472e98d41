"""Structure equations on a partial frame, generator extraction and sweeps."""

from typing import Any, Dict, Iterable, List, Optional, Sequence

from sympy import Expr, Symbol

from jetframe._core.errors import IncompleteFrame, MissingLinearization, NotSolvable
from jetframe._core.utils.logger import get_logger, info, log_step
from jetframe.exterior_forms.form import Form, reduce_mod_contact
from jetframe.exterior_forms.generators import Generator, GeneratorKind, horizontal
from jetframe.exterior_forms.structure import horizontal_derivative, mc_structure
from jetframe.expr_kernel.kernel import normalize as canonical
from jetframe.expr_kernel.kernel import serialize
from jetframe.expr_kernel.symbols import lifted_symbol
from jetframe.moving_frame.state import SOLVE_NONE, AutoSolve, FrameState, normalize
from jetframe.moving_frame.symbolic import in_source

logger = get_logger(__name__)


def _differential(state: FrameState, g: Generator) -> Form:
    if g.kind == GeneratorKind.HORIZONTAL:
        raw = horizontal_derivative(state.groupoid, g.slot)
    elif g.kind == GeneratorKind.MAURER_CARTAN:
        if g in state.substitutions or state.table(g.order).is_principal((g.slot, g.index)):
            raise ValueError(f"{g.label} is not a free Maurer-Cartan form of the frame")
        raw = mc_structure(state.groupoid, g.slot, g.index)
    else:
        raise ValueError(f"No structure equation for contact form {g.label}")
    return reduce_mod_contact(state.reduce(raw))


def structure_equations(
    state: FrameState, generators: Optional[Sequence[Generator]] = None
) -> Dict[Generator, Form]:
    """
    Exterior derivatives of horizontal and free Maurer-Cartan forms on the frame.

    Args:
        state (FrameState): The partial frame.
        generators (Optional[Sequence[Generator]]): Forms to differentiate;
            defaults to the horizontal forms of the independent variables.

    Returns:
        Dict[Generator, Form]: 2-forms in horizontal and free generators,
        with the contact directions reduced.
    """
    if generators is None:
        generators = [horizontal(state.groupoid.variables, i) for i in range(state.space.n)]
    return {g: _differential(state, g) for g in generators}


def horizontal_structure(state: FrameState) -> List[Form]:
    """``d w^i`` for the independent variables; every base invariant must be normalized."""
    missing = [
        v for v in state.groupoid.variables if not state.is_normalized(lifted_symbol(v))
    ]
    if missing:
        raise IncompleteFrame(f"Order-0 lifted invariants not normalized: {', '.join(missing)}")
    return list(structure_equations(state).values())


def generating_invariants(state: FrameState) -> List[Expr]:
    """
    Coefficients of the solved Maurer-Cartan forms, constants dropped.

    Constant factors are stripped and duplicates removed; the result is
    sorted by serialized form.

    Raises:
        IncompleteFrame: If parameters below the frame order are still free.
    """
    free = state.free_parameters_by_order(state.order - 1)
    open_orders = {k: c for k, c in free.items() if c}
    if open_orders:
        raise IncompleteFrame(f"Free parameters remain by order: {open_orders}")
    found: Dict[str, Expr] = {}
    for form in state.substitutions.values():
        for c in form.terms.values():
            if c.is_number:
                continue
            _, rest = canonical(c).as_coeff_Mul()
            expr = canonical(rest)
            found.setdefault(serialize(expr), expr)
    return [found[k] for k in sorted(found)]


def express_in_source(state: FrameState, e: Any) -> Expr:
    """Rewrite lifted invariants in source jets through the solved closed forms."""
    if not state.problem.symbolic:
        raise ValueError("Source expressions need a problem with the symbolic path enabled")
    return in_source(state.problem, state.closed_forms(), state.values, canonical(e))


def _pending(state: FrameState, equations: Iterable[Form], retry: bool = False) -> List[Symbol]:
    found = set()
    for form in equations:
        for s in form.symbols():
            if state.space.lifted_info(s) is None:
                continue
            if state.is_normalized(s) or (s in state.residual and not retry):
                continue
            found.add(s)
    return sorted(found, key=lambda s: (state.space.lifted_info(s)[1].order, s.name))  # type: ignore[index]


@log_step("sweep")
def sweep(
    state: FrameState,
    generators: Optional[Sequence[Generator]],
    order: int,
    keep: Iterable[Generator] = (),
    value: Any = 0,
    conditions: bool = False,
) -> FrameState:
    """
    Normalize every lifted invariant appearing in the given structure equations.

    Each candidate is set to ``value`` and solved for the highest-ranked
    free form of ``order`` outside ``keep``. A candidate that cannot be
    solved is marked residual, or, with ``conditions``, recorded at
    ``value`` without solving, as a condition on the equation class.
    Candidates occurring in the branch assumptions always stay residual.
    Stops when no candidate is left.
    """
    rule = AutoSolve(order, frozenset(keep))
    while True:
        wanted = [
            g
            for g in (generators or [])
            if g.kind != GeneratorKind.MAURER_CARTAN or g not in state.substitutions
        ]
        equations = structure_equations(state, wanted if generators else None)
        assumed = state.assumptions.symbols()
        progressed = False
        for invariant in _pending(state, equations.values(), conditions):
            if invariant in state.residual and invariant in assumed:
                continue
            try:
                state = normalize(state, invariant, value, rule)
            except (NotSolvable, MissingLinearization) as e:
                if conditions and invariant not in assumed:
                    info(logger, f"{invariant.name} recorded as a condition: {e}")
                    state = normalize(state, invariant, value, SOLVE_NONE)
                    progressed = True
                    break
                info(logger, f"{invariant.name} left residual: {e}")
                state = state.with_residual(invariant)
                continue
            progressed = True
            break
        if not progressed:
            return state
