"""Recurrence formulas: differentials of lifted invariants on a partial frame."""

from dataclasses import dataclass
from typing import Dict, Mapping

from sympy import Expr, Integer, Symbol

from jetframe._core.errors import MissingLinearization
from jetframe.exterior_forms.form import Form
from jetframe.exterior_forms.generators import Generator, horizontal, maurer_cartan
from jetframe.expr_kernel.kernel import diff, normalize
from jetframe.jet_space.infinitesimal import prolongation_coefficients
from jetframe.jet_space.multiindex import MultiIndex
from jetframe.jet_space.prolong import ProlongedAction
from jetframe.moving_frame.state import FrameState


@dataclass(frozen=True)
class RecurrenceRow:
    """
    ``d Û = horizontal + mc`` for one lifted invariant.

    ``horizontal`` and ``mc`` hold the raw coefficients before the frame's
    substitutions; ``form`` is the row pulled back to the frame.
    """

    invariant: Symbol
    horizontal: Mapping[Generator, Expr]
    mc: Mapping[Generator, Expr]
    form: Form


def recurrence(state: FrameState, invariant: Symbol) -> RecurrenceRow:
    """
    The recurrence row of ``invariant`` at the current frame.

    Raises:
        ValueError: If ``invariant`` is not a lifted invariant of the problem.
        MissingLinearization: If its order exceeds the groupoid order.
    """
    cached = state.rows.get(invariant)
    if cached is not None:
        return cached
    space, groupoid = state.space, state.groupoid
    parsed = space.lifted_info(invariant)
    if parsed is None:
        raise ValueError(f"{invariant} is not a lifted invariant of the problem")
    name, index = parsed
    if index.order > groupoid.max_order:
        raise MissingLinearization(
            f"{invariant.name} needs group jets of order {index.order}, "
            f"the groupoid stops at {groupoid.max_order}"
        )
    h: Dict[Generator, Expr] = {}
    mc: Dict[Generator, Expr] = {}
    if name in space.independent:
        b = space.independent.index(name)
        h[horizontal(groupoid.variables, b)] = Integer(1)
        mc[maurer_cartan(groupoid, b, MultiIndex.zero(groupoid.size))] = Integer(1)
    else:
        alpha = space.dependent.index(name)
        for i in range(space.n):
            value = state.lifted_value(alpha, index.bump(i))
            if value != 0:
                h[horizontal(groupoid.variables, i)] = value
        coefficients = prolongation_coefficients(
            space, groupoid, alpha, index, state.lifted_value
        )
        for (a, column), c in coefficients.items():
            mc[maurer_cartan(groupoid, a, column)] = c
    raw = Form.build(1, [((g,), c) for g, c in {**h, **mc}.items()])
    row = RecurrenceRow(invariant, h, mc, state.reduce(raw))
    state.rows[invariant] = row
    return row


def linearize_at_identity(pa: ProlongedAction, alpha: int, index: MultiIndex) -> Dict[Symbol, Expr]:
    """
    First-order part of Û^alpha_J at the identity jet.

    Keys are group jets; values are the coefficients of the corresponding
    infinitesimal generators, in source jets.
    """
    groupoid = pa.transformation.groupoid
    if groupoid is None:
        raise ValueError("Linearization needs a transformation in symbolic form")
    value = pa.value(alpha, index)
    symbols = [s for s in value.free_symbols if groupoid.group_jet_info(s) is not None]
    identity = groupoid.identity_bindings(symbols)
    result: Dict[Symbol, Expr] = {}
    for s in symbols:
        c = normalize(diff(value, s).xreplace(identity))
        if c != 0:
            result[s] = c
    return result
