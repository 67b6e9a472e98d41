from .closed_forms import ClosedFormCheck, ClosedFormReport, check_invariance, frame_check
from .directives import Directive, DirectiveFactory
from .problem import Problem
from .recurrence import RecurrenceRow, linearize_at_identity, recurrence
from .script import FrameReport, run_script
from .state import AutoSolve, FrameState, Normalization, initial_state, normalize
from .structure import (
    express_in_source,
    generating_invariants,
    horizontal_structure,
    structure_equations,
    sweep,
)

__all__ = [
    "AutoSolve",
    "ClosedFormCheck",
    "ClosedFormReport",
    "Directive",
    "DirectiveFactory",
    "FrameReport",
    "FrameState",
    "Normalization",
    "Problem",
    "RecurrenceRow",
    "check_invariance",
    "express_in_source",
    "frame_check",
    "generating_invariants",
    "horizontal_structure",
    "initial_state",
    "linearize_at_identity",
    "normalize",
    "recurrence",
    "run_script",
    "structure_equations",
    "sweep",
]
