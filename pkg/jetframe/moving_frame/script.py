from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

from jetframe._core.errors import JetframeError, ScriptError
from jetframe._core.utils.logger import get_logger, info, log_step
from jetframe.expr_kernel.kernel import serialize
from jetframe.moving_frame.directives import Directive
from jetframe.moving_frame.problem import Problem
from jetframe.moving_frame.state import FrameState, initial_state

logger = get_logger(__name__)

NUMERIC_ONLY = "numeric-only"


@dataclass(frozen=True)
class FrameReport:
    """JSON-ready summary of a frame state."""

    solved: Dict[str, str] = field(default_factory=dict)
    substitutions: Dict[str, str] = field(default_factory=dict)
    assumptions: List[str] = field(default_factory=list)
    free_parameters_by_order: Dict[str, int] = field(default_factory=dict)
    normalizations: List[str] = field(default_factory=list)
    residual: List[str] = field(default_factory=list)

    @classmethod
    def from_state(cls, state: FrameState) -> "FrameReport":
        solved = {
            s.name: NUMERIC_ONLY if e is None else serialize(e)
            for s, e in state.solved_parameters.items()
        }
        serialized = state.serialize()
        return cls(
            solved=dict(sorted(solved.items())),
            substitutions=serialized["substitutions"],
            assumptions=serialized["assumptions"],
            free_parameters_by_order={
                str(k): v for k, v in state.free_parameters_by_order().items()
            },
            normalizations=serialized["normalizations"],
            residual=serialized["residual"],
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "solved": self.solved,
            "substitutions": self.substitutions,
            "assumptions": self.assumptions,
            "free_parameters_by_order": self.free_parameters_by_order,
            "normalizations": self.normalizations,
            "residual": self.residual,
        }


@log_step("frame script")
def run_script(
    problem: Problem, directives: Sequence[Directive]
) -> Tuple[FrameState, FrameReport]:
    """
    Fold ``directives`` over the initial frame of ``problem``.

    Raises:
        ScriptError: Wrapping the first failing directive with its index.
    """
    state = initial_state(problem)
    for i, directive in enumerate(directives):
        try:
            state = directive.apply(state)
        except JetframeError as e:
            raise ScriptError(i, directive.name, e) from e
        info(logger, f"[{i}] {directive.name} done")
    return state, FrameReport.from_state(state)
