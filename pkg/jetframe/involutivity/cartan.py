from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from jetframe._core.errors import MonotonicityViolation
from jetframe._core.utils.logger import get_logger, info
from jetframe.det_systems.linearized import relation_table
from jetframe.det_systems.system import DeterminingSystem
from jetframe.exterior_forms.generators import maurer_cartan
from jetframe.involutivity.tableau import TableauInput, character_search

logger = get_logger(__name__)


@dataclass(frozen=True)
class CartanReport:
    """
    Outcome of Cartan's test.

    Attributes:
        characters (Tuple[int, ...]): Reduced characters s_1, ..., s_n.
        r (int): Free parameters of the next order.
        sum_k_k_sk (int): sum of k * s_k.
        involutive (bool): Whether ``r == sum_k_k_sk``.
        witnesses (List[List[List[str]]]): Directions achieving each rank.
        isolated (Tuple[str, ...]): Free generators in no equation.
    """

    characters: Tuple[int, ...]
    r: int
    sum_k_k_sk: int
    involutive: bool
    witnesses: List[List[List[str]]] = field(default_factory=list)
    isolated: Tuple[str, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "characters": list(self.characters),
            "r": self.r,
            "sum_k_k_sk": self.sum_k_k_sk,
            "involutive": self.involutive,
            "witnesses": self.witnesses,
            "isolated": list(self.isolated),
        }

    def describe(self) -> str:
        relation = "=" if self.involutive else ("<" if self.r < self.sum_k_k_sk else ">")
        return (
            f"characters: {list(self.characters)}\n"
            f"r = {self.r} {relation} {self.sum_k_k_sk}\n"
            f"involutive: {str(self.involutive).lower()}"
        )


def cartan_test(
    characters: Sequence[int],
    free_param_count: int,
    witnesses: Optional[List[List[List[str]]]] = None,
    isolated: Sequence[str] = (),
) -> CartanReport:
    """
    Compare the free parameter count with ``sum k * s_k``.

    Raises:
        MonotonicityViolation: If the characters increase somewhere.
    """
    values = tuple(int(s) for s in characters)
    if any(later > earlier for earlier, later in zip(values, values[1:])):
        raise MonotonicityViolation(values)
    total = sum(k * s for k, s in enumerate(values, start=1))
    return CartanReport(
        values,
        int(free_param_count),
        total,
        int(free_param_count) == total,
        list(witnesses or []),
        tuple(isolated),
    )


def free_parameter_count(system: DeterminingSystem, state: Any, order: int) -> int:
    """Order-``order`` parametric group jets of ``system`` the frame has not solved."""
    table = relation_table(system, order, state.base_point())
    return sum(
        1
        for a, index in table.parametric(order)
        if maurer_cartan(system.groupoid, a, index) not in state.substitutions
    )


def cartan_analysis(
    state: Any,
    order: int,
    tableau: Optional[TableauInput] = None,
    seed: Optional[int] = None,
    trials: Optional[int] = None,
) -> CartanReport:
    """Characters of the frame's tableau against its free parameters of ``order``."""
    t = tableau if tableau is not None else TableauInput.from_state(state)
    search = character_search(t, seed, trials)
    r = free_parameter_count(state.problem.system, state, order)
    info(logger, f"r^({order}) = {r}")
    return cartan_test(
        search.characters,
        r,
        search.describe_witnesses(),
        [g.label for g in t.isolated()],
    )
