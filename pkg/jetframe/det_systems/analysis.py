import random
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional, Tuple

from sympy import Rational, Symbol

from jetframe._core.errors import Undetermined
from jetframe._core.settings.loader import setting
from jetframe._core.utils.logger import get_logger, info, log_step
from jetframe._core.utils.sampling import random_nonzero_rational
from jetframe.det_systems.linearized import RelationTable, relation_table
from jetframe.det_systems.system import DeterminingSystem
from jetframe.expr_kernel.symbols import base_symbol
from jetframe.jet_space.groupoid import Column, GroupoidSpace

logger = get_logger(__name__)


@dataclass(frozen=True)
class JetPartition:
    """Principal and parametric group jets, per order."""

    groupoid: GroupoidSpace
    parametric: Mapping[int, Tuple[Column, ...]]
    principal: Mapping[int, Tuple[Column, ...]]

    @property
    def order(self) -> int:
        return max(self.parametric, default=0)

    def dim(self, q: int) -> int:
        """dim H_q: parametric jets of order at most ``q``."""
        return sum(len(self.parametric.get(k, ())) for k in range(q + 1))

    def symbols(self, columns: Tuple[Column, ...]) -> List[Symbol]:
        return [self.groupoid.group_jet(a, index) for a, index in columns]

    def describe(self) -> Dict[str, List[str]]:
        return {
            f"order_{k}": [s.name for s in self.symbols(self.parametric[k])]
            for k in sorted(self.parametric)
        }


def sample_base_point(
    groupoid: GroupoidSpace, seed: Optional[int] = None
) -> Dict[Symbol, Rational]:
    """A random base point with nonzero rational coordinates."""
    rng = random.Random(int(setting("seed", seed)))
    bound = int(setting("direction_bound"))
    return {base_symbol(v): random_nonzero_rational(rng, bound) for v in groupoid.variables}


def jet_partition(
    system: DeterminingSystem,
    order: int,
    point: Optional[Mapping[Symbol, Any]] = None,
    seed: Optional[int] = None,
) -> JetPartition:
    """Partition the group jets up to ``order`` at ``point`` (random if omitted)."""
    base = point if point is not None else sample_base_point(system.groupoid, seed)
    table = relation_table(system, order, base)
    return _partition(table, order)


def _partition(table: RelationTable, order: int) -> JetPartition:
    return JetPartition(
        table.groupoid,
        {k: tuple(table.parametric(k)) for k in range(order + 1)},
        {k: tuple(table.principal(k)) for k in range(order + 1)},
    )


def groupoid_dim(system: DeterminingSystem, q: int, seed: Optional[int] = None) -> int:
    """
    Fiber dimension of H_q: the number of parametric group jets of order <= q.

    Raises:
        Undetermined: If ``q`` exceeds the system's ``t_max``.
    """
    if q > system.t_max:
        raise Undetermined(f"Order {q} is beyond t_max={system.t_max}")
    return jet_partition(system, q, seed=seed).dim(q)


def _dims(system: DeterminingSystem, order: int, point: Mapping[Symbol, Any]) -> List[int]:
    table = relation_table(system, order, point)
    return [len(table.parametric(k)) for k in range(order + 1)]


@log_step("system order")
def system_order(system: DeterminingSystem, seed: Optional[int] = None) -> int:
    """
    Smallest t* whose truncation generates the whole system up to ``t_max``.

    The truncation to equations of order <= t is prolonged and compared with
    the full system by the parametric counts of every order up to ``t_max``.

    Raises:
        Undetermined: If ``t_max`` is below the order of some equation.
    """
    if system.t_max < system.order:
        raise Undetermined(
            f"t_max={system.t_max} is below the equation order {system.order}"
        )
    point = sample_base_point(system.groupoid, seed)
    full = _dims(system, system.t_max, point)
    for t in range(system.order + 1):
        if _dims(system.truncated(t), system.t_max, point) == full:
            info(logger, f"System order: {t}")
            return t
    return system.order


def _vertical_principal(table: RelationTable, order: int) -> bool:
    groupoid = table.groupoid
    return all(
        table.is_principal(column)
        for column in groupoid.columns(order)
        if groupoid.is_vertical(column[1])
    )


@log_step("quasi-horizontality")
def quasi_horizontal(
    system: DeterminingSystem, seed: Optional[int] = None
) -> Tuple[bool, Optional[int]]:
    """
    Check whether every group jet with a dependent-variable derivative is
    eventually principal.

    Returns ``(True, r)`` for the smallest ``r >= max(t*, 1)`` at which all
    such jets of orders r and r + 1 are principal, ``(False, None)`` when no
    such order exists below ``t_max``.

    Raises:
        Undetermined: If ``t_max`` leaves no order to check.
    """
    t_star = system_order(system, seed)
    first = max(t_star, 1)
    if system.t_max - 1 < first:
        raise Undetermined(
            f"t_max={system.t_max} is too small to check orders from {first}"
        )
    point = sample_base_point(system.groupoid, seed)
    table = relation_table(system, system.t_max, point)
    for r in range(first, system.t_max):
        if _vertical_principal(table, r) and _vertical_principal(table, r + 1):
            info(logger, f"Quasi-horizontal of order {r}")
            return True, r
    return False, None
