from dataclasses import dataclass
from typing import Optional

from jetframe.det_systems.system import DeterminingSystem
from jetframe.jet_space.groupoid import GroupoidSpace
from jetframe.jet_space.space import JetSpace
from jetframe.jet_space.transformation import PointTransformation


@dataclass(frozen=True)
class Problem:
    """
    A pseudo-group acting on a jet space.

    Attributes:
        space (JetSpace): The jet space; ``max_order`` is the jet order q.
        system (DeterminingSystem): Determining equations; the groupoid's
            ``max_order`` is the group order p.
        transformation (PointTransformation): Symbolic (or lifted) form of a
            pseudo-group element, used by the symbolic path and the numeric
            checks.
        action (Optional[PointTransformation]): Explicit family with group
            parameters, when the pseudo-group is a Lie group given in closed
            form.
        symbolic (bool): Whether normalizations also derive closed forms of
            the solved parameters.
    """

    space: JetSpace
    system: DeterminingSystem
    transformation: PointTransformation
    action: Optional[PointTransformation] = None
    symbolic: bool = False

    def __post_init__(self) -> None:
        if self.groupoid.variables != self.space.variables:
            raise ValueError(
                f"Groupoid variables {self.groupoid.variables} differ from "
                f"jet space variables {self.space.variables}"
            )
        if self.groupoid.n != self.space.n:
            raise ValueError("Groupoid and jet space disagree on independent variables")
        if self.transformation.space.variables != self.space.variables:
            raise ValueError("Transformation acts on a different base")
        if self.action is not None and self.action.symbolic:
            raise ValueError("An explicit action must not be given in symbolic form")

    @property
    def groupoid(self) -> GroupoidSpace:
        return self.system.groupoid

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def m(self) -> int:
        return self.space.m

    @classmethod
    def symbolic_form(
        cls,
        system: DeterminingSystem,
        jet_order: int,
        action: Optional[PointTransformation] = None,
        symbolic: bool = False,
    ) -> "Problem":
        """Problem whose transformation has the order-0 group jets as targets."""
        space = system.jet_space(jet_order)
        transformation = PointTransformation.symbolic_form(space, system.groupoid)
        return cls(space, system, transformation, action, symbolic)
