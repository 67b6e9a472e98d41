from dataclasses import dataclass
from typing import Dict, Mapping, Optional, Sequence, Tuple

from sympy import Expr, Symbol, sympify

from jetframe.expr_kernel.kernel import normalize
from jetframe.expr_kernel.symbols import base_symbol
from jetframe.jet_space.groupoid import GroupoidSpace
from jetframe.jet_space.multiindex import MultiIndex
from jetframe.jet_space.space import JetSpace


@dataclass(frozen=True)
class PointTransformation:
    """
    A point transformation (x, u) -> (X, U) of the base of a jet space.

    Targets are expressions in the base coordinates and, depending on the
    form, in group parameters (explicit family) or in group jets of a
    groupoid (symbolic form, possibly with lifted components defined by a
    first prolongation).
    """

    space: JetSpace
    targets: Tuple[Expr, ...]
    groupoid: Optional[GroupoidSpace] = None
    parameters: Tuple[Symbol, ...] = ()

    def __post_init__(self) -> None:
        if len(self.targets) != self.space.n + self.space.m:
            raise ValueError(
                f"Expected {self.space.n + self.space.m} target components, "
                f"got {len(self.targets)}"
            )

    @property
    def symbolic(self) -> bool:
        return self.groupoid is not None

    @property
    def horizontal(self) -> Tuple[Expr, ...]:
        return self.targets[: self.space.n]

    @property
    def vertical(self) -> Tuple[Expr, ...]:
        return self.targets[self.space.n :]

    @classmethod
    def identity(cls, space: JetSpace) -> "PointTransformation":
        return cls(space, tuple(base_symbol(v) for v in space.variables))

    @classmethod
    def explicit(
        cls,
        space: JetSpace,
        targets: Mapping[str, Expr],
        parameters: Sequence[Symbol] = (),
    ) -> "PointTransformation":
        """Build from a map base variable -> target expression."""
        missing = [v for v in space.variables if v not in targets]
        if missing:
            raise ValueError(f"Missing target expressions for {missing}")
        ordered = tuple(sympify(targets[v]) for v in space.variables)
        return cls(space, ordered, None, tuple(parameters))

    @classmethod
    def symbolic_form(cls, space: JetSpace, groupoid: GroupoidSpace) -> "PointTransformation":
        """Targets are the order-0 group jets Z^a."""
        zero = MultiIndex.zero(groupoid.size)
        targets = tuple(groupoid.group_jet(a, zero) for a in range(groupoid.size))
        return cls(space, targets, groupoid)

    @classmethod
    def lifted(
        cls,
        space: JetSpace,
        groupoid: GroupoidSpace,
        inner_independent: Sequence[str],
        inner_dependent: Sequence[str],
        derived: Mapping[str, str],
    ) -> "PointTransformation":
        """
        Symbolic form whose derived components are a first prolongation.

        The base variables of ``space`` are the inner base variables plus the
        first-order jets of the inner space renamed through ``derived``
        (e.g. ``{"u[x]": "p", "u[y]": "q"}``); the targets of the renamed
        coordinates are the prolonged targets of the inner transformation.
        """
        from jetframe.jet_space.prolong import prolong

        inner_vars = tuple(inner_independent) + tuple(inner_dependent)
        inner_groupoid = GroupoidSpace.over(
            inner_independent,
            inner_dependent,
            [groupoid.components[groupoid.variables.index(v)] for v in inner_vars],
            groupoid.max_order,
            {
                groupoid.components[a]: [groupoid.variables[i] for i in groupoid.depends[a]]
                for a in range(groupoid.size)
                if groupoid.variables[a] in inner_vars
            },
        )
        inner_space = JetSpace(tuple(inner_independent), tuple(inner_dependent), 1)
        inner = cls.symbolic_form(inner_space, inner_groupoid)
        action = prolong(inner, 1)
        renames: Dict[Symbol, Symbol] = {}
        for jet_name, variable in derived.items():
            renames[Symbol(jet_name)] = base_symbol(variable)
        zero = MultiIndex.zero(groupoid.size)
        targets = []
        for a, variable in enumerate(groupoid.variables):
            if variable in inner_vars:
                targets.append(groupoid.group_jet(a, zero))
                continue
            jet_name = next(k for k, v in derived.items() if v == variable)
            jet = inner_space.jet_info(Symbol(jet_name))
            if jet is None or jet[1].order != 1:
                raise ValueError(f"'{jet_name}' is not a first-order jet of the source")
            targets.append(normalize(action.value(*jet).xreplace(renames)))
        return cls(space, tuple(targets), groupoid)

    def compose(self, other: "PointTransformation") -> "PointTransformation":
        """``self`` after ``other`` (explicit forms)."""
        if self.symbolic or other.symbolic:
            raise ValueError("Composition is defined for explicit transformations")
        bindings = {base_symbol(v): t for v, t in zip(self.space.variables, other.targets)}
        targets = tuple(t.xreplace(bindings) for t in self.targets)
        return PointTransformation(
            self.space, targets, None, self.parameters + other.parameters
        )
