from dataclasses import dataclass, field
from enum import IntEnum
from typing import Sequence, Tuple

from jetframe.jet_space.groupoid import GroupoidSpace
from jetframe.jet_space.multiindex import MultiIndex


class GeneratorKind(IntEnum):
    HORIZONTAL = 0
    CONTACT = 1
    MAURER_CARTAN = 2


@dataclass(frozen=True)
class Generator:
    """
    A one-form of the coframe.

    ``slot`` is the base-variable position (horizontal, Maurer-Cartan
    component) or the dependent-variable position (contact); ``index`` is
    over all base variables for Maurer-Cartan forms and over the independent
    variables for contact forms.
    """

    kind: GeneratorKind
    slot: int
    index: MultiIndex
    label: str = field(compare=False, hash=False)

    @property
    def order(self) -> int:
        return self.index.order

    def sort_key(self) -> Tuple[int, int, int, Tuple[int, ...]]:
        return (int(self.kind), self.index.order, self.slot, tuple(-c for c in self.index.counts))

    def __lt__(self, other: "Generator") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return self.label

    def __repr__(self) -> str:
        return self.label


def _bracket(names: Sequence[str]) -> str:
    return f"[{','.join(names)}]" if names else ""


def horizontal(variables: Sequence[str], b: int) -> Generator:
    return Generator(
        GeneratorKind.HORIZONTAL, b, MultiIndex(()), f"w.{variables[b]}"
    )


def contact(
    independent: Sequence[str], dependent: Sequence[str], alpha: int, index: MultiIndex
) -> Generator:
    label = f"th.{dependent[alpha]}{_bracket(index.names(independent))}"
    return Generator(GeneratorKind.CONTACT, alpha, index, label)


def maurer_cartan(groupoid: GroupoidSpace, a: int, index: MultiIndex) -> Generator:
    label = f"mu.{groupoid.components[a]}{_bracket(index.names(groupoid.variables))}"
    return Generator(GeneratorKind.MAURER_CARTAN, a, index, label)


def generator_from_label(groupoid: GroupoidSpace, label: str) -> Generator:
    """Parse ``w.x`` or ``mu.X[x,u]`` back into a generator.

    Raises:
        ValueError: If the label names no generator of the groupoid.
    """
    text = label.strip()
    if text.startswith("w."):
        name = text[2:]
        if name not in groupoid.variables:
            raise ValueError(f"Unknown horizontal form '{label}'")
        return horizontal(groupoid.variables, groupoid.variables.index(name))
    if text.startswith("mu."):
        body = text[3:]
        name, _, rest = body.partition("[")
        if name not in groupoid.components:
            raise ValueError(f"Unknown Maurer-Cartan form '{label}'")
        names = [v.strip() for v in rest.rstrip("]").split(",")] if rest else []
        unknown = [v for v in names if v not in groupoid.variables]
        if unknown:
            raise ValueError(f"Unknown variables {unknown} in '{label}'")
        index = MultiIndex.from_names(names, groupoid.variables)
        a = groupoid.components.index(name)
        if not groupoid.allows(a, index):
            raise ValueError(f"'{label}' is omitted by the dependencies of {name}")
        return maurer_cartan(groupoid, a, index)
    raise ValueError(f"'{label}' is not a generator label")

