"""
Reduced Cartan characters of a system of structure equations.

The contraction of each 2-form with a direction of horizontal forms gives a
row of coefficients on the free generators. Stacking the rows of k
directions, the maximal rank over generic directions is s_1 + ... + s_k;
maxima are estimated with random rational directions and exact ranks, and
the directions achieving each maximum are kept as witnesses.
"""

import random
from dataclasses import dataclass
from itertools import combinations_with_replacement, product
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy import Matrix, Rational, zeros
from sympy.polys.matrices import DomainMatrix

from jetframe._core.settings.loader import setting
from jetframe._core.utils.logger import get_logger, info, log_step
from jetframe._core.utils.sampling import random_vector
from jetframe.exterior_forms.form import Form, contract
from jetframe.exterior_forms.generators import Generator, GeneratorKind, horizontal

logger = get_logger(__name__)

Direction = Tuple[Rational, ...]


@dataclass(frozen=True)
class TableauInput:
    """
    Structure equations with their free generators and contraction directions.

    Attributes:
        equations (Tuple[Form, ...]): 2-forms, one per row block.
        free (Tuple[Generator, ...]): Maurer-Cartan generators treated as
            unknowns, in column order.
        directions (Tuple[Generator, ...]): Horizontal generators a
            direction pairs with.
    """

    equations: Tuple[Form, ...]
    free: Tuple[Generator, ...]
    directions: Tuple[Generator, ...]

    def __post_init__(self) -> None:
        if any(f.degree != 2 and not f.is_zero() for f in self.equations):
            raise ValueError("Tableau equations must be 2-forms")
        if any(g.kind != GeneratorKind.HORIZONTAL for g in self.directions):
            raise ValueError("Directions pair with horizontal generators only")

    @property
    def n(self) -> int:
        return len(self.directions)

    def isolated(self) -> List[Generator]:
        """Free generators that occur in no equation."""
        used = set()
        for f in self.equations:
            used |= f.generators()
        return [g for g in self.free if g not in used]

    @classmethod
    def from_state(
        cls,
        state: Any,
        generators: Optional[Sequence[Generator]] = None,
        directions: Optional[Sequence[Generator]] = None,
        free: Optional[Sequence[Generator]] = None,
    ) -> "TableauInput":
        """
        Tableau of a frame's structure equations.

        ``free`` defaults to every Maurer-Cartan generator occurring in the
        equations, ``directions`` to the horizontal forms of the independent
        variables.
        """
        from jetframe.moving_frame.structure import structure_equations

        equations = tuple(structure_equations(state, generators).values())
        if directions is None:
            variables = state.groupoid.variables
            directions = [horizontal(variables, i) for i in range(state.space.n)]
        if free is None:
            found = set()
            for f in equations:
                found |= {g for g in f.generators() if g.kind == GeneratorKind.MAURER_CARTAN}
            free = sorted(found)
        return cls(equations, tuple(free), tuple(directions))


def character_matrix(t: TableauInput, direction: Sequence[Any]) -> Matrix:
    """Rows: contractions of each equation with ``direction``; columns: free generators."""
    if len(direction) != t.n:
        raise ValueError(f"Direction needs {t.n} entries, got {len(direction)}")
    pairing = dict(zip(t.directions, direction))
    matrix = zeros(len(t.equations), len(t.free))
    for i, f in enumerate(t.equations):
        if f.is_zero():
            continue
        row = contract(f, pairing)
        for j, g in enumerate(t.free):
            matrix[i, j] = row.coefficient(g)
    return matrix


def stacked_rank(t: TableauInput, directions: Sequence[Sequence[Any]]) -> int:
    """Exact rank of the contraction matrices of ``directions`` stacked."""
    if not directions or not t.free or not t.equations:
        return 0
    blocks = [character_matrix(t, d) for d in directions]
    stacked = Matrix.vstack(*blocks)
    dm = DomainMatrix.from_list_sympy(stacked.rows, stacked.cols, stacked.tolist())
    return int(dm.to_field().rank())


@dataclass(frozen=True)
class CharacterSearch:
    """
    Result of the randomized search.

    ``ranks[k-1]`` is the best stacked rank of k directions and
    ``witnesses[k-1]`` the k directions achieving it.
    """

    characters: Tuple[int, ...]
    ranks: Tuple[int, ...]
    witnesses: Tuple[Tuple[Direction, ...], ...]
    trials: int
    stabilized: bool

    def describe_witnesses(self) -> List[List[List[str]]]:
        return [[[str(v) for v in d] for d in w] for w in self.witnesses]


def _basis(t: TableauInput) -> List[Matrix]:
    return [
        character_matrix(t, [1 if j == i else 0 for j in range(t.n)]) for i in range(t.n)
    ]


def _prefix_ranks(basis: List[Matrix], directions: List[List[Rational]]) -> List[int]:
    ranks: List[int] = []
    blocks: List[Matrix] = []
    for d in directions:
        block = basis[0] * d[0]
        for b, v in zip(basis[1:], d[1:]):
            block = block + b * v
        blocks.append(block)
        stacked = Matrix.vstack(*blocks)
        if stacked.cols == 0 or stacked.rows == 0:
            ranks.append(0)
            continue
        dm = DomainMatrix.from_list_sympy(stacked.rows, stacked.cols, stacked.tolist())
        ranks.append(int(dm.to_field().rank()))
    return ranks


@log_step("reduced characters")
def character_search(
    t: TableauInput,
    seed: Optional[int] = None,
    trials: Optional[int] = None,
    patience: Optional[int] = None,
) -> CharacterSearch:
    """
    Maximal stacked ranks over random directions, with witnesses.

    Trials stop once no maximum has improved for ``patience`` consecutive
    trials; a warning is logged if the trial budget runs out first.
    """
    total = int(setting("character_trials", trials))
    if total < 1:
        raise ValueError("At least one trial is needed")
    wait = int(setting("character_patience", patience))
    bound = int(setting("direction_bound"))
    rng = random.Random(int(setting("seed", seed)))
    n = t.n
    if n == 0:
        return CharacterSearch((), (), (), 0, True)
    basis = _basis(t)
    best = [-1] * n
    witnesses: List[Tuple[Direction, ...]] = [()] * n
    ceiling = [min(k * len(t.equations), len(t.free)) for k in range(1, n + 1)]
    quiet = 0
    used = 0
    stabilized = False
    for _ in range(total):
        used += 1
        directions = [random_vector(rng, n, bound) for _ in range(n)]
        ranks = _prefix_ranks(basis, directions)
        improved = False
        for k, rank in enumerate(ranks):
            if rank > best[k]:
                best[k] = rank
                witnesses[k] = tuple(tuple(d) for d in directions[: k + 1])
                improved = True
        quiet = 0 if improved else quiet + 1
        if best == ceiling or quiet >= wait:
            stabilized = True
            break
    if not stabilized:
        logger.warning(f"Character ranks did not stabilize within {total} trials")
    characters = tuple(best[k] - (best[k - 1] if k else 0) for k in range(n))
    info(logger, f"Reduced characters {list(characters)} after {used} trials")
    return CharacterSearch(characters, tuple(best), tuple(witnesses), used, stabilized)


def reduced_characters(
    t: TableauInput, seed: Optional[int] = None, trials: Optional[int] = None
) -> List[int]:
    """s_k = (best rank of k stacked directions) - (best rank of k - 1)."""
    return list(character_search(t, seed, trials).characters)


def exhaustive_ranks(t: TableauInput, grid: Sequence[int]) -> List[int]:
    """Best stacked ranks over every choice of directions from an integer grid."""
    vectors = [list(v) for v in product(grid, repeat=t.n)]
    best: Dict[int, int] = {}
    for k in range(1, t.n + 1):
        best[k] = max(
            (stacked_rank(t, list(combo)) for combo in combinations_with_replacement(vectors, k)),
            default=0,
        )
    return [best[k] for k in range(1, t.n + 1)]
