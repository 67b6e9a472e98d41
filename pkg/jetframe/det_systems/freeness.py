"""Rank certificates for eventually free pseudo-groups.

Both checks work with the infinitesimal relations at a section's base point
and the linearized normalization equations at the section's jets, sampled
at random rational sections; the answer must agree on every sample.
"""

import random
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from sympy import Expr, Integer, Rational, Symbol
from sympy.polys.matrices import DomainMatrix

from jetframe._core.errors import RankDeficient
from jetframe._core.settings.loader import setting
from jetframe._core.utils.logger import get_logger, info, log_step
from jetframe._core.utils.sampling import random_nonzero_rational
from jetframe.det_systems.linearized import relation_table
from jetframe.det_systems.system import DeterminingSystem
from jetframe.expr_kernel.symbols import SymKind, base_symbol, sym_info
from jetframe.jet_space.groupoid import Column, GroupoidSpace
from jetframe.jet_space.infinitesimal import (
    flat_derivative_coefficients,
    prolongation_coefficients,
)
from jetframe.jet_space.multiindex import MultiIndex
from jetframe.jet_space.space import JetSpace

logger = get_logger(__name__)

Row = Mapping[Column, Expr]
Target = Tuple[int, MultiIndex]


def _rank(rows: Sequence[Row], columns: Sequence[Column]) -> int:
    position = {c: j for j, c in enumerate(columns)}
    elements: Dict[int, Dict[int, Expr]] = {}
    for i, row in enumerate(rows):
        entries = {position[c]: v for c, v in row.items() if c in position and v != 0}
        if entries:
            elements[i] = entries
    if not elements:
        return 0
    matrix = DomainMatrix.from_dict_sympy(len(rows), len(columns), elements)
    return int(matrix.to_field().rank())


def _targets(space: JetSpace, invariants: Sequence[Any]) -> List[Target]:
    """Positions of lifted invariants; base coordinates get ``(-1 - b, 0)``."""
    found: List[Target] = []
    for invariant in invariants:
        symbol = invariant if isinstance(invariant, Symbol) else Symbol(str(invariant))
        parsed = sym_info(symbol)
        if parsed.kind != SymKind.LIFTED:
            raise ValueError(f"{symbol} is not a lifted invariant")
        if parsed.name in space.independent:
            if parsed.index:
                raise ValueError(f"{symbol}: independent variables take no index")
            found.append((-1 - space.independent.index(parsed.name), MultiIndex.zero(space.n)))
            continue
        if parsed.name not in space.dependent:
            raise ValueError(f"{symbol} names no variable of the jet space")
        index = MultiIndex.from_names(parsed.index, space.independent)
        found.append((space.dependent.index(parsed.name), index))
    return found


def _normalization_row(
    space: JetSpace,
    groupoid: GroupoidSpace,
    target: Target,
    jets: Mapping[Tuple[int, MultiIndex], Rational],
) -> Dict[Column, Expr]:
    alpha, index = target
    if alpha < 0:
        return {(-1 - alpha, MultiIndex.zero(groupoid.size)): Integer(1)}
    return prolongation_coefficients(space, groupoid, alpha, index, lambda b, k: jets[(b, k)])


def _sample_section(
    space: JetSpace, order: int, rng: random.Random, fixed: Mapping[Symbol, Any]
) -> Tuple[Dict[Symbol, Rational], Dict[Tuple[int, MultiIndex], Rational]]:
    bound = int(setting("check_bound"))
    point = {}
    for name in space.variables:
        s = base_symbol(name)
        point[s] = Rational(fixed[s]) if s in fixed else random_nonzero_rational(rng, bound)
    jets = {}
    for k in range(1, order + 1):
        for beta, index in space.jets(k):
            s = space.jet(beta, index)
            value = fixed[s] if s in fixed else random_nonzero_rational(rng, bound)
            jets[(beta, index)] = Rational(value)
    return point, jets


def _witness(
    point: Mapping[Symbol, Rational],
    jets: Mapping[Tuple[int, MultiIndex], Rational],
    space: JetSpace,
) -> Dict[str, str]:
    described = {s.name: str(v) for s, v in point.items()}
    described.update({space.jet(b, k).name: str(v) for (b, k), v in jets.items()})
    return described


def _unanimous(block: str, results: List[Tuple[int, int, Dict[str, str]]]) -> int:
    """The common rank of all samples, else RankDeficient with both witnesses."""
    ranks = sorted({rank for rank, _, _ in results})
    if len(ranks) > 1:
        low = next(r for r in results if r[0] == ranks[0])
        high = next(r for r in results if r[0] == ranks[-1])
        raise RankDeficient(block, low[0], high[0], [low[2], high[2]])
    return ranks[0]


@log_step("freeness implies quasi-horizontality")
def freeness_implies_qh(
    system: DeterminingSystem,
    normalization_targets: Sequence[Any],
    q: int,
    section: Optional[Mapping[Symbol, Any]] = None,
    seed: Optional[int] = None,
    samples: Optional[int] = None,
) -> bool:
    """
    Certify that freeness at order ``q`` makes the non-pure-y jets principal.

    In flat coordinates of a section, the determining relations ``F`` and the
    normalization equations ``G`` are linear in the group jets of order <= q.
    When ``[F; G]`` determines every jet, the pure y-derivatives ``Y`` of the
    coefficients together with ``F`` determine every jet as well, which is
    the statement that ``F`` can be solved for the remaining block ``W``.

    ``G`` only enters the full-rank precondition on ``[F; G]``; the returned
    verdict is the rank of ``[F; Y]`` alone.

    Args:
        system (DeterminingSystem): The determining equations.
        normalization_targets (Sequence[Any]): Lifted invariants set to
            constants (``L.x``, ``L.u[x,x]``, ...).
        q (int): Order of freeness.
        section (Optional[Mapping[Symbol, Any]]): Fixed section data (base
            coordinates and jets); the rest is sampled.
        seed (Optional[int]): Sampler seed.
        samples (Optional[int]): Number of sections, defaults to
            ``rank_samples``.

    Returns:
        bool: True when ``[F; Y]`` has full rank. ``[F; G]`` having full
        rank is a precondition, not part of the verdict.

    Raises:
        RankDeficient: If ``[F; G]`` is not of full rank (block ``combined``)
            or the samples disagree.
    """
    groupoid = system.groupoid
    space = system.jet_space(q + 1)
    targets = _targets(space, normalization_targets)
    rng = random.Random(int(setting("seed", seed)))
    columns = groupoid.ranked(groupoid.columns_up_to(q))
    combined, flat = [], []
    for _ in range(int(setting("rank_samples", samples))):
        point, jets = _sample_section(space, q + 1, rng, section or {})
        witness = _witness(point, jets, space)
        table = relation_table(system, q, point)
        f_rows = [row for _, row in table.rows_up_to(q)]
        g_rows = [_normalization_row(space, groupoid, t, jets) for t in targets]
        combined.append((_rank(f_rows + g_rows, columns), len(columns), witness))
        y_rows = [
            flat_derivative_coefficients(space, groupoid, a, index, lambda b, k: jets[(b, k)])
            for a in range(groupoid.size)
            for index in MultiIndex.up_to(space.n, q)
        ]
        flat.append((_rank(f_rows + y_rows, columns), len(columns), witness))
    rank = _unanimous("combined", combined)
    if rank != len(columns):
        raise RankDeficient("combined", rank, len(columns), [combined[0][2]])
    result = _unanimous("flat", flat) == len(columns)
    info(logger, f"Freeness at order {q} implies quasi-horizontality: {result}")
    return result


@log_step("persistence of freeness")
def persistence_check(
    system: DeterminingSystem,
    top_order_normals: Sequence[Any],
    q: int,
    seed: Optional[int] = None,
    samples: Optional[int] = None,
) -> bool:
    """
    Certify that freeness at order ``q`` persists to order ``q + 1``.

    The order-q symbol rows of the determining relations together with the
    order-q part of the top-order normalizations must have full rank in the
    order-q jets; the check then prolongs both collections one order (the
    normalizations by every independent direction) and returns whether the
    result has full rank in the order-(q+1) jets.

    A normalization is prolonged to the lifted invariant one order up, whose
    row is the total derivative ``D_j`` of the lower one. In flat coordinates
    of the section the section's jets vanish and ``D_j`` is the flat
    ``d/dy_j``; the rank is coordinate independent, so sampling in the
    original coordinates gives the same verdict. For ``q >= 1`` the
    order-(q+1) columns already agree with the chain rule
    ``Z^b_{C+j} + sum_alpha u^alpha_j Z^b_{C+alpha}`` applied to the order-q
    columns at any section.

    Raises:
        RankDeficient: If the order-q collection is not of full rank (the
            precondition) or the samples disagree.
    """
    groupoid = system.groupoid
    space = system.jet_space(q + 2)
    targets = _targets(space, top_order_normals)
    rng = random.Random(int(setting("seed", seed)))
    top, upper = groupoid.ranked(groupoid.columns(q)), groupoid.ranked(groupoid.columns(q + 1))
    before, after = [], []
    for _ in range(int(setting("rank_samples", samples))):
        point, jets = _sample_section(space, q + 2, rng, {})
        witness = _witness(point, jets, space)
        table = relation_table(system, q + 1, point)
        symbol_q = [row for p, row in table.rows.items() if p[1].order == q]
        symbol_next = [row for p, row in table.rows.items() if p[1].order == q + 1]
        normals_q = [_normalization_row(space, groupoid, t, jets) for t in targets]
        normals_next = [
            _normalization_row(space, groupoid, (alpha, index.bump(j)), jets)
            for alpha, index in targets
            if alpha >= 0
            for j in range(space.n)
        ]
        before.append((_rank(symbol_q + normals_q, top), len(top), witness))
        after.append((_rank(symbol_next + normals_next, upper), len(upper), witness))
    rank = _unanimous(f"order {q}", before)
    if rank != len(top):
        raise RankDeficient(f"order {q}", rank, len(top), [before[0][2]])
    result = _unanimous(f"order {q + 1}", after) == len(upper)
    info(logger, f"Freeness persists from order {q} to {q + 1}: {result}")
    return result
