"""Coefficients of the infinitesimal prolongation at the identity jet.

For a vector field with coefficients ξ^a(z), the prolonged coefficient of
u^α_J is ``D_J(φ^α - sum_i u^α_i ξ^i) + sum_i u^α_{J,i} ξ^i``. Written in
the jets ξ^a_A of the coefficients this is linear, and the coefficient of
ξ^a_A is read off the section's Taylor series:

    J!/A_x! [dx^(J - A_x)] ( du^A_u / A_u! * (δ_{a, n+α} - [a < n] ∂_a u^α) )

with ``du`` the section increment, plus ``u^α_{J,a}`` when A is empty and
``a < n``.
"""

from typing import Callable, Dict, List, Tuple

from sympy import Expr, Symbol, sympify
from sympy.polys.rings import PolyElement

from jetframe.jet_space.groupoid import Column, GroupoidSpace
from jetframe.jet_space.multiindex import MultiIndex
from jetframe.jet_space.series import TruncatedSeries
from jetframe.jet_space.space import JetSpace

JetValue = Callable[[int, MultiIndex], Expr]


def _extra_symbols(values: List[Expr]) -> Tuple[Symbol, ...]:
    found = set()
    for value in values:
        found |= sympify(value).free_symbols
    return tuple(sorted(found, key=lambda s: s.name))


class _SectionSeries:
    """Taylor increments of a section around its base point."""

    def __init__(self, space: JetSpace, order: int, value_of: JetValue) -> None:
        n, m = space.n, space.m
        self.m = m
        self.needed: Dict[Tuple[int, MultiIndex], Expr] = {}
        for beta in range(m):
            for k in MultiIndex.up_to(n, order + 1):
                if k.order:
                    self.needed[(beta, k)] = sympify(value_of(beta, k))
        self.ctx = TruncatedSeries(n, order, _extra_symbols(list(self.needed.values())))
        self.increments: List[PolyElement] = [
            self._series(lambda k, beta=beta: self.needed[(beta, k)], order, skip_zero=True)
            for beta in range(m)
        ]
        self._powers: Dict[MultiIndex, PolyElement] = {MultiIndex.zero(m): self.ctx.ring.one}

    def _series(
        self, coefficient_of: Callable[[MultiIndex], Expr], order: int, skip_zero: bool = False
    ) -> PolyElement:
        ctx = self.ctx
        series = ctx.zero()
        for k in MultiIndex.up_to(ctx.n, order):
            if skip_zero and not k.order:
                continue
            series += ctx.constant(coefficient_of(k) / k.factorial()) * ctx.monomial(k)
        return series

    def gradient(self, alpha: int, i: int) -> PolyElement:
        """Series of d u^alpha / d x^i."""
        return self._series(lambda k: self.needed[(alpha, k.bump(i))], self.ctx.order)

    def power(self, vertical: MultiIndex) -> PolyElement:
        """du^A / A!"""
        if vertical not in self._powers:
            beta = vertical.last()
            lower = self.power(vertical - MultiIndex.unit(self.m, beta))
            scaled = self.ctx.mul(lower, self.increments[beta])
            self._powers[vertical] = scaled * self.ctx.constant(sympify(1) / vertical.counts[beta])
        return self._powers[vertical]


def prolongation_coefficients(
    space: JetSpace,
    groupoid: GroupoidSpace,
    alpha: int,
    index: MultiIndex,
    value_of: JetValue,
) -> Dict[Column, Expr]:
    """
    Linear coefficients of the prolonged vector field at jet (alpha, J).

    Args:
        space (JetSpace): The jet space.
        groupoid (GroupoidSpace): Target components and their dependencies.
        alpha (int): Dependent variable position.
        index (MultiIndex): J, over the independent variables.
        value_of (JetValue): Jet values of the section, ``(beta, K) -> Expr``,
            numbers or symbols; needed up to order |J| + 1.

    Returns:
        Dict[Column, Expr]: Nonzero coefficients keyed by ``(a, A)``.
    """
    n = space.n
    section = _SectionSeries(space, index.order, value_of)
    ctx = section.ctx
    coefficients: Dict[Column, Expr] = {}
    scale = index.factorial()
    for a, column in groupoid.columns_up_to(index.order):
        horizontal = column.head(n)
        vertical = column.tail(n)
        if not horizontal.divides(index):
            continue
        rest = index - horizontal
        factor = sympify(scale) / horizontal.factorial()
        if a >= n:
            if a - n != alpha:
                continue
            value = factor * ctx.coefficient(section.power(vertical), rest)
        else:
            product = ctx.mul(section.gradient(alpha, a), section.power(vertical))
            value = -factor * ctx.coefficient(product, rest)
            if column.order == 0:
                value += section.needed[(alpha, index.bump(a))]
        value = sympify(value).expand()
        if value != 0:
            coefficients[(a, column)] = value
    return coefficients


def flat_derivative_coefficients(
    space: JetSpace,
    groupoid: GroupoidSpace,
    a: int,
    index: MultiIndex,
    value_of: JetValue,
) -> Dict[Column, Expr]:
    """
    Coefficients of the pure y-derivative d^K/dy^K of xi^a along the section.

    ``K!/B_x! [dx^(K - B_x)] du^(B_u) / B_u!`` on the column ``(a, B)``.
    """
    n = space.n
    section = _SectionSeries(space, index.order, value_of)
    ctx = section.ctx
    coefficients: Dict[Column, Expr] = {}
    scale = index.factorial()
    for b, column in groupoid.columns_up_to(index.order):
        if b != a:
            continue
        horizontal = column.head(n)
        if not horizontal.divides(index):
            continue
        factor = sympify(scale) / horizontal.factorial()
        value = factor * ctx.coefficient(section.power(column.tail(n)), index - horizontal)
        value = sympify(value).expand()
        if value != 0:
            coefficients[(a, column)] = value
    return coefficients
