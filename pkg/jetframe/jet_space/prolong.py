"""Prolongation of point transformations to jets.

Two paths compute the lifted jets Û^α_J:

- :func:`prolong` builds them symbolically with the inverse total Jacobian,
  ``D_{X^i} = sum_k (A^-1)_{ik} D_k`` with ``A_{ki} = D_k X^i``;
- :func:`prolong_numeric` evaluates the same chain at a rational point with
  truncated series, never building expressions;

and :func:`series_oracle` recomputes the numbers by compositional inversion
of the base series.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Set, Tuple

from sympy import Expr, Matrix, Rational, Symbol
from sympy.polys.rings import PolyElement

from jetframe._core.errors import OrderOverflow, SingularJacobian, UnboundSymbol
from jetframe.expr_kernel.assumptions import AssumptionSet
from jetframe.expr_kernel.kernel import normalize
from jetframe.expr_kernel.symbols import base_symbol
from jetframe.jet_space.multiindex import MultiIndex
from jetframe.jet_space.series import TruncatedSeries
from jetframe.jet_space.space import Jet, JetSpace, total_derivative
from jetframe.jet_space.transformation import PointTransformation


@dataclass(frozen=True)
class ProlongedAction:
    """Symbolic table of lifted jets Û^α_J, |J| <= order."""

    transformation: PointTransformation
    order: int
    entries: Mapping[Jet, Expr]
    assumptions: AssumptionSet = field(default_factory=AssumptionSet)

    def value(self, alpha: int, index: MultiIndex) -> Expr:
        if index.order > self.order:
            raise OrderOverflow(index.order, self.order)
        return self.entries[(alpha, index)]

    def lifted_bindings(self) -> Dict[Symbol, Expr]:
        """Lifted-invariant symbols (including base targets) to their formulas."""
        space = self.transformation.space
        bindings: Dict[Symbol, Expr] = {}
        for name, target in zip(space.variables, self.transformation.targets):
            bindings[space.lifted_base(name)] = target
        for (alpha, index), value in self.entries.items():
            if index.order:
                bindings[space.lifted(alpha, index)] = value
        return bindings


def _parents(space: JetSpace, wanted: Iterable[Jet]) -> List[Jet]:
    """``wanted`` closed under J -> J - e_last, sorted by order."""
    needed: Set[Jet] = set()
    for alpha, index in wanted:
        while True:
            if (alpha, index) in needed:
                break
            needed.add((alpha, index))
            if index.order == 0:
                break
            index = index - MultiIndex.unit(space.n, index.last())
    return sorted(needed, key=lambda jet: (jet[1].order, jet[0], jet[1].counts))


def prolong(
    t: PointTransformation,
    q: int,
    assumptions: Optional[AssumptionSet] = None,
    max_nodes: Optional[int] = None,
) -> ProlongedAction:
    """
    Prolong a point transformation symbolically to order ``q``.

    Args:
        t (PointTransformation): Explicit or symbolic transformation.
        q (int): Prolongation order.
        assumptions (Optional[AssumptionSet]): Assumptions to extend with the
            Jacobian determinant.
        max_nodes (Optional[int]): Node budget passed to normalization.

    Returns:
        ProlongedAction: The table of Û^α_J.

    Raises:
        OrderOverflow: If ``q`` exceeds the jet space order.
        SingularJacobian: If the total Jacobian determinant is zero.
    """
    space = t.space
    if q > space.max_order:
        raise OrderOverflow(q, space.max_order)
    n = space.n
    jacobian = Matrix(
        n, n, lambda k, i: total_derivative(space, t.horizontal[i], k, t.groupoid)
    )
    determinant = normalize(jacobian.det(), max_nodes)
    if determinant == 0:
        raise SingularJacobian(determinant)
    adjugate = jacobian.adjugate()
    assumptions = (assumptions or AssumptionSet()).assume_nonzero(determinant)

    entries: Dict[Jet, Expr] = {}
    for alpha in range(space.m):
        entries[(alpha, MultiIndex.zero(n))] = t.vertical[alpha]
    for k in range(1, q + 1):
        for alpha, index in space.jets(k):
            i = index.last()
            parent = entries[(alpha, index - MultiIndex.unit(n, i))]
            total = sum(
                (adjugate[i, j] * total_derivative(space, parent, j, t.groupoid)
                 for j in range(n)),
                Rational(0),
            )
            entries[(alpha, index)] = normalize(total / determinant, max_nodes)
    return ProlongedAction(t, q, entries, assumptions)


@dataclass(frozen=True)
class NumericProlongation:
    """Values of the prolonged action at one rational point."""

    space: JetSpace
    base: Tuple[Rational, ...]
    jets: Mapping[Jet, Rational]

    def value(self, alpha: int, index: MultiIndex) -> Rational:
        return self.jets[(alpha, index)]

    def as_point(self) -> Dict[Symbol, Rational]:
        """The transformed jet as a point in source coordinates."""
        point = {base_symbol(v): b for v, b in zip(self.space.variables, self.base)}
        for (alpha, index), value in self.jets.items():
            point[self.space.jet(alpha, index)] = value
        return point

    def lifted_point(self) -> Dict[Symbol, Rational]:
        point = {self.space.lifted_base(v): b for v, b in zip(self.space.variables, self.base)}
        for (alpha, index), value in self.jets.items():
            if index.order:
                point[self.space.lifted(alpha, index)] = value
        return point


def _section_series(
    ctx: TruncatedSeries, space: JetSpace, point: Mapping[Symbol, Rational]
) -> Dict[Symbol, PolyElement]:
    """Base coordinates along the Taylor polynomial of the section at the point."""
    bindings: Dict[Symbol, PolyElement] = {}
    for i, name in enumerate(space.independent):
        symbol = base_symbol(name)
        if symbol not in point:
            raise UnboundSymbol([name])
        bindings[symbol] = ctx.constant(point[symbol]) + ctx.increments[i]
    for alpha, name in enumerate(space.dependent):
        symbol = base_symbol(name)
        if symbol not in point:
            raise UnboundSymbol([name])
        series = ctx.constant(point[symbol])
        for index in MultiIndex.up_to(space.n, ctx.order):
            if index.order == 0:
                continue
            jet = space.jet(alpha, index)
            if jet not in point:
                raise UnboundSymbol([jet.name])
            value = Rational(point[jet]) / index.factorial()
            if value:
                series += ctx.constant(value) * ctx.monomial(index)
        bindings[symbol] = series
    return bindings


def _group_jet_series(
    ctx: TruncatedSeries,
    t: PointTransformation,
    base: Mapping[Symbol, PolyElement],
    point: Mapping[Symbol, Rational],
) -> Dict[Symbol, PolyElement]:
    """Each group jet Z^a_A in the targets as its Taylor series along the section."""
    groupoid = t.groupoid
    if groupoid is None:
        return {}
    increments = [
        base[base_symbol(v)] - ctx.constant(point[base_symbol(v)])
        for v in groupoid.variables
    ]
    powers: Dict[MultiIndex, PolyElement] = {MultiIndex.zero(groupoid.size): ctx.ring.one}

    def power(index: MultiIndex) -> PolyElement:
        if index not in powers:
            b = index.last()
            powers[index] = ctx.mul(power(index - MultiIndex.unit(groupoid.size, b)), increments[b])
        return powers[index]

    symbols = set().union(*(target.free_symbols for target in t.targets))
    bindings: Dict[Symbol, PolyElement] = {}
    for s in symbols:
        column = groupoid.group_jet_info(s)
        if column is None:
            continue
        a, index = column
        series = ctx.zero()
        for extra in MultiIndex.up_to(groupoid.size, ctx.order):
            if not groupoid.allows(a, extra):
                continue
            jet = groupoid.group_jet(a, index + extra)
            if jet not in point:
                raise UnboundSymbol([jet.name])
            value = Rational(point[jet]) / extra.factorial()
            if value:
                series += ctx.constant(value) * power(extra)
        bindings[s] = ctx.truncate(series)
    return bindings


def _target_series(
    t: PointTransformation, q: int, point: Mapping[Symbol, Rational]
) -> Tuple[TruncatedSeries, List[PolyElement]]:
    ctx = TruncatedSeries(t.space.n, q)
    bindings = _section_series(ctx, t.space, point)
    bindings.update(_group_jet_series(ctx, t, bindings, point))
    values = {s: v for s, v in point.items() if s not in bindings}
    return ctx, [ctx.evaluate(target, bindings, values) for target in t.targets]


def _series_matmul(
    ctx: TruncatedSeries, a: List[List[PolyElement]], b: List[List[PolyElement]]
) -> List[List[PolyElement]]:
    size = len(a)
    return [
        [sum((ctx.mul(a[i][k], b[k][j]) for k in range(size)), ctx.zero()) for j in range(size)]
        for i in range(size)
    ]


def prolong_numeric(
    t: PointTransformation,
    q: int,
    point: Mapping[Symbol, Rational],
    wanted: Optional[Iterable[Jet]] = None,
) -> NumericProlongation:
    """
    Evaluate the prolonged action at a rational point.

    The targets are composed with the section's Taylor polynomial as
    truncated series; the inverse total Jacobian is expanded as a Neumann
    series around its value at the point, and each Û^α_J is one implicit
    total derivative of its parent.

    Args:
        t (PointTransformation): Explicit or symbolic transformation.
        q (int): Prolongation order.
        point (Mapping[Symbol, Rational]): Values of base coordinates, jets
            of order <= q, parameters, and (symbolic form) group jets.
        wanted (Optional[Iterable[Jet]]): Jets to compute; defaults to all of
            order <= q.

    Returns:
        NumericProlongation: Target base values and transformed jets.

    Raises:
        UnboundSymbol: If the point misses a needed value.
        SingularJacobian: If the total Jacobian is singular at the point.
    """
    space = t.space
    n = space.n
    ctx, targets = _target_series(t, q, point)
    base = tuple(Rational(ctx.const_value(s)) for s in targets)
    jacobian = [[ctx.deriv(targets[i], k) for i in range(n)] for k in range(n)]
    head = Matrix(n, n, lambda k, i: ctx.const_value(jacobian[k][i]))
    if head.det() == 0:
        raise SingularJacobian(0)
    head_inverse = head.inv()
    inverse_head = [[ctx.constant(head_inverse[i, j]) for j in range(n)] for i in range(n)]
    # -A0^-1 N, N the non-constant part of the Jacobian
    step = _series_matmul(
        ctx,
        [[-inverse_head[i][j] for j in range(n)] for i in range(n)],
        [[jacobian[k][i] - ctx.head(jacobian[k][i]) for i in range(n)] for k in range(n)],
    )
    inverse = inverse_head
    term = inverse_head
    for _ in range(max(q - 1, 0)):
        term = _series_matmul(ctx, step, term)
        inverse = [[inverse[i][j] + term[i][j] for j in range(n)] for i in range(n)]

    jets = wanted if wanted is not None else [
        jet for k in range(q + 1) for jet in space.jets(k)
    ]
    current: Dict[Jet, PolyElement] = {}
    values: Dict[Jet, Rational] = {}
    for alpha, index in _parents(space, jets):
        if index.order > q:
            raise OrderOverflow(index.order, q)
        if index.order == 0:
            series = targets[n + alpha]
        else:
            i = index.last()
            parent = current[(alpha, index - MultiIndex.unit(n, i))]
            limit = q - index.order
            series = ctx.zero()
            for k in range(n):
                series += ctx.mul(inverse[i][k], ctx.deriv(parent, k), limit)
            series = ctx.truncate(series, limit)
        current[(alpha, index)] = series
        values[(alpha, index)] = Rational(ctx.const_value(series))
    return NumericProlongation(space, base, values)


def series_oracle(
    t: PointTransformation, q: int, point: Mapping[Symbol, Rational]
) -> NumericProlongation:
    """
    Independent evaluation of the prolonged action by series inversion.

    The base series X(dx) is inverted compositionally, dx(dX), by fixed-point
    iteration; the transformed jets are the Taylor coefficients of
    U(dx(dX)).
    """
    space = t.space
    n = space.n
    ctx, targets = _target_series(t, q, point)
    base = tuple(Rational(ctx.const_value(s)) for s in targets)
    shifted = [targets[i] - ctx.head(targets[i]) for i in range(n)]
    linear = Matrix(
        n, n, lambda i, k: ctx.coefficient(shifted[i], MultiIndex.unit(n, k))
    )
    if linear.det() == 0:
        raise SingularJacobian(0)
    linear_inverse = linear.inv()
    nonlinear = [
        shifted[i] - sum(
            (ctx.constant(linear[i, k]) * ctx.increments[k] for k in range(n)),
            ctx.zero(),
        )
        for i in range(n)
    ]

    def solve(rhs: List[PolyElement]) -> List[PolyElement]:
        return [
            sum((ctx.constant(linear_inverse[k, i]) * rhs[i] for i in range(n)), ctx.zero())
            for k in range(n)
        ]

    inverse = solve(list(ctx.increments))
    for _ in range(q):
        correction = [ctx.compose(h, inverse) for h in nonlinear]
        inverse = solve([ctx.increments[i] - correction[i] for i in range(n)])

    jets: Dict[Jet, Rational] = {}
    for alpha in range(space.m):
        composed = ctx.compose(targets[n + alpha], inverse)
        for index in MultiIndex.up_to(n, q):
            jets[(alpha, index)] = Rational(ctx.taylor_coefficient(composed, index))
    return NumericProlongation(space, base, jets)
