"""
Numeric checks of normalization formulas.

A :class:`ClosedFormCheck` evaluates a straight-line program of group-jet
assignments at random rational jets, runs the prolonged action numerically,
and compares lifted invariants with expected expressions. Mismatches with a
constant ratio are reported as systematic factors instead of failures.
"""

import random
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Set, Tuple

from sympy import Expr, Rational, Symbol, sympify

from jetframe._core.errors import (
    DivisionByZero,
    SamplingExhausted,
    SingularJacobian,
)
from jetframe._core.settings.loader import setting
from jetframe._core.utils.logger import get_logger, info, log_step
from jetframe._core.utils.sampling import random_nonzero_rational
from jetframe.det_systems.system import prolong_system, reduce_by
from jetframe.expr_kernel.assumptions import AssumptionSet
from jetframe.expr_kernel.kernel import eval_rational, serialize
from jetframe.expr_kernel.symbols import base_symbol
from jetframe.jet_space.prolong import prolong_numeric
from jetframe.jet_space.space import Jet, JetSpace
from jetframe.jet_space.transformation import PointTransformation
from jetframe.moving_frame.problem import Problem
from jetframe.moving_frame.state import FrameState

logger = get_logger(__name__)

AGREE = "agree"
SYSTEMATIC = "systematic"
DISAGREE = "disagree"


@dataclass(frozen=True)
class InvariantVerdict:
    invariant: str
    status: str
    samples: int
    ratio: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "invariant": self.invariant,
            "status": self.status,
            "samples": self.samples,
            "ratio": self.ratio,
        }


@dataclass(frozen=True)
class ClosedFormReport:
    verdicts: Tuple[InvariantVerdict, ...]

    @property
    def all_agree(self) -> bool:
        return all(v.status == AGREE for v in self.verdicts)

    def verdict(self, invariant: str) -> InvariantVerdict:
        return next(v for v in self.verdicts if v.invariant == invariant)

    def to_dict(self) -> Dict[str, Any]:
        return {"verdicts": [v.to_dict() for v in self.verdicts], "all_agree": self.all_agree}


def _sample_jets(
    space: JetSpace, order: int, rng: random.Random, bound: int
) -> Dict[Symbol, Rational]:
    point = {base_symbol(v): random_nonzero_rational(rng, bound) for v in space.variables}
    for k in range(1, order + 1):
        for alpha, index in space.jets(k):
            point[space.jet(alpha, index)] = random_nonzero_rational(rng, bound)
    return point


def _components(t: PointTransformation) -> Set[int]:
    groupoid = t.groupoid
    found: Set[int] = set()
    if groupoid is None:
        return found
    for target in t.targets:
        for s in target.free_symbols:
            column = groupoid.group_jet_info(s)
            if column is not None:
                found.add(column[0])
    return found


def _verdict(name: str, pairs: List[Tuple[Rational, Rational]]) -> InvariantVerdict:
    if all(expected == actual for expected, actual in pairs):
        return InvariantVerdict(name, AGREE, len(pairs))
    ratios = {expected / actual for expected, actual in pairs if actual != 0}
    exact = all(actual != 0 or expected == 0 for expected, actual in pairs)
    if exact and len(ratios) == 1:
        return InvariantVerdict(name, SYSTEMATIC, len(pairs), str(next(iter(ratios))))
    return InvariantVerdict(name, DISAGREE, len(pairs))


@dataclass(frozen=True)
class ClosedFormCheck:
    """
    Closed forms of group jets against numerically prolonged invariants.

    Attributes:
        problem (Problem): Supplies the jet space, the system and the
            transformation (symbolic or lifted form).
        assignments (Tuple[Tuple[Symbol, Expr], ...]): Group jet := expression,
            evaluated in order; expressions may use source jets, check
            parameters and earlier assignments.
        expectations (Tuple[Tuple[Symbol, Expr], ...]): Lifted invariant and
            the value the assignments should produce.
        parameters (Tuple[Symbol, ...]): Free check parameters, sampled
            nonzero.
        assumptions (AssumptionSet): Conditions every sample must meet.
        apply_system (bool): Whether principal group jets are computed from
            the prolonged determining system after the assignments.
    """

    problem: Problem
    assignments: Tuple[Tuple[Symbol, Expr], ...]
    expectations: Tuple[Tuple[Symbol, Expr], ...]
    parameters: Tuple[Symbol, ...] = ()
    assumptions: AssumptionSet = field(default_factory=AssumptionSet)
    apply_system: bool = False

    def _wanted(self) -> List[Jet]:
        wanted: List[Jet] = []
        for invariant, _ in self.expectations:
            parsed = self.problem.space.lifted_info(invariant)
            if parsed is None or parsed[0] not in self.problem.space.dependent:
                raise ValueError(f"{invariant} is not a lifted jet invariant")
            wanted.append((self.problem.space.dependent.index(parsed[0]), parsed[1]))
        return wanted

    def _order(self) -> int:
        return max((index.order for _, index in self._wanted()), default=0)

    def _draw(self, rng: random.Random, bound: int) -> Dict[Symbol, Rational]:
        problem = self.problem
        q = self._order()
        point: Dict[Symbol, Any] = _sample_jets(problem.space, q, rng, bound)
        for p in self.parameters:
            point[p] = random_nonzero_rational(rng, bound)
        for jet, expr in self.assignments:
            point[jet] = eval_rational(expr, point)
        t = problem.transformation
        groupoid = t.groupoid
        if groupoid is None:
            return point
        top = min(q + 1, groupoid.max_order)
        solved: Dict[Symbol, Expr] = {}
        if self.apply_system:
            system = problem.system
            solved = prolong_system(system, min(top, system.t_max)).solved()
        for a in sorted(_components(t)):
            for column in groupoid.columns_up_to(top):
                if column[0] != a:
                    continue
                s = groupoid.group_jet(*column)
                if s not in point and s not in solved:
                    point[s] = random_nonzero_rational(rng, bound)
        for s, rhs in solved.items():
            if s not in point:
                point[s] = eval_rational(reduce_by(rhs, solved), point)
        return point

    @log_step("closed form check")
    def run(
        self,
        samples: Optional[int] = None,
        seed: Optional[int] = None,
        bound: Optional[int] = None,
    ) -> ClosedFormReport:
        """
        Raises:
            SamplingExhausted: If too few admissible samples are found.
        """
        count = int(setting("check_samples", samples))
        rng = random.Random(int(setting("seed", seed)))
        limit = int(setting("check_bound", bound))
        draws = int(setting("sample_draws"))
        wanted = self._wanted()
        q = self._order()
        pairs: Dict[Symbol, List[Tuple[Rational, Rational]]] = {
            s: [] for s, _ in self.expectations
        }
        collected = 0
        for _ in range(draws):
            if collected == count:
                break
            try:
                point = self._draw(rng, limit)
                if not self.assumptions.holds_at(point):
                    continue
                result = prolong_numeric(self.problem.transformation, q, point, wanted)
                expected = [eval_rational(e, point) for _, e in self.expectations]
            except (DivisionByZero, SingularJacobian):
                continue
            for (invariant, _), jet, value in zip(self.expectations, wanted, expected):
                pairs[invariant].append((value, result.value(*jet)))
            collected += 1
        if collected < count:
            raise SamplingExhausted(draws)
        verdicts = tuple(_verdict(s.name, pairs[s]) for s, _ in self.expectations)
        for v in verdicts:
            info(logger, f"{v.invariant}: {v.status}" + (f" (ratio {v.ratio})" if v.ratio else ""))
        return ClosedFormReport(verdicts)


def frame_check(state: FrameState) -> ClosedFormCheck:
    """A check of every closed form the frame derived, against its normalized value."""
    closed = state.closed_forms()
    assignments = tuple((s, reduce_by(e, closed)) for s, e in closed.items())
    expectations = tuple(
        (n.invariant, n.value)
        for n in state.normalizations
        if state.space.lifted_info(n.invariant) is not None
        and state.space.lifted_info(n.invariant)[0] in state.space.dependent  # type: ignore[index]
        and state.space.lifted_info(n.invariant)[1].order > 0  # type: ignore[index]
    )
    source = AssumptionSet(
        frozenset(e for e in state.assumptions.nonzero if _in_source(state, e)),
        frozenset(e for e in state.assumptions.positive if _in_source(state, e)),
    )
    return ClosedFormCheck(state.problem, assignments, expectations, (), source, True)


def _in_source(state: FrameState, e: Expr) -> bool:
    return all(state.space.lifted_info(s) is None for s in e.free_symbols)


@log_step("invariance check")
def check_invariance(
    transformation: PointTransformation,
    exprs: Sequence[Any],
    order: int,
    seed: Optional[int] = None,
    samples: Optional[int] = None,
) -> Dict[str, bool]:
    """
    Compare expressions in source jets before and after random group elements.

    Args:
        transformation (PointTransformation): An explicit family with
            parameters.
        exprs (Sequence[Any]): Expressions in base coordinates and jets of
            order at most ``order``.
        order (int): Jet order of the samples.

    Returns:
        Dict[str, bool]: Serialized expression -> unchanged on every sample.
    """
    if transformation.symbolic:
        raise ValueError("Invariance checks need an explicit transformation")
    rng = random.Random(int(setting("seed", seed)))
    count = int(setting("rank_samples", samples))
    bound = int(setting("check_bound"))
    targets = [sympify(e) for e in exprs]
    verdict = {serialize(e): True for e in targets}
    collected = 0
    for _ in range(int(setting("sample_draws"))):
        if collected == count:
            break
        point: Dict[Symbol, Any] = _sample_jets(transformation.space, order, rng, bound)
        for p in transformation.parameters:
            point[p] = random_nonzero_rational(rng, bound)
        try:
            image = prolong_numeric(transformation, order, point).as_point()
            before = [eval_rational(e, point) for e in targets]
            after = [eval_rational(e, image) for e in targets]
        except (DivisionByZero, SingularJacobian):
            continue
        for e, b, a in zip(targets, before, after):
            if b != a:
                verdict[serialize(e)] = False
        collected += 1
    if collected < count:
        raise SamplingExhausted(int(setting("sample_draws")))
    return verdict
