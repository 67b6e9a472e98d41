"""The polynomial-shift group (x + a, u + p(x)), deg p <= d."""

import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from sympy import Expr, Integer, Mul, Rational, Symbol

from jetframe._core.errors import SingularJacobian
from jetframe._core.settings.loader import setting
from jetframe._core.utils.logger import get_logger, info, log_step
from jetframe._core.utils.sampling import random_nonzero_rational
from jetframe.det_systems.system import DeterminingSystem, Equation
from jetframe.expr_kernel.symbols import base_symbol
from jetframe.jet_space.groupoid import GroupoidSpace
from jetframe.jet_space.multiindex import MultiIndex
from jetframe.jet_space.prolong import prolong_numeric
from jetframe.jet_space.space import JetSpace
from jetframe.jet_space.transformation import PointTransformation
from jetframe.moving_frame.problem import Problem

logger = get_logger(__name__)

_INDEPENDENT = ("x", "y", "z", "t")
_DEPENDENT = ("u", "v", "w", "s")


def _names(n: int, m: int) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
    if not (1 <= n <= len(_INDEPENDENT) and 1 <= m <= len(_DEPENDENT)):
        raise ValueError(f"Polynomial shifts are built for 1 <= n, m <= 4, got n={n}, m={m}")
    return _INDEPENDENT[:n], _DEPENDENT[:m]


def polyshift_action(n: int, m: int, d: int, jet_order: int) -> PointTransformation:
    """Explicit family with translation parameters ``a.*`` and coefficients ``c.*``."""
    independent, dependent = _names(n, m)
    space = JetSpace(independent, dependent, jet_order)
    parameters: List[Symbol] = []
    targets: Dict[str, Expr] = {}
    for name in independent:
        a = Symbol(f"a_{name}")
        parameters.append(a)
        targets[name] = base_symbol(name) + a
    for name in dependent:
        shift: Expr = Integer(0)
        for index in MultiIndex.up_to(n, d):
            c = Symbol(f"c_{name}_{'_'.join(index.names(independent)) or '1'}")
            parameters.append(c)
            monomial = Mul(*[base_symbol(v) for v in index.names(independent)])
            shift = shift + c * monomial
        targets[name] = base_symbol(name) + shift
    return PointTransformation.explicit(space, targets, parameters)


def polyshift_system(n: int, m: int, d: int) -> DeterminingSystem:
    """``X^i_j = delta``, ``U^a_u = 1``, ``U^a_J = 0`` for |J| = d + 1."""
    independent, dependent = _names(n, m)
    components = tuple(v.upper() for v in independent + dependent)
    depends = {c: list(independent) for c in components[:n]}
    for c, name in zip(components[n:], dependent):
        depends[c] = list(independent) + [name]
    groupoid = GroupoidSpace.over(independent, dependent, components, d + 1, depends)
    size = groupoid.size
    equations: List[Equation] = []
    for i in range(n):
        for j in range(n):
            value = Integer(1) if i == j else Integer(0)
            equations.append(Equation(groupoid.group_jet(i, MultiIndex.unit(size, j)), value))
    for alpha in range(m):
        a = n + alpha
        equations.append(Equation(groupoid.group_jet(a, MultiIndex.unit(size, a)), Integer(1)))
        for index in MultiIndex.of_order(n, d + 1):
            column = index.join(MultiIndex.zero(m))
            equations.append(Equation(groupoid.group_jet(a, column), Integer(0)))
    return DeterminingSystem(groupoid, tuple(equations), d + 1)


def polyshift_problem(n: int, m: int, d: int) -> Problem:
    """The polynomial-shift group on jets of order d + 1."""
    system = polyshift_system(n, m, d)
    return Problem.symbolic_form(system, d + 1, polyshift_action(n, m, d, d + 1))


@dataclass(frozen=True)
class InvarianceResult:
    """Whether every order-(d+1) jet was unchanged; the first moved order-d jet, if any."""

    invariant: bool
    samples: int
    witness: Optional[Dict[str, str]] = None

    @property
    def ok(self) -> bool:
        return self.invariant


@log_step("polynomial shift invariance")
def verify_invariance_polyshift(
    n: int, m: int, d: int, seed: Optional[int] = None, samples: Optional[int] = None
) -> InvarianceResult:
    """
    Check numerically that the jets of order d + 1 are invariant.

    Random group elements act on random jets through the numeric
    prolongation; order-d jets are compared as well and the first one that
    moves is reported as a witness that the invariants do not start lower.
    """
    action = polyshift_action(n, m, d, d + 1)
    space = action.space
    rng = random.Random(int(setting("seed", seed)))
    count = int(setting("rank_samples", samples))
    bound = int(setting("check_bound"))
    top = space.jets(d + 1)
    below = space.jets(d)
    invariant = True
    witness: Optional[Dict[str, str]] = None
    collected = 0
    for _ in range(int(setting("sample_draws"))):
        if collected == count:
            break
        point: Dict[Symbol, Rational] = {
            base_symbol(v): random_nonzero_rational(rng, bound) for v in space.variables
        }
        for k in range(1, d + 2):
            for alpha, index in space.jets(k):
                point[space.jet(alpha, index)] = random_nonzero_rational(rng, bound)
        for p in action.parameters:
            point[p] = random_nonzero_rational(rng, bound)
        try:
            image = prolong_numeric(action, d + 1, point, top + below)
        except SingularJacobian:
            continue
        collected += 1
        for jet in top:
            if image.value(*jet) != point[space.jet(*jet)]:
                invariant = False
        if witness is None:
            for jet in below:
                before, after = point[space.jet(*jet)], image.value(*jet)
                if before != after:
                    witness = {
                        "jet": space.jet(*jet).name,
                        "before": str(before),
                        "after": str(after),
                    }
                    break
    info(logger, f"Order {d + 1} jets invariant: {invariant}")
    return InvarianceResult(invariant, collected, witness)
