from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Tuple

from sympy import Symbol

from jetframe._core.errors import MissingRule, OrderOverflow
from jetframe.exterior_forms.form import Form, wedge
from jetframe.exterior_forms.generators import Generator, horizontal, maurer_cartan
from jetframe.expr_kernel.kernel import diff
from jetframe.jet_space.groupoid import GroupoidSpace
from jetframe.jet_space.multiindex import MultiIndex


@dataclass(frozen=True)
class StructureRules:
    """
    Exterior derivatives of generators and coefficient symbols.

    ``derivatives`` maps a generator to its 2-form differential,
    ``substitutions`` maps a generator to the 1-form replacing it on a frame,
    and ``coefficient_rules`` maps a coefficient symbol to its differential.
    """

    derivatives: Mapping[Generator, Form] = field(default_factory=dict)
    substitutions: Mapping[Generator, Form] = field(default_factory=dict)
    coefficient_rules: Mapping[Symbol, Form] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for g, form in self.derivatives.items():
            if form.degree != 2 and not form.is_zero():
                raise ValueError(f"Derivative rule for {g} must have degree 2")
        for g, form in self.substitutions.items():
            if form.degree != 1 and not form.is_zero():
                raise ValueError(f"Substitution for {g} must have degree 1")
        for s, form in self.coefficient_rules.items():
            if form.degree != 1 and not form.is_zero():
                raise ValueError(f"Differential of {s} must have degree 1")


def _binomial(index: MultiIndex, low: MultiIndex) -> int:
    return index.factorial() // (low.factorial() * (index - low).factorial())


def mc_structure(groupoid: GroupoidSpace, a: int, index: MultiIndex) -> Form:
    """
    Structure equation of the Maurer-Cartan form mu^a_A.

    ``d mu^a_A = sum_b w^b ^ mu^a_{A+b}
    + sum_{B+C=A, |C|>=1} A!/(B! C!) sum_b mu^a_{B+b} ^ mu^b_C``.
    Forms of omitted group jets vanish and are skipped.

    ``mu^a_A`` is the form of the derivative ``Z^a_A``, not of a Taylor
    coefficient. Written over ordered index sequences, the quadratic sum runs
    over the ways of splitting the positions of ``A`` in two, each split
    counted once; grouping those splits by the multi-indices ``(B, C)`` they
    produce gives the binomial weight. Without it ``d d mu^a_A`` already
    fails to vanish for first order A.

    Raises:
        OrderOverflow: If mu^a_{A+b} lies beyond the groupoid order.
    """
    if index.order + 1 > groupoid.max_order:
        raise OrderOverflow(index.order + 1, groupoid.max_order)
    items = []
    for b in range(groupoid.size):
        upper = index.bump(b)
        if groupoid.allows(a, upper):
            w = horizontal(groupoid.variables, b)
            items.append(((w, maurer_cartan(groupoid, a, upper)), 1))
    for low, high in index.splits():
        if high.order == 0:
            continue
        weight = _binomial(index, low)
        for b in range(groupoid.size):
            upper = low.bump(b)
            if not (groupoid.allows(a, upper) and groupoid.allows(b, high)):
                continue
            first = maurer_cartan(groupoid, a, upper)
            second = maurer_cartan(groupoid, b, high)
            items.append(((first, second), weight))
    return Form.build(2, items)


def horizontal_derivative(groupoid: GroupoidSpace, b: int) -> Form:
    """``d w^b = -d mu^b``."""
    return -mc_structure(groupoid, b, MultiIndex.zero(groupoid.size))


def maurer_cartan_rules(groupoid: GroupoidSpace, order: int) -> StructureRules:
    """Derivative rules of every w^b and every mu^a_A with ``|A| <= order``."""
    derivatives: Dict[Generator, Form] = {}
    for b in range(groupoid.size):
        derivatives[horizontal(groupoid.variables, b)] = horizontal_derivative(
            groupoid, b
        )
    for a, index in groupoid.columns_up_to(order):
        derivatives[maurer_cartan(groupoid, a, index)] = mc_structure(
            groupoid, a, index
        )
    return StructureRules(derivatives=derivatives)


def _coefficient_differential(coefficient: Form, rules: StructureRules) -> Form:
    """d of a 0-form through the registered differentials of its symbols."""
    c = coefficient.coefficient()
    result = Form.zero(1)
    for s in sorted(c.free_symbols, key=lambda s: s.name):
        if s not in rules.coefficient_rules:
            raise MissingRule(s.name)
        result = result + rules.coefficient_rules[s].scale(diff(c, s))
    return result


def exterior_derivative(f: Form, rules: StructureRules) -> Form:
    """
    Exterior derivative by the graded Leibniz rule.

    Generators are differentiated by ``rules.derivatives`` and coefficient
    symbols by ``rules.coefficient_rules``; ``rules.substitutions`` are
    applied to the input and to the result.

    Raises:
        MissingRule: Naming the first generator or symbol without a rule.
    """
    form = f.replace_generators(rules.substitutions) if rules.substitutions else f
    pieces: List[Form] = []
    for gens, c in form.terms.items():
        scalar = Form.scalar(c)
        if c.free_symbols:
            d_coefficient = _coefficient_differential(scalar, rules)
            pieces.append(wedge(d_coefficient, _product(gens)))
        for j, g in enumerate(gens):
            if g not in rules.derivatives:
                raise MissingRule(g.label)
            sign = -1 if j % 2 else 1
            term = wedge(_product(gens[:j]), rules.derivatives[g])
            term = wedge(term, _product(gens[j + 1 :]))
            pieces.append(term.scale(sign * c))
    result = Form.zero(form.degree + 1)
    for piece in pieces:
        result = result + piece
    if rules.substitutions:
        result = result.replace_generators(rules.substitutions)
    return result if not result.is_zero() else Form.zero(form.degree + 1)


def _product(gens: Tuple[Generator, ...]) -> Form:
    result = Form.scalar(1)
    for g in gens:
        result = wedge(result, Form.generator(g))
    return result
