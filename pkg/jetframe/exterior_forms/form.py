from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, Mapping, Set, Tuple

from sympy import Expr, Integer, Symbol, sympify

from jetframe.exterior_forms.generators import Generator, GeneratorKind
from jetframe.expr_kernel.kernel import normalize, serialize

Term = Tuple[Generator, ...]


def _canonical(gens: Term) -> Tuple[int, Term]:
    """Sort generators, returning the permutation sign (0 on repeats)."""
    items = list(gens)
    sign = 1
    for i in range(1, len(items)):
        j = i
        while j > 0 and items[j] < items[j - 1]:
            items[j], items[j - 1] = items[j - 1], items[j]
            sign = -sign
            j -= 1
    for a, b in zip(items, items[1:]):
        if a == b:
            return 0, ()
    return sign, tuple(items)


@dataclass(frozen=True, eq=True)
class Form:
    """
    An exterior form: strictly increasing generator tuples to coefficients.

    Zero coefficients are pruned; coefficients are kept in canonical form.
    """

    degree: int
    terms: Mapping[Term, Expr] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for gens in self.terms:
            if len(gens) != self.degree:
                raise ValueError(f"Term {gens} does not have degree {self.degree}")

    @classmethod
    def build(cls, degree: int, items: Iterable[Tuple[Term, Any]]) -> "Form":
        collected: Dict[Term, Expr] = {}
        for gens, coefficient in items:
            sign, key = _canonical(gens)
            if sign == 0:
                continue
            collected[key] = collected.get(key, Integer(0)) + sign * sympify(coefficient)
        terms = {}
        for key, value in collected.items():
            value = normalize(value)
            if value != 0:
                terms[key] = value
        return cls(degree, dict(sorted(terms.items(), key=lambda kv: [g.sort_key() for g in kv[0]])))

    @classmethod
    def zero(cls, degree: int = 1) -> "Form":
        return cls(degree, {})

    @classmethod
    def scalar(cls, value: Any) -> "Form":
        return cls.build(0, [((), value)])

    @classmethod
    def generator(cls, g: Generator, coefficient: Any = 1) -> "Form":
        return cls.build(1, [((g,), coefficient)])

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, *gens: Generator) -> Expr:
        sign, key = _canonical(gens)
        if sign == 0:
            return Integer(0)
        return sign * self.terms.get(key, Integer(0))

    def generators(self) -> Set[Generator]:
        return {g for gens in self.terms for g in gens}

    def symbols(self) -> Set[Symbol]:
        found: Set[Symbol] = set()
        for value in self.terms.values():
            found |= value.free_symbols
        return found

    def _check(self, other: "Form") -> None:
        if self.degree != other.degree and not (self.is_zero() or other.is_zero()):
            raise ValueError(f"Cannot add forms of degree {self.degree} and {other.degree}")

    def __add__(self, other: "Form") -> "Form":
        self._check(other)
        degree = self.degree if not self.is_zero() else other.degree
        return Form.build(degree, list(self.terms.items()) + list(other.terms.items()))

    def __neg__(self) -> "Form":
        return self.scale(-1)

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def scale(self, value: Any) -> "Form":
        factor = sympify(value)
        return Form.build(self.degree, [(g, c * factor) for g, c in self.terms.items()])

    def map_coefficients(self, fn: Callable[[Expr], Any]) -> "Form":
        return Form.build(self.degree, [(g, fn(c)) for g, c in self.terms.items()])

    def subs(self, bindings: Mapping[Symbol, Any]) -> "Form":
        if not bindings:
            return self
        values = {k: sympify(v) for k, v in bindings.items()}
        return self.map_coefficients(lambda c: c.xreplace(values))

    def replace_generators(self, rules: Mapping[Generator, "Form"]) -> "Form":
        """Replace one-form generators by one-forms and re-expand."""
        result = Form.zero(self.degree)
        for gens, c in self.terms.items():
            product = Form.scalar(c)
            for g in gens:
                product = wedge(product, rules.get(g, Form.generator(g)))
            result = result + product
        return result if not result.is_zero() else Form.zero(self.degree)

    def serialize(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for gens, c in self.terms.items():
            basis = "^".join(g.label for g in gens)
            parts.append(f"({serialize(c)})*{basis}" if gens else f"({serialize(c)})")
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.serialize()


def wedge(f: Form, g: Form) -> Form:
    """Exterior product; bilinear, associative, graded anticommutative."""
    items = []
    for a, ca in f.terms.items():
        for b, cb in g.terms.items():
            items.append((a + b, ca * cb))
    return Form.build(f.degree + g.degree, items)


def wedge_all(forms: Iterable[Form]) -> Form:
    result = Form.scalar(1)
    for f in forms:
        result = wedge(result, f)
    return result


def reduce_mod_contact(f: Form) -> Form:
    """Drop every term containing a contact generator."""
    return Form(
        f.degree,
        {
            gens: c
            for gens, c in f.terms.items()
            if all(g.kind != GeneratorKind.CONTACT for g in gens)
        },
    )


def contract(f: Form, direction: Mapping[Generator, Any]) -> Form:
    """Interior product of a 2-form with a vector dual to horizontal forms.

    The vector pairs to ``direction[g]`` on horizontal generators and to zero
    on everything else.
    """
    if f.degree != 2:
        raise ValueError("Contraction is defined here for 2-forms")
    items = []
    for (first, second), c in f.terms.items():
        v1 = sympify(direction.get(first, 0))
        v2 = sympify(direction.get(second, 0))
        if v1 != 0:
            items.append(((second,), c * v1))
        if v2 != 0:
            items.append(((first,), -c * v2))
    return Form.build(1, items)
