"""Unit tests for generators, exterior forms and structure equations."""

import pytest
from sympy import Symbol

from jetframe._core.errors import MissingRule, OrderOverflow
from jetframe.exterior_forms.form import Form, contract, reduce_mod_contact, wedge, wedge_all
from jetframe.exterior_forms.generators import (
    GeneratorKind,
    contact,
    generator_from_label,
    horizontal,
    maurer_cartan,
)
from jetframe.exterior_forms.structure import (
    StructureRules,
    exterior_derivative,
    maurer_cartan_rules,
    mc_structure,
)
from jetframe.jet_space.groupoid import GroupoidSpace
from jetframe.jet_space.multiindex import MultiIndex

a = Symbol("a")


def _groupoid(max_order: int = 3) -> GroupoidSpace:
    return GroupoidSpace.over(("x",), ("u",), ("X", "U"), max_order)


G = _groupoid()
W_X = horizontal(G.variables, 0)
W_U = horizontal(G.variables, 1)
MU_X = maurer_cartan(G, 0, MultiIndex.zero(2))
MU_X_X = maurer_cartan(G, 0, MultiIndex((1, 0)))
TH_U = contact(("x",), ("u",), 0, MultiIndex((0,)))


class TestGenerators:
    """Tests for generator labels and order."""

    def test_labels(self) -> None:
        """Labels follow the w./th./mu. spelling."""
        assert W_X.label == "w.x"
        assert TH_U.label == "th.u"
        assert maurer_cartan(G, 1, MultiIndex((1, 1))).label == "mu.U[x,u]"

    def test_label_round_trip(self) -> None:
        """generator_from_label parses horizontal and Maurer-Cartan labels."""
        assert generator_from_label(G, "w.u") == W_U
        assert generator_from_label(G, "mu.X[x]") == MU_X_X
        assert generator_from_label(G, "mu.X") == MU_X

    @pytest.mark.parametrize("label", ["v.x", "w.t", "mu.V[x]", "mu.X[t]"])
    def test_bad_labels(self, label: str) -> None:
        """Unknown labels raise ValueError."""
        with pytest.raises(ValueError):
            generator_from_label(G, label)

    def test_omitted_jet_label(self) -> None:
        """A label of a jet the dependencies omit is rejected."""
        restricted = GroupoidSpace.over(("x",), ("u",), ("X", "U"), 2, {"X": ["x"]})
        with pytest.raises(ValueError, match="omitted"):
            generator_from_label(restricted, "mu.X[u]")

    def test_kind_order(self) -> None:
        """Horizontal forms sort before contact forms, contact before Maurer-Cartan."""
        assert sorted([MU_X, TH_U, W_U, W_X]) == [W_X, W_U, TH_U, MU_X]
        assert TH_U.kind == GeneratorKind.CONTACT


class TestForm:
    """Tests for Form arithmetic."""

    def test_wedge_anticommutes(self) -> None:
        """w.x ^ w.u = -(w.u ^ w.x)."""
        f = wedge(Form.generator(W_X), Form.generator(W_U))
        g = wedge(Form.generator(W_U), Form.generator(W_X))
        assert f == -g
        assert f.coefficient(W_U, W_X) == -1

    def test_square_vanishes(self) -> None:
        """A one-form wedged with itself is zero."""
        assert wedge(Form.generator(W_X, a), Form.generator(W_X)).is_zero()

    def test_wedge_all(self) -> None:
        """wedge_all of nothing is the scalar 1."""
        assert wedge_all([]) == Form.scalar(1)
        assert wedge_all([Form.generator(W_X), Form.generator(MU_X)]).degree == 2

    def test_mixed_degrees_rejected(self) -> None:
        """Nonzero forms of different degrees do not add."""
        with pytest.raises(ValueError, match="Cannot add forms"):
            Form.generator(W_X) + Form.scalar(1)

    def test_zero_terms_pruned(self) -> None:
        """Cancelling coefficients leave the zero form."""
        assert (Form.generator(W_X, a) - Form.generator(W_X, a)).is_zero()

    def test_subs_and_scale(self) -> None:
        """Coefficients are substituted and scaled exactly."""
        f = Form.generator(W_X, a).subs({a: 3}).scale(2)
        assert f.coefficient(W_X) == 6

    def test_replace_generators(self) -> None:
        """Replacing a generator re-expands the product."""
        f = wedge(Form.generator(W_X), Form.generator(MU_X))
        assert f.replace_generators({MU_X: Form.generator(W_X, 5)}).is_zero()
        g = f.replace_generators({MU_X: Form.generator(W_U, 5)})
        assert g.coefficient(W_X, W_U) == 5

    def test_reduce_mod_contact(self) -> None:
        """Terms with a contact form are dropped."""
        f = Form.generator(TH_U) + Form.generator(W_X, 2)
        assert reduce_mod_contact(f) == Form.generator(W_X, 2)

    def test_contract(self) -> None:
        """Contraction pairs a vector with the horizontal slot."""
        f = wedge(Form.generator(W_X), Form.generator(MU_X, a))
        assert contract(f, {W_X: 2}) == Form.generator(MU_X, 2 * a)
        with pytest.raises(ValueError, match="2-forms"):
            contract(Form.generator(W_X), {W_X: 1})

    def test_serialize(self) -> None:
        """Forms print as coefficient-times-basis sums."""
        assert Form.zero().serialize() == "0"
        f = wedge(Form.generator(W_X, 2), Form.generator(MU_X))
        assert f.serialize() == "(2)*w.x^mu.X"


class TestStructureEquations:
    """Tests for Maurer-Cartan structure equations and the exterior derivative."""

    def test_order_zero_structure(self) -> None:
        """d mu^X = w.x ^ mu.X[x] + w.u ^ mu.X[u]."""
        expected = Form.build(
            2,
            [
                ((W_X, MU_X_X), 1),
                ((W_U, maurer_cartan(G, 0, MultiIndex((0, 1)))), 1),
            ],
        )
        assert mc_structure(G, 0, MultiIndex.zero(2)) == expected

    def test_structure_needs_next_order(self) -> None:
        """The structure equation reaches one order up."""
        with pytest.raises(OrderOverflow):
            mc_structure(_groupoid(1), 0, MultiIndex((1, 0)))

    def test_d_squared_vanishes(self) -> None:
        """d(d g) = 0 for every generator up to order 1."""
        rules = maurer_cartan_rules(G, 2)
        for g, form in rules.derivatives.items():
            if g.order <= 1:
                assert exterior_derivative(form, rules).is_zero(), g.label

    def test_d_squared_vanishes_at_order_two(self) -> None:
        """d(d g) = 0 for second order generators, repeated indices included."""
        groupoid = _groupoid(4)
        rules = maurer_cartan_rules(groupoid, 3)
        for g, form in rules.derivatives.items():
            if g.order == 2:
                assert exterior_derivative(form, rules).is_zero(), g.label

    def test_repeated_index_weight(self) -> None:
        """d mu.X[x,x] counts the split x + x twice."""
        mu = {
            label: generator_from_label(G, label)
            for label in ("mu.X[x]", "mu.X[u]", "mu.U[x]", "mu.X[x,x]", "mu.X[x,u]", "mu.U[x,x]")
        }
        expected = Form.build(
            2,
            [
                ((W_X, generator_from_label(G, "mu.X[x,x,x]")), 1),
                ((W_U, generator_from_label(G, "mu.X[x,x,u]")), 1),
                ((mu["mu.X[x,x]"], mu["mu.X[x]"]), 2),
                ((mu["mu.X[x,u]"], mu["mu.U[x]"]), 2),
                ((mu["mu.X[x]"], mu["mu.X[x,x]"]), 1),
                ((mu["mu.X[u]"], mu["mu.U[x,x]"]), 1),
            ],
        )
        result = mc_structure(G, 0, MultiIndex((2, 0)))
        assert result == expected
        assert result.coefficient(mu["mu.X[x,x]"], mu["mu.X[x]"]) == 1

    def test_missing_generator_rule(self) -> None:
        """Generators without a rule are named in MissingRule."""
        with pytest.raises(MissingRule, match="w.x"):
            exterior_derivative(Form.generator(W_X), StructureRules())

    def test_missing_coefficient_rule(self) -> None:
        """Coefficient symbols need a registered differential."""
        rules = maurer_cartan_rules(G, 1)
        with pytest.raises(MissingRule, match="'a'"):
            exterior_derivative(Form.generator(W_X, a), rules)

    def test_coefficient_leibniz(self) -> None:
        """d(a w.x) = da ^ w.x + a d(w.x)."""
        base = maurer_cartan_rules(G, 1)
        rules = StructureRules(
            derivatives=base.derivatives,
            coefficient_rules={a: Form.generator(MU_X)},
        )
        result = exterior_derivative(Form.generator(W_X, a), rules)
        expected = wedge(Form.generator(MU_X), Form.generator(W_X)) + base.derivatives[W_X].scale(a)
        assert result == expected

    def test_rule_degrees_checked(self) -> None:
        """Derivative rules must be 2-forms."""
        with pytest.raises(ValueError, match="degree 2"):
            StructureRules(derivatives={W_X: Form.generator(W_U)})
