"""Tests for symbolic and numeric prolongation, the series oracle and flat frames."""

import random

import pytest
from sympy import Matrix, Rational, Symbol, diff

from jetframe._core.errors import OrderOverflow, SingularJacobian
from jetframe.expr_kernel.kernel import eval_rational, normalize
from jetframe.jet_space.flat import flat_frame, graph_jets
from jetframe.jet_space.groupoid import GroupoidSpace
from jetframe.jet_space.infinitesimal import prolongation_coefficients
from jetframe.jet_space.multiindex import MultiIndex
from jetframe.jet_space.prolong import prolong, prolong_numeric, series_oracle
from jetframe.jet_space.space import JetSpace
from jetframe.jet_space.transformation import PointTransformation

x, y, u = Symbol("x"), Symbol("y"), Symbol("u")
u_x, u_y = Symbol("u[x]"), Symbol("u[y]")
u_xx, u_xy, u_yy = Symbol("u[x,x]"), Symbol("u[x,y]"), Symbol("u[y,y]")


def _plane() -> JetSpace:
    return JetSpace(("x", "y"), ("u",), 2)


def _plane_map() -> PointTransformation:
    return PointTransformation.explicit(_plane(), {"x": x + y * u, "y": y - x**2, "u": u * x + y})


PLANE_POINT = {
    x: Rational(1, 2),
    y: Rational(-1, 3),
    u: Rational(2),
    u_x: Rational(3),
    u_y: Rational(-1),
    u_xx: Rational(1, 5),
    u_xy: Rational(2),
    u_yy: Rational(-4),
}


class TestSymbolicProlongation:
    """Tests for prolong."""

    def test_first_order_formula(self) -> None:
        """The first prolongation is (U_x + u_x U_u) / (X_x + u_x X_u)."""
        space = JetSpace(("x",), ("u",), 1)
        groupoid = GroupoidSpace.over(("x",), ("u",), ("X", "U"), 1)
        action = prolong(PointTransformation.symbolic_form(space, groupoid), 1)
        expected = (Symbol("Z.U[x]") + u_x * Symbol("Z.U[u]")) / (
            Symbol("Z.X[x]") + u_x * Symbol("Z.X[u]")
        )
        assert normalize(action.value(0, MultiIndex((1,))) - expected) == 0

    def test_identity_prolongs_to_identity(self) -> None:
        """Every jet is fixed by the identity."""
        space = JetSpace(("x", "y"), ("u",), 3)
        action = prolong(PointTransformation.identity(space), 3)
        for k in range(4):
            for alpha, index in space.jets(k):
                assert action.value(alpha, index) == space.jet(alpha, index)

    def test_scaling(self) -> None:
        """Under (l x + a, l u + b), u_x is invariant and u_xx scales by 1/l."""
        space = JetSpace(("x",), ("u",), 2)
        l, a, b = Symbol("l"), Symbol("a"), Symbol("b")
        t = PointTransformation.explicit(space, {"x": l * x + a, "u": l * u + b}, [l, a, b])
        action = prolong(t, 2)
        assert action.value(0, MultiIndex((1,))) == u_x
        assert normalize(action.value(0, MultiIndex((2,))) - u_xx / l) == 0

    def test_lifted_bindings(self) -> None:
        """Lifted symbols map to target and prolonged formulas."""
        space = JetSpace(("x",), ("u",), 1)
        t = PointTransformation.explicit(space, {"x": 2 * x, "u": u})
        bindings = prolong(t, 1).lifted_bindings()
        assert bindings[Symbol("L.x")] == 2 * x
        assert bindings[Symbol("L.u")] == u
        assert bindings[Symbol("L.u[x]")] == u_x / 2

    def test_order_beyond_space(self) -> None:
        """Prolonging past the truncation overflows."""
        space = JetSpace(("x",), ("u",), 1)
        with pytest.raises(OrderOverflow):
            prolong(PointTransformation.identity(space), 2)

    def test_singular_jacobian(self) -> None:
        """A constant horizontal target has no prolongation."""
        space = JetSpace(("x",), ("u",), 1)
        t = PointTransformation.explicit(space, {"x": 1, "u": u})
        with pytest.raises(SingularJacobian):
            prolong(t, 1)

    def test_value_beyond_order(self) -> None:
        """Reading a jet above the prolonged order overflows."""
        action = prolong(PointTransformation.identity(_plane()), 1)
        with pytest.raises(OrderOverflow):
            action.value(0, MultiIndex((2, 0)))


class TestNumericProlongation:
    """prolong_numeric and series_oracle against the symbolic table."""

    def test_numeric_matches_symbolic(self) -> None:
        """Every jet up to order 2 agrees with the evaluated formulas."""
        t = _plane_map()
        action = prolong(t, 2)
        numeric = prolong_numeric(t, 2, PLANE_POINT)
        for k in range(3):
            for alpha, index in t.space.jets(k):
                expected = eval_rational(action.value(alpha, index), PLANE_POINT)
                assert numeric.value(alpha, index) == expected

    def test_oracle_matches_numeric(self) -> None:
        """Series inversion reproduces the implicit-derivative chain."""
        t = _plane_map()
        numeric = prolong_numeric(t, 2, PLANE_POINT)
        oracle = series_oracle(t, 2, PLANE_POINT)
        assert oracle.base == numeric.base
        assert dict(oracle.jets) == dict(numeric.jets)

    def test_first_order_matrix_formula(self) -> None:
        """(P, Q) solve the chain rule [D_x U; D_y U] = [[D_x X, D_x Y]; [D_y X, D_y Y]] (P, Q)."""
        t = _plane_map()
        X, Y, U = t.targets
        rng = random.Random(0)
        checked = 0
        while checked < 100:
            point = {s: Rational(rng.randint(-9, 9), rng.randint(1, 9)) for s in (x, y, u, u_x, u_y)}
            p, q = point[u_x], point[u_y]

            def total(f, v, jet):
                return (diff(f, v) + jet * diff(f, u)).xreplace(point)

            m = Matrix(
                [[total(X, x, p), total(Y, x, p)], [total(X, y, q), total(Y, y, q)]]
            )
            if m.det() == 0:
                continue
            expected = m.inv() * Matrix([total(U, x, p), total(U, y, q)])
            numeric = prolong_numeric(t, 1, point)
            assert numeric.value(0, MultiIndex((1, 0))) == expected[0]
            assert numeric.value(0, MultiIndex((0, 1))) == expected[1]
            checked += 1

    def test_wanted_subset(self) -> None:
        """Only the requested jets and their parents are computed."""
        t = _plane_map()
        numeric = prolong_numeric(t, 2, PLANE_POINT, wanted=[(0, MultiIndex((0, 2)))])
        assert set(numeric.jets) == {
            (0, MultiIndex((0, 0))),
            (0, MultiIndex((0, 1))),
            (0, MultiIndex((0, 2))),
        }

    def test_symbolic_form_at_group_jets(self) -> None:
        """With group jets in the point the symbolic form is evaluated directly."""
        space = JetSpace(("x",), ("u",), 1)
        groupoid = GroupoidSpace.over(("x",), ("u",), ("X", "U"), 1)
        t = PointTransformation.symbolic_form(space, groupoid)
        point = {
            x: Rational(1),
            u: Rational(2),
            u_x: Rational(3),
            Symbol("Z.X"): Rational(0),
            Symbol("Z.U"): Rational(4),
            Symbol("Z.X[x]"): Rational(2),
            Symbol("Z.X[u]"): Rational(1),
            Symbol("Z.U[x]"): Rational(5),
            Symbol("Z.U[u]"): Rational(7),
        }
        numeric = prolong_numeric(t, 1, point)
        assert numeric.value(0, MultiIndex((1,))) == Rational(26, 5)
        assert numeric.lifted_point()[Symbol("L.u")] == 4

    def test_composition(self) -> None:
        """Prolonging a composition equals composing the prolonged actions."""
        space = _plane()
        inner = PointTransformation.explicit(space, {"x": 2 * x + y, "y": y, "u": u + x})
        outer = PointTransformation.explicit(space, {"x": x, "y": y + x * x, "u": 3 * u})
        step = prolong_numeric(inner, 2, PLANE_POINT).as_point()
        chained = prolong_numeric(outer, 2, step).as_point()
        direct = prolong_numeric(outer.compose(inner), 2, PLANE_POINT).as_point()
        assert chained == direct

    def test_compose_needs_explicit_forms(self) -> None:
        """Symbolic forms do not compose."""
        space = JetSpace(("x",), ("u",), 1)
        groupoid = GroupoidSpace.over(("x",), ("u",), ("X", "U"), 1)
        symbolic = PointTransformation.symbolic_form(space, groupoid)
        with pytest.raises(ValueError, match="explicit"):
            symbolic.compose(PointTransformation.identity(space))

    def test_explicit_needs_every_target(self) -> None:
        """A target per base variable is required."""
        with pytest.raises(ValueError, match="Missing target"):
            PointTransformation.explicit(_plane(), {"x": x, "y": y})


class TestInfinitesimal:
    """Tests for the linearized prolongation coefficients."""

    def test_first_order_coefficients(self) -> None:
        """phi^x = U_x + u_x U_u - u_x X_x - u_x^2 X_u."""
        space = JetSpace(("x",), ("u",), 2)
        groupoid = GroupoidSpace.over(("x",), ("u",), ("X", "U"), 2)
        coefficients = prolongation_coefficients(
            space, groupoid, 0, MultiIndex((1,)), lambda b, k: space.jet(b, k)
        )
        assert coefficients == {
            (0, MultiIndex((1, 0))): -u_x,
            (0, MultiIndex((0, 1))): -(u_x**2),
            (1, MultiIndex((1, 0))): 1,
            (1, MultiIndex((0, 1))): u_x,
        }


class TestFlatFrame:
    """Tests for flat_frame and graph_jets."""

    def frame(self):
        space = JetSpace(("x",), ("u",), 2)
        return flat_frame(space, {u: 1, u_x: 2, u_xx: 6}, {x: 0})

    def test_section_polynomial(self) -> None:
        """The section is the Taylor polynomial of the jets."""
        assert self.frame().on_graph(u) == 3 * x**2 + 2 * x + 1

    def test_derivative_along_section(self) -> None:
        """d/dy acts on u through the section slope."""
        frame = self.frame()
        assert frame.derivative(u**2, 0).expand() == (2 * u * (6 * x + 2)).expand()
        assert frame.iterate(x * u, MultiIndex((1,))) == frame.derivative(x * u, 0)

    def test_graph_jets_recover_section(self) -> None:
        """Jets of the section at the center are the input jets."""
        jets = graph_jets(self.frame(), {x: 0})
        assert jets == {u: 1, u_x: 2, u_xx: 6}
