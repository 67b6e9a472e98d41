"""Tests for Cartan's test and the first-order PDE worked examples."""

from dataclasses import replace
from typing import Any, Dict, Tuple

import pytest
from sympy import Matrix, symbols

from jetframe._core.errors import MonotonicityViolation
from jetframe.cases import (
    get_first_order_pde_branch1,
    get_first_order_pde_branch2_stage1,
    get_first_order_pde_branch2_stage2,
)
from jetframe.cli import run
from jetframe.cli.spec_parser import ProblemSpec, build_checks, build_problem, build_script
from jetframe.exterior_forms.form import Form
from jetframe.exterior_forms.generators import Generator, generator_from_label
from jetframe.involutivity.cartan import cartan_test
from jetframe.involutivity.tableau import TableauInput, character_matrix, stacked_rank
from jetframe.moving_frame.script import run_script
from jetframe.moving_frame.state import FrameState
from jetframe.moving_frame.structure import horizontal_structure, structure_equations


class TestCartanTest:
    """Tests for cartan_test."""

    @pytest.mark.parametrize(
        "characters, r, involutive",
        [
            ([4, 3, 1, 0], 13, True),
            ([4, 1, 0, 0], 4, False),
            ([4, 0, 0, 0, 0], 4, True),
            ([], 0, True),
        ],
    )
    def test_sum_k_sk(self, characters: list, r: int, involutive: bool) -> None:
        """Involutive exactly when r equals sum k * s_k."""
        report = cartan_test(characters, r)
        assert report.involutive is involutive
        assert report.sum_k_k_sk == sum(k * s for k, s in enumerate(characters, start=1))

    def test_monotonicity(self) -> None:
        """Characters never increase."""
        with pytest.raises(MonotonicityViolation):
            cartan_test([1, 2], 5)

    def test_describe(self) -> None:
        """The relation between r and the weighted sum is printed."""
        assert cartan_test([4, 1, 0, 0], 4).describe() == (
            "characters: [4, 1, 0, 0]\nr = 4 < 6\ninvolutive: false"
        )

    def test_to_dict(self) -> None:
        """Reports serialize to plain lists."""
        data = cartan_test((2, 0), 2, isolated=["mu.X"]).to_dict()
        assert data["characters"] == [2, 0]
        assert data["isolated"] == ["mu.X"]
        assert data["involutive"] is True


@pytest.fixture(scope="module")
def branch1() -> Dict[str, Any]:
    return run(get_first_order_pde_branch1())


@pytest.fixture(scope="module")
def stage1() -> Dict[str, Any]:
    return run(get_first_order_pde_branch2_stage1())


PRINTED_Q_PPPPP = (
    "L.q[p,p,p,p,p] = -(40*q[p,p,p]^3 - 45*q[p,p]*q[p,p,p,p]*q[p,p,p]"
    " + 9*q[p,p]^2*q[p,p,p,p,p])*(g22 - g21*q[p])^3/(54*g11^3*q[p,p]^6)"
)


@pytest.mark.slow
class TestFirstOrderPDE:
    """Point transformations acting on u_y = q(x, y, u, u_x)."""

    def test_branch1_involutive(self, branch1: Dict[str, Any]) -> None:
        """q_pp = 0: characters (4, 3, 1, 0) against 13 free parameters."""
        assert branch1["characters"] == [4, 3, 1, 0]
        assert branch1["r"] == 13
        assert branch1["involutive"] is True

    def test_stage1_not_involutive(self, stage1: Dict[str, Any]) -> None:
        """q_pp != 0 at order 2: r = 4 < 6."""
        assert stage1["characters"] == [4, 1, 0, 0]
        assert stage1["r"] == 4
        assert stage1["involutive"] is False

    def test_stage1_closed_forms(self) -> None:
        """The normalized group jets reproduce the normalizations of q_pp and beyond."""
        report = run(get_first_order_pde_branch2_stage1(), "frame")
        statuses = {v["invariant"]: v["status"] for v in report["checks"]["verdicts"]}
        for name in ("L.q[p,p]", "L.q[p,p,p]", "L.q[p,p,p,p]", "L.q[p,p,p,p,p]"):
            assert statuses[name] == "agree"

    def test_stage1_printed_fifth_order_is_off_by_a_constant(self) -> None:
        """The usual printed closed form of q_ppppp is -1/6 of the prolonged value."""
        spec = get_first_order_pde_branch2_stage1()
        checks = dict(spec.checks or {})
        checks["expect"] = [PRINTED_Q_PPPPP]
        check = build_checks(replace(spec, checks=checks))
        assert check is not None
        verdict = check.run().verdict("L.q[p,p,p,p,p]")
        assert verdict.status == "systematic"
        assert verdict.ratio == "-1/6"

    def test_stage2_involutive(self) -> None:
        """Prolonging to order 3 passes Cartan's test."""
        report = run(get_first_order_pde_branch2_stage2())
        assert report["characters"] == [4, 0, 0, 0, 0]
        assert report["r"] == 4
        assert report["involutive"] is True


def _state(spec: ProblemSpec) -> FrameState:
    problem = build_problem(spec)
    state, _ = run_script(problem, build_script(spec, problem))
    return state


def _form(state: FrameState, terms: Dict[Tuple[str, str], int]) -> Form:
    def g(label: str) -> Generator:
        return generator_from_label(state.groupoid, label)

    return Form.build(2, [((g(a), g(b)), c) for (a, b), c in terms.items()])


@pytest.fixture(scope="module")
def branch1_state() -> FrameState:
    return _state(get_first_order_pde_branch1())


@pytest.fixture(scope="module")
def stage1_state() -> FrameState:
    return _state(get_first_order_pde_branch2_stage1())


@pytest.fixture(scope="module")
def stage2_state() -> FrameState:
    return _state(get_first_order_pde_branch2_stage2())


BRANCH1_HORIZONTAL = [
    {("w.x", "mu.X[x]"): -1, ("w.u", "mu.X[u]"): -1},
    {("w.x", "mu.Y[x]"): -1, ("w.y", "mu.Y[y]"): -1, ("w.u", "mu.Y[u]"): -1},
    {("w.x", "w.p"): 1, ("w.u", "mu.U[u]"): -1},
    {("w.x", "mu.P[x]"): -1, ("w.u", "mu.P[u]"): -1, ("w.p", "mu.U[u]"): -1, ("w.p", "mu.X[x]"): 1},
]

# Shared by both stages of the q_pp != 0 branch.
BRANCH2_HORIZONTAL = [
    {("w.x", "mu.X[x]"): -1, ("w.y", "w.p"): -1, ("w.u", "mu.Y[x]"): 1},
    {("w.x", "mu.Y[x]"): -1, ("w.y", "mu.Y[y]"): -1},
    {("w.x", "w.p"): 1, ("w.u", "mu.X[x]"): -2, ("w.u", "mu.Y[y]"): 1},
    {("w.x", "mu.P[x]"): -1, ("w.u", "mu.P[u]"): -1, ("w.p", "mu.X[x]"): -1, ("w.p", "mu.Y[y]"): 1},
]

STAGE2_MAURER_CARTAN = {
    "mu.P[u]": {
        ("w.x", "mu.P[x,u]"): 1,
        ("w.u", "mu.P[u,u]"): 1,
        ("w.p", "mu.X[x,u]"): 1,
        ("mu.P[u]", "mu.X[x]"): 1,
        ("mu.P[x]", "mu.Y[x]"): -1,
    },
    "mu.P[x]": {
        ("w.x", "mu.P[x,x]"): 1,
        ("w.u", "mu.P[x,u]"): 1,
        ("w.p", "mu.P[u]"): 1,
        ("mu.P[x]", "mu.Y[y]"): 1,
    },
    "mu.X[x]": {("w.x", "mu.P[u]"): 1, ("w.y", "mu.P[x]"): -1, ("w.u", "mu.X[x,u]"): 1},
    "mu.Y[x]": {
        ("w.x", "mu.X[x,u]"): -1,
        ("w.y", "mu.P[u]"): 1,
        ("mu.X[x]", "mu.Y[x]"): -1,
        ("mu.Y[x]", "mu.Y[y]"): -1,
    },
    "mu.Y[y]": {("w.x", "mu.P[u]"): 1, ("w.y", "mu.P[x]"): -2, ("w.p", "mu.Y[x]"): -1},
}


@pytest.mark.slow
class TestFirstOrderPDETableaux:
    """Tableaux and structure equations of the first-order PDE frames."""

    def test_branch1_character_matrix(self, branch1_state: FrameState) -> None:
        """Contraction with (a, b, c, d) and its rank at a = c = 1, b = d = 0."""
        tableau = TableauInput.from_state(branch1_state)
        assert [g.label for g in tableau.free] == [
            "mu.X[x]",
            "mu.X[u]",
            "mu.Y[x]",
            "mu.Y[y]",
            "mu.Y[u]",
            "mu.U[u]",
            "mu.P[x]",
            "mu.P[u]",
        ]
        a, b, c, d = symbols("a b c d")
        assert character_matrix(tableau, [a, b, c, d]) == Matrix(
            [
                [-a, -c, 0, 0, 0, 0, 0, 0],
                [0, 0, -a, -b, -c, 0, 0, 0],
                [0, 0, 0, 0, 0, -c, 0, 0],
                [d, 0, 0, 0, 0, -d, -a, -c],
            ]
        )
        assert stacked_rank(tableau, [(1, 0, 1, 0)]) == 4

    @pytest.mark.parametrize("i", range(4))
    def test_branch1_horizontal_structure(self, branch1_state: FrameState, i: int) -> None:
        """d w^x, d w^y, d w^u and d w^p for q_pp = 0, term by term."""
        equations = horizontal_structure(branch1_state)
        assert equations[i] == _form(branch1_state, BRANCH1_HORIZONTAL[i])

    def test_stage1_free_parameters(self, stage1_state: FrameState) -> None:
        """The second order parameters left free are P_uu, P_ux, X_ux and P_xx."""
        assert {g.label for g in stage1_state.free_generators(2)} == {
            "mu.P[u,u]",
            "mu.P[x,u]",
            "mu.X[x,u]",
            "mu.P[x,x]",
        }

    @pytest.mark.parametrize("i", range(4))
    def test_stage1_horizontal_structure(self, stage1_state: FrameState, i: int) -> None:
        """d w^i at order 2 carry no invariant torsion; d w^x has -w^y ^ w^p."""
        equations = horizontal_structure(stage1_state)
        assert equations[i] == _form(stage1_state, BRANCH2_HORIZONTAL[i])

    def test_stage2_free_parameters(self, stage2_state: FrameState) -> None:
        """The third order parameters left free are P_uuu, P_uux, P_uxx and P_xxx."""
        assert {g.label for g in stage2_state.free_generators(3)} == {
            "mu.P[u,u,u]",
            "mu.P[x,u,u]",
            "mu.P[x,x,u]",
            "mu.P[x,x,x]",
        }

    @pytest.mark.parametrize("i", range(4))
    def test_stage2_horizontal_structure_unchanged(self, stage2_state: FrameState, i: int) -> None:
        """Prolonging to order 3 leaves d w^i as they were at order 2."""
        equations = horizontal_structure(stage2_state)
        assert equations[i] == _form(stage2_state, BRANCH2_HORIZONTAL[i])

    @pytest.mark.parametrize("label", sorted(STAGE2_MAURER_CARTAN))
    def test_stage2_maurer_cartan_structure(self, stage2_state: FrameState, label: str) -> None:
        """d mu of the free first order forms, term by term, with no torsion left."""
        g = generator_from_label(stage2_state.groupoid, label)
        (form,) = structure_equations(stage2_state, [g]).values()
        assert form == _form(stage2_state, STAGE2_MAURER_CARTAN[label])

    def test_stage2_has_no_w_q_terms(self, stage2_state: FrameState) -> None:
        """w^q = sum q_i w^i vanishes once q_x, q_y, q_u and q_p are normalized."""
        generators = [
            generator_from_label(stage2_state.groupoid, label) for label in STAGE2_MAURER_CARTAN
        ]
        for form in structure_equations(stage2_state, generators).values():
            assert all(g.label != "w.q" for g in form.generators())
