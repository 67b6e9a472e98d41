"""Tests for numeric checks of closed forms and of invariance."""

from dataclasses import replace
from typing import Tuple

import pytest
from sympy import Integer, Symbol

from jetframe.cases import get_prolong_1d, get_scaling_translation
from jetframe.cli.spec_parser import build_problem, build_script
from jetframe.expr_kernel.parser import Scope, parse_expr
from jetframe.moving_frame.closed_forms import (
    AGREE,
    DISAGREE,
    SYSTEMATIC,
    ClosedFormCheck,
    check_invariance,
    frame_check,
)
from jetframe.moving_frame.problem import Problem
from jetframe.moving_frame.script import run_script
from jetframe.moving_frame.state import FrameState

L_U_XX = Symbol("L.u[x,x]")


@pytest.fixture(scope="module")
def scaling_state() -> Tuple[Problem, FrameState]:
    spec = get_scaling_translation()
    problem = build_problem(spec)
    state, _ = run_script(problem, build_script(spec, problem))
    return problem, state


class TestClosedFormCheck:
    """Tests for ClosedFormCheck and frame_check."""

    def test_frame_closed_forms_agree(self, scaling_state: Tuple[Problem, FrameState]) -> None:
        """X_x = u_xx gives the normalization U_XX = 1."""
        _, state = scaling_state
        check = frame_check(state)
        assert [s for s, _ in check.expectations] == [L_U_XX]
        report = check.run(samples=5)
        assert report.all_agree
        assert report.verdict("L.u[x,x]").samples == 5

    def test_constant_ratio_is_systematic(self, scaling_state: Tuple[Problem, FrameState]) -> None:
        """A wrong constant factor is reported with its ratio."""
        _, state = scaling_state
        check = replace(frame_check(state), expectations=((L_U_XX, Integer(2)),))
        verdict = check.run(samples=5).verdict("L.u[x,x]")
        assert verdict.status == SYSTEMATIC
        assert verdict.ratio == "2"

    def test_wrong_formula_disagrees(self, scaling_state: Tuple[Problem, FrameState]) -> None:
        """A non-constant mismatch is a disagreement."""
        _, state = scaling_state
        check = replace(frame_check(state), expectations=((L_U_XX, Symbol("u[x]")),))
        report = check.run(samples=5)
        assert report.verdict("L.u[x,x]").status == DISAGREE
        assert not report.all_agree

    def test_first_prolongation_identity(self) -> None:
        """The identity jet leaves u_x unchanged."""
        problem = build_problem(get_prolong_1d())
        assignments = tuple(
            (Symbol(name), Integer(value))
            for name, value in (("Z.X", 0), ("Z.U", 0), ("Z.X[x]", 1), ("Z.X[u]", 0),
                                ("Z.U[x]", 0), ("Z.U[u]", 1))
        )
        check = ClosedFormCheck(problem, assignments, ((Symbol("L.u[x]"), Symbol("u[x]")),))
        report = check.run(samples=3)
        assert report.verdict("L.u[x]").status == AGREE

    def test_not_a_jet_invariant(self, scaling_state: Tuple[Problem, FrameState]) -> None:
        """Only lifted jets of dependent variables can be expected."""
        problem, _ = scaling_state
        check = ClosedFormCheck(problem, (), ((Symbol("L.x"), Integer(0)),))
        with pytest.raises(ValueError, match="not a lifted jet invariant"):
            check.run(samples=1)


class TestCheckInvariance:
    """Tests for check_invariance."""

    def test_scaling_invariants(self, scaling_state: Tuple[Problem, FrameState]) -> None:
        """u_x and u_xxx / u_xx^2 are invariant; u_xx is not."""
        problem, _ = scaling_state
        scope = Scope(independent=("x",), dependent=("u",))
        exprs = [parse_expr(text, scope) for text in ("u[x]", "u[x,x,x]/u[x,x]^2", "u[x,x]")]
        verdict = check_invariance(problem.action, exprs, 3, samples=3)
        assert verdict == {"u[x]": True, "u[x,x,x]/u[x,x]^2": True, "u[x,x]": False}

    def test_needs_explicit_transformation(self, scaling_state: Tuple[Problem, FrameState]) -> None:
        """The symbolic form has no parameters to sample."""
        problem, _ = scaling_state
        with pytest.raises(ValueError, match="explicit transformation"):
            check_invariance(problem.transformation, [Symbol("u[x]")], 1)
