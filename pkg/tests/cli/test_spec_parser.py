"""Tests for parsing case files and building problems from them."""

import pytest
from sympy import Symbol

from jetframe._core.case_manager import CaseManager
from jetframe._core.errors import ParseError, UndeclaredSymbol
from jetframe.cli.spec_parser import build_checks, build_problem, build_script, parse_problem
from jetframe.moving_frame.state import SOLVE_NONE, AutoSolve

HEAD = """space:
  independent: [x]
  dependent: [u]
  max_order: 1
group:
  max_order: 1
"""


def _case(body: str, task: str = "task:\n  kind: frame\n") -> str:
    return HEAD + body + task


SECTIONED = """# header comment
[space]
independent: [x]
dependent: [u]
max_order: 1
[group]
max_order: 1
{system}[frame]
[task]
kind: frame
"""


class TestParseProblem:
    """Tests for parse_problem validation."""

    def test_minimal_case(self) -> None:
        """Space, group and task are enough."""
        spec = parse_problem(_case(""))
        assert spec.independent == ("x",)
        assert spec.dependent == ("u",)
        assert spec.frame == []
        assert spec.checks is None

    def test_expression_error_position(self) -> None:
        """Jet-grammar errors carry the position in the case text."""
        text = _case('  system:\n    - "Z.X[x] = u[x,]"\n')
        with pytest.raises(ParseError) as raised:
            parse_problem(text)
        assert (raised.value.line, raised.value.col) == (8, 20)
        assert raised.value.found == ","

    def test_undeclared_symbol(self) -> None:
        """Names outside the case's scope are reported."""
        with pytest.raises(UndeclaredSymbol, match="'v'"):
            parse_problem(_case('  system:\n    - "Z.U = v"\n'))

    def test_malformed_yaml(self) -> None:
        """YAML syntax errors are parse errors."""
        with pytest.raises(ParseError):
            parse_problem("space: [x\n")

    @pytest.mark.parametrize(
        "extra, found",
        [
            ("extra: 1\n", "extra"),
            ("options:\n  speed: 1\n", "speed"),
        ],
    )
    def test_unknown_keys(self, extra: str, found: str) -> None:
        """Unknown blocks and options are rejected."""
        with pytest.raises(ParseError) as raised:
            parse_problem(_case(extra))
        assert raised.value.found == found

    def test_unknown_task_kind(self) -> None:
        """Task kinds are a closed set."""
        with pytest.raises(ParseError, match="one of prolong"):
            parse_problem(_case("", "task:\n  kind: solve\n"))

    def test_option_must_be_integer(self) -> None:
        """Option values are integers."""
        with pytest.raises(ValueError, match="Option 'seed' must be an integer"):
            parse_problem(_case("options:\n  seed: abc\n"))

    def test_missing_block(self) -> None:
        """The group block is required."""
        with pytest.raises(ValueError, match="'group' mapping"):
            parse_problem("space: {independent: [x], dependent: [u], max_order: 1}\ntask: {kind: frame}\n")

    def test_lhs_must_be_group_jet(self) -> None:
        """Determining equations solve for group jets."""
        with pytest.raises(ParseError, match="a group jet on the left-hand side"):
            parse_problem(_case('  system:\n    - "x = 1"\n'))

    def test_directive_shape(self) -> None:
        """Directives are single-key mappings."""
        with pytest.raises(ValueError, match="single key"):
            parse_problem(_case("frame:\n  - normalize: {invariant: L.x}\n    prolong: {order: 1}\n"))

    def test_sweep_conditions_must_be_boolean(self) -> None:
        """A sweep either records conditions or it does not."""
        with pytest.raises(ValueError, match="'sweep.conditions' must be true or false"):
            parse_problem(_case("frame:\n  - sweep: {order: 1, conditions: sometimes}\n"))


class TestSections:
    """Tests for cases written as [block] sections."""

    def test_sections_match_yaml(self) -> None:
        """Section bodies are the values of the YAML blocks."""
        spec = parse_problem(SECTIONED.format(system=""))
        assert spec == parse_problem(_case(""))
        assert spec.frame == []

    def test_expression_error_position(self) -> None:
        """Positions refer to the section text, not the rewritten YAML."""
        text = SECTIONED.format(system='system:\n  - "Z.X[x] = u[x,]"\n')
        with pytest.raises(ParseError) as raised:
            parse_problem(text)
        assert (raised.value.line, raised.value.col) == (9, 18)
        assert raised.value.found == ","

    def test_repeated_section(self) -> None:
        """A block is given once."""
        with pytest.raises(ParseError, match=r"one \[space\] section") as raised:
            parse_problem(SECTIONED.format(system="[space]\n"))
        assert raised.value.line == 9

    def test_unknown_section(self) -> None:
        """Section names are the block names."""
        with pytest.raises(ParseError) as raised:
            parse_problem(SECTIONED.format(system="[extra]\nspeed: 1\n"))
        assert (raised.value.line, raised.value.found) == (9, "extra")

    def test_dump_sections_reparses(self) -> None:
        """Dumped sections parse back to the same case."""
        checks = '  assign: ["Z.X[x] = g"]\n  parameters: [g]\n  expect: ["L.u[x] = u[x]/g"]\n'
        spec = parse_problem(_case("checks:\n" + checks))
        assert parse_problem(spec.dump_sections()) == spec

    def test_shipped_case_file(self) -> None:
        """The branch-1 first order PDE case is a sectioned .case file."""
        assert CaseManager.resolve("first_order_pde_branch1").suffix == ".case"
        spec = parse_problem(CaseManager.load_case_text("first_order_pde_branch1"))
        assert spec.base_variables == ("x", "y", "u", "p", "q")
        assert spec.kind == "cartan"
        assert len(spec.frame) == 19


class TestBuild:
    """Tests for problems, scripts and checks built from a case."""

    def test_problem(self) -> None:
        """The groupoid uses upper-case components by default."""
        problem = build_problem(parse_problem(_case("  symbolic: true\n")))
        assert problem.groupoid.components == ("X", "U")
        assert problem.symbolic
        assert problem.action is None

    def test_script(self) -> None:
        """Directive parameters are parsed in the case's scope."""
        frame = (
            "frame:\n"
            '  - normalize: {invariant: "L.x", solve: "Z.X"}\n'
            '  - normalize: {invariant: "L.u", solve: none}\n'
            '  - normalize: {invariant: "L.u[x]", solve: {order: 1}}\n'
            '  - assume: {nonzero: "L.u[x]"}\n'
        )
        spec = parse_problem(_case(frame))
        first, second, third, fourth = build_script(spec)
        assert first.config.invariant == Symbol("L.x")
        assert first.config.solve.label == "mu.X"
        assert second.config.solve == SOLVE_NONE
        assert third.config.solve == AutoSolve(1)
        assert fourth.config.nonzero == Symbol("L.u[x]")

    def test_checks(self) -> None:
        """The checks block becomes a closed-form check."""
        checks = (
            "checks:\n"
            "  parameters: [g]\n"
            '  assign: ["Z.X[x] = g"]\n'
            '  expect: ["L.u[x] = u[x]/g"]\n'
        )
        spec = parse_problem(_case(checks))
        check = build_checks(spec)
        assert check is not None
        assert check.parameters == (Symbol("g"),)
        assert check.assignments == ((Symbol("Z.X[x]"), Symbol("g")),)
        assert build_checks(parse_problem(_case(""))) is None
