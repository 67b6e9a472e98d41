"""
Problem-specification case files.

A case holds the blocks ``space``, ``group``, ``frame``, ``task`` and
``options`` and an optional ``checks`` block. It is written either as a YAML
document with one top-level key per block or, in ``.case`` files, as
``[block]`` sections whose bodies are the YAML values of those keys.
Expressions inside it use the jet grammar; their parse errors are reported at
the line and column of the case text.
"""

import re
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import yaml
from sympy import Expr, Integer, Symbol

from jetframe._core.errors import ParseError
from jetframe.det_systems.system import DeterminingSystem, Equation
from jetframe.expr_kernel.assumptions import AssumptionSet
from jetframe.expr_kernel.parser import Scope, parse_equation, parse_expr, parse_symbol
from jetframe.expr_kernel.symbols import SymKind, base_symbol, sym_info
from jetframe.exterior_forms.generators import Generator, generator_from_label, maurer_cartan
from jetframe.jet_space.groupoid import GroupoidSpace
from jetframe.jet_space.space import JetSpace
from jetframe.jet_space.transformation import PointTransformation
from jetframe.moving_frame.closed_forms import ClosedFormCheck
from jetframe.moving_frame.directives import Directive, DirectiveFactory
from jetframe.moving_frame.problem import Problem
from jetframe.moving_frame.state import SOLVE_NONE, AutoSolve, Solve

TASK_KINDS = ("prolong", "frame", "cartan", "det-analyze", "bounds")
OPTION_KEYS = ("seed", "trials", "max_nodes", "order")
_BLOCKS = ("space", "group", "frame", "task", "options", "checks")


class _Text(str):
    """A YAML string remembering where its content starts."""

    line: int = 1
    col: int = 1


class _LocatingLoader(yaml.SafeLoader):
    column_shift: int = 0


def _construct_text(loader: _LocatingLoader, node: yaml.ScalarNode) -> _Text:
    text = _Text(loader.construct_scalar(node))
    text.line = node.start_mark.line + 1
    quoted = 1 if node.style in ("'", '"') else 0
    text.col = max(1, node.start_mark.column + 1 + quoted - loader.column_shift)
    return text


_LocatingLoader.add_constructor("tag:yaml.org,2002:str", _construct_text)


def _position(value: Any) -> Tuple[int, int]:
    return getattr(value, "line", 1), getattr(value, "col", 1)


def _plain(value: Any) -> Any:
    """Strip position information, leaving YAML-safe builtins."""
    if isinstance(value, str):
        return str(value)
    if isinstance(value, Mapping):
        return {_plain(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def _require(block: Mapping[str, Any], key: str, where: str) -> Any:
    if key not in block or block[key] is None:
        raise ValueError(f"'{where}' block must contain '{key}' key")
    return block[key]


def _names(value: Any, where: str) -> Tuple[str, ...]:
    if isinstance(value, str):
        value = [value]
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise ValueError(f"'{where}' must be a list of names")
    return tuple(str(v) for v in value)


@dataclass(frozen=True)
class ProblemSpec:
    """
    A parsed case file.

    The blocks are kept as plain mappings, so that :meth:`dump` reproduces a
    document that parses to an equal spec.
    """

    space: Dict[str, Any]
    group: Dict[str, Any]
    task: Dict[str, Any]
    frame: List[Dict[str, Any]] = field(default_factory=list)
    options: Dict[str, Any] = field(default_factory=dict)
    checks: Optional[Dict[str, Any]] = None

    @property
    def independent(self) -> Tuple[str, ...]:
        return _names(self.space["independent"], "space.independent")

    @property
    def dependent(self) -> Tuple[str, ...]:
        return _names(self.space["dependent"], "space.dependent")

    @property
    def base_variables(self) -> Tuple[str, ...]:
        return self.independent + self.dependent

    @property
    def n(self) -> int:
        return len(self.independent)

    @property
    def m(self) -> int:
        return len(self.dependent)

    @property
    def kind(self) -> str:
        return str(self.task["kind"])

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "space": self.space,
            "group": self.group,
            "frame": self.frame,
            "task": self.task,
            "options": self.options,
        }
        if self.checks is not None:
            data["checks"] = self.checks
        return _plain(data)

    def dump(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False, default_flow_style=False)

    def dump_sections(self) -> str:
        """The case as ``[block]`` sections, the layout of ``.case`` files."""
        parts = []
        for name, value in self.to_dict().items():
            body = yaml.safe_dump(value, sort_keys=False, default_flow_style=False)
            parts.append(f"[{name}]\n{body if value else ''}")
        return "".join(parts)


_SECTION = re.compile(r"^\[(?P<name>[A-Za-z_][\w-]*)\]\s*(#.*)?$")
_SECTION_INDENT = "  "


def _is_sectioned(text: str) -> bool:
    for line in text.splitlines():
        stripped = line.strip()
        if stripped and not stripped.startswith("#"):
            return _SECTION.match(line.rstrip()) is not None
    return False


def _sections_to_yaml(text: str) -> str:
    """
    Rewrite ``[block]`` sections as YAML top-level keys.

    A header becomes ``block:`` on the same line and its body is indented
    under it, so lines keep their numbers and columns move right by the
    indent width.
    """
    lines: List[str] = []
    seen: Dict[str, int] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        header = _SECTION.match(line.rstrip())
        if header:
            name = header.group("name")
            if name in seen:
                repeat = f"a repeat of line {seen[name]}"
                raise ParseError(number, 2, f"one [{name}] section", repeat)
            seen[name] = number
            lines.append(f"{name}:")
        else:
            lines.append(_SECTION_INDENT + line if line.strip() else line)
    return "\n".join(lines) + "\n"


def _load_yaml(text: str, shift: int = 0) -> Dict[str, Any]:
    loader = _LocatingLoader(text)
    loader.column_shift = shift
    try:
        raw = loader.get_single_data()
    except yaml.MarkedYAMLError as e:
        mark = e.problem_mark
        line, col = (1, 1)
        if mark is not None:
            line, col = mark.line + 1, max(1, mark.column + 1 - shift)
        raise ParseError(line, col, e.problem or "valid YAML") from e
    except yaml.YAMLError as e:
        raise ParseError(1, 1, "valid YAML", str(e)) from e
    finally:
        loader.dispose()
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ParseError(1, 1, "a mapping of blocks", type(raw).__name__)
    return raw


def parse_problem(text: str) -> ProblemSpec:
    """
    Parse and validate a case file.

    Every expression, directive and check is built once, so that errors
    surface here with their positions.

    Args:
        text (str): The case text, YAML or ``[block]`` sections.

    Returns:
        ProblemSpec: The parsed case.

    Raises:
        ParseError: On malformed YAML or jet-grammar text.
        UndeclaredSymbol: On names the case does not declare.
        ValueError: On missing keys or inconsistent blocks.
    """
    if _is_sectioned(text):
        raw = _load_yaml(_sections_to_yaml(text), len(_SECTION_INDENT))
    else:
        raw = _load_yaml(text)
    unknown = [k for k in raw if k not in _BLOCKS]
    if unknown:
        line, col = _position(unknown[0])
        raise ParseError(line, col, f"one of {', '.join(_BLOCKS)}", str(unknown[0]))
    for key in ("space", "group", "task"):
        if not isinstance(raw.get(key), dict):
            raise ValueError(f"Case must contain a '{key}' mapping")
    frame = raw.get("frame") or []
    if not isinstance(frame, list):
        raise ValueError("'frame' must be a list of directives")
    options = raw.get("options") or {}
    _check_options(options)
    _check_task(raw["task"])
    checks = raw.get("checks")
    if checks is not None and not isinstance(checks, dict):
        raise ValueError("'checks' must be a mapping")

    problem = _build_problem(raw["space"], raw["group"])
    _build_script(frame, problem, raw["space"], raw["group"])
    if checks is not None:
        _build_checks(checks, problem, raw["space"], raw["group"])

    return ProblemSpec(
        space=_plain(raw["space"]),
        group=_plain(raw["group"]),
        task=_plain(raw["task"]),
        frame=_plain(frame),
        options=_plain(options),
        checks=_plain(checks),
    )


def _check_options(options: Any) -> None:
    if not isinstance(options, dict):
        raise ValueError("'options' must be a mapping")
    for key, value in options.items():
        if key not in OPTION_KEYS:
            line, col = _position(key)
            raise ParseError(line, col, f"one of {', '.join(OPTION_KEYS)}", str(key))
        if not isinstance(value, int) or isinstance(value, bool):
            raise ValueError(f"Option '{key}' must be an integer")


def _check_task(task: Dict[str, Any]) -> None:
    kind = _require(task, "kind", "task")
    if kind not in TASK_KINDS:
        line, col = _position(kind)
        raise ParseError(line, col, f"one of {', '.join(TASK_KINDS)}", str(kind))


def _integers(space: Mapping[str, Any]) -> Dict[str, int]:
    parameters = space.get("parameters") or {}
    if not isinstance(parameters, dict):
        raise ValueError("'space.parameters' must map names to integers")
    for name, value in parameters.items():
        if not isinstance(value, int) or isinstance(value, bool):
            raise ValueError(f"Parameter '{name}' must be an integer")
    return {str(k): int(v) for k, v in parameters.items()}


def _components(
    space: Mapping[str, Any], group: Mapping[str, Any]
) -> Tuple[Tuple[str, ...], Tuple[str, ...], Tuple[str, ...]]:
    independent = _names(_require(space, "independent", "space"), "space.independent")
    dependent = _names(_require(space, "dependent", "space"), "space.dependent")
    variables = independent + dependent
    targets = group.get("targets") or {v: v.upper() for v in variables}
    missing = [v for v in variables if v not in targets]
    if missing:
        raise ValueError(f"'group.targets' has no component for {missing}")
    return independent, dependent, tuple(str(targets[v]) for v in variables)


def _depends(group: Mapping[str, Any], components: Sequence[str]) -> Dict[str, Tuple[str, ...]]:
    depends = group.get("depends") or {}
    unknown = [c for c in depends if c not in components]
    if unknown:
        line, col = _position(unknown[0])
        raise ParseError(line, col, "a declared target component", str(unknown[0]))
    return {str(c): _names(v, f"group.depends.{c}") for c, v in depends.items()}


def _scope(
    space: Mapping[str, Any],
    group: Mapping[str, Any],
    extra_parameters: Sequence[str] = (),
    allow_group: bool = True,
    allow_lifted: bool = True,
) -> Scope:
    independent, dependent, components = _components(space, group)
    parameters = _names(group.get("group_parameters") or [], "group.group_parameters")
    return Scope(
        independent=independent,
        dependent=dependent,
        components=components,
        depends=_depends(group, components),
        integers=_integers(space),
        parameters=parameters + tuple(extra_parameters),
        allow_group=allow_group,
        allow_lifted=allow_lifted,
    )


def _expr(value: Any, scope: Scope) -> Expr:
    if isinstance(value, bool):
        raise ValueError(f"Expected an expression, got {value}")
    if isinstance(value, int):
        return Integer(value)
    if isinstance(value, str):
        line, col = _position(value)
        return parse_expr(str(value), scope, line, col)
    raise ValueError(f"Expected an expression, got {value!r}")


def _symbol(value: Any, scope: Scope, kind: SymKind, expected: str) -> Symbol:
    if not isinstance(value, str):
        raise ValueError(f"Expected {expected}, got {value!r}")
    line, col = _position(value)
    symbol = parse_symbol(str(value), scope, line, col)
    if sym_info(symbol).kind != kind:
        raise ParseError(line, col, expected, str(value))
    return symbol


def _groupoid(space: Mapping[str, Any], group: Mapping[str, Any]) -> GroupoidSpace:
    independent, dependent, components = _components(space, group)
    depends = _depends(group, components)
    return GroupoidSpace.over(
        independent,
        dependent,
        components,
        int(_require(group, "max_order", "group")),
        {c: list(v) for c, v in depends.items()},
    )


def _build_system(space: Mapping[str, Any], group: Mapping[str, Any]) -> DeterminingSystem:
    groupoid = _groupoid(space, group)
    scope = _scope(space, group, allow_lifted=False)
    lines = group.get("system") or []
    if not isinstance(lines, list):
        raise ValueError("'group.system' must be a list of equations")
    equations: List[Equation] = []
    for text in lines:
        if not isinstance(text, str):
            raise ValueError(f"Determining equation must be text, got {text!r}")
        line, col = _position(text)
        lhs, rhs = parse_equation(str(text), scope, line, col)
        if not isinstance(lhs, Symbol) or groupoid.group_jet_info(lhs) is None:
            raise ParseError(line, col, "a group jet on the left-hand side", str(text))
        equations.append(Equation(lhs, rhs))
    t_max = int(group.get("t_max", groupoid.max_order))
    return DeterminingSystem(groupoid, tuple(equations), t_max)


def _build_action(
    space: JetSpace, groupoid: GroupoidSpace, s: Mapping[str, Any], group: Mapping[str, Any]
) -> Optional[PointTransformation]:
    action = group.get("action")
    if action is None:
        return None
    scope = _scope(s, group, allow_group=False, allow_lifted=False)
    targets: Dict[str, Expr] = {}
    for component, text in action.items():
        if component not in groupoid.components:
            line, col = _position(component)
            raise ParseError(line, col, "a declared target component", str(component))
        variable = groupoid.variables[groupoid.components.index(component)]
        targets[variable] = _expr(text, scope)
    return PointTransformation.explicit(
        space, targets, [base_symbol(p) for p in scope.parameters]
    )


def _build_problem(space_block: Mapping[str, Any], group: Mapping[str, Any]) -> Problem:
    system = _build_system(space_block, group)
    q = int(_require(space_block, "max_order", "space"))
    space = system.jet_space(q)
    action = _build_action(space, system.groupoid, space_block, group)
    symbolic = bool(group.get("symbolic", False))
    lift = group.get("lift")
    if lift is None:
        return Problem.symbolic_form(system, q, action, symbolic)
    transformation = PointTransformation.lifted(
        space,
        system.groupoid,
        _names(_require(lift, "independent", "group.lift"), "group.lift.independent"),
        _names(_require(lift, "dependent", "group.lift"), "group.lift.dependent"),
        {str(k): str(v) for k, v in _require(lift, "derived", "group.lift").items()},
    )
    return Problem(space, system, transformation, action, symbolic)


def _generator(value: Any, scope: Scope, groupoid: GroupoidSpace) -> Generator:
    """A form given by label (``mu.P[y]``, ``w.x``) or by group jet (``Z.P[y]``)."""
    if isinstance(value, str) and value.strip().startswith(("mu.", "w.")):
        return generator_from_label(groupoid, str(value))
    jet = _symbol(value, scope, SymKind.GROUP, "a group jet")
    column = groupoid.group_jet_info(jet)
    if column is None:
        line, col = _position(value)
        raise ParseError(line, col, "a group jet of the pseudo-group", str(value))
    return maurer_cartan(groupoid, *column)


def _solve(value: Any, scope: Scope, groupoid: GroupoidSpace) -> Solve:
    if value is None:
        return None
    if isinstance(value, str) and value.strip() == SOLVE_NONE:
        return SOLVE_NONE
    if isinstance(value, dict):
        order = int(_require(value, "order", "solve"))
        keep = frozenset(_generator(k, scope, groupoid) for k in value.get("keep") or [])
        return AutoSolve(order, keep)
    return _generator(value, scope, groupoid)


def _directive_params(
    name: str, params: Mapping[str, Any], scope: Scope, groupoid: GroupoidSpace
) -> Dict[str, Any]:
    parsed: Dict[str, Any] = {str(k): v for k, v in params.items()}
    if name == "normalize":
        parsed["invariant"] = _symbol(
            _require(params, "invariant", "normalize"), scope, SymKind.LIFTED, "a lifted invariant"
        )
        if "value" in params:
            parsed["value"] = _expr(params["value"], scope)
        if "solve" in params:
            parsed["solve"] = _solve(params["solve"], scope, groupoid)
    elif name == "assume":
        for key in ("nonzero", "positive"):
            if params.get(key) is not None:
                parsed[key] = _expr(params[key], scope)
    elif name == "prolong":
        parsed["order"] = int(_require(params, "order", "prolong"))
    elif name == "sweep":
        if params.get("equations") is not None:
            parsed["equations"] = [_generator(g, scope, groupoid) for g in params["equations"]]
        parsed["keep"] = [_generator(g, scope, groupoid) for g in params.get("keep") or []]
        if not isinstance(params.get("conditions", False), bool):
            raise ValueError("'sweep.conditions' must be true or false")
        if "value" in params:
            parsed["value"] = _expr(params["value"], scope)
    return parsed


def _build_script(
    frame: Sequence[Any],
    problem: Problem,
    space: Mapping[str, Any],
    group: Mapping[str, Any],
) -> List[Directive]:
    scope = _scope(space, group)
    directives: List[Directive] = []
    for entry in frame:
        if not isinstance(entry, dict) or len(entry) != 1:
            raise ValueError("Each frame directive must be a mapping with a single key")
        ((name, params),) = entry.items()
        if params is None:
            params = {}
        if not isinstance(params, dict):
            line, col = _position(name)
            raise ParseError(line, col, "a mapping of directive parameters", str(params))
        parsed = _directive_params(str(name), params, scope, problem.groupoid)
        directives.append(DirectiveFactory.build_directive({"type": str(name), "params": parsed}))
    return directives


def _pairs(
    lines: Any, scope: Scope, where: str, kind: SymKind, expected: str
) -> Tuple[Tuple[Symbol, Expr], ...]:
    if not isinstance(lines, list):
        raise ValueError(f"'{where}' must be a list of equations")
    result = []
    for text in lines:
        if not isinstance(text, str):
            raise ValueError(f"'{where}' entries must be text, got {text!r}")
        line, col = _position(text)
        lhs, rhs = parse_equation(str(text), scope, line, col)
        if not isinstance(lhs, Symbol) or sym_info(lhs).kind != kind:
            raise ParseError(line, col, expected, str(text))
        result.append((lhs, rhs))
    return tuple(result)


def _build_checks(
    checks: Mapping[str, Any],
    problem: Problem,
    space: Mapping[str, Any],
    group: Mapping[str, Any],
) -> ClosedFormCheck:
    parameters = _names(checks.get("parameters") or [], "checks.parameters")
    scope = _scope(space, group, extra_parameters=parameters)
    assumptions = AssumptionSet()
    assume = checks.get("assume") or {}
    for e in assume.get("nonzero") or []:
        assumptions = assumptions.assume_nonzero(_expr(e, scope))
    for e in assume.get("positive") or []:
        assumptions = assumptions.assume_positive(_expr(e, scope))
    return ClosedFormCheck(
        problem,
        _pairs(checks.get("assign") or [], scope, "checks.assign", SymKind.GROUP, "a group jet"),
        _pairs(
            _require(checks, "expect", "checks"),
            scope,
            "checks.expect",
            SymKind.LIFTED,
            "a lifted invariant",
        ),
        tuple(base_symbol(p) for p in parameters),
        assumptions,
        bool(checks.get("apply_system", False)),
    )


def build_problem(spec: ProblemSpec) -> Problem:
    """The pseudo-group and jet space a case describes."""
    return _build_problem(spec.space, spec.group)


def build_script(spec: ProblemSpec, problem: Optional[Problem] = None) -> List[Directive]:
    """The frame directives of a case, in order."""
    problem = problem if problem is not None else build_problem(spec)
    return _build_script(spec.frame, problem, spec.space, spec.group)


def build_checks(spec: ProblemSpec, problem: Optional[Problem] = None) -> Optional[ClosedFormCheck]:
    """The closed-form check of a case, if it declares one."""
    if spec.checks is None:
        return None
    problem = problem if problem is not None else build_problem(spec)
    return _build_checks(spec.checks, problem, spec.space, spec.group)


def task_symbols(spec: ProblemSpec, key: str, kind: SymKind, expected: str) -> List[Symbol]:
    """Symbols listed under ``task.<key>``, parsed in the case's scope."""
    scope = _scope(spec.space, spec.group)
    return [_symbol(v, scope, kind, expected) for v in spec.task.get(key) or []]


def parse_generators(
    spec: ProblemSpec, values: Optional[Sequence[Any]], groupoid: GroupoidSpace
) -> Optional[List[Generator]]:
    """Forms given by label or group jet, parsed in the case's scope; None passes through."""
    if values is None:
        return None
    scope = _scope(spec.space, spec.group)
    return [_generator(v, scope, groupoid) for v in values]


def task_generators(
    spec: ProblemSpec, key: str, groupoid: GroupoidSpace
) -> Optional[List[Generator]]:
    """Forms listed under ``task.<key>``, or None when absent."""
    return parse_generators(spec, spec.task.get(key), groupoid)


def task_bindings(spec: ProblemSpec, key: str) -> Dict[Symbol, Expr]:
    """Mapping ``task.<key>`` of symbols to parsed values."""
    scope = _scope(spec.space, spec.group)
    bindings: Dict[Symbol, Expr] = {}
    for k, v in (spec.task.get(key) or {}).items():
        bindings[parse_symbol(str(k), scope)] = _expr(v, scope)
    return bindings
