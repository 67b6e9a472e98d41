from abc import ABC, abstractmethod
from dataclasses import dataclass, field, fields
from typing import Any, ClassVar, Dict, List, Optional, Type

from jetframe._core.utils.logger import get_logger, info
from jetframe.cli.spec_parser import (
    ProblemSpec,
    build_checks,
    build_problem,
    build_script,
    parse_generators,
    task_bindings,
    task_generators,
    task_symbols,
)
from jetframe.det_systems.analysis import groupoid_dim, quasi_horizontal, system_order
from jetframe.det_systems.freeness import freeness_implies_qh, persistence_check
from jetframe.expr_kernel.kernel import serialize
from jetframe.expr_kernel.symbols import SymKind
from jetframe.expr_kernel.zero_test import is_zero
from jetframe.invariant_counting.bounds import (
    BoundReport,
    minimal_set_size_polyshift,
    polyshift_dim,
)
from jetframe.invariant_counting.polyshift import verify_invariance_polyshift
from jetframe.involutivity.cartan import cartan_analysis
from jetframe.involutivity.tableau import TableauInput
from jetframe.jet_space.prolong import prolong
from jetframe.moving_frame.problem import Problem
from jetframe.moving_frame.script import run_script
from jetframe.moving_frame.state import FrameState
from jetframe.moving_frame.structure import (
    express_in_source,
    generating_invariants,
    structure_equations,
)

logger = get_logger(__name__)


@dataclass
class TaskConfig:
    """Base class for task parameters (the ``task`` block without ``kind``)."""

    pass


@dataclass
class ProlongTaskConfig(TaskConfig):
    order: int = 1
    jets: Optional[List[str]] = None
    compare: Dict[str, Any] = field(default_factory=dict)
    use_action: bool = False


@dataclass
class FrameTaskConfig(TaskConfig):
    structure: Optional[List[str]] = None
    generators: bool = False
    check: bool = True


@dataclass
class CartanTaskConfig(TaskConfig):
    order: int = 2
    tableau: Dict[str, Any] = field(default_factory=dict)


@dataclass
class DetAnalyzeTaskConfig(TaskConfig):
    order: Optional[int] = None
    dims: Optional[List[int]] = None
    normalizations: Optional[List[str]] = None
    section: Dict[str, Any] = field(default_factory=dict)
    persistence: Optional[List[str]] = None


@dataclass
class BoundsTaskConfig(TaskConfig):
    qstar: Optional[int] = None
    polyshift: Optional[Dict[str, int]] = None


class Task(ABC):
    """
    One subcommand: turns a parsed case into a JSON-ready report.

    Attributes:
        name (str): Subcommand and ``task.kind`` value.
        ConfigClass (Type[TaskConfig]): Dataclass validating the task block.
    """

    name: ClassVar[str]
    ConfigClass: ClassVar[Type[TaskConfig]]

    def __init__(self, params: Dict[str, Any]) -> None:
        """
        Raises:
            ValueError: If ``params`` does not match ``ConfigClass``.
        """
        self.config = self._normalize_config(params)

    def _normalize_config(self, params: Dict[str, Any]) -> Any:
        try:
            return self.ConfigClass(**params)
        except TypeError as e:
            raise ValueError(f"Invalid parameters for task '{self.name}': {e}") from e

    @classmethod
    def accepts(cls, key: str) -> bool:
        return any(f.name == key for f in fields(cls.ConfigClass))

    @abstractmethod
    def run(self, spec: ProblemSpec) -> Dict[str, Any]: ...

    def describe(self, report: Dict[str, Any]) -> str:
        """Human-readable rendering; ``key: value`` lines by default."""
        return "\n".join(f"{k}: {_text(v)}" for k, v in sorted(report.items()))


def _text(value: Any) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if value is None:
        return "none"
    return str(value)


def _frame(spec: ProblemSpec, problem: Problem) -> FrameState:
    state, _ = run_script(problem, build_script(spec, problem))
    return state


class ProlongTask(Task):
    name = "prolong"
    ConfigClass = ProlongTaskConfig

    def run(self, spec: ProblemSpec) -> Dict[str, Any]:
        c = self.config
        problem = build_problem(spec)
        t = problem.action if c.use_action else problem.transformation
        if t is None:
            raise ValueError("The case declares no explicit action")
        space = problem.space
        if c.jets is None:
            jets = [jet for k in range(1, int(c.order) + 1) for jet in space.jets(k)]
        else:
            jets = []
            for s in task_symbols(spec, "jets", SymKind.JET, "a jet coordinate"):
                parsed = space.jet_info(s)
                if parsed is None:
                    raise ValueError(f"{s} is not a jet of the case's space")
                jets.append(parsed)
        action = prolong(t, int(c.order))
        lifted = {space.jet(*jet).name: action.value(*jet) for jet in jets}
        report: Dict[str, Any] = {
            "order": int(c.order),
            "lifted": {name: serialize(e) for name, e in sorted(lifted.items())},
        }
        if c.compare:
            expected = task_bindings(spec, "compare")
            report["matches"] = {
                s.name: is_zero(lifted[s.name] - e) if s.name in lifted else False
                for s, e in sorted(expected.items(), key=lambda item: item[0].name)
            }
        return report

    def describe(self, report: Dict[str, Any]) -> str:
        lines = [f"{name} -> {value}" for name, value in report["lifted"].items()]
        for name, ok in report.get("matches", {}).items():
            lines.append(f"{name} matches: {_text(ok)}")
        return "\n".join(lines)


class FrameTask(Task):
    name = "frame"
    ConfigClass = FrameTaskConfig

    def run(self, spec: ProblemSpec) -> Dict[str, Any]:
        c = self.config
        problem = build_problem(spec)
        state, frame_report = run_script(problem, build_script(spec, problem))
        report: Dict[str, Any] = {"frame": frame_report.to_dict()}
        if c.structure is not None:
            generators = task_generators(spec, "structure", problem.groupoid)
            equations = structure_equations(state, generators)
            report["structure"] = {g.label: f.serialize() for g, f in equations.items()}
        if c.generators:
            found = generating_invariants(state)
            report["generators"] = [serialize(e) for e in found]
            if problem.symbolic:
                report["generators_in_source"] = [
                    serialize(express_in_source(state, e)) for e in found
                ]
        check = build_checks(spec, problem) if c.check else None
        if check is not None:
            report["checks"] = check.run().to_dict()
        return report

    def describe(self, report: Dict[str, Any]) -> str:
        frame = report["frame"]
        lines = [f"normalized: {n}" for n in frame["normalizations"]]
        lines += [f"{g} = {f}" for g, f in frame["substitutions"].items()]
        lines.append(
            "free parameters: "
            + ", ".join(f"{k}: {v}" for k, v in frame["free_parameters_by_order"].items())
        )
        if frame["residual"]:
            lines.append("residual: " + ", ".join(frame["residual"]))
        for g, f in report.get("structure", {}).items():
            lines.append(f"d{g} = {f}")
        if "generators" in report:
            lines.append("generators: " + ", ".join(report["generators"]))
        if "generators_in_source" in report:
            lines.append("in source jets: " + ", ".join(report["generators_in_source"]))
        for v in report.get("checks", {}).get("verdicts", []):
            ratio = f" (ratio {v['ratio']})" if v["ratio"] else ""
            lines.append(f"check {v['invariant']}: {v['status']}{ratio}")
        return "\n".join(lines)


class CartanTask(Task):
    name = "cartan"
    ConfigClass = CartanTaskConfig

    def run(self, spec: ProblemSpec) -> Dict[str, Any]:
        c = self.config
        problem = build_problem(spec)
        state = _frame(spec, problem)
        groupoid = problem.groupoid
        unknown = [k for k in c.tableau if k not in ("equations", "directions", "free")]
        if unknown:
            raise ValueError(f"Unknown tableau keys {unknown}")
        tableau = TableauInput.from_state(
            state,
            parse_generators(spec, c.tableau.get("equations"), groupoid),
            parse_generators(spec, c.tableau.get("directions"), groupoid),
            parse_generators(spec, c.tableau.get("free"), groupoid),
        )
        report = cartan_analysis(state, int(c.order), tableau)
        return {
            **report.to_dict(),
            "order": int(c.order),
            "tableau": {
                "directions": [g.label for g in tableau.directions],
                "free": [g.label for g in tableau.free],
                "equations": len(tableau.equations),
            },
        }

    def describe(self, report: Dict[str, Any]) -> str:
        relation = (
            "=" if report["involutive"] else ("<" if report["r"] < report["sum_k_k_sk"] else ">")
        )
        return (
            f"characters: {report['characters']}\n"
            f"r^({report['order']}) = {report['r']} {relation} {report['sum_k_k_sk']}\n"
            f"involutive: {_text(report['involutive'])}"
        )


class DetAnalyzeTask(Task):
    name = "det-analyze"
    ConfigClass = DetAnalyzeTaskConfig

    def run(self, spec: ProblemSpec) -> Dict[str, Any]:
        c = self.config
        system = build_problem(spec).system
        t_star = system_order(system)
        qh, r = quasi_horizontal(system)
        report: Dict[str, Any] = {
            "order": t_star,
            "quasi_horizontal": qh,
            "horizontal_order": r,
        }
        orders = c.dims if c.dims is not None else list(range(system.t_max + 1))
        report["groupoid_dims"] = {str(q): groupoid_dim(system, int(q)) for q in orders}
        if c.normalizations is not None:
            q = int(c.order if c.order is not None else system.t_max - 1)
            targets = task_symbols(spec, "normalizations", SymKind.LIFTED, "a lifted invariant")
            section = task_bindings(spec, "section")
            report["freeness_order"] = q
            report["freeness_implies_qh"] = freeness_implies_qh(system, targets, q, section)
            if c.persistence is not None:
                normals = task_symbols(spec, "persistence", SymKind.LIFTED, "a lifted invariant")
                report["persistence"] = persistence_check(system, normals, q)
        info(logger, f"Pseudo-group order {t_star}, quasi-horizontal: {qh}")
        return report


class BoundsTask(Task):
    name = "bounds"
    ConfigClass = BoundsTaskConfig

    def run(self, spec: ProblemSpec) -> Dict[str, Any]:
        c = self.config
        if c.polyshift is None:
            problem = build_problem(spec)
            return BoundReport.from_frame(_frame(spec, problem), c.qstar).to_dict()
        n, m, d = (int(c.polyshift[k]) for k in ("n", "m", "d"))
        qstar = c.qstar if c.qstar is not None else d
        report = BoundReport.compute(n, m, d + 2, polyshift_dim(n, m, d), qstar).to_dict()
        invariance = verify_invariance_polyshift(n, m, d)
        report["minimal_set_size"] = minimal_set_size_polyshift(n, m, d)
        report["invariance_verified"] = invariance.invariant
        report["non_invariant_witness"] = invariance.witness
        return report


class TaskFactory:
    """Builds tasks from ``{"type": ..., "params": {...}}`` mappings."""

    _REGISTRY: Dict[str, Type[Task]] = {
        t.name: t for t in (ProlongTask, FrameTask, CartanTask, DetAnalyzeTask, BoundsTask)
    }

    @classmethod
    def build_task(cls, task_config: Dict[str, Any]) -> Task:
        """
        Raises:
            ValueError: If the type is missing or not registered.
        """
        task_type = task_config.get("type")
        if not task_type:
            raise ValueError("Task config must include a 'type' key")
        task_cls = cls._REGISTRY.get(task_type)
        if not task_cls:
            raise ValueError(f"No task registered for type '{task_type}'")
        return task_cls(task_config.get("params") or {})

    @classmethod
    def task_class(cls, task_type: str) -> Type[Task]:
        task_cls = cls._REGISTRY.get(task_type)
        if not task_cls:
            raise ValueError(f"No task registered for type '{task_type}'")
        return task_cls


def task_for(spec: ProblemSpec, kind: Optional[str] = None, order: Optional[int] = None) -> Task:
    """
    The task a case asks for, or ``kind`` with the case's task parameters.

    ``order`` overrides the task's ``order`` parameter when it has one.
    """
    kind = kind or spec.kind
    params = {k: v for k, v in spec.task.items() if k != "kind"}
    if order is not None and TaskFactory.task_class(kind).accepts("order"):
        params["order"] = order
    if kind != spec.kind:
        params = {k: v for k, v in params.items() if TaskFactory.task_class(kind).accepts(k)}
    return TaskFactory.build_task({"type": kind, "params": params})


def run(spec: ProblemSpec, kind: Optional[str] = None, order: Optional[int] = None) -> Dict[str, Any]:
    """Dispatch a parsed case to its task and return the report."""
    return task_for(spec, kind, order).run(spec)
