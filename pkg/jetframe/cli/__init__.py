from .runner import Task, TaskFactory, run, task_for
from .spec_parser import ProblemSpec, build_checks, build_problem, build_script, parse_problem

__all__ = [
    "ProblemSpec",
    "Task",
    "TaskFactory",
    "build_checks",
    "build_problem",
    "build_script",
    "parse_problem",
    "run",
    "task_for",
]
