from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, ClassVar, Dict, List, Optional, Type

from sympy import Expr, Integer, Symbol

from jetframe.exterior_forms.generators import Generator
from jetframe.moving_frame.state import FrameState, Solve, normalize
from jetframe.moving_frame.structure import sweep


@dataclass
class DirectiveConfig:
    """
    Base class for directive parameters.

    Concrete directives declare a dataclass inheriting from this one; its
    fields are the already parsed arguments of the directive.
    """

    pass


@dataclass
class NormalizeConfig(DirectiveConfig):
    invariant: Symbol
    value: Expr = field(default_factory=lambda: Integer(0))
    solve: Solve = None


@dataclass
class AssumeConfig(DirectiveConfig):
    nonzero: Optional[Expr] = None
    positive: Optional[Expr] = None


@dataclass
class ProlongConfig(DirectiveConfig):
    order: int


@dataclass
class SweepConfig(DirectiveConfig):
    equations: Optional[List[Generator]] = None
    order: int = 1
    keep: List[Generator] = field(default_factory=list)
    value: Expr = field(default_factory=lambda: Integer(0))
    conditions: bool = False


class Directive(ABC):
    """
    One step of a frame script.

    Attributes:
        name (str): Directive keyword in case files.
        ConfigClass (Type[DirectiveConfig]): Dataclass validating the
            directive's parameters.
        config (DirectiveConfig): The validated parameters.
    """

    name: ClassVar[str]
    ConfigClass: ClassVar[Type[DirectiveConfig]]

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
            raise ValueError(f"Invalid parameters for '{self.name}': {e}") from e

    @abstractmethod
    def apply(self, state: FrameState) -> FrameState: ...

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.config})"


class NormalizeDirective(Directive):
    name = "normalize"
    ConfigClass = NormalizeConfig

    def apply(self, state: FrameState) -> FrameState:
        c = self.config
        return normalize(state, c.invariant, c.value, c.solve)


class AssumeDirective(Directive):
    name = "assume"
    ConfigClass = AssumeConfig

    def _normalize_config(self, params: Dict[str, Any]) -> Any:
        config = super()._normalize_config(params)
        if config.nonzero is None and config.positive is None:
            raise ValueError("'assume' needs 'nonzero' or 'positive'")
        return config

    def apply(self, state: FrameState) -> FrameState:
        return state.assume(self.config.nonzero, self.config.positive)


class ProlongDirective(Directive):
    name = "prolong"
    ConfigClass = ProlongConfig

    def apply(self, state: FrameState) -> FrameState:
        return state.prolonged(int(self.config.order))


class SweepDirective(Directive):
    name = "sweep"
    ConfigClass = SweepConfig

    def apply(self, state: FrameState) -> FrameState:
        c = self.config
        return sweep(state, c.equations, int(c.order), c.keep, c.value, bool(c.conditions))


class DirectiveFactory:
    """Builds directives from ``{"type": ..., "params": {...}}`` mappings."""

    _REGISTRY: Dict[str, Type[Directive]] = {
        d.name: d
        for d in (NormalizeDirective, AssumeDirective, ProlongDirective, SweepDirective)
    }

    @classmethod
    def build_directive(cls, directive_config: Dict[str, Any]) -> Directive:
        """
        Raises:
            ValueError: If the type is missing or not registered.
        """
        directive_type = directive_config.get("type")
        if not directive_type:
            raise ValueError("Directive config must include a 'type' key")
        directive_cls = cls._REGISTRY.get(directive_type)
        if not directive_cls:
            raise ValueError(f"No directive registered for type '{directive_type}'")
        return directive_cls(directive_config.get("params") or {})
