from typing import Any, Mapping, Optional, Sequence


class JetframeError(Exception):
    """Base class of every error raised by jetframe."""


class AnalysisError(JetframeError):
    """A computation could not be carried out on valid input."""


class InputError(JetframeError):
    """A case file or expression could not be read."""


class DivisionByZero(AnalysisError):
    def __init__(self, expr: Any = None) -> None:
        self.expr = expr
        where = f" in {expr}" if expr is not None else ""
        super().__init__(f"Division by zero{where}")


class SamplingExhausted(AnalysisError):
    def __init__(self, draws: int) -> None:
        self.draws = draws
        super().__init__(
            f"No sample point satisfying the assumptions found in {draws} draws"
        )


class UnboundSymbol(AnalysisError):
    def __init__(self, names: Sequence[str]) -> None:
        self.names = tuple(names)
        super().__init__(f"Unbound symbols: {', '.join(self.names)}")


class OrderOverflow(AnalysisError):
    def __init__(self, needed: int, available: int) -> None:
        self.needed = needed
        self.available = available
        super().__init__(
            f"Order {needed} needed but jets are truncated at order {available}"
        )


class SingularJacobian(AnalysisError):
    def __init__(self, determinant: Any = None) -> None:
        self.determinant = determinant
        super().__init__(f"Total Jacobian is singular (determinant {determinant})")


class MissingRule(AnalysisError):
    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(f"No exterior derivative rule for '{name}'")


class NotSolvable(AnalysisError):
    pass


class AmbiguousSolve(AnalysisError):
    def __init__(self, invariant: str, candidates: Sequence[str]) -> None:
        self.invariant = invariant
        self.candidates = tuple(candidates)
        super().__init__(
            f"Normalizing {invariant} can solve for any of "
            f"{', '.join(self.candidates)}; name one with 'solve'"
        )


class MissingLinearization(AnalysisError):
    pass


class IncompleteFrame(AnalysisError):
    pass


class MonotonicityViolation(AnalysisError):
    def __init__(self, characters: Sequence[int]) -> None:
        self.characters = tuple(characters)
        super().__init__(f"Characters are not non-increasing: {list(characters)}")


class InconsistentSystem(AnalysisError):
    def __init__(self, jet: str, first: Any, second: Any) -> None:
        self.jet = jet
        self.first = first
        self.second = second
        super().__init__(f"Two different solved forms for {jet}: {first} and {second}")


class Undetermined(AnalysisError):
    pass


class RankDeficient(AnalysisError):
    def __init__(
        self,
        block: str,
        rank: int,
        expected: int,
        witnesses: Optional[Sequence[Mapping[str, str]]] = None,
    ) -> None:
        self.block = block
        self.rank = rank
        self.expected = expected
        self.witnesses = list(witnesses or [])
        super().__init__(f"Block '{block}' has rank {rank}, expected {expected}")


class NegativeBound(AnalysisError):
    def __init__(self, name: str, value: int) -> None:
        self.name = name
        self.value = value
        super().__init__(f"Bound {name} would be negative ({value})")


class ScriptError(AnalysisError):
    def __init__(self, index: int, directive: str, cause: JetframeError) -> None:
        self.index = index
        self.directive = directive
        self.cause = cause
        super().__init__(f"Directive {index} ({directive}) failed: {cause}")


class ParseError(InputError):
    def __init__(self, line: int, col: int, expected: str, found: str = "") -> None:
        self.line = line
        self.col = col
        self.expected = expected
        self.found = found
        got = f", found {found!r}" if found else ""
        super().__init__(f"line {line}, column {col}: expected {expected}{got}")


class UndeclaredSymbol(InputError):
    def __init__(self, name: str, line: int, col: int) -> None:
        self.name = name
        self.line = line
        self.col = col
        super().__init__(f"line {line}, column {col}: undeclared symbol '{name}'")
