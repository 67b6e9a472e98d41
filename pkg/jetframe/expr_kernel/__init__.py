from .assumptions import AssumptionSet
from .kernel import diff, eval_rational, normalize, ordered_symbols, serialize, substitute
from .parser import Scope, parse_equation, parse_expr, parse_symbol
from .symbols import SymKind, sym_info
from .zero_test import find_nonzero_witness, is_zero

__all__ = [
    "AssumptionSet",
    "Scope",
    "SymKind",
    "diff",
    "eval_rational",
    "find_nonzero_witness",
    "is_zero",
    "normalize",
    "ordered_symbols",
    "parse_equation",
    "parse_expr",
    "parse_symbol",
    "serialize",
    "substitute",
    "sym_info",
]
