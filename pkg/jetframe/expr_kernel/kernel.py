"""Canonical form, differentiation, substitution, evaluation and printing
of exact rational-function expressions."""

from typing import Any, List, Mapping, Optional

from sympy import Expr, Rational, Symbol, cancel, nan, oo, preorder_traversal, sstr
from sympy import diff as sympy_diff
from sympy import sympify, zoo

from jetframe._core.errors import DivisionByZero, UnboundSymbol
from jetframe._core.settings.loader import setting
from jetframe.expr_kernel.symbols import sort_key

_INFINITIES = (zoo, nan, oo, -oo)


def _has_infinity(e: Expr) -> bool:
    return any(e.has(value) for value in _INFINITIES)


def node_count(e: Expr, limit: Optional[int] = None) -> int:
    """Number of nodes in the tree, counting stops once ``limit`` is passed."""
    count = 0
    for _ in preorder_traversal(e):
        count += 1
        if limit is not None and count > limit:
            break
    return count


def normalize(e: Any, max_nodes: Optional[int] = None) -> Expr:
    """
    Bring an expression into canonical numerator/denominator form.

    Numerator and denominator are expanded polynomials without common
    factors. Expressions above the node budget are returned unchanged
    (their equality is then decided by :func:`is_zero` sampling).

    Args:
        e: Anything sympy can sympify.
        max_nodes (Optional[int]): Node budget, defaults to the
            ``max_nodes`` setting.

    Returns:
        Expr: The canonical form.

    Raises:
        DivisionByZero: If a denominator is identically zero.
    """
    expr = sympify(e)
    if _has_infinity(expr):
        raise DivisionByZero(expr)
    if expr.is_Atom:
        return expr
    budget = int(setting("max_nodes", max_nodes))
    if node_count(expr, budget) > budget:
        return expr
    result = cancel(expr)
    if _has_infinity(result):
        raise DivisionByZero(expr)
    return result


def diff(e: Any, s: Symbol) -> Expr:
    """Partial derivative, every symbol treated as independent."""
    return sympy_diff(sympify(e), s)


def substitute(e: Any, bindings: Mapping[Symbol, Any]) -> Expr:
    """Simultaneous substitution followed by :func:`normalize`."""
    replaced = sympify(e).xreplace({k: sympify(v) for k, v in bindings.items()})
    return normalize(replaced)


def eval_rational(e: Any, point: Mapping[Symbol, Any]) -> Rational:
    """
    Evaluate an expression exactly at a rational point.

    Raises:
        UnboundSymbol: If the point misses a symbol of ``e``.
        DivisionByZero: If a denominator vanishes at the point.
    """
    expr = sympify(e)
    missing = [s for s in expr.free_symbols if s not in point]
    if missing:
        raise UnboundSymbol(sorted((s.name for s in missing)))
    value = expr.xreplace({s: Rational(point[s]) for s in expr.free_symbols})
    if _has_infinity(value):
        raise DivisionByZero(expr)
    if not value.is_Rational:
        value = cancel(value)
        if _has_infinity(value):
            raise DivisionByZero(expr)
    return Rational(value)


def serialize(e: Any) -> str:
    """Print the canonical form in the jet grammar (``^`` for powers)."""
    expr = normalize(e)
    text = sstr(expr, order="lex")
    return text.replace("**", "^")


def ordered_symbols(e: Any) -> List[Symbol]:
    return sorted(sympify(e).free_symbols, key=sort_key)
