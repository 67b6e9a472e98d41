from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from sympy import Expr, Mul, Symbol, sympify
from sympy.polys.domains import QQ
from sympy.polys.rings import PolyElement, ring

from jetframe._core.errors import DivisionByZero, UnboundSymbol
from jetframe.jet_space.multiindex import MultiIndex


class TruncatedSeries:
    """
    Multivariate power series in n increments, truncated at a total degree.

    Elements are sparse polynomials over QQ in the increments ``d0..d{n-1}``
    and optional extra symbols; only the degree in the increments is
    truncated, extra symbols stay polynomial.
    """

    def __init__(self, n: int, order: int, symbols: Sequence[Symbol] = ()) -> None:
        self.n = n
        self.order = order
        self.symbols = tuple(symbols)
        increments = [Symbol(f"_d{i}") for i in range(n)]
        self.ring, *gens = ring(increments + list(self.symbols), QQ)
        self.increments: List[PolyElement] = list(gens[:n])
        self.extra: Dict[Symbol, PolyElement] = dict(zip(self.symbols, gens[n:]))

    def zero(self) -> PolyElement:
        return self.ring.zero

    def constant(self, value: Any) -> PolyElement:
        expr = sympify(value)
        if expr.is_Rational:
            return self.ring.ground_new(QQ.from_sympy(expr))
        return self.ring.from_expr(expr)

    def truncate(self, p: PolyElement, order: Optional[int] = None) -> PolyElement:
        limit = self.order if order is None else order
        n = self.n
        return self.ring({m: c for m, c in p.items() if sum(m[:n]) <= limit})

    def mul(self, a: PolyElement, b: PolyElement, order: Optional[int] = None) -> PolyElement:
        limit = self.order if order is None else order
        return self.truncate(self.truncate(a, limit) * self.truncate(b, limit), limit)

    def power(self, p: PolyElement, k: int, order: Optional[int] = None) -> PolyElement:
        if k < 0:
            return self.power(self.reciprocal(p, order), -k, order)
        result = self.ring.one
        for _ in range(k):
            result = self.mul(result, p, order)
        return result

    def head(self, p: PolyElement) -> PolyElement:
        """Part of degree 0 in the increments."""
        n = self.n
        return self.ring({m: c for m, c in p.items() if not any(m[:n])})

    def const_value(self, p: PolyElement) -> Expr:
        return sympify(self.head(p).as_expr())

    def reciprocal(self, p: PolyElement, order: Optional[int] = None) -> PolyElement:
        """1/p by the geometric series; the constant term must be a nonzero number."""
        limit = self.order if order is None else order
        head = self.head(p)
        if head.is_zero or not head.is_ground:
            raise DivisionByZero(head.as_expr())
        inverse_head = self.ring.ground_new(QQ.one / head.LC)
        tail = self.truncate(-(p - head) * inverse_head, limit)
        result = self.ring.one
        term = self.ring.one
        for _ in range(limit):
            term = self.mul(term, tail, limit)
            if term.is_zero:
                break
            result += term
        return self.truncate(result * inverse_head, limit)

    def deriv(self, p: PolyElement, i: int) -> PolyElement:
        return p.diff(self.increments[i])

    def monomial(self, index: MultiIndex) -> PolyElement:
        result = self.ring.one
        for gen, count in zip(self.increments, index.counts):
            result *= gen**count
        return result

    def coefficient(self, p: PolyElement, index: MultiIndex) -> Expr:
        """Coefficient of d^index as a sympy expression in the extra symbols."""
        n = self.n
        target = tuple(index.counts)
        total: Expr = sympify(0)
        for m, c in p.items():
            if tuple(m[:n]) != target:
                continue
            factors = [s**e for s, e in zip(self.symbols, m[n:]) if e]
            total += QQ.to_sympy(c) * Mul(*factors)
        return total

    def taylor_coefficient(self, p: PolyElement, index: MultiIndex) -> Expr:
        """index! times the coefficient: the derivative value at the center."""
        return self.coefficient(p, index) * index.factorial()

    def compose(self, p: PolyElement, inner: Sequence[PolyElement], order: Optional[int] = None) -> PolyElement:
        """Substitute series ``inner[i]`` for the increments of ``p``."""
        limit = self.order if order is None else order
        n = self.n
        cache: Dict[Tuple[int, int], PolyElement] = {}

        def pw(i: int, e: int) -> PolyElement:
            if (i, e) not in cache:
                cache[(i, e)] = self.power(inner[i], e, limit)
            return cache[(i, e)]

        result = self.zero()
        for m, c in p.items():
            term = self.ring.ground_new(c)
            for s, e in zip(self.symbols, m[n:]):
                if e:
                    term *= self.extra[s] ** e
            for i in range(n):
                if m[i]:
                    term = self.mul(term, pw(i, m[i]), limit)
            result += term
        return self.truncate(result, limit)

    def evaluate(
        self,
        e: Any,
        bindings: Mapping[Symbol, PolyElement],
        values: Mapping[Symbol, Any],
    ) -> PolyElement:
        """
        Evaluate an expression into a series.

        Symbols bound in ``bindings`` are replaced by series, symbols in
        ``values`` by constants, extra symbols stay symbolic.

        Raises:
            UnboundSymbol: For any other symbol.
        """
        memo: Dict[Expr, PolyElement] = {}

        def walk(node: Expr) -> PolyElement:
            if node in memo:
                return memo[node]
            if node.is_Rational:
                result = self.constant(node)
            elif node.is_Symbol:
                if node in bindings:
                    result = bindings[node]
                elif node in values:
                    result = self.constant(values[node])
                elif node in self.extra:
                    result = self.extra[node]
                else:
                    raise UnboundSymbol([node.name])
            elif node.is_Add:
                result = self.zero()
                for arg in node.args:
                    result += walk(arg)
            elif node.is_Mul:
                result = self.ring.one
                for arg in node.args:
                    result = self.mul(result, walk(arg))
            elif node.is_Pow and node.exp.is_Integer:
                result = self.power(walk(node.base), int(node.exp))
            else:
                raise ValueError(f"Cannot expand {node} as a rational series")
            memo[node] = result
            return result

        return walk(sympify(e))
