"""Recursive-descent parser for the jet grammar.

Grammar::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := ("-" | "+") unary | power
    power   := atom ("^" unary)?
    atom    := INTEGER | ref | "(" expr ")"
    ref     := ["Z" "." | "L" "."] NAME ["[" NAME ("," NAME)* "]"]

Exponents must evaluate to integers once declared integer parameters are
bound.
"""

from dataclasses import dataclass, field
from typing import List, Mapping, Optional, Tuple

from sympy import Expr, Integer, Symbol

from jetframe._core.errors import ParseError, UndeclaredSymbol
from jetframe.expr_kernel.symbols import (
    base_symbol,
    group_symbol,
    jet_symbol,
    lifted_symbol,
)

_PUNCT = "+-*/^()[],.="


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "name", "punct", "end"
    text: str
    line: int
    col: int


@dataclass(frozen=True)
class Scope:
    """Names an expression may refer to."""

    independent: Tuple[str, ...] = ()
    dependent: Tuple[str, ...] = ()
    components: Tuple[str, ...] = ()
    depends: Mapping[str, Tuple[str, ...]] = field(default_factory=dict)
    integers: Mapping[str, int] = field(default_factory=dict)
    parameters: Tuple[str, ...] = ()
    allow_group: bool = True
    allow_lifted: bool = True

    @property
    def base_variables(self) -> Tuple[str, ...]:
        return self.independent + self.dependent


def tokenize(text: str, line: int = 1, col: int = 1) -> List[Token]:
    tokens: List[Token] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        start_col = col
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            if j < len(text) and text[j] == ".":
                raise ParseError(line, col + (j - i), "integer or rational p/q", ".")
            tokens.append(Token("int", text[i:j], line, start_col))
            col += j - i
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("name", text[i:j], line, start_col))
            col += j - i
            i = j
        elif ch in _PUNCT:
            tokens.append(Token("punct", ch, line, start_col))
            col += 1
            i += 1
        else:
            raise ParseError(line, col, "expression", ch)
    tokens.append(Token("end", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: List[Token], scope: Scope) -> None:
        self.tokens = tokens
        self.pos = 0
        self.scope = scope

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def accept(self, text: str) -> Optional[Token]:
        if self.current.kind == "punct" and self.current.text == text:
            return self.advance()
        return None

    def expect(self, text: str) -> Token:
        token = self.accept(text)
        if token is None:
            raise self.error(f"'{text}'")
        return token

    def error(self, expected: str, token: Optional[Token] = None) -> ParseError:
        token = token or self.current
        return ParseError(token.line, token.col, expected, token.text)

    def parse(self) -> Expr:
        result = self.expr()
        if self.current.kind != "end":
            raise self.error("operator or end of expression")
        return result

    def expr(self) -> Expr:
        result = self.term()
        while True:
            if self.accept("+"):
                result = result + self.term()
            elif self.accept("-"):
                result = result - self.term()
            else:
                return result

    def term(self) -> Expr:
        result = self.unary()
        while True:
            if self.accept("*"):
                result = result * self.unary()
            elif self.current.kind == "punct" and self.current.text == "/":
                slash = self.advance()
                divisor = self.unary()
                if divisor == 0:
                    raise self.error("nonzero divisor", slash)
                result = result / divisor
            else:
                return result

    def unary(self) -> Expr:
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        caret = self.accept("^")
        if caret is None:
            return base
        exponent_token = self.current
        exponent = self.unary()
        if not exponent.is_Integer:
            raise self.error("integer exponent", exponent_token)
        if base == 0 and exponent < 0:
            raise self.error("nonzero base for a negative exponent", caret)
        return base**exponent

    def atom(self) -> Expr:
        token = self.current
        if token.kind == "int":
            self.advance()
            return Integer(int(token.text))
        if self.accept("("):
            inner = self.expr()
            self.expect(")")
            return inner
        if token.kind == "name":
            return self.reference()
        raise self.error("number, symbol or '('")

    def index(self, allowed: Tuple[str, ...]) -> Tuple[str, ...]:
        if self.accept("[") is None:
            return ()
        names: List[str] = []
        while True:
            token = self.current
            if token.kind != "name":
                previous = self.tokens[self.pos - 1]
                raise self.error("variable name", previous if names else token)
            if token.text not in allowed:
                raise UndeclaredSymbol(token.text, token.line, token.col)
            names.append(self.advance().text)
            if self.accept("]"):
                break
            if self.current.kind == "punct" and self.current.text == ",":
                self.advance()
                continue
            raise self.error("',' or ']'")
        return tuple(sorted(names, key=allowed.index))

    def reference(self) -> Expr:
        head = self.advance()
        scope = self.scope
        if head.text in ("Z", "L") and self.current.text == ".":
            self.advance()
            name = self.current
            if name.kind != "name":
                raise self.error("component name")
            self.advance()
            if head.text == "Z":
                return self.group_reference(name)
            return self.lifted_reference(name)
        name = head.text
        if name in scope.integers:
            return Integer(scope.integers[name])
        if name in scope.dependent:
            index = self.index(scope.independent)
            return jet_symbol(name, index) if index else base_symbol(name)
        if name in scope.independent or name in scope.parameters:
            return base_symbol(name)
        raise UndeclaredSymbol(name, head.line, head.col)

    def group_reference(self, name: Token) -> Expr:
        scope = self.scope
        if not scope.allow_group or name.text not in scope.components:
            raise UndeclaredSymbol(f"Z.{name.text}", name.line, name.col)
        index = self.index(scope.base_variables)
        allowed = scope.depends.get(name.text, scope.base_variables)
        if any(v not in allowed for v in index):
            return Integer(0)
        return group_symbol(name.text, index)

    def lifted_reference(self, name: Token) -> Expr:
        scope = self.scope
        if not scope.allow_lifted or name.text not in scope.base_variables:
            raise UndeclaredSymbol(f"L.{name.text}", name.line, name.col)
        if name.text in scope.independent:
            if self.current.text == "[":
                raise self.error("no index on an independent variable")
            return lifted_symbol(name.text)
        return lifted_symbol(name.text, self.index(scope.independent))


def parse_expr(text: str, scope: Scope, line: int = 1, col: int = 1) -> Expr:
    """
    Parse a jet-grammar expression.

    Args:
        text (str): The expression text.
        scope (Scope): Declared names.
        line (int): Line of the first character within the enclosing file.
        col (int): Column of the first character within the enclosing file.

    Returns:
        Expr: The parsed expression.

    Raises:
        ParseError: On malformed input, with the offending position.
        UndeclaredSymbol: On names not declared in ``scope``.
    """
    return _Parser(tokenize(text, line, col), scope).parse()


def parse_equation(
    text: str, scope: Scope, line: int = 1, col: int = 1
) -> Tuple[Expr, Expr]:
    """Parse ``lhs = rhs``; returns both sides."""
    tokens = tokenize(text, line, col)
    split = [i for i, t in enumerate(tokens) if t.kind == "punct" and t.text == "="]
    if len(split) != 1:
        where = tokens[split[1]] if len(split) > 1 else tokens[-1]
        raise ParseError(where.line, where.col, "exactly one '='", where.text)
    cut = split[0]
    end = Token("end", "", tokens[cut].line, tokens[cut].col)
    lhs = _Parser(tokens[:cut] + [end], scope).parse()
    rhs = _Parser(tokens[cut + 1 :], scope).parse()
    return lhs, rhs


def parse_symbol(text: str, scope: Scope, line: int = 1, col: int = 1) -> Symbol:
    """Parse a single symbol reference (jet, group jet or lifted invariant)."""
    result = parse_expr(text, scope, line, col)
    if not isinstance(result, Symbol):
        raise ParseError(line, col, "a single symbol", text)
    return result

