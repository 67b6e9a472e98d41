"""Symbol naming for jet coordinates, group jets, lifted invariants and
flat coordinates.

Every symbol is a plain sympy ``Symbol`` whose name is its canonical
jet-grammar spelling, so printing, parsing and hashing agree:

    ``x``          base coordinate (or declared parameter)
    ``u[x,y]``     jet coordinate u_xy
    ``Z.X[x,u]``   group jet X_xu
    ``L.q[p,p]``   lifted invariant of q_pp
    ``f.y``        flat coordinate
"""

import re
from dataclasses import dataclass
from enum import IntEnum
from typing import Sequence, Tuple

from sympy import Symbol

_NAME = re.compile(
    r"^(?:(?P<prefix>[ZLf])\.)?(?P<name>[A-Za-z_][A-Za-z0-9_]*)(?:\[(?P<index>[^\]]*)\])?$"
)


class SymKind(IntEnum):
    BASE = 0
    JET = 1
    GROUP = 2
    PARAMETER = 3
    FLAT = 4
    LIFTED = 5


@dataclass(frozen=True)
class SymInfo:
    kind: SymKind
    name: str
    index: Tuple[str, ...] = ()

    @property
    def order(self) -> int:
        return len(self.index)


def _render(prefix: str, name: str, index: Sequence[str]) -> str:
    body = f"{prefix}{name}"
    return f"{body}[{','.join(index)}]" if index else body


def base_symbol(name: str) -> Symbol:
    return Symbol(name)


def jet_symbol(dependent: str, index: Sequence[str]) -> Symbol:
    return Symbol(_render("", dependent, index))


def group_symbol(component: str, index: Sequence[str]) -> Symbol:
    return Symbol(_render("Z.", component, index))


def lifted_symbol(coordinate: str, index: Sequence[str] = ()) -> Symbol:
    return Symbol(_render("L.", coordinate, index))


def flat_symbol(name: str) -> Symbol:
    return Symbol(f"f.{name}")


_PREFIX_KIND = {"Z": SymKind.GROUP, "L": SymKind.LIFTED, "f": SymKind.FLAT}


def sym_info(symbol: Symbol, parameters: Sequence[str] = ()) -> SymInfo:
    """Recover ``(kind, name, index)`` from a symbol name.

    Plain identifiers are base coordinates unless listed in ``parameters``.

    Raises:
        ValueError: If the name is not in the jet grammar.
    """
    match = _NAME.match(symbol.name)
    if match is None:
        raise ValueError(f"'{symbol.name}' is not a jet-grammar symbol")
    prefix, name, raw_index = match.group("prefix", "name", "index")
    index = tuple(raw_index.split(",")) if raw_index else ()
    if prefix:
        return SymInfo(_PREFIX_KIND[prefix], name, index)
    if index:
        return SymInfo(SymKind.JET, name, index)
    if name in parameters:
        return SymInfo(SymKind.PARAMETER, name)
    return SymInfo(SymKind.BASE, name)


def sort_key(symbol: Symbol) -> Tuple[int, str, int, Tuple[str, ...]]:
    """Fixed symbol order: kind, name, index order, index."""
    try:
        info = sym_info(symbol)
    except ValueError:
        return (len(SymKind), symbol.name, 0, ())
    return (int(info.kind), info.name, info.order, info.index)


def is_kind(symbol: Symbol, kind: SymKind) -> bool:
    try:
        return sym_info(symbol).kind == kind
    except ValueError:
        return False
