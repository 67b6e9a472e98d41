"""Upper bounds on the size of a generating set of differential invariants."""

from dataclasses import dataclass
from math import comb
from typing import Any, Dict, Optional

from jetframe._core.errors import NegativeBound
from jetframe.det_systems.analysis import groupoid_dim
from jetframe.moving_frame.structure import generating_invariants


def _check_non_negative(**values: int) -> None:
    for name, value in values.items():
        if value < 0:
            raise ValueError(f"{name} must be non-negative, got {value}")


def bound_basic(n: int, dim_h: int) -> int:
    """n * dim H_{r-1}."""
    _check_non_negative(n=n, dim_h=dim_h)
    return n * dim_h


def bound_transitive(n: int, dim_h: int, m: int = 0, transitive_on_first_jets: bool = False) -> int:
    """
    n * (dim H_{r-1} - n); a further n * m is subtracted when the action is
    transitive on first-order jets.

    Raises:
        NegativeBound: If the result would be negative.
    """
    _check_non_negative(n=n, dim_h=dim_h, m=m)
    value = n * (dim_h - n)
    if transitive_on_first_jets:
        value -= n * m
    if value < 0:
        raise NegativeBound("bound_transitive", value)
    return value


def bound_qstar(n: int, m: int, dim_h: int, qstar: int) -> int:
    """
    n * (dim H_{r-1} - n - m * C(q* - 1 + n, n)).

    Raises:
        NegativeBound: If the result would be negative.
    """
    _check_non_negative(n=n, m=m, dim_h=dim_h)
    if qstar < 1:
        raise ValueError(f"qstar must be at least 1, got {qstar}")
    value = n * (dim_h - n - m * comb(qstar - 1 + n, n))
    if value < 0:
        raise NegativeBound("bound_qstar", value)
    return value


def minimal_set_size_polyshift(n: int, m: int, d: int) -> int:
    """Size m * C(n + d, n - 1) of the minimal generating set of the polynomial shifts."""
    if n < 1 or m < 1 or d < 0:
        raise ValueError("Need n >= 1, m >= 1 and d >= 0")
    return m * comb(n + d, n - 1)


def polyshift_dim(n: int, m: int, d: int) -> int:
    """Dimension of the group (x + a, u + p(x)) with deg p <= d."""
    return n + m * comb(n + d, n)


@dataclass(frozen=True)
class BoundReport:
    """
    The three bounds for one pseudo-group.

    Bounds whose preconditions fail are None; ``generators_found`` is only
    filled from a completed frame.
    """

    n: int
    m: int
    r: int
    qstar: Optional[int]
    dim_H_r_minus_1: int
    bound_basic: int
    bound_transitive: Optional[int]
    bound_qstar: Optional[int]
    generators_found: Optional[int] = None

    @classmethod
    def compute(
        cls,
        n: int,
        m: int,
        r: int,
        dim_h: int,
        qstar: Optional[int] = None,
        generators_found: Optional[int] = None,
    ) -> "BoundReport":
        try:
            transitive: Optional[int] = bound_transitive(n, dim_h)
        except NegativeBound:
            transitive = None
        starred: Optional[int] = None
        if qstar is not None:
            try:
                starred = bound_qstar(n, m, dim_h, qstar)
            except NegativeBound:
                starred = None
        return cls(
            n, m, r, qstar, dim_h, bound_basic(n, dim_h), transitive, starred, generators_found
        )

    @classmethod
    def from_frame(
        cls, state: Any, qstar: Optional[int] = None, seed: Optional[int] = None
    ) -> "BoundReport":
        """Bounds at the frame's order, with the number of generators it yields."""
        problem = state.problem
        dim_h = groupoid_dim(problem.system, state.order - 1, seed)
        found = len(generating_invariants(state))
        return cls.compute(problem.n, problem.m, state.order, dim_h, qstar, found)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "m": self.m,
            "r": self.r,
            "qstar": self.qstar,
            "dim_H_r_minus_1": self.dim_H_r_minus_1,
            "bound_basic": self.bound_basic,
            "bound_transitive": self.bound_transitive,
            "bound_qstar": self.bound_qstar,
            "generators_found": self.generators_found,
        }
