from .bounds import (
    BoundReport,
    bound_basic,
    bound_qstar,
    bound_transitive,
    minimal_set_size_polyshift,
    polyshift_dim,
)
from .polyshift import (
    InvarianceResult,
    polyshift_action,
    polyshift_problem,
    polyshift_system,
    verify_invariance_polyshift,
)

__all__ = [
    "BoundReport",
    "InvarianceResult",
    "bound_basic",
    "bound_qstar",
    "bound_transitive",
    "minimal_set_size_polyshift",
    "polyshift_action",
    "polyshift_dim",
    "polyshift_problem",
    "polyshift_system",
    "verify_invariance_polyshift",
]
