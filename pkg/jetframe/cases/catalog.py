from jetframe._core.case_manager import CaseManager
from jetframe.cli.spec_parser import ProblemSpec, parse_problem


def get_case(case_name: str) -> ProblemSpec:
    """
    Core function used by all ``get_<case>()`` functions to load shipped cases.

    Args:
        case_name (str): Name of the case file under ``cases/_configs``.

    Returns:
        ProblemSpec: The parsed case.

    Raises:
        FileNotFoundError: If no case of that name is shipped.
    """
    return parse_problem(CaseManager.load_case_text(case_name))


def get_prolong_1d() -> ProblemSpec:
    """
    First prolongation of an arbitrary point transformation of ``(x, u)``.

    The ``prolong`` task compares the lifted ``u[x]`` against
    ``(U_x + u_x U_u)/(X_x + u_x X_u)``.
    """
    return get_case("prolong_1d")


def get_scaling_translation() -> ProblemSpec:
    """
    The scaling and translation group ``(x, u) -> (l*x + a, l*u + b)``.

    The frame ``X = U = 0``, ``U_XX = 1`` is complete at order 2; its
    generating invariants are ``u_x`` and ``u_xxx / u_xx^2``.

    Quick Start:

    .. code-block:: python

        from jetframe.cases import get_scaling_translation
        from jetframe.cli import run

        report = run(get_scaling_translation())
        report["generators_in_source"]
    """
    return get_case("scaling_translation")


def get_translation_x() -> ProblemSpec:
    """Translations in ``x`` acting on ``(x, u)``; the action is not free."""
    return get_case("translation_x")


def get_first_order_pde_branch1() -> ProblemSpec:
    """
    Point transformations acting on first order PDEs ``u_y = q(x, y, u, u_x)``,
    on the branch ``q_pp = 0``.

    The order-2 normalizations leave 13 free parameters and an involutive
    coframe with characters ``(4, 3, 1, 0)``.
    """
    return get_case("first_order_pde_branch1")


def get_first_order_pde_branch2_stage1() -> ProblemSpec:
    """
    The branch ``q_pp != 0`` at order 2: characters ``(4, 1, 0, 0)`` against
    4 free parameters, so the coframe is not involutive.

    The case carries the closed forms of the normalized group jets as checks.
    """
    return get_case("first_order_pde_branch2_stage1")


def get_first_order_pde_branch2_stage2() -> ProblemSpec:
    """The branch ``q_pp != 0`` prolonged to order 3, where Cartan's test passes."""
    return get_case("first_order_pde_branch2_stage2")


def get_stab(k: int) -> ProblemSpec:
    """
    ``X = a x + b``, ``U = a^(k+1) u + p(x)`` with ``deg p <= k``, of order ``k + 1``.

    Args:
        k (int): 1, 2 or 3.

    Raises:
        ValueError: For other ``k``.
    """
    if k not in (1, 2, 3):
        raise ValueError(f"Shipped stabilizer cases have k in 1..3, got {k}")
    return get_case(f"stab_k{k}")


def get_polyshift_n2_m1_d2() -> ProblemSpec:
    return get_case("polyshift_n2_m1_d2")
