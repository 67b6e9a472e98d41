from .catalog import (
    get_case,
    get_first_order_pde_branch1,
    get_first_order_pde_branch2_stage1,
    get_first_order_pde_branch2_stage2,
    get_polyshift_n2_m1_d2,
    get_prolong_1d,
    get_scaling_translation,
    get_stab,
    get_translation_x,
)

__all__ = [
    "get_case",
    "get_prolong_1d",
    "get_scaling_translation",
    "get_translation_x",
    "get_first_order_pde_branch1",
    "get_first_order_pde_branch2_stage1",
    "get_first_order_pde_branch2_stage2",
    "get_stab",
    "get_polyshift_n2_m1_d2",
]
