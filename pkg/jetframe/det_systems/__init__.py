from .analysis import (
    JetPartition,
    groupoid_dim,
    jet_partition,
    quasi_horizontal,
    system_order,
)
from .freeness import freeness_implies_qh, persistence_check
from .linearized import RelationTable, relation_table
from .system import DeterminingSystem, Equation, prolong_system

__all__ = [
    "DeterminingSystem",
    "Equation",
    "JetPartition",
    "RelationTable",
    "freeness_implies_qh",
    "groupoid_dim",
    "jet_partition",
    "persistence_check",
    "prolong_system",
    "quasi_horizontal",
    "relation_table",
    "system_order",
]
