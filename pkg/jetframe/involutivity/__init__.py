from .cartan import CartanReport, cartan_analysis, cartan_test, free_parameter_count
from .tableau import (
    CharacterSearch,
    TableauInput,
    character_matrix,
    character_search,
    reduced_characters,
)

__all__ = [
    "CartanReport",
    "CharacterSearch",
    "TableauInput",
    "cartan_analysis",
    "cartan_test",
    "character_matrix",
    "character_search",
    "free_parameter_count",
    "reduced_characters",
]
