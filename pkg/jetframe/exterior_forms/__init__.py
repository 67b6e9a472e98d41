from .form import Form, contract, reduce_mod_contact, wedge, wedge_all
from .generators import Generator, GeneratorKind, generator_from_label
from .structure import StructureRules, exterior_derivative, mc_structure

__all__ = [
    "Form",
    "Generator",
    "GeneratorKind",
    "StructureRules",
    "contract",
    "exterior_derivative",
    "generator_from_label",
    "mc_structure",
    "reduce_mod_contact",
    "wedge",
    "wedge_all",
]
