"""Three-valued propositional logics and split interpolation."""

from .semantics import Inference, Standard, evaluate, valid
from .syntax import Formula, parse, to_text
from .truth import TV, Scheme, all_schemes, get_scheme

__all__ = [
    "TV",
    "Scheme",
    "all_schemes",
    "get_scheme",
    "Formula",
    "parse",
    "to_text",
    "Inference",
    "Standard",
    "evaluate",
    "valid",
]
