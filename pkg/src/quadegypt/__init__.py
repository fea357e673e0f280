"""Unit-fraction decompositions of 4/n over quadratic integer rings."""

from .decomp import (
    Decomposition,
    DecompositionError,
    ExceptionalElementError,
    UnitFraction,
    decompose,
    decompose_integer,
    pad_to_three,
)
from .oracle import ScanReport, brute_force, scan_conjecture, scan_theorem
from .pell import pell_identity, pell_two_term
from .ring import QuadInt, QuadRat, RingError, RingSpec, format_element, make_ring, parse_element
from .verify import check_conjecture, in_cone, verify, verify_rational

__version__ = "0.1.0"

__all__ = [
    "Decomposition",
    "DecompositionError",
    "ExceptionalElementError",
    "QuadInt",
    "QuadRat",
    "RingError",
    "RingSpec",
    "ScanReport",
    "UnitFraction",
    "brute_force",
    "check_conjecture",
    "decompose",
    "decompose_integer",
    "format_element",
    "in_cone",
    "make_ring",
    "pad_to_three",
    "parse_element",
    "pell_identity",
    "pell_two_term",
    "scan_conjecture",
    "scan_theorem",
    "verify",
    "verify_rational",
]
