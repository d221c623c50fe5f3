"""Octaflip - bistellar moves and the 8-vertex normal 3-pseudomanifold census"""

__version__ = "1.0.0"

from .complexes import Complex, ComplexError, FacetParseError, read_complex, write_complex
from .bistellar import Move, MoveError, apply_move, enumerate_moves, run_script
from .iso import are_isomorphic, canonical_form
from .homology import homology
from .recognition import recognize
