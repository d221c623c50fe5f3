"""
Octaflip Bistellar Moves

Detects and applies bistellar i-moves, runs move scripts and raises an
8-vertex 3-pseudomanifold to a neighbourly one by 1-moves.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

from .complexes import (
    Complex,
    FaceLike,
    MAX_VERTEX,
    face_key,
    format_face,
    is_neighbourly,
    mask_of,
    popcount,
    simplex,
    vertex_degrees,
    vertices_of,
)


logger = logging.getLogger(__name__)


class MoveError(ValueError):
    """A face is not removable, or a script step failed."""

    def __init__(self, message: str, step: Optional[int] = None, face: Optional[int] = None):
        self.step = step
        self.face = face
        super().__init__(message)


class NeighbourlyError(ValueError):
    """No bistellar 1-move on a non-neighbourly complex."""


@dataclass(frozen=True)
class Move:
    """kappa_alpha: replace alpha * boundary(beta) by boundary(alpha) * beta."""
    alpha: int
    beta: int
    dim: int

    @property
    def i(self) -> int:
        return self.dim - popcount(self.alpha) + 1

    @property
    def is_proper(self) -> bool:
        return 0 < self.i < self.dim

    @property
    def span(self) -> int:
        return self.alpha | self.beta

    def inverse(self) -> "Move":
        return Move(alpha=self.beta, beta=self.alpha, dim=self.dim)

    def __str__(self) -> str:
        return f"kappa_{format_face(self.alpha)} ({self.i}-move, beta={format_face(self.beta)})"


@dataclass(frozen=True)
class ScriptStep:
    """One step of a script; ``fresh`` names the new vertex of a 0-move."""
    alpha: int
    fresh: Optional[int] = None

    def __str__(self) -> str:
        text = format_face(self.alpha)
        return text if self.fresh is None else f"{text}@{self.fresh}"


@dataclass(frozen=True)
class MoveScript:
    """Steps in application order (innermost kappa first)."""
    steps: Tuple[ScriptStep, ...] = ()

    def __len__(self) -> int:
        return len(self.steps)

    def __str__(self) -> str:
        return ";".join(str(step) for step in self.steps)


def parse_face(text: str) -> int:
    """``"238"`` (single-digit labels) or ``"2 3 8"`` / ``"2,3,8"``."""
    cleaned = text.replace(",", " ").strip()
    if not cleaned:
        raise MoveError("Invalid face: empty text")
    tokens = cleaned.split() if " " in cleaned else list(cleaned)
    if not all(t.isdigit() for t in tokens):
        raise MoveError(f"Invalid face: {text!r}. Must be vertex labels")
    labels = [int(t) for t in tokens]
    if len(set(labels)) != len(labels):
        raise MoveError(f"Invalid face: {text!r} repeats a vertex")
    return mask_of(labels)


def parse_script(text: str) -> MoveScript:
    """Semicolon-separated steps; ``F@w`` stars the fresh vertex w in facet F."""
    steps = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        if "@" in part:
            face, fresh = part.split("@", 1)
            if not fresh.strip().isdigit():
                raise MoveError(f"Invalid script step: {part!r}. Fresh vertex must be a label")
            steps.append(ScriptStep(parse_face(face), int(fresh)))
        else:
            steps.append(ScriptStep(parse_face(part)))
    return MoveScript(tuple(steps))


# ============================================
# MOVES
# ============================================

def is_removable(K: Complex, alpha: FaceLike, fresh: Optional[int] = None) -> Optional[Move]:
    """The move kappa_alpha if lk(alpha) = boundary(beta) with beta not a face.

    A facet is removable only towards a caller-supplied fresh vertex.
    """
    alpha = simplex(alpha)
    star = [f for f in K.facets if f & alpha == alpha]
    if not star:
        return None
    d = K.dim
    size = popcount(alpha)
    if size == d + 1:
        if fresh is None or fresh < 0 or fresh > MAX_VERTEX or K.vertex_mask >> fresh & 1:
            return None
        return Move(alpha=alpha, beta=1 << fresh, dim=d)
    beta = 0
    for f in star:
        beta |= f & ~alpha
    b = popcount(beta)
    # lk(alpha) has |beta| distinct facets of size |beta|-1 inside beta: exactly boundary(beta)
    if b != d - size + 2 or len(star) != b:
        return None
    if K.contains_face(beta):
        return None
    return Move(alpha=alpha, beta=beta, dim=d)


def perform(K: Complex, move: Move) -> Complex:
    """Apply a move already known to be valid for K."""
    alpha, beta = move.alpha, move.beta
    kept = {f for f in K.facets if f & alpha != alpha}
    kept.update(beta | (alpha & ~(1 << v)) for v in vertices_of(alpha))
    return Complex(kept)


def apply_move(K: Complex, alpha: Union[FaceLike, Move], fresh: Optional[int] = None) -> Complex:
    if isinstance(alpha, Move):
        if popcount(alpha.alpha) == K.dim + 1:
            fresh = vertices_of(alpha.beta)[0]
        alpha = alpha.alpha
    move = is_removable(K, alpha, fresh)
    if move is None:
        raise MoveError(f"Face {format_face(simplex(alpha))} is not removable", face=simplex(alpha))
    return perform(K, move)


def star_vertex(K: Complex, facet: FaceLike, v_new: int) -> Complex:
    facet = simplex(facet)
    if facet not in K.facets:
        raise MoveError(f"Invalid star: {format_face(facet)} is not a facet", face=facet)
    if K.vertex_mask >> v_new & 1:
        raise MoveError(f"Invalid star: vertex {v_new} is not fresh", face=facet)
    return apply_move(K, facet, v_new)


def collapse_vertex(K: Complex, u: int) -> Complex:
    move = is_removable(K, 1 << u)
    if move is None:
        raise MoveError(f"Vertex {u} cannot be collapsed: its link is not the boundary of a missing simplex", face=1 << u)
    return perform(K, move)


def enumerate_moves(K: Complex, i: int) -> List[Move]:
    """All i-moves, sorted by alpha; 0-moves use the least unused vertex label."""
    d = K.dim
    if i < 0 or i > d:
        raise MoveError(f"Invalid move index: {i}. Must be in 0..{d}")
    fresh = None
    if i == 0:
        fresh = next(v for v in range(MAX_VERTEX + 1) if not K.vertex_mask >> v & 1)
    moves = []
    for alpha in sorted(K.faces(d - i), key=face_key):
        move = is_removable(K, alpha, fresh)
        if move is not None:
            moves.append(move)
    return moves


def run_script(K: Complex, script: Union[MoveScript, str]) -> Complex:
    """Apply steps in order; failures name the 1-based step index and face."""
    if isinstance(script, str):
        script = parse_script(script)
    current = K
    for index, step in enumerate(script.steps, start=1):
        move = is_removable(current, step.alpha, step.fresh)
        if move is None:
            raise MoveError(
                f"Script step {index}: face {step} is not removable", step=index, face=step.alpha
            )
        current = perform(current, move)
        logger.debug(f"Step {index}: {move}")
    return current


# ============================================
# NEIGHBOURLY-IZATION
# ============================================

def neighbourly_ize(K: Complex) -> Tuple[Complex, MoveScript]:
    """Apply 1-moves until K is neighbourly.

    Each step prefers a move whose new edge touches a vertex of minimum
    degree, then the lexicographically least alpha.
    """
    if K.dim != 3:
        raise MoveError(f"Invalid complex for neighbourly_ize: dimension {K.dim}, expected 3")
    current = K
    steps: List[ScriptStep] = []
    while not is_neighbourly(current):
        moves = enumerate_moves(current, 1)
        if not moves:
            raise NeighbourlyError(
                f"No bistellar 1-move on a non-neighbourly complex with f1={len(current.faces(1))} "
                f"after {len(steps)} steps"
            )
        degrees = vertex_degrees(current)
        lowest = min(degrees.values())
        low_mask = mask_of(v for v, deg in degrees.items() if deg == lowest)
        move = min(moves, key=lambda m: (0 if m.beta & low_mask else 1, face_key(m.alpha)))
        current = perform(current, move)
        steps.append(ScriptStep(move.alpha))
    logger.debug(f"Neighbourly after {len(steps)} 1-moves")
    return current, MoveScript(tuple(steps))
