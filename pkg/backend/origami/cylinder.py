"""
Cylinder diagrams of horizontally periodic square-tiled surfaces.

A diagram lists, for every maximal horizontal cylinder, the saddle connections met along its
bottom and its top boundary, both read along the orientation of the core curve, plus the
cylinder height. Every saddle connection label occurs exactly twice. An occurrence carries a
reversal flag relative to the label's reference direction: a top/bottom pair is glued by a
translation and has equal flags, a pair on two bottoms (or two tops) is glued by a half turn
and has opposite flags. Flags are therefore fixed by the positions once the first occurrence
of every label is taken unreversed.

Parameters are the integer widths of the labels and one twist per cylinder: the offset along
the core from the start of the bottom sequence to the start of the top sequence.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

from backend.core.enums import Side
from backend.core.errors import InvalidParams
from . import linalg
from .multicurve import horizontal_core, lower_corners, upper_corners
from .surface import SquareTiledSurface, from_pairs, slot

logger = logging.getLogger(__name__)

Occurrence = tuple[int, int]

#--- diagram models ---#

@dataclass(frozen=True)
class DiagramCylinder:
    bottom: tuple[Occurrence, ...]
    top: tuple[Occurrence, ...]
    height: int


@dataclass(frozen=True)
class CylinderDiagram:
    """
    Attributes:
        cylinders (tuple[DiagramCylinder, ...]): Cylinders with their boundary sequences.

    Raises:
        ValueError: If a height is not positive, a boundary is empty, labels are not exactly
            0..E-1 each used twice, or a reversal flag contradicts the gluing rule.
    """
    cylinders: tuple[DiagramCylinder, ...]

    def __post_init__(self):
        seen: dict[int, list[tuple[str, int]]] = {}
        for cylinder in self.cylinders:
            if cylinder.height < 1:
                raise ValueError(f"Cylinder heights must be positive, got {cylinder.height}")
            if not cylinder.bottom or not cylinder.top:
                raise ValueError("Every cylinder needs at least one saddle connection on each boundary")
            for side, sequence in (("bottom", cylinder.bottom), ("top", cylinder.top)):
                for label, rev in sequence:
                    seen.setdefault(label, []).append((side, rev))
        if sorted(seen) != list(range(len(seen))):
            raise ValueError(f"Saddle connection labels must be 0..{len(seen) - 1}, got {sorted(seen)}")
        for label, uses in seen.items():
            if len(uses) != 2:
                raise ValueError(f"Saddle connection e{label + 1} occurs {len(uses)} times, expected 2")
            (side_a, rev_a), (side_b, rev_b) = uses
            if (side_a == side_b) == (rev_a == rev_b):
                raise ValueError(f"Reversal flags of e{label + 1} contradict its gluing")

    @property
    def n_edges(self) -> int:
        return sum(len(c.bottom) + len(c.top) for c in self.cylinders) // 2

    @property
    def n_cylinders(self) -> int:
        return len(self.cylinders)

    @property
    def heights(self) -> tuple[int, ...]:
        return tuple(c.height for c in self.cylinders)

    def code(self) -> tuple:
        return tuple(
            (c.height, len(c.bottom), len(c.top)) + tuple(l for l, _ in c.bottom) + tuple(l for l, _ in c.top)
            for c in self.cylinders
        )

    def equality_rows(self) -> list[list[int]]:
        """One row per cylinder: sum of top widths minus sum of bottom widths."""
        rows = []
        for cylinder in self.cylinders:
            row = [0] * self.n_edges
            for label, _ in cylinder.top:
                row[label] += 1
            for label, _ in cylinder.bottom:
                row[label] -= 1
            rows.append(row)
        return rows

    def dimension(self) -> int:
        """|E| - rank of the width equalities + number of cylinders."""
        return self.n_edges - linalg.rank(self.equality_rows()) + self.n_cylinders

    def to_text(self) -> str:
        def words(sequence):
            return " ".join(f"e{label + 1}" + ("'" if rev else "") for label, rev in sequence)
        return "\n".join(
            f"top: {words(c.top)} | bottom: {words(c.bottom)} ; a={c.height}" for c in self.cylinders
        )

    def __str__(self) -> str:
        return self.to_text()


def parse_diagram_text(text: str) -> CylinderDiagram:
    """
    Parse lines of the form ``top: e3 e1' e2 | bottom: e2 e3' e1 ; a=2``.

    Labels are renumbered by order of first appearance.

    Raises:
        ValueError: If a line is malformed or the diagram is inconsistent.
    """
    renumber: dict[str, int] = {}
    cylinders = []

    def occurrences(words: str) -> tuple[Occurrence, ...]:
        result = []
        for word in words.split():
            rev = 1 if word.endswith("'") else 0
            name = word.rstrip("'")
            renumber.setdefault(name, len(renumber))
            result.append((renumber[name], rev))
        return tuple(result)

    for line in filter(None, (raw.strip() for raw in text.splitlines())):
        try:
            sides, height_text = line.split(";")
            top_text, bottom_text = sides.split("|")
            top_words = top_text.split(":", 1)[1]
            bottom_words = bottom_text.split(":", 1)[1]
            height = int(height_text.strip().removeprefix("a="))
        except (ValueError, IndexError) as e:
            raise ValueError(f"Invalid diagram line '{line}': expected 'top: ... | bottom: ... ; a=<int>'") from e
        top = occurrences(top_words)
        bottom = occurrences(bottom_words)
        cylinders.append(DiagramCylinder(bottom, top, height))
    return CylinderDiagram(tuple(cylinders))


@dataclass(frozen=True)
class CylinderParams:
    """
    Attributes:
        widths (tuple): Width of every saddle connection label.
        twists (tuple): Twist of every cylinder.
        removed_twists (tuple[int, ...]): Full Dehn twists removed per cylinder by normalisation.
    """
    widths: tuple
    twists: tuple
    removed_twists: tuple[int, ...] = field(default=(), compare=False)

    def bases(self, diagram: CylinderDiagram) -> tuple:
        return tuple(sum(self.widths[label] for label, _ in c.top) for c in diagram.cylinders)

    def area(self, diagram: CylinderDiagram):
        return sum(c.height * b for c, b in zip(diagram.cylinders, self.bases(diagram)))

    def is_moderately_slanted(self, diagram: CylinderDiagram) -> bool:
        return all(0 < s <= b for s, b in zip(self.twists, self.bases(diagram)))


def check_params(diagram: CylinderDiagram, params: CylinderParams) -> None:
    """
    Raises:
        InvalidParams: On a length mismatch, a non-positive width or a cylinder whose top and
            bottom widths differ.
    """
    if len(params.widths) != diagram.n_edges or len(params.twists) != diagram.n_cylinders:
        raise InvalidParams(
            f"Expected {diagram.n_edges} widths and {diagram.n_cylinders} twists, "
            f"got {len(params.widths)} and {len(params.twists)}"
        )
    if any(w <= 0 for w in params.widths):
        raise InvalidParams(f"Widths must be positive: {list(params.widths)}")
    for index, cylinder in enumerate(diagram.cylinders):
        top = sum(params.widths[label] for label, _ in cylinder.top)
        bottom = sum(params.widths[label] for label, _ in cylinder.bottom)
        if top != bottom:
            raise InvalidParams(f"Cylinder {index + 1}: top widths sum to {top}, bottom widths to {bottom}")


def normalize_twists(diagram: CylinderDiagram, params: CylinderParams) -> CylinderParams:
    """
    Bring every twist into (0, b] by removing whole Dehn twists; idempotent.

    Examples: s=5, b=3 gives 2 and s=6, b=3 gives 3.
    """
    twists, removed = [], []
    for s, b in zip(params.twists, params.bases(diagram)):
        k = math.ceil(Fraction(s) / b) - 1
        twists.append(s - k * b)
        removed.append(k)
    return CylinderParams(params.widths, tuple(twists), tuple(removed))


#--- symmetries and canonical form ---#

@dataclass(frozen=True)
class DiagramMove:
    """
    Relabelling of a diagram: cylinder ``order[j]`` goes to position j, optionally turned
    around (``flips``), then its bottom and top sequences are rotated left.
    """
    order: tuple[int, ...]
    flips: tuple[bool, ...]
    rot_bottom: tuple[int, ...]
    rot_top: tuple[int, ...]


def _reversed(sequence) -> list[Occurrence]:
    return [(label, 1 - rev) for label, rev in reversed(sequence)]


def _into_period(s, b):
    return s - (math.ceil(Fraction(s) / b) - 1) * b


@dataclass(frozen=True)
class MoveAction:
    """
    Effect of a move on parameters.

    Attributes:
        source (tuple[int, ...]): Old label of every new label.
        order (tuple[int, ...]): Old cylinder of every new cylinder.
        removed_bottom (tuple[tuple[int, ...], ...]): Old labels rotated off each new bottom.
        removed_top (tuple[tuple[int, ...], ...]): Old labels rotated off each new top.
        top_labels (tuple[tuple[int, ...], ...]): Old labels on each new top.
    """
    source: tuple[int, ...]
    order: tuple[int, ...]
    removed_bottom: tuple[tuple[int, ...], ...]
    removed_top: tuple[tuple[int, ...], ...]
    top_labels: tuple[tuple[int, ...], ...]

    def widths(self, widths) -> tuple:
        return tuple(widths[old] for old in self.source)

    def _shift(self, widths, j: int):
        return sum(widths[l] for l in self.removed_top[j]) - sum(widths[l] for l in self.removed_bottom[j])

    def twists(self, widths, twists) -> tuple:
        return tuple(
            _into_period(twists[old] + self._shift(widths, j), sum(widths[l] for l in self.top_labels[j]))
            for j, old in enumerate(self.order)
        )

    def fixes_twists(self, widths) -> bool:
        """Whether every twist vector is left unchanged for these widths."""
        return all(
            old == j and self._shift(widths, j) % sum(widths[l] for l in self.top_labels[j]) == 0
            for j, old in enumerate(self.order)
        )


def _moved(diagram: CylinderDiagram, move: DiagramMove):
    moved = []
    for position, index in enumerate(move.order):
        cylinder = diagram.cylinders[index]
        bottom, top = list(cylinder.bottom), list(cylinder.top)
        if move.flips[position]:
            bottom, top = _reversed(cylinder.top), _reversed(cylinder.bottom)
        rb, rt = move.rot_bottom[position], move.rot_top[position]
        moved.append((
            bottom[rb:] + bottom[:rb], top[rt:] + top[:rt], cylinder.height,
            tuple(label for label, _ in bottom[:rb]), tuple(label for label, _ in top[:rt]),
        ))
    return moved


def _renumbered(moved) -> tuple[CylinderDiagram, dict[int, int]]:
    """Renumber labels by first appearance (bottoms before tops) and re-derive reversal flags."""
    renumber: dict[int, int] = {}
    first_side: dict[int, str] = {}
    cylinders = []
    for bottom, top, height, _, _ in moved:
        sides = {}
        for side, sequence in (("bottom", bottom), ("top", top)):
            relabelled = []
            for label, _ in sequence:
                if label not in renumber:
                    renumber[label] = len(renumber)
                    first_side[label] = side
                    relabelled.append((renumber[label], 0))
                else:
                    relabelled.append((renumber[label], 1 if first_side[label] == side else 0))
            sides[side] = tuple(relabelled)
        cylinders.append(DiagramCylinder(sides["bottom"], sides["top"], height))
    return CylinderDiagram(tuple(cylinders)), renumber


def _action(move: DiagramMove, moved, renumber: dict[int, int]) -> MoveAction:
    source = [0] * len(renumber)
    for old, new in renumber.items():
        source[new] = old
    return MoveAction(
        tuple(source),
        move.order,
        tuple(m[3] for m in moved),
        tuple(m[4] for m in moved),
        tuple(tuple(label for label, _ in m[1]) for m in moved),
    )


def move_action(diagram: CylinderDiagram, move: DiagramMove) -> MoveAction:
    moved = _moved(diagram, move)
    _, renumber = _renumbered(moved)
    return _action(move, moved, renumber)


def apply_move(diagram: CylinderDiagram, move: DiagramMove, params: CylinderParams | None = None):
    """
    Apply a move and renumber labels by first appearance.

    Returns:
        tuple[CylinderDiagram, CylinderParams | None]: The relabelled diagram and parameters,
            twists normalised into (0, b].
    """
    moved = _moved(diagram, move)
    new_diagram, renumber = _renumbered(moved)
    if params is None:
        return new_diagram, None
    action = _action(move, moved, renumber)
    return new_diagram, CylinderParams(action.widths(params.widths), action.twists(params.widths, params.twists))



def all_moves(diagram: CylinderDiagram):
    k = diagram.n_cylinders
    for order in itertools.permutations(range(k)):
        for flips in itertools.product((False, True), repeat=k):
            ranges = []
            for position, index in enumerate(order):
                cylinder = diagram.cylinders[index]
                n_bottom, n_top = len(cylinder.bottom), len(cylinder.top)
                if flips[position]:
                    n_bottom, n_top = n_top, n_bottom
                ranges.append(itertools.product(range(n_bottom), range(n_top)))
            for rotations in itertools.product(*ranges):
                yield DiagramMove(
                    order, flips,
                    tuple(r[0] for r in rotations), tuple(r[1] for r in rotations),
                )


def canonical_diagram(diagram: CylinderDiagram, params: CylinderParams | None = None):
    """
    Smallest code over all moves. Parameters, when given, are carried along and the smallest
    parameter tuple among the minimising moves is kept, so equal surfaces get equal output.

    Returns:
        tuple[CylinderDiagram, CylinderParams | None]: Canonical diagram and parameters.
    """
    best_code, best_diagram, best_params = None, None, None
    for move in all_moves(diagram):
        candidate, moved_params = apply_move(diagram, move, params)
        code = candidate.code()
        if best_code is None or code < best_code:
            best_code, best_diagram, best_params = code, candidate, moved_params
        elif code == best_code and moved_params is not None and _param_key(moved_params) < _param_key(best_params):
            best_params = moved_params
    return best_diagram, best_params


def _param_key(params: CylinderParams) -> tuple:
    return tuple(params.widths), tuple(params.twists)


def symmetries(diagram: CylinderDiagram) -> list[DiagramMove]:
    """Moves mapping a canonical diagram onto itself."""
    code = diagram.code()
    return [move for move in all_moves(diagram) if apply_move(diagram, move)[0].code() == code]


def orbit(diagram: CylinderDiagram, moves: list[DiagramMove], params: CylinderParams) -> set[tuple]:
    return {_param_key(apply_move(diagram, move, params)[1]) for move in moves}


def generic_params(diagram: CylinderDiagram, sample: CylinderParams) -> CylinderParams:
    """A small generic perturbation of valid parameters, free of accidental symmetry."""
    free, basis = linalg.nullspace_parametrisation(diagram.equality_rows(), diagram.n_edges)
    primes = [101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179]
    scale = 1 + sum(abs(x) for row in basis for x in row)
    shift = [Fraction(1, primes[k % len(primes)] * (k + 1) * 1000) / scale for k in range(len(free))]
    widths = tuple(
        Fraction(w) + sum((row[k] * shift[k] for k in range(len(free))), Fraction(0))
        for w, row in zip(sample.widths, basis)
    )
    perturbed = CylinderParams(widths, tuple(Fraction(0) for _ in diagram.cylinders))
    twists = tuple(b * Fraction(p - 1, p) for b, p in zip(perturbed.bases(diagram), primes[::-1]))
    return CylinderParams(widths, twists)


def effective_symmetry_count(diagram: CylinderDiagram, sample: CylinderParams, moves: list[DiagramMove] | None = None) -> int:
    """Number of symmetries acting differently on parameters (the generic orbit size)."""
    moves = symmetries(diagram) if moves is None else moves
    return len(orbit(diagram, moves, generic_params(diagram, sample)))


#--- decomposition and reconstruction ---#

def _boundary_segments(surface: SquareTiledSurface, row, corner_of, side_of_flag):
    """Cut a cylinder boundary at its punctures: start column and unit slots of every segment."""
    tags = surface.vertex_tags
    vertex_of = surface.vertex_of_corner
    width = len(row)
    starts = [x for x, flag in enumerate(row) if tags[vertex_of[corner_of(flag)]] > 0]
    segments = []
    for k, start in enumerate(starts):
        stop = starts[(k + 1) % len(starts)]
        length = (stop - start) % width or width
        units = [side_of_flag(row[(start + j) % width]) for j in range(length)]
        segments.append((start, units))
    return segments


def raw_decomposition(surface: SquareTiledSurface) -> tuple[CylinderDiagram, CylinderParams]:
    """Diagram and parameters read off the horizontal cylinders, before canonical relabelling."""
    core = horizontal_core(surface)
    label_of: dict[frozenset, int] = {}
    first_side: dict[int, str] = {}
    widths: list[int] = []
    cylinders, twists = [], []

    for cylinder in core.cylinders:
        bottom_row, top_row = cylinder.rows[0], cylinder.rows[-1]
        bottom = _boundary_segments(
            surface, bottom_row, lambda f: lower_corners(f)[0], lambda f: slot(f[0], (f[1] + 3) % 4)
        )
        top = _boundary_segments(
            surface, top_row, lambda f: upper_corners(f)[1], lambda f: slot(f[0], (f[1] + 1) % 4)
        )
        sides = {}
        for side, segments in (("bottom", bottom), ("top", top)):
            occurrences = []
            for _, units in segments:
                key = frozenset(min(u, surface.partner[u]) for u in units)
                if key not in label_of:
                    label_of[key] = len(widths)
                    first_side[label_of[key]] = side
                    widths.append(len(units))
                    occurrences.append((label_of[key], 0))
                else:
                    label = label_of[key]
                    occurrences.append((label, 1 if first_side[label] == side else 0))
            sides[side] = tuple(occurrences)
        width = cylinder.width
        twists.append((top[0][0] - bottom[0][0] - 1) % width + 1)
        cylinders.append(DiagramCylinder(sides["bottom"], sides["top"], cylinder.height))

    return CylinderDiagram(tuple(cylinders)), CylinderParams(tuple(widths), tuple(twists))


def decompose(surface: SquareTiledSurface) -> tuple[CylinderDiagram, CylinderParams]:
    """
    Canonical cylinder diagram and moderately slanted parameters of a valid surface.
    """
    diagram, params = raw_decomposition(surface)
    return canonical_diagram(diagram, params)


def reconstruct(diagram: CylinderDiagram, params: CylinderParams) -> SquareTiledSurface:
    """
    Build the square-tiled surface realising integer, moderately slanted parameters.

    Cylinder i becomes a grid of b_i columns and a_i rows; saddle connection starts are the
    punctures.

    Raises:
        InvalidParams: If parameters are not integers, violate an equality, are not positive,
            or a twist lies outside (0, b].
    """
    check_params(diagram, params)
    if any(Fraction(x).denominator != 1 for x in params.widths + params.twists):
        raise InvalidParams("Reconstruction needs integer widths and twists")
    if not params.is_moderately_slanted(diagram):
        raise InvalidParams(f"Twists {list(params.twists)} are not moderately slanted")

    widths = [int(w) for w in params.widths]
    bases = [int(b) for b in params.bases(diagram)]
    total = sum(c.height * b for c, b in zip(diagram.cylinders, bases))
    marks = [0] * (4 * total)
    pairs = []
    units: dict[int, list[list[int]]] = {label: [] for label in range(diagram.n_edges)}

    offset = 0
    for cylinder, b, s in zip(diagram.cylinders, bases, params.twists):
        a = cylinder.height

        def square(row: int, column: int, offset=offset, b=b) -> int:
            return offset + row * b + column % b

        for row in range(a):
            for column in range(b):
                pairs.append((slot(square(row, column), Side.RIGHT), slot(square(row, column + 1), Side.LEFT)))
                if row + 1 < a:
                    pairs.append((slot(square(row, column), Side.TOP), slot(square(row + 1, column), Side.BOTTOM)))

        for sequence, row, start, side, corner in (
            (cylinder.bottom, 0, 0, Side.BOTTOM, 2),
            (cylinder.top, a - 1, int(s), Side.TOP, 1),
        ):
            position = start
            for label, rev in sequence:
                w = widths[label]
                marks[4 * square(row, position) + corner] = 1
                columns = [position + (w - 1 - k if rev else k) for k in range(w)]
                units[label].append([slot(square(row, c), side) for c in columns])
                position += w
        offset += a * b

    for label, (first, second) in units.items():
        pairs.extend(zip(first, second))
    return from_pairs(total, pairs, tuple(marks))
