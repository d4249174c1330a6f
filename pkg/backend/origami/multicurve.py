"""
Horizontal and vertical core multicurves of square-tiled surfaces and their topological types.

A row is the closed horizontal trajectory through the centres of a sequence of squares,
recorded as oriented flags ``(square, frame)``: frame 0 moves towards the square's right side,
frame 2 towards its left side. Rows stacked across boundaries that carry no puncture form a
maximal cylinder; the core curve of a cylinder gets the cylinder height as weight.
"""

import itertools
import logging
from dataclasses import dataclass, field

from backend.core.errors import InvalidGluing
from .surface import SquareTiledSurface, rotate90, side_of, slot, square_of

logger = logging.getLogger(__name__)

Flag = tuple[int, int]


@dataclass(frozen=True)
class Piece:
    """
    A complementary subsurface of the core multicurve.

    Attributes:
        genus (int): Genus of the piece.
        punctures (int): Number of punctures (singularities) inside the piece.
        boundaries (int): Number of curve sides attached to the piece.
        labels (tuple[int, ...]): Sorted puncture tags, only filled in labelled mode.
    """
    genus: int
    punctures: int
    boundaries: int
    labels: tuple[int, ...] = ()

    def token(self) -> str:
        text = f"g{self.genus}p{self.punctures}b{self.boundaries}"
        if self.labels:
            text += "[" + ".".join(map(str, self.labels)) + "]"
        return text


@dataclass(frozen=True)
class MultiCurveType:
    """
    Topological type of an integrally weighted multicurve: the decomposition multigraph with
    pieces as vertices and weighted curves as edges, stored in canonical labelling.

    Attributes:
        pieces (tuple[Piece, ...]): Vertices in canonical order.
        edges (tuple[tuple[int, int, int], ...]): Sorted (u, v, weight) with u <= v.

    Raises:
        ValueError: If a weight is not positive, an edge refers to a missing piece or a piece's
            boundary count differs from its number of incident curve sides.
    """
    pieces: tuple[Piece, ...]
    edges: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        degree = [0] * len(self.pieces)
        for u, v, weight in self.edges:
            if weight < 1:
                raise ValueError(f"Curve weights must be positive, got {weight}")
            if not (0 <= u < len(self.pieces) and 0 <= v < len(self.pieces)):
                raise ValueError(f"Curve {u}-{v} refers to a missing piece")
            degree[u] += 1
            degree[v] += 1
        for piece, count in zip(self.pieces, degree):
            if piece.boundaries != count:
                raise ValueError(f"Piece {piece.token()} has {count} incident curve sides")

    @property
    def token(self) -> str:
        vertices = ",".join(piece.token() for piece in self.pieces)
        edges = ",".join(f"{u}-{v}w{w}" for u, v, w in self.edges)
        return f"V:{vertices};E:{edges}"

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(sorted(w for _, _, w in self.edges))

    def euler_characteristic(self) -> int:
        return sum(2 - 2 * p.genus - p.boundaries - p.punctures for p in self.pieces)

    def __str__(self) -> str:
        return self.token


def type_equal(first: MultiCurveType, second: MultiCurveType) -> bool:
    return first.token == second.token


def parse_type_token(text: str) -> MultiCurveType:
    """
    Parse ``V:g0p1b2,...;E:0-0w1,...`` back into a canonical MultiCurveType.

    Raises:
        ValueError: If the token is malformed.
    """
    try:
        vertex_part, edge_part = text.strip().split(";")
        if not vertex_part.startswith("V:") or not edge_part.startswith("E:"):
            raise ValueError(text)
        pieces = []
        for item in filter(None, vertex_part[2:].split(",")):
            labels = ()
            if "[" in item:
                item, label_text = item.rstrip("]").split("[")
                labels = tuple(int(x) for x in label_text.split("."))
            genus, rest = item[1:].split("p")
            punctures, boundaries = rest.split("b")
            pieces.append(Piece(int(genus), int(punctures), int(boundaries), labels))
        edges = []
        for item in filter(None, edge_part[2:].split(",")):
            ends, weight = item.split("w")
            u, v = ends.split("-")
            edges.append((int(u), int(v), int(weight)))
    except ValueError as e:
        raise ValueError(f"Invalid multicurve type '{text}': expected V:g<int>p<int>b<int>,...;E:<u>-<v>w<int>,...") from e
    return canonical_type(pieces, edges)


#--- canonical labelling ---#

def _refine(pieces: list[Piece], edges: list[tuple[int, int, int]]) -> list[int]:
    """Colour refinement: piece signature extended with the multiset of neighbouring colours."""
    signatures = [(p.genus, p.punctures, p.boundaries, p.labels) for p in pieces]
    ranks = {s: k for k, s in enumerate(sorted(set(signatures)))}
    colours = [ranks[s] for s in signatures]
    while True:
        neighbourhoods = [[] for _ in pieces]
        for u, v, w in edges:
            neighbourhoods[u].append((w, colours[v]))
            neighbourhoods[v].append((w, colours[u]))
        refined = [(colours[i], tuple(sorted(neighbourhoods[i]))) for i in range(len(pieces))]
        ranks = {s: k for k, s in enumerate(sorted(set(refined)))}
        new_colours = [ranks[s] for s in refined]
        if len(ranks) == len(set(colours)):
            return colours
        colours = new_colours


def _relabel_edges(edges, position: dict[int, int]) -> tuple[tuple[int, int, int], ...]:
    return tuple(sorted(
        (min(position[u], position[v]), max(position[u], position[v]), w) for u, v, w in edges
    ))


def canonical_order(pieces: list[Piece], edges: list[tuple[int, int, int]]) -> dict[int, int]:
    """
    New position of every piece in the canonical labelling.

    Pieces are grouped by refined colour; only orderings inside a colour class are tried and
    the one giving the smallest sorted edge list wins.
    """
    colours = _refine(pieces, edges)
    classes: dict[int, list[int]] = {}
    for index, colour in enumerate(colours):
        classes.setdefault(colour, []).append(index)
    ordered_classes = [classes[c] for c in sorted(classes)]

    best_edges, best_position = None, None
    for arrangement in itertools.product(*(itertools.permutations(group) for group in ordered_classes)):
        order = [index for group in arrangement for index in group]
        position = {old: new for new, old in enumerate(order)}
        relabelled = _relabel_edges(edges, position)
        if best_edges is None or relabelled < best_edges:
            best_edges, best_position = relabelled, position
    return best_position


def _type_from_order(pieces: list[Piece], edges, position: dict[int, int]) -> MultiCurveType:
    ordered = [None] * len(pieces)
    for old, new in position.items():
        ordered[new] = pieces[old]
    return MultiCurveType(tuple(ordered), _relabel_edges(edges, position))


def canonical_type(pieces: list[Piece], edges: list[tuple[int, int, int]]) -> MultiCurveType:
    return _type_from_order(pieces, edges, canonical_order(pieces, edges))


#--- core extraction ---#

@dataclass
class Cylinder:
    """
    A maximal horizontal cylinder.

    Attributes:
        rows (list[list[Flag]]): Rows from bottom to top, each an oriented cycle of flags.
        bottom_piece (int): Raw index of the piece glued to the bottom boundary.
        top_piece (int): Raw index of the piece glued to the top boundary.
    """
    rows: list[list[Flag]]
    bottom_piece: int = -1
    top_piece: int = -1

    @property
    def height(self) -> int:
        return len(self.rows)

    @property
    def width(self) -> int:
        return len(self.rows[0])


@dataclass
class HorizontalCore:
    """
    Attributes:
        type (MultiCurveType): Canonical topological type.
        cylinders (list[Cylinder]): Cylinders in discovery order.
        edge_of_cylinder (list[int]): Index of each cylinder's curve in ``type.edges``.
        pieces (list[Piece]): Raw pieces before canonical relabelling.
    """
    type: MultiCurveType
    cylinders: list[Cylinder]
    edge_of_cylinder: list[int] = field(default_factory=list)
    pieces: list[Piece] = field(default_factory=list)


def next_flag(surface: SquareTiledSurface, flag: Flag) -> Flag:
    square, frame = flag
    target = surface.partner[slot(square, frame)]
    # Entered through frame side 2 of the next square
    return square_of(target), (side_of(target) - 2) % 4


def reverse_flag(flag: Flag) -> Flag:
    return flag[0], (flag[1] + 2) % 4


def upper_corners(flag: Flag) -> tuple[int, int]:
    square, frame = flag
    return 4 * square + frame, 4 * square + (frame + 1) % 4


def lower_corners(flag: Flag) -> tuple[int, int]:
    square, frame = flag
    return 4 * square + (frame + 2) % 4, 4 * square + (frame + 3) % 4


def flag_above(surface: SquareTiledSurface, flag: Flag) -> Flag:
    square, frame = flag
    target = surface.partner[slot(square, frame + 1)]
    return square_of(target), (side_of(target) - 3) % 4


def trace_row(surface: SquareTiledSurface, start: Flag) -> list[Flag]:
    row = [start]
    flag = next_flag(surface, start)
    while flag != start:
        if len(row) > surface.n_squares:
            raise InvalidGluing([f"horizontal trajectory from square {start[0] + 1} does not close"])
        row.append(flag)
        flag = next_flag(surface, flag)
    return row


def _row_starting_at(row: list[Flag], flag: Flag) -> list[Flag]:
    k = row.index(flag)
    return row[k:] + row[:k]


def horizontal_core(surface: SquareTiledSurface, labeled: bool = False) -> HorizontalCore:
    """
    Extract the horizontal cylinders and the canonical type of the horizontal core multicurve.

    Args:
        surface (SquareTiledSurface): A valid surface.
        labeled (bool): Record puncture tags on the pieces.

    Returns:
        HorizontalCore: The type together with the cylinder to curve assignment.
    """
    tags = surface.vertex_tags
    vertex_of = surface.vertex_of_corner

    def clean(corners: tuple[int, int]) -> bool:
        return all(tags[vertex_of[c]] == 0 for c in corners)

    row_of: dict[Flag, int] = {}
    rows: list[list[Flag]] = []
    for square in range(surface.n_squares):
        for frame in (0, 2):
            if (square, frame) in row_of:
                continue
            row = trace_row(surface, (square, frame))
            for flag in row:
                row_of[flag] = len(rows)
            rows.append(row)

    claimed = set()
    cylinders = []
    for index, row in enumerate(rows):
        if index in claimed or row_of[reverse_flag(row[0])] in claimed:
            continue
        # Walk down to the bottom row, keeping the orientation of ``row``
        bottom = row[0]
        steps = 0
        while all(clean(lower_corners(f)) for f in rows[row_of[bottom]]):
            steps += 1
            if steps > len(rows):
                raise InvalidGluing(["surface has no puncture on its horizontal leaves"])
            bottom = reverse_flag(flag_above(surface, reverse_flag(bottom)))
        stack = []
        current = bottom
        while True:
            if len(stack) > len(rows):
                raise InvalidGluing(["surface has no puncture on its horizontal leaves"])
            current_row = _row_starting_at(rows[row_of[current]], current)
            stack.append(current_row)
            claimed.add(row_of[current])
            claimed.add(row_of[reverse_flag(current)])
            if not all(clean(upper_corners(f)) for f in current_row):
                break
            current = flag_above(surface, current)
        cylinders.append(Cylinder(stack))

    area = sum(c.height * c.width for c in cylinders)
    if area != surface.n_squares:
        raise InvalidGluing([f"cylinder areas sum to {area}, expected {surface.n_squares}"])

    pieces, raw_edges = _pieces(surface, cylinders, labeled)
    position = canonical_order(pieces, raw_edges)
    mc_type = _type_from_order(pieces, raw_edges, position)
    edge_of_cylinder = _assign_edges(mc_type, raw_edges, position)
    logger.debug("Horizontal core of %d squares: %s", surface.n_squares, mc_type.token)
    return HorizontalCore(mc_type, cylinders, edge_of_cylinder, pieces)


def _pieces(surface: SquareTiledSurface, cylinders: list[Cylinder], labeled: bool):
    """Union the punctures met along each cylinder boundary into complementary pieces."""
    tags = surface.vertex_tags
    vertex_of = surface.vertex_of_corner
    parent = {v: v for v in surface.punctures}

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    boundaries = []
    for cylinder in cylinders:
        for row, corners_of in ((cylinder.rows[0], lower_corners), (cylinder.rows[-1], upper_corners)):
            found = sorted({vertex_of[c] for f in row for c in corners_of(f) if tags[vertex_of[c]] > 0})
            for v in found[1:]:
                parent[find(v)] = find(found[0])
            boundaries.append(found[0])

    roots = sorted({find(v) for v in parent})
    index_of = {root: k for k, root in enumerate(roots)}
    boundary_count = [0] * len(roots)
    members: list[list[int]] = [[] for _ in roots]
    for v in parent:
        members[index_of[find(v)]].append(v)
    for k, cylinder in enumerate(cylinders):
        cylinder.bottom_piece = index_of[find(boundaries[2 * k])]
        cylinder.top_piece = index_of[find(boundaries[2 * k + 1])]
        boundary_count[cylinder.bottom_piece] += 1
        boundary_count[cylinder.top_piece] += 1

    pieces = []
    for k, vertices in enumerate(members):
        saddle_connections = sum(len(surface.vertex_cycles[v]) // 2 for v in vertices) // 2
        euler = len(vertices) - saddle_connections
        genus = (2 - boundary_count[k] - euler) // 2
        labels = tuple(sorted(tags[v] for v in vertices)) if labeled else ()
        pieces.append(Piece(genus, len(vertices), boundary_count[k], labels))
    edges = [(c.bottom_piece, c.top_piece, c.height) for c in cylinders]
    return pieces, edges


def _assign_edges(mc_type: MultiCurveType, raw_edges, position: dict[int, int]) -> list[int]:
    """Index of each raw cylinder's curve in the canonical edge list."""
    used = set()
    assignment = []
    for u, v, w in raw_edges:
        key = (min(position[u], position[v]), max(position[u], position[v]), w)
        k = next(k for k, edge in enumerate(mc_type.edges) if edge == key and k not in used)
        used.add(k)
        assignment.append(k)
    return assignment


def vertical_core(surface: SquareTiledSurface, labeled: bool = False) -> MultiCurveType:
    """Type of the vertical core multicurve: the horizontal core of the quarter-turned surface."""
    return horizontal_core(rotate90(surface), labeled).type
