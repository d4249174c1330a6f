"""
Combinatorial model of square-tiled surfaces.

A surface with n unit squares has 4n edge slots, slot ``4*i + side`` being side ``side`` of
square ``i`` (sides numbered counterclockwise: R=0, T=1, L=2, B=3). ``partner`` pairs the
slots; a translation gluing always joins opposite sides and a rotation gluing (by 180
degrees) always joins equal sides, which is the only way a half-translation structure can
glue two unit squares.

Corner ``4*i + k`` of square ``i`` is the corner between side ``k`` and side ``k + 1``.
Walking counterclockwise around a vertex, corner k of square i leaves through side k and
arrives at corner ``t - 1`` of the square glued along that side (``t`` the partner side).
The cycles of that walk are the vertices; a cycle of length c has cone angle c*pi/2 and
quadratic order c/2 - 2.
"""

import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property

from backend.core import constants
from backend.core.enums import GluingFlag, Side
from backend.core.errors import Disconnected, InvalidGluing, OddCycle
from backend.core.models import Stratum
from backend.core.parsers import parse_cycles
from backend.core.validators import validate_positive_int, validate_permutation

logger = logging.getLogger(__name__)

#--- slot and corner helpers ---#

def slot(square: int, side: int) -> int:
    return 4 * square + side

def square_of(index: int) -> int:
    return index // 4

def side_of(index: int) -> int:
    return index % 4

def flag_for_sides(side_a: int, side_b: int) -> GluingFlag | None:
    """Gluing flag forced by a pair of sides, None when the sides lie on different axes."""
    diff = (side_b - side_a) % 4
    if diff == 2:
        return GluingFlag.TRANSLATION
    if diff == 0:
        return GluingFlag.ROTATION
    return None

def slot_name(index: int) -> str:
    return f"{square_of(index) + 1}:{constants.SIDE_LETTERS[side_of(index)]}"


@dataclass(frozen=True)
class SquareTiledSurface:
    """
    Unit squares glued along their sides.

    Attributes:
        n_squares (int): Number of squares, equal to the area.
        partner (tuple[int, ...]): Slot paired with each slot.
        flags (tuple[GluingFlag, ...]): Gluing flag of the pair containing each slot.
        marks (tuple[int, ...] | None): Puncture tag per corner. 0 leaves a regular vertex
            unmarked; singular vertices are always punctures. None marks every vertex.

    Raises:
        ValueError: If the arrays do not have 4 * n_squares entries or a slot is out of range.
    """
    n_squares: int
    partner: tuple[int, ...]
    flags: tuple[GluingFlag, ...]
    marks: tuple[int, ...] | None = None

    def __post_init__(self):
        validate_positive_int(self.n_squares, "number of squares")
        size = 4 * self.n_squares
        if len(self.partner) != size or len(self.flags) != size:
            raise ValueError(f"Expected {size} slots, got {len(self.partner)} partners and {len(self.flags)} flags")
        if any(not 0 <= p < size for p in self.partner):
            raise ValueError("Slot index out of range in gluing")
        if self.marks is not None:
            if len(self.marks) != size:
                raise ValueError(f"Expected {size} corner marks, got {len(self.marks)}")
            if any(tag < 0 for tag in self.marks):
                raise ValueError("Corner marks must be non-negative")

    @property
    def area(self) -> int:
        return self.n_squares

    @cached_property
    def corner_successor(self) -> tuple[int, ...]:
        successor = []
        for corner in range(4 * self.n_squares):
            target = self.partner[corner]
            successor.append(4 * square_of(target) + (side_of(target) - 1) % 4)
        return tuple(successor)

    @cached_property
    def vertex_cycles(self) -> tuple[tuple[int, ...], ...]:
        """
        Corner cycles, ordered by their smallest corner.

        Raises:
            InvalidGluing: If the corner walk is not a permutation (pairing not an involution).
        """
        successor = self.corner_successor
        seen = [False] * len(successor)
        cycles = []
        for start in range(len(successor)):
            if seen[start]:
                continue
            cycle = []
            corner = start
            while not seen[corner]:
                seen[corner] = True
                cycle.append(corner)
                corner = successor[corner]
            if corner != start:
                raise InvalidGluing([f"corner walk from corner {start} does not close up"])
            cycles.append(tuple(cycle))
        return tuple(cycles)

    @cached_property
    def vertex_of_corner(self) -> tuple[int, ...]:
        vertex = [0] * (4 * self.n_squares)
        for index, cycle in enumerate(self.vertex_cycles):
            for corner in cycle:
                vertex[corner] = index
        return tuple(vertex)

    @cached_property
    def vertex_tags(self) -> tuple[int, ...]:
        tags = []
        for cycle in self.vertex_cycles:
            if self.marks is None:
                tag = 1
            else:
                tag = max(self.marks[corner] for corner in cycle)
            if tag == 0 and len(cycle) != 4:
                tag = 1
            tags.append(tag)
        return tuple(tags)

    @cached_property
    def corner_tags(self) -> tuple[int, ...]:
        tags = self.vertex_tags
        return tuple(tags[vertex] for vertex in self.vertex_of_corner)

    def vertex_order(self, vertex: int) -> int:
        return len(self.vertex_cycles[vertex]) // 2 - 2

    def is_puncture(self, vertex: int) -> bool:
        return self.vertex_tags[vertex] > 0

    @property
    def punctures(self) -> tuple[int, ...]:
        return tuple(v for v, tag in enumerate(self.vertex_tags) if tag > 0)

    def neighbour(self, square: int, side: int) -> tuple[int, int]:
        target = self.partner[slot(square, side)]
        return square_of(target), side_of(target)

    def with_marks(self, marks: tuple[int, ...] | None) -> "SquareTiledSurface":
        return SquareTiledSurface(self.n_squares, self.partner, self.flags, marks)


#--- construction ---#

def from_pairs(n_squares: int, pairs: list[tuple[int, int]], marks: tuple[int, ...] | None = None) -> SquareTiledSurface:
    """
    Build a surface from slot pairs, deriving each flag from the sides involved.

    Args:
        n_squares (int): Number of squares.
        pairs (list[tuple[int, int]]): Slot pairs covering every slot exactly once.
        marks (tuple[int, ...] | None): Optional corner marks.

    Returns:
        SquareTiledSurface: The surface (not validated).

    Raises:
        ValueError: If a slot is used twice or left unpaired.
    """
    size = 4 * n_squares
    partner = [-1] * size
    flags = [GluingFlag.TRANSLATION] * size
    for a, b in pairs:
        for s in (a, b):
            if partner[s] != -1:
                raise ValueError(f"Slot {slot_name(s)} is glued twice")
        partner[a], partner[b] = b, a
        flag = flag_for_sides(side_of(a), side_of(b)) or GluingFlag.TRANSLATION
        flags[a] = flags[b] = flag
    if -1 in partner:
        raise ValueError(f"Slot {slot_name(partner.index(-1))} is not glued")
    return SquareTiledSurface(n_squares, tuple(partner), tuple(flags), marks)


def build_from_permutations(h_perm: tuple[int, ...], v_perm: tuple[int, ...]) -> SquareTiledSurface:
    """
    Standard origami encoding: square i has h_perm(i) on its right and v_perm(i) on top.

    Args:
        h_perm (tuple[int, ...]): 0-based horizontal permutation.
        v_perm (tuple[int, ...]): 0-based vertical permutation.

    Returns:
        SquareTiledSurface: Translation-only surface with every vertex marked.

    Raises:
        ValueError: If the permutations are not bijections of the same size.
        Disconnected: If the group generated by h_perm and v_perm is not transitive.
    """
    if len(h_perm) != len(v_perm):
        raise ValueError(f"Permutations act on different sets: {len(h_perm)} and {len(v_perm)} squares")
    validate_permutation(h_perm, "h_perm")
    validate_permutation(v_perm, "v_perm")

    pairs = []
    for i in range(len(h_perm)):
        pairs.append((slot(i, Side.RIGHT), slot(h_perm[i], Side.LEFT)))
        pairs.append((slot(i, Side.TOP), slot(v_perm[i], Side.BOTTOM)))
    surface = from_pairs(len(h_perm), pairs)
    if not is_connected(surface):
        raise Disconnected(f"<h, v> is not transitive on {len(h_perm)} squares")
    return surface


def from_cycle_strings(h_text: str, v_text: str, n_squares: int | None = None) -> SquareTiledSurface:
    size = n_squares
    if size is None:
        size = max(len(parse_cycles(h_text)), len(parse_cycles(v_text)))
    return build_from_permutations(parse_cycles(h_text, size), parse_cycles(v_text, size))


def to_permutations(surface: SquareTiledSurface) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """
    Read (h, v) off a translation-only surface.

    Raises:
        ValueError: If some gluing is a rotation.
    """
    if any(flag is GluingFlag.ROTATION for flag in surface.flags):
        raise ValueError("Surface has rotation gluings; take its epsilon normal form first")
    h_perm = tuple(square_of(surface.partner[slot(i, Side.RIGHT)]) for i in range(surface.n_squares))
    v_perm = tuple(square_of(surface.partner[slot(i, Side.TOP)]) for i in range(surface.n_squares))
    return h_perm, v_perm


#--- validation ---#

def is_connected(surface: SquareTiledSurface) -> bool:
    seen = {0}
    queue = deque([0])
    while queue:
        square = queue.popleft()
        for side in range(4):
            other = square_of(surface.partner[slot(square, side)])
            if other not in seen:
                seen.add(other)
                queue.append(other)
    return len(seen) == surface.n_squares


def validate(surface: SquareTiledSurface) -> list[str]:
    """
    Check every surface invariant.

    Args:
        surface (SquareTiledSurface): The surface to check.

    Returns:
        list[str]: Violated invariants, empty when the surface is valid.
    """
    violations = []
    partner = surface.partner
    pairing_ok = True
    for s, p in enumerate(partner):
        if p == s:
            violations.append(f"slot {slot_name(s)} is paired with itself (pairing not fixed-point-free)")
            pairing_ok = False
        elif partner[p] != s:
            violations.append(f"pairing is not an involution at slot {slot_name(s)}")
            pairing_ok = False
        elif s < p:
            expected = flag_for_sides(side_of(s), side_of(p))
            if expected is None:
                violations.append(f"axis mismatch: {slot_name(s)} paired with {slot_name(p)}")
                pairing_ok = False
            elif surface.flags[s] != surface.flags[p]:
                violations.append(f"flags disagree on the pair {slot_name(s)}-{slot_name(p)}")
                pairing_ok = False
            elif surface.flags[s] != expected:
                violations.append(
                    f"{surface.flags[s].value} flag on {slot_name(s)}-{slot_name(p)}: "
                    f"only {expected.value} keeps this gluing orientable"
                )
                pairing_ok = False

    if not pairing_ok:
        return violations

    if not is_connected(surface):
        violations.append("square adjacency graph is not connected")

    for cycle in surface.vertex_cycles:
        if len(cycle) % 2:
            violations.append(f"corner cycle of odd length {len(cycle)}")

    if surface.marks is not None:
        for index, cycle in enumerate(surface.vertex_cycles):
            tags = {surface.marks[corner] for corner in cycle}
            if len(tags - {0}) > 1 or (len(tags) > 1 and len(cycle) == 4):
                violations.append(f"corners of vertex {index} carry different marks {sorted(tags)}")
        if not surface.punctures:
            violations.append("surface has no puncture")
    return violations


def require_valid(surface: SquareTiledSurface) -> SquareTiledSurface:
    violations = validate(surface)
    if violations:
        raise InvalidGluing(violations)
    return surface


#--- singularities ---#

@dataclass(frozen=True)
class SingularityProfile:
    """
    Attributes:
        stratum (Stratum): Orders of the punctures and epsilon.
        vertex_of_corner (tuple[int, ...]): Vertex index of every corner.
        vertex_orders (tuple[int, ...]): Quadratic order of every vertex, punctures or not.
        punctures (tuple[int, ...]): Vertices that are punctures.
    """
    stratum: Stratum
    vertex_of_corner: tuple[int, ...]
    vertex_orders: tuple[int, ...]
    punctures: tuple[int, ...]


def singularity_profile(surface: SquareTiledSurface) -> SingularityProfile:
    """
    Compute the stratum of a surface from its corner cycles.

    Each cycle of length c gives a vertex of quadratic order c/2 - 2. The genus read from the
    orders (sum = 4g - 4) is checked against the Euler characteristic V - 2n + n.

    Raises:
        OddCycle: If some corner cycle has odd length.
        InvalidGluing: If the two genus computations disagree.
    """
    for cycle in surface.vertex_cycles:
        if len(cycle) % 2:
            raise OddCycle(len(cycle))

    orders = tuple(len(cycle) // 2 - 2 for cycle in surface.vertex_cycles)
    euler = len(orders) - surface.n_squares
    if euler % 2 or 4 * ((2 - euler) // 2) - 4 != sum(orders):
        raise InvalidGluing([f"Euler characteristic {euler} disagrees with order sum {sum(orders)}"])

    punctures = surface.punctures
    stratum = Stratum(tuple(orders[v] for v in punctures), epsilon(surface).epsilon)
    return SingularityProfile(stratum, surface.vertex_of_corner, orders, punctures)


#--- orientability ---#

@dataclass(frozen=True)
class EpsilonResult:
    """
    Attributes:
        epsilon (int): 1 when the sign-constraint graph is 2-colourable.
        normal_form (SquareTiledSurface | None): Translation-only surface obtained by turning
            every square of sign -1, None when epsilon is 0.
        signs (tuple[int, ...] | None): Sign of every square, None when epsilon is 0.
    """
    epsilon: int
    normal_form: SquareTiledSurface | None = None
    signs: tuple[int, ...] | None = None


def epsilon(surface: SquareTiledSurface) -> EpsilonResult:
    """
    Decide whether the quadratic differential is globally the square of an abelian one.

    Translation gluings force equal signs on the two squares, rotation gluings opposite
    signs; epsilon is 1 iff these constraints can be met.
    """
    signs = [0] * surface.n_squares
    for start in range(surface.n_squares):
        if signs[start]:
            continue
        signs[start] = 1
        queue = deque([start])
        while queue:
            square = queue.popleft()
            for side in range(4):
                index = slot(square, side)
                other = square_of(surface.partner[index])
                relation = 1 if surface.flags[index] is GluingFlag.TRANSLATION else -1
                wanted = signs[square] * relation
                if signs[other] == 0:
                    signs[other] = wanted
                    queue.append(other)
                elif signs[other] != wanted:
                    return EpsilonResult(0)

    flipped = {i for i, sign in enumerate(signs) if sign < 0}
    return EpsilonResult(1, flip_squares(surface, flipped), tuple(signs))


#--- relabelling and symmetries ---#

def _transform(surface: SquareTiledSurface, square_map, turn) -> SquareTiledSurface:
    """Move square i to square_map[i] turned by turn[i] quarter turns counterclockwise."""
    size = 4 * surface.n_squares

    def moved(index: int) -> int:
        square = square_of(index)
        return 4 * square_map[square] + (side_of(index) + turn[square]) % 4

    partner = [0] * size
    flags = [GluingFlag.TRANSLATION] * size
    for index in range(size):
        partner[moved(index)] = moved(surface.partner[index])
    for index in range(size):
        derived = flag_for_sides(side_of(index), side_of(partner[index]))
        flags[index] = derived if derived is not None else surface.flags[index]

    marks = None
    if surface.marks is not None:
        new_marks = [0] * size
        for corner in range(size):
            new_marks[moved(corner)] = surface.marks[corner]
        marks = tuple(new_marks)
    return SquareTiledSurface(surface.n_squares, tuple(partner), tuple(flags), marks)


def relabel(surface: SquareTiledSurface, square_map: tuple[int, ...]) -> SquareTiledSurface:
    validate_permutation(tuple(square_map), "square relabelling")
    return _transform(surface, square_map, [0] * surface.n_squares)


def flip_squares(surface: SquareTiledSurface, squares: set[int]) -> SquareTiledSurface:
    """Turn the marking of the given squares by 180 degrees (same surface, new description)."""
    turn = [2 if i in squares else 0 for i in range(surface.n_squares)]
    return _transform(surface, list(range(surface.n_squares)), turn)


def rotate90(surface: SquareTiledSurface) -> SquareTiledSurface:
    """Rotate the whole surface a quarter turn counterclockwise: R -> T -> L -> B -> R."""
    return _transform(surface, list(range(surface.n_squares)), [1] * surface.n_squares)


def rotate180(surface: SquareTiledSurface) -> SquareTiledSurface:
    return rotate90(rotate90(surface))


#--- canonical form ---#

@dataclass(frozen=True)
class FrameWalk:
    """
    Breadth-first relabelling of a surface from a start square in a start frame.

    Attributes:
        order (tuple[int, ...]): Original square of each new label.
        frames (tuple[int, ...]): Frame (0 or 2 quarter turns) of each original square.
        gluing (tuple[int, ...]): For each new label and frame side, 4 * label + frame side of the partner.
        tags (tuple[int, ...]): For each new label and frame corner, the puncture tag.
    """
    order: tuple[int, ...]
    frames: tuple[int, ...]
    gluing: tuple[int, ...]
    tags: tuple[int, ...]

    @property
    def code(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return self.gluing, self.tags


def frame_walk(surface: SquareTiledSurface, start: int, frame: int) -> FrameWalk:
    n = surface.n_squares
    label = [-1] * n
    frames = [0] * n
    order = [start]
    label[start] = 0
    frames[start] = frame
    gluing = []
    head = 0
    while head < len(order):
        square = order[head]
        head += 1
        turn = frames[square]
        for side in range(4):
            target = surface.partner[slot(square, (side + turn) % 4)]
            other, target_side = square_of(target), side_of(target)
            if label[other] < 0:
                label[other] = len(order)
                frames[other] = (target_side - side - 2) % 4
                order.append(other)
            gluing.append(4 * label[other] + (target_side - frames[other]) % 4)

    corner_tags = surface.corner_tags
    tags = tuple(
        corner_tags[4 * square + (corner + frames[square]) % 4]
        for square in order
        for corner in range(4)
    )
    return FrameWalk(tuple(order), tuple(frames), tuple(gluing), tags)


def _starts(surface: SquareTiledSurface):
    for square in range(surface.n_squares):
        for frame in (0, 2):
            yield square, frame


def encode_code(n_squares: int, gluing: tuple[int, ...], tags: tuple[int, ...]) -> bytes:
    text = f"{n_squares}/" + ".".join(map(str, gluing)) + "~" + ".".join(map(str, tags))
    return text.encode("ascii")


def canonical_walks(surface: SquareTiledSurface) -> list[FrameWalk]:
    """All frame walks achieving the lexicographically smallest code."""
    best = None
    walks = []
    for square, frame in _starts(surface):
        walk = frame_walk(surface, square, frame)
        code = walk.code
        if best is None or code < best:
            best = code
            walks = [walk]
        elif code == best:
            walks.append(walk)
    return walks


def canonical_form(surface: SquareTiledSurface) -> bytes:
    """
    Canonical code, equal for two surfaces iff they differ by relabelling squares and turning
    squares by 180 degrees (cut and paste equivalence).

    Computed as the smallest breadth-first code over every (square, frame) start.
    """
    walk = canonical_walks(surface)[0]
    return encode_code(surface.n_squares, walk.gluing, walk.tags)


def is_canonical_gluing(surface: SquareTiledSurface, reference: tuple[int, ...]) -> bool:
    """
    True when no start produces a gluing code smaller than ``reference``.

    Comparison stops at the first differing entry, so most starts are discarded early.
    """
    n = surface.n_squares
    for start, frame in _starts(surface):
        label = [-1] * n
        frames = [0] * n
        order = [start]
        label[start] = 0
        frames[start] = frame
        position = 0
        head = 0
        verdict = 0
        while head < len(order) and verdict == 0:
            square = order[head]
            head += 1
            turn = frames[square]
            for side in range(4):
                target = surface.partner[slot(square, (side + turn) % 4)]
                other, target_side = square_of(target), side_of(target)
                if label[other] < 0:
                    label[other] = len(order)
                    frames[other] = (target_side - side - 2) % 4
                    order.append(other)
                entry = 4 * label[other] + (target_side - frames[other]) % 4
                if entry != reference[position]:
                    verdict = -1 if entry < reference[position] else 1
                    break
                position += 1
        if verdict < 0:
            return False
    return True


def surface_from_code(code: bytes | str) -> SquareTiledSurface:
    """
    Rebuild the surface described by a canonical code.

    Raises:
        ValueError: If the code is malformed.
    """
    text = code.decode("ascii") if isinstance(code, bytes) else code
    try:
        head, body = text.split("/", 1)
        gluing_text, tag_text = body.split("~", 1)
        n = int(head)
        gluing = [int(x) for x in gluing_text.split(".")]
        tags = tuple(int(x) for x in tag_text.split("."))
    except ValueError as e:
        raise ValueError(f"Malformed surface code: '{text}'") from e
    if len(gluing) != 4 * n or len(tags) != 4 * n:
        raise ValueError(f"Malformed surface code: '{text}'")

    pairs = [(s, p) for s, p in enumerate(gluing) if s < p]
    if any(gluing[p] != s for s, p in enumerate(gluing)):
        raise ValueError(f"Surface code does not describe an involution: '{text}'")
    return from_pairs(n, pairs, tags)


#--- automorphisms ---#

@dataclass(frozen=True)
class SurfaceMap:
    """
    A self-map of a surface sending square i, turned by ``turn[i]`` quarter turns, onto
    square ``square_map[i]``.
    """
    square_map: tuple[int, ...]
    turn: tuple[int, ...]

    def map_corner(self, corner: int) -> int:
        square = square_of(corner)
        return 4 * self.square_map[square] + (side_of(corner) + self.turn[square]) % 4

    def map_slot(self, index: int) -> int:
        return self.map_corner(index)

    def is_identity(self) -> bool:
        return all(target == i for i, target in enumerate(self.square_map)) and not any(self.turn)


def automorphisms(surface: SquareTiledSurface, respect_tags: bool = True) -> list[SurfaceMap]:
    """
    Every isomorphism of the surface onto itself.

    Two starts producing the same code give an isomorphism between the two relabellings;
    composing with a fixed reference start yields the automorphism group.

    Args:
        surface (SquareTiledSurface): The surface.
        respect_tags (bool): Whether the maps must preserve puncture tags.

    Returns:
        list[SurfaceMap]: The automorphisms, identity first.
    """
    reference = frame_walk(surface, 0, 0)
    key = reference.code if respect_tags else reference.gluing
    maps = []
    for square, frame in _starts(surface):
        walk = frame_walk(surface, square, frame)
        if (walk.code if respect_tags else walk.gluing) != key:
            continue
        square_map = [0] * surface.n_squares
        turn = [0] * surface.n_squares
        for label, original in enumerate(reference.order):
            image = walk.order[label]
            square_map[original] = image
            turn[original] = (walk.frames[image] - reference.frames[original]) % 4
        maps.append(SurfaceMap(tuple(square_map), tuple(turn)))
    maps.sort(key=lambda m: not m.is_identity())
    return maps


#--- text format ---#

def format_surface_text(surface: SquareTiledSurface) -> str:
    """
    Text encoding: ``n=<int>`` then one ``slot slot flag`` line per pair, slots written
    ``<square>:<R|L|T|B>`` with squares numbered from 1, and an optional ``marks`` line.
    """
    lines = [f"n={surface.n_squares}"]
    for s, p in enumerate(surface.partner):
        if s < p:
            lines.append(f"{slot_name(s)} {slot_name(p)} {surface.flags[s].value}")
    if surface.marks is not None:
        marked = [f"{square_of(c) + 1}:{side_of(c)}={tag}" for c, tag in enumerate(surface.marks) if tag]
        lines.append("marks " + " ".join(marked))
    return "\n".join(lines)


def _parse_slot(token: str, n: int) -> int:
    try:
        square_text, letter = token.split(":")
        square = int(square_text) - 1
        side = constants.SIDE_LETTERS.index(letter.upper())
    except ValueError as e:
        raise ValueError(f"Invalid slot '{token}': expected <square>:<R|L|T|B>") from e
    if not 0 <= square < n:
        raise ValueError(f"Slot '{token}' refers to a square outside 1..{n}")
    return slot(square, side)


def parse_surface_text(text: str) -> SquareTiledSurface:
    """
    Parse the text encoding written by ``format_surface_text`` or the permutation shorthand
    ``h=<cycles> v=<cycles>``.

    Flags read from the text are kept as given so that ``validate`` can report inconsistent
    ones.

    Raises:
        ValueError: If the text is malformed.
        Disconnected: If permutation shorthand describes a disconnected surface.
    """
    stripped = text.strip()
    if stripped.startswith("h="):
        parts = dict(part.split("=", 1) for part in stripped.split() if "=" in part)
        if "v" not in parts:
            raise ValueError("Permutation shorthand needs both h=<cycles> and v=<cycles>")
        return from_cycle_strings(parts["h"], parts["v"])

    lines = [line.strip() for line in stripped.splitlines() if line.strip() and not line.strip().startswith("#")]
    if not lines or not lines[0].startswith("n="):
        raise ValueError("Surface text must start with n=<int>")
    n = int(lines[0][2:])
    validate_positive_int(n, "number of squares")

    size = 4 * n
    partner = [-1] * size
    flags = [GluingFlag.TRANSLATION] * size
    marks = None
    for line in lines[1:]:
        tokens = line.split()
        if tokens[0] == "marks":
            corner_marks = [0] * size
            for token in tokens[1:]:
                place, tag = token.split("=")
                square_text, corner_text = place.split(":")
                corner_marks[4 * (int(square_text) - 1) + int(corner_text)] = int(tag)
            marks = tuple(corner_marks)
            continue
        if len(tokens) != 3:
            raise ValueError(f"Invalid gluing line '{line}': expected 'slot slot flag'")
        a, b = _parse_slot(tokens[0], n), _parse_slot(tokens[1], n)
        flag = GluingFlag(tokens[2].lower())
        for s in (a, b):
            if partner[s] != -1:
                raise ValueError(f"Slot {slot_name(s)} is glued twice")
        partner[a], partner[b] = b, a
        flags[a] = flags[b] = flag
        if a == b:
            partner[a] = a
    if -1 in partner:
        raise ValueError(f"Slot {slot_name(partner.index(-1))} is not glued")
    return SquareTiledSurface(n, tuple(partner), tuple(flags), marks)
