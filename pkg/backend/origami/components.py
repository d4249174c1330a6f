import logging
from collections import deque

from backend.core import constants
from backend.core.enums import Side
from backend.core.errors import UnclassifiedComponent
from backend.core.models import ComponentTag
from .surface import (
    SquareTiledSurface, SurfaceMap, epsilon, frame_walk, side_of, singularity_profile, slot, square_of,
)

logger = logging.getLogger(__name__)


def component_tag(surface: SquareTiledSurface) -> ComponentTag:
    """
    Connected component invariants of a valid surface.

    For epsilon = 1 the surface is first brought to its translation-only normal form, then the
    hyperelliptic involution is searched and the spin parity computed when defined. Quadratic
    surfaces are only classified in genus at most one, where every non-empty stratum is connected.

    Args:
        surface (SquareTiledSurface): A valid surface.

    Returns:
        ComponentTag: The component invariants.

    Raises:
        UnclassifiedComponent: For epsilon = 0 surfaces of genus two or more.
    """
    eps = epsilon(surface)
    full = singularity_profile(surface)
    genus = full.stratum.genus
    if eps.epsilon == 0:
        if genus <= constants.CONNECTED_QUADRATIC_MAX_GENUS:
            return ComponentTag(hyperelliptic=False, spin_parity=None, classified=True)
        raise UnclassifiedComponent(full.stratum)

    translation = eps.normal_form
    # Regular marked points do not change the component of the underlying stratum
    zero_orders = tuple(sorted((o for o in full.vertex_orders if o != 0), reverse=True))
    hyperelliptic = is_hyperelliptic(translation, genus, zero_orders)
    spin = spin_parity(translation) if spin_applicable(genus, zero_orders) else None
    return ComponentTag(hyperelliptic=hyperelliptic, spin_parity=spin, classified=True)


def spin_applicable(genus: int, zero_orders: tuple[int, ...]) -> bool:
    if genus < 2:
        return False
    return all((order // 2) % 2 == 0 for order in zero_orders)


#--- hyperelliptic involution ---#

def rotation_involutions(surface: SquareTiledSurface) -> list[SurfaceMap]:
    """
    Self-maps of a translation-only surface acting as a 180 degree rotation on every square
    and squaring to the identity.
    """
    reference = frame_walk(surface, 0, 0)
    involutions = []
    for target in range(surface.n_squares):
        walk = frame_walk(surface, target, 2)
        if walk.gluing != reference.gluing:
            continue
        square_map = [0] * surface.n_squares
        for label, original in enumerate(reference.order):
            square_map[original] = walk.order[label]
        candidate = SurfaceMap(tuple(square_map), (2,) * surface.n_squares)
        if all(square_map[square_map[i]] == i for i in range(surface.n_squares)):
            involutions.append(candidate)
    return involutions


def fixed_point_count(surface: SquareTiledSurface, involution: SurfaceMap) -> int:
    """Fixed square centres, edge midpoints and vertices of a rotation involution."""
    centres = sum(1 for i, image in enumerate(involution.square_map) if image == i)
    edges = sum(
        1 for index in range(4 * surface.n_squares)
        if involution.map_slot(index) == surface.partner[index]
    ) // 2
    vertex_of = surface.vertex_of_corner
    vertices = sum(
        1 for cycle in surface.vertex_cycles
        if vertex_of[involution.map_corner(cycle[0])] == vertex_of[cycle[0]]
    )
    return centres + edges + vertices


def is_hyperelliptic(surface: SquareTiledSurface, genus: int, zero_orders: tuple[int, ...]) -> bool:
    """
    Whether the translation surface lies in a hyperelliptic component.

    Only H(2g-2) and H(g-1, g-1) have one (besides genus one, where every surface qualifies).
    The involution must have 2g + 2 fixed points, fix the single zero of H(2g-2) and swap the
    two zeros of H(g-1, g-1).
    """
    zeros = tuple(v for v, cycle in enumerate(surface.vertex_cycles) if len(cycle) != 4)
    if genus >= 2 and zero_orders not in ((4 * genus - 4,), (2 * genus - 2, 2 * genus - 2)):
        return False

    for involution in rotation_involutions(surface):
        if genus <= 1:
            return True
        if fixed_point_count(surface, involution) != 2 * genus + 2:
            continue
        if len(zeros) == 2:
            first = surface.vertex_cycles[zeros[0]][0]
            if surface.vertex_of_corner[involution.map_corner(first)] != zeros[1]:
                continue
        return True
    return False


#--- spin parity ---#

def _dual_cycles(surface: SquareTiledSurface) -> list[list[tuple[int, int]]]:
    """
    Fundamental cycles of the square adjacency graph, each as the cyclic list of moves
    (exit slot, entry slot).
    """
    parent_slot = [-1] * surface.n_squares
    depth = [0] * surface.n_squares
    seen = [False] * surface.n_squares
    seen[0] = True
    tree_edges = set()
    queue = deque([0])
    while queue:
        square = queue.popleft()
        for side in range(4):
            exit_slot = slot(square, side)
            entry = surface.partner[exit_slot]
            other = square_of(entry)
            if not seen[other]:
                seen[other] = True
                parent_slot[other] = entry
                depth[other] = depth[square] + 1
                tree_edges.add(min(exit_slot, entry))
                queue.append(other)

    def up_moves(square: int, stop: int) -> list[tuple[int, int]]:
        moves = []
        while square != stop:
            exit_slot = parent_slot[square]
            moves.append((exit_slot, surface.partner[exit_slot]))
            square = square_of(surface.partner[exit_slot])
        return moves

    def ancestor(a: int, b: int) -> int:
        while depth[a] > depth[b]:
            a = square_of(surface.partner[parent_slot[a]])
        while depth[b] > depth[a]:
            b = square_of(surface.partner[parent_slot[b]])
        while a != b:
            a = square_of(surface.partner[parent_slot[a]])
            b = square_of(surface.partner[parent_slot[b]])
        return a

    cycles = []
    for index in range(4 * surface.n_squares):
        entry = surface.partner[index]
        if index > entry or index in tree_edges:
            continue
        start, end = square_of(index), square_of(entry)
        meet = ancestor(start, end)
        down = [(entry_slot, exit_slot) for exit_slot, entry_slot in reversed(up_moves(start, meet))]
        cycles.append([(index, entry)] + up_moves(end, meet) + down)
    return cycles


def _turning_parity(moves: list[tuple[int, int]]) -> int:
    """Turning number mod 2 of the closed curve through the square centres along the moves."""
    quarter_turns = 0
    for position, (_, entry_slot) in enumerate(moves):
        exit_slot = moves[(position + 1) % len(moves)][0]
        turn = (side_of(exit_slot) - side_of(entry_slot) - 2) % 4
        if turn == 1:
            quarter_turns += 1
        elif turn == 3:
            quarter_turns -= 1
    return (quarter_turns // 4) % 2


def _intersection_mod2(surface: SquareTiledSurface, first: set[int], second: set[int]) -> int:
    """
    Mod 2 intersection of two dual cycles given by their crossed edges, as the cup product of
    their crossing cochains over the triangulation cutting each square along its diagonal.
    """
    def crossed(edges: set[int], square: int, side: int) -> int:
        index = slot(square, side)
        return 1 if min(index, surface.partner[index]) in edges else 0

    total = 0
    for square in range(surface.n_squares):
        total += crossed(first, square, Side.BOTTOM) * crossed(second, square, Side.RIGHT)
        total += crossed(first, square, Side.LEFT) * crossed(second, square, Side.TOP)
    return total % 2


def spin_parity(surface: SquareTiledSurface) -> int:
    """
    Arf invariant of the quadratic form Phi(c) = ind(c) + 1 (mod 2) on H1(S; Z/2).

    The surface must be translation-only with all zeros of even order. Phi is evaluated on
    simple dual cycles and extended with Phi(x + y) = Phi(x) + Phi(y) + x.y; a symplectic
    basis comes from Gram-Schmidt over Z/2.
    """
    cycles = _dual_cycles(surface)
    size = len(cycles)
    phi = [(_turning_parity(moves) + 1) % 2 for moves in cycles]
    edge_sets = [{min(exit_slot, entry) for exit_slot, entry in moves} for moves in cycles]
    gram = [[_intersection_mod2(surface, edge_sets[i], edge_sets[j]) for j in range(size)] for i in range(size)]

    def bits(vector: int) -> list[int]:
        return [i for i in range(size) if vector >> i & 1]

    def form(x: int, y: int) -> int:
        return sum(gram[i][j] for i in bits(x) for j in bits(y)) % 2

    def quadratic(x: int) -> int:
        members = bits(x)
        value = sum(phi[i] for i in members)
        value += sum(gram[a][b] for pos, a in enumerate(members) for b in members[pos + 1:])
        return value % 2

    vectors = [1 << i for i in range(size)]
    arf = 0
    pairs = 0
    while vectors:
        a = vectors.pop(0)
        partner_index = next((k for k, v in enumerate(vectors) if form(a, v)), None)
        if partner_index is None:
            continue
        b = vectors.pop(partner_index)
        vectors = [v ^ (a if form(v, b) else 0) ^ (b if form(v, a) else 0) for v in vectors]
        arf ^= quadratic(a) & quadratic(b)
        pairs += 1

    logger.debug("Spin parity %d from %d symplectic pairs over %d dual cycles", arf, pairs, size)
    return arf
