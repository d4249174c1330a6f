"""
Rational polyhedra in chart weight space: vertex enumeration, extrema of linear functionals,
pulling triangulations, grid partitions of the normalised cone and Riemann-sum bounds.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

from backend.core.errors import DegenerateChart, EmptyPolyhedron
from backend.core.validators import validate_delta
from . import linalg
from .train_track import TrainTrackChart

logger = logging.getLogger(__name__)

Point = tuple[Fraction, ...]


@dataclass(frozen=True)
class HalfSpace:
    """``normal . x <= bound``, or ``<`` when strict."""
    normal: tuple[Fraction, ...]
    bound: Fraction
    strict: bool = False

    def contains(self, point) -> bool:
        value = linalg.dot(self.normal, point)
        return value < self.bound if self.strict else value <= self.bound

    def is_tight(self, point) -> bool:
        return linalg.dot(self.normal, point) == self.bound


@dataclass(frozen=True)
class Polyhedron:
    """
    Bounded rational polyhedron given by equalities and half-spaces.

    Attributes:
        dimension (int): Ambient dimension.
        equalities (tuple[tuple[tuple[Fraction, ...], Fraction], ...]): ``normal . x = rhs``.
        halfspaces (tuple[HalfSpace, ...]): Inequalities, strict ones excluded from the set.
    """
    dimension: int
    equalities: tuple[tuple[tuple[Fraction, ...], Fraction], ...] = ()
    halfspaces: tuple[HalfSpace, ...] = ()

    def contains(self, point) -> bool:
        if any(linalg.dot(normal, point) != rhs for normal, rhs in self.equalities):
            return False
        return all(h.contains(point) for h in self.halfspaces)

    def with_halfspaces(self, extra) -> "Polyhedron":
        return Polyhedron(self.dimension, self.equalities, self.halfspaces + tuple(extra))

    def vertices(self) -> list[Point]:
        """Vertices of the closure, sorted."""
        solution = linalg.affine_parametrisation(
            [list(n) for n, _ in self.equalities], [rhs for _, rhs in self.equalities], self.dimension
        )
        if solution is None:
            return []
        origin, free, basis = solution
        columns = [[basis[j][k] for j in range(self.dimension)] for k in range(len(free))]
        reduced = [
            ([linalg.dot(h.normal, column) for column in columns], h.bound - linalg.dot(h.normal, origin))
            for h in self.halfspaces
        ]
        if not free:
            return [tuple(origin)] if all(rhs >= 0 for _, rhs in reduced) else []

        found = set()
        for combo in itertools.combinations(range(len(reduced)), len(free)):
            y = linalg.solve([reduced[i][0] for i in combo], [reduced[i][1] for i in combo])
            if y is None:
                continue
            if all(linalg.dot(row, y) <= rhs for row, rhs in reduced):
                found.add(tuple(
                    origin[j] + sum((basis[j][k] * y[k] for k in range(len(free))), Fraction(0))
                    for j in range(self.dimension)
                ))
        return sorted(found)

    def is_empty(self) -> bool:
        return not self.vertices()


def extrema(functional, polyhedron: Polyhedron) -> tuple[Fraction, Fraction]:
    """
    Exact minimum and maximum of a linear functional over the closure of a polyhedron.

    Example: x + 2y over the segment x + y = 1, x, y >= 0 gives (1, 2).

    Raises:
        EmptyPolyhedron: If the polyhedron has no vertex.
    """
    vertices = polyhedron.vertices()
    if not vertices:
        raise EmptyPolyhedron("Cannot take extrema over an empty polyhedron")
    values = [linalg.dot(functional, v) for v in vertices]
    return min(values), max(values)


def l1_diameter(points) -> Fraction:
    return max(
        (sum((abs(a - b) for a, b in zip(p, q)), Fraction(0)) for p, q in itertools.combinations(points, 2)),
        default=Fraction(0),
    )


def triangulate(points: list[Point], polyhedron: Polyhedron) -> list[tuple[int, ...]]:
    """
    Pulling triangulation of a polytope from its vertex list.

    Faces are found through the half-spaces tight on them; each face is coned from its smallest
    vertex over the facets not containing it.

    Returns:
        list[tuple[int, ...]]: Simplices as indices into ``points``.
    """
    closed = [HalfSpace(h.normal, h.bound) for h in polyhedron.halfspaces]
    memo: dict[frozenset, list[tuple[int, ...]]] = {}

    def rank_of(ids) -> int:
        return linalg.affine_rank([points[i] for i in sorted(ids)])

    def pull(ids: frozenset, dim: int) -> list[tuple[int, ...]]:
        if ids in memo:
            return memo[ids]
        if len(ids) == dim + 1:
            result = [tuple(sorted(ids))]
        else:
            apex = min(ids)
            facets = set()
            for h in closed:
                tight = frozenset(i for i in ids if h.is_tight(points[i]))
                if apex in tight or tight == ids or len(tight) < dim:
                    continue
                if rank_of(tight) == dim - 1:
                    facets.add(tight)
            result = [(apex,) + simplex for facet in sorted(facets, key=sorted) for simplex in pull(facet, dim - 1)]
        memo[ids] = result
        return result

    if not points:
        return []
    every = frozenset(range(len(points)))
    return pull(every, rank_of(every))


#--- chart slices and partitions ---#

def slice_polyhedron(chart: TrainTrackChart) -> Polyhedron:
    """Characteristic cone of the chart cut by the normalisation ||lambda||_1 = 1."""
    size = chart.size
    equalities = tuple((row, Fraction(0)) for row in chart.equalities)
    equalities += ((tuple(Fraction(1) for _ in range(size)), Fraction(1)),)
    halfspaces = tuple(
        HalfSpace(tuple(-x for x in inequality.row), Fraction(0), inequality.strict)
        for inequality in chart.inequalities
    )
    return Polyhedron(size, equalities, halfspaces)


@dataclass(frozen=True)
class Cell:
    """
    One grid cell of a partition.

    Attributes:
        polyhedron (Polyhedron): Slice intersected with the half-open box.
        index (tuple[int, ...]): Grid position along every axis.
    """
    polyhedron: Polyhedron
    index: tuple[int, ...]

    def contains(self, point) -> bool:
        return self.polyhedron.contains(point)


@dataclass
class Partition:
    """
    Attributes:
        chart (TrainTrackChart): Chart whose normalised cone is partitioned.
        delta (Fraction): Requested L1 diameter bound.
        axes (list[int]): Chart variables used as grid coordinates.
        side (Fraction): Grid step along every axis.
        cells (list[Cell]): Non-empty cells.
        grid_bound (int): Number of boxes in the bounding grid, an upper bound for the cell count.
    """
    chart: TrainTrackChart
    delta: Fraction
    axes: list[int]
    side: Fraction
    cells: list[Cell] = field(default_factory=list)
    grid_bound: int = 0

    def locate(self, point) -> list[Cell]:
        return [cell for cell in self.cells if cell.contains(point)]


def partition(chart: TrainTrackChart, delta: Fraction) -> Partition:
    """
    Cover the normalised cone by disjoint grid cells of L1 diameter at most ``delta``.

    The grid lives in the free coordinates of the slice; a step of delta divided by the summed
    L1 norms of the parametrisation columns bounds the diameter. Boxes are half-open, (lo, hi],
    except the first along every axis, which is closed.

    Raises:
        ValueError: If delta is not in (0, 1].
        DegenerateChart: If the normalised cone is empty.
    """
    delta = Fraction(delta)
    validate_delta(delta)
    base = slice_polyhedron(chart)
    origin, free, basis = linalg.affine_parametrisation(
        [list(n) for n, _ in base.equalities], [rhs for _, rhs in base.equalities], base.dimension
    )
    vertices = base.vertices()
    if not vertices:
        raise DegenerateChart(f"Empty characteristic cone for diagram:\n{chart.diagram}")

    spread = sum((abs(basis[j][k]) for j in range(base.dimension) for k in range(len(free))), Fraction(0))
    side = delta / spread if spread else delta
    starts = [min(v[a] for v in vertices) for a in free]
    grid_bound = 1
    for a, start in zip(free, starts):
        grid_bound *= max(1, math.ceil((max(v[a] for v in vertices) - start) / side))

    result = Partition(chart, delta, list(free), side, grid_bound=grid_bound)

    def position(value: Fraction, start: Fraction) -> int:
        return max(0, math.ceil((value - start) / side) - 1)

    def split(polyhedron: Polyhedron, depth: int, index: tuple[int, ...]) -> None:
        current = polyhedron.vertices()
        if not current:
            return
        if depth == len(free):
            result.cells.append(Cell(polyhedron, index))
            return
        axis, start = free[depth], starts[depth]
        low = position(min(v[axis] for v in current), start)
        high = position(max(v[axis] for v in current), start)
        for i in range(low, high + 1):
            lo, hi = start + i * side, start + (i + 1) * side
            unit = tuple(Fraction(1 if j == axis else 0) for j in range(base.dimension))
            box = (
                HalfSpace(unit, hi),
                HalfSpace(tuple(-x for x in unit), -lo, strict=i > 0),
            )
            split(polyhedron.with_halfspaces(box), depth + 1, index + (i,))

    split(base, 0, ())
    logger.debug("Partition with delta=%s: %d cells (grid bound %d)", delta, len(result.cells), grid_bound)
    return result


def poly_extrema(chart: TrainTrackChart, cell: Cell | Polyhedron) -> tuple[Fraction, Fraction]:
    """Minimum and maximum of the chart's area functional over a cell."""
    polyhedron = cell.polyhedron if isinstance(cell, Cell) else cell
    return extrema(chart.area, polyhedron)


def lipschitz_constant(chart: TrainTrackChart) -> Fraction:
    """Lipschitz constant of the area functional for the L1 norm."""
    return max(abs(x) for x in chart.area)


def cell_measure(chart: TrainTrackChart, cell: Cell | Polyhedron) -> Fraction:
    """
    Lebesgue measure, in the chart's free coordinates, of the cone segment (0, 1] * U over a
    cell U of the normalised slice.
    """
    polyhedron = cell.polyhedron if isinstance(cell, Cell) else cell
    free, _ = chart.free_parametrisation
    h = len(free)
    points = polyhedron.vertices()
    total = Fraction(0)
    for simplex in triangulate(points, polyhedron):
        if len(simplex) != h:
            continue
        matrix = [[points[i][j] for j in free] for i in simplex]
        total += abs(linalg.determinant(matrix))
    return total / math.factorial(h)


def riemann_bounds(chart: TrainTrackChart, cells: list[Cell]) -> tuple[Fraction, Fraction]:
    """
    Lower and upper sums bracketing the chart volume:
    sum mu_i / M_i^h <= v <= sum mu_i / m_i^h.
    """
    h = chart.dimension
    lower, upper = Fraction(0), Fraction(0)
    for cell in cells:
        mu = cell_measure(chart, cell)
        if mu == 0:
            continue
        m, big_m = poly_extrema(chart, cell)
        lower += mu / big_m ** h
        upper += mu / m ** h
    return lower, upper
