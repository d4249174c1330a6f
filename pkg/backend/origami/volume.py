import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

from backend.core.errors import DegenerateChart
from . import linalg
from .cylinder import CylinderDiagram, CylinderParams, effective_symmetry_count
from .polyhedra import HalfSpace, Polyhedron, triangulate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChartVolume:
    """
    Leading constant carried by one cylinder diagram.

    Attributes:
        diagram (CylinderDiagram): The diagram.
        raw (Fraction): Integral of prod b_i over {widths > 0, equalities, area <= 1} in the free
            width coordinates.
        lattice_index (int): Index of the integer width solutions in the free coordinate lattice.
        symmetry (int): Number of diagram symmetries acting differently on parameters.
    """
    diagram: CylinderDiagram
    raw: Fraction
    lattice_index: int = 1
    symmetry: int = 1

    @property
    def contribution(self) -> Fraction:
        return self.raw / (self.lattice_index * self.symmetry)

    def to_dict(self) -> dict:
        return {
            "diagram": self.diagram.to_text(),
            "raw": str(self.raw),
            "lattice_index": self.lattice_index,
            "symmetry": self.symmetry,
            "contribution": str(self.contribution),
        }


@dataclass
class VolumeResult:
    total: Fraction
    charts: list[ChartVolume] = field(default_factory=list)
    degenerate: int = 0


def _width_forms(diagram: CylinderDiagram):
    """Basis of the width solution space and the cylinder bases and area as forms in free coordinates."""
    free, basis = linalg.nullspace_parametrisation(diagram.equality_rows(), diagram.n_edges)
    d = len(free)

    def through_basis(coefficients) -> tuple[Fraction, ...]:
        return tuple(
            sum((Fraction(c) * basis[j][k] for j, c in enumerate(coefficients)), Fraction(0)) for k in range(d)
        )

    bases = []
    area = [0] * diagram.n_edges
    for cylinder in diagram.cylinders:
        row = [0] * diagram.n_edges
        for label, _ in cylinder.top:
            row[label] += 1
            area[label] += cylinder.height
        bases.append(through_basis(row))
    return free, basis, bases, through_basis(area)


def width_slice(diagram: CylinderDiagram) -> Polyhedron:
    """Closed width cone cut by area = 1, in free width coordinates."""
    free, basis, _, area = _width_forms(diagram)
    d = len(free)
    halfspaces = tuple(HalfSpace(tuple(-x for x in row), Fraction(0)) for row in basis)
    return Polyhedron(d, ((area, Fraction(1)),), halfspaces)


def simplex_integral(vertices: list[tuple[Fraction, ...]], forms: list[tuple[Fraction, ...]]) -> Fraction:
    """
    Exact integral of a product of linear forms over the simplex with apex at the origin and the
    given d vertices:

        |det| / (m + d)! * sum over maps phi of prod_j l_j(v_phi(j)) * prod_i k_i!

    where phi assigns each of the m forms a vertex and k_i counts the forms sent to vertex i.
    The origin term vanishes for linear forms.
    """
    d, m = len(vertices), len(forms)
    det = abs(linalg.determinant([list(v) for v in vertices]))
    if det == 0:
        return Fraction(0)
    values = [[linalg.dot(form, v) for v in vertices] for form in forms]
    total = Fraction(0)
    for phi in itertools.product(range(d), repeat=m):
        term = Fraction(1)
        for j, vertex in enumerate(phi):
            term *= values[j][vertex]
            if term == 0:
                break
        if term == 0:
            continue
        for vertex in set(phi):
            term *= math.factorial(phi.count(vertex))
        total += term
    return det * total / math.factorial(m + d)


def interior_params(diagram: CylinderDiagram) -> CylinderParams:
    """Positive integer widths from the centroid of the width slice, twists set to the bases."""
    free, basis, _, _ = _width_forms(diagram)
    vertices = width_slice(diagram).vertices()
    if not vertices:
        raise DegenerateChart(f"Empty width polytope for diagram:\n{diagram}")
    d = len(free)
    centroid = [sum((v[k] for v in vertices), Fraction(0)) / len(vertices) for k in range(d)]
    widths = [sum((row[k] * centroid[k] for k in range(d)), Fraction(0)) for row in basis]
    scale = math.lcm(*(w.denominator for w in widths))
    widths = tuple(int(w * scale) for w in widths)
    params = CylinderParams(widths, tuple(0 for _ in diagram.cylinders))
    return CylinderParams(widths, params.bases(diagram))


def chart_volume(diagram: CylinderDiagram) -> ChartVolume:
    """
    Integrate prod b_i over the width polytope by coning a pulling triangulation of its area = 1
    slice from the origin.

    Raises:
        DegenerateChart: If the width polytope is empty.
    """
    free, basis, bases, _ = _width_forms(diagram)
    polytope = width_slice(diagram)
    vertices = polytope.vertices()
    if not vertices:
        raise DegenerateChart(f"Empty width polytope for diagram:\n{diagram}")

    raw = Fraction(0)
    for simplex in triangulate(vertices, polytope):
        if len(simplex) != len(free):
            continue
        raw += simplex_integral([vertices[i] for i in simplex], bases)

    symmetry = effective_symmetry_count(diagram, interior_params(diagram))
    index = linalg.solution_lattice_index(basis)
    logger.debug("Chart volume %s (index %d, symmetry %d)", raw, index, symmetry)
    return ChartVolume(diagram, raw, index, symmetry)


def total_volume(diagrams: list[CylinderDiagram]) -> VolumeResult:
    """Sum of chart contributions; empty charts are counted in ``degenerate`` and add 0."""
    result = VolumeResult(Fraction(0))
    for diagram in diagrams:
        try:
            chart = chart_volume(diagram)
        except DegenerateChart as e:
            logger.warning("%s", e)
            result.degenerate += 1
            continue
        result.charts.append(chart)
        result.total += chart.contribution
    return result
