"""
Weight charts of cylinder diagrams.

The chart of a diagram has one twist variable u_i per cylinder followed by one width variable
per saddle connection label. Integer points of its characteristic cone with the diagram's
heights are exactly the moderately slanted integer parameters.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from . import linalg
from .cylinder import CylinderDiagram, CylinderParams


@dataclass(frozen=True)
class ConeInequality:
    """``row . lambda > 0`` when strict, ``row . lambda >= 0`` otherwise."""
    row: tuple[Fraction, ...]
    strict: bool
    name: str

    def holds(self, point) -> bool:
        value = linalg.dot(self.row, point)
        return value > 0 if self.strict else value >= 0


@dataclass(frozen=True)
class TrainTrackChart:
    """
    Attributes:
        diagram (CylinderDiagram): The diagram the chart parametrises.
        variables (tuple[str, ...]): Twist variables u1..uk then width variables e1..eE.
        equalities (tuple[tuple[Fraction, ...], ...]): Switch conditions, ``row . lambda = 0``.
        inequalities (tuple[ConeInequality, ...]): Characteristic cone.
        area (tuple[Fraction, ...]): Area functional 1/2 sum a_i (top_i + bottom_i).
    """
    diagram: CylinderDiagram
    variables: tuple[str, ...]
    equalities: tuple[tuple[Fraction, ...], ...]
    inequalities: tuple[ConeInequality, ...]
    area: tuple[Fraction, ...]

    @property
    def size(self) -> int:
        return len(self.variables)

    @property
    def n_twists(self) -> int:
        return self.diagram.n_cylinders

    @cached_property
    def free_parametrisation(self) -> tuple[list[int], list[list[Fraction]]]:
        """Free variables (lex order) and the basis expressing every variable through them."""
        return linalg.nullspace_parametrisation([list(r) for r in self.equalities], self.size)

    @property
    def dimension(self) -> int:
        return len(self.free_parametrisation[0])

    def in_cone(self, point) -> bool:
        if any(linalg.dot(row, point) != 0 for row in self.equalities):
            return False
        return all(inequality.holds(point) for inequality in self.inequalities)

    def evaluate_area(self, point) -> Fraction:
        return linalg.dot(self.area, point)

    def norm(self, point) -> Fraction:
        return sum((abs(Fraction(x)) for x in point), Fraction(0))

    def params_of(self, point) -> CylinderParams:
        k = self.n_twists
        return CylinderParams(tuple(point[k:]), tuple(point[:k]))

    def point_of(self, params: CylinderParams) -> tuple:
        return tuple(params.twists) + tuple(params.widths)

    def to_lp_text(self) -> str:
        """Chart as an LP-style block: variables, equalities, inequalities, area objective."""
        def linear(row) -> str:
            terms = []
            for coefficient, name in zip(row, self.variables):
                if coefficient == 0:
                    continue
                sign = "-" if coefficient < 0 else "+"
                magnitude = abs(coefficient)
                term = name if magnitude == 1 else f"{magnitude} {name}"
                terms.append(f"{sign} {term}")
            if not terms:
                return "0"
            text = " ".join(terms)
            return text[2:] if text.startswith("+ ") else "-" + text[2:]

        lines = ["\\ chart of", *(f"\\   {line}" for line in self.diagram.to_text().splitlines())]
        lines.append("Minimize")
        lines.append(f" area: {linear(self.area)}")
        lines.append("Subject To")
        for k, row in enumerate(self.equalities):
            lines.append(f" switch{k + 1}: {linear(row)} = 0")
        for inequality in self.inequalities:
            relation = ">" if inequality.strict else ">="
            lines.append(f" {inequality.name}: {linear(inequality.row)} {relation} 0")
        lines.append("General")
        lines.append(" " + " ".join(self.variables))
        lines.append("End")
        return "\n".join(lines)


def build_chart(diagram: CylinderDiagram) -> TrainTrackChart:
    """
    Variables, switch equalities, characteristic cone and area functional of a diagram.

    Example: the torus diagram gives variables (u1, e1), the cone e1 > 0, 0 < u1 <= e1 and
    the area e1.
    """
    k = diagram.n_cylinders
    size = k + diagram.n_edges
    names = tuple(f"u{i + 1}" for i in range(k)) + tuple(f"e{j + 1}" for j in range(diagram.n_edges))

    equalities = []
    for row in diagram.equality_rows():
        if any(row):
            equalities.append(tuple(Fraction(0) for _ in range(k)) + tuple(Fraction(x) for x in row))

    def unit(index: int, value: int = 1) -> list[Fraction]:
        row = [Fraction(0)] * size
        row[index] = Fraction(value)
        return row

    inequalities = []
    for j in range(diagram.n_edges):
        inequalities.append(ConeInequality(tuple(unit(k + j)), True, f"width_e{j + 1}"))
    for i, cylinder in enumerate(diagram.cylinders):
        inequalities.append(ConeInequality(tuple(unit(i)), True, f"twist_u{i + 1}_pos"))
        row = unit(i, -1)
        for label, _ in cylinder.top:
            row[k + label] += 1
        inequalities.append(ConeInequality(tuple(row), False, f"twist_u{i + 1}_max"))

    area = [Fraction(0)] * size
    for cylinder in diagram.cylinders:
        for label, _ in cylinder.top + cylinder.bottom:
            area[k + label] += Fraction(cylinder.height, 2)

    return TrainTrackChart(diagram, names, tuple(equalities), tuple(inequalities), tuple(area))
