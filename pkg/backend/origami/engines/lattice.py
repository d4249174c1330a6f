"""
Lattice point counting over cylinder diagrams.

Surfaces with horizontal type gamma and area at most L are the orbits of integer moderately
slanted parameters under the diagram symmetries. Width vectors are summed directly, one orbit
representative at a time, and the twists over a width vector contribute prod b_i unless some
symmetry fixing the widths moves twists, in which case the twist orbits are enumerated.
"""

import itertools
import logging
import math
import sys
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from tqdm import tqdm

from backend.core.enums import CountingEngine
from backend.core.models import CountSeries
from backend.origami import linalg
from backend.origami.cylinder import CylinderDiagram, MoveAction, move_action, symmetries
from backend.origami.diagrams import enumerate_diagrams
from backend.utils.sharding import run_sharded
from .base_engine import BaseCountingEngine

logger = logging.getLogger(__name__)


def integer_widths(diagram: CylinderDiagram, max_total: int):
    """
    Yield every positive integer width vector satisfying the cylinder equalities with
    sum of widths at most ``max_total``, in lexicographic order of the free widths.

    The sum of widths equals sum of b_i, which never exceeds the area.
    """
    free, basis = linalg.nullspace_parametrisation(diagram.equality_rows(), diagram.n_edges)
    d = len(free)
    values = [0] * d

    def widths_of() -> tuple[int, ...] | None:
        widths = []
        for row in basis:
            w = sum((row[k] * values[k] for k in range(d)), Fraction(0))
            if w.denominator != 1 or w <= 0:
                return None
            widths.append(int(w))
        return tuple(widths)

    def walk(depth: int, remaining: int):
        if depth == d:
            widths = widths_of()
            if widths is not None and sum(widths) <= max_total:
                yield widths
            return
        for value in range(1, remaining + 1):
            values[depth] = value
            yield from walk(depth + 1, remaining - value)

    yield from walk(0, max_total)


def area_of(diagram: CylinderDiagram, widths: tuple[int, ...]) -> int:
    return sum(c.height * sum(widths[l] for l, _ in c.top) for c in diagram.cylinders)


def bases_of(diagram: CylinderDiagram, widths: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(sum(widths[l] for l, _ in c.top) for c in diagram.cylinders)


@dataclass(frozen=True)
class WidthOrbit:
    """
    A width vector that is smallest in its symmetry orbit, with its stabiliser.

    Attributes:
        widths (tuple[int, ...]): The representative.
        stabiliser (tuple[MoveAction, ...]): Symmetries fixing the widths, identity included.
    """
    widths: tuple[int, ...]
    stabiliser: tuple[MoveAction, ...]

    @property
    def twists_fixed(self) -> bool:
        return all(action.fixes_twists(self.widths) for action in self.stabiliser)

    def twist_representatives(self, bases: tuple[int, ...]):
        """Twist vectors in prod (0, b_i] that are smallest in their stabiliser orbit."""
        for twists in itertools.product(*(range(1, b + 1) for b in bases)):
            if all(twists <= action.twists(self.widths, twists) for action in self.stabiliser):
                yield twists


def width_orbits(diagram: CylinderDiagram, actions: list[MoveAction], max_total: int):
    """Yield one WidthOrbit per symmetry orbit of integer width vectors."""
    for widths in integer_widths(diagram, max_total):
        images = [(action.widths(widths), action) for action in actions]
        if any(image < widths for image, _ in images):
            continue
        yield WidthOrbit(widths, tuple(action for image, action in images if image == widths))


def orbit_count(orbit: WidthOrbit, bases: tuple[int, ...]) -> int:
    if orbit.twists_fixed:
        return math.prod(bases)
    return sum(1 for _ in orbit.twist_representatives(bases))


@dataclass(frozen=True)
class LatticeTask:
    diagram: CylinderDiagram
    lmax: int


def lattice_histogram(task: LatticeTask) -> Counter:
    """Number of surfaces of every area up to lmax carried by one diagram."""
    diagram = task.diagram
    actions = [move_action(diagram, move) for move in symmetries(diagram)]
    histogram = Counter()
    for orbit in width_orbits(diagram, actions, task.lmax):
        area = area_of(diagram, orbit.widths)
        if area <= task.lmax:
            histogram[area] += orbit_count(orbit, bases_of(diagram, orbit.widths))
    return histogram


class LatticeEngine(BaseCountingEngine):
    """
    sq(gamma1, *, Q, L) by lattice point counting. Quarter turns exchange vertical and
    horizontal cores, so the diagrams of horizontal type gamma1 are summed.
    """

    engine = CountingEngine.LATTICE

    def run(self) -> CountSeries:
        self._require_stratum()
        self._require_unlabeled()
        if self.gamma1 is None:
            raise ValueError("The lattice engine needs --gamma1")
        if self.gamma2 is not None:
            logger.warning("The lattice engine ignores --gamma2; use the train-track engine for sq(gamma1, gamma2)")
            self.gamma2 = None

        diagrams = enumerate_diagrams(self.query.stratum, self.query.component, self.gamma1, self.store)
        tasks = [LatticeTask(item.diagram, self.query.lmax) for item in diagrams]
        quiet = not sys.stderr.isatty() or self.store.quiet
        histogram = Counter()
        for partial in tqdm(
            run_sharded(lattice_histogram, tasks, self.query.jobs), desc="diagrams", unit="diagram", disable=quiet
        ):
            histogram.update(partial)
        logger.info("Lattice count over %d diagrams", len(diagrams))
        return self._series(histogram)
