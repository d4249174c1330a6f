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
from backend.origami.cylinder import CylinderDiagram, CylinderParams, move_action, reconstruct, symmetries
from backend.origami.diagrams import enumerate_diagrams
from backend.origami.multicurve import MultiCurveType, vertical_core
from backend.origami.polyhedra import Cell, Polyhedron
from backend.origami.train_track import TrainTrackChart, build_chart
from backend.utils.sharding import run_sharded
from .base_engine import BaseCountingEngine
from .lattice import area_of, bases_of, integer_widths, width_orbits

logger = logging.getLogger(__name__)


#--- chart point counts ---#

def _vertical_matches(diagram: CylinderDiagram, widths, twists, gamma1: MultiCurveType | None) -> bool:
    if gamma1 is None:
        return True
    surface = reconstruct(diagram, CylinderParams(tuple(widths), tuple(twists)))
    return vertical_core(surface).token == gamma1.token


def _in_cell(chart: TrainTrackChart, cell: Cell | Polyhedron | None, point) -> bool:
    if cell is None:
        return True
    norm = chart.norm(point)
    return cell.contains(tuple(Fraction(x) / norm for x in point))


def _chart_points(chart: TrainTrackChart, max_total: int):
    """Integer points (twists, widths) of the characteristic cone with every width sum at most max_total."""
    diagram = chart.diagram
    for widths in integer_widths(diagram, max_total):
        bases = bases_of(diagram, widths)
        for twists in itertools.product(*(range(1, b + 1) for b in bases)):
            yield twists, widths


def s_count(chart: TrainTrackChart, cell: Cell | Polyhedron | None, l_value: int, gamma1: MultiCurveType | None) -> int:
    """
    Integer points of the chart cone on the ray set R+ * U with L1 norm at most ``l_value``
    whose surface has vertical type ``gamma1``.

    Args:
        chart (TrainTrackChart): The chart.
        cell (Cell | Polyhedron | None): Subset U of the normalised slice, None for all of it.
        l_value (int): Norm bound.
        gamma1 (MultiCurveType | None): Vertical type filter, None for any.
    """
    count = 0
    for twists, widths in _chart_points(chart, l_value):
        point = twists + widths
        if sum(point) > l_value or not _in_cell(chart, cell, point):
            continue
        if _vertical_matches(chart.diagram, widths, twists, gamma1):
            count += 1
    return count


def sq_tt_count(chart: TrainTrackChart, cell: Cell | Polyhedron | None, l_value: int, gamma1: MultiCurveType | None) -> int:
    """
    Integer points of the chart cone on R+ * U with area at most ``l_value`` whose surface has
    vertical type ``gamma1``. Points are parameter vectors, so a surface with a diagram
    symmetry is met once per distinct parameter vector.
    """
    diagram = chart.diagram
    count = 0
    for twists, widths in _chart_points(chart, l_value):
        if area_of(diagram, widths) > l_value or not _in_cell(chart, cell, twists + widths):
            continue
        if _vertical_matches(diagram, widths, twists, gamma1):
            count += 1
    return count


#--- surface counts ---#

@dataclass(frozen=True)
class TrainTrackTask:
    diagram: CylinderDiagram
    lmax: int
    gamma1: MultiCurveType | None


def train_track_histogram(task: TrainTrackTask) -> Counter:
    """Surfaces of every area up to lmax carried by one diagram with vertical type gamma1."""
    diagram = task.diagram
    actions = [move_action(diagram, move) for move in symmetries(diagram)]
    histogram = Counter()
    for orbit in width_orbits(diagram, actions, task.lmax):
        area = area_of(diagram, orbit.widths)
        if area > task.lmax:
            continue
        bases = bases_of(diagram, orbit.widths)
        if task.gamma1 is None and orbit.twists_fixed:
            histogram[area] += math.prod(bases)
            continue
        for twists in orbit.twist_representatives(bases):
            if _vertical_matches(diagram, orbit.widths, twists, task.gamma1):
                histogram[area] += 1
    return histogram


class TrainTrackEngine(BaseCountingEngine):
    """
    sq(gamma1, gamma2, Q, L) over the charts of the diagrams of horizontal type gamma2, each
    point reconstructed and kept when its vertical type is gamma1.
    """

    engine = CountingEngine.TRAIN_TRACK

    def charts(self) -> list[TrainTrackChart]:
        diagrams = enumerate_diagrams(self.query.stratum, self.query.component, self.gamma2, self.store)
        return [build_chart(item.diagram) for item in diagrams]

    def run(self) -> CountSeries:
        self._require_stratum()
        self._require_unlabeled()
        if self.gamma2 is None:
            raise ValueError("The train-track engine needs --gamma2")

        charts = self.charts()
        tasks = [TrainTrackTask(chart.diagram, self.query.lmax, self.gamma1) for chart in charts]
        quiet = not sys.stderr.isatty() or self.store.quiet
        histogram = Counter()
        for partial in tqdm(
            run_sharded(train_track_histogram, tasks, self.query.jobs), desc="charts", unit="chart", disable=quiet
        ):
            histogram.update(partial)
        logger.info("Train-track count over %d charts", len(charts))
        return self._series(histogram)
