"""
Exhaustive census of square-tiled surfaces up to cut-and-paste equivalence.

Surfaces are generated in breadth-first frame coordinates: slots are filled in order and a
slot is either glued to a brand new square (by a translation, since new squares take the frame
that makes their tree gluing a translation) or to a later open slot of an existing square.
Every breadth-first code is produced exactly once, and a complete gluing is kept only when no
other start square gives a smaller code. Corner chains are checked while gluing so that strata
with bounded cone angles prune early.
"""

import itertools
import logging
import sys
from collections import Counter
from dataclasses import dataclass, field
from itertools import permutations

from tqdm import tqdm

from backend.core.errors import Disconnected, ResourceLimitExceeded, UnclassifiedComponent
from backend.core.models import ComponentTag, Stratum
from backend.utils.sharding import run_sharded, split_round_robin
from .components import component_tag
from .multicurve import horizontal_core, vertical_core
from .surface import (
    SquareTiledSurface, build_from_permutations, canonical_form, epsilon, from_pairs, is_canonical_gluing,
    side_of, singularity_profile, slot, square_of,
)

logger = logging.getLogger(__name__)

SHARD_DEPTH = 4


@dataclass(frozen=True)
class CensusRecord:
    """
    One cut-and-paste class with its precomputed invariants.

    Attributes:
        area (int): Number of squares.
        code (str): Canonical code.
        sigma (tuple[int, ...]): Orders of the punctures.
        genus (int): Genus.
        epsilon (int): 1 for squares of abelian differentials.
        tag (ComponentTag): Component invariants.
        horizontal (str): Horizontal core type token.
        vertical (str): Vertical core type token.
    """
    area: int
    code: str
    sigma: tuple[int, ...]
    genus: int
    epsilon: int
    tag: ComponentTag
    horizontal: str
    vertical: str

    @property
    def sort_key(self) -> tuple[int, str]:
        return self.area, self.code


@dataclass
class CensusResult:
    """
    Attributes:
        records (list[CensusRecord]): Records sorted by (area, code).
        lmax (int): Largest area enumerated.
        stratum (Stratum | None): Stratum filter, None for every surface.
        labeled (bool): Whether punctures of equal order carry distinct labels.
        partial (bool): True when a resource limit stopped the enumeration.
    """
    records: list[CensusRecord] = field(default_factory=list)
    lmax: int = 0
    stratum: Stratum | None = None
    labeled: bool = False
    partial: bool = False


#--- gluing search ---#

class GluingSearch:
    """
    Depth-first search over breadth-first gluing codes with ``n`` squares.

    Args:
        n (int): Number of squares.
        translation_only (bool): Only allow gluings of opposite sides.
        allowed_orders (set[int] | None): Vertex orders allowed on closed corner cycles.
        max_cycle (int | None): Longest allowed corner cycle.
    """

    def __init__(self, n: int, translation_only: bool, allowed_orders: set[int] | None, max_cycle: int | None):
        self.n = n
        self.translation_only = translation_only
        self.allowed_orders = allowed_orders
        self.max_cycle = max_cycle
        self.partner = [-1] * (4 * n)

    def _successor(self, corner: int) -> int:
        target = self.partner[corner]
        if target < 0:
            return -1
        return 4 * square_of(target) + (side_of(target) - 1) % 4

    def _predecessor(self, corner: int) -> int:
        return self.partner[4 * square_of(corner) + (side_of(corner) + 1) % 4]

    def _chain_ok(self, corner: int) -> bool:
        length = 1
        current = self._successor(corner)
        while current not in (-1, corner):
            length += 1
            current = self._successor(current)
        if current == corner:
            if length % 2:
                return False
            return self.allowed_orders is None or length // 2 - 2 in self.allowed_orders
        current = self._predecessor(corner)
        while current != -1:
            length += 1
            current = self._predecessor(current)
        return self.max_cycle is None or length <= self.max_cycle

    def _options(self, position: int, created: int):
        side = side_of(position)
        if created < self.n:
            yield slot(created, (side + 2) % 4), 1
        for target in range(position + 1, 4 * created):
            if self.partner[target] != -1:
                continue
            target_side = side_of(target)
            if target_side % 2 != side % 2:
                continue
            if self.translation_only and target_side != (side + 2) % 4:
                continue
            yield target, 0

    def _walk(self, position: int, created: int, decisions: list[int], depth: int | None):
        while position < 4 * created and self.partner[position] != -1:
            position += 1
        if position == 4 * created:
            if created == self.n:
                yield tuple(decisions) if depth is not None else tuple(self.partner)
            return
        if depth is not None and len(decisions) == depth:
            yield tuple(decisions)
            return
        for target, new in self._options(position, created):
            self.partner[position], self.partner[target] = target, position
            if self._chain_ok(position) and self._chain_ok(target):
                decisions.append(target)
                yield from self._walk(position + 1, created + new, decisions, depth)
                decisions.pop()
            self.partner[position] = self.partner[target] = -1

    def prefixes(self, depth: int) -> list[tuple[int, ...]]:
        """Decision sequences of length ``depth`` (or complete shorter ones), in search order."""
        self.partner = [-1] * (4 * self.n)
        return list(self._walk(0, 1, [], depth))

    def complete(self, prefix: tuple[int, ...] = ()):
        """Yield the partner array of every complete gluing extending ``prefix``."""
        self.partner = [-1] * (4 * self.n)
        position, created = 0, 1
        for target in prefix:
            while self.partner[position] != -1:
                position += 1
            if square_of(target) == created:
                created += 1
            self.partner[position], self.partner[target] = target, position
            position += 1
        yield from self._walk(position, created, list(prefix), None)


def _search_for(n: int, stratum: Stratum | None) -> GluingSearch:
    if stratum is None:
        return GluingSearch(n, False, None, None)
    allowed = set(stratum.nonzero_orders) | {0}
    max_cycle = 2 * (max(allowed) + 2)
    return GluingSearch(n, stratum.epsilon == 1, allowed, max_cycle)


#--- markings ---#

def _labelings(stratum: Stratum, orders: dict[int, int]):
    """Every assignment of labels 1..n (positions in sigma) to punctures respecting orders."""
    groups: dict[int, list[int]] = {}
    for position, order in enumerate(stratum.sigma):
        groups.setdefault(order, []).append(position + 1)
    vertices_by_order: dict[int, list[int]] = {}
    for vertex, order in orders.items():
        vertices_by_order.setdefault(order, []).append(vertex)
    keys = sorted(groups)
    for choice in itertools.product(*(permutations(groups[k]) for k in keys)):
        labeling = {}
        for order, labels in zip(keys, choice):
            for vertex, label in zip(vertices_by_order[order], labels):
                labeling[vertex] = label
        yield labeling


def marked_versions(surface: SquareTiledSurface, stratum: Stratum | None, labeled: bool) -> list[SquareTiledSurface]:
    """
    Every way of marking regular vertices (and labelling punctures) that puts the surface in
    the stratum, one representative per canonical code.
    """
    if stratum is None:
        return [surface.with_marks(None)]
    cycles = surface.vertex_cycles
    orders = [len(cycle) // 2 - 2 for cycle in cycles]
    if Counter(o for o in orders if o != 0) != Counter(stratum.nonzero_orders):
        return []
    regular = [v for v, o in enumerate(orders) if o == 0]
    singular = [v for v, o in enumerate(orders) if o != 0]
    wanted = stratum.marked_point_count
    if len(regular) < wanted:
        return []

    versions = {}
    for chosen in itertools.combinations(regular, wanted):
        punctures = {v: orders[v] for v in singular + list(chosen)}
        labelings = _labelings(stratum, punctures) if labeled else [{v: 1 for v in punctures}]
        for labeling in labelings:
            marks = [0] * (4 * surface.n_squares)
            for vertex, tag in labeling.items():
                for corner in cycles[vertex]:
                    marks[corner] = tag
            marked = surface.with_marks(tuple(marks))
            versions.setdefault(canonical_form(marked), marked)
    return [versions[code] for code in sorted(versions)]


def make_record(surface: SquareTiledSurface, labeled: bool = False) -> CensusRecord:
    """Canonical code and invariants of a marked surface."""
    profile = singularity_profile(surface)
    try:
        tag = component_tag(surface)
    except UnclassifiedComponent:
        tag = ComponentTag(classified=False)
    return CensusRecord(
        area=surface.n_squares,
        code=canonical_form(surface).decode("ascii"),
        sigma=profile.stratum.sigma,
        genus=profile.stratum.genus,
        epsilon=profile.stratum.epsilon,
        tag=tag,
        horizontal=horizontal_core(surface, labeled).type.token,
        vertical=vertical_core(surface, labeled).token,
    )


#--- shards ---#

@dataclass(frozen=True)
class ShardTask:
    n: int
    stratum: Stratum | None
    labeled: bool
    prefixes: tuple[tuple[int, ...], ...]


def census_shard(task: ShardTask) -> list[CensusRecord]:
    """Records of every class whose breadth-first code extends one of the task's prefixes."""
    search = _search_for(task.n, task.stratum)
    records = []
    for prefix in task.prefixes:
        for partner in search.complete(prefix):
            surface = from_pairs(task.n, [(s, p) for s, p in enumerate(partner) if s < p])
            if not is_canonical_gluing(surface, partner):
                continue
            if any(len(cycle) % 2 for cycle in surface.vertex_cycles):
                continue
            if task.stratum is not None and epsilon(surface).epsilon != task.stratum.epsilon:
                continue
            for marked in marked_versions(surface, task.stratum, task.labeled):
                records.append(make_record(marked, task.labeled))
    return records


def census(
    lmax: int,
    stratum: Stratum | None = None,
    labeled: bool = False,
    jobs: int = 1,
    max_surfaces: int | None = None,
    quiet: bool = True,
) -> CensusResult:
    """
    Every cut-and-paste class with at most ``lmax`` squares, optionally restricted to a stratum.

    Output order is (area, canonical code) whatever the number of jobs.

    Args:
        lmax (int): Largest number of squares.
        stratum (Stratum | None): Stratum filter; None keeps every surface with every vertex marked.
        labeled (bool): Distinguish punctures of equal order (requires a stratum).
        jobs (int): Worker processes.
        max_surfaces (int | None): Abort once more records than this have been produced.
        quiet (bool): Disable the progress bar.

    Raises:
        ResourceLimitExceeded: With the partial CensusResult attached.
        ValueError: If labeled is requested without a stratum.
    """
    if labeled and stratum is None:
        raise ValueError("Labelled singularities need a stratum")
    result = CensusResult(lmax=lmax, stratum=stratum, labeled=labeled)
    levels = tqdm(range(1, lmax + 1), desc="census", unit="area", disable=quiet or not sys.stderr.isatty())
    for n in levels:
        prefixes = _search_for(n, stratum).prefixes(SHARD_DEPTH)
        tasks = [ShardTask(n, stratum, labeled, tuple(chunk)) for chunk in split_round_robin(prefixes, 4 * jobs)]
        level = [record for chunk in run_sharded(census_shard, tasks, jobs) for record in chunk]
        level.sort(key=lambda r: r.sort_key)
        result.records.extend(level)
        logger.info("Census area %d: %d classes", n, len(level))
        if max_surfaces is not None and len(result.records) > max_surfaces:
            result.partial = True
            result.lmax = n
            raise ResourceLimitExceeded(
                f"Census stopped at area {n}: {len(result.records)} classes exceed the limit of {max_surfaces}",
                partial=result,
            )
    return result


def census_by_permutations(n: int, stratum: Stratum | None = None) -> list[str]:
    """
    Brute-force census of translation surfaces with exactly ``n`` squares from all permutation
    pairs, used to cross-check the orderly search.

    Returns:
        list[str]: Sorted canonical codes.
    """
    codes = set()
    for h_perm in permutations(range(n)):
        for v_perm in permutations(range(n)):
            try:
                surface = build_from_permutations(h_perm, v_perm)
            except Disconnected:
                continue
            for marked in marked_versions(surface, stratum, False):
                codes.add(canonical_form(marked).decode("ascii"))
    return sorted(codes)
