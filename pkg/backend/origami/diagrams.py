import logging
from dataclasses import dataclass

from backend.core.enums import ComponentFilter
from backend.core.errors import UnclassifiedComponent
from backend.core.models import Stratum
from .census_cache import CensusStore
from .cylinder import CylinderDiagram, CylinderParams, decompose
from .multicurve import MultiCurveType, parse_type_token
from .surface import surface_from_code

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EnumeratedDiagram:
    """
    Attributes:
        diagram (CylinderDiagram): Canonical diagram.
        sample (CylinderParams): Parameters of the first census surface that produced it.
        sample_code (str): Canonical code of that surface.
    """
    diagram: CylinderDiagram
    sample: CylinderParams
    sample_code: str


def area_bound(stratum: Stratum, gamma: MultiCurveType) -> int:
    """(sum of weights) * (2g - 2 + n): every diagram of type gamma is realised below this area."""
    return sum(gamma.weights) * stratum.saddle_connection_count


def enumerate_diagrams(
    stratum: Stratum,
    component: ComponentFilter,
    gamma: MultiCurveType | str,
    store: CensusStore | None = None,
    bound: int | None = None,
) -> list[EnumeratedDiagram]:
    """
    Canonical cylinder diagrams with horizontal type ``gamma`` in a stratum component, read off
    a census up to the area bound.

    Args:
        stratum (Stratum): The stratum.
        component (ComponentFilter): Component filter.
        gamma (MultiCurveType | str): Horizontal type or its token.
        store (CensusStore | None): Census provider, an in-memory one by default.
        bound (int | None): Override of the census area bound.

    Returns:
        list[EnumeratedDiagram]: Diagrams sorted by canonical code.

    Raises:
        UnclassifiedComponent: If a component filter is applied to an unclassified stratum.
    """
    gamma = parse_type_token(gamma) if isinstance(gamma, str) else gamma
    store = store or CensusStore()
    bound = bound or area_bound(stratum, gamma)
    result = store.get(stratum, False, bound)

    found: dict[tuple, EnumeratedDiagram] = {}
    for record in result.records:
        if record.horizontal != gamma.token:
            continue
        if component is not ComponentFilter.ANY:
            if not record.tag.classified:
                raise UnclassifiedComponent(stratum)
            if not record.tag.matches(component):
                continue
        diagram, params = decompose(surface_from_code(record.code))
        found.setdefault(diagram.code(), EnumeratedDiagram(diagram, params, record.code))

    diagrams = [found[code] for code in sorted(found)]
    logger.info("%d cylinder diagrams of type %s in %s up to area %d", len(diagrams), gamma.token, stratum, bound)
    return diagrams
