"""Exact quantum products for toric complete intersections.

The package computes I-function series for complete intersections in
quotient stacks given by GIT presentation data, extracts the mirror map,
and reads off small quantum products from the normalized frame. All
arithmetic is exact rational arithmetic; nothing is floated.
"""

from .cohomology import CohomologyModel, CRClass, RingSpec, unit_class
from .config import EngineConfig, load_config, load_config_data
from .errors import EngineError, ParseError, ValidationError
from .ifunction import IFunctionEngine, TwistedClassProvider
from .mirror import (DivisorDirection, JFrame, MirrorMap, UnitDirection,
                     auto_flow, mirror_map, normalize_frame, plus_check,
                     product_table, quantum_product)
from .presentation import (Degree, GitPresentation, SectorId,
                           degree_pairing, enumerate_effective,
                           enumerate_sectors, sector_from_degree,
                           validate_presentation)
from .series import (MultiSeries, NovikovDirection, TruncationSpec,
                     TVarDirection, ZLaurent)

__version__ = "0.1.0"
