"""Edge-disjoint escape routing on the 3x3 corner grid.

The package links terminal pairs and routes the remaining terminals to
distinct boundary exits, constructively (a case-by-case router) and
exhaustively (a brute-force oracle), and verifies that the two agree over
the complete enumeration of every supported terminal family.
"""

from .grid import (
    BOUNDARY,
    COL_ONLY,
    INNER_SQUARE,
    LAST_COL,
    LAST_ROW,
    GridGraph,
    Vertex,
    boundary_partition,
    build_corner_grid,
    diagonal_reflect,
    full_grid,
    grid_without_corner,
    unique_l_path,
)
from .model import (
    EscapeContract,
    EscapePlan,
    Path,
    Verdict,
    contract_for,
    validate_plan,
)
from .terminals import (
    LemmaId,
    TerminalConfig,
    decode_config,
    demote_pair_to_singletons,
    encode_config,
    enumerate_configs,
    make_config,
)


def route(cfg, strict=False):
    """Route a configuration constructively; see escape3x3.router."""
    from .router import route as _route

    return _route(cfg, strict=strict)


def oracle_solve(cfg, contract=None, budget=None):
    """Exhaustive witness search on the full corner grid."""
    from .model import contract_for as _contract_for
    from .oracle import SearchBudget
    from .oracle import oracle_solve as _solve
    from .terminals import family_of

    if contract is None:
        contract = _contract_for(family_of(cfg))
    return _solve(full_grid(), cfg, contract, budget or SearchBudget())


__all__ = [
    "route",
    "oracle_solve",
    "BOUNDARY",
    "COL_ONLY",
    "INNER_SQUARE",
    "LAST_COL",
    "LAST_ROW",
    "GridGraph",
    "Vertex",
    "boundary_partition",
    "build_corner_grid",
    "diagonal_reflect",
    "full_grid",
    "grid_without_corner",
    "unique_l_path",
    "EscapeContract",
    "EscapePlan",
    "Path",
    "Verdict",
    "contract_for",
    "validate_plan",
    "LemmaId",
    "TerminalConfig",
    "decode_config",
    "demote_pair_to_singletons",
    "encode_config",
    "enumerate_configs",
    "make_config",
]

__version__ = "0.1.0"
