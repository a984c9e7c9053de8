"""Dimer-model toolkit: Temperleyan polyominoes, Kasteleyn linear algebra,
exact uniform tiling samplers, and height-function statistics."""

from . import errors
from .lattice import (
    Circle,
    Polyline,
    Polyomino,
    RegionSpec,
    SquareClass,
    TemperleyanPolyomino,
    annulus_region,
    b0_prime_graph,
    classify_square,
    discretize_region,
    fournier_check,
    interior_dual,
    make_temperleyan,
    rectangle_host,
    rectangle_region,
    region_from_json,
    region_to_json,
    square_annulus_host,
    validate_even,
)
from .height import (
    HeightField,
    Tiling,
    boundary_heights,
    canonical_gauge,
    face_height_field,
    height_change_along_path,
    height_field,
)
from .kasteleyn import (
    CouplingColumn,
    KasteleynSystem,
    build_kasteleyn,
    check_discrete_analytic,
    count_tilings,
    edge_set_probability,
    laplacian_apply,
    log10_count_tilings,
    solve_coupling,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
