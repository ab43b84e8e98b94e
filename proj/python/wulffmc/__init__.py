"""Monte Carlo comparison of star-shaped containers by mean equilibrium energy.

The compiled core does the work; this package re-exports its surface.
Typical use::

    import wulffmc as wm

    params = wm.EnsembleParams()
    params.particles = 32
    params.beta = 5.0
    params.pressure = 2.0

    schedule = wm.RunSchedule()
    opts = wm.CompareOptions()
    shapes = [wm.make_shape("disk", 2), wm.make_shape("hexagon", 2)]
    cmp = wm.compare_shapes(shapes, params, schedule, opts)
    for pair in cmp.pairs:
        print(pair.delta, pair.se, pair.verdict)
"""

from ._core import (  # noqa: F401
    HARD_CORE_DIAMETER,
    INTERACTION_CUTOFF,
    REFERENCE_VOLUME,
    CompareOptions,
    EnergyEstimate,
    EnsembleParams,
    EquilibrationFailure,
    EstimateOptions,
    MoveCounters,
    PairVerdict,
    PressureScan,
    PressureScanRow,
    ReplicaSummary,
    RunResult,
    RunSchedule,
    SearchConfig,
    SearchIteration,
    Shape,
    ShapeComparison,
    ShapeError,
    ShapeEstimate,
    ShapeSearchState,
    TrendRow,
    Verdict,
    canonicalize,
    compare_shapes,
    derive_seeds,
    estimate_mean_energy,
    estimate_shape,
    lattice_energy_per_particle,
    local_shape_search,
    make_shape,
    minimize_lattice_energy,
    normalize_to_volume,
    pair_energy,
    parse_shape_record,
    pressure_scan,
    radial_grid,
    radial_grid3,
    representation_distance,
    shape_record,
    simulate,
    verdict_name,
)

__version__ = "0.1.0"
