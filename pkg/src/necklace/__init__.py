"""Fair division of multidimensional necklaces and rainbow configuration complexes."""
from .divisions import (
    CutConfiguration,
    Division,
    Labeling,
    elementary_box,
    evaluate,
    residual_norm,
    sign_representation,
    verify,
)
from .measures import Box, GridDensity, MeasureSet, bead_necklace_to_measures, box_mass, cdf, normalize
from .solver import (
    FactorPlan,
    SolverConfig,
    allocate_cut_budgets,
    compose,
    restrict_measure,
    solve,
    solve_base,
    solve_discrete_1d,
)

__version__ = "0.1.0"
