"""MLS and weighted 1-norm quasi-interpolants with fast-decaying weights."""

from ._core import (
    AdmissibilityError,
    ConfigError,
    DivergentSeries,
    Engine,
    IllConditioned,
    NodeSet,
    SolverFailure,
    UnsupportedAngle,
    admissibility,
    basis_dimension,
    franke,
    generate_grid,
    perturb,
    run,
    serialize_config,
    stability_bound,
    target,
    theory_constants,
    uniform_grid,
    weight_profile,
)

__all__ = [
    "AdmissibilityError",
    "ConfigError",
    "DivergentSeries",
    "Engine",
    "IllConditioned",
    "NodeSet",
    "SolverFailure",
    "UnsupportedAngle",
    "admissibility",
    "basis_dimension",
    "franke",
    "generate_grid",
    "perturb",
    "run",
    "serialize_config",
    "stability_bound",
    "target",
    "theory_constants",
    "uniform_grid",
    "weight_profile",
]
