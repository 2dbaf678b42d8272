"""Farm gridworld benchmark for informative path planning."""

from ._core import (  # noqa: F401
    ConfigError,
    ContractViolation,
    DegenerateNormalizer,
    EstimatorError,
    Geometry,
    Measurement,
    asymmetric_error,
    build_geometry,
    compute_loss,
    environment_trajectory,
    estimate_adaptive_disk,
    gp_fit_predict,
    plan_lawnmower,
    plan_spiral,
    relevance_mask,
    run_scenario,
    susceptibility_mask,
)

__all__ = [name for name in dir() if not name.startswith("_")]
