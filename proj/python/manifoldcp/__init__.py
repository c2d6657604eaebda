"""Maximum-margin classification of parameterized manifolds via cutting planes."""

from ._core import (
    EllipsoidManifold,
    QpSolution,
    RunTrace,
    audit_solution,
    bracket_hard,
    bracket_slack,
    ellipsoid_worst_point,
    ensemble_norm_bound,
    error_counter,
    generalization_error,
    generate_ensemble,
    load_ensemble,
    run_experiment_csv,
    run_simple,
    run_slack,
    sample_manifold,
    save_ensemble,
    train_point_svm,
    __version__,
)

__all__ = [
    "EllipsoidManifold",
    "QpSolution",
    "RunTrace",
    "audit_solution",
    "bracket_hard",
    "bracket_slack",
    "ellipsoid_worst_point",
    "ensemble_norm_bound",
    "error_counter",
    "generalization_error",
    "generate_ensemble",
    "load_ensemble",
    "run_experiment_csv",
    "run_simple",
    "run_slack",
    "sample_manifold",
    "save_ensemble",
    "train_point_svm",
    "__version__",
]
