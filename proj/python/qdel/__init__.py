"""Universal quantum deletion machine simulator."""

from ._core import (
    Infeasible,
    InvalidInput,
    average_fidelity,
    check_feasible,
    classify,
    closed_F1,
    closed_F2,
    closed_F3,
    closed_F4,
    closed_rho1,
    closed_rho2,
    evaluate,
    gram,
    limit,
    realize,
    run_pipeline,
    selftest,
    sweep,
)

__all__ = [
    "Infeasible",
    "InvalidInput",
    "average_fidelity",
    "check_feasible",
    "classify",
    "closed_F1",
    "closed_F2",
    "closed_F3",
    "closed_F4",
    "closed_rho1",
    "closed_rho2",
    "evaluate",
    "gram",
    "limit",
    "realize",
    "run_pipeline",
    "selftest",
    "sweep",
]
