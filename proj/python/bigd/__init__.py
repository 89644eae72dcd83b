"""Branch-encoded piecewise-differentiable functions and descent solvers."""

from bigd._core import (  # noqa: F401
    ActiveBranches,
    BigdConfig,
    BranchCode,
    DomainError,
    EbigdConfig,
    EncodableFunction,
    EvalRecord,
    Fixture,
    GsConfig,
    InfeasibleBranchError,
    IterationCapError,
    JointGradient,
    PracticalConfig,
    Problem,
    ProblemSpec,
    RecoverySolution,
    SolverRun,
    fixtures,
    initial_point,
    load_function,
    make_problem,
    min_norm_point,
    parse_function,
    problem_names,
    solve_bigd,
    solve_ebigd,
    solve_gs,
    solve_practical,
    solve_quartic_recovery,
)

__all__ = [
    "ActiveBranches", "BigdConfig", "BranchCode", "DomainError", "EbigdConfig",
    "EncodableFunction", "EvalRecord", "Fixture", "GsConfig",
    "InfeasibleBranchError", "IterationCapError", "JointGradient",
    "PracticalConfig", "Problem", "ProblemSpec", "RecoverySolution", "SolverRun",
    "fixtures", "initial_point", "load_function", "make_problem",
    "min_norm_point", "parse_function", "problem_names", "solve_bigd",
    "solve_ebigd", "solve_gs", "solve_practical", "solve_quartic_recovery",
]
