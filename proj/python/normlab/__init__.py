"""Python bindings for the normlab C++ core."""

from ._normlab import (  # noqa: F401
    ArgumentError,
    Domain,
    DomainError,
    Error,
    EvalError,
    HoloExpr,
    ParseError,
    affine_pullback,
    evaluate,
    evaluate_jet,
    kobayashi_ball,
    kobayashi_domain_bounds,
    kobayashi_upper,
    levi_log1p_closed,
    parse,
    remark_counterexample,
    rescale_sharp_identity_check,
    run_command,
    sharp,
    sharp_fd,
)
