"""Python facade for the free-boundary control toolkit.

The native module carries the solvers; this layer only adds a convenient
constructor that accepts keyword arguments instead of a JSON string.
"""

import json

from _fbpopt import (  # noqa: F401
    ConfigError,
    Problem as _Problem,
    SolverError,
    VerificationError,
    analytic_CA,
    default_alpha,
    gagliardo_seminorm_slopes,
)

__all__ = [
    "ConfigError",
    "Problem",
    "SolverError",
    "VerificationError",
    "analytic_CA",
    "default_alpha",
    "gagliardo_seminorm_slopes",
    "problem",
]


class Problem(_Problem):
    """Configured problem instance; accepts the same keys as the CLI config."""

    def __init__(self, config=None, **kwargs):
        merged = dict(config or {})
        # "lambda" is a Python keyword, so allow "lam" as a kwarg spelling
        if "lam" in kwargs:
            kwargs["lambda"] = kwargs.pop("lam")
        merged.update(kwargs)
        super().__init__(json.dumps(merged))


def problem(**kwargs):
    return Problem(**kwargs)
