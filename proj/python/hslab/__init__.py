"""Stieltjes/Van Vleck pairs of hyperbolicity-preserving operators.

The heavy lifting lives in the compiled extension; this package just
re-exports its flat surface.  Polynomials are plain coefficient lists in
ascending powers, operators are built with :class:`Operator`.
"""

from ._hslab import (
    Error,
    NoConvergenceError,
    Operator,
    __version__,
    brute_force_oracle,
    diagnose,
    from_roots,
    load_operator,
    proper_position,
    real_roots,
    solve_all,
    solve_pair,
    spectral_polynomial,
    verify_all,
)

__all__ = [
    "Error",
    "NoConvergenceError",
    "Operator",
    "__version__",
    "brute_force_oracle",
    "diagnose",
    "from_roots",
    "load_operator",
    "proper_position",
    "real_roots",
    "solve_all",
    "solve_pair",
    "spectral_polynomial",
    "verify_all",
]
