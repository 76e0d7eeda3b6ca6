"""Traces of spectrally defined operators on the circle and the flat torus."""

import json

from ._core import (
    BoundedValue,
    ConvergenceError,
    SumOutcome,
    __version__,
    abs_op,
    diag_partial_sums,
    dirichlet_beta,
    eigenvalue,
    gamma_positive_integer,
    is_psd,
    lattice_sum_closed,
    lattice_sum_direct,
    lidskii_check,
    mellin_theta,
    psi_vector,
    random_operator,
    random_orthonormal_basis,
    run_cli,
    sqrt_psd,
    tail_bound,
    theta3,
    trace_diag,
    trace_norm,
    zeta,
)
from . import _core


def trace(operator, power, tol=1e-10, threads=1):
    """Classify and evaluate the trace of an operator power.

    operator is "s1" (D^-n on the circle), "t2" (D^-n on the torus) or "p"
    ((d* D^-1)^n on the torus). Returns the record as a dict.
    """
    return json.loads(_core._trace_json(operator, power, tol, threads))


def p2_divergence_certificate(target):
    return json.loads(_core._p2_certificate_json(target))


def cli_json(*args):
    """Run the command-line tool in-process and parse its JSON report."""
    code, out, err = run_cli([str(a) for a in args])
    if code != 0:
        raise RuntimeError(f"spectrace exited {code}: {err.strip()}")
    return json.loads(out)


__all__ = [
    "BoundedValue",
    "ConvergenceError",
    "SumOutcome",
    "__version__",
    "abs_op",
    "cli_json",
    "diag_partial_sums",
    "dirichlet_beta",
    "eigenvalue",
    "gamma_positive_integer",
    "is_psd",
    "lattice_sum_closed",
    "lattice_sum_direct",
    "lidskii_check",
    "mellin_theta",
    "p2_divergence_certificate",
    "psi_vector",
    "random_operator",
    "random_orthonormal_basis",
    "run_cli",
    "sqrt_psd",
    "tail_bound",
    "theta3",
    "trace",
    "trace_diag",
    "trace_norm",
    "zeta",
]
