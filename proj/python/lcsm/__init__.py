"""Penalized covariance regression on a network basis.

The heavy lifting lives in the compiled extension; this package re-exports
its surface.
"""

from ._lcsm import (
    BasisSet,
    PathResult,
    fit_path,
    fit_single,
    frob_inner,
    gen_adjacency,
    make_basis,
    make_basis_from,
    min_eigenvalue,
    numerical_rank,
    pd_correct,
    remainder_basis,
    risk_bound,
    simulate,
    soft_threshold,
    tau,
    vh,
    vh_inv,
    vh_iso,
    vh_iso_inv,
)

__all__ = [
    "BasisSet",
    "PathResult",
    "fit_path",
    "fit_single",
    "frob_inner",
    "gen_adjacency",
    "make_basis",
    "make_basis_from",
    "min_eigenvalue",
    "numerical_rank",
    "pd_correct",
    "remainder_basis",
    "risk_bound",
    "simulate",
    "soft_threshold",
    "tau",
    "vh",
    "vh_inv",
    "vh_iso",
    "vh_iso_inv",
]
