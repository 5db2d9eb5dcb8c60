"""Finite-difference solvers for the long-cycle boundary-value problems."""
from .grid import Grid, GridField, default_truncation, make_grid
from .phi import phi_ode, phi_quadrature
from .solver import (
    CycleSolution,
    PDESummary,
    assemble_v,
    drift_from_pde,
    pde_summary,
    phi_grid,
    refinement_study,
    solve_eta,
    solve_pi,
    solve_psi,
    solve_second_moment,
    solve_v,
    solve_v_monolithic,
)

__all__ = [
    "Grid", "GridField", "default_truncation", "make_grid", "phi_ode", "phi_quadrature",
    "CycleSolution", "PDESummary", "assemble_v", "drift_from_pde", "pde_summary", "phi_grid",
    "refinement_study", "solve_eta", "solve_pi", "solve_psi", "solve_second_moment", "solve_v",
    "solve_v_monolithic",
]
