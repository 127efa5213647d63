"""Classical trajectories and actions of the GUP Lagrangian."""
from .actions import (ActionBreakdown, free_action, ho_action, ho_s0, ho_s_alpha,
                      ho_s_alpha2, ho_s_beta, ho_s_beta_grouped)
from .boundary import (CAUSTIC_TOL, Boundary, FreePotential, HarmonicPotential,
                       potential_for)
from .oracles import action_quadrature, bvp_shoot
from .trajectories import (HOTrajectoryCoefficients, Trajectory, eom_factor,
                           eom_residual, free_trajectory, gup_lagrangian,
                           ho_coefficients, ho_trajectory)

__all__ = [
    "ActionBreakdown", "Boundary", "CAUSTIC_TOL", "FreePotential", "HOTrajectoryCoefficients",
    "HarmonicPotential", "Trajectory", "action_quadrature", "bvp_shoot", "eom_factor",
    "eom_residual", "free_action", "free_trajectory", "gup_lagrangian", "ho_action",
    "ho_coefficients", "ho_s0", "ho_s_alpha", "ho_s_alpha2", "ho_s_beta",
    "ho_s_beta_grouped", "ho_trajectory", "potential_for",
]
