"""Term rewriting for the deformed position-momentum algebra."""
from .appendix import (ConstraintSet, commutator_q, commutator_qi_pinv,
                       commutator_qi_pj, commutator_qi_pnorm, derivative,
                       equation_str, jacobi_residual, match_representation,
                       momentum_map, representation_commutator,
                       solve_jacobi_constraints, target_algebra, theta, to_deformed)
from .coeffs import GENS, Poly, format_poly
from .terms import (MomentumTerm, TermSum, format_termsum, normalize, parse_termsum,
                    power, product)

__all__ = [
    "ConstraintSet", "GENS", "MomentumTerm", "Poly", "TermSum", "commutator_q",
    "commutator_qi_pinv", "commutator_qi_pj", "commutator_qi_pnorm", "derivative",
    "equation_str", "format_poly", "format_termsum", "jacobi_residual",
    "match_representation", "momentum_map", "normalize", "parse_termsum", "power",
    "product", "representation_commutator", "solve_jacobi_constraints",
    "target_algebra", "theta", "to_deformed",
]
