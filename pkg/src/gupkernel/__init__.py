"""Propagation kernels, classical actions and spectra under a generalized uncertainty principle.

The deformation adds a linear (``alpha``) and a quadratic (``beta``) momentum
correction to the canonical commutator. Submodules:

``params``       parameters, constraint checks and the velocity bound
``algebra``      exact term rewriting for the deformed commutator algebra
``classical``    trajectories, actions and shooting/quadrature oracles
``kernels``      semiclassical kernels for the free particle and the oscillator
``spectral``     Hermite basis, perturbed levels, spectral and Mehler sums
``lattice``      time-sliced quadrature and Euclidean Monte Carlo
``numerics``     RK4, bisection, Gauss rules and a Jacobi eigensolver
``validation``   the sweeps behind ``gup check``
"""
from .classical import Boundary
from .errors import (CausticError, ConvergenceError, DomainError, GupError,
                     ImaginaryRootError, StabilityError)
from .kernels import KernelValue, free_kernel, ho_kernel_semiclassical
from .params import (ConstraintReport, GupParams, load_params, max_free_velocity,
                     params_from_n, validate_params)

__version__ = "0.1.0"

__all__ = [
    "Boundary", "CausticError", "ConstraintReport", "ConvergenceError", "DomainError",
    "GupError", "GupParams", "ImaginaryRootError", "KernelValue", "StabilityError",
    "free_kernel", "ho_kernel_semiclassical", "load_params", "max_free_velocity",
    "params_from_n", "validate_params",
]
