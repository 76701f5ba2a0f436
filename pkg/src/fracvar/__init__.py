"""Fractional derivatives, jet lifts, variational residuals, and FDE solvers.

Everything operates on uniformly sampled paths with convolution-weight
discretizations, so derivative, lift, residual, and solver outputs compose
consistently. See the README for conventions (base-node handling, interior
norms, coefficient sets).
"""

__version__ = "0.1.0"

from .specfun import ConvergenceError, MLParams, gamma, gen_binomial, mittag_leffler
from .fracops import (
    FracOrder,
    SampledPath,
    Side,
    frac_deriv,
    frac_deriv_from_base,
    gl_weights,
    ibp_residual,
    leibniz_series,
)
from .jet import JetPoint, JetTrajectory, lift, taylor_reconstruct
from .varcalc import (
    ELResidualReport,
    HessianG,
    Lagrangian,
    Variant,
    action,
    el_explicit_rhs,
    el_residual,
    frac_partial,
    hessian_g,
    lagrangian_catalog,
    make_lagrangian,
)
from .fodesolve import (
    FODE2,
    DivergenceError,
    ModelTemplate,
    MultiTermFDE,
    SolveReport,
    fde_residual,
    find_model,
    model_catalog,
    solve_fode2,
    solve_multiterm,
)

__all__ = [
    "__version__",
    "ConvergenceError",
    "MLParams",
    "gamma",
    "gen_binomial",
    "mittag_leffler",
    "FracOrder",
    "SampledPath",
    "Side",
    "frac_deriv",
    "frac_deriv_from_base",
    "gl_weights",
    "ibp_residual",
    "leibniz_series",
    "JetPoint",
    "JetTrajectory",
    "lift",
    "taylor_reconstruct",
    "ELResidualReport",
    "HessianG",
    "Lagrangian",
    "Variant",
    "action",
    "el_explicit_rhs",
    "el_residual",
    "frac_partial",
    "hessian_g",
    "lagrangian_catalog",
    "make_lagrangian",
    "FODE2",
    "DivergenceError",
    "ModelTemplate",
    "MultiTermFDE",
    "SolveReport",
    "fde_residual",
    "find_model",
    "model_catalog",
    "solve_fode2",
    "solve_multiterm",
]
