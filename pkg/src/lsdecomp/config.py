"""Centralized numerical tolerances.

Every tolerance used by the package lives here so that tests and the
library agree on one set of defaults.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    hermitian: float = 1e-10       # max |M - M^dag| entry for Hermiticity
    trace: float = 1e-10           # |tr(rho) - 1|
    psd: float = 1e-9              # eigenvalues >= -psd pass validation
    psd_hard: float = 1e-6         # below -psd_hard, psd_sqrt refuses
    eig_clamp: float = 1e-9        # eigenvalues in [-eig_clamp, 0) clamp to 0
    norm: float = 1e-12            # pure-state normalization
    zero: float = 1e-12            # generic "is this exactly zero" cutoff
    reconstruction: float = 1e-10  # |lambda*rho_s + (1-lambda)*rho_e - rho|
    boundary: float = 1e-8         # concurrence / PPT margin of rho_s
    rank: float = 1e-8             # eigenvalue threshold when counting rank
    bisection: float = 1e-10       # absolute tolerance of the oracle bisection
    oracle: float = 1e-3           # |closed-form lambda - oracle lambda*|
    newton_target: float = 1e-12   # root-finder residual target
    newton_fail: float = 1e-9      # residual above this raises NoConvergence
    lambda_slack: float = 1e-9     # closed-form lambda may poke out of [0,1] by this


TOL = Tolerances()
