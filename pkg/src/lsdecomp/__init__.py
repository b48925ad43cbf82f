"""Bipartite entanglement measures and optimal Lewenstein-Sanpera splits.

The package computes, in closed form, the optimal decomposition
rho = lambda * rho_s + (1 - lambda) * rho_e (separable plus entangled,
lambda maximal) for a collection of analytic state families, together
with an independent grid-plus-bisection oracle that certifies the
weights numerically.
"""

from .config import TOL, Tolerances
from .decompose import (
    LSDecomposition,
    average_concurrence,
    decompose,
    decompose_bd22,
    decompose_bd23,
    decompose_horodecki33,
    decompose_icd,
    decompose_isotropic,
    decompose_locc1,
    decompose_locc3,
    decompose_multi_isotropic,
    decompose_werner,
    decompose_wootters,
    locc1_max_theta_pp,
)
from .families import (
    BD22Params,
    BD23Params,
    EntanglementClass,
    Horodecki33Params,
    ICDParams,
    IsotropicParams,
    Locc1Params,
    Locc3Params,
    MultiIsoParams,
    WernerParams,
    bd23_canonicalize,
    entanglement_class_33,
    icd_lambda,
    is_separable,
    to_density,
)
from .linalg import (
    DensityMatrix,
    PureState,
    hermitian_eigen,
    is_psd,
    kron,
    partial_trace,
    partial_transpose,
    psd_sqrt,
)
from .measures import (
    ConcurrenceReport,
    WoottersDecomposition,
    concurrence_lower_bound_2k,
    i_concurrence_pure,
    spin_flip,
    takagi,
    wootters_basis,
    wootters_concurrence,
)
from .oracle import (
    BoundarySampler,
    OracleReport,
    certify,
    default_sampler,
    max_lambda_for,
    validate,
)

__version__ = "0.1.0"
