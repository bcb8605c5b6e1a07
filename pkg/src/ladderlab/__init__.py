"""Numerical laboratory for the Jacob's-ladder transform of the Hardy-Littlewood integral."""
from .errors import (
    BracketError, CheckpointError, DomainError, LadderLabError, ParameterError,
    PrecisionUnreachable,
)
from .special_functions import (
    CONSTANTS, Constants, hardy_z, ln_gamma, prime_count, riemann_siegel_theta,
    zeta_sq_modulus,
)
from .quadrature import (
    CheckpointTable, IntegralResult, hli_reference, integrate_zeta_sq, j_integral,
    load_checkpoints, save_checkpoints,
)
from .ladder import (
    LadderConfig, ReverseTower, direct_iterate, phi1, phi1_derivative, phi1_inverse,
    reverse_tower, z_tilde,
)
from .raabe import (
    DecompositionReport, almost_linear_increment_check, raabe_integral,
    raabe_integral_quadrature, verify_corollary_sum, verify_increment_decomposition,
)
from .fermat import (
    FermatRational, FunctionalTrace, convergence_trace, equivalence_report,
    fermat_rationals, functional_raabe, functional_zeta,
)
from .proliferation import (
    GramResult, ProliferationSpec, gram_matrix, legendre_eval, proliferate, u_map, v_map,
)

__version__ = "0.1.0"
