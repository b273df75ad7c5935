"""
Robin eigenvalues of the Laplacian on the hemisphere and on spherical caps.

The hemisphere spectrum splits into clusters of degrees nu in (l, l + 1),
found from a secular equation in Gamma ratios; general caps are handled by
scanning Ferrers functions P_nu^m(cos theta0) in nu.
"""
from .cap import (
    BoundaryCondition,
    CapEigenvalue,
    CapProblem,
    CapSpectrum,
    cap_residual,
    cap_spacing_report,
    cap_spectrum,
    weyl_count,
)
from .errors import BracketError, ConvergenceError, DomainError
from .secular import (
    RobinRoot,
    admissible_orders,
    delta_bound,
    secular_log_deriv,
    secular_S,
    solve_deltas,
    solve_nu,
)
from .specfun import (
    LegendreArgs,
    SeriesControl,
    hyp2f1_series,
    legendre_P,
    legendre_P_at0,
    legendre_P_dx,
    legendre_P_normalized,
    legendre_table,
)
from .spectrum import (
    Cluster,
    EigenvalueRecord,
    Spectrum,
    build_spectrum,
    delta_asymptotic,
    gap_asymptotic,
    make_cluster,
    neumann_cluster,
    robin_cluster,
)
from .stats import (
    GapSample,
    SpacingHistogram,
    cluster_gap_mean,
    gap_bound_constants,
    large_gap_count,
    spacing_distribution,
    szego_cdf,
    szego_density,
    szego_ks_distance,
)

__version__ = "0.1.0"
