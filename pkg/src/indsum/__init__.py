"""Exact moments, samplers and Monte Carlo validation for infinite sums of
independent indicators, instantiated for the Ginibre radial point count and
Karlin's occupancy scheme."""

from .specfun import Accuracy, DEFAULT_ACCURACY
from .errors import BisectionError, HorizonError, IndsumError, TruncationError
from .reports import ValidationReport
from .core import (
    CheckpointGrid,
    IndicatorModel,
    PathSample,
    exp_moment_bound_check,
    lower_grid,
    mean_b,
    sample_counts,
    sample_path,
    upper_grid,
    var_a,
)
from .ginibre import (
    DiscreteBessel,
    GinibreModel,
    lil_envelope_ginibre,
    solve_window_x,
    var_exact,
    window_fraction_f,
    window_variance,
)
from .karlin import (
    BorderlinePower,
    ConstantSet,
    DeHaanPoly,
    DeHaanStretched,
    ExplicitBoxes,
    KarlinModel,
    PowerLaw,
    asymptotic_constants,
    build_pk,
    det_mean,
    det_sample,
    det_var,
    exotic_condition_probe,
    hat_L,
    mean_Kj,
    mean_Kj_star,
    parse_rho_spec,
    rho_eval,
    var_Kj,
)
from .montecarlo import (
    LilTrace,
    abs_moment_report,
    clt_report,
    exp_moment_report,
    ks_statistic,
    lil_trace,
)

__version__ = "0.1.0"
