"""Recommendation-driven site-visit modeling toolkit.

The package covers the full loop around one stochastic model of how users
pick sites to visit: with a small novelty rate ``nu`` a visit discovers a new
site, otherwise it follows recommendations toward sites in proportion to
their current visitor counts.  That process makes site popularity
Yule-Simon distributed with power-law exponent ``alpha = (2 - nu)/(1 - nu)``.

Modules:

* :mod:`yulesim.yule`       closed-form pmf/ccdf/moments, exponent mapping, sampling
* :mod:`yulesim.urn`        seeded Monte Carlo simulator plus an exact small-horizon oracle
* :mod:`yulesim.estimators` OLS log-log and maximum-likelihood exponent fits, Zipf rank analysis
* :mod:`yulesim.traces`     access-log parsing, unique-visitor reduction, trace synthesis
* :mod:`yulesim.cli`        the ``yulesim`` command-line pipeline
"""

from .errors import (
    BoundaryFitError,
    DomainError,
    FormatError,
    InconsistentExponentError,
    InsufficientDataError,
    TraceFormatError,
    WindowError,
    YulesimError,
)
from .estimators import (
    INCONSISTENT,
    FitResult,
    RankRow,
    ccdf_points,
    fit_mle_yule,
    fit_ols_loglog,
    fit_zipf,
    rank_table,
    yule_log_likelihood,
)
from .formats import fmt12, read_histogram, write_histogram
from .traces import (
    FormatSpec,
    ParseStats,
    SynthesisSummary,
    TimeWindow,
    TraceRecord,
    VisitSummary,
    host_of_url,
    parse_trace,
    synthesize_trace,
    synthetic_records,
    unique_visitors,
    write_trace,
)
from .urn import (
    SimConfig,
    UrnState,
    exact_first_site_distribution,
    new_simulation,
    replicate,
    run,
    run_replica,
    splitmix64,
    step,
)
from .yule import (
    ALPHA_MAX,
    DIVERGENT,
    Divergent,
    alpha_from_nu,
    log_gamma,
    nu_from_alpha,
    sample_yule,
    theory_rows,
    yule_mean,
    yule_pmf,
    yule_survival,
    yule_tail_approx,
)

__version__ = "0.1.0"
