"""Exponent estimation and rank analysis for visitor-count histograms.

A histogram is any mapping from unique-visitor count n (>= 1) to the number
of sites with that count.  Counts may be floats (e.g. an exact theory curve
scaled to a nominal site total); fits only need relative weights.  Two
fitting routes are provided:

* :func:`fit_ols_loglog` - ordinary least squares of log density on log n,
  the classic straight-line-on-a-log-log-plot method, with raw or
  logarithmically binned points;
* :func:`fit_mle_yule` - discrete maximum likelihood under the Yule-Simon
  law, which uses the full shape of the distribution including small n.

Rank-side tools (:func:`rank_table`, :func:`fit_zipf`) cover the Zipf view
of the same data, and :func:`ccdf_points` gives a binning-free plot source.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, NamedTuple, Sequence

import numpy as np
from scipy import optimize, stats
from scipy.special import gammaln

from .errors import BoundaryFitError, DomainError, InsufficientDataError
from .formats import fmt12
from .yule import ALPHA_MAX, nu_from_alpha

__all__ = [
    "INCONSISTENT",
    "FitResult",
    "RankRow",
    "ccdf_points",
    "fit_mle_yule",
    "fit_ols_loglog",
    "fit_zipf",
    "rank_table",
]

#: Marker stored in FitResult.nu_implied when the fitted exponent sits below 2
#: (a negative novelty rate has no meaning; the value is never reported).
INCONSISTENT = "inconsistent"

_MLE_BRACKET = (1.0 + 1e-6, ALPHA_MAX)


@dataclass(frozen=True)
class FitResult:
    """Fitted exponent with uncertainty and method metadata.

    ``alpha`` holds the slope magnitude for OLS-style fits (including Zipf
    rank fits) or the likelihood optimum for MLE.  ``r_squared``/``p_value``
    exist only for OLS; ``nu_implied`` is the novelty rate implied by a
    distribution exponent (None for rank fits, where the exponent is not an
    alpha), and ``n_min`` records the count (or rank) cutoff used.
    """

    method: str
    alpha: float
    alpha_stderr: float
    n_min: int
    sample_size: float
    r_squared: float | None = None
    p_value: float | None = None
    nu_implied: float | str | None = None

    def serialize(self) -> str:
        """Single-line record: method,alpha,stderr,r2,pvalue,n_min,nu_implied,sample_size.

        Absent statistics leave their field empty.
        """
        def opt(v) -> str:
            if v is None:
                return ""
            if isinstance(v, str):
                return v
            return fmt12(v)

        return ",".join(
            [
                self.method,
                fmt12(self.alpha),
                fmt12(self.alpha_stderr),
                opt(self.r_squared),
                opt(self.p_value),
                str(self.n_min),
                opt(self.nu_implied),
                fmt12(self.sample_size),
            ]
        )


class RankRow(NamedTuple):
    """One site in a rank table: rank (1-based), opaque id ('' if none), visitors."""

    rank: int
    site_id: str
    visitors: int


def _implied_nu(alpha: float) -> float | str:
    return nu_from_alpha(alpha) if alpha >= 2.0 else INCONSISTENT


def _clean_hist(hist: Mapping[int, float], n_min: int) -> tuple[np.ndarray, np.ndarray]:
    """Validate a histogram and return (ns, counts) arrays for n >= n_min."""
    if n_min < 1:
        raise DomainError(f"n_min must be >= 1, got {n_min!r}")
    ns, counts = [], []
    for n, c in hist.items():
        if n < 1 or int(n) != n:
            raise DomainError(f"histogram keys must be positive integers, got {n!r}")
        if c < 0:
            raise DomainError(f"histogram counts must be >= 0, got {c!r} at n={n}")
        if n >= n_min and c > 0:
            ns.append(int(n))
            counts.append(float(c))
    order = np.argsort(ns)
    return np.asarray(ns, dtype=float)[order], np.asarray(counts)[order]


def _log_bins(ns: np.ndarray, counts: np.ndarray, n_min: int) -> tuple[np.ndarray, np.ndarray]:
    """Pool counts into geometric bins of ratio 2 anchored at n_min.

    Each bin [lo, 2*lo) contributes one point: pooled count divided by the
    number of integers in the bin, positioned at the bin's geometric mean.
    Empty bins never become points (a density of zero has no logarithm);
    pooling covers the contiguous occupied range and stops at the first
    empty bin past the start of the data, so a handful of extreme-outlier
    sites beyond the body of the distribution cannot grab the same leverage
    as fully populated bins.
    """
    lo = n_min
    max_n = int(ns[-1])
    xs, ys = [], []
    while lo <= max_n:
        hi = 2 * lo
        mask = (ns >= lo) & (ns < hi)
        pooled = counts[mask].sum()
        if pooled > 0:
            xs.append(math.sqrt(lo * (hi - 1)))
            ys.append(pooled / (hi - lo))
        elif xs:
            break
        lo = hi
    return np.asarray(xs), np.asarray(ys)


def fit_ols_loglog(
    hist: Mapping[int, float], n_min: int = 1, binning: str = "logarithmic"
) -> FitResult:
    """Ordinary least squares of log density on log n over points with n >= n_min.

    ``binning="raw"`` fits each distinct count as its own point;
    ``"logarithmic"`` (the default) pools counts into ratio-2 geometric bins
    over the contiguous occupied range first, which tames the tail noise
    that otherwise biases heavy-tail slopes shallow.  Returns the slope
    magnitude as alpha together with its standard error, R-squared, and the
    two-sided p-value of the slope (t-test with points - 2 degrees of
    freedom).
    """
    ns, counts = _clean_hist(hist, n_min)
    if binning == "raw":
        x, y = ns, counts
    elif binning == "logarithmic":
        if ns.size == 0:
            raise InsufficientDataError("histogram has no usable points")
        x, y = _log_bins(ns, counts, n_min)
    else:
        raise DomainError(f"unknown binning {binning!r} (expected 'raw' or 'logarithmic')")
    if x.size < 3:
        raise InsufficientDataError(
            f"need >= 3 usable points with n >= {n_min}, have {x.size}"
        )
    res = stats.linregress(np.log(x), np.log(y))
    alpha = -float(res.slope)
    return FitResult(
        method="ols_loglog",
        alpha=alpha,
        alpha_stderr=float(res.stderr),
        n_min=n_min,
        sample_size=float(counts.sum()),
        r_squared=float(res.rvalue) ** 2,
        p_value=float(res.pvalue),
        nu_implied=_implied_nu(alpha),
    )


def yule_log_likelihood(hist: Mapping[int, float], alpha: float, n_min: int = 1) -> float:
    """Yule-Simon log-likelihood of histogram data at a given exponent.

    N * [ln(alpha - 1) + lnGamma(alpha)] + sum_i c_i * [lnGamma(n_i) -
    lnGamma(n_i + alpha)], evaluated from the counts directly (no per-site
    expansion).
    """
    if not alpha > 1.0:
        raise DomainError(f"exponent must exceed 1, got {alpha!r}")
    ns, counts = _clean_hist(hist, n_min)
    if ns.size == 0:
        raise InsufficientDataError("histogram has no usable points")
    total = counts.sum()
    return float(
        total * (math.log(alpha - 1.0) + math.lgamma(alpha))
        + np.dot(counts, gammaln(ns) - gammaln(ns + alpha))
    )


def fit_mle_yule(hist: Mapping[int, float], n_min: int = 1) -> FitResult:
    """Maximum-likelihood Yule-Simon exponent from histogram counts.

    The log-likelihood is maximized over alpha in (1 + 1e-6, 64] by bounded
    1-D search to 1e-8 in alpha; the standard error comes from the observed
    information (central second difference at the optimum).  R-squared and
    p-value do not apply to this method.  Degenerate data whose likelihood
    peaks at a bracket edge (e.g. every site at the same n) raise
    BoundaryFitError.
    """
    ns, counts = _clean_hist(hist, n_min)
    total = counts.sum()
    if total < 2:
        raise InsufficientDataError(
            f"need >= 2 sites with n >= {n_min}, have {total:g}"
        )
    lg_ns = gammaln(ns)

    def loglike(a: float) -> float:
        return float(
            total * (math.log(a - 1.0) + math.lgamma(a))
            + np.dot(counts, lg_ns - gammaln(ns + a))
        )

    lo, hi = _MLE_BRACKET
    res = optimize.minimize_scalar(
        lambda a: -loglike(a), bounds=(lo, hi), method="bounded", options={"xatol": 1e-8}
    )
    alpha = float(res.x)
    if alpha - lo < 1e-4 or hi - alpha < 1e-2:
        raise BoundaryFitError(
            f"likelihood maximized at the bracket edge (alpha ~ {alpha:.4g}); "
            "the data carry no usable tail information"
        )
    h = 1e-4 * alpha
    d2 = (loglike(alpha + h) - 2.0 * loglike(alpha) + loglike(alpha - h)) / (h * h)
    if not d2 < 0.0:
        raise BoundaryFitError(
            f"flat likelihood around alpha ~ {alpha:.4g}; no curvature to set an error bar"
        )
    return FitResult(
        method="mle_yule",
        alpha=alpha,
        alpha_stderr=1.0 / math.sqrt(-d2),
        n_min=n_min,
        sample_size=float(total),
        nu_implied=_implied_nu(alpha),
    )


def rank_table(hist: Mapping[int, float]) -> list[RankRow]:
    """Expand a histogram into one row per site, ranked by descending visitors.

    Ranks run 1..K in output order.  Sites sharing a visitor count are
    emitted in a fixed (hence reproducible) order; histogram counts must be
    integral to expand into individual sites.
    """
    ns, counts = _clean_hist(hist, 1)
    if ns.size == 0:
        raise InsufficientDataError("histogram has no sites")
    rows: list[RankRow] = []
    rank = 1
    for n, c in zip(ns[::-1], counts[::-1]):
        if int(c) != c:
            raise DomainError(f"cannot rank fractional site count {c!r} at n={int(n)}")
        for _ in range(int(c)):
            rows.append(RankRow(rank, "", int(n)))
            rank += 1
    return rows


def fit_zipf(
    table: Sequence[RankRow], rank_min: int = 10, rank_max: int | None = None
) -> FitResult:
    """OLS of log visitors on log rank over ranks [rank_min, rank_max].

    The slope magnitude lands in the alpha field but is a rank-curve (Zipf)
    exponent, roughly 1/(alpha - 1) for Yule-tailed data, so nu_implied is
    left unset.  The default range 10..min(1000, K) avoids both the
    flattened head and the quantized tail.
    """
    size = len(table)
    if rank_max is None:
        rank_max = min(1000, size)
    if rank_min < 1 or rank_max > size or rank_min > rank_max:
        raise DomainError(
            f"rank range [{rank_min}, {rank_max}] invalid for a table of {size} rows"
        )
    rows = table[rank_min - 1 : rank_max]
    if len(rows) < 3:
        raise InsufficientDataError(
            f"need >= 3 rows in the rank range, have {len(rows)}"
        )
    x = np.log([row.rank for row in rows])
    y = np.log([row.visitors for row in rows])
    res = stats.linregress(x, y)
    return FitResult(
        method="ols_loglog",
        alpha=-float(res.slope),
        alpha_stderr=float(res.stderr),
        n_min=rank_min,
        sample_size=float(len(rows)),
        r_squared=float(res.rvalue) ** 2,
        p_value=float(res.pvalue),
        nu_implied=None,
    )


def ccdf_points(hist: Mapping[int, float]) -> list[tuple[int, float]]:
    """(n, fraction of sites with >= n visitors) at every observed count.

    Fractions are monotone non-increasing; the first point is (min n, 1.0),
    so histograms where every site has at least one visitor start at (1, 1.0).
    """
    ns, counts = _clean_hist(hist, 1)
    if ns.size == 0:
        raise InsufficientDataError("histogram has no sites")
    total = counts.sum()
    tail = total - np.concatenate(([0.0], np.cumsum(counts[:-1])))
    return [(int(n), float(t / total)) for n, t in zip(ns, tail)]
