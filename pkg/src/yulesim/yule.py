"""Closed-form mathematics of the visitor-count distribution.

Under recommendation-plus-novelty dynamics the number of unique visitors a
site accumulates follows the Yule-Simon law

    pmf(n) = (alpha - 1) * Gamma(alpha) * Gamma(n) / Gamma(n + alpha),   n >= 1,

whose tail falls off as ``n**-alpha``.  The exponent is tied to the novelty
rate nu (probability per time step that a visit discovers a brand-new site
instead of following a recommendation) by

    alpha = (2 - nu) / (1 - nu),

so nu = 0 gives the pure preferential-attachment exponent alpha = 2 and
alpha grows without bound as nu approaches 1.

All probabilities are computed in log space via :func:`log_gamma`; naive
Gamma ratios overflow above n ~ 170 while these forms stay finite out to
n ~ 1e9.  Scalar arguments return floats, array-likes return numpy arrays.
"""

from __future__ import annotations

import math
from typing import Iterator

import numpy as np
from scipy.special import gammaln

from .errors import DomainError, InconsistentExponentError
from .formats import fmt12

__all__ = [
    "ALPHA_MAX",
    "DIVERGENT",
    "Divergent",
    "alpha_from_nu",
    "log_gamma",
    "nu_from_alpha",
    "sample_yule",
    "theory_rows",
    "yule_mean",
    "yule_pmf",
    "yule_survival",
    "yule_tail_approx",
]

# Exponent ceiling used by every fit bracket in the package.  Tails steeper
# than this are indistinguishable from single-point data at any feasible
# sample size.
ALPHA_MAX = 64.0


class Divergent:
    """Singleton marker for moments that do not exist."""

    _instance = None

    def __new__(cls) -> "Divergent":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "DIVERGENT"


DIVERGENT = Divergent()


def log_gamma(x):
    """Natural log of the Gamma function, for x > 0.

    Accepts a scalar or an array-like; relative error stays below 1e-12
    across [0.5, 1e9].  Raises DomainError for any x <= 0.
    """
    if np.ndim(x) == 0:
        xf = float(x)
        if not xf > 0.0:
            raise DomainError(f"log_gamma requires x > 0, got {x!r}")
        return math.lgamma(xf)
    arr = np.asarray(x, dtype=float)
    if not np.all(arr > 0.0):
        raise DomainError("log_gamma requires x > 0")
    return gammaln(arr)


def alpha_from_nu(nu):
    """Power-law exponent implied by a novelty rate: (2 - nu) / (1 - nu).

    Strictly increasing on [0, 1); alpha_from_nu(0) == 2 exactly.
    """
    if np.ndim(nu) == 0:
        nuf = float(nu)
        if not (0.0 <= nuf < 1.0):
            raise DomainError(f"novelty rate must lie in [0, 1), got {nu!r}")
        return (2.0 - nuf) / (1.0 - nuf)
    arr = np.asarray(nu, dtype=float)
    if not np.all((arr >= 0.0) & (arr < 1.0)):
        raise DomainError("novelty rate must lie in [0, 1)")
    return (2.0 - arr) / (1.0 - arr)


def nu_from_alpha(alpha):
    """Novelty rate implied by an exponent: (alpha - 2) / (alpha - 1).

    Only alpha >= 2 is consistent with the visit model; alpha in (1, 2)
    raises InconsistentExponentError because it would imply a negative
    novelty rate, and alpha <= 1 is outside the distribution's domain.
    """
    if np.ndim(alpha) == 0:
        a = float(alpha)
        if not a > 1.0:
            raise DomainError(f"exponent must exceed 1, got {alpha!r}")
        if a < 2.0:
            raise InconsistentExponentError(
                f"exponent {alpha!r} is inconsistent with the model "
                "(implies a negative novelty rate)"
            )
        return (a - 2.0) / (a - 1.0)
    arr = np.asarray(alpha, dtype=float)
    if not np.all(arr > 1.0):
        raise DomainError("exponent must exceed 1")
    if not np.all(arr >= 2.0):
        raise InconsistentExponentError(
            "exponent below 2 is inconsistent with the model "
            "(implies a negative novelty rate)"
        )
    return (arr - 2.0) / (arr - 1.0)


def _check_alpha(alpha) -> float:
    a = float(alpha)
    if not a > 1.0:
        raise DomainError(f"exponent must exceed 1, got {alpha!r}")
    return a


def yule_pmf(n, alpha):
    """Probability that a site has exactly n unique visitors (n >= 1)."""
    a = _check_alpha(alpha)
    lead = math.log(a - 1.0) + math.lgamma(a)
    if np.ndim(n) == 0:
        if n < 1:
            raise DomainError(f"visitor count must be >= 1, got {n!r}")
        return math.exp(lead + log_gamma(n) - log_gamma(float(n) + a))
    arr = np.asarray(n, dtype=float)
    if not np.all(arr >= 1.0):
        raise DomainError("visitor counts must be >= 1")
    return np.exp(lead + gammaln(arr) - gammaln(arr + a))


def yule_survival(n, alpha):
    """P(N > n): probability a site has more than n unique visitors (n >= 0).

    Closed form Gamma(n+1) * Gamma(alpha) / Gamma(n+alpha); survival(0) == 1
    exactly, and survival(n-1) - survival(n) telescopes back to the pmf.
    """
    a = _check_alpha(alpha)
    if np.ndim(n) == 0:
        if n < 0:
            raise DomainError(f"survival argument must be >= 0, got {n!r}")
        return math.exp(math.lgamma(float(n) + 1.0) + math.lgamma(a) - math.lgamma(float(n) + a))
    arr = np.asarray(n, dtype=float)
    if not np.all(arr >= 0.0):
        raise DomainError("survival arguments must be >= 0")
    return np.exp(gammaln(arr + 1.0) + math.lgamma(a) - gammaln(arr + a))


def yule_mean(alpha):
    """Mean visitor count: (alpha-1)/(alpha-2) for alpha > 2, DIVERGENT for alpha <= 2."""
    a = _check_alpha(alpha)
    if a <= 2.0:
        return DIVERGENT
    return (a - 1.0) / (a - 2.0)


def yule_tail_approx(n, alpha, *, with_prefactor: bool = True):
    """Large-n power-law approximation to the pmf (n >= 1).

    ``with_prefactor=True`` gives (alpha-1) * Gamma(alpha) * n**-alpha, the
    true asymptote of :func:`yule_pmf`.  ``with_prefactor=False`` drops the
    (alpha-1) factor and returns the bare Gamma(alpha) * n**-alpha scaling
    form; the two coincide only at alpha = 2.  Not accurate at small n.
    """
    a = _check_alpha(alpha)
    lead = math.lgamma(a)
    if with_prefactor:
        lead += math.log(a - 1.0)
    if np.ndim(n) == 0:
        if n < 1:
            raise DomainError(f"visitor count must be >= 1, got {n!r}")
        return math.exp(lead - a * math.log(n))
    arr = np.asarray(n, dtype=float)
    if not np.all(arr >= 1.0):
        raise DomainError("visitor counts must be >= 1")
    return np.exp(lead - a * np.log(arr))


def sample_yule(alpha, rng) -> int:
    """Draw one visitor count by exact inversion of the survival function.

    ``rng`` is any object with a ``random()`` method returning uniforms in
    [0, 1), e.g. ``random.Random``.  The smallest n with survival(n) < u is
    located by exponential doubling followed by binary search, so the output
    is distributed exactly as :func:`yule_pmf`.
    """
    a = _check_alpha(alpha)
    lead = math.lgamma(a)

    def surv(n: int) -> float:
        return math.exp(math.lgamma(n + 1.0) + lead - math.lgamma(n + a))

    u = rng.random()
    while u <= 0.0:  # need u in the open interval (0, 1)
        u = rng.random()
    hi = 1
    while surv(hi) >= u:
        hi <<= 1
    lo = hi >> 1  # surv(lo) >= u (surv(0) == 1 covers hi == 1)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if surv(mid) < u:
            hi = mid
        else:
            lo = mid
    return hi


_TABLE_CHUNK = 1 << 16


def theory_rows(alpha, max_n: int) -> Iterator[str]:
    """Yield ``n,pmf,ccdf`` text rows for n = 1..max_n.

    Values carry 12 significant digits in decimal notation; ccdf is
    P(N > n).  Rows come out in strictly increasing n.
    """
    a = _check_alpha(alpha)
    if max_n < 1:
        raise DomainError(f"max_n must be >= 1, got {max_n!r}")
    for start in range(1, max_n + 1, _TABLE_CHUNK):
        stop = min(start + _TABLE_CHUNK, max_n + 1)
        ns = np.arange(start, stop, dtype=float)
        pmf = yule_pmf(ns, a)
        ccdf = yule_survival(ns, a)
        for i, n in enumerate(range(start, stop)):
            yield f"{n},{fmt12(pmf[i])},{fmt12(ccdf[i])}"
