"""Weighted-vector calculus: l_rho norms, rearrangements, an exponential
Orlicz norm, and closed-form suprema/moments for weighted sums.

The Orlicz function used throughout is phi_rho(t) = exp(2 - 2 t^(-rho)) for
t > 0 (and 0 at 0).  Its norm of k equal weights c has the closed form
c * ((2 + ln k) / 2)^(1/rho), which anchors both the bisection bracket and
the regression tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainError
from .exponents import INF, check_exponent, holder_conjugate, inv

# Bisection control: the bracket below has ratio <= (2 + ln k)/2, so the
# relative-width stop fires long before the step cap.
_BISECT_REL = 1e-13
_BISECT_MAX_STEPS = 200


@dataclass(frozen=True)
class WeightVector:
    """A finite real weight vector with a cached decreasing |.| rearrangement."""

    values: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=float)
        if arr.ndim != 1 or arr.size < 1:
            raise DomainError("weight vector must be 1-D and nonempty")
        if not np.all(np.isfinite(arr)):
            raise DomainError("weight vector entries must be finite")
        object.__setattr__(self, "values", arr)

    @cached_property
    def sorted_abs(self) -> np.ndarray:
        # kind='stable' keeps ties in input order after the sign flip trick
        return -np.sort(-np.abs(self.values), kind="stable")

    def __len__(self) -> int:
        return int(self.values.size)


def as_weights(v) -> WeightVector:
    return v if isinstance(v, WeightVector) else WeightVector(np.asarray(v, dtype=float))


def lp_norm(v, rho: float) -> float:
    """l_rho norm, rho in [1, inf]."""
    w = as_weights(v)
    rho = check_exponent(rho)
    a = np.abs(w.values)
    if math.isinf(rho):
        return float(a.max())
    if rho == 1.0:
        return float(a.sum())
    if rho == 2.0:
        return float(np.sqrt((a * a).sum()))
    m = a.max()
    if m == 0.0:
        return 0.0
    return float(m * ((a / m) ** rho).sum() ** (1.0 / rho))


def rearrange(v) -> np.ndarray:
    """Decreasing rearrangement of the absolute values."""
    return as_weights(v).sorted_abs.copy()


def _phi_sum(c_abs: np.ndarray, t: float, rho: float) -> float:
    # sum of phi_rho(|c_i| / t) over nonzero entries; (|c|/t)^(-rho) = (t/|c|)^rho
    with np.errstate(over="ignore"):
        expo = 2.0 - 2.0 * (t / c_abs) ** rho
    return float(np.exp(expo).sum())


def equal_entry_orlicz(c: float, k: int, rho: float) -> float:
    """Closed form of the phi_rho norm for k equal weights c >= 0."""
    if k < 1:
        raise DomainError("need at least one entry")
    rho = check_exponent(rho)
    return float(c) * ((2.0 + math.log(k)) / 2.0) ** (1.0 / rho)


def orlicz_phi_norm(v, rho: float) -> float:
    """Orlicz norm inf{t > 0 : sum_i phi_rho(|c_i|/t) <= 1} by safeguarded bisection.

    Bracket: [max|c|, max|c| * ((2 + ln k)/2)^(1/rho)] with k the number of
    nonzero entries; the sum is strictly decreasing in t, so bisection to a
    relative bracket width of 1e-13 (step cap 200) pins the root to 1e-12.
    """
    w = as_weights(v)
    rho = check_exponent(rho)
    if math.isinf(rho):
        raise DomainError("orlicz_phi_norm needs a finite rho")
    c_abs = np.abs(w.values)
    c_abs = c_abs[c_abs > 0.0]
    if c_abs.size == 0:
        return 0.0
    top = float(c_abs.max())
    lo = top
    hi = equal_entry_orlicz(top, c_abs.size, rho)
    if _phi_sum(c_abs, lo, rho) <= 1.0:
        return lo
    for _ in range(_BISECT_MAX_STEPS):
        if hi - lo <= _BISECT_REL * lo:
            break
        mid = 0.5 * (lo + hi)
        if _phi_sum(c_abs, mid, rho) > 1.0:
            lo = mid
        else:
            hi = mid
    return hi


def multiplier_sup(c, rho1: float, rho2: float) -> float:
    """sup over t in the unit l_rho1 ball of ||(c_i t_i)||_rho2 (exact).

    Equals ||c||_inf when rho1 <= rho2, ||c||_rho2 when rho1 = inf, and
    otherwise ||c||_e with the interpolation exponent e = rho1*rho2/(rho1-rho2).
    """
    w = as_weights(c)
    rho1 = check_exponent(rho1, "rho1")
    rho2 = check_exponent(rho2, "rho2")
    if rho1 <= rho2:
        return lp_norm(w, INF)
    if math.isinf(rho1):
        return lp_norm(w, rho2)
    # here rho2 < rho1 < inf, so the exponent is finite and > rho2
    return lp_norm(w, rho1 * rho2 / (rho1 - rho2))


def weighted_sum_moment(t, rho: float, r: float) -> float:
    """Two-sided moment surrogate for a weighted sum of Weibull(r) entries.

    rho^(1/r) * ||t||_{r*} + rho^(1/2) * ||t||_2, for finite rho >= 1.
    """
    w = as_weights(t)
    rho = float(rho)
    if not (rho >= 1.0) or math.isinf(rho):
        raise DomainError(f"moment order rho must be finite and >= 1, got {rho!r}")
    if not (1.0 <= r <= 2.0):
        raise DomainError(f"shape r must lie in [1, 2], got {r!r}")
    r_star = holder_conjugate(r)
    return rho ** (1.0 / r) * lp_norm(w, r_star) + math.sqrt(rho) * lp_norm(w, 2.0)


def ball_norm_sup(rho1: float, rho: float, k: int) -> float:
    """sup of ||t||_rho over the unit l_rho1 ball in R^k (exact)."""
    rho1 = check_exponent(rho1, "rho1")
    rho = check_exponent(rho, "rho")
    k = int(k)
    if k < 1:
        raise DomainError("dimension k must be >= 1")
    if rho1 <= rho:
        return 1.0
    return float(k) ** (inv(rho) - inv(rho1))


def sup_ball_moment_branched(rho1: float, rho2: float, r: float, k: int) -> float:
    """Three-case form of ``sup_ball_moment`` (exposed for regression tests)."""
    rho1 = check_exponent(rho1, "rho1")
    r_star = holder_conjugate(r)
    if rho1 <= 2.0:
        return rho2 ** (1.0 / r)
    if rho1 <= r_star:
        return rho2 ** (1.0 / r) + math.sqrt(rho2) * k ** (0.5 - inv(rho1))
    return (
        rho2 ** (1.0 / r) * k ** (inv(r_star) - inv(rho1))
        + math.sqrt(rho2) * k ** (0.5 - inv(rho1))
    )


def sup_ball_moment(rho1: float, rho2: float, r: float, k: int) -> float:
    """Moment surrogate of sup over the l_rho1 ball of weighted Weibull(r) sums.

    Compact form
        rho2^(1/r) * k^((1/rho1* - 1/r) v 0) + rho2^(1/2) * k^((1/rho1* - 1/2) v 0),
    asserted against the three-case branch within a universal factor 3.
    """
    rho1 = check_exponent(rho1, "rho1")
    rho2 = float(rho2)
    if not (rho2 >= 1.0) or math.isinf(rho2):
        raise DomainError(f"moment order rho2 must be finite and >= 1, got {rho2!r}")
    if not (1.0 <= r <= 2.0):
        raise DomainError(f"shape r must lie in [1, 2], got {r!r}")
    k = int(k)
    if k < 1:
        raise DomainError("dimension k must be >= 1")
    r_star = holder_conjugate(r)
    inv_rho1_star = 1.0 - inv(rho1)
    compact = (
        rho2 ** (1.0 / r) * k ** max(inv_rho1_star - 1.0 / r, 0.0)
        + math.sqrt(rho2) * k ** max(inv_rho1_star - 0.5, 0.0)
    )
    branched = sup_ball_moment_branched(rho1, rho2, r, k)
    ratio = compact / branched
    assert 1.0 / 3.0 <= ratio <= 3.0, (
        f"compact/branched supremum-moment mismatch: {ratio} at "
        f"(rho1={rho1}, rho2={rho2}, r={r}, k={k})"
    )
    return compact
