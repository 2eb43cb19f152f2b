"""Monte Carlo estimators for expected norms and ratio campaigns.

Replicates are driven by independent counter-based substreams: replicate
``i`` of an estimate seeded with ``seed`` always sees the generator
``substream(seed, i)``, so estimates are reproducible regardless of how
many replicates run or in what order points are visited.  Solvers that
need extra randomness (multistart, local search) keep consuming the same
per-replicate stream.

Estimates aggregate replicates in batches of 100; the reported standard
error is the empirical std of the batch means divided by sqrt(#batches).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ._rng import mix64, point_hash, substream
from .bounds import BoundValue, TensorWeights
from .distributions import DistributionSpec
from .errors import DomainError
from .exponents import NormPair
from .opnorm import FinitePointSet, SolverBudget, bilinear_sup, opnorm, submatrix_sup
from .vectors import lp_norm

__all__ = [
    "BATCH_SIZE",
    "MCEstimate",
    "RatioRecord",
    "run_estimator",
    "estimate_opnorm",
    "estimate_esup_bilinear",
    "estimate_esup_linear",
    "estimate_order_stat_lq",
    "estimate_submatrix_sup",
    "ratio_campaign",
    "campaign_summary",
]

BATCH_SIZE = 100


@dataclass(frozen=True)
class MCEstimate:
    """Sample mean with a batch-means standard error."""

    mean: float
    stderr: float
    reps: int
    batches: int

    def interval(self, width: float = 2.0) -> tuple[float, float]:
        return self.mean - width * self.stderr, self.mean + width * self.stderr


@dataclass(frozen=True)
class RatioRecord:
    """One grid point of a ratio campaign: empirical mean / formula value."""

    point: dict
    seed: int
    formula_value: float
    formula_case: str
    estimate: MCEstimate | None = None
    ratio: float | None = None
    error: str | None = None


def _check_reps(reps: int) -> int:
    if not isinstance(reps, (int, np.integer)) or reps < BATCH_SIZE or reps % BATCH_SIZE:
        raise DomainError(
            f"reps must be a positive multiple of {BATCH_SIZE}, got {reps!r}"
        )
    return int(reps)


def run_estimator(
    one_rep: Callable[[np.random.Generator], float], reps: int, seed: int
) -> MCEstimate:
    """Average ``one_rep`` over independent substreams of ``seed``."""

    reps = _check_reps(reps)
    vals = np.empty(reps, dtype=float)
    for i in range(reps):
        vals[i] = one_rep(substream(seed, i))
    if not np.all(np.isfinite(vals)):
        raise DomainError("estimator produced non-finite replicate values")
    batches = reps // BATCH_SIZE
    means = vals.reshape(batches, BATCH_SIZE).mean(axis=1)
    if batches > 1:
        stderr = float(np.std(means, ddof=1) / math.sqrt(batches))
    else:
        stderr = float(np.std(vals, ddof=1) / math.sqrt(reps))
    return MCEstimate(mean=float(vals.mean()), stderr=stderr,
                      reps=reps, batches=batches)


def estimate_opnorm(
    spec: DistributionSpec,
    m: int,
    n: int,
    pair: NormPair,
    reps: int,
    seed: int,
    weights: TensorWeights | None = None,
    budget: SolverBudget | None = None,
) -> MCEstimate:
    """E||A||_{p->q} for A with iid ``spec`` entries, optionally a_i b_j scaled."""

    scale = None
    if weights is not None:
        if weights.m != m or weights.n != n:
            raise DomainError(
                f"weights shape {(weights.m, weights.n)} does not match {(m, n)}"
            )
        scale = weights.outer_abs()

    def one_rep(rng: np.random.Generator) -> float:
        entries = spec.sample(rng, (m, n))
        if scale is not None:
            entries = entries * scale
        return opnorm(entries, pair, budget=budget, rng=rng).value

    return run_estimator(one_rep, reps, seed)


def estimate_esup_bilinear(
    spec: DistributionSpec,
    s_set: FinitePointSet,
    t_set: FinitePointSet,
    reps: int,
    seed: int,
) -> MCEstimate:
    """E max over S x T of the chaos s.Xt with iid ``spec`` entries."""

    def one_rep(rng: np.random.Generator) -> float:
        x = spec.sample(rng, (s_set.dim, t_set.dim))
        return bilinear_sup(x, s_set, t_set)[0]

    return run_estimator(one_rep, reps, seed)


def estimate_esup_linear(
    spec: DistributionSpec, t_set: FinitePointSet, reps: int, seed: int
) -> MCEstimate:
    """E max over T of the canonical process t.X with iid ``spec`` coordinates."""

    pts = t_set.points

    def one_rep(rng: np.random.Generator) -> float:
        x = spec.sample(rng, t_set.dim)
        return float(np.max(pts @ x))

    return run_estimator(one_rep, reps, seed)


def estimate_order_stat_lq(
    spec: DistributionSpec, m: int, k: int, q: float, reps: int, seed: int
) -> MCEstimate:
    """E l_q norm of the k largest absolute values among m iid samples."""

    if not 1 <= k <= m:
        raise DomainError(f"need 1 <= k <= m, got k={k}, m={m}")

    def one_rep(rng: np.random.Generator) -> float:
        x = np.abs(spec.sample(rng, m))
        top = x if k == m else np.partition(x, m - k)[m - k:]
        return lp_norm(top, q)

    return run_estimator(one_rep, reps, seed)


def estimate_submatrix_sup(
    spec: DistributionSpec,
    m: int,
    n: int,
    k: int,
    l: int,
    pair: NormPair,
    reps: int,
    seed: int,
    mode: str = "exact",
    budget: SolverBudget | None = None,
) -> MCEstimate:
    """E of the largest p->q norm over k x l submatrices of an iid matrix."""

    def one_rep(rng: np.random.Generator) -> float:
        x = spec.sample(rng, (m, n))
        return submatrix_sup(x, k, l, pair, mode=mode, budget=budget, rng=rng)[0]

    return run_estimator(one_rep, reps, seed)


def _formula_parts(value) -> tuple[float, str]:
    if isinstance(value, BoundValue):
        return value.value, value.case
    return float(value), ""


def ratio_campaign(
    grid: Sequence[dict],
    estimator: Callable[[dict, int], MCEstimate],
    formula: Callable[[dict], BoundValue | float],
    seed: int,
) -> list[RatioRecord]:
    """Evaluate empirical/formula ratios over a parameter grid.

    Each point gets its own seed derived from the campaign seed and a
    stable hash of the point dict, so inserting or reordering points
    never changes the numbers at other points.  Estimator failures are
    recorded on the point (``error`` field) and the campaign continues.
    """

    records: list[RatioRecord] = []
    for point in grid:
        pseed = mix64(seed, point_hash(point))
        try:
            fval, fcase = _formula_parts(formula(point))
            est = estimator(point, pseed)
            if not (math.isfinite(fval) and fval > 0.0):
                raise DomainError(f"formula value must be positive, got {fval!r}")
            records.append(
                RatioRecord(
                    point=dict(point),
                    seed=pseed,
                    formula_value=fval,
                    formula_case=fcase,
                    estimate=est,
                    ratio=est.mean / fval,
                )
            )
        except Exception as exc:  # noqa: BLE001 - campaign must survive bad points
            records.append(
                RatioRecord(
                    point=dict(point),
                    seed=pseed,
                    formula_value=float("nan"),
                    formula_case="",
                    error=f"{type(exc).__name__}: {exc}",
                )
            )
    return records


def campaign_summary(
    records: Sequence[RatioRecord], band: tuple[float, float] | None = None
) -> dict:
    """Min/max/spread of the ratios plus a pass flag against a band.

    ``pass`` requires every point to have succeeded and, when a band is
    given, every ratio to lie inside ``[band[0], band[1]]``.
    """

    ratios = [rec.ratio for rec in records if rec.ratio is not None]
    errors = [rec for rec in records if rec.error is not None]
    if not ratios:
        return {
            "points": len(records),
            "errors": len(errors),
            "min_ratio": None,
            "max_ratio": None,
            "spread": None,
            "pass": False,
        }
    lo, hi = min(ratios), max(ratios)
    ok = not errors and len(ratios) == len(records)
    if band is not None:
        if not (0.0 < band[0] <= band[1]):
            raise DomainError(f"band must satisfy 0 < low <= high, got {band!r}")
        ok = ok and band[0] <= lo and hi <= band[1]
    return {
        "points": len(records),
        "errors": len(errors),
        "min_ratio": lo,
        "max_ratio": hi,
        "spread": hi / lo,
        "pass": bool(ok),
    }
