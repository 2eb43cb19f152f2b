"""Entry distributions: symmetric Weibull laws and their comparison classes.

The central law has two-sided tail P(|X| >= t) = exp(-t^r) with shape
r in [1, 2]: r = 1 is the symmetric exponential, r = 2 is Gaussian-like.
Sampling uses the exact inverse survival function |X| = (-ln U)^(1/r)
with an independent random sign, so moments and tails are closed-form
and every sampler is reproducible bit-exactly from its seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy import special

from ._rng import substream
from .errors import DomainError

SQRT3 = math.sqrt(3.0)
SQRT2 = math.sqrt(2.0)

UNIFORM_SYM = "uniform_sym"
EXP_NORMALIZED = "exp_normalized"


def _check_shape_r(r: float) -> float:
    r = float(r)
    if not (1.0 <= r <= 2.0):
        raise DomainError(f"Weibull shape r must lie in [1, 2], got {r!r}")
    return r


def _check_positive(x: float, name: str) -> float:
    x = float(x)
    if not (x > 0.0) or math.isinf(x):
        raise DomainError(f"{name} must be a positive finite real, got {x!r}")
    return x


def weibull_inverse_cdf(u: float | np.ndarray, r: float) -> float | np.ndarray:
    """|X| from a survival-probability draw: (-ln u)^(1/r), u in (0, 1]."""
    r = _check_shape_r(r)
    return (-np.log(u)) ** (1.0 / r)


def _signs(rng: np.random.Generator, size) -> np.ndarray:
    return 2.0 * rng.integers(0, 2, size=size) - 1.0


def _weibull_draw(rng: np.random.Generator, r: float, size) -> np.ndarray:
    u = 1.0 - rng.random(size=size)  # in (0, 1]
    return _signs(rng, size) * weibull_inverse_cdf(u, r)


@dataclass(frozen=True)
class DistributionSpec:
    """Base for serializable entry-law specifications."""

    kind = "abstract"

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        raise NotImplementedError

    def tail(self, t: float) -> float:
        raise NotImplementedError

    def params(self) -> dict[str, Any]:
        raise NotImplementedError

    def to_json(self) -> dict[str, Any]:
        return {"kind": self.kind, "params": self.params()}


@dataclass(frozen=True)
class WeibullSym(DistributionSpec):
    """Symmetric Weibull: P(|X| >= t) = exp(-t^r), r in [1, 2]."""

    r: float
    kind = "weibull_sym"

    def __post_init__(self) -> None:
        object.__setattr__(self, "r", _check_shape_r(self.r))

    def sample(self, rng, size):
        return _weibull_draw(rng, self.r, size)

    def tail(self, t):
        return math.exp(-(t ** self.r))

    def params(self):
        return {"r": self.r}


@dataclass(frozen=True)
class Gaussian(DistributionSpec):
    """Centered normal with standard deviation ``std``."""

    std: float = 1.0
    kind = "gaussian"

    def __post_init__(self) -> None:
        object.__setattr__(self, "std", _check_positive(self.std, "std"))

    def sample(self, rng, size):
        return self.std * rng.standard_normal(size=size)

    def tail(self, t):
        return float(special.erfc(t / (self.std * SQRT2)))

    def params(self):
        return {"std": self.std}


@dataclass(frozen=True)
class RademacherScaled(DistributionSpec):
    """+-scale with equal probability."""

    scale: float = 1.0
    kind = "rademacher_scaled"

    def __post_init__(self) -> None:
        object.__setattr__(self, "scale", _check_positive(self.scale, "scale"))

    def sample(self, rng, size):
        return self.scale * _signs(rng, size)

    def tail(self, t):
        return 1.0 if t <= self.scale else 0.0

    def params(self):
        return {"scale": self.scale}


@dataclass(frozen=True)
class PsiRExample(DistributionSpec):
    """sigma times a symmetric Weibull(r): the extremal psi_r variable."""

    r: float
    sigma: float = 1.0
    kind = "psi_r_example"

    def __post_init__(self) -> None:
        object.__setattr__(self, "r", _check_shape_r(self.r))
        object.__setattr__(self, "sigma", _check_positive(self.sigma, "sigma"))

    def sample(self, rng, size):
        return self.sigma * _weibull_draw(rng, self.r, size)

    def tail(self, t):
        return math.exp(-((t / self.sigma) ** self.r))

    def params(self):
        return {"r": self.r, "sigma": self.sigma}


@dataclass(frozen=True)
class LogConcaveUncProduct(DistributionSpec):
    """Isotropic, unconditional, log-concave product laws.

    ``uniform_sym``  : uniform on [-sqrt(3), sqrt(3)]   (variance 1)
    ``exp_normalized``: symmetric exponential / sqrt(2) (variance 1)
    """

    sub_kind: str = UNIFORM_SYM
    kind = "logconcave_unc_product"

    def __post_init__(self) -> None:
        if self.sub_kind not in (UNIFORM_SYM, EXP_NORMALIZED):
            raise DomainError(f"unknown log-concave sub_kind {self.sub_kind!r}")

    def sample(self, rng, size):
        if self.sub_kind == UNIFORM_SYM:
            return rng.uniform(-SQRT3, SQRT3, size=size)
        return _weibull_draw(rng, 1.0, size) / SQRT2

    def tail(self, t):
        if self.sub_kind == UNIFORM_SYM:
            return max(0.0, 1.0 - t / SQRT3)
        return math.exp(-SQRT2 * t)

    def params(self):
        return {"sub_kind": self.sub_kind}


_KINDS = {
    cls.kind: cls
    for cls in (WeibullSym, Gaussian, RademacherScaled, PsiRExample, LogConcaveUncProduct)
}


def spec_from_json(obj: dict[str, Any]) -> DistributionSpec:
    """Rebuild a spec from its {"kind": ..., "params": {...}} form."""
    try:
        kind = obj["kind"]
        params = obj.get("params", {})
    except (TypeError, KeyError) as exc:
        raise DomainError(f"malformed distribution spec object: {obj!r}") from exc
    if kind not in _KINDS:
        raise DomainError(f"unknown distribution kind {kind!r}; valid: {sorted(_KINDS)}")
    return _KINDS[kind](**params)


@dataclass(frozen=True)
class SampleMatrix:
    """An m x n sample with the provenance needed to regenerate it."""

    entries: np.ndarray
    spec: DistributionSpec
    m: int
    n: int
    seed: int


def sample_matrix(spec: DistributionSpec, m: int, n: int, seed: int) -> SampleMatrix:
    """Draw an m x n matrix of iid entries from ``spec``, keyed by ``seed``.

    Same (spec, m, n, seed) -> bit-identical entries.
    """
    m, n = int(m), int(n)
    if m < 1 or n < 1:
        raise DomainError(f"matrix shape must be at least 1x1, got {m}x{n}")
    rng = substream(seed)
    entries = spec.sample(rng, (m, n))
    return SampleMatrix(entries=entries, spec=spec, m=m, n=n, seed=int(seed))


def weibull_moment(r: float, rho: float) -> float:
    """rho-th moment of the symmetric Weibull(r): Gamma(rho/r + 1)^(1/rho)."""
    r = _check_shape_r(r)
    rho = float(rho)
    if not (rho >= 1.0) or math.isinf(rho):
        raise DomainError(f"moment order rho must be a finite real >= 1, got {rho!r}")
    return float(math.exp(special.gammaln(rho / r + 1.0) / rho))


def tail_prob(spec: DistributionSpec, t: float) -> float:
    """P(|X| >= t) for t >= 0."""
    t = float(t)
    if t < 0.0:
        raise DomainError(f"tail threshold must be >= 0, got {t!r}")
    return spec.tail(t)
