"""Config-driven ratio campaigns: empirical means against closed formulas.

A campaign is described by a TOML file::

    [campaign]
    name = "weibull_iid"
    kind = "weibull-iid"
    seed = 20260814
    reps = 200

    [band]
    low = 0.05
    high = 1.0

    [[grid]]
    m = 16
    n = 16
    p = 2.0
    q = 2.0
    r = 1.0

Grid values may use two string tokens: ``"inf"`` for an infinite
exponent, and the name of another key in the same point (``k = "m"``
pins the submatrix height to the full height).  Any other string is kept
verbatim (e.g. ``mode = "exact"``).

Outputs: one CSV row per grid point (fixed header, see ``CSV_HEADERS``)
and a JSON summary with the extreme ratios and a pass flag against the
band.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np
import tomli

from .bounds import (
    BoundValue,
    ChevetInputs,
    chevet_weibull_rhs,
    order_stat_lq_expect_bound,
    submatrix_bound,
    weibull_iid_bound,
    weighted_lrho_bound,
)
from .distributions import Gaussian, LogConcaveUncProduct, WeibullSym
from .errors import ConfigError
from .exponents import INF, NormPair
from .montecarlo import (
    MCEstimate,
    RatioRecord,
    campaign_summary,
    estimate_esup_bilinear,
    estimate_opnorm,
    estimate_order_stat_lq,
    estimate_submatrix_sup,
    ratio_campaign,
    run_estimator,
)
from .opnorm import FinitePointSet, SolverBudget
from .vectors import lp_norm

__all__ = [
    "CSV_HEADERS",
    "CampaignConfig",
    "campaign_kinds",
    "load_campaign_config",
    "resolve_point",
    "run_campaign",
    "write_records_csv",
    "write_summary_json",
]

CSV_HEADERS = [
    "campaign",
    "params",
    "empirical_mean",
    "empirical_stderr",
    "reps",
    "batches",
    "seed",
    "formula_value",
    "formula_case",
    "ratio",
]


@dataclass(frozen=True)
class CampaignConfig:
    name: str
    kind: str
    seed: int
    reps: int
    band: tuple[float, float]
    grid: tuple[dict, ...]

    def __post_init__(self) -> None:
        if not self.name or not self.name.replace("_", "").replace("-", "").isalnum():
            raise ConfigError(f"campaign name must be a slug, got {self.name!r}")
        if self.kind not in _KINDS:
            raise ConfigError(
                f"unknown campaign kind {self.kind!r}; valid: {campaign_kinds()}"
            )
        if not isinstance(self.seed, int):
            raise ConfigError(f"seed must be an integer, got {self.seed!r}")
        if not isinstance(self.reps, int) or self.reps < 100 or self.reps % 100:
            raise ConfigError(
                f"reps must be a positive multiple of 100, got {self.reps!r}"
            )
        lo, hi = self.band
        if not (0.0 < lo <= hi and math.isfinite(hi)):
            raise ConfigError(f"band must satisfy 0 < low <= high, got {self.band!r}")
        if not self.grid:
            raise ConfigError("grid must contain at least one point")
        required = _KINDS[self.kind].required
        for i, point in enumerate(self.grid):
            missing = required - set(point)
            if missing:
                raise ConfigError(
                    f"grid point {i} is missing keys {sorted(missing)} "
                    f"required by kind {self.kind!r}"
                )


def resolve_point(raw: dict) -> dict:
    """Expand ``"inf"`` and same-point alias tokens into numbers."""

    out = dict(raw)
    for key, val in out.items():
        if isinstance(val, str) and val == "inf":
            out[key] = math.inf
    for _ in range(len(out)):
        for key, val in list(out.items()):
            if isinstance(val, str) and val in out and not isinstance(out[val], str):
                out[key] = out[val]
    for key, val in out.items():
        if isinstance(val, str) and val in out:
            raise ConfigError(f"unresolvable alias cycle at key {key!r}")
    return out


def _pair(point: dict) -> NormPair:
    return NormPair(float(point["p"]), float(point["q"]))


# Campaigns trade a little solver accuracy for wall-clock: ratios are
# band-checked against pilots run with the very same settings, so the
# small lower-bound bias of fewer multistarts cancels in the regression.
_CAMPAIGN_BUDGET = SolverBudget(max_starts=16, max_iters=2000, tol=1e-9)


@dataclass(frozen=True)
class _Kind:
    required: frozenset
    build: Callable[[CampaignConfig], tuple[Callable, Callable]]


def _kind_self_check(cfg: CampaignConfig):
    def estimator(point: dict, seed: int) -> MCEstimate:
        value = float(point.get("value", 1.0))
        return run_estimator(lambda rng: value, cfg.reps, seed)

    def formula(point: dict) -> float:
        return float(point.get("value", 1.0))

    return estimator, formula


def _kind_weibull_iid(cfg: CampaignConfig):
    def estimator(point: dict, seed: int) -> MCEstimate:
        return estimate_opnorm(
            WeibullSym(float(point["r"])),
            int(point["m"]),
            int(point["n"]),
            _pair(point),
            cfg.reps,
            seed,
            budget=_CAMPAIGN_BUDGET,
        )

    def formula(point: dict) -> BoundValue:
        return weibull_iid_bound(
            int(point["m"]), int(point["n"]), _pair(point), float(point["r"])
        )

    return estimator, formula


def _basis_set(dim: int, scale: float) -> FinitePointSet:
    return FinitePointSet(points=np.eye(dim) * scale)


def _chevet_parts(point: dict):
    ds = int(point["ds"])
    dt = int(point["dt"])
    r = float(point["r"])
    s_scale = float(point.get("s_scale", 1.0))
    t_scale = float(point.get("t_scale", 1.0))
    return ds, dt, r, s_scale, t_scale


def _kind_chevet_weibull(cfg: CampaignConfig):
    def estimator(point: dict, seed: int) -> MCEstimate:
        ds, dt, r, s_scale, t_scale = _chevet_parts(point)
        return estimate_esup_bilinear(
            WeibullSym(r), _basis_set(ds, s_scale), _basis_set(dt, t_scale),
            cfg.reps, seed,
        )

    def formula(point: dict) -> BoundValue:
        ds, dt, r, s_scale, t_scale = _chevet_parts(point)
        # scaled basis vectors have every l_rho norm equal to the scale,
        # and the expected suprema are expected maxima of iid samples
        ones_s = np.full(ds, s_scale)
        ones_t = np.full(dt, t_scale)
        inputs = ChevetInputs(
            s_sup_rstar=s_scale,
            s_sup_2=s_scale,
            t_sup_rstar=t_scale,
            t_sup_2=t_scale,
            esup_weibull_t=weighted_lrho_bound(ones_t, INF, r).value,
            esup_gauss_t=weighted_lrho_bound(ones_t, INF, 2.0, gaussian=True).value,
            esup_weibull_s=weighted_lrho_bound(ones_s, INF, r).value,
            esup_gauss_s=weighted_lrho_bound(ones_s, INF, 2.0, gaussian=True).value,
        )
        return chevet_weibull_rhs(inputs, r)

    return estimator, formula


def _kind_order_stat_lq(cfg: CampaignConfig):
    def estimator(point: dict, seed: int) -> MCEstimate:
        return estimate_order_stat_lq(
            WeibullSym(float(point["r"])),
            int(point["m"]),
            int(point["k"]),
            float(point["q"]),
            cfg.reps,
            seed,
        )

    def formula(point: dict) -> float:
        return order_stat_lq_expect_bound(
            int(point["m"]), int(point["k"]), float(point["q"]), float(point["r"])
        )

    return estimator, formula


def _kind_submatrix(cfg: CampaignConfig):
    def estimator(point: dict, seed: int) -> MCEstimate:
        return estimate_submatrix_sup(
            WeibullSym(float(point["r"])),
            int(point["m"]),
            int(point["n"]),
            int(point["k"]),
            int(point["l"]),
            _pair(point),
            cfg.reps,
            seed,
            mode=str(point.get("mode", "exact")),
        )

    def formula(point: dict) -> BoundValue:
        return submatrix_bound(
            int(point["m"]),
            int(point["n"]),
            int(point["k"]),
            int(point["l"]),
            _pair(point),
            float(point["r"]),
        )

    return estimator, formula


def _kind_logconcave_domination(cfg: CampaignConfig):
    def estimator(point: dict, seed: int) -> MCEstimate:
        spec = LogConcaveUncProduct(str(point.get("sub_kind", "uniform_sym")))
        return estimate_opnorm(
            spec, int(point["m"]), int(point["n"]), _pair(point), cfg.reps, seed,
            budget=_CAMPAIGN_BUDGET,
        )

    def formula(point: dict) -> BoundValue:
        return weibull_iid_bound(int(point["m"]), int(point["n"]), _pair(point), 1.0)

    return estimator, formula


def _lrho_weights(point: dict) -> np.ndarray:
    dim = int(point["dim"])
    alpha = float(point.get("alpha", 0.0))
    return np.arange(1, dim + 1, dtype=float) ** (-alpha)


def _kind_gauss_lrho(cfg: CampaignConfig):
    def estimator(point: dict, seed: int) -> MCEstimate:
        weights = _lrho_weights(point)
        rho = float(point["rho"])
        spec = Gaussian()

        def one_rep(rng) -> float:
            return lp_norm(weights * spec.sample(rng, weights.size), rho)

        return run_estimator(one_rep, cfg.reps, seed)

    def formula(point: dict) -> BoundValue:
        return weighted_lrho_bound(
            _lrho_weights(point), float(point["rho"]), 2.0, gaussian=True
        )

    return estimator, formula


_KINDS: dict[str, _Kind] = {
    "self-check": _Kind(frozenset(), _kind_self_check),
    "weibull-iid": _Kind(frozenset({"m", "n", "p", "q", "r"}), _kind_weibull_iid),
    "chevet-weibull": _Kind(frozenset({"ds", "dt", "r"}), _kind_chevet_weibull),
    "order-stat-lq": _Kind(frozenset({"m", "k", "q", "r"}), _kind_order_stat_lq),
    "submatrix": _Kind(
        frozenset({"m", "n", "k", "l", "p", "q", "r"}), _kind_submatrix
    ),
    "logconcave-domination": _Kind(
        frozenset({"m", "n", "p", "q"}), _kind_logconcave_domination
    ),
    "gauss-lrho": _Kind(frozenset({"dim", "rho"}), _kind_gauss_lrho),
}


def campaign_kinds() -> list[str]:
    return sorted(_KINDS)


def load_campaign_config(path) -> CampaignConfig:
    """Parse and validate a campaign TOML file."""

    path = Path(path)
    try:
        with path.open("rb") as fh:
            doc = tomli.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML in {path}: {exc}") from exc
    try:
        camp = doc["campaign"]
        band = doc["band"]
        grid_raw = doc["grid"]
        config = CampaignConfig(
            name=str(camp["name"]),
            kind=str(camp["kind"]),
            seed=int(camp["seed"]),
            reps=int(camp["reps"]),
            band=(float(band["low"]), float(band["high"])),
            grid=tuple(resolve_point(pt) for pt in grid_raw),
        )
    except KeyError as exc:
        raise ConfigError(f"missing config key {exc} in {path}") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad config value in {path}: {exc}") from exc
    return config


def write_records_csv(path, name: str, records: list[RatioRecord]) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADERS)
        for rec in records:
            params = json.dumps(rec.point, sort_keys=True, default=str)
            if rec.estimate is None:
                writer.writerow(
                    [name, params, "", "", "", "", rec.seed, "", "", ""]
                )
            else:
                writer.writerow(
                    [
                        name,
                        params,
                        repr(rec.estimate.mean),
                        repr(rec.estimate.stderr),
                        rec.estimate.reps,
                        rec.estimate.batches,
                        rec.seed,
                        repr(rec.formula_value),
                        rec.formula_case,
                        repr(rec.ratio),
                    ]
                )


def write_summary_json(path, summary: dict) -> None:
    Path(path).write_text(json.dumps(summary, indent=2) + "\n")


def run_campaign(
    config: CampaignConfig,
    out_dir=None,
    reps: int | None = None,
    seed: int | None = None,
) -> tuple[list[RatioRecord], dict]:
    """Run every grid point, optionally writing CSV + JSON under ``out_dir``.

    ``reps``/``seed`` override the config (handy for pilots and CLI
    flags).  The returned summary is the JSON payload: campaign name,
    extreme ratios, their spread, and the band verdict.
    """

    if reps is not None or seed is not None:
        config = CampaignConfig(
            name=config.name,
            kind=config.kind,
            seed=config.seed if seed is None else int(seed),
            reps=config.reps if reps is None else int(reps),
            band=config.band,
            grid=config.grid,
        )
    estimator, formula = _KINDS[config.kind].build(config)
    records = ratio_campaign(config.grid, estimator, formula, config.seed)
    base = campaign_summary(records, config.band)
    summary = {
        "campaign": config.name,
        "min_ratio": base["min_ratio"],
        "max_ratio": base["max_ratio"],
        "spread": base["spread"],
        "pass": base["pass"],
    }
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_records_csv(out / f"{config.name}.csv", config.name, records)
        write_summary_json(out / f"{config.name}.json", summary)
    return records, summary
