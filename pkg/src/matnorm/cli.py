"""Command-line front end.

Seven subcommands: ``sample`` (draw a random matrix), ``opnorm`` (solve
one operator norm), ``bound`` (evaluate a closed-form bound), ``esup``
(Monte Carlo expected operator norm), ``verify`` (run a ratio campaign
from a TOML config), ``submatrix`` (largest-submatrix search on a stored
matrix) and ``gamma`` (chaining functional of a point set).

Machine-readable results go to stdout as a single JSON object (``sample``
emits CSV).  Exit codes: 0 success, 1 a verify campaign violated its
band, 2 bad usage/config (including unknown bound names).

Seeds: ``--seed`` wins, else the ``MATNORM_SEED`` environment variable,
else 0.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import bounds
from .campaigns import load_campaign_config, run_campaign
from .chaining import gamma_lower_radius, gamma_upper_greedy
from .distributions import spec_from_json
from .errors import ConfigError, MatnormError
from .exponents import NormPair
from .montecarlo import estimate_opnorm
from .opnorm import FinitePointSet, SolverBudget, opnorm, submatrix_sup

__all__ = ["main", "BOUND_NAMES"]

_DIST_KINDS = (
    "weibull_sym",
    "gaussian",
    "rademacher_scaled",
    "psi_r_example",
    "logconcave_unc_product",
)


def _resolve_seed(value: int | None) -> int:
    if value is not None:
        return int(value)
    env = os.environ.get("MATNORM_SEED")
    if env is None or env == "":
        return 0
    try:
        return int(env)
    except ValueError as exc:
        raise ConfigError(f"MATNORM_SEED must be an integer, got {env!r}") from exc


def load_matrix(path) -> np.ndarray:
    """Read a matrix from ``.csv`` (rows of numbers) or ``.json`` files.

    The JSON form is ``{"m": rows, "n": cols, "data": [[...], ...]}`` with
    the declared shape checked against the payload.
    """

    path = Path(path)
    if not path.exists():
        raise ConfigError(f"matrix file not found: {path}")
    suffix = path.suffix.lower()
    if suffix == ".csv":
        try:
            a = np.loadtxt(path, delimiter=",", ndmin=2, dtype=float)
        except ValueError as exc:
            raise ConfigError(f"cannot parse CSV matrix {path}: {exc}") from exc
    elif suffix == ".json":
        try:
            obj = json.loads(path.read_text())
            a = np.asarray(obj["data"], dtype=float)
            if a.ndim != 2 or a.shape != (int(obj["m"]), int(obj["n"])):
                raise ValueError(
                    f"declared shape {(obj['m'], obj['n'])} != data shape {a.shape}"
                )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"cannot parse JSON matrix {path}: {exc}") from exc
    else:
        raise ConfigError(f"matrix files must be .csv or .json, got {path.name!r}")
    if not np.all(np.isfinite(a)):
        raise ConfigError(f"matrix {path} contains non-finite entries")
    return a


def _emit(obj: dict) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _spec_from_args(args) -> "object":
    params: dict = {}
    if args.kind in ("weibull_sym", "psi_r_example"):
        if args.r is None:
            raise ConfigError(f"--r is required for kind {args.kind!r}")
        params["r"] = args.r
    if args.kind == "psi_r_example" and args.sigma is not None:
        params["sigma"] = args.sigma
    if args.kind == "gaussian" and args.std is not None:
        params["std"] = args.std
    if args.kind == "rademacher_scaled" and args.scale is not None:
        params["scale"] = args.scale
    if args.kind == "logconcave_unc_product" and args.sub_kind is not None:
        params["sub_kind"] = args.sub_kind
    return spec_from_json({"kind": args.kind, "params": params})


def _add_dist_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--kind", choices=_DIST_KINDS, default="weibull_sym")
    sub.add_argument("--r", type=float, default=None, help="Weibull shape in [1, 2]")
    sub.add_argument("--sigma", type=float, default=None)
    sub.add_argument("--std", type=float, default=None)
    sub.add_argument("--scale", type=float, default=None)
    sub.add_argument("--sub-kind", dest="sub_kind", default=None)


def _add_pair_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--p", type=float, required=True,
                     help="domain exponent in [1, inf] ('inf' accepted)")
    sub.add_argument("--q", type=float, required=True,
                     help="codomain exponent in [1, inf] ('inf' accepted)")


# ---------------------------------------------------------------------------
# bound-name registry


def _bound_weibull_iid(args) -> bounds.BoundValue:
    m, n = _need(args, "m"), _need(args, "n")
    pair = NormPair(args.p, args.q)
    r = _need(args, "r", kind=float)
    if m == n:
        return bounds.weibull_square_bound(n, pair, r)
    return bounds.weibull_iid_bound(m, n, pair, r)


def _bound_order_stat(fn, anchor):
    def call(args) -> bounds.BoundValue:
        value = fn(
            _need(args, "m"), _need(args, "k"),
            _need(args, "q", kind=float), _need(args, "r", kind=float),
        )
        return bounds.BoundValue(value=value, case="", terms={"value": value},
                                 anchor=anchor)

    return call


BOUND_NAMES = {
    "gauss-iid": lambda args: bounds.gauss_iid_bound(
        _need(args, "m"), _need(args, "n"), NormPair(args.p, args.q)
    ),
    "bounded-entry": lambda args: bounds.bounded_entry_bound(
        _need(args, "m"), _need(args, "n"), NormPair(args.p, args.q)
    ),
    "weibull-iid": _bound_weibull_iid,
    "weibull-square": lambda args: bounds.weibull_square_bound(
        _need(args, "n"), NormPair(args.p, args.q), _need(args, "r", kind=float)
    ),
    "submatrix": lambda args: bounds.submatrix_bound(
        _need(args, "m"), _need(args, "n"), _need(args, "k"), _need(args, "l"),
        NormPair(args.p, args.q), _need(args, "r", kind=float),
    ),
    "order-stat-lq": _bound_order_stat(
        bounds.order_stat_lq_expect_bound, "order-stat/lq-expect"
    ),
    "order-stat-qmoment": _bound_order_stat(
        bounds.order_stat_qmoment_bound, "order-stat/qmoment"
    ),
}


def _need(args, name: str, kind=int):
    value = getattr(args, name, None)
    if value is None:
        raise ConfigError(f"--{name} is required for this bound")
    return kind(value)


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_sample(args) -> int:
    spec = _spec_from_args(args)
    from .distributions import sample_matrix

    sampled = sample_matrix(spec, args.m, args.n, _resolve_seed(args.seed))
    text_rows = "\n".join(
        ",".join(f"{v:.17g}" for v in row) for row in sampled.entries
    )
    if args.out:
        Path(args.out).write_text(text_rows + "\n")
    else:
        sys.stdout.write(text_rows + "\n")
    return 0


def _cmd_opnorm(args) -> int:
    a = load_matrix(args.matrix)
    budget = SolverBudget(
        max_starts=args.max_starts, seed=_resolve_seed(args.seed)
    )
    res = opnorm(a, NormPair(args.p, args.q), budget=budget)
    out = {
        "value": res.value,
        "method": res.method.value,
        "converged": res.converged,
        "starts_used": res.starts_used,
    }
    if args.witness:
        out["witness_s"] = res.witness_s.tolist()
        out["witness_t"] = res.witness_t.tolist()
    _emit(out)
    return 0


def _cmd_bound(args) -> int:
    handler = BOUND_NAMES.get(args.name)
    if handler is None:
        raise ConfigError(
            f"unknown bound {args.name!r}; valid names: {', '.join(sorted(BOUND_NAMES))}"
        )
    bv = handler(args)
    _emit({"value": bv.value, "case": bv.case, "terms": bv.terms,
           "anchor": bv.anchor})
    return 0


def _cmd_esup(args) -> int:
    spec = _spec_from_args(args)
    est = estimate_opnorm(
        spec, args.m, args.n, NormPair(args.p, args.q), args.reps,
        _resolve_seed(args.seed),
    )
    _emit({
        "mean": est.mean,
        "stderr": est.stderr,
        "reps": est.reps,
        "batches": est.batches,
    })
    return 0


def _cmd_verify(args) -> int:
    config = load_campaign_config(args.config)
    _records, summary = run_campaign(
        config, out_dir=args.out, reps=args.reps,
        seed=None if args.seed is None else _resolve_seed(args.seed),
    )
    _emit(summary)
    return 0 if summary["pass"] else 1


def _cmd_submatrix(args) -> int:
    a = load_matrix(args.matrix)
    budget = SolverBudget(
        max_starts=args.max_starts,
        subset_budget=args.subset_budget,
        seed=_resolve_seed(args.seed),
    )
    value, rows, cols = submatrix_sup(
        a, args.k, args.l, NormPair(args.p, args.q), mode=args.mode,
        budget=budget,
    )
    _emit({
        "value": value,
        "rows": [int(i) for i in rows],
        "cols": [int(j) for j in cols],
        "mode": args.mode,
    })
    return 0


def _cmd_gamma(args) -> int:
    pts = FinitePointSet(points=load_matrix(args.points))
    value, seq = gamma_upper_greedy(
        pts, args.rho, dist_rho=args.dist_rho, force_greedy=args.force_greedy
    )
    _emit({
        "value": value,
        "levels": [len(level) for level in seq.sets],
        "lower_radius": gamma_lower_radius(pts, args.dist_rho),
    })
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matnorm",
        description="Operator norms of random matrices: solvers, bounds, campaigns.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sample = sub.add_parser("sample", help="draw a random matrix as CSV")
    _add_dist_args(p_sample)
    p_sample.add_argument("--m", type=int, required=True)
    p_sample.add_argument("--n", type=int, required=True)
    p_sample.add_argument("--seed", type=int, default=None)
    p_sample.add_argument("--out", default=None, help="write CSV here instead of stdout")
    p_sample.set_defaults(handler=_cmd_sample)

    p_opnorm = sub.add_parser("opnorm", help="operator norm of a stored matrix")
    p_opnorm.add_argument("matrix", help="path to a .csv or .json matrix")
    _add_pair_args(p_opnorm)
    p_opnorm.add_argument("--seed", type=int, default=None)
    p_opnorm.add_argument("--max-starts", type=int, default=64)
    p_opnorm.add_argument("--witness", action="store_true",
                          help="include the attaining vectors in the output")
    p_opnorm.set_defaults(handler=_cmd_opnorm)

    p_bound = sub.add_parser("bound", help="evaluate a closed-form bound")
    p_bound.add_argument("name", help=f"one of: {', '.join(sorted(BOUND_NAMES))}")
    p_bound.add_argument("--m", type=int, default=None)
    p_bound.add_argument("--n", type=int, default=None)
    p_bound.add_argument("--k", type=int, default=None)
    p_bound.add_argument("--l", type=int, default=None)
    p_bound.add_argument("--p", type=float, default=None)
    p_bound.add_argument("--q", type=float, default=None)
    p_bound.add_argument("--r", type=float, default=None)
    p_bound.set_defaults(handler=_cmd_bound)

    p_esup = sub.add_parser("esup", help="Monte Carlo expected operator norm")
    _add_dist_args(p_esup)
    p_esup.add_argument("--m", type=int, required=True)
    p_esup.add_argument("--n", type=int, required=True)
    _add_pair_args(p_esup)
    p_esup.add_argument("--reps", type=int, default=100)
    p_esup.add_argument("--seed", type=int, default=None)
    p_esup.set_defaults(handler=_cmd_esup)

    p_verify = sub.add_parser("verify", help="run a ratio campaign from TOML")
    p_verify.add_argument("config", help="campaign TOML file")
    p_verify.add_argument("--out", default=None, help="directory for CSV/JSON output")
    p_verify.add_argument("--reps", type=int, default=None)
    p_verify.add_argument("--seed", type=int, default=None)
    p_verify.set_defaults(handler=_cmd_verify)

    p_sub = sub.add_parser("submatrix", help="largest k x l submatrix norm")
    p_sub.add_argument("matrix", help="path to a .csv or .json matrix")
    p_sub.add_argument("--k", type=int, required=True)
    p_sub.add_argument("--l", type=int, required=True)
    _add_pair_args(p_sub)
    p_sub.add_argument("--mode", choices=("exact", "local"), default="exact")
    p_sub.add_argument("--seed", type=int, default=None)
    p_sub.add_argument("--max-starts", type=int, default=64)
    p_sub.add_argument("--subset-budget", type=int, default=100_000)
    p_sub.set_defaults(handler=_cmd_submatrix)

    p_gamma = sub.add_parser("gamma", help="chaining functional of a point set")
    p_gamma.add_argument("points", help="matrix file; rows are the points")
    p_gamma.add_argument("--rho", type=float, required=True)
    p_gamma.add_argument("--dist-rho", dest="dist_rho", type=float, default=2.0)
    p_gamma.add_argument("--force-greedy", action="store_true")
    p_gamma.set_defaults(handler=_cmd_gamma)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except MatnormError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
