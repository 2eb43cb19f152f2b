"""Closed-form upper-bound evaluators for expected operator norms.

Every public evaluator returns either a plain float (order-statistic
formulas) or a :class:`BoundValue` carrying the total, the dispatch case
that was taken, and the individual additive terms.  Term dictionaries
always sum to ``value`` so downstream reports can show which contribution
dominates.

Throughout, ``pair`` fixes the geometry ell_p -> ell_q, ``r`` is the
Weibull shape in [1, 2], and sizes ``m`` (rows / codomain) and ``n``
(columns / domain) are positive ints.  "Log" denotes ``max(1, ln(.))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import integrate

from .distributions import weibull_moment
from .errors import DomainError
from .exponents import INF, NormPair, check_exponent, holder_conjugate, inv, log_plus
from .vectors import (
    WeightVector,
    as_weights,
    lp_norm,
    orlicz_phi_norm,
    sup_ball_moment,
)

__all__ = [
    "BoundValue",
    "TensorWeights",
    "ChevetInputs",
    "ConjectureTerms",
    "chevet_gaussian_rhs",
    "chevet_weibull_rhs",
    "gauss_iid_bound",
    "gauss_iid_branch_value",
    "bounded_entry_bound",
    "weibull_iid_bound",
    "weibull_iid_branch_value",
    "weibull_square_bound",
    "weibull_iid_moment_form",
    "weibull_square_moment_form",
    "gauss_tensor_bound",
    "weibull_tensor_bound",
    "conjecture_terms",
    "tensor_product_twosided",
    "weighted_lrho_bound",
    "order_stat_qmoment_bound",
    "order_stat_threshold",
    "order_stat_lq_expect_bound",
    "submatrix_bound",
    "structured_gauss_bound",
]

_TERM_SUM_RTOL = 1e-12


# ---------------------------------------------------------------------------
# result containers


@dataclass(frozen=True)
class BoundValue:
    """A bound evaluation: total, dispatch case, additive terms, anchor id.

    ``anchor`` identifies which formula family produced the number (stable
    machine-readable ids such as ``"weibull-iid/compact"``); ``case`` names
    the branch taken inside that formula.  ``sum(terms.values())`` equals
    ``value`` up to 1e-12 relative slack, enforced at construction.
    """

    value: float
    case: str
    terms: dict[str, float] = field(compare=False)
    anchor: str = ""

    def __post_init__(self) -> None:
        if not self.terms:
            raise DomainError("BoundValue needs at least one term")
        total = math.fsum(self.terms.values())
        if not all(math.isfinite(v) and v >= 0.0 for v in self.terms.values()):
            raise DomainError(f"terms must be finite and nonnegative: {self.terms}")
        scale = max(abs(total), abs(self.value), 1e-300)
        if abs(total - self.value) > _TERM_SUM_RTOL * scale:
            raise DomainError(
                f"terms sum {total!r} does not match value {self.value!r}"
            )


def _bound(case: str, terms: dict[str, float], anchor: str) -> BoundValue:
    return BoundValue(value=math.fsum(terms.values()), case=case,
                      terms=terms, anchor=anchor)


@dataclass(frozen=True)
class TensorWeights:
    """Row weights ``a`` (length m) and column weights ``b`` (length n).

    Represents the structured matrix with entries ``a_i * b_j * X_ij``.
    Only absolute values matter for every bound in this module.
    """

    a: WeightVector
    b: WeightVector

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", as_weights(self.a))
        object.__setattr__(self, "b", as_weights(self.b))

    @property
    def m(self) -> int:
        return len(self.a)

    @property
    def n(self) -> int:
        return len(self.b)

    def outer_abs(self) -> np.ndarray:
        return np.abs(np.outer(self.a.values, self.b.values))


@dataclass(frozen=True)
class ChevetInputs:
    """Geometry-dependent factors feeding the two-sided product bounds.

    ``s_*`` quantities are suprema over the unit ball of the codomain-side
    index set, ``t_*`` over the domain side; the ``esup_*`` companions are
    expected suprema of the matching canonical processes over the opposite
    set.  All eight must be nonnegative and finite.
    """

    s_sup_rstar: float
    s_sup_2: float
    t_sup_rstar: float
    t_sup_2: float
    esup_weibull_t: float
    esup_gauss_t: float
    esup_weibull_s: float
    esup_gauss_s: float

    def __post_init__(self) -> None:
        for name in self.__dataclass_fields__:
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0.0):
                raise DomainError(f"{name} must be finite and >= 0, got {v!r}")


class ConjectureTerms(NamedTuple):
    """The four structured-matrix building blocks (d1, d2, d3, d3r)."""

    d1: float
    d2: float
    d3: float
    d3r: float


# ---------------------------------------------------------------------------
# small shared helpers


def _check_size(name: str, value: int) -> int:
    if not isinstance(value, (int, np.integer)) or value < 1:
        raise DomainError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def _check_shape(r: float) -> float:
    if not (isinstance(r, (int, float, np.floating)) and 1.0 <= float(r) <= 2.0):
        raise DomainError(f"shape r must lie in [1, 2], got {r!r}")
    return float(r)


def ratio_exp(u: float, v: float) -> float:
    """Interpolation exponent ``u*v / (u - v)``, continued monotonically.

    Returns ``v`` when ``u`` is infinite (the limit) and ``inf`` when
    ``u <= v`` (the degenerate direction, where the ell_inf norm takes
    over).  Both inputs must be exponents in [1, inf].
    """

    check_exponent(u)
    check_exponent(v)
    if math.isinf(u):
        return v
    if u <= v:
        return INF
    return u * v / (u - v)


def _pow(base: float, expo: float) -> float:
    # base**0 == 1 even for base drawn from a Log cap; keep plain semantics
    return float(base) ** float(expo)


def _head_split(sorted_abs: np.ndarray, cutoff_exp: float) -> int:
    """Number of leading entries kept in the Orlicz head for cutoff e^rho."""

    k = sorted_abs.size
    if math.isinf(cutoff_exp) or cutoff_exp >= math.log(max(k, 1)):
        return k
    return min(k, max(1, int(math.floor(math.exp(cutoff_exp)))))


def _head_tail(
    w: WeightVector, cutoff_exp: float, phi_rho: float, tail_rho: float,
    tail_coeff: float,
) -> float:
    """Orlicz-head plus weighted-lp-tail functional of a weight vector.

    Head: the phi_{phi_rho} Orlicz norm of the largest ``floor(e^cutoff)``
    entries.  Tail: ``tail_coeff`` times the ell_{tail_rho} norm of the
    rest (zero when the head swallows everything).
    """

    s = w.sorted_abs
    h = _head_split(s, cutoff_exp)
    head = orlicz_phi_norm(s[:h], phi_rho)
    tail = s[h:]
    if tail.size == 0:
        return head
    return head + tail_coeff * lp_norm(tail, tail_rho)


def _decorated_max(sorted_abs: np.ndarray, r: float) -> float:
    """max_i  w*_i * ln(i+1)^{1/r}  over the nonincreasing rearrangement."""

    if sorted_abs.size == 0:
        return 0.0
    ranks = np.arange(1, sorted_abs.size + 1, dtype=float)
    return float(np.max(sorted_abs * np.log(ranks + 1.0) ** (1.0 / r)))


# ---------------------------------------------------------------------------
# Chevet-type right-hand sides


def chevet_gaussian_rhs(inputs: ChevetInputs) -> BoundValue:
    """Two-term Gaussian product bound from precomputed geometry factors."""

    terms = {
        "s_2_gauss_t": inputs.s_sup_2 * inputs.esup_gauss_t,
        "t_2_gauss_s": inputs.t_sup_2 * inputs.esup_gauss_s,
    }
    return _bound("gaussian", terms, anchor="chevet/gaussian")


def chevet_weibull_rhs(inputs: ChevetInputs, r: float) -> BoundValue:
    """Four-term Weibull product bound from precomputed geometry factors.

    The ``r``-dependence lives entirely inside the ``esup_weibull_*``
    factors supplied by the caller; the shape argument is validated here
    so misuse fails loudly at the call site.
    """

    _check_shape(r)
    terms = {
        "s_rstar_weib_t": inputs.s_sup_rstar * inputs.esup_weibull_t,
        "s_2_gauss_t": inputs.s_sup_2 * inputs.esup_gauss_t,
        "t_rstar_weib_s": inputs.t_sup_rstar * inputs.esup_weibull_s,
        "t_2_gauss_s": inputs.t_sup_2 * inputs.esup_gauss_s,
    }
    return _bound("weibull", terms, anchor="chevet/weibull")


# ---------------------------------------------------------------------------
# iid Gaussian matrices


def gauss_iid_bound(m: int, n: int, pair: NormPair) -> BoundValue:
    """Compact two-term bound for E||G||_{p->q} with iid standard Gaussians."""

    m = _check_size("m", m)
    n = _check_size("n", n)
    ps, q = pair.p_star, pair.q
    t1 = (
        math.sqrt(min(ps, log_plus(n)))
        * _pow(m, max(inv(q) - 0.5, 0.0))
        * _pow(n, inv(ps))
    )
    t2 = (
        math.sqrt(min(q, log_plus(m)))
        * _pow(n, max(inv(ps) - 0.5, 0.0))
        * _pow(m, inv(q))
    )
    out = _bound(
        pair.regime.value,
        {"n_side": t1, "m_side": t2},
        anchor="gauss-iid/compact",
    )
    branch = gauss_iid_branch_value(m, n, pair)
    assert branch / 4.0 <= out.value <= branch * 4.0, (out.value, branch, pair)
    return out


def gauss_iid_branch_value(m: int, n: int, pair: NormPair) -> float:
    """Four-case comparison value for the iid Gaussian bound."""

    m = _check_size("m", m)
    n = _check_size("n", n)
    ps, q = pair.p_star, pair.q
    iq, ips = inv(q), inv(ps)
    capn = min(ps, log_plus(n))
    capm = min(q, log_plus(m))
    if ps <= 2.0 and q <= 2.0:
        return _pow(m, iq - 0.5) * _pow(n, ips) + _pow(n, ips - 0.5) * _pow(m, iq)
    if q <= 2.0:  # q <= 2 < p*
        return math.sqrt(capn) * _pow(n, ips) * _pow(m, iq - 0.5) + _pow(m, iq)
    if ps <= 2.0:  # p* <= 2 < q
        return _pow(n, ips) + math.sqrt(capm) * _pow(m, iq) * _pow(n, ips - 0.5)
    return math.sqrt(capn) * _pow(n, ips) + math.sqrt(capm) * _pow(m, iq)


def bounded_entry_bound(m: int, n: int, pair: NormPair) -> BoundValue:
    """Four-case bound for matrices with entries bounded by one.

    This is the deterministic companion of the Gaussian formula: the same
    polynomial skeleton with no logarithmic or exponent decorations at
    all, so it stays finite for every pair including p* = q = inf.
    """

    m = _check_size("m", m)
    n = _check_size("n", n)
    ps, q = pair.p_star, pair.q
    iq, ips = inv(q), inv(ps)
    case = pair.regime.value
    if ps <= 2.0 and q <= 2.0:
        terms = {
            "n_side": _pow(m, iq - 0.5) * _pow(n, ips),
            "m_side": _pow(n, ips - 0.5) * _pow(m, iq),
        }
    elif q <= 2.0:
        terms = {
            "n_side": _pow(m, iq - 0.5) * _pow(n, ips),
            "m_side": _pow(m, iq),
        }
    elif ps <= 2.0:
        terms = {
            "n_side": _pow(n, ips),
            "m_side": _pow(n, ips - 0.5) * _pow(m, iq),
        }
    else:
        terms = {
            "n_side": _pow(n, ips),
            "m_side": _pow(m, iq),
        }
    return _bound(case, terms, anchor="bounded-entry/four-case")


# ---------------------------------------------------------------------------
# iid symmetric Weibull matrices


def weibull_iid_bound(m: int, n: int, pair: NormPair, r: float) -> BoundValue:
    """Compact four-term bound for E||X||_{p->q} with iid Weibull(r) entries."""

    m = _check_size("m", m)
    n = _check_size("n", n)
    r = _check_shape(r)
    ps, q = pair.p_star, pair.q
    iq, ips, ir = inv(q), inv(ps), 1.0 / r
    capn = min(ps, log_plus(n))
    capm = min(q, log_plus(m))
    terms = {
        "n_side_r": _pow(capn, ir) * _pow(m, max(iq - ir, 0.0)) * _pow(n, ips),
        "n_side_2": math.sqrt(capn) * _pow(m, max(iq - 0.5, 0.0)) * _pow(n, ips),
        "m_side_r": _pow(capm, ir) * _pow(n, max(ips - ir, 0.0)) * _pow(m, iq),
        "m_side_2": math.sqrt(capm) * _pow(n, max(ips - 0.5, 0.0)) * _pow(m, iq),
    }
    out = _bound(pair.regime.value, terms, anchor="weibull-iid/compact")
    branch = weibull_iid_branch_value(m, n, pair, r)
    assert branch / 4.0 <= out.value <= branch * 4.0, (out.value, branch, pair, r)
    return out


def weibull_iid_branch_value(m: int, n: int, pair: NormPair, r: float) -> float:
    """Four-case comparison value for the iid Weibull bound."""

    m = _check_size("m", m)
    n = _check_size("n", n)
    r = _check_shape(r)
    ps, q = pair.p_star, pair.q
    iq, ips, ir = inv(q), inv(ps), 1.0 / r
    capn = min(ps, log_plus(n))
    capm = min(q, log_plus(m))
    if ps <= 2.0 and q <= 2.0:
        return _pow(m, iq - 0.5) * _pow(n, ips) + _pow(n, ips - 0.5) * _pow(m, iq)
    if q <= 2.0:  # q <= 2 < p*
        return (
            _pow(capn, ir) * _pow(n, ips) * _pow(m, max(iq - ir, 0.0))
            + math.sqrt(capn) * _pow(n, ips) * _pow(m, iq - 0.5)
            + _pow(m, iq)
        )
    if ps <= 2.0:  # p* <= 2 < q
        return (
            _pow(n, ips)
            + _pow(capm, ir) * _pow(m, iq) * _pow(n, max(ips - ir, 0.0))
            + math.sqrt(capm) * _pow(m, iq) * _pow(n, ips - 0.5)
        )
    return _pow(capn, ir) * _pow(n, ips) + _pow(capm, ir) * _pow(m, iq)


def weibull_square_bound(n: int, pair: NormPair, r: float) -> BoundValue:
    """Two-case bound for square iid Weibull matrices (m = n)."""

    n = _check_size("n", n)
    r = _check_shape(r)
    ps, q = pair.p_star, pair.q
    if ps <= 2.0 and q <= 2.0:
        val = _pow(n, inv(q) + inv(ps) - 0.5)
        return _bound("square p*,q<=2", {"poly": val},
                      anchor="weibull-iid/square")
    small = min(ps, q)
    cap = min(small, log_plus(n))
    val = _pow(cap, 1.0 / r) * _pow(n, inv(small))
    return _bound("square p*vq>=2", {"poly_log": val},
                  anchor="weibull-iid/square")


def weibull_iid_moment_form(m: int, n: int, pair: NormPair, r: float) -> BoundValue:
    """Moment-functional form of the iid Weibull bound.

    Evaluates ``m^{1/q} * S(p, q ^ Log m; n) + n^{1/p*} * S(q*, p* ^ Log n; m)``
    where ``S`` is :func:`matnorm.vectors.sup_ball_moment`.  Agrees with the
    compact four-term form within a factor of eight (asserted).
    """

    m = _check_size("m", m)
    n = _check_size("n", n)
    r = _check_shape(r)
    rho_m = min(pair.q, log_plus(m))
    rho_n = min(pair.p_star, log_plus(n))
    terms = {
        "rows": _pow(m, inv(pair.q)) * sup_ball_moment(pair.p, rho_m, r, n),
        "cols": _pow(n, inv(pair.p_star))
        * sup_ball_moment(pair.q_star, rho_n, r, m),
    }
    out = _bound(pair.regime.value, terms, anchor="weibull-iid/moment")
    compact = weibull_iid_bound(m, n, pair, r).value
    assert compact / 8.0 <= out.value <= compact * 8.0, (out.value, compact)
    return out


def weibull_square_moment_form(n: int, pair: NormPair, r: float) -> BoundValue:
    """Moment-constant form of the square Weibull bound (m = n)."""

    n = _check_size("n", n)
    r = _check_shape(r)
    ps, q = pair.p_star, pair.q
    if ps <= 2.0 and q <= 2.0:
        val = _pow(n, inv(q) + inv(ps) - 0.5) * weibull_moment(r, 2.0)
        return _bound("square p*,q<=2", {"poly_moment": val},
                      anchor="weibull-iid/square-moment")
    small = min(ps, q)
    rho = min(small, log_plus(n))
    val = _pow(n, inv(small)) * weibull_moment(r, max(rho, 1.0))
    return _bound("square p*vq>=2", {"poly_moment": val},
                  anchor="weibull-iid/square-moment")


# ---------------------------------------------------------------------------
# tensor-weighted matrices  (entries a_i b_j X_ij)


def _interp_norm(w: WeightVector, u: float, v: float) -> float:
    """||w||_{ratio_exp(u, v)} -- the interpolation norm used by the branches."""

    return lp_norm(w.values, ratio_exp(u, v))


def gauss_tensor_bound(w: TensorWeights, pair: NormPair) -> BoundValue:
    """Four-branch bound for E||(a_i b_j g_ij)||_{p->q}, Gaussian entries."""

    a, b = w.a, w.b
    p, q = pair.p, pair.q
    ps, qs = pair.p_star, pair.q_star
    if ps <= 2.0 and q <= 2.0:
        terms = {
            "a_interp_b_pstar": _interp_norm(a, qs, 2.0) * lp_norm(b.values, ps),
            "a_q_b_interp": lp_norm(a.values, q) * _interp_norm(b, p, 2.0),
        }
        case = "p*,q<=2"
    elif q <= 2.0:
        terms = {
            "a_interp_b_head2": _interp_norm(a, qs, 2.0)
            * _head_tail(b, ps, 2.0, ps, math.sqrt(ps)),
            "a_q_b_max": lp_norm(a.values, q) * lp_norm(b.values, INF),
        }
        case = "q<=2<p*"
    elif ps <= 2.0:
        terms = {
            "a_max_b_pstar": lp_norm(a.values, INF) * lp_norm(b.values, ps),
            "a_head2_b_interp": _head_tail(a, q, 2.0, q, math.sqrt(q))
            * _interp_norm(b, p, 2.0),
        }
        case = "p*<=2<q"
    else:
        terms = {
            "a_max_b_head2": lp_norm(a.values, INF)
            * _head_tail(b, ps, 2.0, ps, math.sqrt(ps)),
            "a_head2_b_max": _head_tail(a, q, 2.0, q, math.sqrt(q))
            * lp_norm(b.values, INF),
        }
        case = "2<p*,q"
    return _bound(case, terms, anchor="tensor/gauss")


def weibull_tensor_bound(w: TensorWeights, pair: NormPair, r: float) -> BoundValue:
    """Six-branch bound for E||(a_i b_j X_ij)||_{p->q}, Weibull(r) entries."""

    r = _check_shape(r)
    rs = holder_conjugate(r)
    a, b = w.a, w.b
    p, q = pair.p, pair.q
    ps, qs = pair.p_star, pair.q_star
    ir = 1.0 / r

    def head2(v: WeightVector, cut: float) -> float:
        return _head_tail(v, cut, 2.0, cut, math.sqrt(cut) if math.isfinite(cut) else 0.0)

    def headr(v: WeightVector, cut: float) -> float:
        return _head_tail(v, cut, r, cut, _pow(cut, ir) if math.isfinite(cut) else 0.0)

    if ps <= 2.0 and q <= 2.0:
        terms = {
            "a_interp_b_pstar": _interp_norm(a, qs, 2.0) * lp_norm(b.values, ps),
            "a_q_b_interp": lp_norm(a.values, q) * _interp_norm(b, p, 2.0),
        }
        case = "p*,q<=2"
    elif q <= 2.0 and q < r:
        terms = {
            "a_interp2_b_head2": _interp_norm(a, qs, 2.0) * head2(b, ps),
            "a_interpr_b_headr": _interp_norm(a, qs, rs) * headr(b, ps),
            "a_q_b_max": lp_norm(a.values, q) * lp_norm(b.values, INF),
        }
        case = "q<r<=2<p*"
    elif q <= 2.0:
        terms = {
            "a_interp2_b_head2": _interp_norm(a, qs, 2.0) * head2(b, ps),
            "a_max_b_headr": lp_norm(a.values, INF) * headr(b, ps),
            "a_q_b_max": lp_norm(a.values, q) * lp_norm(b.values, INF),
        }
        case = "r<=q<=2<p*"
    elif ps < r:
        terms = {
            "a_max_b_pstar": lp_norm(a.values, INF) * lp_norm(b.values, ps),
            "a_head2_b_interp2": head2(a, q) * _interp_norm(b, p, 2.0),
            "a_headr_b_interpr": headr(a, q) * _interp_norm(b, p, rs),
        }
        case = "q>2,p*<r"
    elif ps <= 2.0:
        terms = {
            "a_max_b_pstar": lp_norm(a.values, INF) * lp_norm(b.values, ps),
            "a_head2_b_interp2": head2(a, q) * _interp_norm(b, p, 2.0),
            "a_headr_b_max": headr(a, q) * lp_norm(b.values, INF),
        }
        case = "q>2,r<=p*<=2"
    else:
        terms = {
            "a_max_b_headr": lp_norm(a.values, INF) * headr(b, ps),
            "a_headr_b_max": headr(a, q) * lp_norm(b.values, INF),
        }
        case = "2<p*,q"
    return _bound(case, terms, anchor="tensor/weibull")


def conjecture_terms(w: TensorWeights, pair: NormPair, r: float) -> ConjectureTerms:
    """The (d1, d2, d3, d3r) building blocks of the structured conjecture.

    d1: column-functional term; d2: row-functional term; d3: Gaussian-style
    interaction term (four cases on the position of p and q around 2);
    d3r: its Weibull analogue with 1/r-power logarithms.
    """

    r = _check_shape(r)
    a, b = w.a, w.b
    p, q = pair.p, pair.q
    ps, qs = pair.p_star, pair.q_star

    d1 = lp_norm(a.values, q) * (
        lp_norm(b.values, ratio_exp(p, 2.0)) if ps < 2.0 else lp_norm(b.values, INF)
    )
    d2 = lp_norm(b.values, ps) * (
        lp_norm(a.values, ratio_exp(qs, 2.0)) if q < 2.0 else lp_norm(a.values, INF)
    )

    if q < p:
        d3 = 0.0
        d3r = 0.0
    elif p <= 2.0 <= q:
        flat = w.outer_abs().ravel()
        d3 = orlicz_phi_norm(flat, 2.0)
        d3r = orlicz_phi_norm(flat, r)
    elif q <= 2.0:  # p <= q < 2
        aux = lp_norm(a.values, ratio_exp(2.0, q))
        d3 = aux * _decorated_max(b.sorted_abs, 2.0)
        d3r = aux * _decorated_max(b.sorted_abs, r)
    else:  # 2 < p <= q
        aux = lp_norm(b.values, ratio_exp(p, 2.0))
        d3 = aux * _decorated_max(a.sorted_abs, 2.0)
        d3r = aux * _decorated_max(a.sorted_abs, r)
    return ConjectureTerms(d1=d1, d2=d2, d3=d3, d3r=d3r)


def tensor_product_twosided(
    w: TensorWeights,
    pair: NormPair,
    r: float,
    lower_const: float = 1.0,
    upper_const: float = 1.0,
) -> tuple[float, float]:
    """Two-sided product envelope from the d1/d2 terms alone.

    Lower: ``lower_const * (d1 + d2)``.  Upper:
    ``upper_const * (q^{1/r} d1 + (p*)^{1/r} d2)`` with infinite exponents
    capped by ``Log m`` / ``Log n`` respectively.  Returns (lower, upper).
    """

    r = _check_shape(r)
    if lower_const < 0.0 or upper_const < 0.0:
        raise DomainError("constants must be nonnegative")
    d = conjecture_terms(w, pair, r)
    q_cap = pair.q if math.isfinite(pair.q) else log_plus(w.m)
    ps_cap = pair.p_star if math.isfinite(pair.p_star) else log_plus(w.n)
    lower = lower_const * (d.d1 + d.d2)
    upper = upper_const * (
        _pow(q_cap, 1.0 / r) * d.d1 + _pow(ps_cap, 1.0 / r) * d.d2
    )
    return lower, upper


# ---------------------------------------------------------------------------
# weighted sup over the l_rho ball


def weighted_lrho_bound(c, rho: float, r: float,
                        gaussian: bool = False) -> BoundValue:
    """Bound for E ||(c_i X_i)||_rho with iid symmetric Weibull(r) factors.

    Three regimes: for rho <= 2 the plain ell_rho norm of the weights; for
    rho = inf (an expected maximum) a pure Orlicz phi_r norm; otherwise an
    Orlicz head over the largest ``floor(e^rho)`` weights plus ``rho^{1/r}``
    times the ell_rho tail.  ``gaussian`` forces the phi_2 / sqrt(rho)
    variant regardless of ``r`` (the factors then play the Gaussian role).
    """

    check_exponent(rho)
    r = 2.0 if gaussian else _check_shape(r)
    w = as_weights(c)
    if rho <= 2.0:
        return _bound("small-rho", {"lrho": lp_norm(w.values, rho)},
                      anchor="weighted-lrho/bound")
    if math.isinf(rho):
        return _bound("sup", {"orlicz": orlicz_phi_norm(w.sorted_abs, r)},
                      anchor="weighted-lrho/bound")
    s = w.sorted_abs
    h = _head_split(s, rho)
    terms = {"head": orlicz_phi_norm(s[:h], r)}
    tail = s[h:]
    terms["tail"] = _pow(rho, 1.0 / r) * lp_norm(tail, rho) if tail.size else 0.0
    return _bound("head-tail", terms, anchor="weighted-lrho/bound")


# ---------------------------------------------------------------------------
# order statistics of iid Weibull samples


def _check_order_stat_args(m: int, k: int, q: float, r: float,
                           allow_inf_q: bool) -> tuple[int, int, float, float]:
    m = _check_size("m", m)
    k = _check_size("k", k)
    if k > m:
        raise DomainError(f"k must satisfy k <= m, got k={k}, m={m}")
    r = _check_shape(r)
    check_exponent(q)
    if math.isinf(q) and not allow_inf_q:
        raise DomainError("q must be finite for this formula")
    return m, k, q, r


def order_stat_qmoment_bound(m: int, k: int, q: float, r: float) -> float:
    """Bound for (E sum of q-th powers of the k largest of m samples)^{1/q}."""

    m, k, q, r = _check_order_stat_args(m, k, q, r, allow_inf_q=False)
    return _pow(k, 1.0 / q) * _pow(max(log_plus(m / k), q), 1.0 / r)


def _tail_density_moment(t: float, q: float, r: float) -> float:
    """E[ Y 1_{Y > t} ] for Y = |X|^q, X symmetric Weibull(r), via quadrature.

    Integrates the density under the substitution u = y^{r/q}, which keeps
    the integrand exponentially decaying for every q/r ratio.
    """

    a = r / q

    def integrand(u: float) -> float:
        return u ** (1.0 / a) * math.exp(-u)

    val, _err = integrate.quad(integrand, t ** a, np.inf, limit=200)
    return float(val)


def order_stat_threshold(m: int, k: int, q: float, r: float) -> float:
    """Threshold t* solving  E[|X|^q ; |X|^q > t] = t k / m  (bisection).

    The truncated moment is computed by adaptive quadrature of the density
    of ``|X|^q``; the root is bracketed by doubling and then bisected to
    1e-8 relative width.
    """

    m, k, q, r = _check_order_stat_args(m, k, q, r, allow_inf_q=False)
    slope = k / m

    def g(t: float) -> float:
        return _tail_density_moment(t, q, r) - t * slope

    lo = 0.0  # g(0+) = E|X|^q > 0, no quadrature needed at the endpoint
    hi = 1.0
    for _ in range(200):
        if g(hi) < 0.0:
            break
        lo = hi
        hi *= 2.0
    else:  # pragma: no cover - would need astronomically heavy tails
        raise DomainError("failed to bracket the threshold")
    for _ in range(200):
        if hi - lo <= 1e-8 * hi:
            break
        mid = 0.5 * (lo + hi)
        if g(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def order_stat_lq_expect_bound(m: int, k: int, q: float, r: float) -> float:
    """Bound for E of the ell_q norm of the k largest of m Weibull samples.

    Compact form ``k^{1/q} (Log(m/k) v (q ^ Log k))^{1/r}`` for finite q;
    for q = inf the value is ``(Log m)^{1/r}``.  The compact form agrees
    with the two-branch version (split at q >= Log k) within a factor of
    four, asserted on every call.
    """

    m, k, q, r = _check_order_stat_args(m, k, q, r, allow_inf_q=True)
    if math.isinf(q):
        return _pow(log_plus(m), 1.0 / r)
    compact = _pow(k, 1.0 / q) * _pow(
        max(log_plus(m / k), min(q, log_plus(k))), 1.0 / r
    )
    if q >= log_plus(k):
        branch = _pow(log_plus(m), 1.0 / r)
    else:
        branch = order_stat_qmoment_bound(m, k, q, r)
    assert branch / 4.0 <= compact <= branch * 4.0, (compact, branch, m, k, q, r)
    return compact


# ---------------------------------------------------------------------------
# submatrix maxima and structured Gaussian matrices


def submatrix_bound(
    m: int, n: int, k: int, l: int, pair: NormPair, r: float
) -> BoundValue:
    """Four-term bound for the expected largest p->q norm over k x l submatrices.

    At ``k = m``, ``l = n`` the four terms coincide exactly with the
    compact iid Weibull bound for the full matrix.
    """

    m = _check_size("m", m)
    n = _check_size("n", n)
    k = _check_size("k", k)
    l = _check_size("l", l)
    if k > m or l > n:
        raise DomainError(f"need k <= m and l <= n, got {(k, m, l, n)}")
    r = _check_shape(r)
    ps, q = pair.p_star, pair.q
    iq, ips, ir = inv(q), inv(ps), 1.0 / r
    col_log = max(log_plus(n / l), min(ps, log_plus(l)))
    row_log = max(log_plus(m / k), min(q, log_plus(k)))
    terms = {
        "l_side_r": _pow(col_log, ir) * _pow(k, max(iq - ir, 0.0)) * _pow(l, ips),
        "l_side_2": math.sqrt(col_log) * _pow(k, max(iq - 0.5, 0.0)) * _pow(l, ips),
        "k_side_r": _pow(row_log, ir) * _pow(l, max(ips - ir, 0.0)) * _pow(k, iq),
        "k_side_2": math.sqrt(row_log) * _pow(l, max(ips - 0.5, 0.0)) * _pow(k, iq),
    }
    return _bound(pair.regime.value, terms, anchor="submatrix/four-term")


def structured_gauss_bound(w, pair: NormPair) -> BoundValue:
    """Row/column/Orlicz bound for Gaussian matrices with fixed coefficients.

    Accepts either a :class:`TensorWeights` or a full coefficient matrix.
    Requires ``p <= 2 <= q``.  Value is
    ``max_j ||col_j||_q + (Log m)^{1/q} (max_i ||row_i||_{p*} + E-max term)``
    where the last factor is the phi_2 Orlicz norm of all coefficients.
    """

    if not (pair.p <= 2.0 <= pair.q):
        raise DomainError(
            f"structured Gaussian bound needs p <= 2 <= q, got {pair}"
        )
    if isinstance(w, TensorWeights):
        coeff = w.outer_abs()
    else:
        coeff = np.abs(np.asarray(w, dtype=float))
        if coeff.ndim != 2 or coeff.size == 0:
            raise DomainError("coefficient matrix must be 2-D and nonempty")
        if not np.all(np.isfinite(coeff)):
            raise DomainError("coefficient matrix must be finite")
    m = coeff.shape[0]
    col = max(lp_norm(coeff[:, j], pair.q) for j in range(coeff.shape[1]))
    row = max(lp_norm(coeff[i, :], pair.p_star) for i in range(m))
    emax = orlicz_phi_norm(coeff.ravel(), 2.0)
    scale = _pow(log_plus(m), inv(pair.q))
    terms = {
        "max_col": col,
        "log_max_row": scale * row,
        "log_emax": scale * emax,
    }
    return _bound("p<=2<=q", terms, anchor="structured-gauss/row-col")
