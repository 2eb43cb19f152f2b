"""l_p -> l_q operator norms of explicit matrices.

A dispatcher routes each (p, q) cell to the strongest available method:

* p = 1         exact: best column l_q norm
* q = inf       exact: best row l_{p*} norm
* p = q = 2     power iteration on the Gram operator
* p = inf       exact sign enumeration (2^(n-1) classes) within the budget,
                otherwise randomized bit-flip local search over sign vectors
* q = 1         solved on the transpose through norm duality
* otherwise     multistart nonlinear power method on both the primal and the
                transposed problem (a certified lower bound, not an exact value)

Every result carries feasible witness vectors attaining (or lower-bounding)
the reported value.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from ._rng import substream
from .errors import BudgetExceededError, DomainError
from .exponents import INF, NormPair
from .vectors import lp_norm

_FEAS_TOL = 1e-9


class SolveMethod(Enum):
    EXACT_COLUMN = "ExactColumn"
    EXACT_ROW = "ExactRow"
    EXACT_SPECTRAL = "ExactSpectral"
    SIGN_ENUM = "SignEnum"
    POWER_METHOD = "PowerMethod"
    DUALIZED = "Dualized"


@dataclass(frozen=True)
class SolverBudget:
    """Iteration/enumeration limits for the solvers (all deterministic given seed)."""

    max_starts: int = 64
    max_iters: int = 10_000
    tol: float = 1e-12
    enum_limit: int = 12
    subset_budget: int = 100_000
    seed: int = 0


@dataclass(frozen=True)
class OpNormResult:
    value: float
    method: SolveMethod
    witness_s: np.ndarray  # in the unit l_{q*} ball (output-side functional)
    witness_t: np.ndarray  # in the unit l_p ball (input-side vector)
    starts_used: int
    converged: bool


@dataclass(frozen=True)
class FinitePointSet:
    """A nonempty finite set of points in R^dim, stored as rows."""

    points: np.ndarray

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise DomainError("point set must be a nonempty 2-D array of row points")
        if not np.all(np.isfinite(pts)):
            raise DomainError("point set entries must be finite")
        object.__setattr__(self, "points", pts)

    @property
    def dim(self) -> int:
        return int(self.points.shape[1])

    def __len__(self) -> int:
        return int(self.points.shape[0])

    def norm_sup(self, rho: float) -> float:
        """max over the points of the l_rho norm."""
        return max(lp_norm(row, rho) for row in self.points)


def _check_matrix(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise DomainError("matrix must be 2-D with positive shape")
    if not np.all(np.isfinite(a)):
        raise DomainError("matrix entries must be finite")
    return a


def attain_in_ball(z: np.ndarray, rho: float) -> np.ndarray:
    """The vector t in the unit l_rho ball maximizing t.z (= ||z||_{rho*})."""
    z = np.asarray(z, dtype=float)
    if math.isinf(rho):
        return np.sign(z)
    if rho == 1.0:
        j = int(np.argmax(np.abs(z)))
        t = np.zeros_like(z)
        t[j] = math.copysign(1.0, z[j]) if z[j] != 0.0 else 1.0
        return t
    rho_star = rho / (rho - 1.0)
    nrm = lp_norm(z, rho_star)
    if nrm == 0.0:
        t = np.zeros_like(z)
        t[0] = 1.0
        return t
    u = np.abs(z) / nrm
    return np.sign(z) * u ** (rho_star - 1.0)


def _finalize(a, pair: NormPair, value, s, t, method, starts_used, converged) -> OpNormResult:
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    assert lp_norm(t, pair.p) <= 1.0 + _FEAS_TOL, "witness_t leaves the unit ball"
    assert lp_norm(s, pair.q_star) <= 1.0 + _FEAS_TOL, "witness_s leaves the unit ball"
    attained = float(s @ a @ t)
    scale = max(1.0, abs(value))
    assert value >= attained - _FEAS_TOL * scale, "value below its own witness"
    assert abs(value - attained) <= 1e-7 * scale, "witness does not attain the value"
    return OpNormResult(
        value=float(value),
        method=method,
        witness_s=s,
        witness_t=t,
        starts_used=int(starts_used),
        converged=bool(converged),
    )


# ---------------------------------------------------------------------------
# exact corner methods


def _exact_column(a: np.ndarray, pair: NormPair) -> OpNormResult:
    q = pair.q
    norms = [lp_norm(a[:, j], q) for j in range(a.shape[1])]
    j = int(np.argmax(norms))
    t = np.zeros(a.shape[1])
    t[j] = 1.0
    s = attain_in_ball(a[:, j], pair.q_star)
    return _finalize(a, pair, norms[j], s, t, SolveMethod.EXACT_COLUMN, 0, True)


def _exact_row(a: np.ndarray, pair: NormPair) -> OpNormResult:
    p_star = pair.p_star
    norms = [lp_norm(a[i, :], p_star) for i in range(a.shape[0])]
    i = int(np.argmax(norms))
    s = np.zeros(a.shape[0])
    s[i] = 1.0
    t = attain_in_ball(a[i, :], pair.p)
    return _finalize(a, pair, norms[i], s, t, SolveMethod.EXACT_ROW, 0, True)


def _gram_power(b: np.ndarray, tol: float, max_iters: int) -> tuple[float, np.ndarray, bool]:
    """Top eigenvalue/vector of a PSD matrix by power iteration."""
    d = b.shape[0]
    v = np.ones(d) + 1e-3 * np.arange(d)
    v /= np.linalg.norm(v)
    if float(np.linalg.norm(b @ v)) == 0.0:
        for i in range(d):
            if float(np.linalg.norm(b[:, i])) > 0.0:
                v = np.zeros(d)
                v[i] = 1.0
                break
        else:
            return 0.0, v, True
    lam_old = float(v @ (b @ v))
    for _ in range(max_iters):
        w = b @ v
        nrm = float(np.linalg.norm(w))
        if nrm == 0.0:
            return 0.0, v, True
        v = w / nrm
        lam = float(v @ (b @ v))
        if abs(lam - lam_old) <= tol * max(lam, 1e-300):
            return lam, v, True
        lam_old = lam
    return lam_old, v, False


def _exact_spectral(a: np.ndarray, pair: NormPair) -> OpNormResult:
    m, n = a.shape
    if n <= m:
        lam, v, ok = _gram_power(a.T @ a, tol=1e-14, max_iters=500_000)
        t = v
        y = a @ v
        ny = float(np.linalg.norm(y))
        s = y / ny if ny > 0.0 else np.eye(m)[0]
        value = ny
    else:
        lam, u, ok = _gram_power(a @ a.T, tol=1e-14, max_iters=500_000)
        s = u
        z = a.T @ u
        nz = float(np.linalg.norm(z))
        t = z / nz if nz > 0.0 else np.eye(n)[0]
        value = nz
    return _finalize(a, pair, value, s, t, SolveMethod.EXACT_SPECTRAL, 1, ok)


def _sign_matrix(n: int) -> np.ndarray:
    """All sign vectors of length n with first coordinate +1, as rows."""
    if n == 1:
        return np.ones((1, 1))
    masks = np.arange(2 ** (n - 1), dtype=np.uint64)
    bits = (masks[:, None] >> np.arange(n - 1, dtype=np.uint64)[None, :]) & 1
    return np.hstack([np.ones((masks.size, 1)), 1.0 - 2.0 * bits.astype(float)])


def _rowwise_lp(y: np.ndarray, rho: float, axis: int = -1) -> np.ndarray:
    if math.isinf(rho):
        return np.abs(y).max(axis=axis)
    if rho == 1.0:
        return np.abs(y).sum(axis=axis)
    if rho == 2.0:
        return np.sqrt((y * y).sum(axis=axis))
    a = np.abs(y)
    m = a.max(axis=axis, keepdims=True)
    with np.errstate(invalid="ignore"):
        scaled = np.where(m > 0.0, a / np.where(m > 0.0, m, 1.0), 0.0)
    return (np.squeeze(m, axis=axis) * (scaled ** rho).sum(axis=axis) ** (1.0 / rho))


def _sign_enum(a: np.ndarray, pair: NormPair) -> OpNormResult:
    n = a.shape[1]
    signs = _sign_matrix(n)
    values = _rowwise_lp(signs @ a.T, pair.q, axis=1)
    best = int(np.argmax(values))
    t = signs[best]
    s = attain_in_ball(a @ t, pair.q_star)
    return _finalize(a, pair, values[best], s, t, SolveMethod.SIGN_ENUM, signs.shape[0], True)


def _sign_local_search(a: np.ndarray, pair: NormPair, budget: SolverBudget,
                       rng: np.random.Generator) -> OpNormResult:
    """Steepest-ascent single-bit flips from random sign starts (lower bound)."""
    m, n = a.shape
    restarts = budget.max_starts
    signs = 2.0 * rng.integers(0, 2, size=(restarts, n)) - 1.0
    y = signs @ a.T  # (R, m)
    values = _rowwise_lp(y, pair.q, axis=1)
    for _ in range(budget.max_iters):
        # candidate row r with bit i flipped: y_r - 2 * signs[r, i] * a[:, i]
        cand = y[:, None, :] - 2.0 * signs[:, :, None] * a.T[None, :, :]
        cand_values = _rowwise_lp(cand, pair.q, axis=2)  # (R, n)
        best_i = np.argmax(cand_values, axis=1)
        best_val = cand_values[np.arange(restarts), best_i]
        improving = best_val > values * (1.0 + 1e-12)
        if not np.any(improving):
            break
        rows = np.nonzero(improving)[0]
        cols = best_i[rows]
        y[rows] = cand[rows, cols]
        signs[rows, cols] *= -1.0
        values[rows] = best_val[rows]
    best = int(np.argmax(values))
    t = signs[best]
    s = attain_in_ball(a @ t, pair.q_star)
    return _finalize(a, pair, values[best], s, t, SolveMethod.SIGN_ENUM, restarts, True)


# ---------------------------------------------------------------------------
# nonlinear power method (1 < p, q < inf)


def _dual_rows(y: np.ndarray, rho: float) -> np.ndarray:
    """Rowwise norming functionals: rows u with ||u||_{rho*} = 1, u.y = ||y||_rho."""
    nrm = _rowwise_lp(y, rho, axis=1)
    safe = np.where(nrm > 0.0, nrm, 1.0)
    u = np.abs(y) / safe[:, None]
    return np.sign(y) * u ** (rho - 1.0)


def power_method_step(a, t, pair: NormPair, rng: np.random.Generator | None = None) -> np.ndarray:
    """One alternating-maximization step t -> t' (requires 1 < p, q < inf).

    The bilinear value s.At is nondecreasing along iterations.  A zero
    iterate At = 0 restarts from a fresh random unit vector drawn from
    ``rng`` (an error if no generator was supplied).
    """
    a = _check_matrix(a)
    if not (1.0 < pair.p < INF and 1.0 < pair.q < INF):
        raise DomainError("power_method_step needs 1 < p, q < inf")
    t = np.asarray(t, dtype=float)
    y = a @ t
    if float(np.max(np.abs(y))) == 0.0:
        if rng is None:
            raise DomainError("zero iterate At = 0 and no generator for a restart")
        fresh = rng.standard_normal(t.size)
        return attain_in_ball(fresh, pair.p)
    s = attain_in_ball(y, pair.q_star)
    z = a.T @ s
    return attain_in_ball(z, pair.p)


def _power_multistart(a: np.ndarray, pair: NormPair, budget: SolverBudget,
                      rng: np.random.Generator) -> tuple[float, np.ndarray, np.ndarray, bool, int]:
    """Vectorized multistart alternating maximization. Returns (value, s, t, conv, starts)."""
    m, n = a.shape
    p, q = pair.p, pair.q
    p_star, q_star = pair.p_star, pair.q_star
    n_starts = budget.max_starts
    g = rng.standard_normal((n_starts, n))
    nrm = _rowwise_lp(g, p, axis=1)
    t_mat = g / np.where(nrm > 0.0, nrm, 1.0)[:, None]
    restarts = 0
    values = np.zeros(n_starts)
    done = np.zeros(n_starts, dtype=bool)
    for _ in range(budget.max_iters):
        y = t_mat @ a.T
        ynorm = _rowwise_lp(y, q, axis=1)
        dead = ynorm == 0.0
        if np.any(dead):
            fresh = rng.standard_normal((int(dead.sum()), n))
            fn = _rowwise_lp(fresh, p, axis=1)
            t_mat[dead] = fresh / np.where(fn > 0.0, fn, 1.0)[:, None]
            restarts += int(dead.sum())
            continue
        gain = ynorm - values
        assert np.all(gain >= -1e-9 * np.maximum(ynorm, 1.0)), "power method value decreased"
        done = gain <= budget.tol * np.maximum(ynorm, 1e-300)
        values = ynorm
        if np.all(done):
            break
        s_mat = _dual_rows(y, q)
        z = s_mat @ a
        t_mat = _dual_rows(z, p_star)  # rows have unit l_p norm since p = (p*)*
    best_val = values.max()
    ties = np.nonzero(values >= best_val - 0.0)[0]
    best = min(ties, key=lambda i: tuple(t_mat[i]))
    t = t_mat[best]
    y = a @ t
    s = attain_in_ball(y, q_star)
    return float(lp_norm(y, q)), s, t, bool(done[best]), n_starts + restarts


# ---------------------------------------------------------------------------
# dispatcher


def opnorm(a, pair: NormPair, budget: SolverBudget | None = None,
           rng: np.random.Generator | None = None) -> OpNormResult:
    """Operator norm of ``a`` from l_p to l_q with witnesses.

    Exact on the corner cells (p = 1, q = inf, p = q = 2, and sign
    enumeration for p = inf / q = 1 within the budget); a multistart
    lower bound elsewhere, deterministic given the seed.
    """
    a = _check_matrix(a)
    budget = budget or SolverBudget()
    if rng is None:
        rng = substream(budget.seed)
    m, n = a.shape
    if float(np.max(np.abs(a))) == 0.0:
        s = np.zeros(m)
        s[0] = 1.0
        t = np.zeros(n)
        t[0] = 1.0
        return OpNormResult(0.0, SolveMethod.EXACT_COLUMN, s, t, 0, True)
    if pair.p == 1.0:
        return _exact_column(a, pair)
    if math.isinf(pair.q):
        return _exact_row(a, pair)
    if pair.p == 2.0 and pair.q == 2.0:
        return _exact_spectral(a, pair)
    if math.isinf(pair.p):
        if n <= budget.enum_limit:
            return _sign_enum(a, pair)
        return _sign_local_search(a, pair, budget, rng)
    if pair.q == 1.0:
        dual = opnorm(a.T, pair.dual(), budget, rng)
        return _finalize(a, pair, dual.value, dual.witness_t, dual.witness_s,
                         SolveMethod.DUALIZED, dual.starts_used, dual.converged)
    # general cell: primal and transposed multistart, keep the larger value
    val_p, s_p, t_p, conv_p, st_p = _power_multistart(a, pair, budget, rng)
    val_d, s_d, t_d, conv_d, st_d = _power_multistart(a.T, pair.dual(), budget, rng)
    if val_d > val_p:
        # transpose witnesses swap roles
        value, s, t, conv = val_d, t_d, s_d, conv_d
        value = float(s @ a @ t)
    else:
        value, s, t, conv = val_p, s_p, t_p, conv_p
    return _finalize(a, pair, value, s, t, SolveMethod.POWER_METHOD, st_p + st_d, conv)


# ---------------------------------------------------------------------------
# suprema over explicit point sets


def bilinear_sup(a, s_set: FinitePointSet, t_set: FinitePointSet) -> tuple[float, tuple[int, int]]:
    """Exact max over (s, t) in S x T of s.At, with the attaining index pair."""
    a = _check_matrix(a)
    if s_set.dim != a.shape[0] or t_set.dim != a.shape[1]:
        raise DomainError("point-set dimensions must match the matrix shape")
    g = s_set.points @ a @ t_set.points.T
    flat = int(np.argmax(g))
    i, j = divmod(flat, g.shape[1])
    return float(g[i, j]), (int(i), int(j))


@lru_cache(maxsize=64)
def _combinations(m: int, k: int) -> np.ndarray:
    arr = np.array(list(itertools.combinations(range(m), k)), dtype=int)
    arr.setflags(write=False)
    return arr


def _sym_top_eig_closed(gram: np.ndarray) -> np.ndarray:
    """Largest eigenvalue of each symmetric PSD matrix in an (N, d, d) stack, d <= 3.

    Direct formulas (quadratic for d = 2, the trigonometric form of
    Cardano for d = 3), so the cost is a handful of vector passes instead
    of an iteration whose length is set by the worst eigen-gap in the
    stack.
    """
    d = gram.shape[1]
    if d == 1:
        return gram[:, 0, 0].copy()
    if d == 2:
        half_tr = 0.5 * (gram[:, 0, 0] + gram[:, 1, 1])
        det = gram[:, 0, 0] * gram[:, 1, 1] - gram[:, 0, 1] * gram[:, 1, 0]
        return half_tr + np.sqrt(np.maximum(half_tr * half_tr - det, 0.0))
    q = np.trace(gram, axis1=1, axis2=2) / 3.0
    centered = gram - q[:, None, None] * np.eye(3)
    p = np.sqrt(np.maximum((centered ** 2).sum(axis=(1, 2)) / 6.0, 0.0))
    safe_p = np.where(p > 0.0, p, 1.0)
    b = centered / safe_p[:, None, None]
    half_det = 0.5 * (
        b[:, 0, 0] * (b[:, 1, 1] * b[:, 2, 2] - b[:, 1, 2] * b[:, 2, 1])
        + b[:, 0, 1] * (b[:, 1, 2] * b[:, 2, 0] - b[:, 1, 0] * b[:, 2, 2])
        + b[:, 0, 2] * (b[:, 1, 0] * b[:, 2, 1] - b[:, 1, 1] * b[:, 2, 0])
    )
    phi = np.arccos(np.clip(half_det, -1.0, 1.0)) / 3.0
    top = q + 2.0 * p * np.cos(phi)
    return np.where(p > 0.0, top, q)


def _batch_spectral(sub: np.ndarray, tol: float = 1e-13, max_iters: int = 2000) -> np.ndarray:
    """Largest singular value of every matrix in a (N, k, l) stack."""
    n_mats, k, l = sub.shape
    if l <= k:
        gram = np.einsum("nij,nik->njk", sub, sub)
    else:
        gram = np.einsum("nij,nkj->nik", sub, sub)
    d = gram.shape[1]
    if d <= 3:
        return np.sqrt(np.maximum(_sym_top_eig_closed(gram), 0.0))
    v = np.ones((n_mats, d)) + 1e-3 * np.arange(d)[None, :]
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    lam = np.einsum("ni,nij,nj->n", v, gram, v)
    for _ in range(max_iters):
        w = np.einsum("nij,nj->ni", gram, v)
        nrm = np.linalg.norm(w, axis=1)
        alive = nrm > 0.0
        v = np.where(alive[:, None], w / np.where(alive, nrm, 1.0)[:, None], v)
        lam_new = np.einsum("ni,nij,nj->n", v, gram, v)
        if np.all(np.abs(lam_new - lam) <= tol * np.maximum(lam_new, 1e-300)):
            lam = lam_new
            break
        lam = lam_new
    return np.sqrt(np.maximum(lam, 0.0))


def _batch_opnorm_values(sub: np.ndarray, pair: NormPair,
                         budget: SolverBudget) -> np.ndarray | None:
    """Vectorized opnorm over a (N, k, l) stack for corner (p, q); None if no fast path."""
    p, q = pair.p, pair.q
    n_mats, k, l = sub.shape
    if p == 1.0:
        return _rowwise_lp(sub, q, axis=1).max(axis=1)
    if math.isinf(q):
        return _rowwise_lp(sub, pair.p_star, axis=2).max(axis=1)
    if p == 2.0 and q == 2.0:
        return _batch_spectral(sub)
    if math.isinf(p) and l <= budget.enum_limit:
        signs = _sign_matrix(l)  # (C, l)
        y = np.einsum("nkl,cl->nck", sub, signs)
        return _rowwise_lp(y, q, axis=2).max(axis=1)
    if q == 1.0 and k <= budget.enum_limit:
        signs = _sign_matrix(k)  # duality: enumerate output-side signs
        z = np.einsum("nkl,ck->ncl", sub, signs)
        return _rowwise_lp(z, pair.p_star, axis=2).max(axis=1)
    return None


def submatrix_sup(a, k: int, l: int, pair: NormPair, mode: str = "exact",
                  budget: SolverBudget | None = None,
                  rng: np.random.Generator | None = None) -> tuple[float, np.ndarray, np.ndarray]:
    """Largest l_p -> l_q norm over k x l submatrices of ``a``.

    ``mode="exact"`` enumerates all row/column subsets (within
    ``budget.subset_budget``); ``mode="local"`` runs seeded single-swap hill
    climbing restarts and returns a lower bound.  Returns (value, I, J).
    """
    a = _check_matrix(a)
    budget = budget or SolverBudget()
    m, n = a.shape
    k, l = int(k), int(l)
    if not (1 <= k <= m and 1 <= l <= n):
        raise DomainError(f"subset sizes must satisfy 1 <= k <= {m}, 1 <= l <= {n}")
    if mode == "exact":
        count = math.comb(m, k) * math.comb(n, l)
        if count > budget.subset_budget:
            raise BudgetExceededError(
                f"{count} subset pairs exceed the budget {budget.subset_budget}; "
                "use mode='local'"
            )
        rows = _combinations(m, k)
        cols = _combinations(n, l)
        sub = a[rows[:, None, :, None], cols[None, :, None, :]]  # (NI, NJ, k, l)
        stack = sub.reshape(-1, k, l)
        values = _batch_opnorm_values(stack, pair, budget)
        if values is None:
            values = np.array([opnorm(s_mat, pair, budget).value for s_mat in stack])
        flat = int(np.argmax(values))
        i, j = divmod(flat, cols.shape[0])
        return float(values[flat]), rows[i].copy(), cols[j].copy()
    if mode != "local":
        raise DomainError(f"unknown mode {mode!r}; valid: 'exact', 'local'")
    if rng is None:
        rng = substream(budget.seed)
    best_val, best_rows, best_cols = -np.inf, None, None
    for _ in range(budget.max_starts):
        rows = np.sort(rng.choice(m, size=k, replace=False))
        cols = np.sort(rng.choice(n, size=l, replace=False))
        val = opnorm(a[np.ix_(rows, cols)], pair, budget).value
        improved = True
        while improved:
            improved = False
            cand_best = (val, rows, cols)
            for axis, idx, pool in (("r", rows, range(m)), ("c", cols, range(n))):
                chosen = set(idx.tolist())
                for pos in range(len(idx)):
                    for repl in pool:
                        if repl in chosen:
                            continue
                        trial = idx.copy()
                        trial[pos] = repl
                        trial = np.sort(trial)
                        r2, c2 = (trial, cols) if axis == "r" else (rows, trial)
                        v2 = opnorm(a[np.ix_(r2, c2)], pair, budget).value
                        if v2 > cand_best[0] * (1.0 + 1e-12):
                            cand_best = (v2, r2, c2)
                if cand_best[0] > val:
                    break
            if cand_best[0] > val:
                val, rows, cols = cand_best
                improved = True
        if val > best_val:
            best_val, best_rows, best_cols = val, rows, cols
    return float(best_val), best_rows, best_cols
