"""Operator-norm solver: exact dispatch cells against independent oracles.

Corner cells (p, q in {1, 2, inf}) are validated against brute force —
column/row formulas, LAPACK SVD, exhaustive sign enumeration — computed
in this file without touching the dispatcher.  General cells are checked
through duality, closed forms for rank-one and diagonal matrices, and
monotonicity of the value in (p, q).
"""

import itertools
import math

import numpy as np
import pytest

from matnorm import (
    INF,
    BudgetExceededError,
    FinitePointSet,
    NormPair,
    SolveMethod,
    SolverBudget,
    attain_in_ball,
    bilinear_sup,
    lp_norm,
    opnorm,
    power_method_step,
    submatrix_sup,
)
from matnorm._rng import substream
from matnorm.errors import DomainError
from matnorm.opnorm import _batch_opnorm_values, _power_multistart

CORNERS = [(p, q) for p in (1.0, 2.0, INF) for q in (1.0, 2.0, INF)]


def _brute_corner(a: np.ndarray, p: float, q: float) -> float:
    """Independent brute force for corner (p, q); no dispatcher code."""
    m, n = a.shape
    if p == 1.0:
        return max(lp_norm(a[:, j], q) for j in range(n))
    if math.isinf(q):
        p_star = INF if p == 1.0 else (1.0 if math.isinf(p) else p / (p - 1.0))
        return max(lp_norm(a[i, :], p_star) for i in range(m))
    if p == 2.0 and q == 2.0:
        return float(np.linalg.svd(a, compute_uv=False)[0])
    if math.isinf(p):
        return max(
            lp_norm(a @ np.array(t), q)
            for t in itertools.product((-1.0, 1.0), repeat=n)
        )
    if q == 1.0:
        # sup over B_p of ||At||_1 = max over sign vectors s of ||A^T s||_{p*}
        p_star = p / (p - 1.0) if not math.isinf(p) else 1.0
        return max(
            lp_norm(a.T @ np.array(s), p_star)
            for s in itertools.product((-1.0, 1.0), repeat=m)
        )
    raise AssertionError(f"not a corner: {(p, q)}")


def _check_witnesses(a, pair, res):
    assert lp_norm(res.witness_t, pair.p) <= 1.0 + 1e-9
    assert lp_norm(res.witness_s, pair.q_star) <= 1.0 + 1e-9
    attained = float(res.witness_s @ a @ res.witness_t)
    scale = max(1.0, abs(res.value))
    assert res.value >= attained - 1e-9 * scale
    assert abs(res.value - attained) <= 1e-7 * scale


# ---------------------------------------------------------------------------
# dispatch examples


def test_identity_spectral():
    res = opnorm(np.eye(2), NormPair(2.0, 2.0))
    assert res.value == pytest.approx(1.0, rel=1e-10)
    assert res.method is SolveMethod.EXACT_SPECTRAL
    assert res.converged


def test_column_example():
    res = opnorm([[1.0, 2.0], [3.0, 4.0]], NormPair(1.0, 1.0))
    assert res.value == pytest.approx(6.0)
    assert res.method is SolveMethod.EXACT_COLUMN


def test_sign_enum_example():
    res = opnorm([[1.0, 2.0], [3.0, 4.0]], NormPair(INF, 1.0))
    assert res.value == pytest.approx(10.0)
    assert res.method is SolveMethod.SIGN_ENUM


def test_row_example():
    res = opnorm([[1.0, 2.0], [3.0, 4.0]], NormPair(2.0, INF))
    assert res.value == pytest.approx(5.0)
    assert res.method is SolveMethod.EXACT_ROW


def test_zero_matrix():
    res = opnorm(np.zeros((3, 4)), NormPair(2.5, 1.5))
    assert res.value == 0.0
    assert res.method is SolveMethod.EXACT_COLUMN
    assert res.converged


def test_rejects_bad_input():
    with pytest.raises(DomainError):
        opnorm(np.array([1.0, 2.0]), NormPair(2.0, 2.0))
    with pytest.raises(DomainError):
        opnorm(np.array([[1.0, math.nan]]), NormPair(2.0, 2.0))


# ---------------------------------------------------------------------------
# corner oracle


def test_corner_cells_match_brute_force():
    rng = substream(101)
    for trial in range(20):
        a = rng.standard_normal((5, 5))
        for p, q in CORNERS:
            pair = NormPair(p, q)
            res = opnorm(a, pair)
            want = _brute_corner(a, p, q)
            assert res.value == pytest.approx(want, rel=1e-9), (trial, p, q)
            _check_witnesses(a, pair, res)
            assert res.converged


def test_corner_cells_nonsquare():
    rng = substream(102)
    a = rng.standard_normal((3, 7))
    b = rng.standard_normal((7, 3))
    for mat in (a, b):
        for p, q in CORNERS:
            assert opnorm(mat, NormPair(p, q)).value == pytest.approx(
                _brute_corner(mat, p, q), rel=1e-9
            )


def test_dualized_method_for_q1():
    rng = substream(103)
    a = rng.standard_normal((4, 5))
    pair = NormPair(3.0, 1.0)
    res = opnorm(a, pair)
    assert res.method is SolveMethod.DUALIZED
    want = _brute_corner(a, 3.0, 1.0)
    assert res.value == pytest.approx(want, rel=1e-9)
    _check_witnesses(a, pair, res)


# ---------------------------------------------------------------------------
# closed forms for structured matrices (general cells)


@pytest.mark.parametrize("p,q", [(2.5, 3.0), (1.5, 1.2), (3.0, 2.0), (2.0, 4.0)])
def test_rank_one_closed_form(p, q):
    rng = substream(104)
    u = rng.standard_normal(5)
    v = rng.standard_normal(6)
    a = np.outer(u, v)
    pair = NormPair(p, q)
    want = lp_norm(v, pair.p_star) * lp_norm(u, q)
    res = opnorm(a, pair)
    assert res.value == pytest.approx(want, rel=1e-6)
    _check_witnesses(a, pair, res)


def test_diagonal_closed_form():
    d = np.array([3.0, 2.0, 1.0, 0.5])
    a = np.diag(d)
    # p > q: interpolation norm of the diagonal
    res = opnorm(a, NormPair(3.0, 2.0))
    assert res.value == pytest.approx(lp_norm(d, 6.0), rel=1e-6)
    res = opnorm(a, NormPair(4.0, 2.0))
    assert res.value == pytest.approx(lp_norm(d, 4.0), rel=1e-6)
    # p <= q: max entry
    res = opnorm(a, NormPair(2.0, 3.0))
    assert res.value == pytest.approx(d.max(), rel=1e-6)


# ---------------------------------------------------------------------------
# properties


def test_duality_grid():
    rng = substream(105)
    for trial in range(10):
        a = rng.standard_normal((6, 6))
        for p in (1.5, 2.0, 3.0):
            for q in (1.5, 2.0, 3.0):
                pair = NormPair(p, q)
                v1 = opnorm(a, pair).value
                v2 = opnorm(a.T, pair.dual()).value
                assert abs(v1 - v2) <= 1e-4 * v1, (trial, p, q)


def test_scaling():
    rng = substream(106)
    a = rng.standard_normal((4, 4))
    for pair in (NormPair(1.0, 2.0), NormPair(2.0, 2.0), NormPair(2.5, 3.0),
                 NormPair(INF, 2.0)):
        base = opnorm(a, pair).value
        scaled = opnorm(-7.5 * a, pair).value
        assert scaled == pytest.approx(7.5 * base, rel=1e-10)


def test_value_monotone_in_p_and_q():
    rng = substream(107)
    ps = [1.0, 1.5, 2.0, 3.0, INF]
    qs = [1.0, 1.5, 2.0, 3.0, INF]
    for _ in range(3):
        a = rng.standard_normal((4, 4))
        vals = {
            (p, q): opnorm(a, NormPair(p, q)).value for p in ps for q in qs
        }
        for q in qs:
            seq = [vals[(p, q)] for p in ps]
            assert all(x <= y + 1e-8 for x, y in zip(seq, seq[1:])), "p order"
        for p in ps:
            seq = [vals[(p, q)] for q in qs]
            assert all(x >= y - 1e-8 for x, y in zip(seq, seq[1:])), "q order"


def test_power_method_is_a_lower_bound():
    rng = substream(108)
    for _ in range(5):
        a = rng.standard_normal((5, 5))
        exact = float(np.linalg.svd(a, compute_uv=False)[0])
        val, *_ = _power_multistart(a, NormPair(2.0, 2.0), SolverBudget(), substream(9))
        assert val <= exact * (1.0 + 1e-9)
        assert val >= exact * (1.0 - 1e-6)  # 64 starts find the top block


def test_power_method_step_fixed_points():
    t = power_method_step(np.eye(2), np.array([1.0, 0.0]), NormPair(2.0, 2.0))
    np.testing.assert_allclose(t, [1.0, 0.0])
    # an eigenvector is a fixed point even when it is not the leading one
    t = power_method_step(np.diag([2.0, 1.0]), np.array([0.0, 1.0]), NormPair(2.0, 2.0))
    np.testing.assert_allclose(t, [0.0, 1.0])


def test_power_method_step_monotone_value():
    rng = substream(109)
    a = rng.standard_normal((5, 5))
    pair = NormPair(2.5, 3.0)
    t = attain_in_ball(rng.standard_normal(5), pair.p)
    last = 0.0
    for _ in range(40):
        val = lp_norm(a @ t, pair.q)
        assert val >= last - 1e-12 * max(1.0, val)
        last = val
        t = power_method_step(a, t, pair)


def test_power_method_step_zero_iterate():
    a = np.zeros((2, 2))
    with pytest.raises(DomainError):
        power_method_step(a, np.array([1.0, 0.0]), NormPair(2.0, 2.0))
    t = power_method_step(a, np.array([1.0, 0.0]), NormPair(2.0, 2.0), rng=substream(1))
    assert lp_norm(t, 2.0) == pytest.approx(1.0)


def test_power_method_step_domain():
    with pytest.raises(DomainError):
        power_method_step(np.eye(2), np.ones(2), NormPair(1.0, 2.0))


def test_nonconverged_flag_and_lower_bound():
    rng = substream(110)
    a = rng.standard_normal((6, 6))
    pair = NormPair(2.5, 3.0)
    tight = opnorm(a, pair).value
    rough = opnorm(a, pair, budget=SolverBudget(max_iters=1))
    assert not rough.converged
    assert rough.value <= tight * (1.0 + 1e-9)


def test_determinism():
    rng_entries = substream(111)
    a = rng_entries.standard_normal((6, 6))
    pair = NormPair(2.5, 1.7)
    r1 = opnorm(a, pair, rng=substream(55))
    r2 = opnorm(a, pair, rng=substream(55))
    assert r1.value == r2.value
    np.testing.assert_array_equal(r1.witness_t, r2.witness_t)
    # no rng argument: seeded from the budget, still reproducible
    assert opnorm(a, pair).value == opnorm(a, pair).value


# ---------------------------------------------------------------------------
# sign local search (p = inf beyond the enumeration limit)


def test_sign_local_search_matches_enum():
    rng = substream(112)
    small = SolverBudget(enum_limit=3)  # force the search path at n = 6
    hits = 0
    for trial in range(10):
        a = substream(112, trial).standard_normal((4, 6))
        pair = NormPair(INF, 2.0)
        exact = opnorm(a, pair).value  # n = 6 <= default limit: enumeration
        approx = opnorm(a, pair, budget=small, rng=substream(500, trial))
        assert approx.method is SolveMethod.SIGN_ENUM
        assert approx.value <= exact * (1.0 + 1e-9)
        if approx.value >= exact * (1.0 - 1e-9):
            hits += 1
    assert hits >= 9, f"local sign search missed the optimum too often ({hits}/10)"


# ---------------------------------------------------------------------------
# point sets and bilinear suprema


def test_finite_point_set_validation():
    with pytest.raises(DomainError):
        FinitePointSet(points=np.zeros((0, 2)))
    with pytest.raises(DomainError):
        FinitePointSet(points=np.array([1.0, 2.0]))
    s = FinitePointSet(points=np.array([[3.0, 4.0], [1.0, 0.0]]))
    assert s.dim == 2 and len(s) == 2
    assert s.norm_sup(2.0) == pytest.approx(5.0)
    assert s.norm_sup(INF) == pytest.approx(4.0)


def test_bilinear_sup_examples():
    e1 = np.array([[1.0, 0.0]])
    val, _ = bilinear_sup(np.eye(2), FinitePointSet(points=e1), FinitePointSet(points=e1))
    assert val == pytest.approx(1.0)

    basis = FinitePointSet(points=np.eye(2))
    val, idx = bilinear_sup([[1.0, 2.0], [3.0, 4.0]], basis, basis)
    assert val == pytest.approx(4.0)
    assert idx == (1, 1)

    s = FinitePointSet(points=np.array([[1.0, 1.0]]))
    t = FinitePointSet(points=np.array([[1.0, -1.0]]))
    val, _ = bilinear_sup(np.eye(2), s, t)
    assert val == pytest.approx(0.0)


def test_bilinear_sup_against_double_loop():
    rng = substream(113)
    a = rng.standard_normal((4, 3))
    s_pts = rng.standard_normal((5, 4))
    t_pts = rng.standard_normal((7, 3))
    want = max(float(s @ a @ t) for s in s_pts for t in t_pts)
    got, (i, j) = bilinear_sup(a, FinitePointSet(points=s_pts), FinitePointSet(points=t_pts))
    assert got == pytest.approx(want, rel=1e-12)
    assert float(s_pts[i] @ a @ t_pts[j]) == pytest.approx(got)


def test_bilinear_sup_dim_mismatch():
    with pytest.raises(DomainError):
        bilinear_sup(np.eye(2), FinitePointSet(points=np.eye(3)),
                     FinitePointSet(points=np.eye(2)))


def test_attain_in_ball():
    rng = substream(114)
    z = rng.standard_normal(6)
    for rho, rho_star in [(1.0, INF), (1.7, 1.7 / 0.7), (2.0, 2.0), (3.0, 1.5), (INF, 1.0)]:
        t = attain_in_ball(z, rho)
        assert lp_norm(t, rho) <= 1.0 + 1e-12
        assert float(t @ z) == pytest.approx(lp_norm(z, rho_star), rel=1e-10)
    t0 = attain_in_ball(np.zeros(3), 2.0)
    assert lp_norm(t0, 2.0) <= 1.0 + 1e-12


# ---------------------------------------------------------------------------
# submatrix search


def _brute_submatrix(a, k, l, pair):
    m, n = a.shape
    best = -math.inf
    for rows in itertools.combinations(range(m), k):
        for cols in itertools.combinations(range(n), l):
            sub = a[np.ix_(rows, cols)]
            best = max(best, opnorm(sub, pair).value)
    return best


@pytest.mark.parametrize("p,q", [(1.0, 2.0), (2.0, 2.0), (INF, 1.0), (2.0, INF),
                                 (2.5, 1.5)])
def test_submatrix_exact_matches_brute_force(p, q):
    rng = substream(115)
    a = rng.standard_normal((5, 4))
    pair = NormPair(p, q)
    val, rows, cols = submatrix_sup(a, 2, 2, pair)
    assert val == pytest.approx(_brute_submatrix(a, 2, 2, pair), rel=1e-9)
    # the returned index sets attain the value
    attained = opnorm(a[np.ix_(rows, cols)], pair).value
    assert attained == pytest.approx(val, rel=1e-9)


def test_submatrix_k1_l1_is_max_entry():
    rng = substream(116)
    a = rng.standard_normal((6, 5))
    val, rows, cols = submatrix_sup(a, 1, 1, NormPair(2.0, 2.0))
    assert val == pytest.approx(np.max(np.abs(a)))
    assert abs(a[rows[0], cols[0]]) == pytest.approx(val)


def test_submatrix_identity_2x2():
    val, _, _ = submatrix_sup(np.eye(3), 2, 2, NormPair(2.0, 2.0))
    assert val == pytest.approx(1.0, rel=1e-9)


def test_submatrix_budget_error():
    a = np.zeros((10, 10)) + np.eye(10)
    with pytest.raises(BudgetExceededError, match="local"):
        submatrix_sup(a, 3, 3, NormPair(2.0, 2.0),
                      budget=SolverBudget(subset_budget=100))


def test_submatrix_bad_mode_and_sizes():
    a = np.eye(3)
    with pytest.raises(DomainError):
        submatrix_sup(a, 4, 1, NormPair(2.0, 2.0))
    with pytest.raises(DomainError):
        submatrix_sup(a, 1, 1, NormPair(2.0, 2.0), mode="annealing")


def test_submatrix_local_search_vs_exact():
    """Hill climbing is a lower bound and almost always finds the optimum."""
    pair = NormPair(2.0, 2.0)
    budget = SolverBudget(max_starts=8)
    hits = 0
    trials = 100
    for trial in range(trials):
        a = substream(117, trial).standard_normal((6, 6))
        exact, _, _ = submatrix_sup(a, 2, 2, pair)
        local, _, _ = submatrix_sup(a, 2, 2, pair, mode="local", budget=budget,
                                    rng=substream(118, trial))
        assert local <= exact * (1.0 + 1e-9)
        if local >= exact * (1.0 - 1e-9):
            hits += 1
    assert hits >= 90, f"local search matched exact only {hits}/{trials} times"


def test_batch_opnorm_values_match_scalar():
    rng = substream(119)
    stack = rng.standard_normal((40, 3, 4))
    budget = SolverBudget()
    for p, q in CORNERS:
        pair = NormPair(p, q)
        vals = _batch_opnorm_values(stack, pair, budget)
        assert vals is not None, f"corner {(p, q)} lost its fast path"
        for i in (0, 7, 39):
            assert vals[i] == pytest.approx(opnorm(stack[i], pair).value, rel=1e-9)
    # non-corner pairs have no fast path
    assert _batch_opnorm_values(stack, NormPair(2.5, 3.0), budget) is None


@pytest.mark.parametrize("k,l", [(1, 1), (1, 3), (2, 2), (3, 2), (3, 3),
                                 (3, 6), (4, 4), (2, 7)])
def test_batch_spectral_matches_svd(k, l):
    from matnorm.opnorm import _batch_spectral

    stack = substream(120, k, l).standard_normal((300, k, l))
    got = _batch_spectral(stack)
    want = np.linalg.svd(stack, compute_uv=False)[:, 0]
    np.testing.assert_allclose(got, want, rtol=1e-11)


def test_batch_spectral_degenerate_spectra():
    from matnorm.opnorm import _batch_spectral

    assert np.all(_batch_spectral(np.zeros((5, 3, 3))) == 0.0)
    rng = substream(121)
    # rank one: the only singular value is ||u|| ||v||
    u = rng.standard_normal((200, 3, 1))
    v = rng.standard_normal((200, 1, 3))
    got = _batch_spectral(u @ v)
    want = np.linalg.norm(u[:, :, 0], axis=1) * np.linalg.norm(v[:, 0, :], axis=1)
    np.testing.assert_allclose(got, want, rtol=1e-12)
    # fully repeated spectrum: scaled orthogonal matrices
    qs, _ = np.linalg.qr(rng.standard_normal((200, 3, 3)))
    np.testing.assert_allclose(_batch_spectral(2.5 * qs), 2.5, rtol=1e-12)
