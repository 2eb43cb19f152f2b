import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from matnorm import INF, NormPair, Regime, holder_conjugate, log_plus
from matnorm.errors import DomainError
from matnorm.exponents import check_exponent, inv


@pytest.mark.parametrize(
    "rho,expected",
    [(1.0, INF), (INF, 1.0), (2.0, 2.0), (1.5, 3.0), (3.0, 1.5), (4.0, 4.0 / 3.0)],
)
def test_holder_conjugate_values(rho, expected):
    assert holder_conjugate(rho) == pytest.approx(expected)


@given(st.floats(min_value=1.0, max_value=1e6))
def test_holder_conjugate_is_an_involution(rho):
    # rho/(rho-1) loses ~rho digits of precision, hence the loose tolerance
    assert holder_conjugate(holder_conjugate(rho)) == pytest.approx(rho, rel=1e-6)


@given(st.floats(min_value=1.0 + 1e-9, max_value=1e6))
def test_holder_identity(rho):
    assert 1.0 / rho + 1.0 / holder_conjugate(rho) == pytest.approx(1.0, rel=1e-12)


@pytest.mark.parametrize("bad", [0.0, 0.999, -3.0, math.nan])
def test_check_exponent_rejects(bad):
    with pytest.raises(DomainError):
        check_exponent(bad)


def test_check_exponent_accepts_boundaries():
    assert check_exponent(1.0) == 1.0
    assert check_exponent(INF) == INF
    assert check_exponent(1) == 1.0  # ints coerce


def test_log_plus():
    assert log_plus(1.0) == 1.0
    assert log_plus(0.5) == 1.0  # floored at 1
    assert log_plus(math.e) == 1.0
    assert log_plus(math.e ** 3) == pytest.approx(3.0)
    with pytest.raises(DomainError):
        log_plus(0.0)
    with pytest.raises(DomainError):
        log_plus(-2.0)


def test_inv_convention():
    assert inv(INF) == 0.0
    assert inv(4.0) == 0.25


class TestNormPair:
    def test_stars(self):
        pair = NormPair(1.5, 4.0)
        assert pair.p_star == pytest.approx(3.0)
        assert pair.q_star == pytest.approx(4.0 / 3.0)

    def test_validation(self):
        with pytest.raises(DomainError):
            NormPair(0.5, 2.0)
        with pytest.raises(DomainError):
            NormPair(2.0, math.nan)

    @pytest.mark.parametrize(
        "p,q,regime",
        [
            (2.0, 2.0, Regime.BOTH_LE2),  # p* = 2 closed on the <=2 side
            (4.0, 1.0, Regime.BOTH_LE2),
            (1.0, 2.0, Regime.PSTAR_BIG),  # p* = inf
            (1.5, 1.0, Regime.PSTAR_BIG),
            (2.0, 3.0, Regime.Q_BIG),
            (INF, 4.0, Regime.Q_BIG),  # p* = 1
            (1.5, 3.0, Regime.BOTH_GE2),
            (1.0, INF, Regime.BOTH_GE2),
        ],
    )
    def test_regime(self, p, q, regime):
        assert NormPair(p, q).regime is regime

    def test_dual_is_an_involution(self):
        for p, q in [(1.0, 1.0), (1.5, 3.0), (2.0, INF), (4.0, 2.5)]:
            pair = NormPair(p, q)
            back = pair.dual().dual()
            assert back.p == pytest.approx(pair.p)
            assert back.q == pytest.approx(pair.q)

    def test_dual_swaps_conjugates(self):
        pair = NormPair(1.5, 3.0)
        dual = pair.dual()
        assert dual.p == pytest.approx(1.5)  # q* of 3
        assert dual.q == pytest.approx(3.0)  # p* of 1.5

    def test_frozen_and_hashable(self):
        pair = NormPair(2.0, 2.0)
        with pytest.raises(AttributeError):
            pair.p = 3.0
        assert len({NormPair(1.0, 2.0), NormPair(1.0, 2.0)}) == 1
