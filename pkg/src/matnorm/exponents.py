"""Extended-real exponent calculus: conjugates, the Log floor, norm-pair regimes.

Exponents live in [1, inf]; infinity is ``math.inf`` and every case split
branches on it explicitly, so no expression like ``rho1*rho2/(rho1-rho2)``
is ever evaluated at an infinite argument.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError

INF = math.inf


def check_exponent(rho: float, name: str = "rho") -> float:
    """Validate rho in [1, inf] and return it as a float."""
    rho = float(rho)
    if math.isnan(rho) or rho < 1.0:
        raise DomainError(f"{name} must lie in [1, inf], got {rho!r}")
    return rho


def holder_conjugate(rho: float) -> float:
    """Conjugate exponent rho* with 1/rho + 1/rho* = 1 (1 <-> inf)."""
    rho = check_exponent(rho)
    if rho == 1.0:
        return INF
    if math.isinf(rho):
        return 1.0
    return rho / (rho - 1.0)


def log_plus(x: float) -> float:
    """max(1, ln x) for x > 0; written Log in formulas."""
    x = float(x)
    if x <= 0.0:
        raise DomainError(f"log_plus needs a positive argument, got {x!r}")
    return max(1.0, math.log(x))


def inv(rho: float) -> float:
    """1/rho with the 1/inf = 0 convention."""
    return 0.0 if math.isinf(rho) else 1.0 / rho


class Regime(Enum):
    """Four-way classification of (p*, q) against 2, closed on the <=2 side."""

    BOTH_LE2 = "p*,q<=2"
    PSTAR_BIG = "q<=2<p*"
    Q_BIG = "p*<=2<q"
    BOTH_GE2 = "2<p*,q"


@dataclass(frozen=True)
class NormPair:
    """A domain/codomain exponent pair (p, q) for an l_p -> l_q operator norm."""

    p: float
    q: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", check_exponent(self.p, "p"))
        object.__setattr__(self, "q", check_exponent(self.q, "q"))

    @property
    def p_star(self) -> float:
        return holder_conjugate(self.p)

    @property
    def q_star(self) -> float:
        return holder_conjugate(self.q)

    @property
    def regime(self) -> Regime:
        ps, q = self.p_star, self.q
        if ps <= 2.0 and q <= 2.0:
            return Regime.BOTH_LE2
        if q <= 2.0:
            return Regime.PSTAR_BIG
        if ps <= 2.0:
            return Regime.Q_BIG
        return Regime.BOTH_GE2

    def dual(self) -> "NormPair":
        """The transpose problem's pair (q*, p*)."""
        return NormPair(self.q_star, self.p_star)
