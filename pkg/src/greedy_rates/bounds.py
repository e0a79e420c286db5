"""Closed-form rate bounds and the auxiliary lemmas behind them.

Conventions: ``m = 0`` gives 1 for every decay bound. Hilbert bounds decay
like (1 + m ...)^(-alpha/2); l_q bounds like (1 + m ...)^(-alpha/p) with the
dual exponent p = q/(q-1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

# Exponent beyond which the Hilbert PGA upper bound cannot hold, from the
# known lower bound gamma_m(H) >= c m^(-0.1898).
PGA_ALPHA_CEILING = 0.3796

_SLACK = 1e-12

WGA_TAU_B = "wga_tau_b"
WGA_ALPHA = "wga_alpha"
DGA_ALPHA = "dga_alpha"
OGA_ALPHA = "oga_alpha"
HL1 = "hl1"
SIGMA = "sigma"


@dataclass(frozen=True)
class BoundSpec:
    family: str
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        alpha = self.parameters.get("alpha")
        if alpha is not None and not (0.0 <= alpha <= 1.0):
            raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
        p = self.parameters
        if self.family == WGA_ALPHA and alpha is not None:
            if alpha > alpha0_hilbert(p["t"], p["b"]) + _SLACK:
                raise ValueError("alpha above the Hilbert threshold")
        if self.family == DGA_ALPHA and alpha is not None:
            if alpha > alpha0_banach(p["t"], p["b"]) + _SLACK:
                raise ValueError("alpha above the Banach threshold")

    def evaluate(self, m: int) -> float:
        p = self.parameters
        if self.family == WGA_ALPHA:
            return wga_alpha_bound(m, p["t"], p["b"], p["alpha"])
        if self.family == DGA_ALPHA:
            return dga_alpha_bound(m, p["t"], p["b"], p["q"], p["gamma"], p["alpha"])
        if self.family == OGA_ALPHA:
            return oga_alpha_bound(m, p["alpha"])
        if self.family == HL1:
            return hl1_bound(p["C1"], p["C2"], m)
        if self.family == WGA_TAU_B:
            return e_m_tau_b([p["t"]] * max(m, 1), p["b"], m)
        raise ValueError(f"no closed form for family {self.family!r}")


def _check_unit(name, x, lo_open=True):
    ok = (0.0 < x <= 1.0) if lo_open else (0.0 <= x <= 1.0)
    if not ok:
        raise ValueError(f"{name} out of range: {x}")


def e_m_tau_b(tau: Sequence[float], b: float, m: int) -> float:
    """Classical WGA(tau, b) rate for f in A_1(D).

    (1 + b(2-b) sum_{k<=m} t_k^2)^(-(2-b) t_m / (2 (2 + (2-b) t_m))).
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    _check_unit("b", b)
    tau = np.asarray(tau[:m], dtype=float)
    if tau.size < m:
        raise ValueError(f"need {m} weakness values, got {tau.size}")
    if np.any(tau <= 0) or np.any(tau > 1):
        raise ValueError("weakness values must lie in (0, 1]")
    if np.any(np.diff(tau) > 0):
        raise ValueError("weakness sequence must be nonincreasing")
    tm = tau[-1]
    base = 1.0 + b * (2.0 - b) * float(np.sum(tau ** 2))
    return base ** (-(2.0 - b) * tm / (2.0 * (2.0 + (2.0 - b) * tm)))


def alpha0_hilbert(t: float, b: float) -> float:
    return (2.0 - b) * t / ((2.0 - b) * t + 2.0)


def wga_alpha_bound(m: int, t: float, b: float, alpha: float,
                    printed_base: bool = False) -> float:
    """(1 + m b(2-b) t^2)^(-alpha/2), valid for alpha <= alpha0_hilbert(t, b).

    The base carries t^2, which is what the energy argument delivers.
    ``printed_base=True`` uses the stronger t instead; the two agree at t = 1.
    """
    _check_unit("t", t)
    _check_unit("b", b)
    if not 0.0 <= alpha <= alpha0_hilbert(t, b) + _SLACK:
        raise ValueError(f"alpha={alpha} above threshold {alpha0_hilbert(t, b)}")
    if m == 0:
        return 1.0
    tt = t if printed_base else t * t
    return (1.0 + m * b * (2.0 - b) * tt) ** (-alpha / 2.0)


def oga_alpha_bound(m: int, alpha: float) -> float:
    if m < 1:
        raise ValueError("m must be at least 1")
    _check_unit("alpha", alpha, lo_open=False)
    return float(m) ** (-alpha / 2.0)


def alpha0_banach(t: float, b: float) -> float:
    s = t * (1.0 - b)
    return s / (1.0 + s)


def dga_constant(b: float, q: float, gamma: float) -> float:
    """c = (1 - b) (b / (2 gamma))^(1/(q-1))."""
    return (1.0 - b) * (b / (2.0 * gamma)) ** (1.0 / (q - 1.0))


def dga_alpha_bound(m: int, t: float, b: float, q: float, gamma: float,
                    alpha: float) -> float:
    """(1 + m c t^p)^(-alpha/p) for a majorant gamma u^q, 1 < q <= 2."""
    if not (1.0 < q <= 2.0):
        raise ValueError(f"majorant power q must lie in (1, 2], got {q}")
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    _check_unit("t", t)
    if not (0.0 < b < 1.0):
        raise ValueError(f"b must lie in (0, 1), got {b}")
    if not 0.0 <= alpha <= alpha0_banach(t, b) + _SLACK:
        raise ValueError(f"alpha={alpha} above threshold {alpha0_banach(t, b)}")
    if m == 0:
        return 1.0
    p = q / (q - 1.0)
    c = dga_constant(b, q, gamma)
    return (1.0 + m * c * t ** p) ** (-alpha / p)


def hl1_bound(C1: float, C2: float, m: int) -> float:
    """(1/C1 + C2 m)^(-1)."""
    if C1 <= 0 or C2 <= 0:
        raise ValueError("C1 and C2 must be positive")
    return 1.0 / (1.0 / C1 + C2 * m)


def hl2_transfer(C: float, beta: float, alpha: float, phi_m: float) -> float:
    """Move a bound C phi(m)^(-beta/2) at exponent beta down to alpha < beta:
    C^(alpha/beta) phi(m)^(-alpha/2)."""
    if not (0.0 < alpha <= beta <= 1.0):
        raise ValueError("need 0 < alpha <= beta <= 1")
    if phi_m <= 0:
        raise ValueError("phi(m) must be positive")
    return C ** (alpha / beta) * phi_m ** (-alpha / 2.0)


def hl1_hypothesis(xs: Sequence[float], C1: float, C2: float,
                   slack: float = _SLACK) -> bool:
    """x_0 <= C1, x_m >= 0 and x_{m+1} <= x_m (1 - x_m C2) for all m."""
    xs = np.asarray(xs, dtype=float)
    if xs.size == 0:
        return True
    if np.any(xs < 0) or xs[0] > C1 + slack:
        return False
    return bool(np.all(xs[1:] <= xs[:-1] * (1.0 - xs[:-1] * C2) + slack))


def check_hl1_recursion(xs: Sequence[float], C1: float, C2: float,
                        slack: float = _SLACK) -> bool:
    """True iff the recursion hypothesis holds and so does its conclusion
    x_m <= (1/C1 + C2 m)^(-1). A failed hypothesis returns False without
    asserting anything about the conclusion."""
    if not hl1_hypothesis(xs, C1, C2, slack):
        return False
    xs = np.asarray(xs, dtype=float)
    ms = np.arange(xs.size)
    return bool(np.all(xs <= 1.0 / (1.0 / C1 + C2 * ms) + slack))


def check_concavity_inequality(x: float, a: float, slack: float = _SLACK) -> bool:
    """(1 - x)(1 + x/a)^a <= 1 for x < 1, a > 0 and x >= -a.

    Below x = -a the base is negative: the power is not real for fractional
    a and the inequality fails for even integer a (x = -10, a = 2 gives 176),
    so that region is rejected.
    """
    if not x < 1 or not a > 0:
        raise ValueError("need x < 1 and a > 0")
    base = 1.0 + x / a
    if base < 0:
        raise ValueError(f"need x >= -a, got x={x}, a={a}")
    return (1.0 - x) * base ** a <= 1.0 + slack
