"""Exact best m-term approximation errors used as ground truth."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .dictionaries import Dictionary
from .spaces import Element, lq_norm

SORTED_TAIL = "sorted_tail"
BRUTE_FORCE = "brute_force"

SUBSET_BUDGET = 200_000
GRAM_PIVOT_TOL = 1e-12


@dataclass
class SigmaResult:
    m: int
    value: float
    support: tuple
    method: str
    skipped: int = 0


def sigma_m_basis(f: Element, m: int) -> SigmaResult:
    """sigma_m(f) in l_q for the symmetrized standard basis.

    The best m-term approximant keeps the m largest |coefficients|, so the
    error is the l_q norm of the remaining tail.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    mag = np.abs(f.coeffs)
    order = np.argsort(-mag, kind="stable")
    keep = order[:m]
    return SigmaResult(m, lq_norm(mag[order[m:]], f.space.q),
                       tuple(sorted(int(i) for i in keep)), SORTED_TAIL)


def sigma_m_hilbert_bruteforce(f: Element, D: Dictionary, m: int) -> SigmaResult:
    """Minimize ||f - P_S f|| over all m-subsets S of atoms.

    Subsets whose Gram matrix has a Cholesky pivot below 1e-12 are skipped
    and counted in ``skipped``.
    """
    if not (f.space.is_hilbert and D.space.is_hilbert):
        raise ValueError("brute-force sigma_m is restricted to Hilbert space")
    if m < 0:
        raise ValueError("m must be nonnegative")
    fv = f.coeffs
    if m == 0:
        return SigmaResult(0, float(np.linalg.norm(fv)), (), BRUTE_FORCE)
    k = min(m, len(D))
    if math.comb(len(D), k) > SUBSET_BUDGET:
        raise ValueError(
            f"subset budget exceeded: C({len(D)}, {k}) > {SUBSET_BUDGET}")
    best, best_s, skipped = math.inf, (), 0
    corr = D.atoms @ fv
    G_full = D.atoms @ D.atoms.T
    for S in itertools.combinations(range(len(D)), k):
        idx = list(S)
        G = G_full[np.ix_(idx, idx)]
        try:
            L = np.linalg.cholesky(G)
        except np.linalg.LinAlgError:
            skipped += 1
            continue
        if np.min(np.diag(L)) ** 2 < GRAM_PIVOT_TOL:
            skipped += 1
            continue
        z = np.linalg.solve(L, corr[idx])
        c = np.linalg.solve(L.T, z)
        err = float(np.linalg.norm(fv - D.atoms[idx].T @ c))
        if err < best:
            best, best_s = err, S
    if best_s == ():
        raise ValueError("every subset had a degenerate Gram matrix")
    return SigmaResult(m, best, best_s, BRUTE_FORCE, skipped)


def monotone_coefficient_bound(f: Element, m: int, alpha: float,
                               slack: float = 1e-9) -> float:
    """m^(-alpha/p) ||f||_q^(1-alpha) ||f||_1^alpha for sorted f in l_q, q > 2.

    Valid for alpha in [1/q, 1]. Raises AssertionError if sigma_m(f) exceeds
    the returned bound by more than ``slack``.
    """
    q = f.space.q
    if q <= 2:
        raise ValueError("the monotone bound is stated for q > 2")
    c = f.coeffs
    if np.any(c < 0) or np.any(np.diff(c) > 0):
        raise ValueError("coefficients must be nonnegative and nonincreasing")
    if not (1.0 / q - 1e-12 <= alpha <= 1.0):
        raise ValueError(f"alpha must lie in [1/q, 1], got {alpha}")
    if m < 1:
        raise ValueError("m must be at least 1")
    p = q / (q - 1.0)
    bound = m ** (-alpha / p) * lq_norm(c, q) ** (1.0 - alpha) * float(np.sum(c)) ** alpha
    sigma = sigma_m_basis(f, m).value
    if sigma > bound + slack:
        raise AssertionError(f"sigma_{m} = {sigma} exceeds bound {bound}")
    return bound


@dataclass
class TrigDemoResult:
    """Norms of f = sum_{k=1}^{2m} cos(2^k x) on (0, 2 pi).

    Unnormalized values use dx; ``*_normalized`` use dx / (2 pi), the
    measure under which L_q norms dominate L_2 norms.
    """

    m: int
    q: float
    quad_points: int
    l2_norm: float
    lq_norm: float
    l2_sigma_lower: float
    a1: float
    l2_norm_normalized: float
    lq_norm_normalized: float
    ratios: dict = field(default_factory=dict)

    @property
    def l2_exact(self) -> float:
        return math.sqrt(2 * self.m * math.pi)

    def ratio(self, alpha: float) -> float:
        """sigma_m lower bound over ||f||_q^(1-alpha) ||f||_A1^alpha, normalized measure."""
        sigma = math.sqrt(self.m / 2.0)
        return sigma / (self.lq_norm_normalized ** (1.0 - alpha) * self.a1 ** alpha)


def trig_lacunary_demo(m: int, q: float, quad_points: int | None = None,
                       alphas=(0.0, 0.25, 0.5, 0.75, 1.0)) -> TrigDemoResult:
    if not (1 <= m <= 6):
        raise ValueError("m must lie in 1..6")
    if q <= 2:
        raise ValueError("the trigonometric example is for q > 2")
    need = 2 ** (2 * m + 3)
    n = need if quad_points is None else int(quad_points)
    if n < need:
        raise ValueError(f"need at least {need} quadrature points, got {n}")
    x = 2.0 * np.pi * np.arange(n) / n
    f = np.zeros(n)
    for k in range(1, 2 * m + 1):
        f += np.cos(2.0 ** k * x)
    # composite trapezoid on a full period: every node has weight 2 pi / n
    mean2 = float(np.mean(f * f))
    meanq = float(np.mean(np.abs(f) ** q))
    res = TrigDemoResult(
        m=m, q=q, quad_points=n,
        l2_norm=math.sqrt(2.0 * math.pi * mean2),
        lq_norm=(2.0 * math.pi * meanq) ** (1.0 / q),
        l2_sigma_lower=math.sqrt(m * math.pi),
        a1=2.0 * m,
        l2_norm_normalized=math.sqrt(mean2),
        lq_norm_normalized=meanq ** (1.0 / q),
    )
    res.ratios = {float(a): res.ratio(a) for a in alphas}
    return res
