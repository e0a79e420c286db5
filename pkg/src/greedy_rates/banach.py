"""Dual greedy algorithm DGA(t, b, mu) and its starred variant in l_q."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .dictionaries import EXACT, SELECTION_MODES, Dictionary, select_weak
from .spaces import Element, SpaceSpec, lq_norm, norming_vector
from .trace import GreedyTrace, IterationRecord

RD = "rd"
STAR = "star"

STOP_FACTOR = 1e-15
BISECT_ITERS = 200


@dataclass(frozen=True)
class DgaParams:
    """Weakness ``t``, shrinkage ``b`` and majorant gamma * u**power.

    ``variant`` "rd" balances the step against t * r_D(f_{m-1}); "star"
    balances it against F_{f_{m-1}}(phi_m).
    """

    t: float = 1.0
    b: float = 0.5
    variant: str = RD
    gamma: float = 0.5
    power: float = 2.0

    def __post_init__(self):
        if not (0.0 < self.t <= 1.0):
            raise ValueError(f"t must lie in (0, 1], got {self.t}")
        if not (0.0 < self.b < 1.0):
            raise ValueError(
                f"b must lie strictly inside (0, 1) for the dual greedy algorithm, got {self.b}")
        if self.variant not in (RD, STAR):
            raise ValueError(f"unknown variant {self.variant!r}")
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")
        if not (1.0 < self.power <= 2.0):
            raise ValueError("majorant power must lie in (1, 2]")

    @classmethod
    def for_space(cls, space: SpaceSpec, t: float = 1.0, b: float = 0.5,
                  variant: str = RD) -> "DgaParams":
        return cls(t, b, variant, space.majorant_gamma, space.majorant_power)


def dga_step_size(residual_norm: float, drive: float, t_eff: float, b: float,
                  gamma: float, power: float) -> float:
    """Positive root c of ||f|| mu(c / ||f||) = (t_eff b / 2) c drive
    for mu(u) = gamma u**power."""
    if drive <= 0:
        raise ValueError(f"drive must be positive, got {drive}")
    if residual_norm <= 0:
        raise ValueError("residual norm must be positive")
    return (t_eff * b * drive / (2.0 * gamma)) ** (1.0 / (power - 1.0)) * residual_norm


def dga_step_size_bisect(residual_norm: float, drive: float, t_eff: float, b: float,
                         mu: Callable[[float], float], upper: Optional[float] = None,
                         iters: int = BISECT_ITERS) -> float:
    """Same root by bisection, for any majorant with mu(u)/u increasing."""
    if drive <= 0:
        raise ValueError(f"drive must be positive, got {drive}")
    k = 0.5 * t_eff * b * drive

    def h(c):
        return residual_norm * mu(c / residual_norm) - k * c

    hi = upper if upper is not None else residual_norm
    while h(hi) <= 0:
        hi *= 2.0
    lo = 0.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if h(mid) > 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def run_dga(f: Element, D: Dictionary, m: int, params: DgaParams,
            mode: str = EXACT, seed: Optional[int] = None,
            a1: Optional[float] = None) -> GreedyTrace:
    """Run m steps of DGA(t, b, mu) (or the starred variant).

    Selection is on the scores F_{f_{m-1}}(+-g); r_D is the exact maximum
    over the finite dictionary. Records carry c_m as ``value`` and r_D. With
    ``a1`` given, the envelope B_m = a1 + sum c_j is recorded too.
    """
    if f.space != D.space:
        raise ValueError("element and dictionary live in different spaces")
    if f.dim != D.dim:
        raise ValueError(f"dimension mismatch: {f.dim} vs {D.dim}")
    if m < 0:
        raise ValueError("number of steps must be nonnegative")
    if mode not in SELECTION_MODES:
        raise ValueError(f"unknown selection mode {mode!r}")
    rng = np.random.default_rng(seed)
    q = f.space.q
    t, b = params.t, params.b

    x = f.coeffs.copy()
    nrm = lq_norm(x, q)
    stop = STOP_FACTOR * nrm
    B = a1
    records = []
    for step in range(1, m + 1):
        if nrm <= stop:
            records.append(IterationRecord(step, -1, 0, 0.0, 0.0, 0.0, nrm, B, 0.0))
            continue
        # selection is scale invariant: work with sign(x)|x|^(q-1) and
        # divide by ||x||^(q-1) afterwards
        scale = nrm ** (q - 1.0)
        sel = select_weak(D.scores(norming_vector(x, q)), t, mode, rng)
        rd = sel.sup_value / scale
        if params.variant == RD:
            drive, t_eff = rd, t
        else:
            drive, t_eff = sel.value / scale, 1.0
        c = dga_step_size(nrm, drive, t_eff, b, params.gamma, params.power)
        if D.is_standard_basis:
            x[sel.atom_index] -= c * sel.orientation
        else:
            x -= (c * sel.orientation) * D.atoms[sel.atom_index]
        nrm = lq_norm(x, q)
        if B is not None:
            B = B + c
        records.append(IterationRecord(step, sel.atom_index, sel.orientation, c, rd, c,
                                       nrm, B, rd, dual_value=sel.value / scale))
    params_d = {"t": t, "b": b, "variant": params.variant, "gamma": params.gamma,
                "power": params.power, "mode": mode, "seed": seed}
    name = "dga" if params.variant == RD else "dga-star"
    return GreedyTrace(name, f, params_d, records, Element(x, f.space), a1)


def residual_decrease_check(trace: GreedyTrace) -> float:
    """Worst value of ||f_m|| - (||f_{m-1}|| - t(1-b) c_m r_D(f_{m-1})).

    Nonpositive when every step satisfies the decrease inequality.
    """
    if any(r.r_d is None for r in trace.records):
        raise ValueError("trace lacks r_D records")
    t, b = trace.params["t"], trace.params["b"]
    norms = trace.residual_norms
    worst = -np.inf
    for k, r in enumerate(trace.records, start=1):
        if r.is_padding:
            continue
        bound = norms[k - 1] - t * (1.0 - b) * r.value * r.r_d
        worst = max(worst, norms[k] - bound)
    return float(worst) if np.isfinite(worst) else 0.0
