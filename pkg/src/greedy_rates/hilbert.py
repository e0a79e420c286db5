"""Greedy expansions in Hilbert space: PGA, OGA and WGA(t, b)."""

from __future__ import annotations

from typing import Optional

import numpy as np

from .dictionaries import EXACT, SELECTION_MODES, Dictionary, select_weak
from .spaces import Element
from .trace import GreedyTrace, IterationRecord

STOP_FACTOR = 1e-15
PIVOT_TOL = 1e-12


def _check_hilbert(f: Element, D: Dictionary):
    if not f.space.is_hilbert or not D.space.is_hilbert:
        raise ValueError("Hilbert-space engine called on a non-Hilbert space")
    if f.dim != D.dim:
        raise ValueError(f"dimension mismatch: {f.dim} vs {D.dim}")


def _pad(step, residual_norm, envelope, degenerate=False):
    return IterationRecord(step, -1, 0, 0.0, 0.0, 0.0, residual_norm,
                           envelope, None, degenerate)


def run_wga(f: Element, D: Dictionary, m: int, t: float = 1.0, b: float = 1.0,
            mode: str = EXACT, seed: Optional[int] = None,
            a1: Optional[float] = None) -> GreedyTrace:
    """Weak greedy algorithm with shrinkage ``b``.

    Each step picks phi_m with <f_{m-1}, phi_m> >= t sup_g <f_{m-1}, g> and
    sets f_m = f_{m-1} - b <f_{m-1}, phi_m> phi_m. If ``a1`` (the exact A_1
    norm of f) is given, the records carry the envelope
    B_m = B_{m-1} + b y_m with B_0 = a1.
    """
    _check_hilbert(f, D)
    if not (0.0 < t <= 1.0):
        raise ValueError(f"t must lie in (0, 1], got {t}")
    if not (0.0 < b <= 1.0):
        raise ValueError(f"b must lie in (0, 1], got {b}")
    if m < 0:
        raise ValueError("number of steps must be nonnegative")
    if mode not in SELECTION_MODES:
        raise ValueError(f"unknown selection mode {mode!r}")
    rng = np.random.default_rng(seed)

    x = f.coeffs.copy()
    a_prev = float(x @ x)
    stop = (STOP_FACTOR * np.sqrt(a_prev)) ** 2
    B = a1
    records = []
    for step in range(1, m + 1):
        if a_prev <= stop:
            records.append(_pad(step, float(np.sqrt(a_prev)), B))
            continue
        sel = select_weak(D.scores(x), t, mode, rng)
        y = sel.value
        coeff = b * y
        if D.is_standard_basis:
            x[sel.atom_index] -= coeff * sel.orientation
        else:
            x -= (coeff * sel.orientation) * D.atoms[sel.atom_index]
        a_prev = float(x @ x)
        if B is not None:
            B = B + coeff
        records.append(IterationRecord(step, sel.atom_index, sel.orientation, y,
                                       sel.sup_value, coeff, float(np.sqrt(a_prev)), B))
    params = {"t": t, "b": b, "mode": mode, "seed": seed}
    return GreedyTrace("wga", f, params, records, Element(x, f.space), a1)


def run_pga(f: Element, D: Dictionary, m: int,
            a1: Optional[float] = None) -> GreedyTrace:
    trace = run_wga(f, D, m, 1.0, 1.0, EXACT, a1=a1)
    trace.algorithm = "pga"
    return trace


def run_oga(f: Element, D: Dictionary, m: int) -> GreedyTrace:
    """Orthogonal greedy algorithm.

    The residual after each step is f minus its orthogonal projection onto
    the span of all atoms selected so far. The span is kept as an orthonormal
    basis built by Gram-Schmidt with one reorthogonalization pass; the squared
    length of a new atom's orthogonal component is the pivot its Cholesky
    factorization of the Gram matrix would produce. A pivot below 1e-12, or
    re-selection of an active atom, marks the step degenerate and ends the run.
    """
    _check_hilbert(f, D)
    if m < 0:
        raise ValueError("number of steps must be nonnegative")
    fvec = f.coeffs
    x = fvec.copy()
    a_prev = float(x @ x)
    stop = (STOP_FACTOR * np.sqrt(a_prev)) ** 2
    basis = np.zeros((0, f.dim))
    active = set()
    records = []
    done = False
    for step in range(1, m + 1):
        rn = float(np.sqrt(a_prev))
        if done or a_prev <= stop:
            records.append(_pad(step, rn, None))
            continue
        sel = select_weak(D.scores(x), 1.0, EXACT)
        i = sel.atom_index
        if i in active:
            records.append(IterationRecord(step, i, sel.orientation, sel.value,
                                           sel.sup_value, 0.0, rn, None, None, True))
            done = True
            continue
        g = D.atoms[i]
        v = g - basis.T @ (basis @ g)
        v -= basis.T @ (basis @ v)
        pivot = float(v @ v)
        if pivot < PIVOT_TOL:
            records.append(IterationRecord(step, i, sel.orientation, sel.value,
                                           sel.sup_value, 0.0, rn, None, None, True))
            done = True
            continue
        basis = np.vstack([basis, v / np.sqrt(pivot)])
        active.add(i)
        x = fvec - basis.T @ (basis @ fvec)
        x -= basis.T @ (basis @ x)
        a_prev = float(x @ x)
        records.append(IterationRecord(step, i, sel.orientation, sel.value,
                                       sel.sup_value, 0.0, float(np.sqrt(a_prev))))
    return GreedyTrace("oga", f, {}, records, Element(x, f.space))


def oga_orthogonality_defect(trace: GreedyTrace, D: Dictionary) -> float:
    """max_j |<f_m, g_j>| / ||f|| over the atoms selected by an OGA run."""
    idx = sorted({r.atom_index for r in trace.records
                  if not r.is_padding and not r.degenerate})
    if not idx:
        return 0.0
    scale = float(np.linalg.norm(trace.f.coeffs))
    return float(np.max(np.abs(D.atoms[idx] @ trace.residual.coeffs)) / scale)


def energy_identity_check(trace: GreedyTrace, eps: float = 1e-300) -> float:
    """Largest relative defect of ||f_m||^2 = ||f_{m-1}||^2 - b(2-b) y_m^2."""
    if trace.algorithm not in ("wga", "pga"):
        raise ValueError(f"energy identity does not apply to {trace.algorithm!r} traces")
    b = trace.params["b"]
    a = trace.residual_norms ** 2
    worst = 0.0
    for k, r in enumerate(trace.records, start=1):
        if r.is_padding:
            continue
        predicted = a[k - 1] - b * (2.0 - b) * r.value ** 2
        worst = max(worst, abs(a[k] - predicted) / max(a[k - 1], eps))
    return worst
