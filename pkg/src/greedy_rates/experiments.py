"""Lower-bound constructions and bound-domination sweeps.

Every experiment returns an :class:`ExperimentReport`. A report passes iff
each asserted :class:`RatioPoint` lies inside its bracket (1e-9 slack) and
every named scalar check is within its limit. Sweeps over random inputs
store, for each (m, alpha), the largest ratio seen across trials: the bound
does not depend on the trial, so the worst trial decides.
"""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from . import bounds
from .banach import RD, STAR, DgaParams, residual_decrease_check, run_dga
from .dictionaries import EXACT, MIN_INDEX, SEEDED, Dictionary
from .hilbert import energy_identity_check, oga_orthogonality_defect, run_oga, run_wga
from .oracles import monotone_coefficient_bound, sigma_m_basis, trig_lacunary_demo
from .spaces import Element, SpaceSpec, lq_norm, norm
from .trace import fmt_float

SLACK = 1e-9
ALPHA_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)
REPORT_COLUMNS = ("experiment_id", "m", "alpha", "empirical", "lower", "upper", "pass")


@dataclass
class RatioPoint:
    m: int
    alpha: float
    empirical: float
    upper: Optional[float] = None
    lower: Optional[float] = None
    asserted: bool = True

    @property
    def passed(self) -> bool:
        if not self.asserted:
            return True
        ok = self.empirical >= 0
        if self.upper is not None:
            ok = ok and self.empirical <= self.upper + SLACK
        if self.lower is not None:
            ok = ok and self.empirical >= self.lower - SLACK
        return ok


@dataclass
class Check:
    """A scalar diagnostic that must not exceed ``limit`` (or, with
    ``at_least``, must not fall below it)."""

    value: float
    limit: float
    at_least: bool = False

    @property
    def passed(self) -> bool:
        if math.isnan(self.value):
            return False
        return self.value >= self.limit if self.at_least else self.value <= self.limit


@dataclass
class ExperimentReport:
    experiment_id: str
    parameters: dict
    points: list = field(default_factory=list)
    checks: dict = field(default_factory=dict)
    runtime: float = 0.0

    @property
    def passed(self) -> bool:
        return (all(p.passed for p in self.points)
                and all(c.passed for c in self.checks.values()))

    def failures(self) -> list:
        out = [f"{self.experiment_id}: m={p.m} alpha={p.alpha:g} ratio={p.empirical:.17g} "
               f"outside [{p.lower}, {p.upper}]" for p in self.points if not p.passed]
        out += [f"{self.experiment_id}: check {k} = {c.value:.17g} "
                f"{'<' if c.at_least else '>'} {c.limit:g}"
                for k, c in self.checks.items() if not c.passed]
        return out

    def to_dict(self, timing: bool = False) -> dict:
        d = {"experiment_id": self.experiment_id, "parameters": self.parameters,
             "points": [asdict(p) for p in self.points],
             "checks": {k: asdict(c) for k, c in self.checks.items()},
             "pass": self.passed}
        if timing:
            d["runtime"] = self.runtime
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentReport":
        return cls(d["experiment_id"], d["parameters"],
                   [RatioPoint(**p) for p in d["points"]],
                   {k: Check(**c) for k, c in d["checks"].items()},
                   d.get("runtime", 0.0))

    def csv_rows(self):
        for p in self.points:
            yield [self.experiment_id, p.m, fmt_float(p.alpha), fmt_float(p.empirical),
                   fmt_float(p.lower), fmt_float(p.upper), int(p.passed)]


def reports_to_csv(reports: Sequence[ExperimentReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_COLUMNS)
    for r in reports:
        w.writerows(r.csv_rows())
    return buf.getvalue()


def ratio(f: Element, residual: Element, a1: float, alpha: float) -> float:
    """||residual|| / (||f||^(1-alpha) a1^alpha)."""
    nf = norm(f)
    if nf == 0:
        raise ValueError("ratio is undefined for f = 0")
    if a1 < nf * (1.0 - SLACK) - SLACK:
        raise ValueError(f"A_1 norm {a1} is below the norm {nf}")
    return norm(residual) / (nf ** (1.0 - alpha) * a1 ** alpha)


def _ratios(norms: np.ndarray, a1: float, alpha: float) -> np.ndarray:
    return norms / (norms[0] ** (1.0 - alpha) * a1 ** alpha)


def _timed(fn: Callable[..., ExperimentReport]):
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        rep = fn(*args, **kwargs)
        rep.runtime = time.perf_counter() - start
        return rep
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _alpha_grid(alpha0: float, n: int = 4) -> list:
    return [alpha0 * k / n for k in range(n + 1)]


def random_coefficients(rng: np.random.Generator, n: int) -> np.ndarray:
    """Random sparse sign pattern with magnitudes uniform on [-1, 1]; half
    the draws are rescaled to unit l_1 norm."""
    while True:
        k = int(rng.integers(1, n + 1))
        x = np.zeros(n)
        x[rng.choice(n, size=k, replace=False)] = rng.uniform(-1.0, 1.0, size=k)
        if np.any(x):
            break
    if rng.random() < 0.5:
        x /= np.sum(np.abs(x))
    return x


def random_orthonormal(rng: np.random.Generator, n: int) -> np.ndarray:
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    return (Q * np.sign(np.diag(R))).T


def _max_into(table: dict, key, value):
    if key not in table or value > table[key]:
        table[key] = value


# -- Hilbert lower-bound constructions ---------------------------------------


def construction_I_size(b: float, m: int) -> int:
    """m' = floor(2 b m) + 1, with b read as the decimal it was written as."""
    return math.floor(2 * Fraction(b).limit_denominator(10 ** 9) * m) + 1


@_timed
def construction_I(b: float, m: int, alphas: Sequence[float] = ALPHA_GRID) -> ExperimentReport:
    """WGA(1, b), b <= 1/4, on f = e_1 + ... + e_m' with m' = floor(2bm) + 1."""
    if not (0.0 < b <= 0.25):
        raise ValueError(f"construction I needs 0 < b <= 1/4, got {b}")
    mp = construction_I_size(b, m)
    space = SpaceSpec.hilbert()
    f = Element(np.ones(mp), space)
    trace = run_wga(f, Dictionary.standard_basis(mp, space), m, 1.0, b, EXACT, a1=float(mp))
    c = trace.residual.coeffs
    floor_coeff = 1.0 - (m / mp + 1.0) * b
    alpha0 = bounds.alpha0_hilbert(1.0, b)
    rep = ExperimentReport("construction_I", {"b": b, "m": m, "m_prime": mp})
    rep.checks["min_coefficient"] = Check(float(c.min()), 0.25, at_least=True)
    rep.checks["min_coefficient_minus_floor"] = Check(float(c.min()) - floor_coeff,
                                                      -1e-12, at_least=True)
    rep.checks["energy_defect"] = Check(energy_identity_check(trace), 1e-9)
    for a in alphas:
        emp = ratio(f, trace.residual, float(mp), a)
        upper = bounds.wga_alpha_bound(m, 1.0, b, a) if a <= alpha0 else None
        rep.points.append(RatioPoint(m, a, emp, upper, mp ** (-a / 2.0) / 4.0))
    return rep


@_timed
def construction_II(b: float, m: int, alphas: Sequence[float] = ALPHA_GRID) -> ExperimentReport:
    """WGA(1, b), 1/4 < b <= 1, on f = e_1 + ... + e_2m."""
    if not (0.25 < b <= 1.0):
        raise ValueError(f"construction II needs 1/4 < b <= 1, got {b}")
    n = 2 * m
    space = SpaceSpec.hilbert()
    f = Element(np.ones(n), space)
    trace = run_wga(f, Dictionary.standard_basis(n, space), m, 1.0, b, EXACT, a1=float(n))
    picked = [r.atom_index for r in trace.records]
    c = trace.residual.coeffs
    expected = np.ones(n)
    expected[picked] = 1.0 - b
    alpha0 = bounds.alpha0_hilbert(1.0, b)
    rep = ExperimentReport("construction_II", {"b": b, "m": m})
    rep.checks["distinct_touched"] = Check(float(len(set(picked))), float(m), at_least=True)
    rep.checks["coefficient_pattern_defect"] = Check(float(np.max(np.abs(c - expected))), 0.0)
    rep.checks["residual_over_sqrt_m"] = Check(norm(trace.residual) / math.sqrt(m),
                                               1.0 - 1e-12, at_least=True)
    rep.checks["energy_defect"] = Check(energy_identity_check(trace), 1e-9)
    for a in alphas:
        emp = ratio(f, trace.residual, float(n), a)
        upper = bounds.wga_alpha_bound(m, 1.0, b, a) if a <= alpha0 else None
        rep.points.append(RatioPoint(m, a, emp, upper, 2 ** -0.5 * n ** (-a / 2.0)))
    if b == 1.0:
        emp = ratio(f, trace.residual, float(n), 1.0)
        rep.checks["equality_defect"] = Check(abs(emp - 2 ** -0.5 * n ** -0.5), 1e-12)
    return rep


# -- upper-bound sweeps -------------------------------------------------------


@_timed
def wga_upper_sweep(t: float, b: float, dims: Sequence[int], m_max: int, trials: int,
                    mode: str = EXACT, seed: int = 0,
                    alphas: Optional[Sequence[float]] = None) -> ExperimentReport:
    """WGA(t, b) on random f over the standard basis, where A_1 = l_1.

    Asserts the alpha-bound at alpha0 and below at every m, the energy
    identity, the selection lower bound y_m >= t a_{m-1}/B_{m-1}, and the
    envelope ||f_m||_1 <= B_m. Ratios for alpha above alpha0 are recorded
    but not asserted.
    """
    rng = np.random.default_rng(seed)
    alpha0 = bounds.alpha0_hilbert(t, b)
    alphas = list(alphas) if alphas is not None else _alpha_grid(alpha0)
    extra = [a for a in (0.5, 1.0) if a > alpha0 + 1e-12]
    space = SpaceSpec.hilbert()
    worst = {}
    energy = selection_gap = envelope_gap = 0.0
    for trial in range(trials):
        n = int(rng.choice(dims))
        f = Element(random_coefficients(rng, n), space)
        a1 = float(np.sum(np.abs(f.coeffs)))
        D = Dictionary.standard_basis(n, space)
        trace = run_wga(f, D, m_max, t, b, mode, seed=int(rng.integers(2 ** 31)), a1=a1)
        energy = max(energy, energy_identity_check(trace))
        norms = trace.residual_norms
        B = trace.envelopes
        for k, r in enumerate(trace.records, start=1):
            if r.is_padding:
                continue
            selection_gap = max(selection_gap, t * norms[k - 1] ** 2 / B[k - 1] - r.value)
        envelope_gap = max(envelope_gap, float(np.sum(np.abs(trace.residual.coeffs))) - B[-1])
        for a in alphas + extra:
            for k, v in enumerate(_ratios(norms, a1, a)):
                _max_into(worst, (k, a), float(v))
    rep = ExperimentReport("wga_upper", {"t": t, "b": b, "dims": list(dims), "m_max": m_max,
                                         "trials": trials, "mode": mode, "seed": seed,
                                         "alpha0": alpha0})
    for (k, a), v in sorted(worst.items()):
        asserted = a <= alpha0 + 1e-12
        upper = bounds.wga_alpha_bound(k, t, b, min(a, alpha0)) if asserted else None
        rep.points.append(RatioPoint(k, a, v, upper, None, asserted))
    rep.checks["energy_defect"] = Check(energy, 1e-9)
    rep.checks["selection_bound_gap"] = Check(selection_gap, SLACK)
    rep.checks["envelope_gap"] = Check(envelope_gap, SLACK)
    return rep


def random_convex_instance(rng: np.random.Generator, n: int, redundant: bool):
    """A random dictionary in R^n and a random convex combination of +-atoms.

    Returns (D, f, a1) where a1 = sum of weights = 1 bounds ||f||_A1 above.
    """
    space = SpaceSpec.hilbert()
    atoms = random_orthonormal(rng, n)
    if redundant:
        extra = rng.standard_normal((int(rng.integers(1, n + 1)), n))
        extra /= np.linalg.norm(extra, axis=1, keepdims=True)
        atoms = np.vstack([atoms, extra])
    D = Dictionary(atoms, space)
    k = int(rng.integers(1, len(D) + 1))
    idx = rng.choice(len(D), size=k, replace=False)
    w = rng.dirichlet(np.ones(k))
    signs = rng.choice([-1.0, 1.0], size=k)
    f = Element((w * signs) @ D.atoms[idx], space)
    return D, f, float(np.sum(w))


@_timed
def oga_upper_sweep(dims: Sequence[int], m_max: int, trials: int, seed: int = 0,
                    alphas: Sequence[float] = (0.25, 0.5, 0.75, 1.0),
                    lower_m: Sequence[int] = (4, 16)) -> ExperimentReport:
    """OGA on random convex combinations of orthonormal and redundant atoms,
    against m^(-alpha/2) ||f||^(1-alpha) a1^alpha. The lower side reuses
    construction II with b = 1 run through the OGA, where it coincides with
    the PGA."""
    rng = np.random.default_rng(seed)
    worst = {}
    ortho = 0.0
    for trial in range(trials):
        n = int(rng.choice(dims))
        D, f, a1 = random_convex_instance(rng, n, redundant=bool(trial % 2))
        if f.is_zero():
            continue
        trace = run_oga(f, D, m_max)
        ortho = max(ortho, oga_orthogonality_defect(trace, D))
        norms = trace.residual_norms
        for a in alphas:
            for k, v in enumerate(_ratios(norms, a1, a)[1:], start=1):
                _max_into(worst, (k, a), float(v))
    rep = ExperimentReport("oga_upper", {"dims": list(dims), "m_max": m_max,
                                         "trials": trials, "seed": seed})
    for (k, a), v in sorted(worst.items()):
        rep.points.append(RatioPoint(k, a, v, bounds.oga_alpha_bound(k, a)))
    for m in lower_m:
        n = 2 * m
        space = SpaceSpec.hilbert()
        f = Element(np.ones(n), space)
        trace = run_oga(f, Dictionary.standard_basis(n, space), m)
        for a in alphas:
            emp = ratio(f, trace.residual, float(n), a)
            rep.points.append(RatioPoint(m, a, emp, bounds.oga_alpha_bound(m, a),
                                         2 ** -0.5 * n ** (-a / 2.0)))
    rep.checks["orthogonality_defect"] = Check(ortho, 1e-8)
    return rep


@_timed
def dga_upper_sweep(q: float, gamma: Optional[float], t: float, b: float, variant: str,
                    dims: Sequence[int], m_max: int, trials: int, seed: int = 0,
                    mode: str = EXACT) -> ExperimentReport:
    """DGA on random f over the standard basis of l_q, 1 < q <= 2.

    Asserts the alpha-bound at alpha0 and alpha0/2 and every per-step
    relation of the convergence argument: the decrease inequality, norm
    monotonicity, the l_1 envelope, r_D >= ||f_{m-1}||/B_{m-1}, the
    nonincreasing product ||f_m|| B_m^{t(1-b)}, and the step equation balance.
    """
    if not (1.0 < q <= 2.0):
        raise ValueError(f"q must lie in (1, 2], got {q}")
    space = SpaceSpec.lq(q, gamma)
    gamma = space.majorant_gamma
    params = DgaParams.for_space(space, t, b, variant)
    rng = np.random.default_rng(seed)
    alpha0 = bounds.alpha0_banach(t, b)
    alphas = [alpha0, alpha0 / 2.0]
    s = t * (1.0 - b)
    worst = {}
    decrease = monotone = envelope = rd_gap = lyap = balance = -np.inf
    for trial in range(trials):
        n = int(rng.choice(dims))
        f = Element(random_coefficients(rng, n), space)
        a1 = float(np.sum(np.abs(f.coeffs)))
        D = Dictionary.standard_basis(n, space)
        trace = run_dga(f, D, m_max, params, mode, seed=int(rng.integers(2 ** 31)), a1=a1)
        decrease = max(decrease, residual_decrease_check(trace))
        norms = trace.residual_norms
        B = trace.envelopes
        monotone = max(monotone, float(np.max(np.diff(norms), initial=-np.inf)))
        envelope = max(envelope, float(np.sum(np.abs(trace.residual.coeffs))) - B[-1])
        prod = norms * B ** s
        lyap = max(lyap, float(np.max((prod[1:] - prod[:-1]) / prod[:-1], initial=-np.inf)))
        for k, r in enumerate(trace.records, start=1):
            if r.is_padding:
                continue
            rd_gap = max(rd_gap, norms[k - 1] / B[k - 1] - r.r_d)
            drive, t_eff = (r.r_d, t) if variant == RD else (r.dual_value, 1.0)
            lhs = norms[k - 1] * gamma * (r.value / norms[k - 1]) ** params.power
            rhs = 0.5 * t_eff * b * r.value * drive
            balance = max(balance, abs(lhs - rhs) / rhs)
        for a in alphas:
            for k, v in enumerate(_ratios(norms, a1, a)):
                _max_into(worst, (k, a), float(v))
    rep = ExperimentReport("dga_upper", {"q": q, "gamma": gamma, "t": t, "b": b,
                                         "variant": variant, "dims": list(dims),
                                         "m_max": m_max, "trials": trials, "seed": seed,
                                         "mode": mode, "alpha0": alpha0})
    for (k, a), v in sorted(worst.items()):
        upper = bounds.dga_alpha_bound(k, t, b, params.power, gamma, a)
        rep.points.append(RatioPoint(k, a, v, upper))
    rep.checks["decrease_defect"] = Check(decrease, SLACK)
    rep.checks["norm_increase"] = Check(monotone, SLACK)
    rep.checks["envelope_gap"] = Check(envelope, SLACK)
    rep.checks["r_D_gap"] = Check(rd_gap, SLACK)
    rep.checks["lyapunov_increase"] = Check(lyap, SLACK)
    rep.checks["step_equation_residual"] = Check(max(balance, 0.0), 1e-10)
    if q == 2.0 and gamma == 0.5:
        # with mu(u) = u^2/2 the constant is (1 - b) b and the rate (1 + m c t^2)^(-alpha/2)
        m = max(m_max, 1)
        hilbert_form = (1.0 + m * (1.0 - b) * b * t * t) ** (-alpha0 / 2.0)
        rep.checks["hilbert_form_defect"] = Check(
            abs(hilbert_form - bounds.dga_alpha_bound(m, t, b, 2.0, 0.5, alpha0)), 1e-12)
    return rep


@_timed
def hilbert_crosscheck(trials: int, dims: Sequence[int] = (4, 8, 16, 32), m_max: int = 40,
                       bs: Sequence[float] = (0.25, 0.5, 0.75), seed: int = 0) -> ExperimentReport:
    """DGA(1, b, u^2/2)* against WGA(1, b) on random orthonormal dictionaries:
    same atoms at every step, coefficients c_m = b y_m."""
    rng = np.random.default_rng(seed)
    space = SpaceSpec.hilbert()
    mismatches = 0
    coeff_gap = 0.0
    for _ in range(trials):
        n = int(rng.choice(dims))
        b = float(rng.choice(bs))
        D = Dictionary(random_orthonormal(rng, n), space)
        f = Element(rng.standard_normal(n), space)
        w = run_wga(f, D, m_max, 1.0, b)
        d = run_dga(f, D, m_max, DgaParams.for_space(space, 1.0, b, STAR))
        if w.selections != d.selections:
            mismatches += 1
        for rw, rd in zip(w.records, d.records):
            coeff_gap = max(coeff_gap, abs(rw.coeff - rd.coeff))
    rep = ExperimentReport("hilbert_crosscheck", {"trials": trials, "dims": list(dims),
                                                  "m_max": m_max, "bs": list(bs), "seed": seed})
    rep.checks["selection_mismatches"] = Check(float(mismatches), 0.0)
    rep.checks["coefficient_gap"] = Check(coeff_gap, 1e-10)
    return rep


# -- best m-term sharpness ---------------------------------------------------


@_timed
def lq_lower_bound_experiment(q: float, m_list: Sequence[int],
                              alphas: Sequence[float] = ALPHA_GRID) -> ExperimentReport:
    """sigma_m of f = e_1 + ... + e_2m in l_q against (1/2) m^(-alpha/p)."""
    if not (1.0 < q <= 2.0):
        raise ValueError(f"q must lie in (1, 2], got {q}")
    space = SpaceSpec.lq(q)
    p = space.dual_exponent
    rep = ExperimentReport(f"lq_lower_q{q:g}", {"q": q, "m_list": list(m_list)})
    eq_defect = 0.0
    for m in m_list:
        f = Element(np.ones(2 * m), space)
        sig = sigma_m_basis(f, m).value
        nf, a1 = norm(f), 2.0 * m
        for a in alphas:
            emp = sig / (nf ** (1.0 - a) * a1 ** a)
            rep.points.append(RatioPoint(m, a, emp, None, 0.5 * m ** (-a / p)))
        if q == 2.0:
            eq_defect = max(eq_defect, abs(sig / a1 - 0.5 * m ** -0.5))
    if q == 2.0:
        rep.checks["equality_defect"] = Check(eq_defect, 1e-12)
    return rep


def random_monotone(rng: np.random.Generator, n: int) -> np.ndarray:
    kind = int(rng.integers(3))
    if kind == 0:
        c = rng.uniform(0.0, 1.0, n)
    elif kind == 1:
        c = np.arange(1, n + 1) ** -rng.uniform(0.0, 2.0)
    else:
        c = rng.exponential(1.0, n) ** 3
    c = np.sort(c)[::-1]
    if not np.any(c):
        c[0] = 1.0
    return c


@_timed
def monotone_upper_experiment(q: float, trials: int, max_dim: int = 64, seed: int = 0,
                              n_alpha: int = 5) -> ExperimentReport:
    """sigma_m ratio of random nonincreasing f in l_q, q > 2, against m^(-alpha/p)
    for alpha on a grid of [1/q, 1]."""
    space = SpaceSpec.lq(q)
    p = space.dual_exponent
    alphas = list(np.linspace(1.0 / q, 1.0, n_alpha))
    rng = np.random.default_rng(seed)
    worst = {}
    oracle_failures = 0
    for _ in range(trials):
        n = int(rng.integers(2, max_dim + 1))
        f = Element(random_monotone(rng, n), space)
        nf, l1 = norm(f), float(np.sum(f.coeffs))
        for m in range(1, n + 1):
            sig = sigma_m_basis(f, m).value
            for a in alphas:
                _max_into(worst, (m, a), sig / (nf ** (1.0 - a) * l1 ** a))
        try:
            monotone_coefficient_bound(f, int(rng.integers(1, n + 1)), float(rng.choice(alphas)))
        except AssertionError:
            oracle_failures += 1
    rep = ExperimentReport(f"monotone_upper_q{q:g}", {"q": q, "trials": trials,
                                                      "max_dim": max_dim, "seed": seed})
    for (m, a), v in sorted(worst.items()):
        rep.points.append(RatioPoint(m, float(a), v, m ** (-a / p)))
    rep.checks["oracle_bound_failures"] = Check(float(oracle_failures), 0.0)
    return rep


# -- lemma property suites -----------------------------------------------------


def random_hl1_sequence(rng: np.random.Generator, max_len: int = 60):
    C1 = float(10.0 ** rng.uniform(-2, 1))
    C2 = float(rng.uniform(0.01, 1.0)) / C1
    xs = [C1 * float(rng.uniform(0.0, 1.0))]
    for _ in range(int(rng.integers(1, max_len))):
        x = xs[-1]
        xs.append(x * (1.0 - x * C2) * float(rng.uniform(0.5, 1.0)))
    return np.array(xs), C1, C2


@_timed
def hl1_property(instances: int, seed: int = 0) -> ExperimentReport:
    rng = np.random.default_rng(seed)
    violations = 0
    for _ in range(instances):
        xs, C1, C2 = random_hl1_sequence(rng)
        if not bounds.check_hl1_recursion(xs, C1, C2):
            violations += 1
    rep = ExperimentReport("hl1_property", {"instances": instances, "seed": seed})
    rep.checks["violations"] = Check(float(violations), 0.0)
    return rep


@_timed
def concavity_property(instances: int, seed: int = 0) -> ExperimentReport:
    rng = np.random.default_rng(seed)
    violations = 0
    for _ in range(instances):
        a = float(rng.uniform(1e-3, 10.0))
        x = float(rng.uniform(max(-10.0, -a), 1.0))
        if x >= 1.0:
            continue
        if not bounds.check_concavity_inequality(x, a):
            violations += 1
    rep = ExperimentReport("concavity_property", {"instances": instances, "seed": seed})
    rep.checks["violations"] = Check(float(violations), 0.0)
    return rep


@_timed
def trig_demo(ms: Sequence[int] = (2, 3), qs: Sequence[float] = (3.0, 4.0)) -> ExperimentReport:
    """Lacunary cosine sums: quadrature L_2 norm against Parseval and L_q >= L_2
    in the normalized measure. The ratios are recorded, not asserted."""
    rep = ExperimentReport("trig_demo", {"ms": list(ms), "qs": list(qs)})
    parseval = 0.0
    domination = np.inf
    for m in ms:
        for q in qs:
            res = trig_lacunary_demo(m, q)
            parseval = max(parseval, abs(res.l2_norm - res.l2_exact))
            if not math.isfinite(res.lq_norm):
                domination = -np.inf
            domination = min(domination, res.lq_norm_normalized - res.l2_norm_normalized)
            for a, v in res.ratios.items():
                rep.points.append(RatioPoint(m, a, v, None, None, asserted=False))
    rep.checks["parseval_defect"] = Check(parseval, 1e-6)
    rep.checks["lq_minus_l2"] = Check(float(domination), -1e-12, at_least=True)
    return rep


# -- suite --------------------------------------------------------------------


@dataclass
class SuiteConfig:
    seed: int = 0
    suite: Sequence[str] = ("all",)
    threads: int = 1
    scale: float = 1.0


def _suite(seed: int, scale: float) -> list:
    def n(x):
        return max(1, int(round(x * scale)))

    jobs = []
    for b in (0.05, 0.1, 0.25):
        for m in (10, 100, 1000):
            jobs.append(("construction_I", construction_I, (b, m), {}))
    for b in (0.3, 0.5, 1.0):
        for m in (8, 64, 512):
            jobs.append(("construction_II", construction_II, (b, m), {}))
    modes = (EXACT, MIN_INDEX, SEEDED)
    k = 0
    for t in (0.5, 1.0):
        for b in (0.25, 0.5, 1.0):
            jobs.append(("wga_upper", wga_upper_sweep,
                         (t, b, (4, 16, 64), 200, n(84)),
                         {"mode": modes[k % 3], "seed": seed + k}))
            k += 1
    jobs.append(("oga_upper", oga_upper_sweep, ((4, 8, 16, 32), 64, n(200)), {"seed": seed}))
    for q in (1.25, 1.5, 2.0):
        for t in (0.5, 1.0):
            for b in (0.25, 0.5):
                for variant in (RD, STAR):
                    jobs.append(("dga_upper", dga_upper_sweep,
                                 (q, None, t, b, variant, (4, 16, 64), 200, n(100)),
                                 {"seed": seed + k}))
                    k += 1
    jobs.append(("hilbert_crosscheck", hilbert_crosscheck, (n(100),), {"seed": seed}))
    for q in (1.25, 1.5, 2.0):
        jobs.append(("lq_lower", lq_lower_bound_experiment, (q, range(1, 65)), {}))
    for q in (2.5, 3.0, 4.0):
        jobs.append(("monotone_upper", monotone_upper_experiment, (q, n(500)), {"seed": seed}))
    jobs.append(("hl1_property", hl1_property, (n(10_000),), {"seed": seed}))
    jobs.append(("concavity_property", concavity_property, (n(10_000),), {"seed": seed}))
    jobs.append(("trig_demo", trig_demo, (), {}))
    return jobs


SUITE_NAMES = ("construction_I", "construction_II", "wga_upper", "oga_upper", "dga_upper",
               "hilbert_crosscheck", "lq_lower", "monotone_upper", "hl1_property",
               "concavity_property", "trig_demo")


def run_all(config: Optional[SuiteConfig] = None) -> list:
    """Run the selected experiments; reports come back in declaration order
    regardless of ``threads``."""
    config = config or SuiteConfig()
    wanted = set(config.suite)
    unknown = wanted - set(SUITE_NAMES) - {"all"}
    if unknown:
        raise ValueError(f"unknown experiments: {sorted(unknown)}")
    jobs = [j for j in _suite(config.seed, config.scale) if "all" in wanted or j[0] in wanted]
    if config.threads <= 1:
        return [fn(*args, **kw) for _, fn, args, kw in jobs]
    with ThreadPoolExecutor(max_workers=config.threads) as pool:
        futures = [pool.submit(fn, *args, **kw) for _, fn, args, kw in jobs]
        return [fut.result() for fut in futures]
