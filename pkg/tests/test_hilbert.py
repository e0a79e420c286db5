import math

import numpy as np
import pytest

from greedy_rates.dictionaries import EXACT, MIN_INDEX, SEEDED, Dictionary, a1_norm_basis
from greedy_rates.experiments import random_convex_instance, random_orthonormal
from greedy_rates.hilbert import (energy_identity_check, oga_orthogonality_defect, run_oga,
                                  run_pga, run_wga)
from greedy_rates.spaces import Element, SpaceSpec
from greedy_rates.trace import GreedyTrace


def hand_wga_basis(f, m, b):
    """Pure-Python WGA(1, b) on the standard basis with lowest-index ties."""
    x = [float(v) for v in f]
    picks = []
    for _ in range(m):
        best = max(range(len(x)), key=lambda i: (abs(x[i]), -i))
        y = abs(x[best])
        if y == 0:
            break
        x[best] -= b * y * (1 if x[best] > 0 else -1)
        picks.append(best)
    return x, picks


def test_wga_example_b1():
    D = Dictionary.standard_basis(4)
    tr = run_wga(Element(np.ones(4)), D, 2, 1.0, 1.0)
    assert tr.selections == [(0, 1), (1, 1)]
    assert tr.residual_norms[-1] == pytest.approx(math.sqrt(2), rel=1e-15)
    assert tr.residual_norms[-1] >= 2 ** 0.5


def test_wga_example_shrinkage():
    D = Dictionary.standard_basis(3)
    f = Element(np.ones(3))
    tr = run_wga(f, D, 4, 1.0, 0.25)
    x, picks = hand_wga_basis(np.ones(3), 4, 0.25)
    np.testing.assert_allclose(tr.residual.coeffs, x, rtol=1e-15)
    np.testing.assert_allclose(tr.residual.coeffs, [0.5625, 0.75, 0.75], rtol=1e-15)
    assert [i for i, _ in tr.selections] == picks == [0, 1, 2, 0]
    assert tr.residual_norms[-1] == pytest.approx(math.sqrt(1.44140625), rel=1e-15)
    assert energy_identity_check(tr) <= 1e-12


def test_wga_zero_input():
    tr = run_wga(Element(np.zeros(3)), Dictionary.standard_basis(3), 5, 0.5, 0.5)
    assert len(tr.records) == 5
    assert all(r.is_padding and r.value == 0 and r.residual_norm == 0 for r in tr.records)
    assert tr.residual.is_zero()


def test_wga_errors():
    D = Dictionary.standard_basis(2)
    f = Element([1.0, 0.0])
    for kw in ({"t": 0.0}, {"t": 1.5}, {"b": 0.0}, {"b": 1.2}, {"mode": "x"}):
        with pytest.raises(ValueError):
            run_wga(f, D, 1, **kw)
    with pytest.raises(ValueError):
        run_wga(f, D, -1)
    s = SpaceSpec.lq(1.5)
    with pytest.raises(ValueError):
        run_wga(Element([1.0, 0.0], s), Dictionary.standard_basis(2, s), 1)
    with pytest.raises(ValueError):
        run_wga(Element([1.0, 0.0, 0.0]), D, 1)


def test_pga_examples():
    D = Dictionary.standard_basis(2)
    tr = run_pga(Element([2.0, 1.0]), D, 1)
    np.testing.assert_array_equal(tr.residual.coeffs, [0.0, 1.0])
    tr = run_pga(Element([1.0, 1.0]), D, 2)
    assert tr.residual.is_zero()


def test_pga_equals_wga():
    rng = np.random.default_rng(4)
    for _ in range(20):
        n = int(rng.integers(2, 10))
        D = Dictionary(random_orthonormal(rng, n) @ random_orthonormal(rng, n))
        f = Element(rng.standard_normal(n))
        a, b = run_pga(f, D, 15), run_wga(f, D, 15, 1.0, 1.0)
        assert a.selections == b.selections
        np.testing.assert_array_equal(a.residual_norms, b.residual_norms)


def test_oga_orthonormal_example():
    D = Dictionary.standard_basis(2)
    tr = run_oga(Element([2.0, 1.0]), D, 2)
    assert tr.residual.is_zero() or np.linalg.norm(tr.residual.coeffs) < 1e-15
    tr1 = run_oga(Element([2.0, 1.0]), D, 1)
    np.testing.assert_allclose(tr1.residual.coeffs, [0.0, 1.0], atol=1e-15)


def test_oga_two_atom_example():
    d = np.array([1.0, 1.0]) / math.sqrt(2)
    D = Dictionary(np.array([[1.0, 0.0], d]))
    f = np.array([1.0, 1.0])
    tr = run_oga(Element(f), D, 1)
    assert tr.selections[0] == (1, 1)
    # hand oracle: projection onto span{d} is <f, d> d = f, so the residual vanishes
    expected = f - (f @ d) * d
    np.testing.assert_allclose(tr.residual.coeffs, expected, atol=1e-15)
    assert abs(tr.residual.coeffs @ d) <= 1e-15


def test_oga_two_atom_two_steps():
    # f = e1 + 2 e2: step 1 takes the diagonal atom, step 2 e1 and spans everything
    d = np.array([1.0, 1.0]) / math.sqrt(2)
    D = Dictionary(np.array([[1.0, 0.0], d]))
    f = np.array([1.0, 2.0])
    tr = run_oga(Element(f), D, 2)
    assert tr.selections[0] == (1, 1)
    G = np.array([[1.0, d[0]], [d[0], 1.0]])
    c = np.linalg.solve(G, D.atoms @ f)
    np.testing.assert_allclose(tr.residual.coeffs, f - D.atoms.T @ c, atol=1e-14)


def test_oga_convex_combination_rate():
    rng = np.random.default_rng(8)
    for trial in range(30):
        n = int(rng.integers(2, 16))
        D, f, _ = random_convex_instance(rng, n, redundant=bool(trial % 2))
        tr = run_oga(f, D, 20)
        norms = tr.residual_norms
        for m in range(1, 21):
            assert norms[m] <= m ** -0.5 + 1e-9
        assert oga_orthogonality_defect(tr, D) <= 1e-8


def test_oga_degenerate_reselection():
    # two nearly parallel atoms: after taking one, the other gives a tiny pivot
    a = np.array([1.0, 0.0])
    b = np.array([1.0, 1e-7])
    b /= np.linalg.norm(b)
    D = Dictionary(np.vstack([a, b]))
    tr = run_oga(Element([1.0, 1e-3]), D, 3)
    assert tr.selections[:2] == [(1, 1), (0, -1)]
    assert not tr.records[0].degenerate
    assert tr.records[1].degenerate and tr.degenerate
    assert tr.records[2].is_padding
    # the run stops instead of dividing by the tiny pivot
    norms = tr.residual_norms
    assert norms[3] == norms[2] == norms[1]


def test_energy_identity_examples():
    D = Dictionary.standard_basis(5)
    tr = run_wga(Element([1.0, 2.0, 3.0, 4.0, 5.0]), D, 12, 1.0, 1.0)
    assert energy_identity_check(tr) <= 1e-12
    a = tr.residual_norms ** 2
    for k, r in enumerate(tr.records, start=1):
        if not r.is_padding:
            assert a[k] == pytest.approx(a[k - 1] - r.value ** 2, abs=1e-12)
    with pytest.raises(ValueError):
        energy_identity_check(run_oga(Element([1.0, 2.0]), Dictionary.standard_basis(2), 1))


@pytest.mark.parametrize("mode", [EXACT, MIN_INDEX, SEEDED])
@pytest.mark.parametrize("t,b", [(0.5, 0.25), (1.0, 0.5), (0.5, 1.0), (1.0, 1.0)])
def test_wga_invariants(mode, t, b):
    rng = np.random.default_rng(17)
    for trial in range(15):
        n = int(rng.integers(1, 20))
        x = rng.standard_normal(n) * rng.exponential(size=n)
        f = Element(x)
        D = Dictionary.standard_basis(n)
        a1 = a1_norm_basis(f)
        tr = run_wga(f, D, 60, t, b, mode, seed=trial, a1=a1)
        norms = tr.residual_norms
        env = tr.envelopes
        assert np.all(np.diff(norms) <= 1e-15 * norms[0])
        assert np.all(np.diff(env) >= 0)
        assert energy_identity_check(tr) <= 1e-9
        assert tr.expansion_defect(D) <= 1e-8
        for k, r in enumerate(tr.records, start=1):
            if r.is_padding:
                continue
            assert r.value >= t * r.sup_value
            assert r.value >= t * norms[k - 1] ** 2 / env[k - 1] - 1e-9
            assert env[k] == env[k - 1] + b * r.value


def test_wga_redundant_expansion():
    rng = np.random.default_rng(3)
    for _ in range(10):
        D, f, _ = random_convex_instance(rng, 8, redundant=True)
        tr = run_wga(f, D, 40, 0.7, 0.6, MIN_INDEX)
        assert tr.expansion_defect(D) <= 1e-8
        assert np.all(np.diff(tr.residual_norms) <= 1e-15)


def test_pga_oga_coincide_on_orthonormal():
    rng = np.random.default_rng(21)
    for _ in range(30):
        n = int(rng.integers(2, 12))
        D = Dictionary(random_orthonormal(rng, n))
        f = Element(rng.standard_normal(n))
        p, o = run_pga(f, D, n), run_oga(f, D, n)
        assert p.selections == o.selections
        np.testing.assert_allclose(p.residual_norms, o.residual_norms, atol=1e-10)


def test_seeded_runs_deterministic():
    rng = np.random.default_rng(0)
    f = Element(rng.standard_normal(10))
    D = Dictionary.standard_basis(10)
    a = run_wga(f, D, 30, 0.3, 0.5, SEEDED, seed=9)
    b = run_wga(f, D, 30, 0.3, 0.5, SEEDED, seed=9)
    assert a.to_json() == b.to_json()


def test_trace_serialization():
    D = Dictionary.standard_basis(3)
    f = Element([1.0, 2.0, 3.0])
    tr = run_wga(f, D, 4, 1.0, 0.5, a1=6.0)
    back = GreedyTrace.from_dict(__import__("json").loads(tr.to_json()))
    assert back.to_json() == tr.to_json()
    lines = tr.to_csv().strip().split("\n")
    assert lines[0] == "m,atom_index,orientation,y_or_c,residual_norm,B_m"
    assert len(lines) == 5
    row = lines[1].split(",")
    assert float(row[3]) == tr.records[0].value and float(row[5]) == tr.records[0].envelope
