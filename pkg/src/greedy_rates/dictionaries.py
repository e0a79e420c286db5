"""Symmetric dictionaries of unit atoms.

A dictionary stores one canonical representative per pair {g, -g}; the
negatives are implied. Selection works on per-atom scores s_i (the value of
a functional at the canonical atom); the oriented score of -g_i is -s_i.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import linprog

from .spaces import REL_TOL, Element, SpaceSpec, lq_norm, norm, norming_functional

STANDARD_BASIS = "standard_basis"
FINITE_ATOMS = "finite_atoms"

EXACT = "exact"
MIN_INDEX = "min-index"
SEEDED = "seeded"
SELECTION_MODES = (EXACT, MIN_INDEX, SEEDED)

LP_MAX_ATOMS = 24
LP_MAX_DIM = 12


class Dictionary:
    """Finite symmetric dictionary ``{+-g_i}`` in a finite-dimensional space.

    Parameters
    ----------
    atoms : array_like, shape (N, n)
        Canonical atoms as rows. Ignored for the standard basis.
    space : SpaceSpec
    kind : {"standard_basis", "finite_atoms"}
    dim : int, optional
        Needed only for the standard basis when ``atoms`` is None.
    """

    def __init__(self, atoms=None, space: Optional[SpaceSpec] = None,
                 kind: str = FINITE_ATOMS, dim: Optional[int] = None):
        self.space = space if space is not None else SpaceSpec.hilbert()
        self.kind = kind
        if kind == STANDARD_BASIS:
            if dim is None:
                if atoms is None:
                    raise ValueError("standard basis needs a dimension")
                dim = np.asarray(atoms).shape[1]
            self.atoms = np.eye(dim)
        elif kind == FINITE_ATOMS:
            self.atoms = np.array(atoms, dtype=float, ndmin=2)
            self._validate()
        else:
            raise ValueError(f"unknown dictionary kind {kind!r}")
        self.atoms.setflags(write=False)

    @classmethod
    def standard_basis(cls, dim: int, space: Optional[SpaceSpec] = None) -> "Dictionary":
        return cls(None, space, STANDARD_BASIS, dim)

    def _validate(self):
        if self.atoms.shape[0] == 0:
            raise ValueError("dictionary has no atoms")
        q = self.space.q
        for i, g in enumerate(self.atoms):
            if abs(lq_norm(g, q) - 1.0) > REL_TOL:
                raise ValueError(f"atom {i} does not have unit norm")
        for i, j in itertools.combinations(range(len(self.atoms)), 2):
            gi, gj = self.atoms[i], self.atoms[j]
            if np.array_equal(gi, gj) or np.array_equal(gi, -gj):
                raise ValueError(f"atoms {i} and {j} coincide up to sign")

    def __len__(self):
        return self.atoms.shape[0]

    @property
    def dim(self) -> int:
        return self.atoms.shape[1]

    @property
    def is_standard_basis(self) -> bool:
        return self.kind == STANDARD_BASIS

    def atom(self, i: int) -> Element:
        return Element(self.atoms[i], self.space)

    def scores(self, v: np.ndarray) -> np.ndarray:
        """Coordinate dot products <v, g_i> for all canonical atoms."""
        if v.shape[-1] != self.dim:
            raise ValueError(f"dimension mismatch: {v.shape[-1]} vs {self.dim}")
        if self.is_standard_basis:
            return np.array(v, dtype=float)
        return self.atoms @ v

    def to_dict(self) -> dict:
        return {"kind": self.kind, "dimension": self.dim,
                "atoms": self.atoms.tolist(), "space": self.space.to_dict()}

    @classmethod
    def from_dict(cls, d: dict) -> "Dictionary":
        space = SpaceSpec.from_dict(d["space"]) if "space" in d else None
        if d["kind"] == STANDARD_BASIS:
            return cls.standard_basis(int(d["dimension"]), space)
        atoms = np.array(d["atoms"], dtype=float, ndmin=2)
        if atoms.shape[1] != int(d["dimension"]):
            raise ValueError("atom length does not match dimension")
        return cls(atoms, space, d["kind"])

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Dictionary":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class Selection:
    atom_index: int
    orientation: int
    value: float
    sup_value: float

    def to_dict(self) -> dict:
        return {"atom_index": self.atom_index, "orientation": self.orientation,
                "value": self.value, "sup_value": self.sup_value}


def select_weak(scores: Sequence[float], t: float = 1.0, mode: str = EXACT,
                rng: Optional[np.random.Generator] = None) -> Selection:
    """Pick an oriented atom whose score is at least ``t`` times the best.

    ``scores[i]`` is the value at the canonical atom i; the best oriented
    value is ``max |scores|``. Exact returns the maximizer (lowest index,
    then +1 on ties). ``min-index`` returns the lowest-index atom clearing
    the threshold, the least favourable admissible choice under the tie
    rule. ``seeded`` draws uniformly among qualifying atoms using ``rng``.
    """
    s = np.asarray(scores, dtype=float)
    if s.size == 0:
        raise ValueError("cannot select from an empty dictionary")
    if not (0.0 < t <= 1.0):
        raise ValueError(f"weakness t must lie in (0, 1], got {t}")
    mag = np.abs(s)
    i = int(mag.argmax())
    sup = float(mag[i])
    # argmax returns the first nan if there is one
    if not math.isfinite(sup):
        raise ValueError("scores must be finite")
    if mode == EXACT:
        orientation = 1 if s[i] >= 0 else -1
        return Selection(i, orientation, sup, sup)
    threshold = t * sup
    if mode == MIN_INDEX:
        i = int(np.flatnonzero(mag >= threshold)[0])
        orientation = 1 if s[i] >= threshold else -1
    elif mode == SEEDED:
        if rng is None:
            raise ValueError("seeded selection needs a random generator")
        candidates = np.flatnonzero(mag >= threshold)
        i = int(candidates[rng.integers(candidates.size)])
        orientation = 1 if s[i] >= 0 else -1
    else:
        raise ValueError(f"unknown selection mode {mode!r}")
    return Selection(i, orientation, float(orientation * s[i]), sup)


def r_D(f: Element, D: Dictionary) -> float:
    """Best dual correlation sup over +-atoms of F_f(g)."""
    F = norming_functional(f)
    return float(np.max(np.abs(D.scores(F.coeffs))))


def a1_norm_basis(f: Element, D: Optional[Dictionary] = None) -> float:
    """A_1 norm with respect to the symmetrized standard basis: the l_1 norm."""
    if D is not None and not D.is_standard_basis:
        raise ValueError("closed-form A_1 norm needs the standard basis")
    return float(np.sum(np.abs(f.coeffs)))


def a1_norm_small(f: Element, D: Dictionary) -> float:
    """Minimal sum |c_i| over representations f = sum c_i g_i.

    Solved as a linear program in the split variables c = c+ - c-. Returns
    ``math.inf`` when f is outside the span of the atoms.
    """
    if not D.space.is_hilbert:
        raise ValueError("a1_norm_small is restricted to Hilbert dictionaries")
    if len(D) > LP_MAX_ATOMS and D.dim > LP_MAX_DIM:
        raise ValueError(
            f"exact A_1 solve budget exceeded ({len(D)} atoms, dimension {D.dim})")
    if f.dim != D.dim:
        raise ValueError(f"dimension mismatch: {f.dim} vs {D.dim}")
    if f.is_zero():
        return 0.0
    A = D.atoms.T
    n_atoms = A.shape[1]
    # the solver tolerances are absolute, so solve for f / ||f|| and rescale
    scale = norm(f)
    b = f.coeffs / scale
    res = linprog(np.ones(2 * n_atoms), A_eq=np.hstack([A, -A]), b_eq=b,
                  bounds=(0, None), method="highs-ds")
    if res.status == 2:
        return math.inf
    if res.status != 0:
        raise RuntimeError(f"LP solve failed: {res.message}")
    c = res.x[:n_atoms] - res.x[n_atoms:]
    # the LP feasibility tolerance is loose; reject solutions that miss f
    if np.linalg.norm(A @ c - b) > 1e-7:
        return math.inf
    return scale * float(np.sum(np.abs(c)))
