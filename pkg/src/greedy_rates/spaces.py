"""Finite-dimensional Hilbert and l_q sequence spaces.

Elements are dense real coefficient vectors tagged with the space they live
in. The Hilbert space is the tagged special case of l_2, so every routine
that works on an l_q element also accepts a Hilbert one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

HILBERT = "hilbert"
LQ = "lq"

REL_TOL = 1e-9


@dataclass(frozen=True)
class SpaceSpec:
    """Ambient space together with a power-type majorant gamma * u**power
    of its modulus of smoothness.

    When the majorant is not given it is filled in from the standard L_p
    estimate: u**q / q for q <= 2 and (q - 1) u**2 / 2 for q >= 2.
    """

    kind: str = HILBERT
    q: float = 2.0
    majorant_gamma: Optional[float] = None
    majorant_power: Optional[float] = None

    def __post_init__(self):
        if self.kind not in (HILBERT, LQ):
            raise ValueError(f"unknown space kind {self.kind!r}")
        q = float(self.q)
        if self.kind == HILBERT:
            q = 2.0
        if not (1.0 < q < math.inf):
            raise ValueError(f"q must lie in (1, inf), got {q}")
        object.__setattr__(self, "q", q)
        gamma, power = default_majorant(q)
        if self.majorant_gamma is None:
            object.__setattr__(self, "majorant_gamma", gamma)
        if self.majorant_power is None:
            object.__setattr__(self, "majorant_power", power)
        if not self.majorant_gamma > 0:
            raise ValueError("majorant_gamma must be positive")
        if not (1.0 < self.majorant_power <= 2.0):
            raise ValueError("majorant_power must lie in (1, 2]")

    @classmethod
    def hilbert(cls) -> "SpaceSpec":
        return cls(HILBERT)

    @classmethod
    def lq(cls, q: float, gamma: Optional[float] = None,
           power: Optional[float] = None) -> "SpaceSpec":
        return cls(LQ, q, gamma, power)

    @property
    def is_hilbert(self) -> bool:
        return self.kind == HILBERT

    @property
    def dual_exponent(self) -> float:
        return self.q / (self.q - 1.0)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "q": self.q,
                "majorant_gamma": self.majorant_gamma,
                "majorant_power": self.majorant_power}

    @classmethod
    def from_dict(cls, d: dict) -> "SpaceSpec":
        return cls(d["kind"], d.get("q", 2.0), d.get("majorant_gamma"),
                   d.get("majorant_power"))


def default_majorant(q: float) -> tuple[float, float]:
    if q <= 2.0:
        return 1.0 / q, q
    return (q - 1.0) / 2.0, 2.0


def _as_vector(x) -> np.ndarray:
    arr = np.array(x, dtype=float).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Element:
    """A point of a space: a finite real vector plus its space."""

    coeffs: np.ndarray
    space: SpaceSpec = field(default_factory=SpaceSpec.hilbert)

    def __post_init__(self):
        arr = _as_vector(self.coeffs)
        if arr.size < 1:
            raise ValueError("an element needs at least one coordinate")
        if not np.all(np.isfinite(arr)):
            raise ValueError("element coordinates must be finite")
        object.__setattr__(self, "coeffs", arr)

    @property
    def dim(self) -> int:
        return self.coeffs.size

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.space == other.space and np.array_equal(self.coeffs, other.coeffs)

    def __len__(self):
        return self.coeffs.size

    def scaled(self, a: float) -> "Element":
        return Element(a * self.coeffs, self.space)

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)


@dataclass(frozen=True, eq=False)
class DualFunctional:
    """Coordinates of a linear functional under the coordinate dot pairing."""

    coeffs: np.ndarray
    space: SpaceSpec = field(default_factory=SpaceSpec.hilbert)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_vector(self.coeffs))

    @property
    def dim(self) -> int:
        return self.coeffs.size


def lq_norm(x: np.ndarray, q: float) -> float:
    """(sum |x_i|**q)**(1/q), rescaled by the largest entry to avoid overflow."""
    if q == 2.0:
        r = float(np.linalg.norm(x))
        # the plain sum of squares under/overflows outside roughly 1e-154..1e154
        if 1e-150 < r < 1e150:
            return r
    x = np.abs(np.asarray(x, dtype=float))
    top = x.max(initial=0.0)
    if top == 0.0:
        return 0.0
    x /= top
    return float(top * np.dot(x, x ** (q - 1.0)) ** (1.0 / q))


def norm(f: Element) -> float:
    return lq_norm(f.coeffs, f.space.q)


def dual_norm(F: DualFunctional) -> float:
    return lq_norm(F.coeffs, F.space.dual_exponent)


def inner(f: Element, g: Element) -> float:
    if not (f.space.is_hilbert and g.space.is_hilbert):
        raise ValueError("inner product is only defined on Hilbert elements")
    if f.dim != g.dim:
        raise ValueError(f"dimension mismatch: {f.dim} vs {g.dim}")
    return float(np.dot(f.coeffs, g.coeffs))


def norming_vector(x: np.ndarray, q: float) -> np.ndarray:
    """Unnormalized norming direction sign(x)|x|**(q-1).

    Dividing by ||x||**(q-1) gives the norming functional. Selection only
    needs the direction, and for q = 2 this is ``x`` itself with no rounding.
    """
    if q == 2.0:
        return x
    return np.sign(x) * np.abs(x) ** (q - 1.0)


def norming_functional(f: Element) -> DualFunctional:
    """The unique F with dual norm 1 and F(f) = ||f||."""
    nrm = norm(f)
    if nrm == 0.0:
        raise ValueError("the zero element has no norming functional")
    q = f.space.q
    if q == 2.0:
        return DualFunctional(f.coeffs / nrm, f.space)
    scaled = f.coeffs / nrm
    return DualFunctional(np.sign(scaled) * np.abs(scaled) ** (q - 1.0), f.space)


def pair(F: DualFunctional, g: Element) -> float:
    if F.dim != g.dim:
        raise ValueError(f"dimension mismatch: {F.dim} vs {g.dim}")
    if F.space != g.space:
        raise ValueError("functional and element belong to different spaces")
    return float(np.dot(F.coeffs, g.coeffs))


def smoothness_majorant(u: float, space: SpaceSpec) -> float:
    if u < 0:
        raise ValueError(f"u must be nonnegative, got {u}")
    return space.majorant_gamma * u ** space.majorant_power


def empirical_modulus(x: Element, y: Element, u: float) -> float:
    """0.5 * (||x + u y|| + ||x - u y||) - 1 for unit x, y."""
    for name, v in (("x", x), ("y", y)):
        if abs(norm(v) - 1.0) > REL_TOL:
            raise ValueError(f"{name} must have unit norm")
    if x.space != y.space or x.dim != y.dim:
        raise ValueError("x and y must share a space and dimension")
    q = x.space.q
    plus = lq_norm(x.coeffs + u * y.coeffs, q)
    minus = lq_norm(x.coeffs - u * y.coeffs, q)
    return 0.5 * (plus + minus) - 1.0
