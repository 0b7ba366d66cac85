#  Copyright 2026 divbound contributors
#
#  Licensed under the Apache License, Version 2.0 (the "License");
#  you may not use this file except in compliance with the License.
#  You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
#  Unless required by applicable law or agreed to in writing, software
#  distributed under the License is distributed on an "AS IS" BASIS,
#  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#  See the License for the specific language governing permissions and
#  limitations under the License.
#

"""
f-generators and f-divergences between finite discrete distributions.

An f-divergence is D_f(P||Q) = sum_i q_i f(p_i / q_i) for a strictly convex
f with f(1) = 0.  Cells where a mass vanishes follow the conventions

    0 f(0/0) := 0
    0 f(a/0) := a * lim_{u->oo} f(u)/u     (the generator's `slope_at_inf`)
    q f(0/q) := q * lim_{t->0+} f(t)       (the generator's `f_at_0`)

and each convention is applied explicitly rather than by letting floating
point infinities propagate, so that 0/0 cells give 0 and never NaN.  All
logarithms are natural.

Examples
--------
    from divbound.fgen import get_generator, binary_pair, symmetrized_divergence

    kl = get_generator("kl")
    P, Q = binary_pair(0.6)
    symmetrized_divergence(kl, P, Q)     # 0.6 * ln 4
"""

# -----------------------------------------------------------------------------
# System Imports
# -----------------------------------------------------------------------------

from typing import Callable, Optional, Tuple, List, Union, Sequence
from dataclasses import dataclass
from types import MappingProxyType
import math

# -----------------------------------------------------------------------------
# Public Imports
# -----------------------------------------------------------------------------

import numpy as np
from scipy.special import xlogy, entr

# -----------------------------------------------------------------------------
# Private Imports
# -----------------------------------------------------------------------------

from .consts import GeneratorName, TOL_MASS
from .errors import ValidationError, AlignmentError, DomainError

# -----------------------------------------------------------------------------
# Exports
# -----------------------------------------------------------------------------

__all__ = [
    "FGenerator",
    "DiscreteDist",
    "f_divergence",
    "symmetrized_divergence",
    "catalog",
    "get_generator",
    "moments",
    "align",
    "binary_pair",
    "triangular_discrimination",
    "kl_divergence",
    "hellinger_squared",
    "js_divergence",
    "chi_squared",
    "total_variation",
    "bhattacharyya",
    "binary_entropy",
    "divergence_terms",
]

# -----------------------------------------------------------------------------
#
#                                 CODE BEGINS
#
# -----------------------------------------------------------------------------

RealFn = Callable[[np.ndarray], np.ndarray]

# test grid over (0,1) U (1,10) used to validate f(1)=0 and f'' > 0
_CONVEXITY_GRID = np.concatenate(
    (np.linspace(0.01, 0.99, 99), np.linspace(1.01, 10.0, 100))
)


@dataclass(frozen=True)
class FGenerator:
    """
    A strictly convex generator f with f(1) = 0, identifying one f-divergence.

    Attributes
    ----------
    name: str
        Catalog name (see GeneratorName) or "custom".

    f, f1, f2:
        The generator and its first and second derivatives; vectorised over
        numpy arrays on (0, oo).

    f_at_0: float
        lim_{t->0+} f(t); may be +inf.

    slope_at_inf: float
        lim_{u->oo} f(u)/u; may be +inf.

    binary_g1, binary_g2:
        Optional closed forms of the first and second derivative of the
        binary divergence g(t).  Catalog generators provide them; when absent
        the binary module derives g' from f and g'' by finite differences.
    """

    name: str
    f: RealFn
    f1: RealFn
    f2: RealFn
    f_at_0: float
    slope_at_inf: float
    binary_g1: Optional[RealFn] = None
    binary_g2: Optional[RealFn] = None

    def __post_init__(self):
        if abs(f_one := float(self.f(np.float64(1.0)))) > TOL_MASS:
            raise ValidationError(f"{self.name}: f(1) = {f_one!r}, expected 0")

        with np.errstate(all="ignore"):
            curvature = np.asarray(self.f2(_CONVEXITY_GRID), dtype=float)

        if not np.all(curvature > 0):
            bad = _CONVEXITY_GRID[~(curvature > 0)][0]
            raise ValidationError(
                f"{self.name}: f'' is not positive at t={bad!r}; "
                "the generator must be strictly convex"
            )

    @property
    def g_at_1(self) -> float:
        """
        The binary divergence at t=1, that is D_f((0,1)||(1,0)), which by the
        zero-mass conventions equals f(0) + lim f(u)/u.
        """
        return self.f_at_0 + self.slope_at_inf

    def __repr__(self) -> str:
        return f"FGenerator({self.name})"


@dataclass(frozen=True, eq=False)
class DiscreteDist:
    """
    A finite discrete distribution: strictly increasing real support points
    each carrying a non-negative probability mass.  Zero-mass points are
    allowed so that two distributions can share one support list.
    """

    support: np.ndarray
    mass: np.ndarray

    def __post_init__(self):
        support = np.array(self.support, dtype=float).reshape(-1)
        mass = np.array(self.mass, dtype=float).reshape(-1)

        if support.size == 0:
            raise ValidationError("empty support")

        if support.shape != mass.shape:
            raise ValidationError(
                f"support has {support.size} points but mass has {mass.size}"
            )

        if not np.all(np.isfinite(support)):
            raise ValidationError("support values must be finite")

        if np.any(np.diff(support) <= 0):
            raise ValidationError("support values must be strictly increasing")

        if not np.all(np.isfinite(mass)) or np.any(mass < 0):
            raise ValidationError("mass values must be finite and non-negative")

        if abs((total := float(mass.sum())) - 1.0) > TOL_MASS:
            raise ValidationError(f"masses sum to {total!r}, expected 1")

        support.flags.writeable = False
        mass.flags.writeable = False
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "mass", mass)

    def __len__(self) -> int:
        return self.support.size

    def __repr__(self) -> str:
        return f"DiscreteDist(support={self.support.tolist()}, mass={self.mass.tolist()})"

    @classmethod
    def point_mass(cls, x: float) -> "DiscreteDist":
        return cls(support=[x], mass=[1.0])

    @classmethod
    def from_json(cls, obj: dict) -> "DiscreteDist":
        """
        Build from the JSON form {"support": [...], "mass": [...]}.  The points
        are sorted into canonical order, carrying their masses along.
        """
        try:
            support = np.asarray(obj["support"], dtype=float).reshape(-1)
            mass = np.asarray(obj["mass"], dtype=float).reshape(-1)
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed distribution JSON: {exc}")

        if support.shape != mass.shape:
            raise ValidationError("support and mass lengths differ")

        order = np.argsort(support, kind="stable")
        return cls(support=support[order], mass=mass[order])

    def to_json(self) -> dict:
        return {"support": self.support.tolist(), "mass": self.mass.tolist()}


# -----------------------------------------------------------------------------
#
#                            DIVERGENCE EVALUATION
#
# -----------------------------------------------------------------------------


def divergence_terms(gen: FGenerator, p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """
    Per-cell contributions q*f(p/q) with the zero-mass conventions applied.
    The arrays broadcast against each other, so a batch of candidate pairs
    of shape (n, k) yields (n, k) terms; sum over the last axis for the
    divergences.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)

    regular = (p > 0) & (q > 0)
    p_only = (p > 0) & (q == 0)
    q_only = (p == 0) & (q > 0)

    with np.errstate(all="ignore"):
        ratio = np.where(regular, p / np.where(regular, q, 1.0), 1.0)
        terms = np.where(regular, q * gen.f(ratio), 0.0)
        terms = np.where(p_only, p * gen.slope_at_inf, terms)
        terms = np.where(q_only, q * gen.f_at_0, terms)

    return terms


def _check_aligned(P: DiscreteDist, Q: DiscreteDist):
    if P.support.shape != Q.support.shape or not np.array_equal(
        P.support, Q.support
    ):
        raise AlignmentError(
            "distributions must share one support list; use align(P, Q) first"
        )


def f_divergence(gen: FGenerator, P: DiscreteDist, Q: DiscreteDist) -> float:
    """
    The f-divergence D_f(P||Q).

    Parameters
    ----------
    gen:
        The generator identifying the divergence.

    P, Q:
        Distributions on the same support list.

    Returns
    -------
    float
        The divergence in nats; +inf when any cell contributes +inf.

    Raises
    ------
    AlignmentError
        The supports differ.
    """
    _check_aligned(P, Q)
    return float(np.sum(divergence_terms(gen, P.mass, Q.mass)))


def symmetrized_divergence(gen: FGenerator, P: DiscreteDist, Q: DiscreteDist) -> float:
    """the symmetrized divergence (D_f(P||Q) + D_f(Q||P)) / 2"""
    return 0.5 * (f_divergence(gen, P, Q) + f_divergence(gen, Q, P))


def moments(P: DiscreteDist) -> Tuple[float, float]:
    """return the (mean, variance) of the support under the mass"""
    mean = float(np.dot(P.mass, P.support))
    variance = float(np.dot(P.mass, (P.support - mean) ** 2))
    return mean, variance


def align(P: DiscreteDist, Q: DiscreteDist) -> Tuple[DiscreteDist, DiscreteDist]:
    """
    Merge the supports of P and Q into one sorted list, padding the points
    missing from either distribution with zero mass.
    """
    support = np.union1d(P.support, Q.support)

    def _pad(dist: DiscreteDist) -> DiscreteDist:
        mass = np.zeros_like(support)
        mass[np.searchsorted(support, dist.support)] = dist.mass
        return DiscreteDist(support=support, mass=mass)

    return _pad(P), _pad(Q)


def binary_pair(
    t: float, support: Sequence[float] = (0.0, 1.0)
) -> Tuple[DiscreteDist, DiscreteDist]:
    """
    The swapped two-point pair R_t = ((1-t)/2, (1+t)/2) and
    R_t^dagger = ((1+t)/2, (1-t)/2) on the given two support points.
    """
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"t must lie in [0, 1]: {t!r}")

    lo, hi = (1.0 - t) / 2.0, (1.0 + t) / 2.0
    return (
        DiscreteDist(support=support, mass=[lo, hi]),
        DiscreteDist(support=support, mass=[hi, lo]),
    )


# -----------------------------------------------------------------------------
#
#                                 CATALOG
#
# -----------------------------------------------------------------------------


def _const(value: float) -> RealFn:
    return lambda t: np.full_like(np.asarray(t, dtype=float), value)


def _one_minus_sq(t):
    t = np.asarray(t, dtype=float)
    return (1.0 - t) * (1.0 + t)


_TD = FGenerator(
    name=GeneratorName.td.value,
    f=lambda t: (1.0 - t) ** 2 / (2.0 * (1.0 + t)),
    f1=lambda t: 0.5 - 2.0 / (1.0 + t) ** 2,
    f2=lambda t: 4.0 / (1.0 + t) ** 3,
    f_at_0=0.5,
    slope_at_inf=0.5,
    binary_g1=lambda t: 2.0 * np.asarray(t, dtype=float),
    binary_g2=_const(2.0),
)

_KL = FGenerator(
    name=GeneratorName.kl.value,
    f=lambda t: xlogy(t, t),
    f1=lambda t: np.log(t) + 1.0,
    f2=lambda t: 1.0 / t,
    f_at_0=0.0,
    slope_at_inf=math.inf,
    binary_g1=lambda t: 2.0 * np.arctanh(t) + 2.0 * t / _one_minus_sq(t),
    binary_g2=lambda t: 4.0 / _one_minus_sq(t) ** 2,
)

_HELLINGER = FGenerator(
    name=GeneratorName.hellinger.value,
    f=lambda t: 0.5 * (np.sqrt(t) - 1.0) ** 2,
    f1=lambda t: 0.5 * (1.0 - 1.0 / np.sqrt(t)),
    f2=lambda t: 0.25 * np.asarray(t, dtype=float) ** -1.5,
    f_at_0=0.5,
    slope_at_inf=0.5,
    binary_g1=lambda t: t / np.sqrt(_one_minus_sq(t)),
    binary_g2=lambda t: _one_minus_sq(t) ** -1.5,
)

_JS = FGenerator(
    name=GeneratorName.js.value,
    f=lambda t: 0.5 * xlogy(t, t) - 0.5 * xlogy(1.0 + t, (1.0 + t) / 2.0),
    f1=lambda t: 0.5 * np.log(2.0 * t / (1.0 + t)),
    f2=lambda t: 1.0 / (2.0 * t * (1.0 + t)),
    f_at_0=0.5 * math.log(2.0),
    slope_at_inf=0.5 * math.log(2.0),
    binary_g1=lambda t: np.arctanh(t),
    binary_g2=lambda t: 1.0 / _one_minus_sq(t),
)

_CHI2 = FGenerator(
    name=GeneratorName.chi2.value,
    f=lambda t: (t - 1.0) ** 2,
    f1=lambda t: 2.0 * (t - 1.0),
    f2=_const(2.0),
    f_at_0=1.0,
    slope_at_inf=math.inf,
    binary_g1=lambda t: 8.0 * t / _one_minus_sq(t) ** 2,
    binary_g2=lambda t: (8.0 + 24.0 * np.asarray(t, dtype=float) ** 2)
    / _one_minus_sq(t) ** 3,
)

_CATALOG = MappingProxyType(
    {gen.name: gen for gen in (_TD, _KL, _HELLINGER, _JS, _CHI2)}
)


def catalog() -> List[FGenerator]:
    """
    The built-in generators: triangular discrimination, Kullback-Leibler,
    squared Hellinger, Jensen-Shannon, and Pearson chi-squared.
    """
    return list(_CATALOG.values())


def get_generator(name: Union[str, GeneratorName]) -> FGenerator:
    """look up a catalog generator by name (case-insensitive)"""
    key = name.value if isinstance(name, GeneratorName) else str(name).lower()

    if (gen := _CATALOG.get(key)) is None:
        raise ValidationError(
            f"unknown generator {name!r}; choose from {', '.join(_CATALOG)} "
            "or build one with divbound.expr.custom_generator"
        )
    return gen


# -----------------------------------------------------------------------------
#
#                            NAMED DIVERGENCES
#
# -----------------------------------------------------------------------------


def triangular_discrimination(P: DiscreteDist, Q: DiscreteDist) -> float:
    return f_divergence(_TD, P, Q)


def kl_divergence(P: DiscreteDist, Q: DiscreteDist) -> float:
    return f_divergence(_KL, P, Q)


def hellinger_squared(P: DiscreteDist, Q: DiscreteDist) -> float:
    return f_divergence(_HELLINGER, P, Q)


def js_divergence(P: DiscreteDist, Q: DiscreteDist) -> float:
    return f_divergence(_JS, P, Q)


def chi_squared(P: DiscreteDist, Q: DiscreteDist) -> float:
    return f_divergence(_CHI2, P, Q)


def total_variation(P: DiscreteDist, Q: DiscreteDist) -> float:
    """total variation distance, normalised as sum |p - q| / 2"""
    _check_aligned(P, Q)
    return float(0.5 * np.sum(np.abs(P.mass - Q.mass)))


def bhattacharyya(P: DiscreteDist, Q: DiscreteDist) -> float:
    """the Bhattacharyya coefficient Z = sum sqrt(p q)"""
    _check_aligned(P, Q)
    return float(np.sum(np.sqrt(P.mass * Q.mass)))


def binary_entropy(t):
    """Shannon entropy, in nats, of the two-point measure R_t"""
    t = np.asarray(t, dtype=float)
    return entr((1.0 - t) / 2.0) + entr((1.0 + t) / 2.0)
