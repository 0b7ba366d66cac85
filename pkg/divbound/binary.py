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
The binary f-divergence g(t) = D_f(R_t || R_t^dagger) between the swapped
two-point measures R_t = ((1-t)/2, (1+t)/2) and R_t^dagger, its derivatives,
its inverse G, and the certificate for the sufficient condition

    g'(t) / t is non-decreasing on (0, 1)   <=>   t g''(t) - g'(t) >= 0

under which g(sqrt(Delta)) is a tight lower bound of every symmetrized
f-divergence.

With v(t) = (1-t)/(1+t) the closed forms used here are

    g(t)   = (1-t)/2 f(1/v) + (1+t)/2 f(v)
    g'(t)  = (f(v) - f(1/v))/2 + f'(1/v)/(1-t) - f'(v)/(1+t)
    g''(t) = 2 f''(1/v)/(1-t)^3 + 2 f''(v)/(1+t)^3

where the f' terms cancel in g'', so g'' carries no cancellation error.
"""

# -----------------------------------------------------------------------------
# System Imports
# -----------------------------------------------------------------------------

from typing import Optional, List
from dataclasses import dataclass, field
from functools import cached_property
import logging
import math

# -----------------------------------------------------------------------------
# Public Imports
# -----------------------------------------------------------------------------

import numpy as np
from scipy.optimize import bisect

# -----------------------------------------------------------------------------
# Private Imports
# -----------------------------------------------------------------------------

import divbound
from .consts import (
    EPS_EDGE,
    TOL_COND,
    TOL_INV,
    BISECT_MAXITER,
    BISECT_XTOL,
    DEFAULT_GRID_SIZE,
    MIN_GRID_SIZE,
)
from .errors import DomainError, EvaluationError, PreconditionError
from .fgen import FGenerator, RealFn

# -----------------------------------------------------------------------------
# Exports
# -----------------------------------------------------------------------------

__all__ = [
    "BinaryDivergence",
    "ConditionCertificate",
    "make_binary",
    "inverse_G",
    "check_condition",
    "require_condition",
    "concavity_check_G_squared",
    "binary_derivative",
    "derivative_lower_bound",
]

# -----------------------------------------------------------------------------
#
#                                 CODE BEGINS
#
# -----------------------------------------------------------------------------

_LOG = logging.getLogger(divbound.__package__)

# probe edge and relative slack when g'' comes from a numerically
# differentiated generator rather than closed forms
FD_EDGE = 1e-2
FD_COND_RTOL = 1e-4


@dataclass(frozen=True)
class ConditionCertificate:
    """
    Outcome of probing t g''(t) - g'(t) >= 0 on a grid.

    Attributes
    ----------
    satisfied: bool
        True iff no grid node has a margin below its tolerance.

    grid: list
        The probed t values, ascending.

    min_margin: float
        The smallest t g''(t) - g'(t) over the grid.

    witness: float
        The t at which `min_margin` occurs; rerunning at this t reproduces a
        failure.

    ratio_monotone: bool
        Cross-check: g'(t)/t is non-decreasing across consecutive nodes.

    tol_cond: float
        Tolerance used.
    """

    satisfied: bool
    grid: List[float] = field(repr=False)
    min_margin: float
    witness: float
    ratio_monotone: bool
    tol_cond: float

    def to_json(self, include_grid: bool = False) -> dict:
        body = dict(
            satisfied=self.satisfied,
            min_margin=self.min_margin,
            witness=self.witness,
            ratio_monotone=self.ratio_monotone,
            tol_cond=self.tol_cond,
            grid_size=len(self.grid),
        )
        if include_grid:
            body["grid"] = list(self.grid)
        return body


@dataclass(frozen=True, eq=False)
class BinaryDivergence:
    """
    The scalar function g on [0, 1] for one generator.

    Attributes
    ----------
    g, g1, g2:
        g and its first two derivatives, vectorised over numpy arrays.  `g`
        returns `g_at_1` for t >= 1.

    g_at_1: float
        lim_{t->1-} g(t); +inf for divergences such as Kullback-Leibler.

    gen: FGenerator, optional
        The generator g was built from; None for synthetic functions.

    exact_derivatives: bool
        True when g1 and g2 are closed forms; False when they rest on a
        numerically differentiated generator.
    """

    g: RealFn
    g1: RealFn
    g2: RealFn
    g_at_1: float
    gen: Optional[FGenerator] = None
    name: str = "custom"
    exact_derivatives: bool = True

    def __call__(self, t):
        """g(t), as a float for scalar t"""
        value = self.g(t)
        return float(value) if np.ndim(value) == 0 else value

    @cached_property
    def certificate(self) -> "ConditionCertificate":
        """the condition certificate on the default grid, computed once"""
        return check_condition(self, DEFAULT_GRID_SIZE)

    @classmethod
    def from_functions(
        cls,
        g: RealFn,
        g1: RealFn,
        g2: Optional[RealFn] = None,
        *,
        g_at_1: float,
        name: str = "custom",
    ) -> "BinaryDivergence":
        """
        Wrap a scalar function given directly on [0, 1).  When `g2` is not
        given it is taken by central differences of g1.
        """
        exact = g2 is not None
        return cls(
            g=_clamp_edge(g, g_at_1),
            g1=g1,
            g2=g2 if exact else _central_difference(g1),
            g_at_1=g_at_1,
            name=name,
            exact_derivatives=exact,
        )

    def __repr__(self) -> str:
        return f"BinaryDivergence({self.name})"


def _clamp_edge(g_open: RealFn, g_at_1: float) -> RealFn:
    """extend a function valid on [0, 1) by its limit at 1"""

    def g(t):
        t = np.asarray(t, dtype=float)
        at_edge = t >= 1.0
        with np.errstate(all="ignore"):
            inner = g_open(np.where(at_edge, 0.0, t))
        return np.where(at_edge, g_at_1, inner)

    return g


def _central_difference(fn: RealFn) -> RealFn:
    """derivative of fn with step max(1e-5, 1e-5 t), kept inside [0, 1)"""

    def deriv(t):
        t = np.asarray(t, dtype=float)
        h = np.minimum(np.maximum(1e-5, 1e-5 * t), (1.0 - t) / 2.0)
        return (fn(t + h) - fn(t - h)) / (2.0 * h)

    return deriv


def _pair_ratios(t):
    t = np.asarray(t, dtype=float)
    return t, (1.0 - t) / (1.0 + t), (1.0 + t) / (1.0 - t)


def binary_derivative(gen: FGenerator, t):
    """g'(t) from the generator, valid for every twice differentiable f"""
    t, v, w = _pair_ratios(t)
    return 0.5 * (gen.f(v) - gen.f(w)) + gen.f1(w) / (1.0 - t) - gen.f1(v) / (1.0 + t)


def derivative_lower_bound(gen: FGenerator, t):
    """
    (f'(1/v) - f'(v)) / (1+t), which strict convexity places strictly
    between 0 and g'(t) for t in (0, 1).
    """
    t, v, w = _pair_ratios(t)
    return (gen.f1(w) - gen.f1(v)) / (1.0 + t)


def _second_derivative(gen: FGenerator) -> RealFn:
    def g2(t):
        t, v, w = _pair_ratios(t)
        return 2.0 * gen.f2(w) / (1.0 - t) ** 3 + 2.0 * gen.f2(v) / (1.0 + t) ** 3

    return g2


def make_binary(gen: FGenerator) -> BinaryDivergence:
    """
    Build the binary divergence of a generator.  Catalog generators supply
    closed forms for g' and g''; other generators use the general formulas
    in f', f''.
    """

    def g_open(t):
        t, v, w = _pair_ratios(t)
        return (1.0 - t) / 2.0 * gen.f(w) + (1.0 + t) / 2.0 * gen.f(v)

    def g1_generic(t):
        return binary_derivative(gen, t)

    exact = gen.binary_g1 is not None and gen.binary_g2 is not None

    return BinaryDivergence(
        g=_clamp_edge(g_open, gen.g_at_1),
        g1=gen.binary_g1 or g1_generic,
        g2=gen.binary_g2 or _second_derivative(gen),
        g_at_1=gen.g_at_1,
        gen=gen,
        name=gen.name,
        exact_derivatives=exact,
    )


def _chebyshev_grid(grid_size: int, upper: float) -> np.ndarray:
    """Chebyshev nodes of the first kind mapped onto (0, upper), ascending"""
    k = np.arange(grid_size, 0, -1)
    nodes = np.cos((2.0 * k - 1.0) * np.pi / (2.0 * grid_size))
    return upper * (1.0 + nodes) / 2.0


def check_condition(
    bd: BinaryDivergence,
    grid_size: int = DEFAULT_GRID_SIZE,
    tol_cond: float = TOL_COND,
) -> ConditionCertificate:
    """
    Probe the sufficient condition t g''(t) - g'(t) >= 0 on a Chebyshev grid of
    (0, 1 - 1e-9).  When the derivatives rest on a numerically differentiated
    generator the grid stops at 1 - 1e-2 and each node allows an additional
    relative slack of 1e-4, the accuracy of the differences there.

    Parameters
    ----------
    bd:
        The binary divergence to certify.

    grid_size:
        Number of grid nodes; at least 100.

    tol_cond:
        Absolute slack allowed on the margin.

    Raises
    ------
    DomainError
        grid_size below 100.

    EvaluationError
        g' or g'' is not finite at a grid node; the node is named.
    """
    if grid_size < MIN_GRID_SIZE:
        raise DomainError(f"grid_size must be >= {MIN_GRID_SIZE}: {grid_size}")

    edge = EPS_EDGE if bd.exact_derivatives else FD_EDGE
    grid = _chebyshev_grid(grid_size, 1.0 - edge)

    with np.errstate(all="ignore"):
        g1 = np.asarray(bd.g1(grid), dtype=float)
        g2 = np.asarray(bd.g2(grid), dtype=float)

    if not np.all(finite := np.isfinite(g1) & np.isfinite(g2)):
        bad = float(grid[~finite][0])
        raise EvaluationError(f"{bd.name}: non-finite derivative at t={bad!r}", t=bad)

    margin = grid * g2 - g1
    slack = np.full_like(margin, tol_cond)
    if not bd.exact_derivatives:
        slack += FD_COND_RTOL * (np.abs(grid * g2) + np.abs(g1))

    at = int(np.argmin(margin))
    ratio = g1 / grid
    ratio_monotone = bool(
        np.all(np.diff(ratio) >= -tol_cond * np.maximum(1.0, np.abs(ratio[1:])))
    )

    certificate = ConditionCertificate(
        satisfied=bool(np.all(margin >= -slack)),
        grid=grid.tolist(),
        min_margin=float(margin[at]),
        witness=float(grid[at]),
        ratio_monotone=ratio_monotone,
        tol_cond=tol_cond,
    )

    _LOG.debug(
        f"condition {bd.name}: satisfied={certificate.satisfied} "
        f"min_margin={certificate.min_margin!r} at t={certificate.witness!r}"
    )
    return certificate


def require_condition(
    bd: BinaryDivergence, certificate: Optional[ConditionCertificate] = None
) -> ConditionCertificate:
    """
    The certificate to rely on, `bd.certificate` unless one is given.

    Raises
    ------
    PreconditionError
        The certificate is not satisfied; it is attached to the exception.
    """
    certificate = certificate or bd.certificate
    if not certificate.satisfied:
        raise PreconditionError(
            f"{bd.name}: g'(t)/t is not non-decreasing; t g'' - g' = "
            f"{certificate.min_margin!r} at t={certificate.witness!r}",
            certificate=certificate,
        )
    return certificate


def inverse_G(bd: BinaryDivergence, T: float, tol_inv: float = TOL_INV) -> float:
    """
    The inverse G of the strictly increasing g: the t in [0, 1] with g(t) = T,
    found by bisection (no derivatives, since g' is unbounded near 1 for
    divergences such as Kullback-Leibler).

    Returns 1 when T reaches a finite g(1).  When g(1) = +inf the bracket is
    pushed toward 1 until it contains T, so G(T) approaches 1 monotonically
    as T grows.

    Raises
    ------
    DomainError
        T is negative or NaN.
    """
    if not T >= 0.0:
        raise DomainError(f"G is defined on [0, inf): T={T!r}")

    if T == 0.0:
        return 0.0

    if math.isfinite(bd.g_at_1) and T >= bd.g_at_1:
        return 1.0

    eps = EPS_EDGE
    while (g_hi := bd(1.0 - eps)) < T:
        if eps <= 1e-15:
            _LOG.debug(
                f"inverse_G {bd.name}: T={T!r} beyond g(1 - {eps}); returning edge"
            )
            return 1.0 - eps
        eps /= 10.0
        _LOG.debug(f"inverse_G {bd.name}: widening bracket to 1 - {eps}")

    if g_hi == T:
        return 1.0 - eps

    root, info = bisect(
        lambda t: bd(t) - T,
        0.0,
        1.0 - eps,
        xtol=BISECT_XTOL,
        rtol=4.0 * np.finfo(float).eps,
        maxiter=BISECT_MAXITER,
        full_output=True,
        disp=False,
    )

    if not info.converged:
        raise EvaluationError(
            f"inverse_G {bd.name}: bisection did not converge", t=root
        )

    if abs(residual := bd(root) - T) > tol_inv * (1.0 + T):
        _LOG.warning(f"inverse_G {bd.name}: residual {residual!r} at T={T!r}")

    return float(root)


def concavity_check_G_squared(
    bd: BinaryDivergence,
    grid_size: int = DEFAULT_GRID_SIZE,
    seed: int = 0,
    tol: float = 1e-9,
) -> bool:
    """
    Check midpoint concavity of G(T)^2 on `grid_size` random pairs
    (T1, T2) drawn from [0, g(0.99)]:

        G((T1 + T2)/2)^2 >= (G(T1)^2 + G(T2)^2)/2 - tol

    Returns True when no pair violates it.

    Raises
    ------
    PreconditionError
        The condition certificate of `bd` is not satisfied.
    """
    require_condition(bd)

    rng = np.random.default_rng(seed)
    upper = bd(0.99)
    pairs = rng.uniform(0.0, upper, size=(grid_size, 2))

    for t1, t2 in pairs:
        mid = inverse_G(bd, 0.5 * (t1 + t2)) ** 2
        chord = 0.5 * (inverse_G(bd, t1) ** 2 + inverse_G(bd, t2) ** 2)
        if mid < chord - tol:
            _LOG.debug(f"G^2 concavity {bd.name}: violated at T=({t1!r}, {t2!r})")
            return False

    return True
