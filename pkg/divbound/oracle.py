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
Brute-force cross-checks of the closed-form bounds.

The searches minimise the symmetrized divergence directly over pairs of mass
vectors on small supports, without using the binary divergence machinery:

    * under a given triangular discrimination d: a grid over the simplex for
      P, a coarse grid of directions Q0, and Q on the segment from P to Q0
      placed by bisection so that the triangular discrimination equals d
      (it is convex along the segment and 0 at P, hence monotone), followed
      by coordinate descent from the best candidates;

    * under given means and a common variance: the exact two-point solution,
      or a grid over three-point supports with the masses solved from the
      moment equations, followed by coordinate descent on the points.

When a grid yields no feasible candidate the search is repeated at double the
resolution, up to three attempts.
"""

# -----------------------------------------------------------------------------
# System Imports
# -----------------------------------------------------------------------------

from typing import NamedTuple, Callable, Tuple, Sequence
from dataclasses import dataclass
from itertools import combinations
import logging
import math

# -----------------------------------------------------------------------------
# Public Imports
# -----------------------------------------------------------------------------

import numpy as np
from tenacity import retry, retry_if_exception_type, stop_after_attempt

# -----------------------------------------------------------------------------
# Private Imports
# -----------------------------------------------------------------------------

import divbound
from .consts import (
    ORACLE_TD_CONSTRAINT_TOL,
    ORACLE_MOMENT_CONSTRAINT_TOL,
    ORACLE_REFINE_STARTS,
    ORACLE_ESCALATIONS,
    TOL_NEGATIVE_PROB,
)
from .errors import (
    DomainError,
    SearchError,
    ConstructionError,
    PreconditionError,
    ValidationError,
)
from .fgen import FGenerator, DiscreteDist, divergence_terms, symmetrized_divergence
from .fgen import triangular_discrimination
from .bounds import MomentSpec, theorem2_s

# -----------------------------------------------------------------------------
# Exports
# -----------------------------------------------------------------------------

__all__ = [
    "OracleResult",
    "SedrakyanResult",
    "AttainmentResult",
    "search_given_td",
    "search_given_moments",
    "min_symmetrized_given_td",
    "min_symmetrized_given_moments",
    "sedrakyan_check",
    "two_point_pair",
    "td_two_point_attainment",
    "coarse_grain",
]

# -----------------------------------------------------------------------------
#
#                                 CODE BEGINS
#
# -----------------------------------------------------------------------------

_LOG = logging.getLogger(divbound.__package__)

# most candidates evaluated per grid, and per numpy batch
_MAX_GRID_CELLS = 200_000
_CHUNK = 100_000

# resolution of the direction grid Q0; it includes every vertex
_DIRECTION_RESOLUTION = 6

# bisection steps when placing Q on the segment from P to Q0
_SEGMENT_STEPS = 45

_REFINE_MIN_STEP = 1e-9
_REFINE_MAX_ITER = 400


@dataclass(frozen=True)
class OracleResult:
    """
    The best pair found by a search.

    Attributes
    ----------
    value: float
        The smallest symmetrized divergence found.

    P, Q: DiscreteDist
        The pair achieving `value`.

    evaluations: int
        Number of candidate pairs evaluated.

    resolution: int
        Grid resolution of the attempt that succeeded.
    """

    value: float
    P: DiscreteDist
    Q: DiscreteDist
    evaluations: int
    resolution: int

    def to_json(self) -> dict:
        return dict(
            value=self.value,
            P=self.P.to_json(),
            Q=self.Q.to_json(),
            evaluations=self.evaluations,
            resolution=self.resolution,
        )


class SedrakyanResult(NamedTuple):
    holds: bool
    equality: bool


class AttainmentResult(NamedTuple):
    delta: float
    matches_s_squared: bool
    sedrakyan_equality: bool


def _escalate(search: Callable[[int], OracleResult], resolution: int) -> OracleResult:
    """run `search`, doubling the resolution after each SearchError"""
    state = dict(resolution=resolution)

    def _double(retry_state):
        state["resolution"] *= 2
        _LOG.debug(
            f"oracle attempt {retry_state.attempt_number} found no feasible pair; "
            f"resolution -> {state['resolution']}"
        )

    @retry(
        retry=retry_if_exception_type(SearchError),
        stop=stop_after_attempt(ORACLE_ESCALATIONS),
        before_sleep=_double,
        reraise=True,
    )
    def _attempt():
        return search(state["resolution"])

    return _attempt()


def _symmetrized_batch(gen: FGenerator, p: np.ndarray, q: np.ndarray) -> np.ndarray:
    with np.errstate(all="ignore"):
        return 0.5 * (
            divergence_terms(gen, p, q).sum(axis=-1)
            + divergence_terms(gen, q, p).sum(axis=-1)
        )


def _coordinate_descent(
    state: np.ndarray,
    value: float,
    step: float,
    propose: Callable[[np.ndarray, float], np.ndarray],
    evaluate: Callable[[np.ndarray], np.ndarray],
) -> Tuple[np.ndarray, float, int]:
    """
    Greedy descent: take the best of the proposed moves while it improves,
    otherwise halve the step.
    """
    evaluations = 0
    for _ in range(_REFINE_MAX_ITER):
        if step < _REFINE_MIN_STEP:
            break

        candidates = propose(state, step)
        if not len(candidates):
            step /= 2.0
            continue

        values = evaluate(candidates)
        evaluations += len(candidates)
        best = int(np.argmin(values))

        if values[best] < value:
            state, value = candidates[best], float(values[best])
        else:
            step /= 2.0

    return state, value, evaluations


# -----------------------------------------------------------------------------
#
#                   SEARCH UNDER A GIVEN TRIANGULAR DISCRIMINATION
#
# -----------------------------------------------------------------------------


def _simplex_grid(k: int, n: int) -> np.ndarray:
    """every mass vector of length k with entries in {0, 1/n, ..., 1}"""
    bars = np.array(list(combinations(range(n + k - 1), k - 1)), dtype=int)
    bars = bars.reshape(-1, k - 1)
    edges = np.hstack(
        (np.full((len(bars), 1), -1), bars, np.full((len(bars), 1), n + k - 1))
    )
    return (np.diff(edges, axis=1) - 1) / n


def _capped_resolution(k: int, resolution: int) -> int:
    n = resolution
    while n > 1 and math.comb(n + k - 1, k - 1) > _MAX_GRID_CELLS:
        n -= 1
    return n


def _td_batch(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    total = p + q
    with np.errstate(all="ignore"):
        cells = np.where(total > 0, (p - q) ** 2 / np.where(total > 0, total, 1.0), 0.0)
    return 0.5 * cells.sum(axis=-1)


def _place_on_segment(p: np.ndarray, q0: np.ndarray, d: float) -> np.ndarray:
    """Q on the segment P -> Q0 with triangular discrimination d to P"""
    lo = np.zeros(len(p))
    hi = np.ones(len(p))
    direction = q0 - p

    for _ in range(_SEGMENT_STEPS):
        mid = 0.5 * (lo + hi)
        above = _td_batch(p, p + mid[:, None] * direction) >= d
        hi = np.where(above, mid, hi)
        lo = np.where(above, lo, mid)

    q = np.clip(p + hi[:, None] * direction, 0.0, None)
    return q / q.sum(axis=1, keepdims=True)


def _td_values(gen: FGenerator, d: float, p: np.ndarray, q0: np.ndarray):
    """symmetrized divergence after placement; +inf where Q0 is too close to P"""
    values = np.full(len(p), np.inf)
    q = np.array(p)
    feasible = _td_batch(p, q0) >= d
    if np.any(feasible):
        q[feasible] = _place_on_segment(p[feasible], q0[feasible], d)
        values[feasible] = _symmetrized_batch(gen, p[feasible], q[feasible])
    values[~np.isfinite(values)] = np.inf
    return values, q


def _mass_shift_moves(state: np.ndarray, step: float, k: int) -> np.ndarray:
    """move up to `step` of mass between two cells of P or of Q0"""
    moves = []
    for offset in (0, k):
        for i in range(k):
            if (amount := min(step, state[offset + i])) <= 0:
                continue
            for j in range(k):
                if i == j:
                    continue
                move = state.copy()
                move[offset + i] -= amount
                move[offset + j] += amount
                moves.append(move)
    return np.array(moves).reshape(-1, 2 * k)


def _search_td_at(gen: FGenerator, d: float, k: int, resolution: int) -> OracleResult:
    n = _capped_resolution(k, resolution)
    ps = _simplex_grid(k, n)
    q0s = _simplex_grid(k, min(n, _DIRECTION_RESOLUTION))

    pair_p = np.repeat(np.arange(len(ps)), len(q0s))
    pair_q0 = np.tile(np.arange(len(q0s)), len(ps))

    values = np.empty(len(pair_p))
    for start in range(0, len(pair_p), _CHUNK):
        chunk = slice(start, start + _CHUNK)
        values[chunk], _ = _td_values(gen, d, ps[pair_p[chunk]], q0s[pair_q0[chunk]])

    evaluations = len(values)
    if not np.any(np.isfinite(values)):
        raise SearchError(
            f"no finite feasible pair at d={d} on {k} points, resolution {n}"
        )

    def evaluate(states):
        vals, _ = _td_values(gen, d, states[:, :k], states[:, k:])
        return vals

    best_state, best_value = None, math.inf
    for idx in np.argsort(values)[:ORACLE_REFINE_STARTS]:
        if not np.isfinite(values[idx]):
            break
        state = np.concatenate((ps[pair_p[idx]], q0s[pair_q0[idx]]))
        state, value, count = _coordinate_descent(
            state,
            float(values[idx]),
            1.0 / n,
            lambda s, h: _mass_shift_moves(s, h, k),
            evaluate,
        )
        evaluations += count
        if value < best_value:
            best_state, best_value = state, value

    _, q = _td_values(gen, d, best_state[None, :k], best_state[None, k:])
    p = best_state[:k] / best_state[:k].sum()
    support = np.arange(k, dtype=float)
    P = DiscreteDist(support=support, mass=p)
    Q = DiscreteDist(support=support, mass=q[0])

    if abs(triangular_discrimination(P, Q) - d) > ORACLE_TD_CONSTRAINT_TOL:
        raise SearchError(f"refined pair misses the constraint d={d}")

    _LOG.debug(
        f"oracle td {gen.name}: d={d} k={k} n={n} value={best_value!r} "
        f"evaluations={evaluations}"
    )
    return OracleResult(
        value=symmetrized_divergence(gen, P, Q),
        P=P,
        Q=Q,
        evaluations=evaluations,
        resolution=n,
    )


def search_given_td(
    gen: FGenerator, d: float, support_size: int = 2, resolution: int = 200
) -> OracleResult:
    """
    Minimise the symmetrized divergence over pairs on `support_size` points
    whose triangular discrimination equals d.

    Parameters
    ----------
    gen:
        Generator of the divergence.

    d:
        Target triangular discrimination in (0, 1).

    support_size:
        2, 3 or 4 shared support points.

    resolution:
        Mass grid step 1/resolution for P.  The number of grid cells is capped,
        which lowers the effective resolution for 4 points.

    Raises
    ------
    DomainError
        d or support_size out of range.

    SearchError
        No feasible pair after the resolution escalations.
    """
    if not 0.0 < d < 1.0:
        raise DomainError(f"d must lie in (0, 1): {d!r}")

    if support_size not in (2, 3, 4):
        raise DomainError(f"support_size must be 2, 3 or 4: {support_size}")

    if resolution < 1:
        raise DomainError(f"resolution must be positive: {resolution}")

    return _escalate(lambda n: _search_td_at(gen, d, support_size, n), resolution)


def min_symmetrized_given_td(
    gen: FGenerator, d: float, support_size: int = 2, resolution: int = 200
) -> float:
    """the value of `search_given_td`"""
    return search_given_td(gen, d, support_size, resolution).value


# -----------------------------------------------------------------------------
#
#                       SEARCH UNDER GIVEN MOMENTS
#
# -----------------------------------------------------------------------------


def _moment_masses(points: np.ndarray, mean: float, second: float):
    """
    Masses on each row of three support points matching the first two raw
    moments, with a flag for rows where they form a distribution.
    """
    vander = np.stack((np.ones_like(points), points, points ** 2), axis=1)
    rhs = np.broadcast_to(np.array([1.0, mean, second]), (len(points), 3))

    with np.errstate(all="ignore"):
        masses = np.linalg.solve(vander, rhs[..., None])[..., 0]
        residual = np.abs(np.einsum("nij,nj->ni", vander, masses) - rhs).max(axis=1)

    ok = (
        np.all(np.isfinite(masses), axis=1)
        & np.all(masses >= -TOL_NEGATIVE_PROB, axis=1)
        & (residual <= ORACLE_MOMENT_CONSTRAINT_TOL)
    )
    masses = np.clip(np.where(ok[:, None], masses, 0.0), 0.0, None)
    return masses, ok


def _moment_values(gen: FGenerator, points: np.ndarray, half_a: float, second: float):
    p, ok_p = _moment_masses(points, half_a, second)
    q, ok_q = _moment_masses(points, -half_a, second)
    values = np.full(len(points), np.inf)
    ok = ok_p & ok_q
    if np.any(ok):
        values[ok] = _symmetrized_batch(gen, p[ok], q[ok])
    values[~np.isfinite(values)] = np.inf
    return values, p, q


def _point_moves(state: np.ndarray, step: float) -> np.ndarray:
    moves = []
    for i in range(len(state)):
        for sign in (-1.0, 1.0):
            move = state.copy()
            move[i] += sign * step
            if np.all(np.diff(move) > 1e-12):
                moves.append(move)
    return np.array(moves).reshape(-1, len(state))


def _dist_pair(support: np.ndarray, p: np.ndarray, q: np.ndarray):
    return (
        DiscreteDist(support=support, mass=p / p.sum()),
        DiscreteDist(support=support, mass=q / q.sum()),
    )


def _search_moments_at(
    gen: FGenerator, spec: MomentSpec, resolution: int
) -> OracleResult:
    center = 0.5 * (spec.m_P + spec.m_Q)
    half_a = 0.5 * spec.a
    second = spec.sigma_P ** 2 + half_a ** 2
    reach = 1.5 * math.sqrt(second)

    n = resolution
    while n > 3 and math.comb(n, 3) > _MAX_GRID_CELLS:
        n -= 1

    if n < 3:
        raise SearchError(f"three-point search needs at least 3 grid points, got {n}")

    grid = np.linspace(-reach, reach, n)
    triples = grid[np.array(list(combinations(range(n), 3)))]

    values = np.empty(len(triples))
    for start in range(0, len(triples), _CHUNK):
        chunk = slice(start, start + _CHUNK)
        values[chunk], _, _ = _moment_values(gen, triples[chunk], half_a, second)

    evaluations = len(values)
    if not np.any(np.isfinite(values)):
        raise SearchError(f"no feasible three-point pair at resolution {n}")

    def evaluate(states):
        vals, _, _ = _moment_values(gen, states, half_a, second)
        return vals

    best_state, best_value = None, math.inf
    for idx in np.argsort(values)[:ORACLE_REFINE_STARTS]:
        if not np.isfinite(values[idx]):
            break
        state, value, count = _coordinate_descent(
            triples[idx], float(values[idx]), grid[1] - grid[0], _point_moves, evaluate
        )
        evaluations += count
        if value < best_value:
            best_state, best_value = state, value

    _, p, q = _moment_values(gen, best_state[None, :], half_a, second)
    P, Q = _dist_pair(best_state + center, p[0], q[0])

    _LOG.debug(
        f"oracle moments {gen.name}: n={n} value={best_value!r} evaluations={evaluations}"
    )
    return OracleResult(
        value=symmetrized_divergence(gen, P, Q),
        P=P,
        Q=Q,
        evaluations=evaluations,
        resolution=n,
    )


def search_given_moments(
    gen: FGenerator, spec: MomentSpec, support_size: int = 2, resolution: int = 60
) -> OracleResult:
    """
    Minimise the symmetrized divergence over pairs on `support_size` shared
    points with the means and the common variance of `spec`.

    With two points the moment equations determine the pair.  With three
    points the search grids support triples over [-1.5x, 1.5x] about the
    midpoint of the means, x^2 = sigma^2 + a^2/4, solving the masses of
    each triple from the moment equations.

    Raises
    ------
    DomainError
        support_size other than 2 or 3.

    PreconditionError
        Unequal variances.

    SearchError
        No feasible pair after the resolution escalations.
    """
    if support_size not in (2, 3):
        raise DomainError(f"support_size must be 2 or 3: {support_size}")

    if not spec.equal_variances:
        raise PreconditionError(
            "the moment search covers equal variances only: "
            f"sigma_P={spec.sigma_P}, sigma_Q={spec.sigma_Q}"
        )

    if spec.a == 0.0 or spec.sigma_P == 0.0 or support_size == 2:
        P, Q = two_point_pair(spec)
        return OracleResult(
            value=symmetrized_divergence(gen, P, Q),
            P=P,
            Q=Q,
            evaluations=1,
            resolution=0,
        )

    return _escalate(lambda n: _search_moments_at(gen, spec, n), resolution)


def min_symmetrized_given_moments(
    gen: FGenerator, spec: MomentSpec, support_size: int = 2, resolution: int = 60
) -> float:
    """the value of `search_given_moments`"""
    return search_given_moments(gen, spec, support_size, resolution).value


# -----------------------------------------------------------------------------
#
#                 SEDRAKYAN AND THE TWO-POINT CONSTRUCTION
#
# -----------------------------------------------------------------------------


def sedrakyan_check(u: Sequence[float], v: Sequence[float]) -> SedrakyanResult:
    """
    Check sum(u^2/v) >= (sum u)^2 / sum v for positive v.  Equality is
    reported when the two sides agree within 1e-10 and u - c v vanishes
    within 1e-8 for c = sum u / sum v.

    Raises
    ------
    ValidationError
        Lengths differ or some v is not positive.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)

    if u.shape != v.shape or u.ndim != 1 or not len(u):
        raise ValidationError("u and v must be non-empty lists of the same length")

    if not np.all(v > 0):
        raise ValidationError("every v entry must be strictly positive")

    lhs = float(np.sum(u ** 2 / v))
    rhs = float(np.sum(u) ** 2 / np.sum(v))
    c = np.sum(u) / np.sum(v)

    return SedrakyanResult(
        holds=lhs >= rhs - 1e-12,
        equality=abs(lhs - rhs) <= 1e-10 and float(np.max(np.abs(u - c * v))) <= 1e-8,
    )


def two_point_pair(spec: MomentSpec) -> Tuple[DiscreteDist, DiscreteDist]:
    """
    The pair P = (p, 1-p), Q = (q, 1-q) on two shared points with the means
    and (possibly unequal) variances of `spec`.

    In coordinates centred on the midpoint of the means, the points x1 < x2
    have sum (sigma_P^2 - sigma_Q^2)/a and product
    -(sigma_P^2 + sigma_Q^2)/2 - a^2/4, and

        p = (x2 - a/2) / (x2 - x1),   q = (x2 + a/2) / (x2 - x1)

    Raises
    ------
    ConstructionError
        a = 0 with unequal variances; no two-point pair exists.
    """
    center = 0.5 * (spec.m_P + spec.m_Q)
    a = spec.a
    var_p, var_q = spec.sigma_P ** 2, spec.sigma_Q ** 2

    if a == 0.0:
        if var_p != var_q:
            raise ConstructionError(
                "equal means with unequal variances have no two-point pair on "
                "shared points"
            )
        if var_p == 0.0:
            point = DiscreteDist.point_mass(center)
            return point, point
        sigma = spec.sigma_P
        half = DiscreteDist(support=[center - sigma, center + sigma], mass=[0.5, 0.5])
        return half, half

    total = (var_p - var_q) / a
    product = -0.5 * (var_p + var_q) - 0.25 * a ** 2
    if (disc := total ** 2 - 4.0 * product) <= 0.0:
        raise ConstructionError(f"moment system has no real solution: {spec}")

    root = math.sqrt(disc)
    x1, x2 = 0.5 * (total - root), 0.5 * (total + root)
    width = x2 - x1

    p = min(1.0, max(0.0, (x2 - 0.5 * a) / width))
    q = min(1.0, max(0.0, (x2 + 0.5 * a) / width))

    support = [x1 + center, x2 + center]
    return (
        DiscreteDist(support=support, mass=[p, 1.0 - p]),
        DiscreteDist(support=support, mass=[q, 1.0 - q]),
    )


def td_two_point_attainment(spec: MomentSpec) -> AttainmentResult:
    """
    Build the two-point pair of `spec` and confirm its triangular
    discrimination equals s^2, through the equality case of Sedrakyan's
    inequality with u = x (p - q) and v = x^2 (p + q) on the centred points.

    Raises
    ------
    ConstructionError
        No two-point pair exists for the spec.
    """
    P, Q = two_point_pair(spec)
    delta = triangular_discrimination(P, Q)
    s = theorem2_s(spec)

    x = P.support - 0.5 * (spec.m_P + spec.m_Q)
    u = x * (P.mass - Q.mass)
    v = x ** 2 * (P.mass + Q.mass)

    if spec.a == 0.0 or not np.all(v > 0):
        equality = bool(np.all(u == 0.0))
    else:
        equality = sedrakyan_check(u, v).equality

    return AttainmentResult(
        delta=delta,
        matches_s_squared=abs(delta - s ** 2) <= 1e-10,
        sedrakyan_equality=equality,
    )


def coarse_grain(P: DiscreteDist, Q: DiscreteDist) -> Tuple[DiscreteDist, DiscreteDist]:
    """
    Merge the cells where p <= q into one point and the cells where p > q
    into another, giving a pair on {0, 1}.  Divergences can only decrease,
    and a minimiser of a symmetrized divergence coarse-grains to a swapped
    binary pair.
    """
    if not np.array_equal(P.support, Q.support):
        raise ValidationError("coarse_grain needs a pair on one support list")

    above = P.mass > Q.mass
    p_mass = [float(P.mass[~above].sum()), float(P.mass[above].sum())]
    q_mass = [float(Q.mass[~above].sum()), float(Q.mass[above].sum())]
    support = [0.0, 1.0]
    return (
        DiscreteDist(support=support, mass=p_mass),
        DiscreteDist(support=support, mass=q_mass),
    )
