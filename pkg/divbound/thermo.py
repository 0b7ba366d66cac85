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
Entropy production of a continuous-time Markov jump process with constant
rates, and the lower bound

    Sigma >= A * g_KL( sqrt(Sigma_ps / (2 A)) )

relating the total entropy production Sigma, the pseudo-entropy production
Sigma_ps and the dynamical activity A, all integrated over [0, tau].  The
fluxes are K_nm(t) = R_nm p_m(t), the rate of jumps m -> n.

Sigma, Sigma_ps and A are integrated with Simpson's rule.  The path measures
P(n, m, t_k) = K_nm(t_k) w_k / A and P^dagger(n, m, t_k) = P(m, n, t_k) use
trapezoidal weights w_k, so the identity gaps

    | Sigma - A D_KL(P || P^dagger) |,   | Sigma_ps - 2 A Delta(P, P^dagger) |

measure the trapezoidal discretisation error and shrink as dt^2.

Everything in this module is in nats, whatever the display base.
"""

# -----------------------------------------------------------------------------
# System Imports
# -----------------------------------------------------------------------------

from typing import Optional, Union, Sequence, List, Tuple
from dataclasses import dataclass, asdict
import logging
import math

# -----------------------------------------------------------------------------
# Public Imports
# -----------------------------------------------------------------------------

import numpy as np
from scipy.integrate import simpson
from scipy.linalg import null_space
from scipy.special import xlogy

# -----------------------------------------------------------------------------
# Private Imports
# -----------------------------------------------------------------------------

import divbound
from .consts import GeneratorName, TOL_SIMPLEX, TOL_NEGATIVE_PROB
from .errors import (
    ValidationError,
    DomainError,
    StepSizeError,
    DegenerateSystemError,
)
from .binary import make_binary
from .fgen import DiscreteDist, get_generator, kl_divergence, triangular_discrimination

# -----------------------------------------------------------------------------
# Exports
# -----------------------------------------------------------------------------

__all__ = [
    "MarkovSystem",
    "ThermoReport",
    "evolve",
    "thermo_report",
    "tku_bound",
    "stationary",
    "path_measures",
    "step_rates",
    "random_system",
]

# -----------------------------------------------------------------------------
#
#                                 CODE BEGINS
#
# -----------------------------------------------------------------------------

_LOG = logging.getLogger(divbound.__package__)

_KL_BINARY = make_binary(get_generator(GeneratorName.kl))

# drift of the total probability tolerated before renormalising
_TOL_DRIFT = 1e-12

EdgeRates = Union[float, Sequence[float]]


def stationary(rates: np.ndarray) -> np.ndarray:
    """
    The stationary distribution, from the null space of the rate matrix.

    Raises
    ------
    DegenerateSystemError
        The rate matrix has no null space.
    """
    basis = null_space(np.asarray(rates, dtype=float))
    if basis.shape[1] == 0:
        raise DegenerateSystemError("the rate matrix has no stationary distribution")

    vec = np.abs(basis[:, 0])
    return vec / vec.sum()


@dataclass(frozen=True, eq=False)
class MarkovSystem:
    """
    A Markov jump process with constant rates.

    Attributes
    ----------
    rates: ndarray
        rates[n][m] is the transition rate from state m to state n, in 1/time.
        Off-diagonal entries are non-negative and each column sums to zero.

    p0: ndarray
        Initial distribution.

    tau: float
        Horizon, in time units.

    dt: float
        Integration step; tau/dt must be an integer.
    """

    rates: np.ndarray
    p0: np.ndarray
    tau: float = 1.0
    dt: float = 1e-3

    def __post_init__(self):
        rates = np.array(self.rates, dtype=float)
        p0 = np.array(self.p0, dtype=float).reshape(-1)

        if rates.ndim != 2 or rates.shape[0] != rates.shape[1] or rates.shape[0] < 2:
            raise ValidationError(
                f"rates must be a square matrix of 2+ states: {rates.shape}"
            )

        n = rates.shape[0]
        off = ~np.eye(n, dtype=bool)
        if not np.all(np.isfinite(rates)) or np.any(rates[off] < 0):
            raise ValidationError("off-diagonal rates must be finite and non-negative")

        scale = 1.0 + float(np.abs(rates).max())
        if np.any(np.abs(rates.sum(axis=0)) > 1e-12 * scale):
            raise ValidationError("every column of the rate matrix must sum to zero")

        if p0.shape != (n,):
            raise ValidationError(f"p0 must have {n} entries: {p0.shape}")

        if np.any(p0 < 0) or abs(p0.sum() - 1.0) > TOL_SIMPLEX:
            raise ValidationError("p0 must lie on the probability simplex")

        if not self.dt > 0 or not self.tau >= 0:
            raise ValidationError(
                f"need dt > 0 and tau >= 0: dt={self.dt}, tau={self.tau}"
            )

        steps = round(self.tau / self.dt)
        if abs(steps * self.dt - self.tau) > 1e-9 * max(1.0, self.tau):
            raise ValidationError(f"tau/dt must be an integer: {self.tau}/{self.dt}")

        rates.flags.writeable = False
        p0.flags.writeable = False
        object.__setattr__(self, "rates", rates)
        object.__setattr__(self, "p0", p0)

    @property
    def n_states(self) -> int:
        return self.rates.shape[0]

    @property
    def n_steps(self) -> int:
        return round(self.tau / self.dt)

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n_steps + 1) * self.dt

    @classmethod
    def from_transition_rates(
        cls, transitions: np.ndarray, p0=None, tau: float = 1.0, dt: float = 1e-3
    ) -> "MarkovSystem":
        """
        Build from the off-diagonal rates alone; the diagonal is filled so
        each column sums to zero.  p0 defaults to the stationary distribution.
        """
        rates = np.array(transitions, dtype=float)
        np.fill_diagonal(rates, 0.0)
        np.fill_diagonal(rates, -rates.sum(axis=0))
        if p0 is None:
            p0 = stationary(rates)
        return cls(rates=rates, p0=p0, tau=tau, dt=dt)

    @classmethod
    def ring(
        cls,
        n_states: int,
        forward: EdgeRates,
        backward: EdgeRates,
        p0=None,
        tau: float = 1.0,
        dt: float = 1e-3,
    ) -> "MarkovSystem":
        """
        A ring m -> m+1 at rate forward[m] and m+1 -> m at rate backward[m];
        scalars apply to every edge.  p0 defaults to the stationary
        distribution.
        """
        fwd = np.broadcast_to(np.asarray(forward, dtype=float), (n_states,))
        bwd = np.broadcast_to(np.asarray(backward, dtype=float), (n_states,))

        transitions = np.zeros((n_states, n_states))
        for m in range(n_states):
            nxt = (m + 1) % n_states
            transitions[nxt, m] += fwd[m]
            transitions[m, nxt] += bwd[m]

        return cls.from_transition_rates(transitions, p0=p0, tau=tau, dt=dt)

    @classmethod
    def from_json(cls, obj: dict) -> "MarkovSystem":
        """
        Build from {"n_states", "rates", "p0", "tau", "dt"}, with rates
        row-major in the rates[n][m] = (m -> n) convention.  "p0" may be the
        string "stationary".
        """
        try:
            rates = np.asarray(obj["rates"], dtype=float)
            p0 = obj.get("p0", "stationary")
            tau = float(obj.get("tau", 1.0))
            dt = float(obj.get("dt", 1e-3))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed system JSON: {exc}")

        n_states = obj.get("n_states")
        if n_states is not None and rates.shape[:1] != (n_states,):
            raise ValidationError(
                f"n_states={n_states} does not match rates {rates.shape}"
            )

        if isinstance(p0, str):
            if p0 != "stationary":
                raise ValidationError(f"p0 must be a list or 'stationary': {p0!r}")
            p0 = stationary(rates)

        return cls(rates=rates, p0=p0, tau=tau, dt=dt)

    def to_json(self) -> dict:
        return dict(
            n_states=self.n_states,
            rates=self.rates.tolist(),
            p0=self.p0.tolist(),
            tau=self.tau,
            dt=self.dt,
        )


def random_system(
    rng: np.random.Generator,
    n_states: Optional[int] = None,
    rate_range: Tuple[float, float] = (0.1, 5.0),
    tau: float = 1.0,
    dt: float = 1e-3,
) -> MarkovSystem:
    """
    A fully connected system with uniform random rates and a random initial
    distribution; 3 to 5 states unless given.
    """
    if n_states is None:
        n_states = int(rng.integers(3, 6))

    transitions = rng.uniform(*rate_range, size=(n_states, n_states))
    weights = rng.exponential(size=n_states)
    return MarkovSystem.from_transition_rates(
        transitions, p0=weights / weights.sum(), tau=tau, dt=dt
    )


def evolve(sys: MarkovSystem) -> np.ndarray:
    """
    Integrate dp/dt = R p from 0 to tau by fourth order Runge-Kutta.

    Returns
    -------
    ndarray
        p at every step boundary, shape (n_steps + 1, n_states).

    Raises
    ------
    StepSizeError
        A probability fell below -1e-9; retry with a smaller dt.
    """
    rates, dt = sys.rates, sys.dt
    trajectory = np.empty((sys.n_steps + 1, sys.n_states))
    trajectory[0] = p = sys.p0.copy()

    for step in range(1, sys.n_steps + 1):
        k1 = rates @ p
        k2 = rates @ (p + 0.5 * dt * k1)
        k3 = rates @ (p + 0.5 * dt * k2)
        k4 = rates @ (p + dt * k3)
        p = p + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

        if (low := p.min()) < -TOL_NEGATIVE_PROB:
            raise StepSizeError(
                f"probability {low!r} at t={step * dt!r}; use a smaller dt than {dt}"
            )

        p = np.clip(p, 0.0, None)
        if abs(total := p.sum() - 1.0) > _TOL_DRIFT:
            _LOG.debug(f"evolve: renormalising drift {total!r} at step {step}")
            p = p / p.sum()

        trajectory[step] = p

    return trajectory


@dataclass(frozen=True)
class ThermoReport:
    """
    Integrated quantities over [0, tau], in nats.

    Attributes
    ----------
    sigma: float
        Total entropy production; +inf when some flux is one-way.  This
        includes a p0 with a zero entry: the fluxes out of an empty state
        vanish at t = 0, so the first step boundary carries one-way fluxes
        even though the continuous-time integral is finite.  The path
        measures share that cell, so A D_KL(P||P^dagger) is +inf as well
        and `kl_identity_gap` is 0.

    sigma_ps: float
        Pseudo-entropy production.

    activity: float
        Dynamical activity.

    kl_identity_gap, td_identity_gap: float
        |sigma - A D_KL(P||P^dagger)| and |sigma_ps - 2 A Delta(P, P^dagger)|.

    bound_rhs: float
        A g_KL(sqrt(sigma_ps / (2 A))).

    bound_slack: float
        sigma - bound_rhs; 0 when both are +inf.
    """

    sigma: float
    sigma_ps: float
    activity: float
    kl_identity_gap: float
    td_identity_gap: float
    bound_rhs: float
    bound_slack: float

    def to_json(self) -> dict:
        return asdict(self)


def _fluxes(sys: MarkovSystem, trajectory: np.ndarray) -> np.ndarray:
    """K[k, n, m] = R_nm p_m(t_k), zero on the diagonal"""
    off = 1.0 - np.eye(sys.n_states)
    return sys.rates[None, :, :] * trajectory[:, None, :] * off


def _rates_of(fluxes: np.ndarray):
    """entropy production, activity and pseudo-entropy production rates per node"""
    reverse = fluxes.transpose(0, 2, 1)
    total = fluxes + reverse

    with np.errstate(all="ignore"):
        sigma = (xlogy(fluxes, fluxes) - xlogy(fluxes, reverse)).sum(axis=(1, 2))
        ps = np.where(
            total > 0, (fluxes - reverse) ** 2 / np.where(total > 0, total, 1.0), 0.0
        ).sum(axis=(1, 2))

    return sigma, fluxes.sum(axis=(1, 2)), ps


def step_rates(
    sys: MarkovSystem, trajectory: Optional[np.ndarray] = None
) -> List[dict]:
    """rows (t, sigma_rate, activity_rate, sigma_ps_rate) at every step boundary"""
    if trajectory is None:
        trajectory = evolve(sys)

    sigma, activity, ps = _rates_of(_fluxes(sys, trajectory))
    return [
        dict(
            t=float(t),
            sigma_rate=float(s),
            activity_rate=float(a),
            sigma_ps_rate=float(q),
        )
        for t, s, a, q in zip(sys.times, sigma, activity, ps)
    ]


def _trapezoid_weights(sys: MarkovSystem) -> np.ndarray:
    weights = np.full(sys.n_steps + 1, sys.dt)
    weights[[0, -1]] = 0.5 * sys.dt
    return weights


def _dagger_index(n_nodes: int, n_states: int) -> np.ndarray:
    """
    Permutation of the flattened (k, n, m) cells, n != m, that swaps n and m;
    it is its own inverse.
    """
    rows, cols = np.nonzero(~np.eye(n_states, dtype=bool))
    pos = -np.ones((n_states, n_states), dtype=int)
    pos[rows, cols] = np.arange(len(rows))
    per_node = pos[cols, rows]
    return (np.arange(n_nodes)[:, None] * len(rows) + per_node[None, :]).reshape(-1)


def path_measures(
    sys: MarkovSystem, trajectory: Optional[np.ndarray] = None
) -> Tuple[DiscreteDist, DiscreteDist, np.ndarray]:
    """
    The path measure P over (node, n, m), n != m, its time reversal
    P^dagger, and the permutation mapping one onto the other.  The support
    is the cell index.

    Raises
    ------
    DegenerateSystemError
        Zero dynamical activity.
    """
    if trajectory is None:
        trajectory = evolve(sys)

    fluxes = _fluxes(sys, trajectory)
    off = ~np.eye(sys.n_states, dtype=bool)
    cells = (fluxes[:, off] * _trapezoid_weights(sys)[:, None]).reshape(-1)

    if (activity := cells.sum()) <= 0:
        raise DegenerateSystemError("the system has zero dynamical activity")

    mass = cells / activity
    swap = _dagger_index(len(trajectory), sys.n_states)
    support = np.arange(mass.size, dtype=float)
    return (
        DiscreteDist(support=support, mass=mass),
        DiscreteDist(support=support, mass=mass[swap]),
        swap,
    )


def tku_bound(sigma_ps: float, activity: float) -> float:
    """
    A g_KL(sqrt(sigma_ps / (2 A))), the lower bound of the total entropy
    production.

    Raises
    ------
    DomainError
        activity <= 0, sigma_ps < 0, or sigma_ps > 2 activity.
    """
    if not activity > 0:
        raise DomainError(f"activity must be positive: {activity!r}")

    if sigma_ps < 0 or sigma_ps > 2.0 * activity * (1.0 + 1e-12):
        raise DomainError(
            f"need 0 <= sigma_ps <= 2 activity: sigma_ps={sigma_ps!r}, activity={activity!r}"
        )

    t = math.sqrt(min(1.0, sigma_ps / (2.0 * activity)))
    return activity * _KL_BINARY(t)


def _integrate(rate: np.ndarray, dt: float) -> float:
    if not np.all(np.isfinite(rate)):
        return math.inf
    return float(simpson(rate, dx=dt))


def thermo_report(sys: MarkovSystem) -> ThermoReport:
    """
    Integrate the system and report the entropy production, pseudo-entropy
    production, activity, the identity gaps and the bound.

    Start from a p0 with full support for a finite entropy production; a
    state that starts empty makes it +inf, see ThermoReport.sigma.

    Raises
    ------
    DegenerateSystemError
        Zero dynamical activity, including a zero horizon.
    """
    if sys.n_steps == 0:
        raise DegenerateSystemError("a zero horizon has zero dynamical activity")

    trajectory = evolve(sys)
    sigma_rate, activity_rate, ps_rate = _rates_of(_fluxes(sys, trajectory))

    sigma = _integrate(sigma_rate, sys.dt)
    activity = _integrate(activity_rate, sys.dt)
    sigma_ps = _integrate(ps_rate, sys.dt)

    if not activity > 0:
        raise DegenerateSystemError("the system has zero dynamical activity")

    P, P_dagger, _ = path_measures(sys, trajectory)
    kl_path = kl_divergence(P, P_dagger)
    td_path = triangular_discrimination(P, P_dagger)

    if math.isinf(sigma) and math.isinf(kl_path):
        kl_gap = 0.0
    else:
        kl_gap = abs(sigma - activity * kl_path)

    bound_rhs = tku_bound(sigma_ps, activity)
    if math.isinf(sigma) and math.isinf(bound_rhs):
        bound_slack = 0.0
    else:
        bound_slack = sigma - bound_rhs

    _LOG.debug(
        f"thermo: sigma={sigma!r} sigma_ps={sigma_ps!r} activity={activity!r} "
        f"bound={bound_rhs!r}"
    )
    return ThermoReport(
        sigma=sigma,
        sigma_ps=sigma_ps,
        activity=activity,
        kl_identity_gap=kl_gap,
        td_identity_gap=abs(sigma_ps - 2.0 * activity * td_path),
        bound_rhs=bound_rhs,
        bound_slack=bound_slack,
    )
