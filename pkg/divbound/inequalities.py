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
Closed-form inequalities between triangular discrimination and the squared
Hellinger distance, the Bhattacharyya coefficient and the Jensen-Shannon
divergence, each compared against the weaker bound it improves on.  All
values are in nats.

Every report is oriented so that slack >= 0 means the inequality holds.
"""

# -----------------------------------------------------------------------------
# System Imports
# -----------------------------------------------------------------------------

from typing import Optional, List, Callable
from dataclasses import dataclass, asdict
from types import MappingProxyType
import math

# -----------------------------------------------------------------------------
# Public Imports
# -----------------------------------------------------------------------------

import numpy as np

# -----------------------------------------------------------------------------
# Private Imports
# -----------------------------------------------------------------------------

from .consts import GeneratorName, MIN_GRID_SIZE
from .errors import DomainError, ValidationError
from .binary import make_binary
from .fgen import (
    DiscreteDist,
    get_generator,
    binary_pair,
    binary_entropy,
    triangular_discrimination,
    hellinger_squared,
    js_divergence,
    bhattacharyya,
)

# -----------------------------------------------------------------------------
# Exports
# -----------------------------------------------------------------------------

__all__ = [
    "IneqReport",
    "hellinger_td_bound",
    "bhattacharyya_relation",
    "js_td_bound",
    "js_linear_minorant_check",
    "binary_sweep",
    "INEQUALITIES",
]

# -----------------------------------------------------------------------------
#
#                                 CODE BEGINS
#
# -----------------------------------------------------------------------------


@dataclass(frozen=True)
class IneqReport:
    """
    One inequality evaluated on one pair.

    Attributes
    ----------
    lhs, rhs: float
        The two sides; the inequality reads lhs >= rhs.

    slack: float
        lhs - rhs.

    prior_rhs: float
        The weaker, previously known right hand side.

    improvement: float
        rhs - prior_rhs.

    alt_rhs: float, optional
        The right hand side computed through an equivalent second form.
    """

    name: str
    lhs: float
    rhs: float
    slack: float
    prior_rhs: float
    improvement: float
    alt_rhs: Optional[float] = None

    @classmethod
    def build(cls, name, lhs, rhs, prior_rhs, alt_rhs=None) -> "IneqReport":
        lhs, rhs, prior_rhs = float(lhs), float(rhs), float(prior_rhs)
        return cls(
            name=name,
            lhs=lhs,
            rhs=rhs,
            slack=lhs - rhs,
            prior_rhs=prior_rhs,
            improvement=rhs - prior_rhs,
            alt_rhs=None if alt_rhs is None else float(alt_rhs),
        )

    def to_json(self) -> dict:
        return asdict(self)


def _delta(P: DiscreteDist, Q: DiscreteDist) -> float:
    """triangular discrimination clipped to [0, 1] against rounding"""
    return min(1.0, max(0.0, triangular_discrimination(P, Q)))


def hellinger_td_bound(P: DiscreteDist, Q: DiscreteDist) -> IneqReport:
    """
    H^2(P,Q) >= 1 - sqrt(1 - D) = D / (1 + sqrt(1 - D)), with D the
    triangular discrimination; the prior bound is D/2.  The second form is
    reported as `rhs` as it does not cancel for small D.
    """
    d = _delta(P, Q)
    root = math.sqrt(1.0 - d)
    return IneqReport.build(
        name="hellinger",
        lhs=hellinger_squared(P, Q),
        rhs=d / (1.0 + root),
        prior_rhs=d / 2.0,
        alt_rhs=1.0 - root,
    )


def bhattacharyya_relation(P: DiscreteDist, Q: DiscreteDist) -> IneqReport:
    """
    D + Z^2 <= 1 with Z the Bhattacharyya coefficient, reported as
    lhs = 1 and rhs = D + Z^2.  No weaker bound is compared, so prior_rhs
    equals rhs.
    """
    rhs = _delta(P, Q) + bhattacharyya(P, Q) ** 2
    return IneqReport.build(name="bhattacharyya", lhs=1.0, rhs=rhs, prior_rhs=rhs)


def js_td_bound(P: DiscreteDist, Q: DiscreteDist) -> IneqReport:
    """
    JS(P,Q) >= ln 2 - H_b(R_sqrt(D)), the binary Jensen-Shannon divergence
    at sqrt(D); the prior bound is D/2.
    """
    d = _delta(P, Q)
    t = math.sqrt(d)
    return IneqReport.build(
        name="js",
        lhs=js_divergence(P, Q),
        rhs=math.log(2.0) - float(binary_entropy(t)),
        prior_rhs=d / 2.0,
        alt_rhs=make_binary(get_generator(GeneratorName.js))(t),
    )


def js_linear_minorant_check(grid_size: int = 1000, tol: float = 1e-12) -> bool:
    """
    Check g_JS(sqrt(t)) >= t/2 on `grid_size` evenly spaced points of (0, 1].

    Raises
    ------
    DomainError
        grid_size below 100.
    """
    if grid_size < MIN_GRID_SIZE:
        raise DomainError(f"grid_size must be >= {MIN_GRID_SIZE}: {grid_size}")

    bd = make_binary(get_generator(GeneratorName.js))
    t = np.linspace(0.0, 1.0, grid_size + 1)[1:]
    return bool(np.all(bd.g(np.sqrt(t)) >= t / 2.0 - tol))


INEQUALITIES = MappingProxyType(
    {
        "hellinger": hellinger_td_bound,
        "bhattacharyya": bhattacharyya_relation,
        "js": js_td_bound,
    }
)


def binary_sweep(name: str, points: int = 101) -> List[dict]:
    """
    Rows (t, lhs, rhs, prior_rhs) of one inequality along the swapped binary
    pairs R_t, t in [0, 1], for plotting.
    """
    ineq: Optional[Callable] = INEQUALITIES.get(name)
    if ineq is None:
        raise ValidationError(
            f"unknown inequality {name!r}; choose from {', '.join(INEQUALITIES)}"
        )

    rows = []
    for t in np.linspace(0.0, 1.0, points):
        report = ineq(*binary_pair(float(t)))
        rows.append(
            dict(t=float(t), lhs=report.lhs, rhs=report.rhs, prior_rhs=report.prior_rhs)
        )
    return rows
