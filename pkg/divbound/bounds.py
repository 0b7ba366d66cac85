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
Tight lower bounds on symmetrized f-divergences.

Given triangular discrimination d, every pair satisfies

    (D_f(P||Q) + D_f(Q||P)) / 2 >= g(sqrt(d))

with equality at the swapped binary pair (R_sqrt(d), R_sqrt(d)^dagger).
Given means m_P, m_Q and standard deviations s_P, s_Q, with a = m_P - m_Q,

    (D_f(P||Q) + D_f(Q||P)) / 2 >= g(s),   s = |a| / sqrt(2 (s_P^2 + s_Q^2) + a^2)

which is attained when s_P = s_Q.  Both need the binary divergence g to pass
its condition certificate.  The total variation variant g(tv) needs no
certificate.
"""

# -----------------------------------------------------------------------------
# System Imports
# -----------------------------------------------------------------------------

from typing import Optional, Tuple
from dataclasses import dataclass, field
import logging
import math

# -----------------------------------------------------------------------------
# Public Imports
# -----------------------------------------------------------------------------

import numpy as np

# -----------------------------------------------------------------------------
# Private Imports
# -----------------------------------------------------------------------------

import divbound
from .binary import BinaryDivergence, ConditionCertificate, require_condition
from .errors import DomainError, PreconditionError, ValidationError
from .fgen import DiscreteDist, binary_pair, moments

# -----------------------------------------------------------------------------
# Exports
# -----------------------------------------------------------------------------

__all__ = [
    "MomentSpec",
    "BoundResult",
    "theorem1_bound",
    "tv_bound",
    "theorem2_s",
    "theorem2_bound",
    "lemma3_pair",
]

# -----------------------------------------------------------------------------
#
#                                 CODE BEGINS
#
# -----------------------------------------------------------------------------

_LOG = logging.getLogger(divbound.__package__)

DistPair = Tuple[DiscreteDist, DiscreteDist]


@dataclass(frozen=True)
class MomentSpec:
    """
    Means and standard deviations constraining a pair (P, Q).  The mean
    difference a = m_P - m_Q is derived on construction.
    """

    m_P: float
    sigma_P: float
    m_Q: float
    sigma_Q: float
    a: float = field(init=False)

    def __post_init__(self):
        values = (self.m_P, self.sigma_P, self.m_Q, self.sigma_Q)
        if not all(math.isfinite(v) for v in values):
            raise ValidationError(f"moment spec values must be finite: {values}")

        if self.sigma_P < 0 or self.sigma_Q < 0:
            raise ValidationError(
                f"standard deviations must be non-negative: "
                f"sigma_P={self.sigma_P}, sigma_Q={self.sigma_Q}"
            )

        object.__setattr__(self, "a", self.m_P - self.m_Q)

    @classmethod
    def from_dists(cls, P: DiscreteDist, Q: DiscreteDist) -> "MomentSpec":
        """the moment spec of a concrete pair"""
        m_P, var_P = moments(P)
        m_Q, var_Q = moments(Q)
        return cls(
            m_P=m_P, sigma_P=math.sqrt(var_P), m_Q=m_Q, sigma_Q=math.sqrt(var_Q)
        )

    def shifted(self, c: float) -> "MomentSpec":
        """both means moved by c"""
        return MomentSpec(
            m_P=self.m_P + c,
            sigma_P=self.sigma_P,
            m_Q=self.m_Q + c,
            sigma_Q=self.sigma_Q,
        )

    @property
    def equal_variances(self) -> bool:
        return self.sigma_P == self.sigma_Q

    def to_json(self) -> dict:
        return dict(
            m_P=self.m_P,
            sigma_P=self.sigma_P,
            m_Q=self.m_Q,
            sigma_Q=self.sigma_Q,
            a=self.a,
        )


@dataclass(frozen=True)
class BoundResult:
    """
    A lower bound g(argument) together with the pair attaining it, when one
    is known.

    Attributes
    ----------
    bound_value: float
        g(argument); may be +inf.

    argument: float
        The t in [0, 1] fed to g.

    attained_pair: tuple, optional
        (R, R^dagger) achieving the bound.

    tight: bool
        True only when attainment is established: always for the bound under
        given triangular discrimination, and under given moments iff the
        variances are equal.

    kind: str
        "theorem1", "theorem2" or "tv".

    remark_based: bool
        True for the total variation variant, which is stated without its
        own hypothesis.
    """

    bound_value: float
    argument: float
    attained_pair: Optional[DistPair]
    tight: bool
    kind: str
    generator: str
    remark_based: bool = False

    def to_json(self) -> dict:
        body = dict(
            bound=self.bound_value,
            argument=self.argument,
            tight=self.tight,
            kind=self.kind,
            generator=self.generator,
            remark_based=self.remark_based,
            attained_pair=None,
        )
        if self.attained_pair:
            P, Q = self.attained_pair
            body["attained_pair"] = dict(P=P.to_json(), Q=Q.to_json())
        return body


def _unit_interval(name: str, value: float) -> float:
    if not 0.0 <= value <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1]: {value!r}")
    return float(value)


def theorem1_bound(
    bd: BinaryDivergence, d: float, certificate: Optional[ConditionCertificate] = None
) -> BoundResult:
    """
    The tight lower bound g(sqrt(d)) of the symmetrized divergence over all
    pairs with triangular discrimination d.

    Parameters
    ----------
    bd:
        Binary divergence of the generator.

    d:
        Triangular discrimination in [0, 1].

    certificate:
        A condition certificate to use in place of the cached default one.

    Raises
    ------
    DomainError
        d outside [0, 1].

    PreconditionError
        The certificate is not satisfied; it is attached to the exception.
    """
    d = _unit_interval("d", d)
    require_condition(bd, certificate)

    t = math.sqrt(d)
    return BoundResult(
        bound_value=bd(t),
        argument=t,
        attained_pair=binary_pair(t),
        tight=True,
        kind="theorem1",
        generator=bd.name,
    )


def tv_bound(bd: BinaryDivergence, tv: float) -> BoundResult:
    """
    The tight lower bound g(tv) under a given total variation distance
    (normalised as sum |p - q| / 2).  Only convexity of f is needed, so no
    certificate is checked.
    """
    tv = _unit_interval("tv", tv)
    return BoundResult(
        bound_value=bd(tv),
        argument=tv,
        attained_pair=binary_pair(tv),
        tight=True,
        kind="tv",
        generator=bd.name,
        remark_based=True,
    )


def theorem2_s(spec: MomentSpec) -> float:
    """
    s = |a| / sqrt(2 (sigma_P^2 + sigma_Q^2) + a^2), and 0 when every moment
    difference vanishes.
    """
    denom = math.sqrt(2.0 * (spec.sigma_P ** 2 + spec.sigma_Q ** 2) + spec.a ** 2)
    if denom == 0.0:
        return 0.0
    return min(1.0, abs(spec.a) / denom)


def theorem2_bound(
    bd: BinaryDivergence,
    spec: MomentSpec,
    certificate: Optional[ConditionCertificate] = None,
) -> BoundResult:
    """
    The lower bound g(s) of the symmetrized divergence over pairs with the
    given moments.  With equal variances the bound is attained by
    `lemma3_pair(spec)`; otherwise it is reported as not tight.

    Raises
    ------
    PreconditionError
        The certificate is not satisfied.
    """
    require_condition(bd, certificate)

    s = theorem2_s(spec)
    tight = spec.equal_variances
    if not tight:
        _LOG.debug(f"theorem2 {bd.name}: unequal variances, bound not tight")

    return BoundResult(
        bound_value=bd(s),
        argument=s,
        attained_pair=lemma3_pair(spec) if tight else None,
        tight=tight,
        kind="theorem2",
        generator=bd.name,
    )


def lemma3_pair(spec: MomentSpec) -> DistPair:
    """
    The swapped two-point pair with the requested means and common variance
    sigma^2, on the points c -/+ x sign(a), where c = (m_P + m_Q)/2 and
    x = sqrt(4 sigma^2 + a^2)/2, with masses ((1-r)/2, (1+r)/2) and
    r = |a| / (2x).  sign(0) is taken as 1.

    Raises
    ------
    PreconditionError
        sigma_P != sigma_Q.
    """
    if not spec.equal_variances:
        raise PreconditionError(
            f"lemma3_pair needs equal variances: "
            f"sigma_P={spec.sigma_P}, sigma_Q={spec.sigma_Q}"
        )

    c = 0.5 * (spec.m_P + spec.m_Q)
    x = 0.5 * math.sqrt(4.0 * spec.sigma_P ** 2 + spec.a ** 2)

    if x == 0.0:
        point = DiscreteDist.point_mass(c)
        return point, point

    sign = 1.0 if spec.a >= 0 else -1.0
    r = min(1.0, abs(spec.a) / (2.0 * x))

    support = np.array([c - x * sign, c + x * sign])
    p_mass = np.array([(1.0 - r) / 2.0, (1.0 + r) / 2.0])
    order = np.argsort(support)

    return (
        DiscreteDist(support=support[order], mass=p_mass[order]),
        DiscreteDist(support=support[order], mass=p_mass[::-1][order]),
    )
