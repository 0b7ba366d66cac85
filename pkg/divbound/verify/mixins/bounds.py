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

# -----------------------------------------------------------------------------
# System Imports
# -----------------------------------------------------------------------------

import math

# -----------------------------------------------------------------------------
# Private Imports
# -----------------------------------------------------------------------------

from divbound.verify.base import VerifyBase, check
from divbound.binary import make_binary
from divbound.bounds import MomentSpec, theorem1_bound, theorem2_s, lemma3_pair
from divbound.fgen import (
    catalog,
    moments,
    symmetrized_divergence,
    triangular_discrimination,
)
from divbound.sampling import random_pair

# -----------------------------------------------------------------------------
#
#                                 CODE BEGINS
#
# -----------------------------------------------------------------------------

TIGHTNESS_DELTAS = (0.01, 0.1, 0.25, 0.5, 0.81)


def _close(a: float, b: float, tol: float) -> bool:
    """absolute tolerance below 1, relative above"""
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= tol * max(1.0, abs(b))


class BoundsChecksMixin(VerifyBase):
    """
    Acceptance checks of the two bounds:
        - tightness under a given triangular discrimination
        - lower bound over random pairs
        - tightness under equal variances
    """

    @check(3)
    def theorem1_tightness(self):
        """the attaining binary pair reaches the bound and the constraint"""
        misses = []
        for gen in catalog():
            bd = make_binary(gen)
            for d in TIGHTNESS_DELTAS:
                result = theorem1_bound(bd, d)
                P, Q = result.attained_pair
                value = symmetrized_divergence(gen, P, Q)
                if not (
                    _close(value, result.bound_value, self.settings.tol)
                    and abs(triangular_discrimination(P, Q) - d) <= 1e-12
                ):
                    misses.append((gen.name, d))

        return not misses, f"misses: {misses}" if misses else "all attained"

    @check(4)
    def theorem1_lower_bound(self, n_pairs: int = 1000):
        """symmetrized divergence >= g(sqrt(Delta)) on random pairs"""
        rng = self.rng(4)
        bds = [(gen, make_binary(gen)) for gen in catalog()]
        violations = 0

        for _ in range(n_pairs):
            P, Q = random_pair(rng)
            t = math.sqrt(min(1.0, triangular_discrimination(P, Q)))
            for gen, bd in bds:
                bound = bd(t)
                slack = self.settings.tol * max(1.0, bound)
                if symmetrized_divergence(gen, P, Q) < bound - slack:
                    violations += 1

        return violations == 0, f"{violations} violations over {n_pairs} pairs"

    @check(6)
    def theorem2_equal_variances(self, n_triples: int = 100):
        """the equal-variance pair has the requested moments and attains g(r)"""
        rng = self.rng(6)
        tol = self.settings.tol
        bds = [(gen, make_binary(gen)) for gen in catalog()]
        misses = 0

        for _ in range(n_triples):
            m_p, m_q = rng.uniform(-2.0, 2.0, size=2)
            sigma = rng.uniform(0.1, 2.0)
            spec = MomentSpec(m_P=m_p, sigma_P=sigma, m_Q=m_q, sigma_Q=sigma)
            P, Q = lemma3_pair(spec)

            (mean_p, var_p), (mean_q, var_q) = moments(P), moments(Q)
            ok = all(
                abs(got - want) <= tol
                for got, want in (
                    (mean_p, m_p),
                    (mean_q, m_q),
                    (var_p, sigma ** 2),
                    (var_q, sigma ** 2),
                )
            )

            s = theorem2_s(spec)
            ok &= abs(theorem2_s(spec.shifted(rng.uniform(-5.0, 5.0))) - s) <= 1e-12
            ok &= all(
                _close(symmetrized_divergence(gen, P, Q), bd(s), tol) for gen, bd in bds
            )
            misses += not ok

        return misses == 0, f"{misses} misses over {n_triples} triples"
