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
# Private Imports
# -----------------------------------------------------------------------------

from divbound.verify.base import VerifyBase, check
from divbound.bounds import MomentSpec
from divbound.fgen import DiscreteDist
from divbound.inequalities import (
    hellinger_td_bound,
    js_td_bound,
    bhattacharyya_relation,
)
from divbound.oracle import td_two_point_attainment
from divbound.sampling import random_pair

# -----------------------------------------------------------------------------
#
#                                 CODE BEGINS
#
# -----------------------------------------------------------------------------


class InequalityChecksMixin(VerifyBase):
    """
    Acceptance check of the inequalities against triangular discrimination
    and of the two-point attainment under unequal variances.
    """

    @check(7)
    def inequalities(self, n_pairs: int = 1000):
        tol = self.settings.tol
        rng = self.rng(7)
        problems = []

        for _ in range(n_pairs):
            P, Q = random_pair(rng)
            for report in (hellinger_td_bound(P, Q), js_td_bound(P, Q)):
                if report.slack < -tol or report.improvement < -tol:
                    problems.append(report.name)

        same = DiscreteDist(support=[0, 1], mass=[0.3, 0.7])
        disjoint = (
            DiscreteDist(support=[0, 1], mass=[1.0, 0.0]),
            DiscreteDist(support=[0, 1], mass=[0.0, 1.0]),
        )
        for P, Q in ((same, same), disjoint):
            if abs(bhattacharyya_relation(P, Q).slack) > tol:
                problems.append("bhattacharyya equality")

        for spec, expected in (
            (MomentSpec(m_P=1.0, sigma_P=1.0, m_Q=0.0, sigma_Q=2.0), 1.0 / 11.0),
            (MomentSpec(m_P=1.0, sigma_P=1.0, m_Q=0.0, sigma_Q=1.0), 0.2),
        ):
            result = td_two_point_attainment(spec)
            if not (
                result.matches_s_squared
                and result.sedrakyan_equality
                and abs(result.delta - expected) <= tol
            ):
                problems.append(f"two-point attainment {spec.sigma_P}/{spec.sigma_Q}")

        if problems:
            return False, f"problems: {sorted(set(problems))}"
        return True, "all hold"
