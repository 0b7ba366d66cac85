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
from divbound.thermo import MarkovSystem, thermo_report, random_system

# -----------------------------------------------------------------------------
#
#                                 CODE BEGINS
#
# -----------------------------------------------------------------------------

# a relaxing system used for the convergence of the identity gaps
RELAXING_P0 = (0.6, 0.3, 0.1)
RELAXING_STEPS = (0.02, 0.01)


def biased_ring(**kwargs) -> MarkovSystem:
    """3-state ring, forward rate 2 and backward rate 1, at stationarity"""
    return MarkovSystem.ring(3, forward=2.0, backward=1.0, **kwargs)


def heterogeneous_ring(**kwargs) -> MarkovSystem:
    """3-state ring with edge rates (5, 1), (2, 1), (3, 1)"""
    return MarkovSystem.ring(3, forward=[5.0, 2.0, 3.0], backward=1.0, **kwargs)


class ThermoChecksMixin(VerifyBase):
    """Acceptance check of the entropy production identities and bound."""

    @check(8)
    def thermo_identities(self, n_systems: int = 100):
        problems = []

        ring = thermo_report(biased_ring(tau=1.0, dt=1e-3))
        for name, got, want in (
            ("sigma", ring.sigma, math.log(2.0)),
            ("activity", ring.activity, 3.0),
            ("sigma_ps", ring.sigma_ps, 2.0 / 3.0),
        ):
            if abs(got - want) > 1e-6:
                problems.append(name)

        if max(ring.kl_identity_gap, ring.td_identity_gap) > 1e-6:
            problems.append("ring identity gaps")

        if abs(ring.bound_slack) > 1e-8:
            problems.append("ring equality")

        if thermo_report(heterogeneous_ring()).bound_slack <= 0:
            problems.append("heterogeneous slack")

        coarse, fine = (
            thermo_report(heterogeneous_ring(p0=RELAXING_P0, dt=dt))
            for dt in RELAXING_STEPS
        )
        for field in ("kl_identity_gap", "td_identity_gap"):
            before, after = getattr(coarse, field), getattr(fine, field)
            if before > 1e-12 and after > before / 3.0:
                problems.append(f"{field} convergence")

        rng = self.rng(8)
        worst = min(
            thermo_report(random_system(rng)).bound_slack for _ in range(n_systems)
        )
        if worst < -1e-8:
            problems.append(f"random slack {worst:.3e}")

        if problems:
            return False, f"problems: {problems}"
        return True, "identities and bound hold"
