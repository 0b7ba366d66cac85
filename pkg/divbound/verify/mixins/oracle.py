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
from divbound.fgen import get_generator
from divbound.oracle import min_symmetrized_given_td

# -----------------------------------------------------------------------------
#
#                                 CODE BEGINS
#
# -----------------------------------------------------------------------------

ORACLE_GENERATORS = ("td", "kl", "hellinger", "js")
ORACLE_DELTAS = (0.1, 0.25, 0.5)
ORACLE_VALUE_TOL = 5e-3


class OracleChecksMixin(VerifyBase):
    """Acceptance check of the closed-form bound against brute-force search."""

    @check(5)
    def oracle_equivalence(self, resolution: int = 100):
        """the searched minimum agrees with g(sqrt(d)) within 5e-3"""
        worst = 0.0
        for name in ORACLE_GENERATORS:
            gen = get_generator(name)
            bd = make_binary(gen)
            for d in ORACLE_DELTAS:
                for support_size in (2, 3):
                    found = min_symmetrized_given_td(gen, d, support_size, resolution)
                    worst = max(worst, abs(found - bd(math.sqrt(d))))

        return worst <= ORACLE_VALUE_TOL, f"max gap {worst:.3e}"
