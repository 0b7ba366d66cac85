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

from enum import Enum
import math

# -----------------------------------------------------------------------------
#
#                                    CODE BEGINS
#
# -----------------------------------------------------------------------------

# tolerance used when validating that masses sum to one and f(1) = 0
TOL_MASS = 1e-12

# condition certificate: t*g''(t) - g'(t) >= -TOL_COND
TOL_COND = 1e-9

# inverse G: |g(t) - T| <= TOL_INV * (1 + T)
TOL_INV = 1e-12

# g is evaluated on [0, 1 - EPS_EDGE]; g(1) comes from the generator limits
EPS_EDGE = 1e-9

BISECT_MAXITER = 200
BISECT_XTOL = 1e-15

DEFAULT_GRID_SIZE = 1000
MIN_GRID_SIZE = 100

# oracle
ORACLE_TD_CONSTRAINT_TOL = 1e-4
ORACLE_MOMENT_CONSTRAINT_TOL = 1e-6
ORACLE_REFINE_STARTS = 10
ORACLE_ESCALATIONS = 3

# thermo
TOL_SIMPLEX = 1e-12
TOL_NEGATIVE_PROB = 1e-9


class GeneratorName(str, Enum):
    """identifies the built-in f-generators of the catalog"""

    td = "td"
    kl = "kl"
    hellinger = "hellinger"
    js = "js"
    chi2 = "chi2"
    custom = "custom"


class LogBase(str, Enum):
    """output logarithm base; all internal values are in nats"""

    e = "e"
    two = "2"
    ten = "10"

    @property
    def factor(self) -> float:
        """multiply a value in nats by this factor to express it in this base"""
        return {
            LogBase.e: 1.0,
            LogBase.two: 1.0 / math.log(2.0),
            LogBase.ten: 1.0 / math.log(10.0),
        }[self]


class OutputFormat(str, Enum):
    json = "json"
    csv = "csv"
