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

from divbound.fgen import (
    FGenerator,
    DiscreteDist,
    f_divergence,
    symmetrized_divergence,
    catalog,
    get_generator,
    binary_pair,
)

from divbound.binary import BinaryDivergence, make_binary, inverse_G, check_condition
from divbound.bounds import MomentSpec, BoundResult, theorem1_bound, theorem2_bound
from divbound.config import Settings

__all__ = [
    "FGenerator",
    "DiscreteDist",
    "f_divergence",
    "symmetrized_divergence",
    "catalog",
    "get_generator",
    "binary_pair",
    "BinaryDivergence",
    "make_binary",
    "inverse_G",
    "check_condition",
    "MomentSpec",
    "BoundResult",
    "theorem1_bound",
    "theorem2_bound",
    "Settings",
]
