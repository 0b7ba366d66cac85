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

from typing import Optional, Tuple

# -----------------------------------------------------------------------------
# Public Imports
# -----------------------------------------------------------------------------

import numpy as np

# -----------------------------------------------------------------------------
# Private Imports
# -----------------------------------------------------------------------------

from .fgen import DiscreteDist

# -----------------------------------------------------------------------------
# Exports
# -----------------------------------------------------------------------------

__all__ = ["random_simplex", "random_support", "random_pair"]

# -----------------------------------------------------------------------------
#
#                                 CODE BEGINS
#
# -----------------------------------------------------------------------------

SUPPORT_RANGE = (-3.0, 3.0)


def random_simplex(rng: np.random.Generator, size: int) -> np.ndarray:
    """uniform draw from the probability simplex by normalised exponentials"""
    weights = rng.exponential(size=size)
    return weights / weights.sum()


def random_support(rng: np.random.Generator, size: int) -> np.ndarray:
    """sorted uniform draws from [-3, 3], re-drawn until the points are distinct"""
    while True:
        support = np.sort(rng.uniform(*SUPPORT_RANGE, size=size))
        if np.all(np.diff(support) > 0):
            return support


def random_pair(
    rng: np.random.Generator, size: Optional[int] = None, max_size: int = 8
) -> Tuple[DiscreteDist, DiscreteDist]:
    """
    A random aligned pair on one support.  The support size is drawn from
    [2, max_size] unless given.
    """
    if size is None:
        size = int(rng.integers(2, max_size + 1))

    support = random_support(rng, size)
    return (
        DiscreteDist(support=support, mass=random_simplex(rng, size)),
        DiscreteDist(support=support, mass=random_simplex(rng, size)),
    )
