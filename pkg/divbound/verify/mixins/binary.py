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

from types import MappingProxyType

# -----------------------------------------------------------------------------
# Public Imports
# -----------------------------------------------------------------------------

import numpy as np

# -----------------------------------------------------------------------------
# Private Imports
# -----------------------------------------------------------------------------

from divbound.verify.base import VerifyBase, check
from divbound.binary import (
    BinaryDivergence,
    make_binary,
    check_condition,
    derivative_lower_bound,
    inverse_G,
)
from divbound.fgen import catalog, get_generator

# -----------------------------------------------------------------------------
#
#                                 CODE BEGINS
#
# -----------------------------------------------------------------------------

CLOSED_FORMS = MappingProxyType(
    {
        "td": lambda t: t ** 2,
        "hellinger": lambda t: 1.0 - np.sqrt(1.0 - t ** 2),
        "js": lambda t: (1 + t) / 2 * np.log(1 + t) + (1 - t) / 2 * np.log(1 - t),
        "kl": lambda t: t * np.log((1 + t) / (1 - t)),
    }
)


def sqrt_control() -> BinaryDivergence:
    """g(t) = sqrt(t), whose g'(t)/t decreases"""
    return BinaryDivergence.from_functions(
        g=np.sqrt,
        g1=lambda t: 0.5 / np.sqrt(t),
        g2=lambda t: -0.25 * np.asarray(t, dtype=float) ** -1.5,
        g_at_1=1.0,
        name="sqrt",
    )


class BinaryChecksMixin(VerifyBase):
    """
    Acceptance checks of the binary divergences:
        - closed forms
        - condition certificates
        - inverse round trip
    """

    @check(1)
    def binary_closed_forms(self):
        """g matches the closed forms on a 99-point grid within 1e-12"""
        grid = np.linspace(0.01, 0.99, 99)
        worst = 0.0
        for name, closed in CLOSED_FORMS.items():
            expected = closed(grid)
            got = make_binary(get_generator(name)).g(grid)
            error = np.abs(got - expected) / np.maximum(1.0, expected)
            worst = max(worst, float(np.max(error)))

        return worst <= 1e-12, f"max relative error {worst:.3e}"

    @check(2)
    def condition_certificates(self):
        """
        every catalog generator passes its certificate and has g' > 0;
        g = sqrt(t) fails the certificate
        """
        grid_size, tol_cond = self.settings.grid_size, self.settings.tol_cond
        grid = np.linspace(0.05, 0.95, 19)
        failed = []
        for gen in catalog():
            bd = make_binary(gen)
            cert = check_condition(bd, grid_size, tol_cond)
            if not (cert.satisfied and cert.min_margin >= -tol_cond):
                failed.append(gen.name)

            lower = derivative_lower_bound(gen, grid)
            if not (np.all(lower > 0) and np.all(bd.g1(grid) > lower)):
                failed.append(f"{gen.name} slope")

        control = check_condition(sqrt_control(), grid_size, tol_cond)
        if control.satisfied:
            failed.append("sqrt control")

        if failed:
            return False, f"failed: {failed}"
        return True, "all certificates as expected"

    @check(9)
    def inverse_round_trip(self):
        """g(G(T)) = T within 1e-10 over [0, g(0.99)]"""
        worst = 0.0
        for gen in catalog():
            bd = make_binary(gen)
            for T in np.linspace(0.0, bd(0.99), 50):
                worst = max(worst, abs(bd(inverse_G(bd, T, self.settings.tol_inv)) - T))

        return worst <= 1e-10, f"max residual {worst:.3e}"
