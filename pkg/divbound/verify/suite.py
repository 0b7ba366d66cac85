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

from typing import List, Dict, Optional, Union, TextIO, AnyStr
from contextlib import nullcontext
import csv

# -----------------------------------------------------------------------------
# Private Imports
# -----------------------------------------------------------------------------

from divbound.verify.mixins.binary import BinaryChecksMixin
from divbound.verify.mixins.bounds import BoundsChecksMixin
from divbound.verify.mixins.inequalities import InequalityChecksMixin
from divbound.verify.mixins.oracle import OracleChecksMixin
from divbound.verify.mixins.thermo import ThermoChecksMixin

# -----------------------------------------------------------------------------
# Exports
# -----------------------------------------------------------------------------

__all__ = ["VerificationSuite"]


# -----------------------------------------------------------------------------
#
#                                 CODE BEGINS
#
# -----------------------------------------------------------------------------


class VerificationSuite(
    BinaryChecksMixin,
    BoundsChecksMixin,
    OracleChecksMixin,
    InequalityChecksMixin,
    ThermoChecksMixin,
):
    """
    The VerificationSuite runs the acceptance checks of the package with a
    fixed seed; two runs with the same settings produce the same report.

    The suite is composed of mixins, each of which covers one part of the
    package.  Additional checks are added by defining a subclass of
    `VerifyBase` with methods decorated by `check`, and mixing it in.

    Examples
    --------
        from divbound.verify import VerificationSuite, VerifyBase, check

        class MyChecks(VerifyBase):
            @check(10)
            def my_check(self):
                return True, "ok"

        suite = VerificationSuite(MyChecks)
        results = suite.run()
    """

    @staticmethod
    def to_csv(
        datalist: List[Dict],
        file: Union[AnyStr, TextIO],
        fieldnames: Optional[List[str]] = None,
        exclude: Optional[List[str]] = None,
    ) -> None:
        """
        Store the given list of dict items as CSV, to a file path or an open
        text stream.  The CSV column headers are taken from the first item's
        keys unless `fieldnames` is given.  The `exclude` list omits the
        designated columns, for example ['elapsed'].

        Raises
        ------
        ValueError
            `fieldnames` names a column the items do not have.
        """
        if not datalist:
            return

        dl_fieldnames = list(datalist[0].keys())

        if fieldnames:
            if unknown := set(fieldnames) - set(dl_fieldnames):
                raise ValueError(f"Invalid set of fieldnames: {sorted(unknown)}")
        else:
            fieldnames = dl_fieldnames

        if exclude:
            fieldnames = [col for col in fieldnames if col not in exclude]

        opener = (
            nullcontext(file)
            if hasattr(file, "write")
            else open(file, "w", newline="")
        )
        with opener as ofile:
            csv_wr = csv.DictWriter(ofile, fieldnames=fieldnames, extrasaction="ignore")
            csv_wr.writeheader()
            csv_wr.writerows(datalist)
