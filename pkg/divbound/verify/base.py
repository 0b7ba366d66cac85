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

from typing import Optional, Iterable, List, Tuple
from dataclasses import dataclass, asdict
from functools import wraps
import logging
import time

# -----------------------------------------------------------------------------
# Public Imports
# -----------------------------------------------------------------------------

import numpy as np

# -----------------------------------------------------------------------------
# Private Imports
# -----------------------------------------------------------------------------

import divbound
from divbound.config import Settings
from divbound.errors import DivboundError

# -----------------------------------------------------------------------------
# Exports
# -----------------------------------------------------------------------------

__all__ = ["VerifyBase", "CheckResult", "check"]

# -----------------------------------------------------------------------------
#
#                                 CODE BEGINS
#
# -----------------------------------------------------------------------------

_LOG = logging.getLogger(divbound.__package__)

CheckOutcome = Tuple[bool, str]


@dataclass(frozen=True)
class CheckResult:
    """outcome of one acceptance check"""

    order: int
    name: str
    passed: bool
    detail: str
    elapsed: float

    def to_json(self, timings: bool = False) -> dict:
        body = asdict(self)
        if not timings:
            body.pop("elapsed")
        return body


def check(order: int):
    """
    Method decorator for every acceptance check.  The wrapped method returns
    a (passed, detail) tuple; the decorator times it, turns a raised
    DivboundError into a failed result, and returns a CheckResult.  `order`
    fixes the position of the check in a run.
    """

    def decorator(meth):
        @wraps(meth)
        def wrapper(self, **kwargs) -> CheckResult:
            started = time.perf_counter()
            try:
                passed, detail = meth(self, **kwargs)
            except DivboundError as exc:
                passed, detail = False, f"{type(exc).__name__}: {exc}"

            result = CheckResult(
                order=order,
                name=meth.__name__,
                passed=bool(passed),
                detail=detail,
                elapsed=time.perf_counter() - started,
            )
            _LOG.debug(
                f"check {result.name}: passed={result.passed} "
                f"in {result.elapsed:.3f}s; {result.detail}"
            )
            return result

        wrapper.check_order = order
        return wrapper

    return decorator


class VerifyBase(object):
    """
    The VerificationSuite is composed of one or more Mixins that are a
    subclass of VerifyBase.  VerifyBase holds the settings and the seeded
    random streams shared by every check, and runs the checks the Mixins
    define in their declared order.
    """

    def __init__(self, /, *mixin_classes, settings: Optional[Settings] = None):
        """
        Parameters
        ----------
        mixin_classes:
            Mixins to add to this instance at creation.

        settings:
            Run settings; taken from the environment when not given.
        """
        self.settings = settings or Settings.from_env()

        # dynamically add any Mixins at the time of suite creation.

        if mixin_classes:
            self.mixin(*mixin_classes)

    def rng(self, stream: int = 0) -> np.random.Generator:
        """
        A fresh generator for the settings seed; each check draws from its
        own stream so its inputs do not depend on which checks ran before.
        """
        return np.random.default_rng([self.settings.seed, stream])

    def mixin(self, *mixin_cls):
        """
        Dynamically add Mixin classes to this instance.

        References
        ----------
        https://stackoverflow.com/questions/8544983/dynamically-mixin-a-base-class-to-an-instance-in-python
        """
        self.__class__ = type(self.__class__.__name__, (self.__class__, *mixin_cls), {})

    def checks(self) -> List[str]:
        """names of the available checks, in run order"""
        found = {}
        for klass in type(self).__mro__:
            for name, attr in vars(klass).items():
                if (order := getattr(attr, "check_order", None)) is not None:
                    found.setdefault(name, order)
        return sorted(found, key=lambda name: (found[name], name))

    def run(self, only: Optional[Iterable[str]] = None) -> List[CheckResult]:
        """
        Run the checks, or only those named, and return their results in run
        order.
        """
        names = self.checks()
        if only is not None:
            wanted = set(only)
            if unknown := wanted - set(names):
                raise ValueError(f"unknown checks: {sorted(unknown)}")
            names = [name for name in names if name in wanted]

        return [getattr(self, name)() for name in names]

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}: seed={self.settings.seed}"
