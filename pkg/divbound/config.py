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

from typing import Optional, Callable, Any
from dataclasses import dataclass, replace as dc_replace
from os import getenv

# -----------------------------------------------------------------------------
# Private Imports
# -----------------------------------------------------------------------------

from .consts import LogBase, TOL_COND, TOL_INV, DEFAULT_GRID_SIZE, MIN_GRID_SIZE
from .errors import ValidationError

# -----------------------------------------------------------------------------
# Exports
# -----------------------------------------------------------------------------

__all__ = ["Settings"]


# -----------------------------------------------------------------------------
#
#                                 CODE BEGINS
#
# -----------------------------------------------------------------------------


@dataclass(frozen=True)
class Settings:
    """
    Run-wide numeric settings.  The values are taken, in order of precedence,
    from the Caller's keyword arguments, from the environment variables named
    in `Settings.ENV`, and from the class defaults.

    Attributes
    ----------
    seed: int
        Seed for every pseudo-random sweep; identical seeds give identical
        output.

    tol: float
        Acceptance tolerance used by the verification suite.

    tol_cond: float
        Slack allowed on t*g''(t) - g'(t) before the sufficient condition is
        declared violated.

    tol_inv: float
        Relative residual target of the inverse G root-finder.

    grid_size: int
        Number of Chebyshev nodes used by the condition certificate.

    log_base: LogBase
        Display base for divergence values.  Internally everything is nats.
    """

    @dataclass
    class ENV:
        """identifies enviornment variables used"""

        seed = "DIVBOUND_SEED"
        tol = "DIVBOUND_TOL"
        tol_cond = "DIVBOUND_TOL_COND"
        tol_inv = "DIVBOUND_TOL_INV"
        grid_size = "DIVBOUND_GRID"
        log_base = "DIVBOUND_LOG_BASE"

    seed: int = 0
    tol: float = 1e-10
    tol_cond: float = TOL_COND
    tol_inv: float = TOL_INV
    grid_size: int = DEFAULT_GRID_SIZE
    log_base: LogBase = LogBase.e

    def __post_init__(self):
        if self.seed < 0:
            raise ValidationError(f"seed must be non-negative: {self.seed}")

        for name in ("tol", "tol_cond", "tol_inv"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"{name} must be positive")

        if self.grid_size < MIN_GRID_SIZE:
            raise ValidationError(
                f"grid_size must be >= {MIN_GRID_SIZE}: {self.grid_size}"
            )

    @classmethod
    def from_env(
        cls,
        *,
        seed: Optional[int] = None,
        tol: Optional[float] = None,
        tol_cond: Optional[float] = None,
        tol_inv: Optional[float] = None,
        grid_size: Optional[int] = None,
        log_base: Optional[str] = None,
    ) -> "Settings":
        """
        Create a Settings instance.  Any parameter left as None is taken from
        its environment variable, and if that is not set, from the default.

        Raises
        ------
        ValidationError
            When an environment variable does not convert to its field type.
        """
        given = dict(
            seed=seed,
            tol=tol,
            tol_cond=tol_cond,
            tol_inv=tol_inv,
            grid_size=grid_size,
            log_base=log_base,
        )
        convert = dict(
            seed=int,
            tol=float,
            tol_cond=float,
            tol_inv=float,
            grid_size=int,
            log_base=LogBase,
        )

        fields = {}
        for name, value in given.items():
            if value is None:
                value = _from_env(getattr(cls.ENV, name), convert[name])
            elif name == "log_base":
                value = LogBase(value)
            if value is not None:
                fields[name] = value

        return cls(**fields)

    def replace(self, **changes) -> "Settings":
        """return a copy with the given fields changed"""
        return dc_replace(self, **changes)


def _from_env(var: str, convert: Callable[[str], Any]):
    """read and convert one environment variable, None when it is unset"""
    if (raw := getenv(var)) is None or raw == "":
        return None

    try:
        return convert(raw)
    except ValueError:
        raise ValidationError(f"{var}: invalid value {raw!r}")
