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

"""
Exceptions raised by the divbound package.  Each one also subclasses the
builtin exception that best describes it, so callers that only know about
ValueError or RuntimeError still catch them.
"""

# -----------------------------------------------------------------------------
# Exports
# -----------------------------------------------------------------------------

__all__ = [
    "DivboundError",
    "ValidationError",
    "AlignmentError",
    "ExpressionError",
    "DomainError",
    "PreconditionError",
    "EvaluationError",
    "SearchError",
    "ConstructionError",
    "StepSizeError",
    "DegenerateSystemError",
]


# -----------------------------------------------------------------------------
#
#                                 CODE BEGINS
#
# -----------------------------------------------------------------------------


class DivboundError(Exception):
    """root of all divbound exceptions"""


class ValidationError(DivboundError, ValueError):
    """an input object violates its invariants"""


class AlignmentError(ValidationError):
    """two distributions are not defined on the same support list"""


class ExpressionError(ValidationError):
    """a custom generator expression failed to parse"""


class DomainError(DivboundError, ValueError):
    """an argument lies outside the domain of the operation"""


class PreconditionError(DivboundError, RuntimeError):
    """
    A theorem precondition does not hold.  When the failing precondition is
    the sufficient condition on the binary divergence, the certificate that
    shows the violation is available as `certificate`.
    """

    def __init__(self, message: str, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class EvaluationError(DivboundError, ArithmeticError):
    """a numeric evaluation produced a non-finite value where one is required"""

    def __init__(self, message: str, t=None):
        super().__init__(message)
        self.t = t


class SearchError(DivboundError, RuntimeError):
    """the brute-force oracle found no feasible candidate"""


class ConstructionError(DivboundError, RuntimeError):
    """a closed-form construction has no real solution"""


class StepSizeError(DivboundError, RuntimeError):
    """the master-equation integrator left the simplex; use a smaller dt"""


class DegenerateSystemError(DivboundError, RuntimeError):
    """the Markov system has zero dynamical activity"""
