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
This file contains the helpers for defining a custom f-generator from a
string expression in the variable `t`.  The expression is compiled into a
numpy-vectorised callable, so the resulting generator can be used anywhere a
catalog generator can.

Examples
--------
Kullback-Leibler:

    "t * log(t)"
    "xlogx(t)"

Triangular discrimination:

    "(1 - t)^2 / (2 * (1 + t))"

Squared Hellinger distance:

    "0.5 * (sqrt(t) - 1)**2"

Notes
-----
Operators, in increasing precedence:

    +  -        addition, subtraction
    *  /        multiplication, division
    -           unary minus
    ^  **       power (right associative)

Functions: log (natural), sqrt, exp, abs, xlogx (x log x with 0 log 0 = 0).

References
----------
    Parsimonious:
    https://github.com/erikrose/parsimonious
"""
# -----------------------------------------------------------------------------
# System Imports
# -----------------------------------------------------------------------------

from typing import Callable, Optional
from types import MappingProxyType
import logging
import math

# -----------------------------------------------------------------------------
# Public Imports
# -----------------------------------------------------------------------------

import numpy as np
from scipy.special import xlogy
from parsimonious import Grammar, NodeVisitor
from parsimonious.exceptions import ParseError, VisitationError

# -----------------------------------------------------------------------------
# Private Imports
# -----------------------------------------------------------------------------

import divbound
from .consts import GeneratorName
from .errors import ExpressionError
from .fgen import FGenerator

# -----------------------------------------------------------------------------
# Exports
# -----------------------------------------------------------------------------

__all__ = ["parse_expr", "custom_generator"]

# -----------------------------------------------------------------------------
#
#                                 CODE BEGINS
#
# -----------------------------------------------------------------------------

_LOG = logging.getLogger(divbound.__package__)

_FUNCTIONS = MappingProxyType(
    {
        "log": np.log,
        "sqrt": np.sqrt,
        "exp": np.exp,
        "abs": np.abs,
        "xlogx": lambda x: xlogy(x, x),
    }
)

_OPERATORS = MappingProxyType(
    {
        "+": np.add,
        "-": np.subtract,
        "*": np.multiply,
        "/": np.divide,
        "^": np.power,
        "**": np.power,
    }
)


EXPR_GRAMMAR = r"""
#
# Expression parts
#
expr        = ws term (ws add_op ws term)* ws
term        = unary (ws mul_op ws unary)*
unary       = neg_op? ws power
power       = atom (ws pow_op ws unary)?
atom        = call / group / number / var
call        = func_name ws "(" ws expr ws ")"
group       = "(" ws expr ws ")"
#
# Token parts
#
func_name   = "xlogx" / "log" / "sqrt" / "exp" / "abs"
number      = ~r"(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?"
var         = "t"
add_op      = "+" / "-"
pow_op      = "**" / "^"
mul_op      = "*" / "/"
neg_op      = "-"
ws          = ~r"\s*"
"""

_grammar = Grammar(EXPR_GRAMMAR)


def _repeated(vc):
    """children of a `*` or `?` node, or none when the node matched nothing"""
    return vc if isinstance(vc, list) else []


class _ExprCompiler(NodeVisitor):
    """parsimonious node visitor that compiles EXPR_GRAMMAR into a callable"""

    def visit_expr(self, node, vc):  # noqa
        """fold the additive chain left to right"""
        _, fn, rest, _ = vc
        for _, op, _, rhs in _repeated(rest):
            fn = _apply(_OPERATORS[op], fn, rhs)
        return fn

    def visit_term(self, node, vc):  # noqa
        """fold the multiplicative chain left to right"""
        fn, rest = vc
        for _, op, _, rhs in _repeated(rest):
            fn = _apply(_OPERATORS[op], fn, rhs)
        return fn

    def visit_power(self, node, vc):  # noqa
        """power binds right: the exponent may itself carry a sign or a power"""
        fn, power = vc
        for _, op, _, rhs in _repeated(power):
            fn = _apply(_OPERATORS[op], fn, rhs)
        return fn

    def visit_unary(self, node, vc):  # noqa
        neg, _, fn = vc
        if _repeated(neg):
            return lambda t, _fn=fn: np.negative(_fn(t))
        return fn

    def visit_atom(self, node, vc):  # noqa
        return vc[0]

    def visit_call(self, node, vc):  # noqa
        """apply a named function to the argument expression"""
        name, _, _, _, arg, *_ = vc
        func = _FUNCTIONS[name]
        return lambda t: func(arg(t))

    def visit_group(self, node, vc):  # noqa
        return vc[2]

    # -------------------------------------------------------------------------
    #                      Token Expressions
    # -------------------------------------------------------------------------

    def visit_func_name(self, node, vc):  # noqa
        return node.text

    def visit_number(self, node, vc):  # noqa
        """a constant, broadcast to the shape of `t`"""
        value = float(node.text)
        return lambda t: np.full_like(np.asarray(t, dtype=float), value)

    def visit_var(self, node, vc):  # noqa
        return lambda t: np.asarray(t, dtype=float)

    def visit_add_op(self, node, vc):  # noqa
        return node.text

    def visit_mul_op(self, node, vc):  # noqa
        return node.text

    def visit_pow_op(self, node, vc):  # noqa
        return node.text

    def visit_neg_op(self, node, vc):  # noqa
        return node.text

    def generic_visit(self, node, visited_children):
        """pass through for nodes not explicility visited"""
        return visited_children or node


def _apply(op, lhs, rhs):
    return lambda t: op(lhs(t), rhs(t))


_compiler = _ExprCompiler()


def parse_expr(text: str) -> Callable[[np.ndarray], np.ndarray]:
    """
    Compile an expression in the variable `t` into a vectorised callable.

    Parameters
    ----------
    text
        The expression, for example "t * log(t)".

    Raises
    ------
    ExpressionError
        The text does not match the grammar.
    """
    try:
        tree = _grammar.parse(text.strip().replace("\n", " "))
        return _compiler.visit(tree)
    except (ParseError, VisitationError) as exc:
        raise ExpressionError(f"cannot parse expression {text!r}: {exc}")


# -----------------------------------------------------------------------------
#
#                            CUSTOM GENERATORS
#
# -----------------------------------------------------------------------------


def _central_first(f, h_rel=1e-5):
    def f1(t):
        t = np.asarray(t, dtype=float)
        h = np.minimum(h_rel * np.maximum(1.0, t), 0.5 * t)
        return (f(t + h) - f(t - h)) / (2.0 * h)

    return f1


def _central_second(f, h_rel=1e-4):
    def f2(t):
        t = np.asarray(t, dtype=float)
        h = np.minimum(h_rel * np.maximum(1.0, t), 0.5 * t)
        return (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h)

    return f2


def _estimate_limit(values) -> float:
    """
    Decide between a finite limit and +inf from a pair of evaluations taken
    far apart along the approach; a value still growing is read as +inf.
    """
    near, far = (float(v) for v in values)
    if not math.isfinite(far) or far > 1e6:
        return math.inf
    if far - near > 1e-3 * (1.0 + abs(near)):
        return math.inf
    return far


def custom_generator(
    text: str,
    f_at_0: Optional[float] = None,
    slope_at_inf: Optional[float] = None,
    name: str = GeneratorName.custom.value,
) -> FGenerator:
    """
    Build an FGenerator from an expression.  The derivatives come from central
    differences.  When the limits are not supplied they are estimated
    numerically; supply them when the generator is known to have a slowly
    diverging limit (for example log-type growth), which the estimate may
    read as finite.

    Raises
    ------
    ExpressionError
        The text does not parse.

    ValidationError
        The compiled f violates f(1) = 0 or strict convexity.
    """
    f = parse_expr(text)

    def f_safe(t):
        with np.errstate(all="ignore"):
            return f(t)

    if f_at_0 is None:
        f_at_0 = _estimate_limit(f_safe(np.array([1e-8, 1e-12])))
        _LOG.debug(f"custom generator {text!r}: estimated f(0) = {f_at_0}")

    if slope_at_inf is None:
        u = np.array([1e6, 1e12])
        slope_at_inf = _estimate_limit(f_safe(u) / u)
        _LOG.debug(f"custom generator {text!r}: estimated slope = {slope_at_inf}")

    return FGenerator(
        name=name,
        f=f_safe,
        f1=_central_first(f_safe),
        f2=_central_second(f_safe),
        f_at_0=f_at_0,
        slope_at_inf=slope_at_inf,
    )
