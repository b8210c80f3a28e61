"""A small expression language for functions and skew elements.

Expressions are ordinary Python syntax, parsed with :mod:`ast` and evaluated
against a fixed vocabulary (nothing is ``eval``-ed)::

    ddiff(1, 2) ∘ (x1 + x2) * phi(1, 0, 0)
    orbit((x1_1 - x2_1) * (x1_1 - x2_2) * phi(1, 0, 0))
    1 / (x1 - x2) * phi(0, 0) - 1 / (x1 - x2) * g(1)

Vocabulary:

* variables ``x1, x2, ...`` (one row) or ``xk_i`` (several rows), numbers and
  ``+ - * / **``; division is allowed by constants and by linear forms;
* ``phi(c1, ..., cN)`` the shift by a vector, ``g(i, j, ...)`` a group element
  given by a word in the simple reflections (1-based), ``one`` the identity;
* ``ddiff(i, j, ...)`` the divided difference of a word;
* ``sym(A)`` the sum of ``g.A`` over the whole group, ``orbit(A)`` the sum over
  distinct conjugates.

``∘`` (or ``@``) and ``*`` both mean composition once a skew element is
involved; a function next to a skew element means multiplication by it.
"""

from __future__ import annotations

import ast
from fractions import Fraction

from .arith import FactoredRationalFunction, Polynomial
from .errors import ConfigError, GZError
from .groups import ReflectionGroup
from .skew import SkewElement, divided_diff_word, orbit_sum, symmetrize

FRF = FactoredRationalFunction


def _variables(layout) -> dict:
    return {layout.name(j): j for j in range(layout.nvars)}


class _Evaluator:
    def __init__(self, group: ReflectionGroup):
        self.group = group
        self.layout = group.layout
        self.names = _variables(self.layout)

    # values are Fraction, FRF or SkewElement
    def lift(self, x):
        if isinstance(x, SkewElement):
            return x
        if isinstance(x, Fraction):
            x = FRF.constant(self.layout, x)
        return SkewElement.multiplication(self.group, x)

    def as_function(self, x):
        if isinstance(x, Fraction):
            return FRF.constant(self.layout, x)
        return x

    def visit(self, node):
        meth = getattr(self, "v_" + type(node).__name__, None)
        if meth is None:
            raise ConfigError("unsupported syntax: %s" % type(node).__name__)
        return meth(node)

    def v_Expression(self, node):
        return self.visit(node.body)

    def v_Constant(self, node):
        if isinstance(node.value, bool) or not isinstance(node.value, (int, float, str)):
            raise ConfigError("unsupported constant %r" % (node.value,))
        try:
            return Fraction(node.value) if not isinstance(node.value, float) else Fraction(str(node.value))
        except ValueError as exc:
            raise ConfigError("bad number %r" % (node.value,)) from exc

    def v_Name(self, node):
        if node.id in self.names:
            return FRF.from_polynomial(Polynomial.variable(self.layout, self.names[node.id]))
        if node.id == "one":
            return SkewElement.identity(self.group)
        raise ConfigError("unknown name %r (variables are %s)" % (node.id, ", ".join(sorted(self.names))))

    def v_UnaryOp(self, node):
        x = self.visit(node.operand)
        if isinstance(node.op, ast.USub):
            return -x if isinstance(x, Fraction) else x.scale(-1)
        if isinstance(node.op, ast.UAdd):
            return x
        raise ConfigError("unsupported unary operator")

    def v_BinOp(self, node):
        a, b = self.visit(node.left), self.visit(node.right)
        op = node.op
        skew = isinstance(a, SkewElement) or isinstance(b, SkewElement)
        if isinstance(op, (ast.Add, ast.Sub)):
            if skew:
                a, b = self.lift(a), self.lift(b)
            elif isinstance(a, Fraction) and isinstance(b, Fraction):
                return a + b if isinstance(op, ast.Add) else a - b
            else:
                a, b = self.as_function(a), self.as_function(b)
            return a + b if isinstance(op, ast.Add) else a - b
        if isinstance(op, (ast.Mult, ast.MatMult)):
            if isinstance(a, Fraction) and isinstance(b, Fraction):
                return a * b
            if skew:
                if isinstance(a, Fraction):
                    return b.scale(a)
                if isinstance(b, Fraction):
                    return a.scale(b)
                return self.lift(a) * self.lift(b)
            return self.as_function(a) * self.as_function(b)
        if isinstance(op, ast.Div):
            if isinstance(b, SkewElement):
                raise ConfigError("cannot divide by an operator")
            if isinstance(b, Fraction):
                if not b:
                    raise ConfigError("division by zero")
                return a / b if isinstance(a, Fraction) else a.scale(1 / b)
            if isinstance(a, SkewElement):
                raise ConfigError("write the function on the left: f * A, not A / f")
            return self.as_function(a) / b
        if isinstance(op, ast.Pow):
            if not isinstance(b, Fraction) or b.denominator != 1 or b < 0:
                raise ConfigError("exponent must be a nonnegative integer")
            if isinstance(a, Fraction):
                return a ** int(b)
            return a ** int(b)
        raise ConfigError("unsupported operator %s" % type(op).__name__)

    def _ints(self, node, fname):
        vals = [self.visit(x) for x in node.args]
        if any(not isinstance(v, Fraction) or v.denominator != 1 for v in vals):
            raise ConfigError("%s() takes integers" % fname)
        return [int(v) for v in vals]

    def _word(self, node, fname):
        word = self._ints(node, fname)
        rank = self.group.rank
        if any(i < 1 or i > rank for i in word):
            raise ConfigError("%s(): simple reflections are numbered 1..%d" % (fname, rank))
        return [i - 1 for i in word]

    def v_Call(self, node):
        if not isinstance(node.func, ast.Name) or node.keywords:
            raise ConfigError("unsupported call")
        name = node.func.id
        if name == "phi":
            vals = [self.visit(x) for x in node.args]
            if len(vals) == 1 and isinstance(node.args[0], (ast.List, ast.Tuple)):
                vals = [self.visit(x) for x in node.args[0].elts]
            if len(vals) != self.group.nvars or any(not isinstance(v, Fraction) for v in vals):
                raise ConfigError("phi() needs %d numbers" % self.group.nvars)
            return SkewElement.shift(self.group, tuple(vals))
        if name == "g":
            return SkewElement.group_element(self.group, self.group.from_word(self._word(node, "g")))
        if name == "ddiff":
            return divided_diff_word(self.group, tuple(self._word(node, "ddiff")))
        if name in ("sym", "orbit"):
            if len(node.args) != 1:
                raise ConfigError("%s() takes one argument" % name)
            A = self.lift(self.visit(node.args[0]))
            return symmetrize(A) if name == "sym" else orbit_sum(A)
        raise ConfigError("unknown function %r" % name)

    def v_Tuple(self, node):
        raise ConfigError("unexpected tuple")


def _prepare(text: str) -> str:
    return text.replace("∘", "@").replace("·", "*").replace("^", "**")


def parse_expression(text: str, group: ReflectionGroup):
    """Evaluate an expression; the result is a Fraction, a rational function or a skew element."""
    try:
        tree = ast.parse(_prepare(text), mode="eval")
    except SyntaxError as exc:
        raise ConfigError("cannot parse %r: %s" % (text, exc.msg)) from exc
    try:
        return _Evaluator(group).visit(tree)
    except ConfigError:
        raise
    except (GZError, ZeroDivisionError) as exc:
        raise ConfigError("cannot evaluate %r: %s" % (text, exc)) from exc


def parse_operator(text: str, group: ReflectionGroup) -> SkewElement:
    return _Evaluator(group).lift(parse_expression(text, group))


def parse_function(text: str, group: ReflectionGroup) -> FRF:
    x = parse_expression(text, group)
    if isinstance(x, SkewElement):
        raise ConfigError("%r is an operator, expected a function" % text)
    return FRF.constant(group.layout, x) if isinstance(x, Fraction) else x


def parse_polynomial(text: str, group: ReflectionGroup) -> Polynomial:
    f = parse_function(text, group)
    if not f.is_polynomial():
        raise ConfigError("%r is not a polynomial" % text)
    return f.as_polynomial()
