"""Parsing expressions and differentiating them with dual numbers."""

import numpy as np

from hhbounds import (
    EvalDomainError,
    ExprSyntaxError,
    abs_kink_points,
    evaluate,
    evaluate_dual,
    parse,
    unparse,
)

print("The expression language covers one variable, +-*/^ and a few functions.")
e = parse("exp(x) * sin(x) + x^3 - abs(2*x - 1)")
print("parsed and re-rendered:", unparse(e))

print("\nPlain evaluation at a point, and on a whole numpy grid:")
print("  f(0.7)      =", evaluate(e, 0.7))
xs = np.linspace(0.0, 1.0, 5)
print("  f(grid)     =", evaluate(e, xs))

print("\nDual numbers carry (value, derivative) through every operation,")
print("so derivatives are exact forward-mode, not finite differences:")
d = evaluate_dual(e, 0.7)
print("  f(0.7), f'(0.7) =", d.value, ",", d.deriv)

h = 1e-6
fd = (evaluate(e, 0.7 + h) - evaluate(e, 0.7 - h)) / (2 * h)
print("  central difference for comparison:", fd)

print("\nThe abs kink uses the derivative convention 0 at the kink itself:")
print("  d/dx abs(x) at 0 ->", evaluate_dual(parse("abs(x)"), 0.0).deriv)
print("Kinks of linear abs arguments can be located exactly:")
print("  kinks of abs(2*x - 1) on [0, 1]:", abs_kink_points(e, 0.0, 1.0))

print("\nErrors carry positions and hints:")
try:
    parse("exp(x")
except ExprSyntaxError as exc:
    print("  parse('exp(x') ->", exc)

try:
    evaluate(parse("ln(x)"), -1.0)
except EvalDomainError as exc:
    print("  ln(-1)        ->", exc)
