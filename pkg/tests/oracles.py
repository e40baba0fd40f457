"""Independent oracles used by the tests.

Everything here deliberately avoids the code paths it checks: the mpmath
evaluator walks the AST directly (no tape, no kernel), finite-difference
stencils are textbook formulas, and the OBJ reader is a from-scratch
parser.
"""

import mpmath as mp
import numpy as np

from revsurf.expr import BinOp, Call, Const, Neg, Var

mp.mp.dps = 60

_MP_FNS = {
    "sin": mp.sin, "cos": mp.cos, "tan": mp.tan,
    "exp": mp.exp, "ln": mp.log, "sqrt": mp.sqrt, "abs": abs,
}


def mp_eval(node, s):
    """Evaluate an expression AST in mpmath precision; ``s`` may be mpf."""
    if isinstance(node, Const):
        return mp.mpf(node.value)
    if isinstance(node, Var):
        return mp.mpf(s)
    if isinstance(node, Neg):
        return -mp_eval(node.child, s)
    if isinstance(node, BinOp):
        left = mp_eval(node.left, s)
        right = mp_eval(node.right, s)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if node.op == "/":
            return left / right
        return mp.power(left, right)
    if isinstance(node, Call):
        return _MP_FNS[node.fn](mp_eval(node.arg, s))
    raise TypeError(node)


def mp_fd(node, s, h, order):
    """Central finite-difference stencils (truncation O(h^2)) evaluated in
    mpmath so float64 round-off cannot pollute the order measurement."""
    s = mp.mpf(s)
    h = mp.mpf(h)
    f = lambda x: mp_eval(node, x)
    if order == 1:
        return (f(s + h) - f(s - h)) / (2 * h)
    if order == 2:
        return (f(s + h) - 2 * f(s) + f(s - h)) / (h * h)
    if order == 3:
        return (f(s + 2 * h) - 2 * f(s + h) + 2 * f(s - h) - f(s - 2 * h)) / (2 * h ** 3)
    raise ValueError(order)


def float_fd(f, s, h, order):
    """Same stencils in plain float64 on a value-only evaluator."""
    if order == 1:
        return (f(s + h) - f(s - h)) / (2.0 * h)
    if order == 2:
        return (f(s + h) - 2.0 * f(s) + f(s - h)) / (h * h)
    if order == 3:
        return (f(s + 2 * h) - 2.0 * f(s + h) + 2.0 * f(s - h) - f(s - 2 * h)) / (2.0 * h ** 3)
    raise ValueError(order)


def richardson(fd_of_h, h):
    """One Richardson step for an O(h^2) approximation."""
    return (4.0 * fd_of_h(h / 2.0) - fd_of_h(h)) / 3.0


def leibniz3(f, g):
    """Order-3 product rule on two (v, d1, d2, d3) tuples."""
    f0, f1, f2, f3 = f
    g0, g1, g2, g3 = g
    return (
        f0 * g0,
        f1 * g0 + f0 * g1,
        f2 * g0 + 2.0 * f1 * g1 + f0 * g2,
        f3 * g0 + 3.0 * f2 * g1 + 3.0 * f1 * g2 + f0 * g3,
    )


def parse_obj(text):
    """Minimal OBJ reader: v and f records only."""
    verts = []
    faces = []
    for line in text.splitlines():
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "v":
            verts.append([float(x) for x in parts[1:4]])
        elif parts[0] == "f":
            faces.append([int(x) - 1 for x in parts[1:4]])
    return np.asarray(verts), np.asarray(faces, dtype=int)


# --- random expression generators --------------------------------------------

def random_ast(rng, depth=4):
    """Unrestricted random AST for parse/render round-trips (never
    evaluated)."""
    if depth == 0 or rng.random() < 0.3:
        kind = rng.integers(0, 3)
        if kind == 0:
            return Const(float(np.round(rng.uniform(0.0, 10.0), 4)))
        if kind == 1:
            return Const(float(rng.standard_normal() ** 2))
        return Var()
    choice = rng.integers(0, 8)
    if choice == 0:
        return Neg(random_ast(rng, depth - 1))
    if choice <= 4:
        op = "+-*/"[rng.integers(0, 4)]
        return BinOp(op, random_ast(rng, depth - 1), random_ast(rng, depth - 1))
    if choice == 5:
        return BinOp("^", random_ast(rng, depth - 1),
                     Const(float(rng.integers(0, 5))))
    fn = ["sin", "cos", "tan", "exp", "ln", "sqrt", "abs"][rng.integers(0, 7)]
    return Call(fn, random_ast(rng, depth - 1))


def safe_random_ast(rng, depth=3):
    """Random AST whose domain covers all of R and whose values stay
    moderate, so finite differences at s +- 2h are always defined.
    Division, ln, sqrt and real powers appear only with arguments bounded
    away from their domain edges."""
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.5:
            return Var()
        return Const(float(np.round(rng.uniform(0.2, 1.5), 3)))
    choice = rng.integers(0, 10)
    sub = lambda: safe_random_ast(rng, depth - 1)
    if choice == 0:
        return BinOp("+", sub(), sub())
    if choice == 1:
        return BinOp("-", sub(), sub())
    if choice == 2:
        return BinOp("*", Call("sin", sub()), Call("cos", sub()))
    if choice == 3:
        return Call("sin", sub())
    if choice == 4:
        return Call("cos", sub())
    if choice == 5:
        return BinOp("/", sub(), BinOp("+", Const(2.5), Call("sin", sub())))
    if choice == 6:
        return Call("ln", BinOp("+", Const(2.0), Call("cos", sub())))
    if choice == 7:
        return Call("sqrt", BinOp("+", Const(1.5), Call("sin", sub())))
    if choice == 8:
        return BinOp("^", Call("sin", sub()), Const(float(rng.integers(2, 5))))
    return BinOp("^", BinOp("+", Const(2.0), Call("cos", sub())),
                 Const(float(np.round(rng.uniform(0.5, 2.5), 3))))
