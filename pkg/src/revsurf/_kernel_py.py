"""Pure-Python evaluation kernel.

Twin of the compiled kernel in ``_kernel_c.pyx``: same entry points, same
semantics, same adaptive-Simpson refinement order, so either backend can
serve the rest of the package. Scalar evaluation is a plain tape
interpreter; grid evaluation interprets the tape once per opcode over
numpy arrays.
"""

import math

import numpy as np

from ._ops import (
    MODE_NEG_D2, MODE_VALUE,
    OP_ABS, OP_ADD, OP_CONST, OP_COS, OP_DIV, OP_EXP, OP_LN, OP_MUL,
    OP_NEG, OP_POWF, OP_POWI, OP_SIN, OP_SQRT, OP_SUB, OP_TAN, OP_VAR,
)
from .errors import EvalDomainError, QuadratureError

_MAX_SPLIT_DEPTH = 52   # halving past this hits float spacing


# --- scalar jet arithmetic ---------------------------------------------------

def _jmul(a, b):
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return (
        a0 * b0,
        a1 * b0 + a0 * b1,
        a2 * b0 + 2.0 * a1 * b1 + a0 * b2,
        a3 * b0 + 3.0 * a2 * b1 + 3.0 * a1 * b2 + a0 * b3,
    )


def _jinv(g, s):
    g0, g1, g2, g3 = g
    if g0 == 0.0:
        raise EvalDomainError("division by zero", s)
    w = 1.0 / g0
    w2 = w * w
    return (
        w,
        -g1 * w2,
        (2.0 * g1 * g1 - g0 * g2) * w2 * w,
        (6.0 * g0 * g1 * g2 - 6.0 * g1 ** 3 - g0 * g0 * g3) * w2 * w2,
    )


def _jchain(f, p0, p1, p2, p3):
    # (phi o f) from derivatives of phi at f's value
    _, f1, f2, f3 = f
    return (
        p0,
        p1 * f1,
        p2 * f1 * f1 + p1 * f2,
        p3 * f1 ** 3 + 3.0 * p2 * f1 * f2 + p1 * f3,
    )


def _jpow_int(f, k, s):
    if k == 0:
        return (1.0, 0.0, 0.0, 0.0)
    kk = abs(k)
    acc = None
    base = f
    while kk:
        if kk & 1:
            acc = base if acc is None else _jmul(acc, base)
        kk >>= 1
        if kk:
            base = _jmul(base, base)
    if k < 0:
        acc = _jinv(acc, s)
    return acc


def tape_eval(code, consts, s):
    """Evaluate a compiled tape at arclength ``s``; returns (v, d1, d2, d3)."""
    stack = []
    for i in range(0, len(code), 2):
        op = code[i]
        arg = code[i + 1]
        if op == OP_CONST:
            stack.append((float(consts[arg]), 0.0, 0.0, 0.0))
        elif op == OP_VAR:
            stack.append((float(s), 1.0, 0.0, 0.0))
        elif op == OP_NEG:
            v, d1, d2, d3 = stack[-1]
            stack[-1] = (-v, -d1, -d2, -d3)
        elif op == OP_ADD:
            b = stack.pop()
            a = stack[-1]
            stack[-1] = (a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3])
        elif op == OP_SUB:
            b = stack.pop()
            a = stack[-1]
            stack[-1] = (a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3])
        elif op == OP_MUL:
            b = stack.pop()
            stack[-1] = _jmul(stack[-1], b)
        elif op == OP_DIV:
            b = stack.pop()
            stack[-1] = _jmul(stack[-1], _jinv(b, s))
        elif op == OP_POWI:
            stack[-1] = _jpow_int(stack[-1], arg, s)
        elif op == OP_POWF:
            u = stack[-1][0]
            p = float(consts[arg])
            if u <= 0.0:
                raise EvalDomainError("power with non-integer exponent requires a positive base", s)
            try:
                p0 = u ** p
                c1 = p * u ** (p - 1.0)
                c2 = p * (p - 1.0) * u ** (p - 2.0)
                c3 = p * (p - 1.0) * (p - 2.0) * u ** (p - 3.0)
            except OverflowError:
                raise EvalDomainError("power overflows", s) from None
            stack[-1] = _jchain(stack[-1], p0, c1, c2, c3)
        elif op == OP_SIN:
            u = stack[-1][0]
            sv, cv = math.sin(u), math.cos(u)
            stack[-1] = _jchain(stack[-1], sv, cv, -sv, -cv)
        elif op == OP_COS:
            u = stack[-1][0]
            sv, cv = math.sin(u), math.cos(u)
            stack[-1] = _jchain(stack[-1], cv, -sv, -cv, sv)
        elif op == OP_TAN:
            u = stack[-1][0]
            t = math.tan(u)
            sec2 = 1.0 + t * t
            stack[-1] = _jchain(stack[-1], t, sec2, 2.0 * t * sec2, sec2 * (2.0 + 6.0 * t * t))
        elif op == OP_EXP:
            u = stack[-1][0]
            try:
                e = math.exp(u)
            except OverflowError:
                raise EvalDomainError("exp overflows", s) from None
            stack[-1] = _jchain(stack[-1], e, e, e, e)
        elif op == OP_LN:
            u = stack[-1][0]
            if u <= 0.0:
                raise EvalDomainError("ln of a non-positive value", s)
            w = 1.0 / u
            stack[-1] = _jchain(stack[-1], math.log(u), w, -w * w, 2.0 * w ** 3)
        elif op == OP_SQRT:
            u = stack[-1][0]
            if u <= 0.0:
                raise EvalDomainError("sqrt requires a positive argument for derivatives", s)
            r = math.sqrt(u)
            stack[-1] = _jchain(stack[-1], r, 0.5 / r, -0.25 / (u * r), 0.375 / (u * u * r))
        elif op == OP_ABS:
            v, d1, d2, d3 = stack[-1]
            sg = 1.0 if v > 0.0 else (-1.0 if v < 0.0 else 0.0)
            stack[-1] = (abs(v), sg * d1, sg * d2, sg * d3)
        else:
            raise ValueError(f"bad opcode {op}")
    if len(stack) != 1:
        raise ValueError("malformed tape")
    return stack[0]


# --- vectorized tape evaluation ----------------------------------------------

def _first_bad(svals, mask):
    return float(svals[int(np.argmax(mask))])


def tape_eval_many(code, consts, svals):
    """Vectorized :func:`tape_eval`; returns an (n, 4) float64 array."""
    svals = np.asarray(svals, dtype=np.float64)
    n = svals.shape[0]
    zeros = np.zeros(n)
    stack = []
    for i in range(0, len(code), 2):
        op = code[i]
        arg = code[i + 1]
        if op == OP_CONST:
            stack.append((np.full(n, float(consts[arg])), zeros, zeros, zeros))
        elif op == OP_VAR:
            stack.append((svals.copy(), np.ones(n), zeros, zeros))
        elif op == OP_NEG:
            v, d1, d2, d3 = stack[-1]
            stack[-1] = (-v, -d1, -d2, -d3)
        elif op == OP_ADD:
            b = stack.pop()
            a = stack[-1]
            stack[-1] = (a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3])
        elif op == OP_SUB:
            b = stack.pop()
            a = stack[-1]
            stack[-1] = (a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3])
        elif op == OP_MUL:
            b = stack.pop()
            stack[-1] = _jmul(stack[-1], b)
        elif op == OP_DIV:
            b = stack.pop()
            if np.any(b[0] == 0.0):
                raise EvalDomainError("division by zero", _first_bad(svals, b[0] == 0.0))
            g0, g1, g2, g3 = b
            w = 1.0 / g0
            w2 = w * w
            inv = (w, -g1 * w2, (2.0 * g1 * g1 - g0 * g2) * w2 * w,
                   (6.0 * g0 * g1 * g2 - 6.0 * g1 ** 3 - g0 * g0 * g3) * w2 * w2)
            stack[-1] = _jmul(stack[-1], inv)
        elif op == OP_POWI:
            k = arg
            f = stack[-1]
            if k == 0:
                stack[-1] = (np.ones(n), zeros, zeros, zeros)
            else:
                kk = abs(k)
                acc = None
                base = f
                while kk:
                    if kk & 1:
                        acc = base if acc is None else _jmul(acc, base)
                    kk >>= 1
                    if kk:
                        base = _jmul(base, base)
                if k < 0:
                    g0, g1, g2, g3 = acc
                    if np.any(g0 == 0.0):
                        raise EvalDomainError("division by zero", _first_bad(svals, g0 == 0.0))
                    w = 1.0 / g0
                    w2 = w * w
                    acc = (w, -g1 * w2, (2.0 * g1 * g1 - g0 * g2) * w2 * w,
                           (6.0 * g0 * g1 * g2 - 6.0 * g1 ** 3 - g0 * g0 * g3) * w2 * w2)
                stack[-1] = acc
        elif op == OP_POWF:
            u = stack[-1][0]
            p = float(consts[arg])
            if np.any(u <= 0.0):
                raise EvalDomainError("power with non-integer exponent requires a positive base",
                                      _first_bad(svals, u <= 0.0))
            with np.errstate(over="ignore"):
                p0 = u ** p
                c1 = p * u ** (p - 1.0)
                c2 = p * (p - 1.0) * u ** (p - 2.0)
                c3 = p * (p - 1.0) * (p - 2.0) * u ** (p - 3.0)
            bad = ~(np.isfinite(p0) & np.isfinite(c1) & np.isfinite(c2) & np.isfinite(c3))
            if np.any(bad):
                raise EvalDomainError("power overflows", _first_bad(svals, bad))
            stack[-1] = _jchain(stack[-1], p0, c1, c2, c3)
        elif op == OP_SIN:
            u = stack[-1][0]
            sv, cv = np.sin(u), np.cos(u)
            stack[-1] = _jchain(stack[-1], sv, cv, -sv, -cv)
        elif op == OP_COS:
            u = stack[-1][0]
            sv, cv = np.sin(u), np.cos(u)
            stack[-1] = _jchain(stack[-1], cv, -sv, -cv, sv)
        elif op == OP_TAN:
            u = stack[-1][0]
            t = np.tan(u)
            sec2 = 1.0 + t * t
            stack[-1] = _jchain(stack[-1], t, sec2, 2.0 * t * sec2, sec2 * (2.0 + 6.0 * t * t))
        elif op == OP_EXP:
            u = stack[-1][0]
            with np.errstate(over="ignore"):
                e = np.exp(u)
            if np.any(~np.isfinite(e)):
                raise EvalDomainError("exp overflows", _first_bad(svals, ~np.isfinite(e)))
            stack[-1] = _jchain(stack[-1], e, e, e, e)
        elif op == OP_LN:
            u = stack[-1][0]
            if np.any(u <= 0.0):
                raise EvalDomainError("ln of a non-positive value", _first_bad(svals, u <= 0.0))
            w = 1.0 / u
            stack[-1] = _jchain(stack[-1], np.log(u), w, -w * w, 2.0 * w ** 3)
        elif op == OP_SQRT:
            u = stack[-1][0]
            if np.any(u <= 0.0):
                raise EvalDomainError("sqrt requires a positive argument for derivatives",
                                      _first_bad(svals, u <= 0.0))
            r = np.sqrt(u)
            stack[-1] = _jchain(stack[-1], r, 0.5 / r, -0.25 / (u * r), 0.375 / (u * u * r))
        elif op == OP_ABS:
            v, d1, d2, d3 = stack[-1]
            sg = np.sign(v)
            stack[-1] = (np.abs(v), sg * d1, sg * d2, sg * d3)
        else:
            raise ValueError(f"bad opcode {op}")
    if len(stack) != 1:
        raise ValueError("malformed tape")
    v, d1, d2, d3 = stack[0]
    out = np.empty((n, 4))
    out[:, 0] = v
    out[:, 1] = d1
    out[:, 2] = d2
    out[:, 3] = d3
    return out


# --- clamped cubic spline evaluation ------------------------------------------
# PPoly layout: value on [breaks[i], breaks[i+1]] is
#   c0*t^3 + c1*t^2 + c2*t + c3 with t = s - breaks[i].

def spline_eval(breaks, coefs, s):
    n = len(breaks)
    x = min(max(float(s), float(breaks[0])), float(breaks[n - 1]))
    i = int(np.searchsorted(breaks, x, side="right")) - 1
    i = min(max(i, 0), n - 2)
    t = x - float(breaks[i])
    c0 = float(coefs[0, i])
    c1 = float(coefs[1, i])
    c2 = float(coefs[2, i])
    c3 = float(coefs[3, i])
    v = ((c0 * t + c1) * t + c2) * t + c3
    d1 = (3.0 * c0 * t + 2.0 * c1) * t + c2
    d2 = 6.0 * c0 * t + 2.0 * c1
    d3 = 6.0 * c0
    return (v, d1, d2, d3)


def spline_eval_many(breaks, coefs, svals):
    svals = np.asarray(svals, dtype=np.float64)
    x = np.clip(svals, breaks[0], breaks[-1])
    idx = np.clip(np.searchsorted(breaks, x, side="right") - 1, 0, len(breaks) - 2)
    t = x - breaks[idx]
    c0 = coefs[0, idx]
    c1 = coefs[1, idx]
    c2 = coefs[2, idx]
    c3 = coefs[3, idx]
    out = np.empty((len(svals), 4))
    out[:, 0] = ((c0 * t + c1) * t + c2) * t + c3
    out[:, 1] = (3.0 * c0 * t + 2.0 * c1) * t + c2
    out[:, 2] = 6.0 * c0 * t + 2.0 * c1
    out[:, 3] = 6.0 * c0
    return out


# --- adaptive Simpson quadrature ----------------------------------------------

def _adaptive_simpson(jet_at, mode, lo, hi, tol, budget):
    """Integrate the selected profile integrand over [lo, hi].

    Returns (value, evaluations, min_radicand, argmin_s); the radicand
    fields are only meaningful for MODE_PSI3, where negative values of
    1 - a'^2 are clamped to zero and their minimum is reported so the
    caller can distinguish rounding from genuine non-embeddability.
    """
    if hi < lo:
        raise ValueError("integration bounds must satisfy lo <= hi")
    state = [0, math.inf, math.nan]   # evals, min_rad, argmin

    def f(s):
        state[0] += 1
        if state[0] > budget:
            raise QuadratureError(
                f"quadrature budget of {budget} evaluations exhausted on [{lo:.6g}, {hi:.6g}]")
        v, d1, d2, _ = jet_at(s)
        if mode == MODE_VALUE:
            return v
        if mode == MODE_NEG_D2:
            return -d2
        rad = 1.0 - d1 * d1
        if rad < state[1]:
            state[1] = rad
            state[2] = s
        return math.sqrt(rad) if rad > 0.0 else 0.0

    if hi == lo:
        return 0.0, 0, math.inf, math.nan

    fa = f(lo)
    mid = 0.5 * (lo + hi)
    fm = f(mid)
    fb = f(hi)
    whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb)
    frames = [(lo, hi, fa, fm, fb, whole, tol, 0)]
    total = 0.0
    while frames:
        a, b, fa, fm, fb, S, tol_i, depth = frames.pop()
        m = 0.5 * (a + b)
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm = f(lm)
        frm = f(rm)
        s_left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        s_right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        err = (s_left + s_right - S) / 15.0
        if abs(err) <= tol_i or depth >= _MAX_SPLIT_DEPTH or lm <= a or rm >= b:
            total += s_left + s_right + err
        else:
            frames.append((a, m, fa, flm, fm, s_left, 0.5 * tol_i, depth + 1))
            frames.append((m, b, fm, frm, fb, s_right, 0.5 * tol_i, depth + 1))
    return total, state[0], state[1], state[2]


def integrate_tape(code, consts, mode, lo, hi, tol, budget):
    return _adaptive_simpson(lambda s: tape_eval(code, consts, s), mode, lo, hi, tol, budget)


def integrate_spline(breaks, coefs, mode, lo, hi, tol, budget):
    return _adaptive_simpson(lambda s: spline_eval(breaks, coefs, s), mode, lo, hi, tol, budget)
