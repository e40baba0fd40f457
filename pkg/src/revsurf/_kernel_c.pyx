# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled evaluation kernel.

Twin of ``revsurf._kernel_py``: same entry points, same semantics, same
adaptive-Simpson refinement order. The opcode enum below mirrors
``revsurf._ops``; test_backends.py keeps the two in lockstep.
"""

from libc.math cimport cos as c_cos
from libc.math cimport exp as c_exp
from libc.math cimport fabs, isfinite
from libc.math cimport log as c_log
from libc.math cimport pow as c_pow
from libc.math cimport sin as c_sin
from libc.math cimport sqrt as c_sqrt
from libc.math cimport tan as c_tan
from libc.math cimport INFINITY, NAN

import numpy as np

from revsurf.errors import EvalDomainError, QuadratureError

cdef enum:
    OP_CONST = 0
    OP_VAR = 1
    OP_NEG = 2
    OP_ADD = 3
    OP_SUB = 4
    OP_MUL = 5
    OP_DIV = 6
    OP_POWI = 7
    OP_POWF = 8
    OP_SIN = 9
    OP_COS = 10
    OP_TAN = 11
    OP_EXP = 12
    OP_LN = 13
    OP_SQRT = 14
    OP_ABS = 15

cdef enum:
    MODE_VALUE = 0
    MODE_NEG_D2 = 1
    MODE_PSI3 = 2

cdef enum:
    ST_OK = 0
    ST_DIV_ZERO = 1
    ST_LN_DOMAIN = 2
    ST_SQRT_DOMAIN = 3
    ST_POW_DOMAIN = 4
    ST_OVERFLOW = 5
    ST_BAD_TAPE = 6
    ST_BUDGET = 100

cdef int MAX_STACK = 64
cdef int MAX_SPLIT_DEPTH = 52

cdef struct Jet:
    double v
    double d1
    double d2
    double d3


cdef inline void jmul(Jet* a, Jet* b, Jet* out) noexcept nogil:
    cdef double v = a.v * b.v
    cdef double d1 = a.d1 * b.v + a.v * b.d1
    cdef double d2 = a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2
    cdef double d3 = a.d3 * b.v + 3.0 * a.d2 * b.d1 + 3.0 * a.d1 * b.d2 + a.v * b.d3
    out.v = v
    out.d1 = d1
    out.d2 = d2
    out.d3 = d3


cdef inline int jinv(Jet* g, Jet* out) noexcept nogil:
    if g.v == 0.0:
        return ST_DIV_ZERO
    cdef double w = 1.0 / g.v
    cdef double w2 = w * w
    cdef double i1 = -g.d1 * w2
    cdef double i2 = (2.0 * g.d1 * g.d1 - g.v * g.d2) * w2 * w
    cdef double i3 = (6.0 * g.v * g.d1 * g.d2 - 6.0 * g.d1 * g.d1 * g.d1 - g.v * g.v * g.d3) * w2 * w2
    out.v = w
    out.d1 = i1
    out.d2 = i2
    out.d3 = i3
    return ST_OK


cdef inline void jchain(Jet* f, double p0, double p1, double p2, double p3, Jet* out) noexcept nogil:
    cdef double f1 = f.d1
    cdef double f2 = f.d2
    cdef double f3 = f.d3
    out.v = p0
    out.d1 = p1 * f1
    out.d2 = p2 * f1 * f1 + p1 * f2
    out.d3 = p3 * f1 * f1 * f1 + 3.0 * p2 * f1 * f2 + p1 * f3


cdef int tape_eval_core(const int[:] code, const double[:] consts, double s, Jet* out) noexcept nogil:
    cdef Jet stack[64]
    cdef Jet acc, base, tmp
    cdef int sp = 0
    cdef Py_ssize_t i
    cdef int op, arg, kk, started
    cdef double u, t, sec2, e, w, r, sg, p, p0, c1, c2, c3
    for i in range(0, code.shape[0], 2):
        op = code[i]
        arg = code[i + 1]
        if op == OP_CONST:
            if sp >= MAX_STACK:
                return ST_BAD_TAPE
            stack[sp].v = consts[arg]
            stack[sp].d1 = 0.0
            stack[sp].d2 = 0.0
            stack[sp].d3 = 0.0
            sp += 1
        elif op == OP_VAR:
            if sp >= MAX_STACK:
                return ST_BAD_TAPE
            stack[sp].v = s
            stack[sp].d1 = 1.0
            stack[sp].d2 = 0.0
            stack[sp].d3 = 0.0
            sp += 1
        elif op == OP_NEG:
            if sp < 1:
                return ST_BAD_TAPE
            stack[sp - 1].v = -stack[sp - 1].v
            stack[sp - 1].d1 = -stack[sp - 1].d1
            stack[sp - 1].d2 = -stack[sp - 1].d2
            stack[sp - 1].d3 = -stack[sp - 1].d3
        elif op == OP_ADD:
            if sp < 2:
                return ST_BAD_TAPE
            sp -= 1
            stack[sp - 1].v += stack[sp].v
            stack[sp - 1].d1 += stack[sp].d1
            stack[sp - 1].d2 += stack[sp].d2
            stack[sp - 1].d3 += stack[sp].d3
        elif op == OP_SUB:
            if sp < 2:
                return ST_BAD_TAPE
            sp -= 1
            stack[sp - 1].v -= stack[sp].v
            stack[sp - 1].d1 -= stack[sp].d1
            stack[sp - 1].d2 -= stack[sp].d2
            stack[sp - 1].d3 -= stack[sp].d3
        elif op == OP_MUL:
            if sp < 2:
                return ST_BAD_TAPE
            sp -= 1
            jmul(&stack[sp - 1], &stack[sp], &stack[sp - 1])
        elif op == OP_DIV:
            if sp < 2:
                return ST_BAD_TAPE
            sp -= 1
            if jinv(&stack[sp], &tmp) != ST_OK:
                return ST_DIV_ZERO
            jmul(&stack[sp - 1], &tmp, &stack[sp - 1])
        elif op == OP_POWI:
            if sp < 1:
                return ST_BAD_TAPE
            if arg == 0:
                stack[sp - 1].v = 1.0
                stack[sp - 1].d1 = 0.0
                stack[sp - 1].d2 = 0.0
                stack[sp - 1].d3 = 0.0
            else:
                kk = arg if arg > 0 else -arg
                base = stack[sp - 1]
                started = 0
                while kk:
                    if kk & 1:
                        if started:
                            jmul(&acc, &base, &acc)
                        else:
                            acc = base
                            started = 1
                    kk >>= 1
                    if kk:
                        jmul(&base, &base, &base)
                if arg < 0:
                    if jinv(&acc, &acc) != ST_OK:
                        return ST_DIV_ZERO
                stack[sp - 1] = acc
        elif op == OP_POWF:
            if sp < 1:
                return ST_BAD_TAPE
            u = stack[sp - 1].v
            p = consts[arg]
            if u <= 0.0:
                return ST_POW_DOMAIN
            p0 = c_pow(u, p)
            c1 = p * c_pow(u, p - 1.0)
            c2 = p * (p - 1.0) * c_pow(u, p - 2.0)
            c3 = p * (p - 1.0) * (p - 2.0) * c_pow(u, p - 3.0)
            if not (isfinite(p0) and isfinite(c1) and isfinite(c2) and isfinite(c3)):
                return ST_OVERFLOW
            jchain(&stack[sp - 1], p0, c1, c2, c3, &stack[sp - 1])
        elif op == OP_SIN:
            if sp < 1:
                return ST_BAD_TAPE
            u = stack[sp - 1].v
            jchain(&stack[sp - 1], c_sin(u), c_cos(u), -c_sin(u), -c_cos(u), &stack[sp - 1])
        elif op == OP_COS:
            if sp < 1:
                return ST_BAD_TAPE
            u = stack[sp - 1].v
            jchain(&stack[sp - 1], c_cos(u), -c_sin(u), -c_cos(u), c_sin(u), &stack[sp - 1])
        elif op == OP_TAN:
            if sp < 1:
                return ST_BAD_TAPE
            u = stack[sp - 1].v
            t = c_tan(u)
            sec2 = 1.0 + t * t
            jchain(&stack[sp - 1], t, sec2, 2.0 * t * sec2, sec2 * (2.0 + 6.0 * t * t), &stack[sp - 1])
        elif op == OP_EXP:
            if sp < 1:
                return ST_BAD_TAPE
            e = c_exp(stack[sp - 1].v)
            if not isfinite(e):
                return ST_OVERFLOW
            jchain(&stack[sp - 1], e, e, e, e, &stack[sp - 1])
        elif op == OP_LN:
            if sp < 1:
                return ST_BAD_TAPE
            u = stack[sp - 1].v
            if u <= 0.0:
                return ST_LN_DOMAIN
            w = 1.0 / u
            jchain(&stack[sp - 1], c_log(u), w, -w * w, 2.0 * w * w * w, &stack[sp - 1])
        elif op == OP_SQRT:
            if sp < 1:
                return ST_BAD_TAPE
            u = stack[sp - 1].v
            if u <= 0.0:
                return ST_SQRT_DOMAIN
            r = c_sqrt(u)
            jchain(&stack[sp - 1], r, 0.5 / r, -0.25 / (u * r), 0.375 / (u * u * r), &stack[sp - 1])
        elif op == OP_ABS:
            if sp < 1:
                return ST_BAD_TAPE
            u = stack[sp - 1].v
            sg = 1.0 if u > 0.0 else (-1.0 if u < 0.0 else 0.0)
            stack[sp - 1].v = fabs(u)
            stack[sp - 1].d1 *= sg
            stack[sp - 1].d2 *= sg
            stack[sp - 1].d3 *= sg
        else:
            return ST_BAD_TAPE
    if sp != 1:
        return ST_BAD_TAPE
    out[0] = stack[0]
    return ST_OK


cdef void spline_eval_core(const double[:] breaks, const double[:, :] coefs, double s, Jet* out) noexcept nogil:
    cdef Py_ssize_t n = breaks.shape[0]
    cdef double x = s
    cdef Py_ssize_t lo = 0, hi = n - 1, mid
    cdef double t, c0, c1, c2, c3
    if x <= breaks[0]:
        x = breaks[0]
    elif x >= breaks[n - 1]:
        x = breaks[n - 1]
    while hi - lo > 1:
        mid = (lo + hi) >> 1
        if breaks[mid] <= x:
            lo = mid
        else:
            hi = mid
    t = x - breaks[lo]
    c0 = coefs[0, lo]
    c1 = coefs[1, lo]
    c2 = coefs[2, lo]
    c3 = coefs[3, lo]
    out.v = ((c0 * t + c1) * t + c2) * t + c3
    out.d1 = (3.0 * c0 * t + 2.0 * c1) * t + c2
    out.d2 = 6.0 * c0 * t + 2.0 * c1
    out.d3 = 6.0 * c0


_DOMAIN_MESSAGES = {
    ST_DIV_ZERO: "division by zero",
    ST_LN_DOMAIN: "ln of a non-positive value",
    ST_SQRT_DOMAIN: "sqrt requires a positive argument for derivatives",
    ST_POW_DOMAIN: "power with non-integer exponent requires a positive base",
    ST_OVERFLOW: "evaluation overflows",
}


cdef _raise_status(int status, double s):
    if status == ST_BAD_TAPE:
        raise ValueError("malformed tape")
    raise EvalDomainError(_DOMAIN_MESSAGES.get(status, "evaluation failed"), s)


def tape_eval(code, consts, double s):
    """Evaluate a compiled tape at arclength ``s``; returns (v, d1, d2, d3)."""
    cdef const int[:] cv = code
    cdef const double[:] kv = consts
    cdef Jet out
    cdef int st = tape_eval_core(cv, kv, s, &out)
    if st != ST_OK:
        _raise_status(st, s)
    return (out.v, out.d1, out.d2, out.d3)


def tape_eval_many(code, consts, svals):
    """Vectorized :func:`tape_eval`; returns an (n, 4) float64 array."""
    cdef const int[:] cv = code
    cdef const double[:] kv = consts
    s_arr = np.ascontiguousarray(svals, dtype=np.float64)
    cdef const double[:] sv = s_arr
    cdef Py_ssize_t n = sv.shape[0]
    out = np.empty((n, 4))
    cdef double[:, :] ov = out
    cdef Jet j
    cdef Py_ssize_t i
    cdef int st
    for i in range(n):
        st = tape_eval_core(cv, kv, sv[i], &j)
        if st != ST_OK:
            _raise_status(st, sv[i])
        ov[i, 0] = j.v
        ov[i, 1] = j.d1
        ov[i, 2] = j.d2
        ov[i, 3] = j.d3
    return out


def spline_eval(breaks, coefs, double s):
    cdef const double[:] bv = breaks
    cdef const double[:, :] pv = coefs
    cdef Jet out
    spline_eval_core(bv, pv, s, &out)
    return (out.v, out.d1, out.d2, out.d3)


def spline_eval_many(breaks, coefs, svals):
    cdef const double[:] bv = breaks
    cdef const double[:, :] pv = coefs
    s_arr = np.ascontiguousarray(svals, dtype=np.float64)
    cdef const double[:] sv = s_arr
    cdef Py_ssize_t n = sv.shape[0]
    out = np.empty((n, 4))
    cdef double[:, :] ov = out
    cdef Jet j
    cdef Py_ssize_t i
    for i in range(n):
        spline_eval_core(bv, pv, sv[i], &j)
        ov[i, 0] = j.v
        ov[i, 1] = j.d1
        ov[i, 2] = j.d2
        ov[i, 3] = j.d3
    return out


# --- adaptive Simpson quadrature ----------------------------------------------

cdef struct Frame:
    double a
    double b
    double fa
    double fm
    double fb
    double S
    double tol
    int depth


cdef inline int profile_eval(int kind, const int[:] code, const double[:] consts,
                             const double[:] breaks, const double[:, :] coefs,
                             double s, Jet* out) noexcept nogil:
    if kind == 0:
        return tape_eval_core(code, consts, s, out)
    spline_eval_core(breaks, coefs, s, out)
    return ST_OK


cdef inline int feval(int kind, const int[:] code, const double[:] consts,
                      const double[:] breaks, const double[:, :] coefs,
                      int mode, double s, long budget, long* neval,
                      double* fout, double* min_rad, double* min_rad_s,
                      double* err_s) noexcept nogil:
    cdef Jet j
    cdef double rad
    cdef int st
    neval[0] += 1
    if neval[0] > budget:
        err_s[0] = s
        return ST_BUDGET
    st = profile_eval(kind, code, consts, breaks, coefs, s, &j)
    if st != ST_OK:
        err_s[0] = s
        return st
    if mode == MODE_VALUE:
        fout[0] = j.v
    elif mode == MODE_NEG_D2:
        fout[0] = -j.d2
    else:
        rad = 1.0 - j.d1 * j.d1
        if rad < min_rad[0]:
            min_rad[0] = rad
            min_rad_s[0] = s
        fout[0] = c_sqrt(rad) if rad > 0.0 else 0.0
    return ST_OK


cdef int integrate_core(int kind, const int[:] code, const double[:] consts,
                        const double[:] breaks, const double[:, :] coefs,
                        int mode, double lo, double hi, double tol, long budget,
                        double* result, long* neval, double* min_rad,
                        double* min_rad_s, double* err_s) noexcept nogil:
    cdef Frame frames[80]
    cdef int nframes = 0
    cdef double fa, fm, fb, flm, frm, m, lm, rm, s_left, s_right, err, whole, total
    cdef Frame fr
    cdef int st

    result[0] = 0.0
    min_rad[0] = INFINITY
    min_rad_s[0] = NAN
    if hi == lo:
        return ST_OK

    st = feval(kind, code, consts, breaks, coefs, mode, lo, budget, neval, &fa, min_rad, min_rad_s, err_s)
    if st != ST_OK:
        return st
    m = 0.5 * (lo + hi)
    st = feval(kind, code, consts, breaks, coefs, mode, m, budget, neval, &fm, min_rad, min_rad_s, err_s)
    if st != ST_OK:
        return st
    st = feval(kind, code, consts, breaks, coefs, mode, hi, budget, neval, &fb, min_rad, min_rad_s, err_s)
    if st != ST_OK:
        return st
    whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb)

    frames[0].a = lo
    frames[0].b = hi
    frames[0].fa = fa
    frames[0].fm = fm
    frames[0].fb = fb
    frames[0].S = whole
    frames[0].tol = tol
    frames[0].depth = 0
    nframes = 1
    total = 0.0

    while nframes > 0:
        nframes -= 1
        fr = frames[nframes]
        m = 0.5 * (fr.a + fr.b)
        lm = 0.5 * (fr.a + m)
        rm = 0.5 * (m + fr.b)
        st = feval(kind, code, consts, breaks, coefs, mode, lm, budget, neval, &flm, min_rad, min_rad_s, err_s)
        if st != ST_OK:
            return st
        st = feval(kind, code, consts, breaks, coefs, mode, rm, budget, neval, &frm, min_rad, min_rad_s, err_s)
        if st != ST_OK:
            return st
        s_left = (m - fr.a) / 6.0 * (fr.fa + 4.0 * flm + fr.fm)
        s_right = (fr.b - m) / 6.0 * (fr.fm + 4.0 * frm + fr.fb)
        err = (s_left + s_right - fr.S) / 15.0
        if fabs(err) <= fr.tol or fr.depth >= MAX_SPLIT_DEPTH or lm <= fr.a or rm >= fr.b:
            total += s_left + s_right + err
        else:
            frames[nframes].a = fr.a
            frames[nframes].b = m
            frames[nframes].fa = fr.fa
            frames[nframes].fm = flm
            frames[nframes].fb = fr.fm
            frames[nframes].S = s_left
            frames[nframes].tol = 0.5 * fr.tol
            frames[nframes].depth = fr.depth + 1
            nframes += 1
            frames[nframes].a = m
            frames[nframes].b = fr.b
            frames[nframes].fa = fr.fm
            frames[nframes].fm = frm
            frames[nframes].fb = fr.fb
            frames[nframes].S = s_right
            frames[nframes].tol = 0.5 * fr.tol
            frames[nframes].depth = fr.depth + 1
            nframes += 1
    result[0] = total
    return ST_OK


_EMPTY_I32 = np.empty(0, dtype=np.int32)
_EMPTY_F64 = np.empty(0, dtype=np.float64)
_EMPTY_F64_2 = np.empty((4, 0), dtype=np.float64)


cdef _integrate(int kind, code, consts, breaks, coefs, int mode,
                double lo, double hi, double tol, long budget):
    cdef const int[:] cv = code
    cdef const double[:] kv = consts
    cdef const double[:] bv = breaks
    cdef const double[:, :] pv = coefs
    cdef double result = 0.0, min_rad = INFINITY, min_rad_s = NAN, err_s = NAN
    cdef long neval = 0
    if hi < lo:
        raise ValueError("integration bounds must satisfy lo <= hi")
    cdef int st = integrate_core(kind, cv, kv, bv, pv, mode, lo, hi, tol, budget,
                                 &result, &neval, &min_rad, &min_rad_s, &err_s)
    if st == ST_BUDGET:
        raise QuadratureError(
            f"quadrature budget of {budget} evaluations exhausted on [{lo:.6g}, {hi:.6g}]")
    if st != ST_OK:
        _raise_status(st, err_s)
    return (result, neval, min_rad, min_rad_s)


def integrate_tape(code, consts, int mode, double lo, double hi, double tol, long budget):
    return _integrate(0, code, consts, _EMPTY_F64, _EMPTY_F64_2, mode, lo, hi, tol, budget)


def integrate_spline(breaks, coefs, int mode, double lo, double hi, double tol, long budget):
    return _integrate(1, _EMPTY_I32, _EMPTY_F64, breaks, coefs, mode, lo, hi, tol, budget)
