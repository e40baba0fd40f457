"""Metric profiles a(s) on [0, L] and their validation.

A profile determines the rotationally symmetric metric
ds (x) ds + a(s)^2 dtheta (x) dtheta on the 2-sphere; the two poles sit at
s = 0 and s = L. A smooth closed surface requires

    a(0) = a(L) = 0,   a'(0) = 1,   a'(L) = -1,   a > 0 on (0, L),

which :meth:`Profile.validate` checks and reports. Profiles come either
from a closed-form expression or from sampled knots interpolated by a
clamped cubic spline (endpoint slopes +1 and -1 built in).

Profiles are immutable after construction; every operation here is a pure
function of the profile, so instances may be shared freely across threads.
"""

import csv
import math
import os
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from . import expr as _expr
from ._kernel import impl as _impl
from ._ops import MODE_VALUE
from ._search import golden_min
from .errors import ProfileError
from .expr import Jet3

__all__ = [
    "Profile", "ValidationReport", "preset", "preset_catalog",
    "read_samples_csv", "quadrature_budget",
]

DEFAULT_QUAD_BUDGET = 10 ** 6
VALIDATE_GRID_N = 2048
#: bracket width for golden-section refinement, as a fraction of L
REFINE_WIDTH_FRACTION = 1e-12


def quadrature_budget():
    """Per-call adaptive-quadrature evaluation budget; the environment
    variable REVSURF_QUAD_BUDGET (integer) overrides the default."""
    raw = os.environ.get("REVSURF_QUAD_BUDGET")
    if raw is None or not raw.strip():
        return DEFAULT_QUAD_BUDGET
    try:
        return int(raw)
    except ValueError:
        raise ProfileError(
            f"REVSURF_QUAD_BUDGET must be an integer, got {raw!r}") from None


@dataclass(frozen=True)
class ValidationReport:
    """Endpoint and positivity diagnostics for a candidate profile.

    The pass/fail flags are deterministic functions of the residuals and
    the tolerance.
    """

    tol: float
    residual_a0: float          # |a(0)|
    residual_aL: float          # |a(L)|
    residual_slope0: float      # |a'(0) - 1|
    residual_slopeL: float      # |a'(L) + 1|
    interior_min: float
    interior_min_s: float
    grid_n: int

    @property
    def endpoint_values_ok(self):
        return self.residual_a0 <= self.tol and self.residual_aL <= self.tol

    @property
    def endpoint_slopes_ok(self):
        return self.residual_slope0 <= self.tol and self.residual_slopeL <= self.tol

    @property
    def interior_positive_ok(self):
        return self.interior_min > 0.0

    @property
    def ok(self):
        return self.endpoint_values_ok and self.endpoint_slopes_ok and self.interior_positive_ok


class Profile:
    """The profile function a: [0, L] -> R+, closed form or sampled."""

    def __init__(self, length, ast=None, knots=None, values=None, label=None):
        if not (length > 0.0 and math.isfinite(length)):
            raise ProfileError(f"profile length must be positive and finite, got {length!r}")
        self.length = float(length)
        self.label = label
        self._ast = ast
        self._knots = knots
        self._values = values
        if ast is not None:
            tape = _expr.compile_ast(ast)
            self._code = tape.code
            self._consts = tape.consts
            self._breaks = None
            self._coefs = None
        else:
            spline = CubicSpline(knots, values, bc_type=((1, 1.0), (1, -1.0)))
            self._code = None
            self._consts = None
            self._breaks = np.ascontiguousarray(spline.x, dtype=np.float64)
            self._coefs = np.ascontiguousarray(spline.c, dtype=np.float64)
        self._pole_d3 = {}
        self._height_tables = {}

    # --- construction ---------------------------------------------------

    @classmethod
    def from_expression(cls, ast, length, label=None):
        """Wrap a closed-form expression (AST or source text). Does not
        validate; call :meth:`validate` explicitly."""
        if isinstance(ast, str):
            ast = _expr.parse_expression(ast)
        return cls(length, ast=ast, label=label)

    @classmethod
    def from_samples(cls, knots, values, label=None):
        """Build a sampled profile: clamped cubic spline through the knots
        with endpoint slopes +1 and -1."""
        knots = np.asarray(knots, dtype=np.float64)
        values = np.asarray(values, dtype=np.float64)
        if knots.ndim != 1 or values.ndim != 1 or len(knots) != len(values):
            raise ProfileError("knots and values must be 1-d sequences of equal length")
        if len(knots) < 4:
            raise ProfileError(f"need at least 4 knots, got {len(knots)}")
        if knots[0] != 0.0:
            raise ProfileError(f"first knot must be 0, got {knots[0]!r}")
        if np.any(np.diff(knots) <= 0.0):
            raise ProfileError("knots must be strictly increasing")
        if values[0] != 0.0 or values[-1] != 0.0:
            raise ProfileError("endpoint values must be exactly 0")
        if np.any(values[1:-1] <= 0.0):
            bad = int(np.argmax(values[1:-1] <= 0.0)) + 1
            raise ProfileError(f"interior values must be positive; values[{bad}] = {values[bad]!r}")
        return cls(float(knots[-1]), knots=knots, values=values, label=label)

    @property
    def kind(self):
        return "expression" if self._ast is not None else "samples"

    @property
    def ast(self):
        return self._ast

    def __repr__(self):
        src = _expr.render(self._ast) if self._ast is not None else f"{len(self._knots)} knots"
        lbl = f", label={self.label!r}" if self.label else ""
        return f"Profile(L={self.length:.6g}, {src}{lbl})"

    # --- evaluation -------------------------------------------------------

    def jet(self, s):
        """a(s) with derivatives up to order 3."""
        if self._ast is not None:
            v, d1, d2, d3 = _impl.tape_eval(self._code, self._consts, float(s))
        else:
            v, d1, d2, d3 = _impl.spline_eval(self._breaks, self._coefs, float(s))
        return Jet3(v, d1, d2, d3)

    def jet_many(self, svals):
        """Vectorized :meth:`jet`; returns an (n, 4) array of columns
        a, a', a'', a'''."""
        svals = np.ascontiguousarray(svals, dtype=np.float64)
        if self._ast is not None:
            return _impl.tape_eval_many(self._code, self._consts, svals)
        return _impl.spline_eval_many(self._breaks, self._coefs, svals)

    def a(self, s):
        return self.jet(s).v

    def a_prime(self, s):
        return self.jet(s).d1

    def integrate(self, mode, lo, hi, tol, budget=None):
        """Adaptive Simpson quadrature of a profile integrand (see _ops
        modes). Returns (value, min_radicand, argmin_s)."""
        if budget is None:
            budget = quadrature_budget()
        if self._ast is not None:
            value, _, min_rad, min_rad_s = _impl.integrate_tape(
                self._code, self._consts, mode, float(lo), float(hi), float(tol), budget)
        else:
            value, _, min_rad, min_rad_s = _impl.integrate_spline(
                self._breaks, self._coefs, mode, float(lo), float(hi), float(tol), budget)
        return value, min_rad, min_rad_s

    def pole_third_derivative(self, pole):
        """a'''(pole), used by the pole limit of the Gauss curvature.

        Closed-form profiles get the exact jet value. Sampled profiles use
        a one-sided 4-point stencil on the spline (h = L/64, accuracy
        O(h)) because the spline's own piecewise-constant third derivative
        is noisier near the ends.
        """
        if pole not in ("np", "sp"):
            raise ValueError("pole must be 'np' or 'sp'")
        cached = self._pole_d3.get(pole)
        if cached is not None:
            return cached
        if self._ast is not None:
            value = self.jet(0.0 if pole == "np" else self.length).d3
        else:
            h = self.length / 64.0
            if pole == "np":
                f = [self.a(k * h) for k in range(4)]
                value = (-f[0] + 3.0 * f[1] - 3.0 * f[2] + f[3]) / h ** 3
            else:
                f = [self.a(self.length - k * h) for k in range(4)]
                value = (f[0] - 3.0 * f[1] + 3.0 * f[2] - f[3]) / h ** 3
        self._pole_d3[pole] = value
        return value

    # --- validation ---------------------------------------------------------

    def validate(self, tol=1e-8, grid_n=VALIDATE_GRID_N):
        """Check the smooth-closure boundary conditions and interior
        positivity.

        Positivity is diagnosed on a uniform interior grid of ``grid_n``
        points (>= 2048 by default) refined around the grid minimum by
        golden-section search; the grid size is recorded in the report so
        failures are reproducible.
        """
        if not tol > 0.0:
            raise ValueError("tol must be positive")
        grid_n = max(int(grid_n), VALIDATE_GRID_N)
        L = self.length
        j0 = self.jet(0.0)
        jL = self.jet(L)
        interior = np.linspace(0.0, L, grid_n + 2)[1:-1]
        a_vals = self.jet_many(interior)[:, 0]
        i = int(np.argmin(a_vals))
        lo = interior[max(i - 1, 0)]
        hi = interior[min(i + 1, grid_n - 1)]
        s_ref, a_ref = golden_min(lambda x: self.jet(x).v, lo, hi, REFINE_WIDTH_FRACTION * L)
        if a_ref < a_vals[i]:
            min_s, min_a = s_ref, a_ref
        else:
            min_s, min_a = float(interior[i]), float(a_vals[i])
        return ValidationReport(
            tol=float(tol),
            residual_a0=abs(j0.v),
            residual_aL=abs(jL.v),
            residual_slope0=abs(j0.d1 - 1.0),
            residual_slopeL=abs(jL.d1 + 1.0),
            interior_min=min_a,
            interior_min_s=min_s,
            grid_n=grid_n,
        )

    # --- geometry ----------------------------------------------------------

    def area(self, tol=1e-10, budget=None):
        """Total surface area 2*pi*integral(a) by adaptive quadrature.

        The quadrature tolerance is ``tol`` relative to the integrand
        scale max(1, L * max a).
        """
        coarse = self.jet_many(np.linspace(0.0, self.length, 65))[:, 0]
        scale = max(1.0, self.length * float(np.max(np.abs(coarse))))
        value, _, _ = self.integrate(MODE_VALUE, 0.0, self.length, tol * scale, budget)
        return 2.0 * math.pi * value

    def rescale_to_area(self, target_area):
        """Homothety onto the target area: new length lam*L and profile
        lam*a(s/lam), lam = sqrt(target/area). Boundary slopes are
        invariant, so every embeddability verdict is preserved."""
        if not target_area > 0.0:
            raise ProfileError(f"target area must be positive, got {target_area!r}")
        lam = math.sqrt(target_area / self.area())
        if self._ast is not None:
            scaled_var = _expr.BinOp("/", _expr.Var(), _expr.Const(lam))
            new_ast = _expr.BinOp("*", _expr.Const(lam),
                                  _expr.substitute_var(self._ast, scaled_var))
            return Profile.from_expression(new_ast, lam * self.length)
        return Profile.from_samples(lam * self._knots, lam * self._values)


# --- presets -----------------------------------------------------------------

def preset_catalog():
    """Names and descriptions of built-in profiles."""
    return [
        ("sphere", "round unit sphere: a(s) = sin(s) on [0, pi]"),
        ("bump:<beta>", "a(s) = sin(s)*(1 + beta*sin(s)^2) on [0, pi]; beta >= 0"),
        ("dumbbell:<beta>", "a(s) = sin(s)*(1 - beta*sin(s)^2) on [0, pi]; 0 < beta < 1/3"),
    ]


def preset(name):
    """Build a built-in profile from its name (see :func:`preset_catalog`)."""
    base, _, param = name.partition(":")
    base = base.strip().lower()
    if base == "sphere":
        if param:
            raise ProfileError("preset 'sphere' takes no parameter")
        return Profile.from_expression("sin(s)", math.pi, label="sphere")
    if base in ("bump", "dumbbell"):
        if not param:
            raise ProfileError(f"preset {base!r} needs a parameter, e.g. {base}:0.25")
        try:
            beta = float(param)
        except ValueError:
            raise ProfileError(f"invalid {base} parameter {param!r}") from None
        if base == "bump":
            if beta < 0.0:
                raise ProfileError("bump parameter must be >= 0")
            text = f"sin(s)*(1+{beta!r}*sin(s)^2)"
        else:
            if not 0.0 < beta < 1.0 / 3.0:
                raise ProfileError("dumbbell parameter must satisfy 0 < beta < 1/3")
            text = f"sin(s)*(1-{beta!r}*sin(s)^2)"
        return Profile.from_expression(text, math.pi, label=f"{base}:{param}")
    raise ProfileError(f"unknown preset {name!r}; available: sphere, bump:<beta>, dumbbell:<beta>")


# --- sampled-profile CSV ------------------------------------------------------

def read_samples_csv(path):
    """Read a sampled profile file: header line "s,a", one knot per row,
    decimal floating point. Returns (knots, values) arrays."""
    knots = []
    values = []
    try:
        with open(path, "r", newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or [h.strip() for h in header] != ["s", "a"]:
                raise ProfileError(f"{path}: expected header 's,a', got {header!r}")
            for lineno, row in enumerate(reader, start=2):
                if not row:
                    continue
                if len(row) != 2:
                    raise ProfileError(f"{path}:{lineno}: expected two columns, got {len(row)}")
                try:
                    knots.append(float(row[0]))
                    values.append(float(row[1]))
                except ValueError:
                    raise ProfileError(f"{path}:{lineno}: invalid number in {row!r}") from None
    except OSError as exc:
        raise ProfileError(f"cannot read {path}: {exc}") from None
    return np.asarray(knots), np.asarray(values)
