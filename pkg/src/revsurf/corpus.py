"""Randomized valid profiles for property suites.

Profiles have the form a(s) = sin(s) * (1 + sum_k c_k sin(s)^k) with
powers k >= 2 on [0, pi]. The sine factor enforces the boundary
conditions exactly for any coefficients, and starting the powers at 2
keeps a''(pole) = 0 exactly (every correction term behaves like s^m with
m >= 3 at the poles), so the pole curvature limit -a'''/a' is exact for
every corpus member; a linear sin(s) term would instead make the
curvature genuinely singular at the poles. Only interior positivity needs
rejection sampling; rejected draws are discarded, not repaired.

The sign of the sin^2 coefficient still splits the corpus into embeddable
and non-embeddable members (c_2 > 1/6 pushes a' above 1 near the poles),
so both verdicts stay well represented.
"""

import math

from .expr import BinOp, Call, Const, Neg, Var
from .profile import Profile

__all__ = ["random_trig_profile", "trig_profile"]


def _coeff_node(c):
    return Neg(Const(-c)) if c < 0.0 else Const(c)


def _trig_poly_ast(coeffs, min_power):
    sin_s = Call("sin", Var())
    poly = Const(1.0)
    for k, c in enumerate(coeffs, start=min_power):
        power = sin_s if k == 1 else BinOp("^", sin_s, Const(float(k)))
        poly = BinOp("+", poly, BinOp("*", _coeff_node(float(c)), power))
    return BinOp("*", sin_s, poly)


def trig_profile(coeffs, min_power=2, label=None):
    """Profile sin(s) * (1 + sum c_k sin(s)^k) on [0, pi], powers counted
    from ``min_power``."""
    return Profile.from_expression(_trig_poly_ast(list(coeffs), min_power),
                                   math.pi, label=label)


def random_trig_profile(rng, max_terms=4, coeff_scale=0.35, max_attempts=200,
                        validate_tol=1e-8):
    """Draw coefficients until the validator passes (boundary residuals
    are zero by construction; positivity is the rejected condition)."""
    for _ in range(max_attempts):
        n_terms = int(rng.integers(1, max_terms + 1))
        coeffs = rng.uniform(-coeff_scale, coeff_scale, size=n_terms)
        p = trig_profile(coeffs)
        if p.validate(validate_tol).ok:
            return p
    raise RuntimeError(f"no valid profile found in {max_attempts} attempts")
