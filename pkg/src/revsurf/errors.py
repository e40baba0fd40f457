"""Exception types raised across the package.

This module is dependency-free so the compiled kernel can import it while
the package itself is still initializing.
"""


class RevsurfError(Exception):
    """Base class for all revsurf errors."""


class LexError(RevsurfError):
    """Character outside the expression grammar."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class ParseError(RevsurfError):
    """Malformed expression; ``offset`` points at the offending token."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class EvalDomainError(RevsurfError):
    """Expression evaluated outside its real domain (ln of non-positive,
    division by zero, ...). Carries the evaluation point ``s``."""

    def __init__(self, message, s):
        super().__init__(f"{message} at s={s!r}")
        self.s = s


class ProfileError(RevsurfError):
    """Invalid profile construction (bad length, knots, preset, CSV...)."""


class QuadratureError(RevsurfError):
    """Adaptive quadrature exhausted its refinement budget."""


class NotEmbeddableError(RevsurfError):
    """The height integrand 1 - a'(s)^2 is negative beyond the clamp
    tolerance, i.e. the vertical embedding coordinate would be complex."""

    def __init__(self, witness_s, witness_value, interval=None):
        where = f"s={witness_s:.6g} (radicand {witness_value:.6g})"
        if interval is not None:
            where += f", negative on approximately [{interval[0]:.6g}, {interval[1]:.6g}]"
        super().__init__(f"profile is not embeddable: 1 - a'(s)^2 < 0 at {where}")
        self.witness_s = witness_s
        self.witness_value = witness_value
        self.interval = interval


class CriteriaInconsistencyError(RevsurfError):
    """Decisive embeddability criteria disagreed: a numerical bug, never a
    valid outcome."""


class MeshError(RevsurfError):
    """Generated mesh violates its structural invariants."""
