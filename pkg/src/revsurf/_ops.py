"""Opcode table for compiled expression tapes.

A tape is a postfix program: a flat int32 array of (opcode, arg) pairs plus
a float64 constant pool. ``arg`` is a constant-pool index for OP_CONST and
OP_POWF, the literal integer exponent for OP_POWI, and unused otherwise.

The Cython kernel mirrors these values in a local enum; test_backends.py
keeps the two in lockstep.
"""

OP_CONST = 0   # push consts[arg]
OP_VAR = 1     # push the arclength variable s
OP_NEG = 2
OP_ADD = 3
OP_SUB = 4
OP_MUL = 5
OP_DIV = 6
OP_POWI = 7    # integer power, exponent in arg
OP_POWF = 8    # real power, exponent consts[arg]; base must be > 0
OP_SIN = 9
OP_COS = 10
OP_TAN = 11
OP_EXP = 12
OP_LN = 13
OP_SQRT = 14
OP_ABS = 15

UNARY_FN_OPS = {
    "sin": OP_SIN,
    "cos": OP_COS,
    "tan": OP_TAN,
    "exp": OP_EXP,
    "ln": OP_LN,
    "sqrt": OP_SQRT,
    "abs": OP_ABS,
}

# integrand selectors for the quadrature kernels
MODE_VALUE = 0      # a(s)                  (areas)
MODE_NEG_D2 = 1     # -a''(s) = K(s)*a(s)   (curvature disk integrals)
MODE_PSI3 = 2       # sqrt(max(0, 1 - a'(s)^2))  (embedding height)

# stack slots available to the evaluators; compile rejects deeper tapes
MAX_STACK = 64
