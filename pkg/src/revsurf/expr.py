"""Closed-form profile expressions: lexer, parser, and order-3 jets.

Grammar (whitespace-insensitive, no implicit multiplication):

    expr   := term (("+"|"-") term)*
    term   := factor (("*"|"/") factor)*
    factor := "-" factor | power
    power  := atom ("^" power)?          right-assoc; exponent must fold
                                         to a finite constant
    atom   := NUMBER | "pi" | "s" | FN "(" expr ")" | "(" expr ")"
    FN     := "sin" | "cos" | "tan" | "exp" | "ln" | "sqrt" | "abs"

Evaluation with derivatives uses forward-mode jets of fixed order 3: the
AST is compiled once to a flat postfix tape and handed to the active
kernel (compiled or pure), which propagates (f, f', f'', f''') through
exact Leibniz/chain rules. There is no truncation error; results are
exact to floating-point rounding.

Tokens, AST nodes, jets, and tapes are immutable values and every
function here is pure, so everything is safe for unrestricted concurrent
use.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Union

import numpy as np

from . import _ops
from ._kernel import impl as _impl
from .errors import EvalDomainError, LexError, ParseError

__all__ = [
    "Token", "Jet3", "Const", "Var", "Neg", "BinOp", "Call",
    "tokenize", "parse", "parse_expression", "render",
    "fold_const", "substitute_var", "compile_ast",
    "eval_value", "eval_jet3",
]

FUNCTIONS = frozenset(_ops.UNARY_FN_OPS)


@dataclass(frozen=True)
class Token:
    kind: str      # number, identifier, plus, minus, star, slash, caret, lparen, rparen, comma
    lexeme: str
    offset: int    # byte position in the source


class Jet3(NamedTuple):
    """Value and first three derivatives of f at a point."""

    v: float
    d1: float
    d2: float
    d3: float


# --- AST nodes -------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    """The arclength variable s."""


@dataclass(frozen=True)
class Neg:
    child: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str        # one of + - * / ^
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    fn: str        # one of FUNCTIONS
    arg: "Node"


Node = Union[Const, Var, Neg, BinOp, Call]


# --- lexer -----------------------------------------------------------------

_SINGLE_CHAR = {
    "+": "plus", "-": "minus", "*": "star", "/": "slash", "^": "caret",
    "(": "lparen", ")": "rparen", ",": "comma",
}


def tokenize(text):
    """Split ``text`` into tokens. Whitespace separates tokens and is
    dropped; any other character outside the grammar raises LexError with
    its byte offset."""
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c in " \t\r\n":
            i += 1
            continue
        if c in _SINGLE_CHAR:
            tokens.append(Token(_SINGLE_CHAR[c], c, i))
            i += 1
            continue
        if c.isdigit() or (c == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == ".":
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            lexeme = text[i:j]
            if not math.isfinite(float(lexeme)):
                raise LexError(f"number literal {lexeme!r} overflows double precision", i)
            tokens.append(Token("number", lexeme, i))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("identifier", text[i:j], i))
            i = j
            continue
        raise LexError(f"unexpected character {c!r}", i)
    return tokens


# --- parser ----------------------------------------------------------------

class _Parser:
    def __init__(self, tokens):
        self.tokens = list(tokens)
        self.pos = 0
        if self.tokens:
            last = self.tokens[-1]
            self.end = last.offset + len(last.lexeme)
        else:
            self.end = 0

    def peek(self):
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        return None

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def match(self, kind):
        tok = self.peek()
        if tok is not None and tok.kind == kind:
            self.pos += 1
            return tok
        return None

    def here(self):
        tok = self.peek()
        return tok.offset if tok is not None else self.end

    def expr(self):
        node = self.term()
        while True:
            tok = self.peek()
            if tok is not None and tok.kind in ("plus", "minus"):
                self.advance()
                node = BinOp("+" if tok.kind == "plus" else "-", node, self.term())
            else:
                return node

    def term(self):
        node = self.factor()
        while True:
            tok = self.peek()
            if tok is not None and tok.kind in ("star", "slash"):
                self.advance()
                node = BinOp("*" if tok.kind == "star" else "/", node, self.factor())
            else:
                return node

    def factor(self):
        if self.match("minus"):
            return Neg(self.factor())
        return self.power()

    def power(self):
        base = self.atom()
        caret = self.match("caret")
        if caret is None:
            return base
        exponent = self.power()
        try:
            value = fold_const(exponent)
        except _NotConstant:
            raise ParseError("exponent of '^' must be a constant expression", caret.offset) from None
        if not math.isfinite(value):
            raise ParseError("exponent of '^' must fold to a finite constant", caret.offset)
        return BinOp("^", base, exponent)

    def atom(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("expected an expression before end of input", self.end)
        if tok.kind == "number":
            self.advance()
            return Const(float(tok.lexeme))
        if tok.kind == "identifier":
            self.advance()
            name = tok.lexeme
            if name == "s":
                return Var()
            if name == "pi":
                return Const(math.pi)
            if name in FUNCTIONS:
                if self.match("lparen") is None:
                    raise ParseError(f"function {name!r} requires a parenthesized argument", self.here())
                close = self.peek()
                if close is not None and close.kind == "rparen":
                    raise ParseError(f"function {name!r} expects exactly one argument", close.offset)
                arg = self.expr()
                nxt = self.peek()
                if nxt is not None and nxt.kind == "comma":
                    raise ParseError(f"function {name!r} expects exactly one argument", nxt.offset)
                if self.match("rparen") is None:
                    raise ParseError("expected ')'", self.here())
                return Call(name, arg)
            raise ParseError(f"unknown identifier {name!r}", tok.offset)
        if tok.kind == "lparen":
            self.advance()
            inner = self.expr()
            if self.match("rparen") is None:
                raise ParseError("expected ')'", self.here())
            return inner
        raise ParseError(f"unexpected token {tok.lexeme!r}", tok.offset)


def parse(tokens):
    """Parse a token sequence (from :func:`tokenize`) into an AST."""
    p = _Parser(tokens)
    if p.peek() is None:
        raise ParseError("empty expression", 0)
    node = p.expr()
    tok = p.peek()
    if tok is not None:
        raise ParseError(f"unexpected token {tok.lexeme!r}", tok.offset)
    return node


def parse_expression(text):
    """Tokenize and parse ``text`` in one step."""
    return parse(tokenize(text))


# --- rendering and folding --------------------------------------------------

def render(node):
    """Render with full parenthesization; ``parse(tokenize(render(t)))``
    reproduces ``t`` exactly (repr round-trips doubles)."""
    if isinstance(node, Const):
        return repr(node.value)
    if isinstance(node, Var):
        return "s"
    if isinstance(node, Neg):
        return f"-({render(node.child)})"
    if isinstance(node, BinOp):
        return f"({render(node.left)}){node.op}({render(node.right)})"
    if isinstance(node, Call):
        return f"{node.fn}({render(node.arg)})"
    raise TypeError(f"not an expression node: {node!r}")


class _NotConstant(Exception):
    pass


def fold_const(node):
    """Evaluate a constant subtree to a float; raises if it references s
    or does not evaluate to a finite value."""
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        raise _NotConstant
    if isinstance(node, Neg):
        return -fold_const(node.child)
    if isinstance(node, BinOp):
        left = fold_const(node.left)
        right = fold_const(node.right)
        try:
            if node.op == "+":
                return left + right
            if node.op == "-":
                return left - right
            if node.op == "*":
                return left * right
            if node.op == "/":
                return left / right
            return math.pow(left, right)
        except (ZeroDivisionError, ValueError, OverflowError):
            raise _NotConstant from None
    if isinstance(node, Call):
        arg = fold_const(node.arg)
        try:
            return _VALUE_FNS[node.fn](arg)
        except (ValueError, OverflowError, ZeroDivisionError):
            raise _NotConstant from None
    raise TypeError(f"not an expression node: {node!r}")


def substitute_var(node, replacement):
    """Return a copy of ``node`` with every occurrence of s replaced by the
    ``replacement`` subtree (used for homothety rescaling)."""
    if isinstance(node, Const):
        return node
    if isinstance(node, Var):
        return replacement
    if isinstance(node, Neg):
        return Neg(substitute_var(node.child, replacement))
    if isinstance(node, BinOp):
        return BinOp(node.op, substitute_var(node.left, replacement),
                     substitute_var(node.right, replacement))
    if isinstance(node, Call):
        return Call(node.fn, substitute_var(node.arg, replacement))
    raise TypeError(f"not an expression node: {node!r}")


# --- plain (value-only) evaluation ------------------------------------------
# Kept as a straightforward tree walk, independent of the tape/jet path, so
# tests can use it as a finite-difference oracle against eval_jet3.

_VALUE_FNS = {
    "sin": math.sin, "cos": math.cos, "tan": math.tan,
    "exp": math.exp, "ln": math.log, "sqrt": math.sqrt, "abs": abs,
}


def eval_value(node, s):
    """Evaluate the expression at arclength ``s`` (value only)."""
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return float(s)
    if isinstance(node, Neg):
        return -eval_value(node.child, s)
    if isinstance(node, BinOp):
        left = eval_value(node.left, s)
        right = eval_value(node.right, s)
        op = node.op
        if op == "+":
            return left + right
        if op == "-":
            return left - right
        if op == "*":
            return left * right
        if op == "/":
            if right == 0.0:
                raise EvalDomainError("division by zero", s)
            return left / right
        try:
            return math.pow(left, right)
        except (ValueError, OverflowError):
            raise EvalDomainError(f"{left!r} ** {right!r} is undefined or overflows", s) from None
    if isinstance(node, Call):
        arg = eval_value(node.arg, s)
        if node.fn == "ln" and arg <= 0.0:
            raise EvalDomainError("ln of a non-positive value", s)
        if node.fn == "sqrt" and arg < 0.0:
            raise EvalDomainError("sqrt of a negative value", s)
        try:
            return _VALUE_FNS[node.fn](arg)
        except (ValueError, OverflowError):
            raise EvalDomainError(f"{node.fn} evaluation failed", s) from None
    raise TypeError(f"not an expression node: {node!r}")


# --- tape compilation -------------------------------------------------------

class Tape(NamedTuple):
    code: np.ndarray     # int32, flat (opcode, arg) pairs
    consts: np.ndarray   # float64 constant pool
    max_stack: int


class _Emitter:
    def __init__(self):
        self.code = []
        self.consts = []
        self._const_index = {}
        self.depth = 0
        self.max_depth = 0

    def push(self, n=1):
        self.depth += n
        self.max_depth = max(self.max_depth, self.depth)
        if self.max_depth > _ops.MAX_STACK:
            raise ValueError("expression nests too deeply to compile")

    def pop(self, n=1):
        self.depth -= n

    def const_index(self, value):
        idx = self._const_index.get(value)
        if idx is None:
            idx = len(self.consts)
            self.consts.append(value)
            self._const_index[value] = idx
        return idx

    def emit(self, op, arg=0):
        self.code.append(op)
        self.code.append(arg)


_BINOP_CODES = {"+": _ops.OP_ADD, "-": _ops.OP_SUB, "*": _ops.OP_MUL, "/": _ops.OP_DIV}

# exponents recognized as integers get the everywhere-defined repeated-square
# path; anything else needs a positive base
_POW_INT_TOL = 1e-12
_POW_INT_MAX = 2 ** 30


def _emit_node(node, em):
    if isinstance(node, Const):
        em.emit(_ops.OP_CONST, em.const_index(float(node.value)))
        em.push()
    elif isinstance(node, Var):
        em.emit(_ops.OP_VAR)
        em.push()
    elif isinstance(node, Neg):
        _emit_node(node.child, em)
        em.emit(_ops.OP_NEG)
    elif isinstance(node, BinOp):
        if node.op == "^":
            _emit_node(node.left, em)
            exponent = fold_const(node.right)
            rounded = round(exponent)
            if abs(exponent - rounded) <= _POW_INT_TOL and abs(rounded) <= _POW_INT_MAX:
                em.emit(_ops.OP_POWI, int(rounded))
            else:
                em.emit(_ops.OP_POWF, em.const_index(float(exponent)))
        else:
            _emit_node(node.left, em)
            _emit_node(node.right, em)
            em.emit(_BINOP_CODES[node.op])
            em.pop()
    elif isinstance(node, Call):
        _emit_node(node.arg, em)
        em.emit(_ops.UNARY_FN_OPS[node.fn])
    else:
        raise TypeError(f"not an expression node: {node!r}")


@lru_cache(maxsize=512)
def compile_ast(node):
    """Compile an AST into a postfix tape for the evaluation kernels."""
    em = _Emitter()
    _emit_node(node, em)
    return Tape(
        code=np.asarray(em.code, dtype=np.int32),
        consts=np.asarray(em.consts, dtype=np.float64),
        max_stack=em.max_depth,
    )


def eval_jet3(node, s):
    """Evaluate the expression and its first three derivatives at ``s``.

    Propagation is algebraic (Leibniz/chain rules on the compiled tape),
    so the result is exact up to floating-point rounding. Raises
    EvalDomainError outside the expression's real domain.
    """
    tape = compile_ast(node)
    v, d1, d2, d3 = _impl.tape_eval(tape.code, tape.consts, float(s))
    return Jet3(v, d1, d2, d3)
