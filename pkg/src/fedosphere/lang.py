"""A small expression language over the sphere engine: lexer, parser, sort checker, evaluator, printer.

Grammar (ASCII, whitespace ignored)::

    expr   := term (('+' | '-') term)*
    term   := ['-'] factor (('*' | '/') factor)*
    factor := primary ['^' ['-'] INT]
    primary:= NUMBER | ATOM | FN '(' expr (',' expr)* ')' | '(' expr ')'

Vectors: ``X P S K Z THETA ALPHA XHAT PHAT LHAT``; their components are
``X1``..``LHAT3`` (``TH1``, ``AL1`` for the forms).  Scalars: ``SS RT OMEGA OMT
R0 RSOL QHAT I`` and jets ``F0``..``U3``.  Functions: ``dot cross comm D DHAT
DTILDE LO RESIDUAL VEC``.  ``/`` divides by a fiber-and-form-free scalar.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .scalars import Scalar
from .weyl import AL1, AL2, TH1, TH2, OpExpr, VecOp, cross, dot, graded_comm, lo

__all__ = [
    "Ast",
    "Env",
    "ParseError",
    "SortError",
    "Token",
    "evaluate",
    "lex",
    "parse",
    "pretty",
    "recognize",
    "sort_of",
]

SCALAR, VECTOR = "scalar", "vector"

VECTOR_ATOMS = ("X", "P", "S", "K", "Z", "THETA", "ALPHA", "XHAT", "PHAT", "LHAT")
_COMPONENT_PREFIX = {
    "X": "X",
    "P": "P",
    "S": "S",
    "K": "K",
    "Z": "Z",
    "TH": "THETA",
    "AL": "ALPHA",
    "XHAT": "XHAT",
    "PHAT": "PHAT",
    "LHAT": "LHAT",
}
SCALAR_ATOMS = ("SS", "RT", "OMEGA", "OMT", "R0", "RSOL", "QHAT", "I")
_JET_RE = re.compile(r"^([FGHVWYTQNU])([0-9])$")
_COMP_RE = re.compile(r"^(XHAT|PHAT|LHAT|TH|AL|X|P|S|K|Z)([123])$")

# name -> arity
FUNCTIONS = {
    "dot": 2,
    "cross": 2,
    "comm": 2,
    "D": 1,
    "DHAT": 1,
    "DTILDE": 1,
    "LO": 1,
    "RESIDUAL": 1,
    "VEC": 3,
}


class ParseError(ValueError):
    def __init__(self, message: str, span: tuple, expected: frozenset):
        super().__init__(f"{message} at {span[0]}..{span[1]}; expected one of {sorted(expected)}")
        self.span = span
        self.expected = expected


class SortError(TypeError):
    def __init__(self, message: str, span: tuple):
        super().__init__(f"{message} at {span[0]}..{span[1]}")
        self.span = span


# -- lexer ----------------------------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    kind: str  # ident, number, op, punct, end
    lexeme: str
    span: tuple  # byte offsets [start, end)


_SPACE_RE = re.compile(rb"\s*")
_TOKEN_RE = re.compile(rb"\s*(?:([A-Za-z_][A-Za-z0-9_]*)|([0-9]+)|([-+*/^])|([(),]))")


def lex(text: str) -> list[Token]:
    data = text.encode("utf-8")
    pos = 0
    out = []
    while True:
        m = _SPACE_RE.match(data, pos)
        pos = m.end()
        if pos >= len(data):
            break
        m = _TOKEN_RE.match(data, pos)
        if m is None or m.end() == pos:
            expected = frozenset({"identifier", "number", "operator", "(", ")", ","})
            raise ParseError("unexpected character", (pos, pos + 1), expected)
        for kind, g in zip(("ident", "number", "op", "punct"), m.groups()):
            if g is not None:
                start = m.start(m.lastindex)
                out.append(Token(kind, g.decode(), (start, m.end())))
                break
        pos = m.end()
    out.append(Token("end", "", (len(data), len(data))))
    return out


# -- AST ------------------------------------------------------------------------------------


@dataclass
class Ast:
    kind: str  # num, atom, neg, add, sub, mul, div, pow, call
    span: tuple
    value: Union[int, str, None] = None
    args: list = field(default_factory=list)

    def __str__(self) -> str:
        return unparse(self)


def unparse(a: Ast) -> str:
    k = a.kind
    if k == "num":
        return str(a.value)
    if k == "atom":
        return a.value
    if k == "neg":
        return f"(-{unparse(a.args[0])})"
    if k in ("add", "sub", "mul", "div"):
        op = {"add": "+", "sub": "-", "mul": "*", "div": "/"}[k]
        return f"({unparse(a.args[0])} {op} {unparse(a.args[1])})"
    if k == "pow":
        return f"({unparse(a.args[0])})^{a.value}"
    return f"{a.value}(" + ", ".join(unparse(x) for x in a.args) + ")"


def atom_sort(name: str) -> str | None:
    if name in VECTOR_ATOMS:
        return VECTOR
    if name in SCALAR_ATOMS or _JET_RE.match(name) or _COMP_RE.match(name):
        return SCALAR
    return None


class _Parser:
    def __init__(self, text: str):
        self.toks = lex(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, expected) -> ParseError:
        t = self.tok
        span = t.span if t.span[1] > t.span[0] else (t.span[0], t.span[0])
        what = repr(t.lexeme) if t.kind != "end" else "end of input"
        return ParseError(f"unexpected {what}", span, frozenset(expected))

    def eat(self, lexeme: str) -> Token:
        if self.tok.lexeme != lexeme or self.tok.kind == "end":
            raise self.error({lexeme})
        t = self.tok
        self.i += 1
        return t

    def parse(self) -> Ast:
        a = self.expr()
        if self.tok.kind != "end":
            raise self.error({"+", "-", "*", "/", "end of input"})
        return a

    def expr(self) -> Ast:
        a = self.term()
        while self.tok.lexeme in ("+", "-") and self.tok.kind == "op":
            op = self.tok.lexeme
            self.i += 1
            b = self.term()
            a = Ast("add" if op == "+" else "sub", (a.span[0], b.span[1]), None, [a, b])
        return a

    def term(self) -> Ast:
        start = self.tok.span[0]
        neg = False
        if self.tok.kind == "op" and self.tok.lexeme == "-":
            neg = True
            self.i += 1
        a = self.factor()
        while self.tok.kind == "op" and self.tok.lexeme in ("*", "/"):
            op = self.tok.lexeme
            self.i += 1
            b = self.factor()
            a = Ast("mul" if op == "*" else "div", (a.span[0], b.span[1]), None, [a, b])
        if neg:
            a = Ast("neg", (start, a.span[1]), None, [a])
        return a

    def factor(self) -> Ast:
        a = self.primary()
        if self.tok.kind == "op" and self.tok.lexeme == "^":
            self.i += 1
            sign = 1
            if self.tok.kind == "op" and self.tok.lexeme == "-":
                sign = -1
                self.i += 1
            if self.tok.kind != "number":
                raise self.error({"integer"})
            t = self.tok
            self.i += 1
            a = Ast("pow", (a.span[0], t.span[1]), sign * int(t.lexeme), [a])
        return a

    def primary(self) -> Ast:
        t = self.tok
        if t.kind == "number":
            self.i += 1
            return Ast("num", t.span, int(t.lexeme))
        if t.kind == "punct" and t.lexeme == "(":
            self.i += 1
            a = self.expr()
            end = self.eat(")")
            a.span = (t.span[0], end.span[1])
            return a
        if t.kind == "ident":
            self.i += 1
            if t.lexeme in FUNCTIONS:
                self.eat("(")
                args = [self.expr()]
                while self.tok.lexeme == "," and self.tok.kind == "punct":
                    self.i += 1
                    args.append(self.expr())
                end = self.eat(")")
                return Ast("call", (t.span[0], end.span[1]), t.lexeme, args)
            if atom_sort(t.lexeme) is None:
                raise ParseError(f"unknown name {t.lexeme!r}", t.span, frozenset({"atom", "function"}))
            return Ast("atom", t.span, t.lexeme)
        raise self.error({"number", "atom", "function", "("})


def parse(text: str, check: bool = True) -> Ast:
    """Parse ``text``; with ``check`` the tree is also sort-checked."""
    a = _Parser(text).parse()
    if check:
        sort_of(a)
    return a


# -- sorts ----------------------------------------------------------------------------------


def sort_of(a: Ast) -> str:
    k = a.kind
    if k == "num":
        return SCALAR
    if k == "atom":
        return atom_sort(a.value)
    if k == "neg":
        return sort_of(a.args[0])
    if k in ("add", "sub"):
        s1, s2 = sort_of(a.args[0]), sort_of(a.args[1])
        if s1 != s2:
            raise SortError(f"cannot add a {s1} and a {s2}", a.span)
        return s1
    if k == "mul":
        s1, s2 = sort_of(a.args[0]), sort_of(a.args[1])
        if s1 == s2 == VECTOR:
            raise SortError("product of two vectors; use dot or cross", a.span)
        return VECTOR if VECTOR in (s1, s2) else SCALAR
    if k == "div":
        s2 = sort_of(a.args[1])
        if s2 != SCALAR:
            raise SortError("division by a vector", a.args[1].span)
        return sort_of(a.args[0])
    if k == "pow":
        if sort_of(a.args[0]) != SCALAR:
            raise SortError("power of a vector", a.span)
        return SCALAR
    # call
    name, args = a.value, a.args
    if len(args) != FUNCTIONS[name]:
        raise SortError(f"{name} takes {FUNCTIONS[name]} argument(s), got {len(args)}", a.span)
    sorts = [sort_of(x) for x in args]
    if name in ("dot", "cross"):
        for x, s in zip(args, sorts):
            if s != VECTOR:
                raise SortError(f"{name} of a scalar", x.span)
        return SCALAR if name == "dot" else VECTOR
    if name == "comm":
        if sorts == [VECTOR, VECTOR]:
            raise SortError("comm of two vectors", a.span)
        return VECTOR if VECTOR in sorts else SCALAR
    if name in ("LO", "RESIDUAL"):
        if sorts[0] != SCALAR:
            raise SortError(f"{name} of a vector", args[0].span)
        return SCALAR
    if name == "VEC":
        for x, s in zip(args, sorts):
            if s != SCALAR:
                raise SortError("VEC components must be scalars", x.span)
        return VECTOR
    return sorts[0]  # D, DHAT, DTILDE


# -- evaluation -----------------------------------------------------------------------------


class Env:
    """Lazily built engine objects that atoms refer to."""

    def __init__(self, jet_order: int = 3):
        from .fedosov import Fedosov

        self.fed = Fedosov(jet_order=jet_order)
        self.frame = self.fed.frame
        self.alg = self.frame.alg
        self.tower = self.frame.tower
        self._obs = None
        self._cache: dict = {}

    @property
    def obs(self):
        if self._obs is None:
            from .observables import Observables

            self._obs = Observables(self.fed)
        return self._obs

    @property
    def rsol(self) -> OpExpr:
        return self.obs.r

    def vector(self, name: str) -> VecOp:
        fr = self.frame
        if name in ("X", "P", "S", "K", "THETA", "ALPHA"):
            return {"X": fr.x, "P": fr.p, "S": fr.s, "K": fr.k, "THETA": fr.theta, "ALPHA": fr.alpha}[name]
        if name == "Z":
            return fr.z
        return {"XHAT": self.obs.xhat, "PHAT": self.obs.phat, "LHAT": self.obs.lhat}[name]()

    def atom(self, name: str):
        if name in self._cache:
            return self._cache[name]
        v = self._atom(name)
        self._cache[name] = v
        return v

    def _atom(self, name: str):
        a, tw, fed, fr = self.alg, self.tower, self.fed, self.frame
        if name in VECTOR_ATOMS:
            return self.vector(name)
        m = _JET_RE.match(name)
        if m:
            return a.scalar(tw.jet(m.group(1).lower(), int(m.group(2))))
        m = _COMP_RE.match(name)
        if m:
            return self.vector(_COMPONENT_PREFIX[m.group(1)])[int(m.group(2)) - 1]
        return {
            "SS": lambda: fr.SS,
            "RT": lambda: fr.R,
            "OMEGA": lambda: fr.omega,
            "OMT": lambda: fr.omt,
            "R0": fed.build_r0,
            "RSOL": lambda: self.rsol,
            "QHAT": lambda: fed.sa + self.rsol,
            "I": lambda: a.scalar(tw.I),
        }[name]()


def _inverse(v: OpExpr, span) -> OpExpr:
    if not v.is_scalar():
        raise SortError("only fiber-free, form-free scalars can be inverted", span)
    c = v.scalar_value()
    if c.is_zero():
        raise ZeroDivisionError("division by zero")
    return v.alg.scalar(c.inv())


def evaluate(a: Ast | str, env: Env | None = None):
    """Value of an expression: ``OpExpr`` for scalars, ``VecOp`` for vectors."""
    if isinstance(a, str):
        a = parse(a)
    else:
        sort_of(a)
    env = env if env is not None else Env()
    return _eval(a, env)


def _eval(a: Ast, env: Env):
    k = a.kind
    alg = env.alg
    if k == "num":
        return alg.scalar(a.value)
    if k == "atom":
        return env.atom(a.value)
    args = [_eval(x, env) for x in a.args] if k != "call" else None
    if k == "neg":
        return -args[0]
    if k == "add":
        return args[0] + args[1]
    if k == "sub":
        return args[0] - args[1]
    if k == "mul":
        l, r = args
        if isinstance(r, VecOp):
            return l * r if isinstance(l, OpExpr) else r
        return l * r
    if k == "div":
        return args[0] * _inverse(args[1], a.args[1].span)
    if k == "pow":
        base, e = args[0], a.value
        if e < 0:
            base, e = _inverse(base, a.span), -e
        return base**e
    name = a.value
    vals = [_eval(x, env) for x in a.args]
    if name == "dot":
        return dot(*vals)
    if name == "cross":
        return cross(*vals)
    if name == "VEC":
        return VecOp(*vals)
    if name == "comm":
        A, B = vals
        if isinstance(A, VecOp):
            return A.map(lambda c: graded_comm(c, B))
        if isinstance(B, VecOp):
            return B.map(lambda c: graded_comm(A, c))
        return graded_comm(A, B)
    if name == "D":
        return env.frame.D(vals[0])
    if name == "DHAT":
        V = vals[0]
        return V.map(env.fed.dhat) if isinstance(V, VecOp) else env.fed.dhat(V)
    if name == "DTILDE":
        return env.obs.Dtilde(vals[0])
    if name == "LO":
        return alg.scalar(lo(vals[0]))
    if name == "RESIDUAL":
        return env.fed.residual_r(vals[0])
    raise AssertionError(name)


# -- pretty printing ------------------------------------------------------------------------

_VAR_TEXT = {"I": "I", "x3": "X3", "rho": "X3*RT", "x1": "X1", "x2": "X2", "p1": "P1", "p2": "P2", "s1": "S1", "s2": "S2"}
_FORM_TEXT = ((TH1, "TH1"), (TH2, "TH2"), (AL1, "AL1"), (AL2, "AL2"))


def _var_text(name: str) -> str:
    return _VAR_TEXT.get(name) or name.upper()


def _mono_text(names, exps) -> tuple:
    """Factor list for one monomial; ``rho^n`` is written ``(X3*RT)^n``."""
    parts = []
    for nm, e in zip(names, exps):
        if not e:
            continue
        t = _var_text(nm)
        if "*" in t:
            t = f"({t})"
        parts.append(t if e == 1 else f"{t}^{e}")
    return parts


def _frac_text(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _poly_terms(poly, names) -> list:
    """``[(sign, body)]`` in ascending total degree."""
    items = []
    for exps, c in poly.to_dict().items():
        c = Fraction(int(c.p), int(c.q))
        items.append((sum(exps), tuple(-e for e in exps), exps, c))
    items.sort()
    out = []
    for _, _, exps, c in items:
        parts = _mono_text(names, exps)
        sign = "-" if c < 0 else "+"
        c = abs(c)
        if not parts:
            body = _frac_text(c)
        elif c == 1:
            body = "*".join(parts)
        else:
            body = "*".join([_frac_text(c)] + parts)
        out.append((sign, body))
    return out


def _join(terms: list) -> str:
    if not terms:
        return "0"
    s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        s += f" {sign} {body}"
    return s


def _scalar_text(c: Scalar) -> tuple:
    """``(sign, body, is_atomic)`` for a nonzero coefficient."""
    names = c.tower.names
    num = _poly_terms(c.num, names)
    den_one = c.den.is_one()
    if len(num) == 1:
        sign, body = num[0]
        if den_one:
            return sign, body, "+" not in body and "-" not in body
        den = _join(_poly_terms(c.den, names))
        den = den if len(_poly_terms(c.den, names)) == 1 and "/" not in den else f"({den})"
        b = body if "/" not in body else f"({body})"
        return sign, f"{b}/{den}", False
    body = f"({_join(num)})"
    if not den_one:
        body += f"/({_join(_poly_terms(c.den, names))})"
    return "+", body, den_one


def _opexpr_terms(E: OpExpr) -> list:
    out = []
    for (mask, a, b) in sorted(E.terms):
        c = E.terms[(mask, a, b)]
        ops = [t for bit, t in _FORM_TEXT if mask & bit]
        if a:
            ops.append("K1" if a == 1 else f"K1^{a}")
        if b:
            ops.append("K2" if b == 1 else f"K2^{b}")
        sign, body, _ = _scalar_text(c)
        if ops:
            if body == "1":
                body = "*".join(ops)
            else:
                body = body + "*" + "*".join(ops)
        out.append((sign, body))
    return out


def pretty(e) -> str:
    """Deterministic text for an ``OpExpr``, ``VecOp`` or ``Scalar`` that parses back to it."""
    if isinstance(e, VecOp):
        return "VEC(" + ", ".join(pretty(c) for c in e) + ")"
    if isinstance(e, OpExpr) and e.is_scalar():
        e = e.scalar_value()
    if isinstance(e, Scalar):
        if e.is_zero():
            return "0"
        if e.den.is_one():
            return _join(_poly_terms(e.num, e.tower.names))
        sign, body, _ = _scalar_text(e)
        return ("-" if sign == "-" else "") + body
    return _join(_opexpr_terms(e))


# -- recognition of named results --------------------------------------------------------------

RECOGNIZABLE = (
    tuple(f"{v}{i}" for v in ("XHAT", "PHAT", "LHAT") for i in (1, 2, 3))
    + tuple(f"{v}{i}" for v in ("X", "P", "S", "K", "Z") for i in (1, 2, 3))
    + ("SS", "RT", "OMEGA", "OMT", "I", "R0", "RSOL", "QHAT")
    + VECTOR_ATOMS
)


def recognize(value, env: Env) -> str:
    """Name of a catalogued atom equal to ``+-value``, a constant, or else ``pretty(value)``."""
    if value.is_zero():
        return "0"
    if isinstance(value, OpExpr) and value.is_scalar() and value.scalar_value().is_constant():
        return pretty(value)
    for name in RECOGNIZABLE:
        if (atom_sort(name) == VECTOR) != isinstance(value, VecOp):
            continue
        v = env.atom(name)
        if (v - value).is_zero():
            return name
        if (v + value).is_zero():
            return f"-{name}"
    return pretty(value)
