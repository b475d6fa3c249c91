"""Terms over the fixed cryptographic signature.

Everything downstream (rewriting, frames, processes, the secrecy analysis)
manipulates the single `Term` type defined here: a tree whose nodes are
function symbols from the fixed signature, names, or variables.  Terms are
immutable and hash-consed, so structural equality is pointer equality and
subterms are shared freely across the saturation and search kernels.

Positions are tuples of positive integers; the empty tuple addresses the root.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Optional

# ----------------------------------------------------------------------------
# Signature

ARITY = {
    "enc": 3,
    "dec": 2,
    "enca": 3,
    "deca": 2,
    "pub": 1,
    "priv": 1,
    "pair": 2,
    "proj1": 1,
    "proj2": 1,
    "sign": 2,
    "check": 3,
    "retrieve": 1,
}

CONSTRUCTORS = frozenset({"pair", "enc", "enca", "sign"})
DESTRUCTORS = frozenset({"proj1", "proj2", "dec", "deca", "check", "retrieve"})

# Generic encryption/decryption: symmetric and asymmetric treated alike.
GENERIC_ENC = frozenset({"enc", "enca"})
GENERIC_DEC = frozenset({"dec", "deca"})

# Identifier reserved for the secret-slot marker and for destructor-chain
# holes.  Both are rejected by the parser.
MARKER_IDENT = "@x"
HOLE_IDENT = "z0"

Position = tuple  # tuple[int, ...]
EPSILON: Position = ()


class InvalidPositionError(ValueError):
    pass


class TermError(ValueError):
    pass


# ----------------------------------------------------------------------------
# Hash-consed term nodes

_APP, _NAME, _VAR = 0, 1, 2

_INTERN: dict = {}


class Term:
    """A node in a term tree: symbol application, name, or variable.

    Instances are interned: building the same tree twice yields the same
    object, so `==` is `is` and hashing is O(1).
    """

    __slots__ = ("kind", "label", "args", "_hash")

    def __new__(cls, kind, label, args):
        key = (kind, label, args)
        hit = _INTERN.get(key)
        if hit is not None:
            return hit
        self = object.__new__(cls)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "args", args)
        object.__setattr__(self, "_hash", hash(key))
        _INTERN[key] = self
        return self

    def __setattr__(self, *a):
        raise AttributeError("terms are immutable")

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other

    def __ne__(self, other):
        return self is not other

    def __repr__(self):
        return f"Term({render(self, unicode=False)!r})"

    # -- classification ------------------------------------------------------

    @property
    def is_app(self):
        return self.kind == _APP

    @property
    def is_name(self):
        return self.kind == _NAME

    @property
    def is_var(self):
        return self.kind == _VAR

    @property
    def is_leaf(self):
        return self.kind != _APP


def app(symbol: str, args) -> Term:
    args = tuple(args)
    arity = ARITY.get(symbol)
    if arity is None:
        raise TermError(f"unknown function symbol {symbol!r}")
    if len(args) != arity:
        raise TermError(f"{symbol} expects {arity} arguments, got {len(args)}")
    return Term(_APP, symbol, args)


def name(ident: str) -> Term:
    return Term(_NAME, ident, ())


def var(ident: str) -> Term:
    return Term(_VAR, ident, ())


# Shorthand constructors, used pervasively in tests and the corpus registry.
def pair(a, b):
    return app("pair", (a, b))


def enc(m, k, r):
    return app("enc", (m, k, r))


def dec(m, k):
    return app("dec", (m, k))


def enca(m, k, r):
    return app("enca", (m, k, r))


def deca(m, k):
    return app("deca", (m, k))


def proj1(t):
    return app("proj1", (t,))


def proj2(t):
    return app("proj2", (t,))


def sign(m, k):
    return app("sign", (m, k))


def check(m, sig, k):
    return app("check", (m, sig, k))


def retrieve(t):
    return app("retrieve", (t,))


def pub(a):
    return app("pub", (a,))


def priv(a):
    return app("priv", (a,))


MARKER = var(MARKER_IDENT)
HOLE = var(HOLE_IDENT)
OK = name("ok")


# ----------------------------------------------------------------------------
# Positions

def positions(t: Term) -> list:
    """All positions of t, in preorder."""
    out = [EPSILON]
    stack = [(t, EPSILON)]
    while stack:
        u, p = stack.pop()
        for i, child in enumerate(u.args, start=1):
            q = p + (i,)
            out.append(q)
            stack.append((child, q))
    out.sort()
    return out


def var_positions(t: Term) -> list:
    return [p for p in positions(t) if subterm_at(t, p).is_var]


def nonvar_positions(t: Term) -> list:
    return [p for p in positions(t) if not subterm_at(t, p).is_var]


def subterm_at(t: Term, p: Position) -> Term:
    for i in p:
        if not t.is_app or i < 1 or i > len(t.args):
            raise InvalidPositionError(f"position {format_position(p)} not in term")
        t = t.args[i - 1]
    return t


def has_position(t: Term, p: Position) -> bool:
    for i in p:
        if not t.is_app or i < 1 or i > len(t.args):
            return False
        t = t.args[i - 1]
    return True


def replace_at(u: Term, p: Position, v: Term) -> Term:
    if p == EPSILON:
        return v
    i = p[0]
    if not u.is_app or i < 1 or i > len(u.args):
        raise InvalidPositionError(f"position {format_position(p)} not in term")
    args = list(u.args)
    args[i - 1] = replace_at(args[i - 1], p[1:], v)
    return Term(_APP, u.label, tuple(args))


def position_diff(p: Position, q: Position) -> Optional[Position]:
    """p - q: the remainder when q is a prefix of p, else None."""
    if len(q) > len(p) or p[: len(q)] != q:
        return None
    return p[len(q):]


def is_prefix(q: Position, p: Position) -> bool:
    return len(q) <= len(p) and p[: len(q)] == q


def format_position(p: Position, unicode: bool = False) -> str:
    if p == EPSILON:
        return "ε" if unicode else "eps"
    sep = "·" if unicode else "."
    return sep.join(str(i) for i in p)


def parse_position(text: str) -> Position:
    text = text.strip()
    if text in ("eps", "ε", ""):
        return EPSILON
    parts = text.replace("·", ".").split(".")
    try:
        p = tuple(int(x) for x in parts)
    except ValueError:
        raise InvalidPositionError(f"bad position {text!r}")
    if any(i < 1 for i in p):
        raise InvalidPositionError(f"bad position {text!r}")
    return p


# ----------------------------------------------------------------------------
# Standard traversals

def subterms(t: Term) -> set:
    """The set of all subterms of t (including t itself)."""
    seen = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if u in seen:
            continue
        seen.add(u)
        stack.extend(u.args)
    return seen


def free_names(t: Term) -> set:
    return {u.label for u in subterms(t) if u.is_name}


def variables(t: Term) -> set:
    return {u for u in subterms(t) if u.is_var}


def head(t: Term):
    """The function symbol, name, or variable at the root."""
    return t.label


def is_subterm(v: Term, u: Term) -> bool:
    return v in subterms(u)


def is_strict_subterm(v: Term, u: Term) -> bool:
    return v is not u and is_subterm(v, u)


def is_ground(t: Term) -> bool:
    return not any(u.is_var for u in subterms(t))


def contains_symbol(t: Term, symbols) -> bool:
    return any(u.is_app and u.label in symbols for u in subterms(t))


def occurrences(t: Term, target: Term) -> list:
    """Positions p with t|_p == target."""
    out = []

    def walk(u, p):
        if u is target:
            out.append(p)
        for i, c in enumerate(u.args, start=1):
            walk(c, p + (i,))

    walk(t, EPSILON)
    return out


def is_public(t: Term, restricted) -> bool:
    """No restricted name occurs in t and priv is not used."""
    for u in subterms(t):
        if u.is_name and u.label in restricted:
            return False
        if u.is_app and u.label == "priv":
            return False
    return True


# ----------------------------------------------------------------------------
# Substitution

def apply_subst(sigma: dict, t: Term) -> Term:
    """Simultaneous substitution of variables; names are untouched.

    `sigma` maps Var terms to terms.  Variables outside the domain are left
    in place, so the application is non-iterative.
    """
    if not sigma:
        return t
    memo = {}

    def walk(u):
        if u.is_var:
            return sigma.get(u, u)
        if not u.args:
            return u
        hit = memo.get(u)
        if hit is not None:
            return hit
        out = Term(_APP, u.label, tuple(walk(a) for a in u.args))
        memo[u] = out
        return out

    return walk(t)


def subst_name(t: Term, ident: str, m: Term) -> Term:
    """Name instantiation t[ident -> m]: replaces the *name* ident."""
    target = name(ident)
    memo = {}

    def walk(u):
        if u is target:
            return m
        if not u.args:
            return u
        hit = memo.get(u)
        if hit is not None:
            return hit
        out = Term(_APP, u.label, tuple(walk(a) for a in u.args))
        memo[u] = out
        return out

    return walk(t)


def rename_names(t: Term, mapping: dict) -> Term:
    """Rename name identifiers according to `mapping` (str -> str)."""
    if not mapping:
        return t

    def walk(u):
        if u.is_name:
            new = mapping.get(u.label)
            return name(new) if new is not None else u
        if not u.args:
            return u
        return Term(_APP, u.label, tuple(walk(a) for a in u.args))

    return walk(t)


def match(pattern: Term, t: Term, binding: Optional[dict] = None) -> Optional[dict]:
    """First-order syntactic matching: find sigma with pattern*sigma == t."""
    out = dict(binding) if binding else {}
    stack = [(pattern, t)]
    while stack:
        p, u = stack.pop()
        if p.is_var:
            bound = out.get(p)
            if bound is None:
                out[p] = u
            elif bound is not u:
                return None
        elif p.is_name:
            if u is not p:
                return None
        else:
            if not u.is_app or u.label != p.label:
                return None
            stack.extend(zip(p.args, u.args))
    return out


# ----------------------------------------------------------------------------
# Rendering

_UNICODE_SUGAR = {"proj1": "π₁", "proj2": "π₂"}


def render(t: Term, unicode: bool = True) -> str:
    """Canonical text form.

    With unicode=True this follows the conventional notation: angle brackets
    for pairing, π₁/π₂ for projections, 𝚡 for the secret-slot marker, and
    position-word variable subscripts printed with the middle dot.
    """
    if t.is_name:
        return t.label
    if t.is_var:
        if t is MARKER:
            return "𝚡" if unicode else MARKER_IDENT
        if unicode and t.label.startswith("z_"):
            return "z_" + t.label[2:].replace(".", "·")
        return t.label
    args = ", ".join(render(a, unicode) for a in t.args)
    if t.label == "pair":
        return f"⟨{args}⟩" if unicode else f"<{args}>"
    sym = _UNICODE_SUGAR.get(t.label, t.label) if unicode else t.label
    return f"{sym}({args})"


def render_ascii(t: Term) -> str:
    return render(t, unicode=False)


# ----------------------------------------------------------------------------
# Parsing

class ParseError(ValueError):
    def __init__(self, message, line=1, col=1):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


_SYMBOL_ALIASES = {
    "pi1": "proj1",
    "pi2": "proj2",
    "π1": "proj1",
    "π2": "proj2",
    "π₁": "proj1",
    "π₂": "proj2",
}

_IDENT_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_IDENT_CONT = _IDENT_START | set("0123456789'.")


class _Lexer:
    """Shared tokenizer for the term, frame, and process grammars."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1
        self.tokens = []
        self._lex()
        self.index = 0

    def _advance(self, n=1):
        for _ in range(n):
            if self.pos < len(self.text) and self.text[self.pos] == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.pos += 1

    def _lex(self):
        text = self.text
        puncts = {
            "->": "ARROW",
            "⟨": "LANGLE",
            "⟩": "RANGLE",
            "<": "LANGLE",
            ">": "RANGLE",
            "(": "LPAREN",
            ")": "RPAREN",
            ",": "COMMA",
            ";": "SEMI",
            "{": "LBRACE",
            "}": "RBRACE",
            "[": "LBRACKET",
            "]": "RBRACKET",
            "=": "EQ",
            "|": "BAR",
            "!": "BANG",
            ".": "DOT",
            "·": "DOT",
        }
        while self.pos < len(text):
            c = text[self.pos]
            if c in " \t\r\n":
                self._advance()
                continue
            if c == "#" or (c == "/" and text[self.pos : self.pos + 2] == "//"):
                while self.pos < len(text) and text[self.pos] != "\n":
                    self._advance()
                continue
            two = text[self.pos : self.pos + 2]
            if two == "->":
                self.tokens.append(("ARROW", two, self.line, self.col))
                self._advance(2)
                continue
            if c in puncts:
                self.tokens.append((puncts[c], c, self.line, self.col))
                self._advance()
                continue
            if c in _IDENT_START or c in "πε𝚡@":
                start = self.pos
                line, col = self.line, self.col
                while self.pos < len(text) and (
                    text[self.pos] in _IDENT_CONT or text[self.pos] in "π₁₂𝚡@"
                ):
                    # A dot ends an identifier unless it continues a position
                    # word, e.g. the variable z_1.2; bare dots stay DOT tokens.
                    if text[self.pos] == "." and not (
                        self.pos + 1 < len(text)
                        and text[self.pos + 1].isdigit()
                        and "_" in text[start : self.pos]
                    ):
                        break
                    self._advance()
                ident = text[start : self.pos]
                self.tokens.append(("IDENT", ident, line, col))
                continue
            if c.isdigit():
                start = self.pos
                line, col = self.line, self.col
                while self.pos < len(text) and text[self.pos].isdigit():
                    self._advance()
                self.tokens.append(("NUM", text[start : self.pos], line, col))
                continue
            raise ParseError(f"unexpected character {c!r}", self.line, self.col)
        self.tokens.append(("EOF", "", self.line, self.col))

    # -- token stream --------------------------------------------------------

    def peek(self):
        return self.tokens[self.index]

    def next(self):
        tok = self.tokens[self.index]
        if tok[0] != "EOF":
            self.index += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            raise ParseError(f"expected {kind}, found {tok[1]!r}", tok[2], tok[3])
        return tok

    def accept(self, kind):
        if self.peek()[0] == kind:
            return self.next()
        return None


def _classify_ident(ident: str, vars_in_scope, lexer, tok) -> Term:
    ident = ident.replace("·", ".")
    if ident in (MARKER_IDENT, "𝚡", HOLE_IDENT):
        raise ParseError(f"identifier {ident!r} is reserved", tok[2], tok[3])
    if ident in _SYMBOL_ALIASES or ident in ARITY:
        raise ParseError(f"symbol {ident!r} needs arguments", tok[2], tok[3])
    if ident.startswith("z") or (vars_in_scope is not None and ident in vars_in_scope):
        return var(ident)
    return name(ident)


def _parse_term(lexer: _Lexer, vars_in_scope=None) -> Term:
    tok = lexer.next()
    kind, value = tok[0], tok[1]
    if kind == "LANGLE":
        left = _parse_term(lexer, vars_in_scope)
        lexer.expect("COMMA")
        right = _parse_term(lexer, vars_in_scope)
        lexer.expect("RANGLE")
        return pair(left, right)
    if kind != "IDENT":
        raise ParseError(f"expected a term, found {value!r}", tok[2], tok[3])
    symbol = _SYMBOL_ALIASES.get(value, value)
    if lexer.peek()[0] == "LPAREN":
        if symbol not in ARITY:
            raise ParseError(f"unknown function symbol {value!r}", tok[2], tok[3])
        lexer.next()
        args = [_parse_term(lexer, vars_in_scope)]
        while lexer.accept("COMMA"):
            args.append(_parse_term(lexer, vars_in_scope))
        lexer.expect("RPAREN")
        try:
            return app(symbol, args)
        except TermError as e:
            raise ParseError(str(e), tok[2], tok[3])
    return _classify_ident(value, vars_in_scope, lexer, tok)


def parse_term(text: str, vars_in_scope: Optional[Iterable[str]] = None) -> Term:
    """Parse the ASCII/sugar term grammar.

    Identifiers starting with `z`, or listed in vars_in_scope, are variables;
    everything else is a name or a signature symbol.
    """
    scope = set(vars_in_scope) if vars_in_scope is not None else None
    lexer = _Lexer(text)
    t = _parse_term(lexer, scope)
    tok = lexer.peek()
    if tok[0] != "EOF":
        raise ParseError(f"trailing input {tok[1]!r}", tok[2], tok[3])
    return t


# ----------------------------------------------------------------------------
# Fresh-name supply

def fresh_name(base: str, used) -> str:
    """Deterministic fresh identifier: base, then base#2, base#3, ..."""
    if base not in used:
        return base
    k = 2
    while f"{base}#{k}" in used:
        k += 1
    return f"{base}#{k}"


def base_ident(ident: str) -> str:
    """Strip the freshening suffix: r_s#2 -> r_s."""
    i = ident.find("#")
    return ident if i < 0 else ident[:i]
