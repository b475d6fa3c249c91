"""The convergent rewrite system for the equational theory.

Six rules, one per equation, oriented left to right.  Every right-hand side
is either a variable of the left-hand side (occurring there exactly once) or
the constant ok; this subterm property is what makes saturation and the
position-tracking functions below work.

Position tracking (`par1`, `par`, `par_inv`) follows symbol occurrences
through a normalization: a position either survives at a computable new
position or is consumed by the reduction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .terms import (
    EPSILON,
    OK,
    Position,
    Term,
    app,
    apply_subst,
    has_position,
    is_prefix,
    match,
    position_diff,
    positions,
    replace_at,
    subterm_at,
    var,
)

_z1, _z2, _z3 = var("z1"), var("z2"), var("z3")


@dataclass(frozen=True)
class RewriteRule:
    name: str
    lhs: Term
    rhs: Term
    # Position of the rhs variable inside the lhs; None when the rhs is the
    # constant ok (nothing of the redex survives).
    rhs_pos: Optional[Position]


RULES = (
    RewriteRule("proj1", app("proj1", (app("pair", (_z1, _z2)),)), _z1, (1, 1)),
    RewriteRule("proj2", app("proj2", (app("pair", (_z1, _z2)),)), _z2, (1, 2)),
    RewriteRule("dec", app("dec", (app("enc", (_z1, _z2, _z3)), _z2)), _z1, (1, 1)),
    RewriteRule(
        "deca",
        app("deca", (app("enca", (_z1, app("pub", (_z2,)), _z3)), app("priv", (_z2,)))),
        _z1,
        (1, 1),
    ),
    RewriteRule(
        "check",
        app(
            "check",
            (_z1, app("sign", (_z1, app("priv", (_z2,)))), app("pub", (_z2,))),
        ),
        OK,
        None,
    ),
    RewriteRule("retrieve", app("retrieve", (app("sign", (_z1, _z2)),)), _z1, (1, 1)),
)

_RULE_BY_HEAD = {r.lhs.label: r for r in RULES}


@dataclass(frozen=True)
class ReductionStep:
    redex_position: Position
    rule: RewriteRule
    matcher: dict


def rule_match_at_root(t: Term):
    """The unique applicable rule at the root of t, with its matcher."""
    if not t.is_app:
        return None
    rule = _RULE_BY_HEAD.get(t.label)
    if rule is None:
        return None
    theta = match(rule.lhs, t)
    if theta is None:
        return None
    return rule, theta


def _contract(rule: RewriteRule, theta: dict) -> Term:
    return apply_subst(theta, rule.rhs) if rule.rhs_pos is not None else OK


def reduce_once(t: Term):
    """One leftmost-innermost step: (result, ReductionStep), or None."""

    def walk(u: Term, p: Position):
        for i, child in enumerate(u.args, start=1):
            hit = walk(child, p + (i,))
            if hit is not None:
                return hit
        m = rule_match_at_root(u)
        if m is not None:
            rule, theta = m
            return p, rule, theta
        return None

    hit = walk(t, EPSILON)
    if hit is None:
        return None
    p, rule, theta = hit
    reduct = replace_at(t, p, _contract(rule, theta))
    return reduct, ReductionStep(p, rule, theta)


_NF_CACHE: dict = {}


def normalize(t: Term) -> Term:
    """The unique normal form (innermost, memoized)."""
    hit = _NF_CACHE.get(t)
    if hit is not None:
        return hit
    if t.is_leaf:
        _NF_CACHE[t] = t
        return t
    args = tuple(normalize(a) for a in t.args)
    u = app(t.label, args) if args != t.args else t
    m = rule_match_at_root(u)
    if m is None:
        nf = u
    else:
        rule, theta = m
        # The contractum is a subterm of u (all children already normal) or
        # the constant ok, so it is itself in normal form.
        nf = _contract(rule, theta)
    _NF_CACHE[t] = nf
    _NF_CACHE[nf] = nf
    return nf


def is_normal(t: Term) -> bool:
    return normalize(t) is t


def equal_mod_theory(u: Term, v: Term) -> bool:
    return normalize(u) is normalize(v)


def reduction_trace(t: Term):
    """The leftmost-innermost reduction sequence from t to its normal form.

    Returns a list of (term-before-step, ReductionStep) pairs.
    """
    out = []
    while True:
        step = reduce_once(t)
        if step is None:
            return out
        reduct, meta = step
        out.append((t, meta))
        t = reduct


class NotARedexError(ValueError):
    pass


def par1(u: Term, p: Position, q: Position) -> Optional[Position]:
    """Position of u|_p after one rewriting step of u at q.

    None means the occurrence is consumed by the step.  Raises if no rule
    applies at q.
    """
    redex = subterm_at(u, q)
    m = rule_match_at_root(redex)
    if m is None:
        raise NotARedexError(f"no rule applies at {q}")
    rule, _ = m
    if not is_prefix(q, p):
        return p
    if rule.rhs_pos is None:
        # Everything at or below the redex is replaced by the constant.
        return None
    anchor = q + rule.rhs_pos
    rest = position_diff(p, anchor)
    if rest is None:
        return None
    return q + rest


_PAR_CACHE: dict = {}


def _par_map(u: Term) -> dict:
    """Forward position map from u into normalize(u); consumed -> absent."""
    hit = _PAR_CACHE.get(u)
    if hit is not None:
        return hit
    current = {p: p for p in positions(u)}
    t = u
    while True:
        step = reduce_once(t)
        if step is None:
            _PAR_CACHE[u] = current
            return current
        reduct, meta = step
        nxt = {}
        for orig, p in current.items():
            p2 = par1(t, p, meta.redex_position)
            if p2 is not None:
                nxt[orig] = p2
        current = nxt
        t = reduct


def par(u: Term, p: Position) -> Optional[Position]:
    """Position of u|_p inside normalize(u), or None if consumed."""
    if not has_position(u, p):
        raise ValueError(f"{p} is not a position of the term")
    return _par_map(u).get(p)


def par_inv(u: Term, p: Position) -> Optional[Position]:
    """The position of normalize(u)|_p back inside u, if any.

    par is injective where defined, so inversion is a table lookup.  The ok
    node introduced by the check rule has no preimage.
    """
    if not has_position(normalize(u), p):
        raise ValueError(f"{p} is not a position of the normal form")
    for orig, target in _par_map(u).items():
        if target == p:
            return orig
    return None
