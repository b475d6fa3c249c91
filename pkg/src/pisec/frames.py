"""Frames, intruder deduction, static equivalence, and frame well-formedness.

A frame is the attacker's view of a protocol run: a set of restricted names
plus an ordered substitution binding handle variables to the ground messages
sent so far.  Deduction asks what the attacker can compute from a frame;
static equivalence asks whether two frames pass the same public equality
tests.  Both are decided by saturating the frame into a knowledge set of
extractable subterms with recipes, plus a bounded brute-force oracle used to
cross-check the decision procedures.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional, Sequence

from .rewrite import equal_mod_theory, is_normal, normalize
from .terms import (
    DESTRUCTORS,
    GENERIC_ENC,
    EPSILON,
    ParseError,
    Position,
    Term,
    _Lexer,
    _parse_term,
    app,
    apply_subst,
    dec,
    deca,
    format_position,
    free_names,
    fresh_name,
    is_ground,
    is_prefix,
    is_public,
    name,
    pair,
    proj1,
    proj2,
    rename_names,
    retrieve,
    render,
    subterms,
    var,
    variables,
)


class NotPublicError(ValueError):
    pass


class NameClashError(ValueError):
    pass


class DomainMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class Frame:
    """nu restricted . {handle -> ground term, ...} with ordered bindings."""

    restricted: frozenset
    bindings: tuple  # tuple[(handle str, Term), ...]

    def __post_init__(self):
        handles = [h for h, _ in self.bindings]
        if len(set(handles)) != len(handles):
            raise ValueError("frame handles must be pairwise distinct")
        for h, t in self.bindings:
            if not is_ground(t):
                raise ValueError(f"binding {h} is not ground")

    @property
    def domain(self):
        return tuple(h for h, _ in self.bindings)

    @property
    def range(self):
        return tuple(t for _, t in self.bindings)

    def subst(self) -> dict:
        return {var(h): t for h, t in self.bindings}

    def binding(self, handle: str) -> Term:
        for h, t in self.bindings:
            if h == handle:
                return t
        raise KeyError(handle)

    def normalized(self) -> "Frame":
        return Frame(self.restricted, tuple((h, normalize(t)) for h, t in self.bindings))

    def free_names(self) -> set:
        out = set()
        for _, t in self.bindings:
            out |= free_names(t)
        return out - set(self.restricted)

    def render(self, unicode: bool = True) -> str:
        nu = ",".join(sorted(self.restricted))
        body = ", ".join(f"{h} -> {render(t, unicode)}" for h, t in self.bindings)
        return f"nu {nu}. {{{body}}}"


def frame(restricted, bindings) -> Frame:
    return Frame(frozenset(restricted), tuple(bindings))


def parse_frame(text: str) -> Frame:
    """Parse `frame { restrict s, k; x -> enc(s,k,r); y -> k; }`."""
    lexer = _Lexer(text)
    tok = lexer.expect("IDENT")
    if tok[1] != "frame":
        raise ParseError("expected 'frame'", tok[2], tok[3])
    lexer.expect("LBRACE")
    restricted: list = []
    bindings: list = []
    while True:
        nxt = lexer.peek()
        if nxt[0] == "RBRACE":
            lexer.next()
            break
        if nxt[0] == "IDENT" and nxt[1] == "restrict":
            lexer.next()
            restricted.append(lexer.expect("IDENT")[1])
            while lexer.accept("COMMA"):
                restricted.append(lexer.expect("IDENT")[1])
            lexer.expect("SEMI")
            continue
        handle = lexer.expect("IDENT")[1]
        lexer.expect("ARROW")
        term = _parse_term(lexer, set())
        lexer.expect("SEMI")
        if not is_ground(term):
            raise ParseError(f"binding {handle} is not ground", nxt[2], nxt[3])
        bindings.append((handle, term))
    tok = lexer.peek()
    if tok[0] != "EOF":
        raise ParseError(f"trailing input {tok[1]!r}", tok[2], tok[3])
    return frame(restricted, bindings)


# ----------------------------------------------------------------------------
# Saturation: the deducible-subterm knowledge set

@dataclass(frozen=True)
class KnowledgeSet:
    """Saturated deducible subterms of a frame, with minimal-size recipes.

    entries maps each extractable normal-form term to (recipe, recipe size).
    Handles appear with themselves as recipes; the closure applies
    projections to pairs, decryption to ciphers whose key is deducible, and
    message retrieval to signatures.  Free names and public compositions are
    synthesized on demand by `deduce`, not stored.
    """

    frame: Frame
    entries: dict

    def recipe(self, t: Term):
        hit = self.entries.get(t)
        return hit[0] if hit else None

    def terms(self):
        return list(self.entries)


def _recipe_size(t: Term) -> int:
    return 1 + sum(_recipe_size(a) for a in t.args)


def saturate(fr: Frame) -> KnowledgeSet:
    restricted = fr.restricted
    entries: dict = {}

    def improve(term, recipe, size) -> bool:
        old = entries.get(term)
        if old is None or size < old[1]:
            entries[term] = (recipe, size)
            return True
        return False

    for h, t in fr.bindings:
        improve(normalize(t), var(h), 1)

    def synth_min(target, memo):
        """Minimal public recipe for a normal-form target, or None."""
        if target in memo:
            return memo[target]
        best = entries.get(target)
        if target.is_name and target.label not in restricted:
            cand = (target, 1)
            if best is None or cand[1] < best[1]:
                best = cand
        if target.is_app and target.label != "priv":
            parts = [synth_min(a, memo) for a in target.args]
            if all(p is not None for p in parts):
                size = 1 + sum(p[1] for p in parts)
                if best is None or size < best[1]:
                    best = (app(target.label, [p[0] for p in parts]), size)
        memo[target] = best
        return best

    changed = True
    while changed:
        changed = False
        memo: dict = {}
        for t, (recipe, size) in sorted(entries.items(), key=lambda kv: kv[1][1]):
            if not t.is_app:
                continue
            if t.label == "pair":
                changed |= improve(t.args[0], proj1(recipe), size + 1)
                changed |= improve(t.args[1], proj2(recipe), size + 1)
            elif t.label == "enc":
                key = synth_min(t.args[1], memo)
                if key is not None:
                    changed |= improve(
                        t.args[0], dec(recipe, key[0]), 1 + size + key[1]
                    )
            elif t.label == "enca":
                k = t.args[1]
                if k.is_app and k.label == "pub":
                    pk = entries.get(app("priv", k.args))
                    if pk is not None:
                        changed |= improve(
                            t.args[0], deca(recipe, pk[0]), 1 + size + pk[1]
                        )
            elif t.label == "sign":
                changed |= improve(t.args[0], retrieve(recipe), size + 1)
    return KnowledgeSet(fr, entries)


_SATURATION_CACHE: dict = {}


def knowledge(fr: Frame) -> KnowledgeSet:
    hit = _SATURATION_CACHE.get(fr)
    if hit is None:
        hit = saturate(fr)
        _SATURATION_CACHE[fr] = hit
    return hit


def deduce_with_size(fr: Frame, m: Term):
    """(recipe, size) with a minimal-size public recipe for m, or None."""
    if not is_ground(m):
        raise ValueError("deduction target must be ground")
    ks = knowledge(fr)
    target = normalize(m)
    restricted = fr.restricted
    entries = ks.entries
    memo: dict = {}

    def synth(t):
        if t in memo:
            return memo[t]
        best = entries.get(t)
        if t.is_name and t.label not in restricted:
            if best is None or best[1] > 1:
                best = (t, 1)
        if t.is_app and t.label != "priv":
            parts = [synth(a) for a in t.args]
            if all(p is not None for p in parts):
                size = 1 + sum(p[1] for p in parts)
                if best is None or size < best[1]:
                    best = (app(t.label, [p[0] for p in parts]), size)
        memo[t] = best
        return best

    return synth(target)


def deduce(fr: Frame, m: Term) -> Optional[Term]:
    """A public recipe T with T(frame) equal to m modulo the theory, else None."""
    got = deduce_with_size(fr, m)
    return got[0] if got else None


# ----------------------------------------------------------------------------
# Brute-force deducibility oracle

def brute_deducible(fr: Frame, m: Term, max_size: int) -> bool:
    """Does any public recipe of at most max_size symbols produce m?

    Enumerates recipes by size, deduplicated by their image in the frame.
    Images are restricted to subterms of the normalized frame range and of
    the target: a minimal recipe never builds other intermediate values
    (anything else is constructor junk that would have to be destructed
    again, which a smaller recipe avoids).
    """
    target = normalize(m)
    restricted = fr.restricted
    pool = set()
    for t in fr.range:
        pool |= subterms(normalize(t))
    pool |= subterms(target)

    best: dict = {}

    def offer(image, size):
        if size > max_size:
            return
        if image is not target and image not in pool:
            return
        old = best.get(image)
        if old is None or size < old:
            best[image] = size

    for h, t in fr.bindings:
        offer(normalize(t), 1)
    leaf_names = set()
    for t in pool:
        leaf_names |= {u.label for u in subterms(t) if u.is_name}
    for ident in sorted(leaf_names - set(restricted)):
        offer(name(ident), 1)

    from .terms import ARITY

    changed = True
    while changed:
        changed = False
        snapshot = sorted(best.items(), key=lambda kv: (kv[1], repr(kv[0])))
        before = dict(best)
        for sym, arity in ARITY.items():
            if sym == "priv":
                continue
            if arity == 1:
                for image, size in snapshot:
                    offer(normalize(app(sym, (image,))), size + 1)
            elif arity == 2:
                for im1, s1 in snapshot:
                    for im2, s2 in snapshot:
                        if s1 + s2 + 1 > max_size:
                            continue
                        offer(normalize(app(sym, (im1, im2))), s1 + s2 + 1)
            else:
                for im1, s1 in snapshot:
                    for im2, s2 in snapshot:
                        if s1 + s2 + 2 > max_size:
                            continue
                        for im3, s3 in snapshot:
                            sz = s1 + s2 + s3 + 1
                            if sz <= max_size:
                                offer(normalize(app(sym, (im1, im2, im3))), sz)
        changed = best != before
    return target in best


# ----------------------------------------------------------------------------
# Tests and instantiation

def passes_test(fr: Frame, u: Term, v: Term) -> bool:
    """Does the frame pass the public test (u, v)?

    Restricted names colliding with names of the test are renamed away first
    (the attacker's test cannot refer to restricted names).
    """
    if not (variables(u) | variables(v)) <= {var(h) for h in fr.domain}:
        raise ValueError("test variables must range over the frame domain")
    clash = sorted(set(fr.restricted) & (free_names(u) | free_names(v)))
    sigma = fr.subst()
    if clash:
        used = set(fr.restricted) | fr.free_names() | free_names(u) | free_names(v)
        mapping = {}
        for i, ident in enumerate(clash):
            fresh = fresh_name(f"#r{i}", used)
            mapping[ident] = fresh
            used.add(fresh)
        sigma = {x: rename_names(t, mapping) for x, t in sigma.items()}
    return equal_mod_theory(apply_subst(sigma, u), apply_subst(sigma, v))


def instantiate(fr: Frame, s: str, m: Term) -> Frame:
    """The frame with the restricted name s replaced by the public term m."""
    if s not in fr.restricted:
        raise ValueError(f"{s} is not restricted in the frame")
    from .terms import contains_symbol

    if contains_symbol(m, {"priv"}):
        raise NotPublicError("replacement term uses priv")
    clash = free_names(m) & set(fr.restricted)
    if clash:
        raise NameClashError(f"replacement mentions restricted names {sorted(clash)}")
    from .terms import subst_name

    return Frame(fr.restricted, tuple((h, subst_name(t, s, m)) for h, t in fr.bindings))


# ----------------------------------------------------------------------------
# Static equivalence

@dataclass(frozen=True)
class EquivalenceVerdict:
    result: str  # "equivalent" | "distinguished"
    witness: Optional[tuple] = None  # (Term, Term) public test

    @property
    def equivalent(self):
        return self.result == "equivalent"


def _candidate_tests(f1: Frame, f2: Frame, depth: int, seed_with_knowledge: bool):
    """Candidate recipes with their images in both frames.

    Returns a list of (recipe, image-in-f1, image-in-f2), deduplicated by the
    image pair.  A test's outcome in a frame depends only on the images of
    its two sides, so deduplication preserves the set of test behaviours.

    Enumeration is pruned: an application that is stuck in both frames and
    whose image is not a subterm of either frame's content is dropped.  Any
    minimal distinguishing test avoids such junk: equal constructor heads on
    both sides decompose into argument tests, and junk can only ever equal
    identically-built junk.  Unary applications are kept unconditionally
    (pub(a) probes are needed even when pub(a) occurs in neither frame).
    """
    s1, s2 = f1.subst(), f2.subst()
    both_restricted = set(f1.restricted) | set(f2.restricted)

    pool1, pool2 = set(), set()
    for t in f1.range:
        pool1 |= subterms(normalize(t))
    for t in f2.range:
        pool2 |= subterms(normalize(t))

    leaf_names = (f1.free_names() | f2.free_names()) - both_restricted
    leaf_names |= {"att0", "att1"}

    kept: dict = {}
    levels: list = []

    def image(recipe):
        return (
            normalize(apply_subst(s1, recipe)),
            normalize(apply_subst(s2, recipe)),
        )

    def offer(recipe, ims, bucket):
        if ims in kept:
            return
        kept[ims] = recipe
        bucket.append((recipe, ims))

    level0: list = []
    for h in f1.domain:
        x = var(h)
        offer(x, image(x), level0)
    for ident in sorted(leaf_names):
        n = name(ident)
        offer(n, (n, n), level0)
    if seed_with_knowledge:
        for ks in (knowledge(f1), knowledge(f2)):
            for recipe, _size in sorted(
                ks.entries.values(), key=lambda v: (v[1], render(v[0], False))
            ):
                if free_names(recipe) & both_restricted:
                    continue
                offer(recipe, image(recipe), level0)
    levels.append(level0)

    def index_by_image(side):
        out: dict = {}
        for ims, recipe in kept.items():
            out.setdefault(ims[side], []).append((recipe, ims))
        return out

    for _level in range(depth):
        new: list = []
        all_items = [(r, ims) for lvl in levels for (r, ims) in lvl]
        by_im = (index_by_image(0), index_by_image(1))

        def keep_if_useful(sym, parts):
            recipe = app(sym, [p[0] for p in parts])
            im1 = normalize(app(sym, [p[1][0] for p in parts]))
            im2 = normalize(app(sym, [p[1][1] for p in parts]))
            stuck1 = im1.is_app and im1.label == sym and im1.args == tuple(
                p[1][0] for p in parts
            )
            stuck2 = im2.is_app and im2.label == sym and im2.args == tuple(
                p[1][1] for p in parts
            )
            if (not stuck1) or (not stuck2) or im1 in pool1 or im2 in pool2:
                offer(recipe, (im1, im2), new)

        for sym in ("proj1", "proj2", "retrieve", "pub"):
            for item in all_items:
                keep_if_useful(sym, [item])

        # Decryption probes: arguments chosen so the application reduces on
        # at least one side, or so that the stuck image is frame content.
        for side in (0, 1):
            pool = pool1 if side == 0 else pool2
            for item in all_items:
                im = item[1][side]
                if im.is_app and im.label == "enc":
                    for keyitem in by_im[side].get(im.args[1], ()):
                        keep_if_useful("dec", [item, keyitem])
                if im.is_app and im.label == "enca":
                    k = im.args[1]
                    if k.is_app and k.label == "pub":
                        for keyitem in by_im[side].get(app("priv", k.args), ()):
                            keep_if_useful("deca", [item, keyitem])
                if im.is_app and im.label == "sign":
                    k = im.args[1]
                    if k.is_app and k.label == "priv":
                        for body in by_im[side].get(im.args[0], ()):
                            for pk in by_im[side].get(app("pub", k.args), ()):
                                keep_if_useful("check", [body, item, pk])
            # Probes whose stuck image reconstructs frame content.
            for u in sorted(pool, key=lambda t: render(t, False)):
                if not u.is_app:
                    continue
                arglists = [by_im[side].get(a, ()) for a in u.args]
                if any(not lst for lst in arglists):
                    continue
                if u.label in ("pair", "enc", "enca", "sign", "dec", "deca", "check"):
                    for parts in product(*arglists):
                        keep_if_useful(u.label, list(parts))
        levels.append(new)

    return [(recipe, ims[0], ims[1]) for ims, recipe in kept.items()]


def _find_witness(cands):
    """First test that holds in exactly one frame, scanning both sides."""
    for side, other in ((1, 2), (2, 1)):
        groups: dict = {}
        for recipe, im1, im2 in cands:
            key = im1 if side == 1 else im2
            groups.setdefault(key, []).append((recipe, im1 if other == 1 else im2))
        for key in sorted(groups, key=lambda t: render(t, False)):
            members = sorted(
                groups[key], key=lambda ri: (_recipe_size(ri[0]), render(ri[0], False))
            )
            rep_recipe, rep_other = members[0]
            for recipe, im_other in members[1:]:
                if im_other is not rep_other:
                    return (rep_recipe, recipe)
    return None


def static_equiv(f1: Frame, f2: Frame, recipe_depth: int = 2) -> EquivalenceVerdict:
    """Decision procedure for static equivalence.

    Saturates both frames, extends the knowledge recipes by recipe_depth
    layers of symbol applications (pruned to useful combinations), and
    checks that every candidate equality holding in one frame holds in the
    other.  The first asymmetric test found is returned as the witness.
    """
    if f1.domain != f2.domain:
        raise DomainMismatchError(
            f"domains differ: {f1.domain} vs {f2.domain}"
        )
    cands = _candidate_tests(f1, f2, max(1, recipe_depth), seed_with_knowledge=True)
    witness = _find_witness(cands)
    if witness is None:
        return EquivalenceVerdict("equivalent")
    return EquivalenceVerdict("distinguished", witness)


def brute_equiv(f1: Frame, f2: Frame, depth: int) -> EquivalenceVerdict:
    """Oracle: compare all public tests up to the given term depth.

    Test sides are enumerated by depth and deduplicated by their image pair,
    which preserves every test behaviour; redundant junk combinations are
    pruned as described in _candidate_tests.
    """
    if f1.domain != f2.domain:
        raise DomainMismatchError(
            f"domains differ: {f1.domain} vs {f2.domain}"
        )
    cands = _candidate_tests(f1, f2, depth, seed_with_knowledge=False)
    witness = _find_witness(cands)
    if witness is None:
        return EquivalenceVerdict("equivalent")
    return EquivalenceVerdict("distinguished", witness)


# ----------------------------------------------------------------------------
# Frame well-formedness

@dataclass(frozen=True)
class Violation:
    condition: int
    handle: str
    position: Position
    explanation: str

    def to_dict(self):
        return {
            "condition": self.condition,
            "handle": self.handle,
            "position": format_position(self.position),
            "explanation": self.explanation,
        }


@dataclass(frozen=True)
class FrameReport:
    checked: str  # "basic" | "extended"
    secret: str
    violations: tuple
    warnings: tuple = ()

    @property
    def verdict(self) -> str:
        return "pass" if not self.violations else "fail"

    @property
    def ok(self) -> bool:
        return not self.violations

    def failed_conditions(self):
        return sorted({v.condition for v in self.violations})

    def to_dict(self):
        return {
            "checked": self.checked,
            "secret": self.secret,
            "verdict": self.verdict,
            "violations": [v.to_dict() for v in self.violations],
            "warnings": list(self.warnings),
        }


class NotWellFormedError(ValueError):
    def __init__(self, report: FrameReport):
        super().__init__(
            "frame is not well-formed: conditions "
            + ", ".join(map(str, report.failed_conditions()))
        )
        self.report = report


def _probabilistic_violations(cipher: Term, fr: Frame):
    """Occurrences of the cipher's randomness elsewhere than as its own
    third argument, across all bindings jointly."""
    rand = cipher.args[2]
    out = []
    for h2, t2 in fr.bindings:
        stack = [(t2, EPSILON)]
        while stack:
            u, p = stack.pop()
            if u is rand:
                parent = p[:-1]
                same = (
                    p
                    and p[-1] == 3
                    and _subterm(t2, parent) is cipher
                )
                if not same:
                    out.append(
                        Violation(
                            1,
                            h2,
                            p,
                            "randomness "
                            f"{render(rand, False)} reused outside its encryption",
                        )
                    )
            for i, c in enumerate(u.args, start=1):
                stack.append((c, p + (i,)))
    return out


def _subterm(t, p):
    for i in p:
        t = t.args[i - 1]
    return t


def check_well_formed_frame(fr: Frame, s: str) -> FrameReport:
    """Conditions for the passive transfer result: agent probabilistic
    encryptions, the secret never inside keys or randomness, no destructors.
    """
    if s not in fr.restricted:
        raise ValueError(f"secret {s} must be restricted in the frame")
    agent_names = set(fr.restricted) - {s}
    violations: list = []
    warnings: list = []
    seen_prob: set = set()
    for h, t in fr.bindings:
        stack = [(t, EPSILON)]
        while stack:
            u, p = stack.pop()
            for i, c in enumerate(u.args, start=1):
                stack.append((c, p + (i,)))
            if not u.is_app:
                continue
            if u.label in GENERIC_ENC:
                rand = u.args[2]
                if not (rand.is_name and rand.label in agent_names):
                    violations.append(
                        Violation(
                            1,
                            h,
                            p,
                            f"randomness {render(rand, False)} is not a restricted name",
                        )
                    )
                if (u, rand) not in seen_prob:
                    seen_prob.add((u, rand))
                    violations.extend(_probabilistic_violations(u, fr))
                key = u.args[1]
                for culprit, role in ((key, "key"), (rand, "randomness")):
                    if s in free_names(culprit):
                        violations.append(
                            Violation(2, h, p, f"secret occurs in {role} position")
                        )
                        if role == "key":
                            warnings.append(
                                "secret used as an encryption key: the check is "
                                "conservative, a ciphertext with no verifiable "
                                "part may still hide the secret"
                            )
            elif u.label == "sign":
                if s in free_names(u.args[1]):
                    violations.append(
                        Violation(2, h, p, "secret occurs in signature key")
                    )
            elif u.label in ("pub", "priv"):
                if s in free_names(u.args[0]):
                    violations.append(
                        Violation(2, h, p, f"secret occurs under {u.label}")
                    )
            if u.label in DESTRUCTORS:
                violations.append(
                    Violation(3, h, p, f"destructor {u.label} occurs in the frame")
                )
    return FrameReport("basic", s, tuple(violations), tuple(dict.fromkeys(warnings)))


def _agent_encryptions_above(t: Term, q_s: Position, agent_names):
    """Positions q < q_s of agent encryptions with q.1 a prefix of q_s."""
    out = []
    for cut in range(len(q_s)):
        q = q_s[:cut]
        u = _subterm(t, q)
        if (
            u.is_app
            and u.label in GENERIC_ENC
            and u.args[2].is_name
            and u.args[2].label in agent_names
            and is_prefix(q + (1,), q_s)
        ):
            out.append(q)
    return out


def check_extended_well_formed(fr: Frame, s: str) -> FrameReport:
    """Normal-form variant tolerating destructors: every secret occurrence
    must sit in plaintext position under an agent encryption, with only
    pairing and signing in between."""
    if s not in fr.restricted:
        raise ValueError(f"secret {s} must be restricted in the frame")
    violations: list = []
    agent_all = set(fr.restricted)
    agent_not_s = agent_all - {s}
    seen_prob: set = set()
    secret = name(s)
    for h, t in fr.bindings:
        if not is_normal(t):
            violations.append(Violation(1, h, EPSILON, "binding is not in normal form"))
        stack = [(t, EPSILON)]
        while stack:
            u, p = stack.pop()
            for i, c in enumerate(u.args, start=1):
                stack.append((c, p + (i,)))
            if (
                u.is_app
                and u.label in GENERIC_ENC
                and u.args[2].is_name
                and u.args[2].label in agent_all
            ):
                if (u, u.args[2]) not in seen_prob:
                    seen_prob.add((u, u.args[2]))
                    for v in _probabilistic_violations(u, fr):
                        violations.append(
                            Violation(2, v.handle, v.position, v.explanation)
                        )
            if u is secret:
                encs = _agent_encryptions_above(t, p, agent_not_s)
                if not encs:
                    violations.append(
                        Violation(
                            3,
                            h,
                            p,
                            "no agent encryption protects this secret occurrence",
                        )
                    )
                    continue
                lowest = max(encs, key=len)
                for cut in range(len(lowest) + 1, len(p)):
                    mid = _subterm(t, p[:cut])
                    if not (mid.is_app and mid.label in ("pair", "sign")):
                        violations.append(
                            Violation(
                                4,
                                h,
                                p[:cut],
                                f"{mid.label if mid.is_app else 'leaf'} occurs "
                                "between the protecting encryption and the secret",
                            )
                        )
    return FrameReport("extended", s, tuple(violations))


# ----------------------------------------------------------------------------
# Passive secrecy transfer

@dataclass(frozen=True)
class SampleEvidence:
    left: Term
    right: Term
    verdict: EquivalenceVerdict

    def to_dict(self):
        out = {
            "left": render(self.left, False),
            "right": render(self.right, False),
            "result": self.verdict.result,
        }
        if self.verdict.witness:
            out["witness"] = [render(t, False) for t in self.verdict.witness]
        return out


@dataclass(frozen=True)
class PassiveReport:
    secret: str
    verdict: str  # "strong-secrecy-holds" | "not-strongly-secret"
    well_formed: FrameReport
    distinguishing_test: Optional[tuple] = None  # (Term, Term)
    recipe: Optional[Term] = None
    samples: tuple = ()
    warnings: tuple = ()

    @property
    def ok(self):
        return self.verdict == "strong-secrecy-holds"

    def to_dict(self):
        out = {
            "secret": self.secret,
            "verdict": self.verdict,
            "well_formed": self.well_formed.to_dict(),
            "samples": [s.to_dict() for s in self.samples],
            "warnings": list(self.warnings),
        }
        if self.distinguishing_test:
            out["distinguishing_test"] = [
                render(t, False) for t in self.distinguishing_test
            ]
        if self.recipe is not None:
            out["recipe"] = render(self.recipe, False)
        return out


def check_passive_transfer(
    fr: Frame,
    s: str,
    samples: Sequence = (),
    depth: int = 2,
) -> PassiveReport:
    """Decide strong secrecy of s in a well-formed frame.

    Non-deducibility of the secret settles strong secrecy for well-formed
    frames; each supplied sample pair (M, M') is additionally checked by
    instantiating the secret both ways and deciding static equivalence.
    Raises NotWellFormedError when the well-formedness conditions fail.
    """
    report = check_well_formed_frame(fr, s)
    if not report.ok:
        raise NotWellFormedError(report)
    recipe = deduce(fr, name(s))
    if recipe is not None:
        used = set(fr.restricted) | fr.free_names()
        n1 = fresh_name("n1", used)
        evidence = []
        for m, mp in samples:
            left = instantiate(fr, s, m)
            right = instantiate(fr, s, mp)
            evidence.append(
                SampleEvidence(m, mp, static_equiv(left, right, depth))
            )
        return PassiveReport(
            secret=s,
            verdict="not-strongly-secret",
            well_formed=report,
            distinguishing_test=(recipe, name(n1)),
            recipe=recipe,
            samples=tuple(evidence),
            warnings=report.warnings,
        )
    evidence = []
    for m, mp in samples:
        for t in (m, mp):
            if not is_public(t, fr.restricted):
                raise NotPublicError(f"sample {render(t, False)} is not public")
        left = instantiate(fr, s, m)
        right = instantiate(fr, s, mp)
        evidence.append(SampleEvidence(m, mp, static_equiv(left, right, depth)))
    verdict = "strong-secrecy-holds"
    if any(not e.verdict.equivalent for e in evidence):
        # Should be impossible for a well-formed non-deducing frame; report
        # honestly rather than hiding the contradiction.
        verdict = "not-strongly-secret"
    return PassiveReport(
        secret=s,
        verdict=verdict,
        well_formed=report,
        samples=tuple(evidence),
        warnings=report.warnings,
    )
