import random

import pytest

from pisec.terms import (
    EPSILON,
    InvalidPositionError,
    ParseError,
    apply_subst,
    dec,
    enc,
    free_names,
    head,
    is_public,
    is_subterm,
    name,
    nonvar_positions,
    pair,
    parse_term,
    positions,
    position_diff,
    priv,
    render,
    replace_at,
    sign,
    subst_name,
    subterm_at,
    var,
    var_positions,
)

a, b, c = name("a"), name("b"), name("c")
k, k2, r, r2, s = name("k"), name("k2"), name("r"), name("r2"), name("s")
z, z1, z2 = var("z"), var("z1"), var("z2")


def random_term(rng, depth, leaves):
    if depth == 0 or rng.random() < 0.3:
        return rng.choice(leaves)
    sym = rng.choice(["pair", "enc", "dec", "sign", "proj1", "proj2", "pub"])
    from pisec.terms import ARITY, app

    return app(sym, [random_term(rng, depth - 1, leaves) for _ in range(ARITY[sym])])


def test_interning_makes_equality_structural():
    t1 = enc(pair(a, b), k, r)
    t2 = enc(pair(a, b), k, r)
    assert t1 is t2
    assert hash(t1) == hash(t2)


def test_subterm_at_direct_child():
    assert subterm_at(pair(a, b), (1,)) is a


def test_subterm_at_nested_path():
    # Path 1.1.2 inside the cipher addresses the second component of the
    # inner pair.
    t = enc(pair(pair(a, b), c), k2, r2)
    assert subterm_at(t, (1, 1, 2)) is b


def test_subterm_at_root():
    t = enc(a, k, r)
    assert subterm_at(t, EPSILON) is t


def test_subterm_at_invalid_position():
    with pytest.raises(InvalidPositionError):
        subterm_at(pair(a, b), (3,))


def test_replace_at():
    assert replace_at(pair(a, b), (2,), c) is pair(a, c)
    assert replace_at(pair(a, b), EPSILON, c) is c
    t = enc(s, k, r)
    got = replace_at(t, (1,), z)
    assert got is enc(z, k, r)
    # Structural check: all other positions unchanged.
    for p in positions(got):
        if p != (1,):
            assert subterm_at(got, p) is subterm_at(enc(z, k, r), p)


def test_replace_roundtrip_property():
    rng = random.Random(7)
    leaves = [a, b, c, k, z]
    for _ in range(200):
        t = random_term(rng, 4, leaves)
        for p in positions(t):
            assert replace_at(t, p, subterm_at(t, p)) is t


def test_positions_of_leaf():
    assert positions(a) == [EPSILON]


def test_var_positions():
    assert var_positions(enc(z, k, r)) == [(1,)]
    got = nonvar_positions(pair(z1, pair(a, z2)))
    assert got == [EPSILON, (2,), (2, 1)]


def test_position_diff():
    assert position_diff((1, 1, 2), (1, 1)) == (2,)
    assert position_diff((1, 1, 2), (2,)) is None
    rng = random.Random(3)
    for _ in range(100):
        t = random_term(rng, 4, [a, b, z])
        ps = positions(t)
        p = rng.choice(ps)
        q = rng.choice(ps)
        d = position_diff(p, q)
        if d is not None:
            assert q + d == p


def test_apply_subst():
    sigma = {z: k}
    assert apply_subst(sigma, dec(z, k2)) is dec(k, k2)
    assert apply_subst({}, dec(z, k2)) is dec(z, k2)


def test_apply_subst_is_homomorphic():
    rng = random.Random(11)
    sigma = {z: pair(a, b), z1: k}
    for _ in range(100):
        args = [random_term(rng, 3, [a, z, z1]) for _ in range(2)]
        lhs = apply_subst(sigma, pair(*args))
        rhs = pair(*(apply_subst(sigma, x) for x in args))
        assert lhs is rhs


def test_name_instantiation_is_separate_from_var_substitution():
    t = enc(s, k, r)
    assert subst_name(t, "s", pair(a, b)) is enc(pair(a, b), k, r)
    # Variables are untouched by name instantiation.
    assert subst_name(dec(z, s), "s", a) is dec(z, a)
    # A name not occurring leaves the term unchanged.
    assert subst_name(t, "nope", a) is t


def test_free_names_and_head_and_subterm_order():
    assert free_names(enc(s, k, r)) == {"s", "k", "r"}
    assert head(pair(a, b)) == "pair"
    assert is_subterm(k, sign(pair(k, name("n")), priv(a)))
    assert not is_subterm(k2, sign(pair(k, name("n")), priv(a)))


def test_is_public():
    assert not is_public(pair(a, name("n1")), {"n1"})
    assert not is_public(priv(a), set())
    assert is_public(enc(a, b, c), {"s"})


def test_parse_and_render_roundtrip():
    cases = [
        "enc(s, k, r)",
        "<a, <b, c>>",
        "pi1(dec(z, k_as))",
        "check(n, sign(n, priv(a)), pub(a))",
        "retrieve(sign(m, k))",
    ]
    for text in cases:
        t = parse_term(text)
        assert parse_term(render(t, unicode=False)) is t
        assert parse_term(render(t, unicode=True)) is t


def test_parser_accepts_both_ascii_and_sugar():
    assert parse_term("pair(a,b)") is parse_term("<a,b>") is parse_term("⟨a,b⟩")
    assert parse_term("proj1(x1)") is parse_term("pi1(x1)") is parse_term("π₁(x1)")


def test_parser_variable_conventions():
    t = parse_term("dec(z, k)")
    assert subterm_at(t, (1,)).is_var
    assert subterm_at(t, (2,)).is_name
    t2 = parse_term("dec(x, k)", vars_in_scope={"x"})
    assert subterm_at(t2, (1,)).is_var


def test_parser_rejects_reserved_and_malformed():
    with pytest.raises(ParseError):
        parse_term("z0")
    with pytest.raises(ParseError):
        parse_term("@x")
    with pytest.raises(ParseError):
        parse_term("enc(a, b)")
    with pytest.raises(ParseError):
        parse_term("frob(a)")
    with pytest.raises(ParseError):
        parse_term("pair(a, b) junk")
