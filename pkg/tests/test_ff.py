"""Field arithmetic: construction, axioms, Frobenius, embeddings, traces."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from excpoly import FieldElem, arith, embed, field_from_json, make_field, rel_trace

# every field here stays at or below 2^12 elements, so the per-element
# sweeps are exhaustive
AXIOM_FIELDS = [(2, 1), (2, 2), (2, 4), (2, 8), (2, 12), (3, 1), (3, 2), (3, 3), (3, 7)]


def test_make_field_basics():
    g2 = make_field(2, 1)
    assert g2.order == 2
    assert sorted(g2.elements()) == [0, 1]
    assert make_field(2, 3).order == 8
    assert make_field(3, 2).order == 9
    # cached: the same (p, e) hands back the identical context
    assert make_field(2, 3) is make_field(2, 3)


def test_make_field_rejects_bad_parameters():
    with pytest.raises(ValueError):
        make_field(5, 2)
    with pytest.raises(ValueError):
        make_field(4, 1)
    with pytest.raises(ValueError):
        make_field(2, 0)
    with pytest.raises(ValueError):
        make_field(2, 33)


def test_field_json_round_trip():
    for p, e in [(2, 4), (3, 3)]:
        ctx = make_field(p, e)
        obj = ctx.to_json()
        assert obj["p"] == p and obj["e"] == e
        assert len(obj["modulus"]) == e + 1 and obj["modulus"][-1] == 1
        assert field_from_json(obj) is ctx


def test_generator_order_in_gf16():
    ctx = make_field(2, 4)
    g = ctx.gen
    cur = 1
    seen = set()
    for k in range(1, 15):
        cur = ctx.mul(cur, g)
        assert cur != 1, f"generator closed at order {k}"
        seen.add(cur)
    assert ctx.mul(cur, g) == 1
    assert len(seen) == 14  # all nonzero non-identity powers distinct


@pytest.mark.parametrize("p,e", AXIOM_FIELDS)
def test_field_axioms(p, e):
    ctx = make_field(p, e)
    # inverses: exhaustive over every nonzero element
    for a in range(1, ctx.order):
        assert ctx.mul(a, ctx.inv(a)) == 1
        assert ctx.add(a, ctx.neg(a)) == 0
    # associativity / distributivity / commutativity on seeded triples
    rng = random.Random(20_000 + 31 * p + e)
    for _ in range(200):
        a = rng.randrange(ctx.order)
        b = rng.randrange(ctx.order)
        c = rng.randrange(ctx.order)
        assert ctx.add(a, b) == ctx.add(b, a)
        assert ctx.mul(a, b) == ctx.mul(b, a)
        assert ctx.add(ctx.add(a, b), c) == ctx.add(a, ctx.add(b, c))
        assert ctx.mul(ctx.mul(a, b), c) == ctx.mul(a, ctx.mul(b, c))
        assert ctx.mul(a, ctx.add(b, c)) == ctx.add(ctx.mul(a, b), ctx.mul(a, c))


def test_characteristic():
    g8 = make_field(2, 3)
    for a in g8.elements():
        assert g8.add(a, a) == 0
    g27 = make_field(3, 3)
    for a in g27.elements():
        assert g27.add(a, g27.add(a, a)) == 0


@pytest.mark.parametrize("p,e", AXIOM_FIELDS)
def test_frobenius_order_is_exactly_e(p, e):
    ctx = make_field(p, e)
    for a in ctx.elements():
        cur = a
        for _ in range(e):
            cur = ctx.frob(cur)
        assert cur == a, f"frobenius^{e} moved {a}"
    # no proper power of the map is the identity
    for ell in {2, 3, 5, 7, 11}:
        if e % ell:
            continue
        d = e // ell
        moved = any(ctx.pow_(a, p**d) != a for a in ctx.elements())
        assert moved, f"frobenius^{d} already fixes GF({p}^{e})"


def test_pow_and_frobenius_agree_in_gf8():
    ctx = make_field(2, 3)
    for a in ctx.elements():
        # x^8 = x, and three squarings are one Frobenius cycle
        assert ctx.pow_(a, 8) == a
        assert ctx.frob(ctx.frob(ctx.frob(a))) == a


def test_pow_edge_cases():
    ctx = make_field(2, 4)
    assert ctx.pow_(0, 0) == 1
    assert ctx.pow_(0, 5) == 0
    g = ctx.gen
    assert ctx.mul(ctx.pow_(g, -1), g) == 1
    with pytest.raises(ZeroDivisionError):
        ctx.pow_(0, -1)
    with pytest.raises(ZeroDivisionError):
        ctx.inv(0)


def test_sqrt_is_inverse_of_squaring():
    ctx = make_field(2, 4)
    for a in ctx.elements():
        assert ctx.sqrt_(ctx.mul(a, a)) == a


@given(st.integers(0, 8), st.integers(0, 8), st.integers(-20, 40))
@settings(max_examples=120, deadline=None)
def test_arith_dispatch_matches_operators(ai, bi, k):
    ctx = make_field(3, 2)
    a = FieldElem(ctx, ai)
    b = FieldElem(ctx, bi)
    assert arith("add", a, b) == a + b
    assert arith("sub", a, b) == a - b
    assert arith("mul", a, b) == a * b
    assert arith("neg", a) == -a
    assert arith("frob", a) == a**3
    if ai != 0:
        assert arith("inv", a) * a == ctx.one
        assert arith("pow", a, k) == a**k
    if bi != 0:
        assert arith("div", a, b) * b == a


def test_arith_rejects_unknown_kind_and_mixed_fields():
    a = make_field(2, 2).one
    with pytest.raises(ValueError):
        arith("xor", a, a)
    b = make_field(2, 3).one
    with pytest.raises(AssertionError):
        arith("add", a, b)


@pytest.mark.parametrize("p,e", [(2, 16), (3, 4)])
def test_index_codec_is_a_bijection(p, e):
    ctx = make_field(p, e)
    seen_all = True
    for i in range(ctx.order):
        cs = ctx.coeffs(i)
        assert len(cs) == e and all(0 <= c < p for c in cs)
        if ctx.from_coeffs(cs).i != i:
            seen_all = False
            break
    assert seen_all, "codec failed to round-trip every index"


def test_element_wrapper_basics():
    ctx = make_field(2, 2)
    assert ctx(3).index == 3
    assert ctx.zero == FieldElem(ctx, 0) and not ctx.zero
    assert ctx.one.i == 1 and ctx.x.i == ctx.gen
    with pytest.raises(ValueError):
        ctx(4)
    with pytest.raises(ValueError):
        ctx(-1)


# ---------------------------------------------------------------------------
# embeddings


def test_prime_field_embeds_with_identity_on_one():
    emb = embed(make_field(2, 1), make_field(2, 3))
    assert emb.apply(0) == 0
    assert emb.apply(1) == 1


def test_embedding_gf4_into_gf16():
    sub = make_field(2, 2)
    sup = make_field(2, 4)
    emb = embed(sub, sup)
    # the image of the source generator keeps its multiplicative order
    img = emb.apply(sub.gen)
    assert sup.pow_(img, 3) == 1 and img != 1
    # and is a root of the source modulus inside the target
    acc = 0
    for c in reversed(sub.modulus):
        acc = sup.add(sup.mul(acc, img), c)
    assert acc == 0
    # ring homomorphism, exhaustively on the 16 source pairs
    for a in sub.elements():
        for b in sub.elements():
            assert emb.apply(sub.add(a, b)) == sup.add(emb.apply(a), emb.apply(b))
            assert emb.apply(sub.mul(a, b)) == sup.mul(emb.apply(a), emb.apply(b))
    # section inverts on the image and rejects outsiders
    hits = 0
    for b in sup.elements():
        j = emb.section_index(b)
        if j is not None:
            assert emb.apply(j) == b
            hits += 1
    assert hits == sub.order


def test_embedding_rejects_non_divisible_degrees():
    with pytest.raises(AssertionError):
        embed(make_field(2, 2), make_field(2, 3))
    with pytest.raises(AssertionError):
        embed(make_field(2, 2), make_field(3, 2))


# ---------------------------------------------------------------------------
# relative trace and additive solvability


def test_trace_of_gf4_generator_down_to_gf2():
    g4 = make_field(2, 2)
    omega = FieldElem(g4, g4.gen)
    t = rel_trace(2, omega)
    assert t.ctx.order == 2 and t.i == 1


def test_trace_identity_on_the_ground_field():
    g4 = make_field(2, 2)
    for a in g4.elements():
        assert rel_trace(4, FieldElem(g4, a)) == FieldElem(g4, a)


def test_trace_lands_in_subfield_and_is_linear():
    q = 4
    big = make_field(2, 4)  # GF(q^2)
    sub = make_field(2, 2)
    up = embed(sub, big)
    for x in big.elements():
        t = rel_trace(q, FieldElem(big, x))
        assert t.ctx is sub
        # additivity plus F_q-scaling on a seeded sample
    rng = random.Random(4242)
    for _ in range(100):
        x = FieldElem(big, rng.randrange(16))
        y = FieldElem(big, rng.randrange(16))
        a = rng.randrange(4)
        ax = FieldElem(big, big.mul(up.apply(a), x.i))
        lhs = rel_trace(q, ax + y)
        rhs_i = sub.add(sub.mul(a, rel_trace(q, x).i), rel_trace(q, y).i)
        assert lhs.i == rhs_i


def test_trace_kills_artin_schreier_images():
    q = 4
    big = make_field(2, 4)
    for v in big.elements():
        c = big.add(big.pow_(v, q), v)
        assert rel_trace(q, FieldElem(big, c)).i == 0


def test_trace_rejects_non_subfield_order():
    x = make_field(2, 4).one
    with pytest.raises(AssertionError):
        rel_trace(3, x)
    with pytest.raises(AssertionError):
        rel_trace(8, x)  # GF(16) does not extend GF(8)


@pytest.mark.parametrize("q,m", [(4, 1), (4, 2), (8, 1)])
def test_additive_equation_solvable_iff_trace_vanishes(q, m):
    """v^q + v = c has solutions exactly on the trace kernel, q of them."""
    e = q.bit_length() - 1
    ctx = make_field(2, e * m)
    for c in ctx.elements():
        sols = sum(1 for v in ctx.elements() if ctx.add(ctx.pow_(v, q), v) == c)
        if rel_trace(q, FieldElem(ctx, c)).i == 0:
            assert sols == q, f"trace-zero c = {c} has {sols} solutions"
        else:
            assert sols == 0, f"trace-nonzero c = {c} is solvable"


def test_absolute_trace_values():
    g4 = make_field(2, 2)
    assert g4.abs_trace(g4.gen) == 1
    assert g4.abs_trace(0) == 0
    assert g4.abs_trace(1) == 0  # 1 + 1 in GF(4)
    g9 = make_field(3, 2)
    for a in g9.elements():
        assert 0 <= g9.abs_trace(a) < 3
