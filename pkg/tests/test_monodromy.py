"""Coset cycle-type distributions of the pair action and empirical fiber
shape statistics."""

import random
from fractions import Fraction

import pytest

from excpoly import (
    CycleDist,
    FieldElem,
    UniPoly,
    branch_points,
    build_action,
    chebotarev_sample,
    coset_cycle_types,
    dickson,
    dist_compare,
    embed,
    f_closed,
    make_field,
)
from excpoly import monodromy
from excpoly.poly import factor

G4 = make_field(2, 2)
G8 = make_field(2, 3)
G16 = make_field(2, 4)


# ---------------------------------------------------------------------------
# CycleDist


def test_cycle_dist_normalizes_and_validates():
    d = CycleDist(6, {(5, 1): Fraction(1, 2), (3, 3): Fraction(1, 2)})
    assert (1, 5) in d.entries and (5, 1) not in d.entries
    with pytest.raises(AssertionError):
        CycleDist(6, {(1, 5): Fraction(1, 3)})  # weights must sum to 1
    with pytest.raises(AssertionError):
        CycleDist(6, {(7,): Fraction(1)})  # part exceeds degree
    with pytest.raises(AssertionError):
        CycleDist(6, {(0, 6): Fraction(1)})


def test_cycle_dist_unramified_restriction():
    d = CycleDist(
        6,
        {
            (1, 5): Fraction(1, 2),
            (3, 3): Fraction(1, 4),
            (1, 2): Fraction(1, 4),  # ramified: parts sum below degree
        },
    )
    assert d.full_shapes() == frozenset({(1, 5), (3, 3)})
    u = d.unramified()
    assert u.entries == {(1, 5): Fraction(2, 3), (3, 3): Fraction(1, 3)}
    ram_only = CycleDist(6, {(1, 2): Fraction(1)})
    with pytest.raises(ValueError):
        ram_only.unramified()


def test_cycle_dist_average_fixed_points():
    d = CycleDist(4, {(1, 1, 2): Fraction(1, 2), (4,): Fraction(1, 2)})
    assert d.average_fixed_points() == 1


def test_cycle_dist_json_round_trip():
    d = coset_cycle_types(4, 1)
    obj = d.to_json()
    types = [tuple(rec["type"]) for rec in obj["entries"]]
    assert types == sorted(types)
    assert all(isinstance(rec["weight"], str) for rec in obj["entries"])
    assert CycleDist.from_json(obj) == d


def test_dist_compare_basics():
    a = CycleDist(3, {(3,): Fraction(1)})
    b = CycleDist(3, {(3,): Fraction(1, 2), (1, 1, 1): Fraction(1, 2)})
    assert dist_compare(a, a) == 0
    assert dist_compare(a, b) == Fraction(1, 2) == dist_compare(b, a)
    with pytest.raises(ValueError):
        dist_compare(a, CycleDist(4, {(4,): Fraction(1)}))


# ---------------------------------------------------------------------------
# the pair action


def test_build_action_structure():
    act4 = build_action(4)
    assert act4.e == 2 and len(act4.domain) == 6 and len(act4.elements()) == 60
    act8 = build_action(8)
    assert act8.e == 3 and len(act8.domain) == 28 and len(act8.elements()) == 504
    assert build_action(4) is act4  # cached


def test_build_action_rejects_other_orders():
    with pytest.raises(ValueError):
        build_action(5)
    with pytest.raises(ValueError):
        build_action(64)


def test_identity_and_frobenius_elements():
    act = build_action(4)
    assert act.cycle_type((1, 0, 0, 1), 0) == (1,) * 6
    # The q-power Frobenius fixes every conjugate pair, so the generator
    # x -> x^2 squares to the identity on the domain.
    perm = act.point_perm((1, 0, 0, 1), 1)
    assert perm != list(range(6))
    assert all(perm[perm[i]] == i for i in range(6))


def test_coset_cycle_types_q4():
    d0 = coset_cycle_types(4, 0)
    assert d0.entries == {
        (1,) * 6: Fraction(1, 60),
        (1, 1, 2, 2): Fraction(1, 4),
        (1, 5): Fraction(2, 5),
        (3, 3): Fraction(1, 3),
    }
    d1 = coset_cycle_types(4, 1)
    assert d1.entries == {
        (1, 1, 4): Fraction(1, 2),
        (2, 2, 2): Fraction(1, 6),
        (6,): Fraction(1, 3),
    }


def test_coset_cycle_types_q8():
    d0 = coset_cycle_types(8, 0)
    assert d0.entries == {
        (1,) * 28: Fraction(1, 504),
        (1, 1, 1, 1) + (2,) * 12: Fraction(1, 8),
        (1,) + (3,) * 9: Fraction(1, 9),
        (1, 9, 9, 9): Fraction(1, 3),
        (7, 7, 7, 7): Fraction(3, 7),
    }
    d1 = coset_cycle_types(8, 1)
    assert d1.entries == {
        (1,) + (3,) * 9: Fraction(1, 6),
        (1, 3, 6, 6, 6, 6): Fraction(1, 2),
        (1, 9, 9, 9): Fraction(1, 3),
    }
    assert coset_cycle_types(8, 2) == d1


def test_every_coset_averages_one_fixed_point():
    for q, jmax in ((4, 2), (8, 3)):
        for j in range(jmax):
            assert coset_cycle_types(q, j).average_fixed_points() == 1


def test_coset_cycle_types_j_range():
    with pytest.raises(ValueError):
        coset_cycle_types(4, 2)
    with pytest.raises(ValueError):
        coset_cycle_types(8, -1)


# ---------------------------------------------------------------------------
# branch points


def test_branch_points_of_the_main_family():
    f = f_closed(8, FieldElem(G4, 2))
    for base in (G4, G16):
        assert [b.i for b in branch_points(f, base)] == [0]


def test_branch_points_derivative_vanishes():
    with pytest.raises(ValueError):
        branch_points(UniPoly.monomial(G4, 2), G4)


def brute_branch_points(f, base):
    out = []
    fp = f.derivative()
    for t in range(base.order):
        h = f - UniPoly.const(base, t)
        if h.gcd(fp).degree > 0:
            out.append(t)
    return out


def test_branch_points_match_brute_force():
    rng = random.Random(77)
    checked = 0
    for _ in range(12):
        f = UniPoly(G8, [rng.randrange(8) for _ in range(6)])
        if f.degree < 2 or f.derivative().is_zero():
            continue
        got = [b.i for b in branch_points(f, G8)]
        assert got == brute_branch_points(f, G8)
        checked += 1
    assert checked >= 6
    d3 = dickson(3, FieldElem(G16, 7))
    assert [b.i for b in branch_points(d3, G16)] == brute_branch_points(d3, G16)


# ---------------------------------------------------------------------------
# empirical shape distributions


def test_chebotarev_exhaustive_small_base():
    f = f_closed(8, FieldElem(G4, 2))
    dist = chebotarev_sample(f, G16)
    assert dist.degree == 28
    assert sum(dist.entries.values()) == 1
    # one ramified fiber (t = 0) out of 16
    ram = {s for s in dist.entries if sum(s) < 28}
    assert len(ram) == 1
    allowed = coset_cycle_types(8, 1).support()
    assert dist.full_shapes() <= allowed


def test_chebotarev_vector_engine_agrees_with_direct_factoring():
    """GF(4^4) has 256 fibers, which turns the batched engine on; spot
    check a handful of fibers against plain factorization."""
    f = f_closed(8, FieldElem(G4, 3))
    base = make_field(2, 8)
    assert base.order >= monodromy.VECTOR_MIN_FIBERS
    dist = chebotarev_sample(f, base)
    fb = f.map_coeffs(embed(G4, base))
    rng = random.Random(5)
    counts = {}
    picks = [0] + [rng.randrange(256) for _ in range(6)]
    for t in picks:
        h = fb - UniPoly.const(base, t)
        shape = tuple(sorted(p.degree for p, _m in factor(h).factors))
        counts[shape] = counts.get(shape, 0) + 1
    for shape in counts:
        assert shape in dist.entries
    assert dist.full_shapes() <= coset_cycle_types(8, 2).support()


def test_chebotarev_sampled_mode_is_deterministic():
    f = f_closed(8, FieldElem(G4, 2))
    base = make_field(2, 8)
    a = chebotarev_sample(f, base, mode="sampled", n=50, seed=11)
    b = chebotarev_sample(f, base, mode="sampled", n=50, seed=11)
    assert a == b
    c = chebotarev_sample(f, base, mode="sampled", n=50, seed=12)
    assert a.degree == c.degree  # same family, possibly different counts


def test_chebotarev_sampled_mode_errors():
    f = f_closed(8, FieldElem(G4, 2))
    with pytest.raises(ValueError):
        chebotarev_sample(f, G16, mode="sampled")  # n and seed missing
    with pytest.raises(ValueError):
        chebotarev_sample(f, G16, mode="sampled", n=17, seed=0)
    with pytest.raises(ValueError):
        chebotarev_sample(f, G16, mode="middle-out")


def test_chebotarev_exhaustive_cap(monkeypatch):
    assert monodromy.EXHAUSTIVE_LIMIT == 1 << 20
    f = f_closed(8, FieldElem(G4, 2))
    monkeypatch.setattr(monodromy, "EXHAUSTIVE_LIMIT", 8)
    with pytest.raises(ValueError):
        chebotarev_sample(f, G16)


def test_chebotarev_threads_agree():
    f = f_closed(8, FieldElem(G4, 2))
    base = make_field(2, 10)  # 1024 fibers: enough to engage the pool path
    one = chebotarev_sample(f, base, threads=1)
    two = chebotarev_sample(f, base, threads=2)
    assert one == two


def test_chebotarev_rejects_constant_and_bad_base():
    with pytest.raises(ValueError):
        chebotarev_sample(UniPoly.one(G4), G4)
    with pytest.raises(ValueError):
        chebotarev_sample(f_closed(8, FieldElem(G4, 2)), G8)
