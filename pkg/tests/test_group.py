import random

import pytest

from lcmume.group import (
    OpCounter,
    field_add,
    field_mul,
    group_by_name,
    map_to_scalar,
    point_add,
    point_mul,
    point_neg,
    point_sub,
    production_group,
    scalar_random,
    toy_group,
)

TOY_P = 607
TOY_Q = 101
TOY_G = 122


def brute_multiples(g):
    """Oracle: the full table of multiples of the toy generator, by repeated addition."""
    table = [g.identity]
    for _ in range(TOY_Q):
        table.append(g.add(table[-1], g.generator))
    return table


# ---------------------------------------------------------------------------
# toy backend, exhaustive


def test_toy_subgroup_structure():
    g = toy_group()
    assert g.q == TOY_Q
    assert g.generator == TOY_G
    assert pow(TOY_G, TOY_Q, TOY_P) == 1
    els = g.elements()
    assert len(set(els)) == TOY_Q
    assert all(pow(e, TOY_Q, TOY_P) == 1 for e in els)


def test_toy_point_mul_matches_repeated_addition():
    g = toy_group()
    table = brute_multiples(g)
    assert table[TOY_Q] == g.identity
    for k in range(TOY_Q):
        assert g.mul(k, g.generator) == table[k]


def test_toy_add_is_group_law():
    g = toy_group()
    table = brute_multiples(g)
    assert g.add(table[2], table[3]) == table[5]
    # exhaustive: kP + jP == (k+j)P
    for k in range(0, TOY_Q, 7):
        for j in range(TOY_Q):
            assert g.add(table[k], table[j]) == table[(k + j) % TOY_Q]


def test_toy_scalar_distributes_exhaustively():
    g = toy_group()
    p = g.generator
    for k1 in range(0, TOY_Q, 5):
        for k2 in range(TOY_Q):
            lhs = g.mul((k1 + k2) % TOY_Q, p)
            rhs = g.add(g.mul(k1, p), g.mul(k2, p))
            assert lhs == rhs


def test_identity_and_inverse_laws():
    for g in (toy_group(), production_group()):
        q = g.mul(17, g.generator)
        assert g.add(q, g.identity) == q
        assert g.add(q, g.neg(q)) == g.identity
        assert g.mul(0, g.generator) == g.identity
        assert g.mul(1, g.generator) == g.generator


# ---------------------------------------------------------------------------
# production backend


def test_production_generator_order():
    g = production_group()
    assert g.mul(g.q, g.generator) == g.identity
    assert g.mul(g.q - 1, g.generator) == g.neg(g.generator)


def test_backends_agree_on_algebra():
    rng = random.Random(12)
    for g in (toy_group(), production_group()):
        p = g.generator
        for _ in range(20):
            a = rng.randrange(g.q)
            b = rng.randrange(g.q)
            pa, pb = g.mul(a, p), g.mul(b, p)
            # associativity / commutativity / distributivity
            assert g.add(pa, pb) == g.add(pb, pa)
            assert g.add(g.add(pa, pb), p) == g.add(pa, g.add(pb, p))
            assert g.mul((a + b) % g.q, p) == g.add(pa, pb)
            assert g.mul((a * b) % g.q, p) == g.mul(a, g.mul(b, p))


def test_production_mul_matches_naive_double_and_add():
    g = production_group()
    acc = g.identity
    for k in range(1, 40):
        acc = g.add(acc, g.generator)
        assert g.mul(k, g.generator) == acc


# ---------------------------------------------------------------------------
# serialization


@pytest.mark.parametrize("mk", [toy_group, production_group])
def test_element_encoding_round_trip(mk):
    g = mk()
    rng = random.Random(5)
    for _ in range(30):
        el = g.mul(rng.randrange(g.q), g.generator)
        enc = g.encode(el)
        assert g.decode(enc) == el
        assert g.encode(g.decode(enc)) == enc
    assert g.decode(g.encode(g.identity)) == g.identity


def test_toy_decode_rejects_out_of_subgroup():
    g = toy_group()
    # 3 generates all of Z_607^*, order 606; not in the order-101 subgroup
    with pytest.raises(ValueError):
        g.decode((3).to_bytes(2, "big"))
    with pytest.raises(ValueError):
        g.decode((0).to_bytes(2, "big"))


def test_production_decode_rejects_invalid():
    g = production_group()
    with pytest.raises(ValueError):
        g.decode(b"\x02" + b"\xff" * 32)  # x >= p
    with pytest.raises(ValueError):
        g.decode(b"\x05" + b"\x11" * 32)  # bad prefix
    # x with no square root on the curve
    x = 5
    while True:
        try:
            g.decode(b"\x02" + x.to_bytes(32, "big"))
            x += 1
        except ValueError:
            break


def test_group_params_round_trip():
    for g in (toy_group(), production_group()):
        d = g.to_dict()
        g2 = type(g).from_dict(d)
        assert g2.to_dict() == d
    bad = toy_group().to_dict()
    bad["q"] = "67"  # 103, not the subgroup order
    with pytest.raises(ValueError):
        toy_group().from_dict(bad)


def test_scalar_hex_widths():
    t, p = toy_group(), production_group()
    assert t.scalar_to_hex(5) == "05"
    assert len(p.scalar_to_hex(5)) == 64
    assert p.scalar_from_hex(p.scalar_to_hex(12345)) == 12345
    with pytest.raises(ValueError):
        t.scalar_from_hex("ff")  # 255 >= q


# ---------------------------------------------------------------------------
# counted operations


def test_scalar_random_deterministic_and_counted():
    g = toy_group()
    ctr = OpCounter()
    v1 = scalar_random(g, random.Random(42), ctr=ctr)
    v2 = scalar_random(g, random.Random(42))
    assert v1 == v2
    assert 1 <= v1 <= TOY_Q - 1
    assert ctr.z == 1


def test_scalar_random_covers_all_residues():
    g = toy_group()
    rng = random.Random(7)
    seen = {scalar_random(g, rng) for _ in range(10_000)}
    assert seen == set(range(1, TOY_Q))
    seen0 = {scalar_random(g, rng, require_nonzero=False) for _ in range(10_000)}
    assert seen0 == set(range(TOY_Q))


def test_counted_ops_tick_each_category():
    g = toy_group()
    ctr = OpCounter()
    p = g.generator
    q2 = point_mul(g, 2, p, ctr)
    q5 = point_add(g, q2, point_mul(g, 3, p, ctr), ctr)
    assert q5 == g.mul(5, p)
    q_neg = point_sub(g, q5, q2, ctr)
    assert q_neg == g.mul(3, p)
    field_mul(g, 10, 20, ctr)
    field_add(g, 10, 20, ctr)
    assert (ctr.sm, ctr.ss, ctr.field_mul, ctr.field_add) == (2, 2, 1, 1)
    assert point_neg(g, q2) == g.neg(q2)


def test_counter_snapshot_and_diff():
    ctr = OpCounter(z=1, sm=2)
    before = ctr.snapshot()
    ctr.sm += 3
    ctr.hash += 1
    d = ctr.diff(before)
    assert (d.z, d.sm, d.hash) == (0, 3, 1)
    assert all(v >= 0 for v in d.as_dict().values())
    with pytest.raises(ValueError):
        before.diff(ctr)


def test_counter_merge_by_summation():
    a = OpCounter(z=1, sm=2, poly_mul=3)
    b = OpCounter(z=4, hash=5)
    a.add(b)
    assert (a.z, a.sm, a.hash, a.poly_mul) == (5, 2, 5, 3)


# ---------------------------------------------------------------------------
# map_to_scalar


def test_map_to_scalar_deterministic_and_reduced():
    for g in (toy_group(), production_group()):
        el = g.mul(9, g.generator)
        v = map_to_scalar(g, el)
        assert v == map_to_scalar(g, el)
        assert 0 <= v < g.q
    g = toy_group()
    assert 0 <= map_to_scalar(g, g.identity) < g.q


def test_map_to_scalar_toy_collision_census():
    # 101 elements hashed into Z_101: collisions are expected; the census
    # below freezes the observed image size so any drift is caught.
    g = toy_group()
    outs = [map_to_scalar(g, el) for el in g.elements()]
    assert all(0 <= v < TOY_Q for v in outs)
    assert len(set(outs)) == 68  # frozen census of distinct outputs


def test_map_to_scalar_differs_from_root_oracle():
    # separate domain tags: the root oracle and the root-encoding map must
    # not collide on the same input element
    from lcmume.oracles import HashSuite, hash_to_root

    g = toy_group()
    suite = HashSuite()
    el = g.mul(7, g.generator)
    vals = {map_to_scalar(g, el), hash_to_root(g, suite, el)}
    assert len(vals) == 2
