import random

import numpy as np
import pytest

from nilp2.constructions import extraspecial_p5, heisenberg
from nilp2.errors import (
    BadIndex,
    EntryOutOfRange,
    InconsistentMap,
    NotOddPrime,
    OrderExceedsCap,
    PresentationMismatch,
    SpanDeficit,
)
from nilp2.fplinalg import Subspace
from nilp2.group_core import (
    GroupPresentation,
    center,
    commutator,
    cyclic,
    elementary_abelian,
    enumerate_subgroups,
    hom_from_images,
    identity_map,
    inverse,
    is_monomorphism,
    multiply,
    power,
    quotient_by_central,
    validate,
)

BATTERY = [
    cyclic(3),
    elementary_abelian(3, 2),
    heisenberg(3),
    extraspecial_p5(3),
    heisenberg(5),
]


# -- validation ----------------------------------------------------------------


def test_validate_heisenberg():
    g = validate(3, 2, 1, {(2, 1): (1,)})
    assert (g.p, g.n, g.m) == (3, 2, 1)
    assert g.order == 27


def test_validate_span_deficit():
    with pytest.raises(SpanDeficit) as exc:
        validate(3, 2, 2, {(2, 1): (1, 0)})
    assert exc.value.actual_rank == 1
    assert exc.value.expected_dim == 2


def test_validate_rejects_even_prime():
    with pytest.raises(NotOddPrime):
        validate(2, 2, 1, {(2, 1): (1,)})


def test_validate_bad_index():
    with pytest.raises(BadIndex):
        validate(3, 2, 1, {(1, 2): (1,)})
    with pytest.raises(BadIndex):
        validate(3, 2, 1, {(3, 1): (1,)})


def test_validate_entry_out_of_range():
    with pytest.raises(EntryOutOfRange):
        validate(3, 2, 1, {(2, 1): (3,)})
    with pytest.raises(EntryOutOfRange):
        validate(3, 2, 1, {(2, 1): (-1,)})


def test_presentation_equality_ignores_label():
    a = validate(3, 2, 1, {(2, 1): (1,)})
    assert a == heisenberg(3)
    assert hash(a) == hash(heisenberg(3))


# -- element arithmetic ---------------------------------------------------------


def test_identity_is_neutral():
    rng = random.Random(1)
    for g in BATTERY:
        e = g.identity()
        for _ in range(20):
            a = g.random_element(rng)
            assert multiply(e, a) == a
            assert multiply(a, e) == a


def test_heisenberg_collection():
    g = heisenberg(3)
    x1, x2 = g.generator(1), g.generator(2)
    assert multiply(x1, x2) == g.element((1, 1), (0,))
    assert multiply(x2, x1) == g.element((1, 1), (1,))
    # moving x2 past x1^2 emits the commutator twice
    assert multiply(x2, power(x1, 2)) == g.element((2, 1), (2,))


def test_heisenberg_inverse():
    g = heisenberg(3)
    a = g.element((1, 1), (0,))
    assert inverse(a) == g.element((2, 2), (1,))
    assert multiply(a, inverse(a)) == g.identity()


def test_commutator_defining_relation():
    g = heisenberg(3)
    assert commutator(g.generator(2), g.generator(1)) == g.element((0, 0), (1,))
    # agrees with the word a b a^-1 b^-1
    a, b = g.generator(2), g.generator(1)
    word = multiply(multiply(a, b), multiply(inverse(a), inverse(b)))
    assert word == commutator(a, b)


def test_exponent_p():
    rng = random.Random(2)
    for g in BATTERY:
        for _ in range(50):
            a = g.random_element(rng)
            assert power(a, g.p).is_identity


def test_power_matches_repeated_multiplication():
    rng = random.Random(3)
    g = extraspecial_p5(3)
    for _ in range(30):
        a = g.random_element(rng)
        acc = g.identity()
        for k in range(7):
            assert power(a, k) == acc
            acc = multiply(acc, a)
        assert power(a, -1) == inverse(a)


def test_associativity_random():
    rng = random.Random(4)
    for g in BATTERY:
        for _ in range(200):
            a, b, c = (g.random_element(rng) for _ in range(3))
            assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))


def test_presentation_mismatch():
    with pytest.raises(PresentationMismatch):
        multiply(heisenberg(3).generator(1), cyclic(3).generator(1))


# -- center and quotients -------------------------------------------------------


def test_center_heisenberg():
    info = center(heisenberg(3))
    assert info.center_equals_derived
    assert info.radical.dim == 0
    assert info.center_order_exp == 1


def test_center_abelian():
    g = elementary_abelian(3, 2)
    info = center(g)
    assert not info.center_equals_derived
    assert info.radical == Subspace.full(3, 2)
    assert info.center_order_exp == 2


def test_center_extraspecial():
    info = center(extraspecial_p5(3))
    assert info.center_equals_derived
    assert info.center_order_exp == 1


def test_center_partner_property():
    # trivial radical forces every generator to pair nontrivially with some other
    for g in (heisenberg(3), extraspecial_p5(3), heisenberg(5)):
        assert center(g).center_equals_derived
        kap = g.kappa_table()
        for i in range(g.n):
            assert any(np.any(kap[i, j]) for j in range(g.n))


def test_quotient_by_zero_is_identity():
    g = heisenberg(3)
    q, proj = quotient_by_central(g, Subspace.zero(3, 1))
    assert q == g
    assert proj.consistent


def test_quotient_by_full_derived_abelianizes():
    g = heisenberg(3)
    q, _ = quotient_by_central(g, Subspace.full(3, 1))
    assert (q.n, q.m) == (2, 0)
    e = extraspecial_p5(3)
    q2, _ = quotient_by_central(e, Subspace.full(3, 1))
    assert (q2.n, q2.m) == (4, 0)


def test_quotient_projection_consistent_and_surjective():
    rng = random.Random(5)
    for g in (heisenberg(3), extraspecial_p5(3)):
        for _ in range(5):
            vecs = [[rng.randrange(3) for _ in range(g.m)] for _ in range(rng.randint(0, g.m))]
            sub = Subspace(3, g.m, vecs)
            q, proj = quotient_by_central(g, sub)
            assert proj.consistent
            from nilp2.fplinalg import rref

            _, piv_v = rref(proj.abelianized_matrix, 3)
            _, piv_l = rref(proj.commutator_matrix, 3)
            assert len(piv_v) == q.n
            assert len(piv_l) == q.m


# -- homomorphisms --------------------------------------------------------------


def test_identity_map_consistent():
    f = identity_map(heisenberg(3))
    assert f.consistent
    assert is_monomorphism(f).status == "mono"


def test_hom_factoring_through_abelianization():
    g = heisenberg(3)
    f = hom_from_images(g, g, [g.generator(1), g.generator(1)])
    assert f.consistent
    assert np.all(f.commutator_matrix == 0)
    mono = is_monomorphism(f)
    assert mono.status == "not_mono"
    assert mono.witness is not None
    assert f.apply(mono.witness).is_identity
    assert not mono.witness.is_identity


def test_hom_inconsistent_system():
    e = extraspecial_p5(3)
    h = heisenberg(3)
    images = [h.generator(1), h.generator(2), h.identity(), h.identity()]
    f = hom_from_images(e, h, images)
    assert not f.consistent
    with pytest.raises(InconsistentMap):
        is_monomorphism(f)


def test_hom_apply_respects_multiplication():
    rng = random.Random(6)
    g = heisenberg(3)
    e = extraspecial_p5(3)
    f = hom_from_images(g, e, [e.generator(1), e.generator(2)])
    assert f.consistent
    for _ in range(50):
        a, b = g.random_element(rng), g.random_element(rng)
        assert f.apply(multiply(a, b)) == multiply(f.apply(a), f.apply(b))
    assert is_monomorphism(f).status == "mono"


def test_injective_hom_without_injective_abelianized_part():
    # x2 maps into the derived subgroup: the abelianized matrix is singular
    # but the map embeds C_3^2 anyway; the brute-force scan must see that.
    g = elementary_abelian(3, 2)
    h = heisenberg(3)
    f = hom_from_images(g, h, [h.generator(1), h.element((0, 0), (1,))])
    assert f.consistent
    assert is_monomorphism(f).status == "mono"


# -- subgroup enumeration --------------------------------------------------------


def test_enumerate_cyclic():
    assert len(enumerate_subgroups(cyclic(3))) == 2


def test_enumerate_elementary_abelian():
    subs = enumerate_subgroups(elementary_abelian(3, 2))
    assert len(subs) == 6
    assert sorted(s.order for s in subs) == [1, 3, 3, 3, 3, 9]


def test_enumerate_heisenberg():
    subs = enumerate_subgroups(heisenberg(3))
    assert len(subs) == 19
    by_order = {}
    for s in subs:
        by_order[s.order] = by_order.get(s.order, 0) + 1
    assert by_order == {1: 1, 3: 13, 9: 4, 27: 1}


def test_enumerate_subgroups_are_closed():
    for g in (elementary_abelian(3, 2), heisenberg(3)):
        for sub in enumerate_subgroups(g):
            elems = set(sub.elements())
            for a in elems:
                assert inverse(a) in elems
                for b in elems:
                    assert multiply(a, b) in elems


def test_enumerate_cap():
    with pytest.raises(OrderExceedsCap):
        enumerate_subgroups(extraspecial_p5(3), cap=81)


def test_order_by_exhaustive_closure():
    from nilp2.selfcheck import _closure_size

    for g in BATTERY:
        assert _closure_size(g) == g.order
