from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from artifact.galois_core import (
    Cocycle,
    FiniteGroup,
    GaloisQuotient,
    GammaGroup,
    ResourceError,
    automorphisms,
    classify_cocycles,
    cocycle_tuples,
    h1_classes,
    homomorphisms,
    invariant_subgroups,
    is_cocycle,
    parse_cycles,
    parse_group_text,
    subgroup_gamma,
    twist_bijection,
    twist_group,
)

from catalog import all_cases

S3 = FiniteGroup.symmetric(3)


def quot(n, e, cyc=None):
    G = FiniteGroup.cyclic(n)
    return GaloisQuotient(G, e, cyc or (1,) * n)


def brute_h1(g: GammaGroup):
    """Oracle: every map Gamma -> J, cocycle law checked on all pairs, classes by orbit closure."""
    J, G = g.base, g.quotient.group
    cocycles = []
    for vals in product(range(J.order), repeat=G.order):
        if all(vals[G.mul(x, y)] == J.mul(vals[x], g.act(x, vals[y])) for x in range(G.order) for y in range(G.order)):
            cocycles.append(vals)
    classes = set()
    for f in cocycles:
        orbit = frozenset(
            tuple(J.mul(J.mul(J.inv(k), f[x]), g.act(x, k)) for x in range(G.order)) for k in range(J.order)
        )
        classes.add(orbit)
    return cocycles, classes


def test_group_axioms_of_constructors():
    for g in [S3, FiniteGroup.dihedral(4), FiniteGroup.quaternion(), FiniteGroup.abelian((2, 4)), FiniteGroup.units_mod(15)]:
        g.validate()
    assert FiniteGroup.units_mod(9).labels == (1, 2, 4, 5, 7, 8)
    assert FiniteGroup.quaternion().order == 8 and not FiniteGroup.quaternion().is_abelian
    assert S3.exponent == 6


def test_identity_first_and_sorted_perms():
    assert S3.perms[0] == (0, 1, 2)
    assert list(S3.perms) == sorted(S3.perms)


def test_hom_and_aut_counts():
    assert len(homomorphisms(S3, S3)) == 10
    assert len(automorphisms(S3)) == 6
    assert len(automorphisms(FiniteGroup.abelian((2, 2)))) == 6
    assert len(automorphisms(FiniteGroup.cyclic(8))) == 4


def test_h1_examples():
    g = GammaGroup.trivial_action(FiniteGroup.cyclic(2), quot(2, 2))
    assert len(h1_classes(g)) == 2
    inv = tuple((-j) % 3 for j in range(3))
    g = GammaGroup.from_generator_actions(FiniteGroup.cyclic(3), quot(2, 3, (1, 2)), {1: inv})
    assert len(h1_classes(g)) == 1
    assert len(cocycle_tuples(g)) == 3
    g = GammaGroup.trivial_action(S3, quot(2, 6))
    assert len(h1_classes(g)) == 2


def test_twist_examples():
    g = GammaGroup.trivial_action(S3, quot(2, 6))
    assert twist_group(g, Cocycle.trivial(g)).action == g.action
    t = S3.perms.index((1, 0, 2))
    s = Cocycle(g, (0, t))
    tw = twist_group(g, s)
    assert tw.action[1] == tuple(S3.conj(t, j) for j in range(6))
    ab = GammaGroup.trivial_action(FiniteGroup.cyclic(4), quot(2, 4))
    for f in cocycle_tuples(ab):
        assert twist_group(ab, Cocycle(ab, f)).action == ab.action


def test_twist_bijection_examples():
    g = GammaGroup.trivial_action(S3, quot(2, 6))
    for f in cocycle_tuples(g):
        s = Cocycle(g, f)
        tw = twist_group(g, s)
        assert twist_bijection(s, Cocycle.trivial(tw)) == s
        for b in cocycle_tuples(tw):
            out = twist_bijection(s, Cocycle(tw, b))
            assert is_cocycle(g, out.values)
    triv = Cocycle.trivial(g)
    for b in cocycle_tuples(g):
        assert twist_bijection(triv, Cocycle(g, b)).values == b


def test_invariant_subgroup_examples():
    g = GammaGroup.trivial_action(FiniteGroup.abelian((4,)), quot(1, 4))
    assert len(invariant_subgroups(g)) == 3
    c3 = S3.perms.index((1, 2, 0))
    g = GammaGroup.conjugation(S3, quot(3, 6), {1: c3})
    subs = invariant_subgroups(g)
    assert sorted(len(h) for h in subs) == [1, 3, 6]
    V = FiniteGroup.abelian((2, 2))
    swap = (0, 2, 1, 3)
    g = GammaGroup.from_generator_actions(V, quot(2, 2), {1: swap})
    assert sorted(sorted(h) for h in invariant_subgroups(g)) == [[0], [0, 1, 2, 3], [0, 3]]


def test_validation_errors():
    with pytest.raises(ValueError):
        GaloisQuotient(FiniteGroup.cyclic(2), 3, (2, 1))
    with pytest.raises(ValueError):
        GammaGroup(FiniteGroup.cyclic(3), quot(2, 3), ((0, 1, 2), (0, 1, 1)))
    g = GammaGroup.trivial_action(FiniteGroup.cyclic(2), quot(2, 2))
    with pytest.raises(ValueError):
        Cocycle(g, (1, 0))
    with pytest.raises(ResourceError):
        cocycle_tuples(GammaGroup.trivial_action(FiniteGroup.cyclic(2), quot(2, 2)), budget=3)


def test_parse_group_text():
    text = """
    group S3 order 6
    perm 3
    (1 2)
    (1 2 3)
    galois order 2 cyclotomic 1 5
    modulus 6
    conjugate 1 1
    """
    g = parse_group_text(text)
    assert g.base.order == 6 and g.quotient.modulus == 6
    assert g.action[1] == tuple(S3.conj(1, j) for j in range(6))
    t = parse_group_text("group Z4 order 4\ntable\n0 1 2 3\n1 2 3 0\n2 3 0 1\n3 0 1 2\n")
    assert t.quotient.group.order == 1
    with pytest.raises(ValueError):
        parse_group_text("group Z4 order 5\ntable\n0 1 2 3\n1 2 3 0\n2 3 0 1\n3 0 1 2\n")
    assert parse_cycles("(1 3)", 3) == (2, 1, 0)


SMALL = [(l, g) for l, g in all_cases(max_j=6, max_gamma=4) if g.base.order ** g.quotient.group.order <= 5000]


@pytest.mark.parametrize("label,g", SMALL, ids=[l for l, _ in SMALL])
def test_h1_against_full_enumeration(label, g):
    cocycles, classes = brute_h1(g)
    assert sorted(cocycle_tuples(g)) == sorted(cocycles)
    # the generator-only law check agrees with the all-pairs one on every map
    maps = product(range(g.base.order), repeat=g.quotient.group.order)
    assert [v for v in maps if is_cocycle(g, v)] == cocycles
    assert len(h1_classes(g)) == len(classes)


CASES = all_cases()


@pytest.mark.parametrize("label,g", CASES[::3], ids=[l for l, _ in CASES[::3]])
def test_twisting_properties(label, g):
    reps, index = classify_cocycles(g)
    J = g.base
    # fibres of Z^1 -> H^1 have size dividing |J|
    sizes = {}
    for f, cls in index.items():
        sizes[cls] = sizes.get(cls, 0) + 1
    assert all(J.order % n == 0 for n in sizes.values())
    for f in cocycle_tuples(g):
        assert is_cocycle(g, f)
    for s_vals in reps:
        s = Cocycle(g, s_vals)
        tw = twist_group(g, s)
        tw_reps, _ = classify_cocycles(tw)
        assert len(tw_reps) == len(reps)
        # the bijection b -> b*s sends classes of the twist onto classes of g
        images = {index[twist_bijection(s, Cocycle(tw, b)).values] for b in tw_reps}
        assert len(images) == len(reps)
        # twisting the twist by b is twisting the original by b*s
        for b_vals in tw_reps[:2]:
            b = Cocycle(tw, b_vals)
            composite = twist_bijection(s, b)
            assert twist_group(tw, b).action == twist_group(g, composite).action


@given(st.sampled_from(CASES))
@settings(max_examples=60, deadline=None)
def test_subgroup_restriction_is_equivariant(case):
    _, g = case
    for h in invariant_subgroups(g):
        sub, emb = subgroup_gamma(g, h)
        for gamma in range(g.quotient.group.order):
            for r in range(sub.base.order):
                assert emb[sub.act(gamma, r)] == g.act(gamma, emb[r])
