import cmath
from fractions import Fraction

import pytest

from artifact.arith import primes_up_to
from artifact.galois_core import (
    CapabilityError,
    Cocycle,
    FiniteGroup,
    GaloisQuotient,
    GammaGroup,
    classify_cocycles,
    invariant_subgroups,
    subgroup_gamma,
    twist_group,
)
from artifact.local_tame import (
    LocalCohomology,
    LocalHeight,
    LocalPlace,
    OverrideTable,
    RootOfUnity,
    local_classes,
    local_fourier,
    residue_fibers,
    residue_subgroup_check,
    residue_twist_check,
    restrict_cocycle,
    tame_model,
    tate_pairing_value,
)
from artifact.star import build_star, c_constant, c_discriminant

from catalog import all_cases


def cyc_family(m):
    return GammaGroup.trivial_action(FiniteGroup.cyclic(m), GaloisQuotient.cyclotomic_units(m))


def place_for(g, q):
    labels = [c % g.quotient.modulus for c in g.quotient.cyclotomic]
    return LocalPlace(q, labels.index(q % g.quotient.modulus))


def places(g, qmax=100, per_frob=1):
    """One tame prime for every Galois element whose cyclotomic value allows it."""
    e = g.quotient.modulus
    out = []
    for gamma in range(g.quotient.group.order):
        found = 0
        for q in primes_up_to(qmax):
            if g.base.order % q and (q - g.quotient.chi(gamma)) % e == 0:
                out.append(LocalPlace(q, gamma))
                found += 1
                if found == per_frob:
                    break
    return out


def brute_fourier(g, place, c, chi_frob, s, residues=None):
    """Oracle: weighted sum over every class of the finite tame model."""
    lc = LocalCohomology(place, g)
    star = build_star(g)
    e = g.quotient.modulus
    if residues is None:
        residues = [r for _, r in local_classes(g, place)]
    total = 0j
    for residue in residues:
        phi = star.point_of(residue)
        z = cmath.exp(-2j * cmath.pi * chi_frob[star.element(phi)] / e)
        total += place.q ** (-float(c(phi)) * s) * z
    return total * float(lc.weight)


def test_fiber_examples():
    lc = LocalCohomology(place_for(cyc_family(2), 5), cyc_family(2))
    assert residue_fibers(lc) == {0: 1, 1: 1}
    assert len(local_classes(cyc_family(2), lc.place)) == 4
    g3 = cyc_family(3)
    assert residue_fibers(LocalCohomology(place_for(g3, 5), g3)) == {0: 1}
    assert residue_fibers(LocalCohomology(place_for(g3, 7), g3)) == {0: 1, 1: 1, 2: 1}
    assert len(local_classes(g3, place_for(g3, 7))) == 9


def test_place_validation():
    g = cyc_family(3)
    with pytest.raises(ValueError):
        LocalCohomology(LocalPlace(3, 0), g)
    with pytest.raises(ValueError):
        LocalCohomology(LocalPlace(5, 0), g)  # 5 is not 1 mod 3
    s3 = GammaGroup.trivial_action(FiniteGroup.symmetric(3), GaloisQuotient.trivial(6))
    with pytest.raises(CapabilityError):
        residue_fibers(LocalCohomology(LocalPlace(7, 0), s3))


def test_pairing_examples():
    g2 = cyc_family(2)
    lc = LocalCohomology(place_for(g2, 5), g2)
    assert tate_pairing_value(lc, (0, 1), 0) == RootOfUnity(0, 2)
    assert tate_pairing_value(lc, (0, 1), 1).to_complex() == -1
    g3 = cyc_family(3)
    lc3 = LocalCohomology(place_for(g3, 7), g3)
    v = tate_pairing_value(lc3, (0, 1, 2), 1)
    assert v == RootOfUnity(1, 3)
    assert abs(v.to_complex() - cmath.exp(2j * cmath.pi / 3)) < 1e-15
    with pytest.raises(ValueError):
        tate_pairing_value(lc3, (0, 1, 1), 1)


def test_root_of_unity_arithmetic():
    assert RootOfUnity(1, 2) * RootOfUnity(1, 2) == RootOfUnity(0, 1)
    assert RootOfUnity(2, 4) == RootOfUnity(1, 2)
    assert (RootOfUnity(1, 3) * RootOfUnity(1, 2)).reduced() == (5, 6)
    assert RootOfUnity(1, 3).conj() == RootOfUnity(2, 3)


def test_fourier_examples():
    g2 = cyc_family(2)
    lc = LocalCohomology(place_for(g2, 5), g2)
    h = LocalHeight(c_constant(lc.star))
    for s in (0.5, 1.0, 2.0, 1 + 1j):
        assert abs(local_fourier(lc, h, (0, 0), s) - (1 + 5 ** (-s))) < 1e-14
        assert abs(local_fourier(lc, h, (0, 1), s) - (1 - 5 ** (-s))) < 1e-14
    g3 = cyc_family(3)
    lc3 = LocalCohomology(place_for(g3, 5), g3)
    h3 = LocalHeight(c_discriminant(lc3.star))
    assert local_fourier(lc3, h3, (0, 1, 2), 1.0) == 1


def test_override_table():
    t = OverrideTable(((Fraction(1, 2), 1), (Fraction(1, 2), 1)))
    assert t.total_mass == 1
    assert t.fourier(1.0, trivial_character=False) == 0
    assert abs(t.fourier(2.0) - 1) < 1e-15
    g2 = cyc_family(2)
    lc = LocalCohomology(place_for(g2, 5), g2)
    h = LocalHeight(c_constant(lc.star), {5: OverrideTable(((2, 1),))})
    assert local_fourier(lc, h, (0, 0), 1.0) == 2
    with pytest.raises(CapabilityError):
        OverrideTable(((1, 1), (1, 2))).fourier(1.0, trivial_character=False)


ABELIAN = [(l, g) for l, g in all_cases(max_j=8, max_gamma=4) if g.base.is_abelian]


@pytest.mark.parametrize("label,g", ABELIAN[::2], ids=[l for l, _ in ABELIAN[::2]])
def test_local_fourier_against_class_enumeration(label, g):
    star = build_star(g)
    c = c_discriminant(star)
    h = LocalHeight(c)
    e = g.quotient.modulus
    from artifact.galois_core import homomorphisms

    chars = homomorphisms(g.base, FiniteGroup.cyclic(e))
    for place in places(g, 60)[:3]:
        lc = LocalCohomology(place, g)
        # the unramified subset has measure exactly 1
        residues = [r for _, r in local_classes(g, place)]
        unram = sum(1 for r in residues if r == 0)
        assert unram * lc.weight == 1
        assert sum(residue_fibers(lc).values()) == len(lc.residue_points)
        assert local_fourier(lc, h, chars[0], 0) == len(lc.residue_points)
        row = g.action[place.frob]
        for chi in chars:
            # unramified characters: chi_frob fixed by Frobenius in the dual
            ok = all((chi[row[j]] - place.q * chi[j]) % e == 0 for j in range(g.base.order))
            if not ok:
                continue
            for s in (0.9, 1.5):
                assert abs(local_fourier(lc, h, chi, s) - brute_fourier(g, place, c, chi, s, residues)) < 1e-12
        for chi1 in chars[:4]:
            for chi2 in chars[:4]:
                chi12 = tuple((a + b) % e for a, b in zip(chi1, chi2))
                for phi in lc.residue_points:
                    v = tate_pairing_value(lc, chi12, phi)
                    assert v == tate_pairing_value(lc, chi1, phi) * tate_pairing_value(lc, chi2, phi)
        for p1 in lc.residue_points:
            for p2 in lc.residue_points:
                p12 = star.add(p1, p2)
                assert tate_pairing_value(lc, chars[-1], p12) == tate_pairing_value(
                    lc, chars[-1], p1
                ) * tate_pairing_value(lc, chars[-1], p2)


SMALL = [(l, g) for l, g in all_cases(max_j=6, max_gamma=4)]


@pytest.mark.parametrize("label,g", SMALL, ids=[l for l, _ in SMALL])
def test_residue_twist_and_subgroup(label, g):
    for place in places(g, 60)[:2]:
        model = tame_model(g, place)
        reps, _ = classify_cocycles(g)
        for s_vals in reps:
            sigma = Cocycle(g, s_vals)
            twisted = twist_group(model.gamma, restrict_cocycle(model, sigma))
            local_reps, _ = classify_cocycles(twisted)
            for a in local_reps:
                assert residue_twist_check(g, sigma, Cocycle(twisted, a), place)
        for h in invariant_subgroups(g):
            sub, _ = subgroup_gamma(g, h)
            msub = tame_model(sub, place, model.f)
            sub_reps, _ = classify_cocycles(msub.gamma)
            for a in sub_reps:
                assert residue_subgroup_check(g, h, place, Cocycle(msub.gamma, a))


def test_trivial_sigma_always_passes():
    g = GammaGroup.trivial_action(FiniteGroup.symmetric(3), GaloisQuotient.trivial(6))
    place = LocalPlace(7, 0)
    model = tame_model(g, place)
    reps, _ = classify_cocycles(model.gamma)
    for a in reps:
        assert residue_twist_check(g, Cocycle.trivial(g), Cocycle(model.gamma, a), place)
