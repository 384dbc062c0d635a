"""Small Galois modules for exhaustive suites.

Every J of order <= 8 (up to isomorphism), every quotient of order <= 6, every
action up to conjugation in Aut(J) and every cyclotomic character mod exp(J).
"""

from functools import lru_cache
from itertools import product

from artifact.galois_core import (
    FiniteGroup,
    GaloisQuotient,
    GammaGroup,
    automorphisms,
    compose,
    homomorphisms,
)


def base_groups(max_order=8):
    Z = FiniteGroup.cyclic
    out = [
        Z(2), Z(3), FiniteGroup.abelian((4,)), FiniteGroup.abelian((2, 2)), Z(5), Z(6),
        FiniteGroup.symmetric(3), Z(7), Z(8), FiniteGroup.abelian((2, 4)), FiniteGroup.abelian((2, 2, 2)),
        FiniteGroup.dihedral(4), FiniteGroup.quaternion(),
    ]
    return [g for g in out if g.order <= max_order]


def quotient_groups(max_order=6):
    out = [FiniteGroup.cyclic(n) for n in range(1, max_order + 1)]
    out += [FiniteGroup.abelian((2, 2)), FiniteGroup.symmetric(3)]
    return [g for g in out if g.order <= max_order]


@lru_cache(maxsize=None)
def _aut_group(J: FiniteGroup):
    auts = automorphisms(J)
    return FiniteGroup.from_perms(auts, J.order, f"Aut({J.name})")


def actions_up_to_conjugacy(J: FiniteGroup, G: FiniteGroup) -> list:
    A = _aut_group(J)
    perms = A.perms
    seen = set()
    out = []
    for hom in homomorphisms(G, A):
        if hom in seen:
            continue
        orbit = set()
        for k in range(A.order):
            kinv = A.inv(k)
            orbit.add(tuple(A.mul(A.mul(k, h), kinv) for h in hom))
        seen |= orbit
        out.append(tuple(perms[h] for h in hom))
    return out


def cyclotomic_characters(G: FiniteGroup, e: int) -> list:
    U = FiniteGroup.units_mod(e)
    return [tuple(U.labels[x] for x in hom) for hom in homomorphisms(G, U)]


def catalog(max_j=8, max_gamma=6, abelian_only=False, limit_chars=None):
    """Yield (label, GammaGroup)."""
    for J in base_groups(max_j):
        if abelian_only and not J.is_abelian:
            continue
        e = J.exponent
        for G in quotient_groups(max_gamma):
            chars = cyclotomic_characters(G, e)
            if limit_chars is not None:
                chars = chars[:limit_chars]
            for ai, action in enumerate(actions_up_to_conjugacy(J, G)):
                for ci, cyc in enumerate(chars):
                    quot = GaloisQuotient(G, e, cyc, f"{G.name}")
                    yield f"{J.name}|{G.name}|act{ai}|chi{ci}", GammaGroup(J, quot, action)


def all_cases(**kw):
    return list(catalog(**kw))
