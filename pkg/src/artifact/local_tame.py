"""Tame places: residue fibers, local heights, pairing values and local Fourier transforms.

At a tame place unramified for J only the Frobenius action, its cyclotomic value q
and tame inertia (a copy of mu_e) matter.  For brute-force checks the tame local
Galois group is modelled by the finite group <tau> x| <sigma> with
sigma tau sigma^-1 = tau^q, tau of order e and sigma of large enough order.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd

from .galois_core import (
    CapabilityError,
    Cocycle,
    FiniteGroup,
    GaloisQuotient,
    GammaGroup,
    classify_cocycles,
    subgroup_gamma,
    twist_group,
    _unchecked,
)
from .star import CountingFunction, StarSet, build_star


@dataclass(frozen=True)
class RootOfUnity:
    """exp(2 pi i k / e), kept exact as k mod e."""

    k: int
    e: int

    def __post_init__(self):
        object.__setattr__(self, "k", self.k % self.e)

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        e = self.e * other.e // gcd(self.e, other.e)
        return RootOfUnity(self.k * (e // self.e) + other.k * (e // other.e), e)

    def conj(self) -> "RootOfUnity":
        return RootOfUnity(-self.k, self.e)

    def reduced(self) -> tuple:
        d = gcd(self.k, self.e)
        return (self.k // d, self.e // d)

    def __eq__(self, other):
        return isinstance(other, RootOfUnity) and self.reduced() == other.reduced()

    def __hash__(self):
        return hash(self.reduced())

    def to_complex(self) -> complex:
        return root_of_unity(self.k, self.e)


def root_of_unity(k: int, e: int) -> complex:
    k %= e
    if 4 * k % e == 0:  # exact values on the axes
        return (1, 1j, -1, -1j)[4 * k // e]
    return cmath.exp(2j * cmath.pi * k / e)


@dataclass(frozen=True)
class LocalPlace:
    q: int
    frob: int
    tame: bool = True


def is_hom_to_cyclic(J: FiniteGroup, values, e: int) -> bool:
    return len(values) == J.order and all(
        (values[a] + values[b] - values[J.mul(a, b)]) % e == 0 for a in range(J.order) for b in range(J.order)
    )


@dataclass(frozen=True, eq=False)
class LocalCohomology:
    place: LocalPlace
    owner: GammaGroup

    def __post_init__(self):
        J, quot = self.owner.base, self.owner.quotient
        if not self.place.tame or gcd(self.place.q, J.order) != 1:
            raise ValueError("place is not tame for this group")
        if not 0 <= self.place.frob < quot.group.order:
            raise ValueError("Frobenius is not an element of the quotient")
        if (quot.chi(self.place.frob) - self.place.q) % quot.modulus:
            raise ValueError("cyclotomic value of Frobenius must be q mod e")

    @cached_property
    def star(self) -> StarSet:
        return build_star(self.owner)

    @cached_property
    def unramified_size(self) -> int:
        row = self.owner.action[self.place.frob]
        return sum(1 for j in range(self.owner.base.order) if row[j] == j)

    @cached_property
    def residue_points(self) -> tuple:
        f = self.place.frob
        return tuple(p for p in range(len(self.star)) if self.star.act(f, p) == p)

    @property
    def weight(self) -> Fraction:
        return Fraction(1, self.unramified_size)

    @cached_property
    def unramified_class_count(self) -> int:
        """|J / (Frob - 1)J| for abelian J: the number of unramified classes."""
        J = self.owner.base
        row = self.owner.action[self.place.frob]
        image = {J.mul(row[k], J.inv(k)) for k in range(J.order)}
        return J.order // len(image)


def residue_fibers(lc: LocalCohomology) -> dict:
    """Mass of the fiber over each Frobenius-fixed star point."""
    if not lc.owner.base.is_abelian:
        raise CapabilityError("fiber counts are available only for abelian J")
    return {p: lc.unramified_class_count * lc.weight for p in lc.residue_points}


def tate_pairing_value(lc: LocalCohomology, chi_frob, phi: int) -> RootOfUnity:
    """Value of an unramified character on any class with residue phi."""
    e = lc.owner.quotient.modulus
    J = lc.owner.base
    if not is_hom_to_cyclic(J, chi_frob, e):
        raise ValueError("chi_frob must be a homomorphism J -> Z/e")
    if phi not in lc.residue_points:
        raise ValueError("star point is not fixed by Frobenius")
    return RootOfUnity(chi_frob[lc.star.element(phi)], e)


@dataclass(frozen=True)
class OverrideTable:
    """Local data at a declared bad place: (mass, height) per class block."""

    entries: tuple

    @property
    def total_mass(self) -> Fraction:
        return sum((Fraction(m) for m, _ in self.entries), Fraction(0))

    def fourier(self, s: complex, trivial_character: bool = True) -> complex:
        if trivial_character:
            return complex(sum(float(m) * float(h) ** (-s) for m, h in self.entries))
        if len({h for _, h in self.entries}) == 1:
            return 0j  # orthogonality of a nontrivial character against a constant height
        raise CapabilityError("nontrivial characters against nonconstant bad-place tables are not tabulated")


@dataclass(frozen=True)
class LocalHeight:
    counting: CountingFunction
    overrides: dict = field(default_factory=dict)

    def exponent(self, point: int) -> Fraction:
        return self.counting(point)

    def value(self, place: LocalPlace, point: int) -> float:
        if place.q in self.overrides:
            raise ValueError("height at an overridden place is given by its table")
        return float(place.q) ** float(self.counting(point))


def local_fourier(lc: LocalCohomology, h: LocalHeight, chi_frob, s: complex) -> complex:
    """Sum over Frobenius-fixed star points of q^(-c s) times the conjugate pairing value."""
    q = lc.place.q
    if q in h.overrides:
        trivial = all(v % lc.owner.quotient.modulus == 0 for v in chi_frob)
        return h.overrides[q].fourier(s, trivial)
    if not h.counting.star.same_as(lc.star):
        raise ValueError("height and cohomology live on different star-sets")
    e = lc.owner.quotient.modulus
    if not is_hom_to_cyclic(lc.owner.base, chi_frob, e):
        raise ValueError("chi_frob must be a homomorphism J -> Z/e")
    total = 0j
    for phi in lc.residue_points:
        z = root_of_unity(-chi_frob[lc.star.element(phi)], e)
        total += complex(q) ** (-float(h.counting(phi)) * s) * z
    return total


# finite model of the tame local Galois group


@dataclass(frozen=True, eq=False)
class TameModel:
    gamma: GammaGroup  # J with the action of <tau> x| <sigma>
    e: int
    f: int
    to_global: tuple  # model element -> element of the global quotient

    @property
    def tau(self) -> int:
        return 1 % (self.e * self.f)

    @property
    def sigma(self) -> int:
        return self.e % (self.e * self.f)


def _mult_order(x: int, n: int) -> int:
    if n == 1:
        return 1
    k, y = 1, x % n
    while y != 1:
        y = y * x % n
        k += 1
    return k


@lru_cache(maxsize=512)
def tame_model(g: GammaGroup, place: LocalPlace, f: int | None = None) -> TameModel:
    """Finite model with sigma of order f; f defaults to lcm(ord Frob, ord_e q) * exp(J).

    A larger f (a multiple of the default for a subgroup) gives a compatible model.
    """
    LocalCohomology(place, g)  # validates the place
    J, quot = g.base, g.quotient
    e = quot.modulus
    q = place.q % e
    frob_order = quot.group.element_order(place.frob)
    base_f = frob_order * _mult_order(q, e) // gcd(frob_order, _mult_order(q, e))
    if f is None:
        f = base_f * J.exponent
    elif f % base_f:
        raise ValueError("f must be a multiple of the orders of Frobenius and of q mod e")
    n = e * f
    qpow = [pow(q, k, e) for k in range(f)]

    def enc(i, k):
        return (i % e) + e * (k % f)

    table = tuple(
        tuple(enc(x % e + qpow[(x // e)] * (y % e), x // e + y // e) for y in range(n)) for x in range(n)
    )
    T = FiniteGroup(table, f"Tame(e={e},q={place.q})")
    cyc = tuple(qpow[x // e] for x in range(n))
    model_quot = GaloisQuotient(T, e, cyc, f"tame model at q={place.q}", place.q)
    frob_pows = [0]
    for _ in range(1, f):
        frob_pows.append(quot.group.mul(frob_pows[-1], place.frob))
    to_global = tuple(frob_pows[x // e] for x in range(n))
    action = tuple(g.action[to_global[x]] for x in range(n))
    return TameModel(GammaGroup(J, model_quot, action), e, f, to_global)


def restrict_cocycle(model: TameModel, sigma: Cocycle) -> Cocycle:
    """Inflate a cocycle on the global quotient to the tame model through Frobenius."""
    g = sigma.owner
    if g.base != model.gamma.base or any(g.action[t] != row for t, row in zip(model.to_global, model.gamma.action)):
        raise ValueError("cocycle does not live on the global group of this model")
    values = tuple(sigma.values[model.to_global[x]] for x in range(len(model.to_global)))
    # inflation along a homomorphism of quotients preserves the cocycle law
    return _unchecked(Cocycle, owner=model.gamma, values=values)


def local_classes(g: GammaGroup, place: LocalPlace, budget: int | None = None) -> list:
    """Every class of H^1 of the tame model as (representative tuple, residue element)."""
    return list(_local_classes(g, place, budget))


@lru_cache(maxsize=512)
def _local_classes(g: GammaGroup, place: LocalPlace, budget: int | None) -> tuple:
    model = tame_model(g, place)
    reps, _ = classify_cocycles(model.gamma, budget)
    return tuple((f, f[model.tau]) for f in reps)


def residue_of_local(g: GammaGroup, model: TameModel, values) -> int:
    """Star point of a local cocycle: the class of its value on tau."""
    return build_star(g).point_of(values[model.tau])


def residue_twist_check(g: GammaGroup, sigma: Cocycle, alpha: Cocycle, place: LocalPlace) -> bool:
    """Residue of alpha*sigma in J_* equals the residue of alpha in the star-set of the twist.

    `sigma` is either a cocycle of the global quotient (inflated through Frobenius)
    or a cocycle of the tame model that is trivial on inertia.
    """
    model = tame_model(g, place)
    if sigma.owner == g:
        sig = restrict_cocycle(model, sigma)
    elif sigma.owner == model.gamma:
        sig = sigma
    else:
        raise ValueError("sigma lives on neither the global nor the local group")
    if sig.values[model.tau] != 0:
        raise ValueError("sigma is ramified at this place")
    twisted = twist_group(model.gamma, sig)
    if alpha.owner != twisted:
        raise ValueError("alpha must be a cocycle of the twisted local group")
    J = g.base
    product = Cocycle(model.gamma, tuple(J.mul(a, s) for a, s in zip(alpha.values, sig.values)))
    tw_global = twist_group(g, sigma) if sigma.owner == g else None
    star_g = build_star(g)
    lhs = star_g.point_of(product.values[model.tau])
    if tw_global is not None:
        star_tw = build_star(tw_global)
        if not star_tw.same_as(star_g):
            return False
        rhs = star_tw.point_of(alpha.values[model.tau])
    else:
        rhs = star_g.point_of(alpha.values[model.tau])
    return lhs == rhs


def residue_subgroup_check(g: GammaGroup, elements, place: LocalPlace, alpha: Cocycle) -> bool:
    """Residue of the pushed-forward class equals the pushforward of the residue."""
    sub, emb = subgroup_gamma(g, elements)
    model = tame_model(g, place)
    model_sub = tame_model(sub, place, model.f)
    if alpha.owner != model_sub.gamma:
        raise ValueError("alpha must be a cocycle of the subgroup's model built with the same f")
    pushed = Cocycle(model.gamma, tuple(emb[v] for v in alpha.values))
    star_g, star_sub = build_star(g), build_star(sub)
    lhs = star_g.point_of(pushed.values[model.tau])
    rhs = star_g.point_of(emb[star_sub.element(star_sub.point_of(alpha.values[model_sub.tau]))])
    return lhs == rhs
