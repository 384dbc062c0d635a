"""Star-sets, counting functions, Malle invariants and the breaking-thin scan."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .galois_core import (
    GammaGroup,
    classify_cocycles,
    Cocycle,
    invariant_subgroups,
    subgroup_gamma,
    twist_group,
)


@dataclass(frozen=True, eq=False)
class StarSet:
    """Conjugacy classes of J with the action gamma * g = gamma(g)^(chi(gamma)^-1)."""

    owner: GammaGroup

    @cached_property
    def points(self) -> tuple:
        return tuple(sorted(set(self.owner.base.class_of)))

    @cached_property
    def index(self) -> dict:
        return {rep: i for i, rep in enumerate(self.points)}

    def point_of(self, element: int) -> int:
        return self.index[self.owner.base.class_of[element]]

    def element(self, point: int) -> int:
        return self.points[point]

    @property
    def distinguished(self) -> int:
        return 0

    def __len__(self):
        return len(self.points)

    def star_act_element(self, gamma: int, g: int) -> int:
        quot = self.owner.quotient
        inv = pow(quot.chi(gamma), -1, quot.modulus) if quot.modulus > 1 else 1
        return self.owner.base.power(self.owner.act(gamma, g), inv)

    @cached_property
    def action(self) -> tuple:
        J = self.owner.base
        rows = []
        for gamma in range(self.owner.quotient.group.order):
            row = []
            for rep in self.points:
                images = {self.point_of(self.star_act_element(gamma, x)) for x in range(J.order) if J.class_of[x] == rep}
                if len(images) != 1:
                    raise ValueError("star action is not well defined on classes")
                row.append(images.pop())
            rows.append(tuple(row))
        return tuple(rows)

    def act(self, gamma: int, point: int) -> int:
        return self.action[gamma][point]

    @cached_property
    def orbits(self) -> tuple:
        seen: set = set()
        out = []
        for p in range(len(self.points)):
            if p in seen:
                continue
            orb = tuple(sorted({row[p] for row in self.action}))
            seen.update(orb)
            out.append(orb)
        return tuple(out)

    def same_as(self, other: "StarSet") -> bool:
        return self.points == other.points and self.action == other.action

    def add(self, p: int, q: int) -> int:
        """Group law on points, available for abelian J."""
        J = self.owner.base
        if not J.is_abelian:
            raise ValueError("points form a group only for abelian J")
        return self.point_of(J.mul(self.element(p), self.element(q)))


def build_star(g: GammaGroup) -> StarSet:
    if g.quotient.modulus % g.base.exponent:
        raise ValueError("exponent of J does not divide the cyclotomic modulus")
    s = StarSet(g)
    s.action  # noqa: B018 -- force the well-definedness check
    return s


@dataclass(frozen=True, eq=False)
class CountingFunction:
    star: StarSet
    values: tuple  # Fractions indexed by point

    def __post_init__(self):
        if len(self.values) != len(self.star):
            raise ValueError("one value per star point is required")
        vals = [Fraction(v) for v in self.values]
        object.__setattr__(self, "values", tuple(vals))
        if vals[0] != 0:
            raise ValueError("counting function must vanish at the distinguished point")
        if any(v <= 0 for v in vals[1:]):
            raise ValueError("counting function must be positive off the distinguished point")
        for row in self.star.action:
            if any(vals[row[p]] != vals[p] for p in range(len(vals))):
                raise ValueError("counting function is not Galois invariant")

    def __call__(self, point: int) -> Fraction:
        return self.values[point]

    def at_element(self, g: int) -> Fraction:
        return self.values[self.star.point_of(g)]

    def on(self, other: StarSet) -> "CountingFunction":
        """The same function on an identical star-set (for instance that of an inner twist)."""
        if not self.star.same_as(other):
            raise ValueError("star-sets differ")
        return CountingFunction(other, self.values)

    def scaled(self, k) -> "CountingFunction":
        return CountingFunction(self.star, tuple(v * k for v in self.values))


@dataclass(frozen=True)
class MalleInvariants:
    a: Fraction
    b: int
    lam: Fraction


def c_discriminant(s: StarSet) -> CountingFunction:
    J = s.owner.base
    vals = []
    for rep in s.points:
        k = J.element_order(rep)
        vals.append(Fraction(J.order // k * (k - 1)))
    return CountingFunction(s, tuple(vals))


def c_constant(s: StarSet, value=1) -> CountingFunction:
    return CountingFunction(s, (Fraction(0),) + (Fraction(value),) * (len(s) - 1))


def count_cycles(perm) -> int:
    seen = [False] * len(perm)
    k = 0
    for i in range(len(perm)):
        if not seen[i]:
            k += 1
            while not seen[i]:
                seen[i] = True
                i = perm[i]
    return k


def c_index(s: StarSet, perms=None) -> CountingFunction:
    """n minus the number of orbits of the image permutation."""
    J = s.owner.base
    perms = J.perms if perms is None else tuple(tuple(p) for p in perms)
    if perms is None or len(perms) != J.order:
        raise ValueError("a permutation image is needed for every element")
    n = len(perms[0])
    if len(set(perms)) != J.order:
        raise ValueError("embedding is not faithful")
    for a in range(J.order):
        for b in range(J.order):
            if tuple(perms[a][x] for x in perms[b]) != perms[J.mul(a, b)]:
                raise ValueError("embedding is not a homomorphism")
    orbit = {0}
    frontier = [0]
    while frontier:
        x = frontier.pop()
        for p in perms:
            if p[x] not in orbit:
                orbit.add(p[x])
                frontier.append(p[x])
    if len(orbit) != n:
        raise ValueError("embedding is not transitive")
    return CountingFunction(s, tuple(Fraction(n - count_cycles(perms[rep])) for rep in s.points))


def parse_counting_text(s: StarSet, text: str) -> CountingFunction:
    """Lines `class <element-index> value <p>/<q>`; unlisted classes other than the identity are an error."""
    vals: dict = {0: Fraction(0)}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4 or parts[0] != "class" or parts[2] != "value":
            raise ValueError(f"bad counting line: {line}")
        elem = int(parts[1])
        if not 0 <= elem < s.owner.base.order:
            raise ValueError(f"no element {elem}")
        p = s.point_of(elem)
        v = Fraction(parts[3])
        if p in vals and vals[p] != v and p != 0:
            raise ValueError(f"conflicting values for the class of {elem}")
        vals[p] = v
    missing = [s.element(p) for p in range(len(s)) if p not in vals]
    if missing:
        raise ValueError(f"no value for classes of {missing}")
    return CountingFunction(s, tuple(vals[p] for p in range(len(s))))


def invariants(c: CountingFunction) -> MalleInvariants:
    nonzero = [v for v in c.values[1:]]
    if not nonzero:
        raise ValueError("counting function on a trivial group has no invariants")
    low = min(nonzero)
    locus = {p for p in range(1, len(c.values)) if c.values[p] == low}
    b = sum(1 for orb in c.star.orbits if orb[0] in locus)
    a = 1 / low
    normed = sorted({v * a for v in nonzero})
    lam = normed[1] if len(normed) > 1 else Fraction(2)
    return MalleInvariants(a, b, lam)


def normalize(c: CountingFunction) -> CountingFunction:
    return c.scaled(invariants(c).a)


def min_locus(c: CountingFunction) -> tuple:
    low = min(c.values[1:])
    return tuple(p for p in range(1, len(c.values)) if c.values[p] == low)


def pullback(c: CountingFunction, sub: GammaGroup, embedding) -> CountingFunction:
    """Counting function r -> c(class of iota(r)) on the star-set of `sub`."""
    J = c.star.owner
    emb = tuple(embedding)
    if sub.quotient != J.quotient:
        raise ValueError("subgroup must carry the same Galois quotient")
    if len(emb) != sub.base.order or len(set(emb)) != len(emb):
        raise ValueError("inclusion is not injective")
    for a in range(sub.base.order):
        for b in range(sub.base.order):
            if emb[sub.base.mul(a, b)] != J.base.mul(emb[a], emb[b]):
                raise ValueError("inclusion is not a homomorphism")
    for gamma in range(sub.quotient.group.order):
        for r in range(sub.base.order):
            if emb[sub.act(gamma, r)] != J.act(gamma, emb[r]):
                raise ValueError("inclusion is not Galois equivariant")
    rs = build_star(sub)
    return CountingFunction(rs, tuple(c.at_element(emb[rep]) for rep in rs.points))


@dataclass(frozen=True)
class ScanRow:
    sigma_id: int
    subgroup_id: int
    subgroup: tuple
    a: Fraction
    b: int
    breaking: bool


@dataclass(frozen=True)
class ScanReport:
    quotient: str
    base: MalleInvariants
    rows: tuple

    @property
    def breaking(self) -> tuple:
        return tuple(r for r in self.rows if r.breaking)

    @property
    def all_secure(self) -> bool:
        return not self.breaking

    def csv_lines(self) -> list:
        out = ["sigma_id,subgroup_id,a,b,breaking"]
        for r in self.rows:
            out.append(f"{r.sigma_id},{r.subgroup_id},{r.a},{r.b},{str(r.breaking).lower()}")
        return out

    def summary(self) -> str:
        if self.all_secure:
            return "all elements secure"
        pairs = ", ".join(f"(sigma {r.sigma_id}, subgroup {r.subgroup_id})" for r in self.breaking)
        return f"breaking thin: {pairs}"


def breaking_thin_scan(g: GammaGroup, c: CountingFunction, budget: int | None = None) -> ScanReport:
    if c.star.owner != g:
        raise ValueError("counting function lives on another group")
    base = invariants(c)
    reps, _ = classify_cocycles(g, budget)
    rows = []
    for sid, values in enumerate(reps):
        tw = twist_group(g, Cocycle(g, values))
        ctw = c.on(build_star(tw))
        for rid, elems in enumerate(invariant_subgroups(tw)):
            if len(elems) == 1:
                rows.append(ScanRow(sid, rid, tuple(sorted(elems)), Fraction(0), 0, False))
                continue
            sub, emb = subgroup_gamma(tw, elems)
            inv = invariants(pullback(ctw, sub, emb))
            breaking = (inv.a, inv.b) > (base.a, base.b)
            rows.append(ScanRow(sid, rid, emb, inv.a, inv.b, breaking))
    return ScanReport(g.quotient.describe(), base, tuple(rows))
