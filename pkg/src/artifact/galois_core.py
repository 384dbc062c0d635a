"""Finite Galois quotients, groups with a Galois action, cocycles and nonabelian H^1.

Elements of every finite group are indices 0..n-1 with 0 the identity.  All
objects are immutable once built; enumeration routines return fresh tuples.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import gcd


def _unchecked(cls, **fields):
    """Build a frozen dataclass without running __post_init__ (inputs valid by construction)."""
    obj = object.__new__(cls)
    for k, v in fields.items():
        object.__setattr__(obj, k, v)
    return obj

DEFAULT_BUDGET = 10_000


class ResourceError(RuntimeError):
    """An exhaustive computation would exceed the configured budget."""


class CapabilityError(ValueError):
    """The operation is not available for this kind of input."""


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """Group given by its multiplication table; table[a][b] is the index of a*b."""

    table: tuple
    name: str = "G"
    perms: tuple | None = None
    labels: tuple | None = None

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.table == other.table

    def __hash__(self):
        return hash(self.table)

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    @cached_property
    def inverses(self) -> tuple:
        inv = [0] * self.order
        for a, row in enumerate(self.table):
            inv[a] = row.index(0)
        return tuple(inv)

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        out = 0
        base = a
        while k:
            if k & 1:
                out = self.table[out][base]
            base = self.table[base][base]
            k >>= 1
        return out

    def conj(self, k: int, g: int) -> int:
        """k g k^-1."""
        return self.table[self.table[k][g]][self.inv(k)]

    @cached_property
    def element_orders(self) -> tuple:
        out = []
        for a in range(self.order):
            k, x = 1, a
            while x != 0:
                x = self.table[x][a]
                k += 1
            out.append(k)
        return tuple(out)

    def element_order(self, a: int) -> int:
        return self.element_orders[a]

    @cached_property
    def exponent(self) -> int:
        e = 1
        for k in self.element_orders:
            e = e * k // gcd(e, k)
        return e

    @cached_property
    def is_abelian(self) -> bool:
        n = self.order
        return all(self.table[a][b] == self.table[b][a] for a in range(n) for b in range(a + 1, n))

    @cached_property
    def class_of(self) -> tuple:
        """Minimal element index of the conjugacy class of each element."""
        n = self.order
        rep = [-1] * n
        for g in range(n):
            if rep[g] >= 0:
                continue
            for k in range(n):
                rep[self.conj(k, g)] = g
        return tuple(rep)

    def cyclic_subgroup(self, a: int) -> frozenset:
        out, x = {0}, a
        while x != 0:
            out.add(x)
            x = self.table[x][a]
        return frozenset(out)

    def generated(self, gens) -> frozenset:
        seen = {0}
        queue = deque([0])
        gens = list(gens)
        while queue:
            x = queue.popleft()
            for s in gens:
                y = self.table[x][s]
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return frozenset(seen)

    @cached_property
    def generators(self) -> tuple:
        """Greedy generating set, built by scanning indices in order."""
        gens: list = []
        span = frozenset({0})
        for a in range(self.order):
            if a not in span:
                gens.append(a)
                span = self.generated(gens)
            if len(span) == self.order:
                break
        return tuple(gens)

    def subgroups(self) -> list:
        """All subgroups as frozensets, sorted by (size, sorted elements)."""
        found = {frozenset({0})}
        queue = deque(found)
        while queue:
            s = queue.popleft()
            for x in range(self.order):
                if x in s:
                    continue
                t = self.generated(list(s) + [x])
                if t not in found:
                    found.add(t)
                    queue.append(t)
        return sorted(found, key=lambda s: (len(s), sorted(s)))

    def validate(self) -> None:
        n = self.order
        rng = range(n)
        for row in self.table:
            if len(row) != n or sorted(row) != list(rng):
                raise ValueError("table rows must be permutations of 0..n-1")
        if list(self.table[0]) != list(rng) or [r[0] for r in self.table] != list(rng):
            raise ValueError("index 0 must be the identity")
        t = self.table
        for a in rng:
            for b in rng:
                ab = t[a][b]
                for c in rng:
                    if t[ab][c] != t[a][t[b][c]]:
                        raise ValueError("table is not associative")
        if self.perms is not None:
            for a in rng:
                for b in rng:
                    if compose(self.perms[a], self.perms[b]) != self.perms[t[a][b]]:
                        raise ValueError("permutation representation is not a homomorphism")
            if len(set(self.perms)) != n:
                raise ValueError("permutation representation is not faithful")

    # constructors

    @classmethod
    def from_table(cls, rows, name: str = "G") -> "FiniteGroup":
        g = cls(tuple(tuple(int(x) for x in r) for r in rows), name)
        g.validate()
        return g

    @classmethod
    def cyclic(cls, n: int, name: str | None = None) -> "FiniteGroup":
        table = tuple(tuple((a + b) % n for b in range(n)) for a in range(n))
        return cls(table, name or f"Z{n}")

    @classmethod
    def from_perms(cls, gens, degree: int, name: str = "G") -> "FiniteGroup":
        ident = tuple(range(degree))
        gens = [tuple(g) for g in gens]
        seen = {ident}
        queue = deque([ident])
        while queue:
            x = queue.popleft()
            for s in gens:
                y = compose(x, s)
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        elems = sorted(seen)
        index = {p: i for i, p in enumerate(elems)}
        table = tuple(tuple(index[compose(a, b)] for b in elems) for a in elems)
        return cls(table, name, tuple(elems))

    @classmethod
    def symmetric(cls, n: int) -> "FiniteGroup":
        gens = []
        if n > 1:
            gens.append(tuple([1, 0] + list(range(2, n))))
            gens.append(tuple(list(range(1, n)) + [0]))
        return cls.from_perms(gens, n, f"S{n}")

    @classmethod
    def dihedral(cls, n: int) -> "FiniteGroup":
        """Symmetries of an n-gon, order 2n."""
        rot = tuple((i + 1) % n for i in range(n))
        ref = tuple((-i) % n for i in range(n))
        return cls.from_perms([rot, ref], n, f"D{2 * n}")

    @classmethod
    def quaternion(cls) -> "FiniteGroup":
        i = parse_cycles("(1 2 3 4)(5 6 7 8)", 8)
        j = parse_cycles("(1 5 3 7)(2 8 4 6)", 8)
        return cls.from_perms([i, j], 8, "Q8")

    @classmethod
    def direct_product(cls, g: "FiniteGroup", h: "FiniteGroup") -> "FiniteGroup":
        m = h.order
        n = g.order * m
        table = tuple(
            tuple(g.table[a // m][b // m] * m + h.table[a % m][b % m] for b in range(n))
            for a in range(n)
        )
        return cls(table, f"{g.name}x{h.name}")

    @classmethod
    def abelian(cls, factors) -> "FiniteGroup":
        """Z/m1 x ... x Z/mk; element index is the mixed-radix encoding (first factor most significant)."""
        out = cls.cyclic(1, "1")
        for m in factors:
            out = cls.direct_product(out, cls.cyclic(m))
        return cls(out.table, "x".join(f"Z{m}" for m in factors) or "1")

    @classmethod
    def units_mod(cls, n: int) -> "FiniteGroup":
        """(Z/n)^x with labels the residues in increasing order (1 first)."""
        res = [a for a in range(1, n + 1) if gcd(a, n) == 1] if n > 1 else [1]
        res = [a % n if n > 1 else 0 for a in res]
        res = sorted(res, key=lambda a: (a != 1 % n, a))
        index = {a: i for i, a in enumerate(res)}
        table = tuple(tuple(index[(a * b) % n if n > 1 else 0] for b in res) for a in res)
        return cls(table, f"U{n}", None, tuple(res))


def compose(a: tuple, b: tuple) -> tuple:
    """(a*b)(x) = a(b(x))."""
    return tuple(a[x] for x in b)


def parse_cycles(text: str, degree: int) -> tuple:
    """Permutation from 1-based cycle notation such as '(1 2)(3 4 5)'."""
    perm = list(range(degree))
    body = text.replace(",", " ").strip()
    if not body or body == "()":
        return tuple(perm)
    for chunk in body.split(")"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if not chunk.startswith("("):
            raise ValueError(f"bad cycle notation: {text!r}")
        pts = [int(x) - 1 for x in chunk[1:].split()]
        if any(p < 0 or p >= degree for p in pts) or len(set(pts)) != len(pts):
            raise ValueError(f"bad cycle: {chunk})")
        for i, p in enumerate(pts):
            perm[p] = pts[(i + 1) % len(pts)]
    return tuple(perm)


def homomorphisms(src: FiniteGroup, dst: FiniteGroup) -> list:
    """All homomorphisms src -> dst as image tuples, found by backtracking on generator images."""
    gens = src.generators
    out = []

    def close(images):
        phi = {0: 0}
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for s, img in zip(gens, images):
                y = src.table[x][s]
                val = dst.table[phi[x]][img]
                if y in phi:
                    if phi[y] != val:
                        return None
                else:
                    phi[y] = val
                    queue.append(y)
        return phi

    def rec(images):
        if images and close(images) is None:
            return
        if len(images) == len(gens):
            phi = close(images)
            out.append(tuple(phi[x] for x in range(src.order)))
            return
        order = src.element_order(gens[len(images)])
        for img in range(dst.order):
            if order % dst.element_order(img) == 0:
                rec(images + [img])

    rec([])
    return out


def automorphisms(g: FiniteGroup) -> list:
    return [phi for phi in homomorphisms(g, g) if len(set(phi)) == g.order]


@dataclass(frozen=True, eq=False)
class GaloisQuotient:
    """Finite quotient of an absolute Galois group with its cyclotomic character mod `modulus`."""

    group: FiniteGroup
    modulus: int
    cyclotomic: tuple
    label: str = "Q"
    q: int | None = None

    def __post_init__(self):
        n = self.group.order
        e = self.modulus
        if len(self.cyclotomic) != n:
            raise ValueError("cyclotomic character needs one value per element")
        if self.cyclotomic[0] % e != 1 % e:
            raise ValueError("cyclotomic character must send the identity to 1")
        for a in range(n):
            if gcd(self.cyclotomic[a], e) != 1:
                raise ValueError("cyclotomic values must be units")
            for b in range(n):
                if (self.cyclotomic[a] * self.cyclotomic[b] - self.cyclotomic[self.group.mul(a, b)]) % e:
                    raise ValueError("cyclotomic character is not a homomorphism")

    def __eq__(self, other):
        return (
            isinstance(other, GaloisQuotient)
            and self.group == other.group
            and self.modulus == other.modulus
            and tuple(c % self.modulus for c in self.cyclotomic)
            == tuple(c % other.modulus for c in other.cyclotomic)
        )

    def __hash__(self):
        return hash((self.group, self.modulus))

    def chi(self, gamma: int) -> int:
        return self.cyclotomic[gamma] % self.modulus

    @classmethod
    def trivial(cls, modulus: int = 1, label: str = "Q") -> "GaloisQuotient":
        return cls(FiniteGroup.cyclic(1, "1"), modulus, (1,), label)

    @classmethod
    def cyclotomic_units(cls, modulus: int, label: str = "Q") -> "GaloisQuotient":
        """Gal(Q(mu_e)/Q) = (Z/e)^x with the tautological cyclotomic character."""
        u = FiniteGroup.units_mod(modulus)
        return cls(u, modulus, tuple(u.labels), label)

    def describe(self) -> str:
        return f"{self.label}: |quotient|={self.group.order} ({self.group.name}), cyclotomic mod {self.modulus} = {list(self.cyclotomic)}"


@dataclass(frozen=True, eq=False)
class GammaGroup:
    """Finite group J with an action of the Galois quotient; action[gamma][j] = gamma(j)."""

    base: FiniteGroup
    quotient: GaloisQuotient
    action: tuple

    def __post_init__(self):
        J, G = self.base, self.quotient.group
        if len(self.action) != G.order or any(len(r) != J.order for r in self.action):
            raise ValueError("action table has the wrong shape")
        if list(self.action[0]) != list(range(J.order)):
            raise ValueError("identity must act trivially")
        for row in self.action:
            if sorted(row) != list(range(J.order)) or row[0] != 0:
                raise ValueError("each Galois element must act bijectively and fix the identity")
            for a in range(J.order):
                for b in range(J.order):
                    if row[J.mul(a, b)] != J.mul(row[a], row[b]):
                        raise ValueError("Galois elements must act by automorphisms")
        for x in range(G.order):
            for y in range(G.order):
                xy = G.mul(x, y)
                if any(self.action[xy][j] != self.action[x][self.action[y][j]] for j in range(J.order)):
                    raise ValueError("action is not a homomorphism into Aut(J)")
        if self.quotient.modulus % J.exponent:
            raise ValueError("the exponent of J must divide the cyclotomic modulus")

    def __eq__(self, other):
        return (
            isinstance(other, GammaGroup)
            and self.base == other.base
            and self.quotient == other.quotient
            and self.action == other.action
        )

    def __hash__(self):
        return hash((self.base, self.action))

    def act(self, gamma: int, j: int) -> int:
        return self.action[gamma][j]

    @classmethod
    def trivial_action(cls, base: FiniteGroup, quotient: GaloisQuotient) -> "GammaGroup":
        row = tuple(range(base.order))
        return cls(base, quotient, tuple(row for _ in range(quotient.group.order)))

    @classmethod
    def from_generator_actions(cls, base: FiniteGroup, quotient: GaloisQuotient, gen_images: dict) -> "GammaGroup":
        """Extend actions given on some Galois elements to the whole quotient."""
        G = quotient.group
        ident = tuple(range(base.order))
        act = {0: ident}
        queue = deque([0])
        gens = {int(k): tuple(v) for k, v in gen_images.items()}
        for k in gens:
            if not 0 <= k < G.order:
                raise ValueError(f"no Galois element {k}")
        while queue:
            x = queue.popleft()
            for s, img in gens.items():
                y = G.mul(x, s)
                val = tuple(act[x][img[j]] for j in range(base.order))
                if y in act:
                    if act[y] != val:
                        raise ValueError("generator actions are inconsistent")
                else:
                    act[y] = val
                    queue.append(y)
        if len(act) != G.order:
            raise ValueError("actions must be given on a generating set of the quotient")
        return cls(base, quotient, tuple(act[x] for x in range(G.order)))

    @classmethod
    def conjugation(cls, base: FiniteGroup, quotient: GaloisQuotient, elements: dict) -> "GammaGroup":
        """Galois element k acts by conjugation by elements[k] (on a generating set)."""
        imgs = {k: tuple(base.conj(t, j) for j in range(base.order)) for k, t in elements.items()}
        return cls.from_generator_actions(base, quotient, imgs)

    def is_invariant(self, subset) -> bool:
        s = set(subset)
        return all(row[x] in s for row in self.action for x in s)


@dataclass(frozen=True, eq=False)
class Cocycle:
    """Crossed homomorphism f with f(gamma delta) = f(gamma) * gamma(f(delta))."""

    owner: GammaGroup
    values: tuple

    def __post_init__(self):
        if len(self.values) != self.owner.quotient.group.order:
            raise ValueError("cocycle needs one value per Galois element")
        if not is_cocycle(self.owner, self.values):
            raise ValueError("values violate the cocycle law")

    def __eq__(self, other):
        return isinstance(other, Cocycle) and self.owner == other.owner and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def __call__(self, gamma: int) -> int:
        return self.values[gamma]

    @classmethod
    def trivial(cls, owner: GammaGroup) -> "Cocycle":
        return cls(owner, (0,) * owner.quotient.group.order)


def is_cocycle(g: GammaGroup, values) -> bool:
    """Check f(xy) = f(x) x(f(y)) for all x and y in a generating set.

    That suffices: if it holds for y = s and y = t then for y = st
    f(xst) = f(xs) xs(f(t)) = f(x) x(f(s)) xs(f(t)) = f(x) x(f(st)).
    """
    G, J = g.quotient.group, g.base
    if values[0] != 0:
        return False
    for y in G.generators:
        fy = values[y]
        for x in range(G.order):
            if values[G.mul(x, y)] != J.mul(values[x], g.action[x][fy]):
                return False
    return True


def _check_budget(g: GammaGroup, budget: int | None) -> None:
    budget = DEFAULT_BUDGET if budget is None else budget
    size = g.quotient.group.order * g.base.order
    if size > budget:
        raise ResourceError(f"|quotient|*|J| = {size} exceeds budget {budget}")


def cocycle_tuples(g: GammaGroup, budget: int | None = None) -> list:
    """All cocycles as value tuples, via backtracking on generator images."""
    _check_budget(g, budget)
    G, J = g.quotient.group, g.base
    gens = G.generators
    out = []

    def close(images):
        f = {0: 0}
        queue = deque([0])
        while queue:
            x = queue.popleft()
            row = g.action[x]
            for s, img in zip(gens, images):
                y = G.mul(x, s)
                val = J.mul(f[x], row[img])
                if y in f:
                    if f[y] != val:
                        return None
                else:
                    f[y] = val
                    queue.append(y)
        return f

    def rec(images):
        if images and close(images) is None:
            return
        if len(images) == len(gens):
            f = close(images)
            out.append(tuple(f[x] for x in range(G.order)))
            return
        for img in range(J.order):
            rec(images + [img])

    rec([])
    out.sort()
    return out


def coboundary_action(g: GammaGroup, values: tuple, k: int) -> tuple:
    """f'(gamma) = k^-1 f(gamma) gamma(k)."""
    J = g.base
    kinv = J.inv(k)
    return tuple(J.mul(J.mul(kinv, values[x]), g.action[x][k]) for x in range(len(values)))


def classify_cocycles(g: GammaGroup, budget: int | None = None) -> tuple:
    """(representatives, class index of every cocycle tuple); the trivial class comes first."""
    cocs = cocycle_tuples(g, budget)
    index: dict = {}
    reps: list = []
    for f in cocs:  # sorted, so the first member met is the minimal one
        if f in index:
            continue
        cid = len(reps)
        reps.append(f)
        for k in range(g.base.order):
            index[coboundary_action(g, f, k)] = cid
    return reps, index


def h1_classes(g: GammaGroup, budget: int | None = None) -> list:
    """One representative cocycle per cohomology class, constant-identity class first."""
    reps, _ = classify_cocycles(g, budget)
    return [Cocycle(g, f) for f in reps]


def twist_group(g: GammaGroup, s: Cocycle) -> GammaGroup:
    """Inner twist: gamma acts by j -> s(gamma) gamma(j) s(gamma)^-1."""
    if s.owner != g:
        raise ValueError("cocycle belongs to a different group")
    return _twist(g, s.values)


@lru_cache(maxsize=4096)
def _twist(g: GammaGroup, values: tuple) -> GammaGroup:
    J = g.base
    action = tuple(
        tuple(J.conj(values[x], g.action[x][j]) for j in range(J.order))
        for x in range(g.quotient.group.order)
    )
    # twisting a valid action by a cocycle is again an action by automorphisms
    return _unchecked(GammaGroup, base=J, quotient=g.quotient, action=action)


def twist_bijection(s: Cocycle, b: Cocycle) -> Cocycle:
    """Map a cocycle b of the s-twist to the cocycle b*s of the original group."""
    if b.owner != twist_group(s.owner, s):
        raise ValueError("second cocycle must live on the twist by the first")
    J = s.owner.base
    return Cocycle(s.owner, tuple(J.mul(bv, sv) for bv, sv in zip(b.values, s.values)))


def invariant_subgroups(g: GammaGroup) -> list:
    """All subgroups of J stable under the Galois action."""
    return [h for h in g.base.subgroups() if g.is_invariant(h)]


def subgroup_gamma(g: GammaGroup, elements) -> tuple:
    """Restrict g to an invariant subgroup; returns (GammaGroup, embedding tuple)."""
    elems = sorted(elements)
    if not elems or elems[0] != 0 or not g.is_invariant(elems):
        raise ValueError("not an invariant subgroup")
    J = g.base
    index = {x: i for i, x in enumerate(elems)}
    try:
        table = tuple(tuple(index[J.mul(a, b)] for b in elems) for a in elems)
    except KeyError:
        raise ValueError("subset is not closed under multiplication") from None
    perms = None
    if J.perms is not None:
        perms = tuple(J.perms[x] for x in elems)
    sub = FiniteGroup(table, f"{J.name}_sub{len(elems)}", perms)
    action = tuple(tuple(index[row[x]] for x in elems) for row in g.action)
    return GammaGroup(sub, g.quotient, action), tuple(elems)


def parse_group_text(text: str) -> GammaGroup:
    """Read a group and optional Galois data.

    Lines: `group <name> order <n>`, then `table` and n rows or `perm <degree>` and
    generator cycles, then optionally `galois order <m> cyclotomic <c_0> ... <c_{m-1}>`,
    `modulus <e>`, `galois-table` with m rows, and per-element lines
    `action <k> <images>` or `conjugate <k> <j>`.  Without `galois-table` the
    quotient is cyclic of order m with element k standing for the k-th power of a generator.
    """
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    pos = 0

    def take():
        nonlocal pos
        if pos >= len(lines):
            raise ValueError("unexpected end of group description")
        pos += 1
        return lines[pos - 1]

    head = take().split()
    if len(head) != 4 or head[0] != "group" or head[2] != "order":
        raise ValueError("expected `group <name> order <n>`")
    name, n = head[1], int(head[3])
    kind = take().split()
    if kind[0] == "table":
        J = FiniteGroup.from_table([take().split() for _ in range(n)], name)
    elif kind[0] == "perm":
        degree = int(kind[1])
        gens = []
        while pos < len(lines) and lines[pos].startswith("("):
            gens.append(parse_cycles(take(), degree))
        J = FiniteGroup.from_perms(gens, degree, name)
    else:
        raise ValueError("expected `table` or `perm <degree>`")
    if J.order != n:
        raise ValueError(f"declared order {n} but generators give {J.order}")
    if pos >= len(lines):
        return GammaGroup.trivial_action(J, GaloisQuotient.trivial(J.exponent))
    gal = take().split()
    if len(gal) < 4 or gal[0] != "galois" or gal[1] != "order" or gal[3] != "cyclotomic":
        raise ValueError("expected `galois order <m> cyclotomic <list>`")
    m = int(gal[2])
    cyc = tuple(int(x) for x in gal[4:])
    modulus = J.exponent
    gtable = None
    actions: dict = {}
    conjs: dict = {}
    while pos < len(lines):
        parts = take().split()
        if parts[0] == "modulus":
            modulus = int(parts[1])
        elif parts[0] == "galois-table":
            gtable = FiniteGroup.from_table([take().split() for _ in range(m)], "Gal")
        elif parts[0] == "action":
            actions[int(parts[1])] = tuple(int(x) for x in parts[2:])
        elif parts[0] == "conjugate":
            conjs[int(parts[1])] = int(parts[2])
        else:
            raise ValueError(f"unrecognised line: {' '.join(parts)}")
    G = gtable if gtable is not None else FiniteGroup.cyclic(m)
    if G.order != m:
        raise ValueError("galois table size does not match its order")
    quot = GaloisQuotient(G, modulus, cyc)
    for k, t in conjs.items():
        actions[k] = tuple(J.conj(t, j) for j in range(J.order))
    if not actions:
        return GammaGroup.trivial_action(J, quot)
    if 0 not in actions:
        actions[0] = tuple(range(J.order))
    return GammaGroup.from_generator_actions(J, quot, actions)
