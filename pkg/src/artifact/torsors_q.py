"""Torsors of commutative constant and mu-type groups over Q, their heights and counts.

Two families are built in, each allowing a product of cyclic factors:

* ``cyclic``: G = Z/m1 x ... x Z/mk; torsors are tuples of Dirichlet characters of order
  dividing m_i, encoded by their local components.
* ``mu``: G = mu_m1 x ... x mu_mk; torsors are tuples of Kummer classes in Q^x/Q^x^m_i.

Heights are prod_{p not in bad set} p^c(residue_p) with local height 1 at the bad set
{p | m} union {infinity} union any extra declared primes.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, log

from .arith import (
    factorize,
    hom_count_padic_units,
    hensel_level,
    lcm,
    primes_up_to,
    primitive_root,
    smallest_prime_factors,
    valuation,
)
from .galois_core import FiniteGroup, GaloisQuotient, GammaGroup
from .star import CountingFunction, StarSet, build_star, c_constant, c_discriminant, invariants


@dataclass(frozen=True)
class QFamily:
    kind: str  # "cyclic" or "mu"
    factors: tuple

    def __post_init__(self):
        if self.kind not in ("cyclic", "mu"):
            raise ValueError("family kind must be 'cyclic' or 'mu'")
        if not self.factors or any(int(m) < 2 for m in self.factors):
            raise ValueError("factors must be integers >= 2")
        object.__setattr__(self, "factors", tuple(int(m) for m in self.factors))

    @property
    def name(self) -> str:
        sym = "Z" if self.kind == "cyclic" else "mu"
        return "x".join(f"{sym}{m}" for m in self.factors)

    @property
    def modulus(self) -> int:
        return lcm(*self.factors)

    @cached_property
    def group(self) -> FiniteGroup:
        return FiniteGroup.abelian(self.factors)

    def encode(self, residues) -> int:
        idx = 0
        for r, m in zip(residues, self.factors):
            idx = idx * m + (r % m)
        return idx

    def decode(self, idx: int) -> tuple:
        out = []
        for m in reversed(self.factors):
            out.append(idx % m)
            idx //= m
        return tuple(reversed(out))

    @cached_property
    def gamma(self) -> GammaGroup:
        """J with the action of Gal(Q(mu_M)/Q) = (Z/M)^x, M the exponent."""
        quot = GaloisQuotient.cyclotomic_units(self.modulus, "Gal(Q(mu_%d)/Q)" % self.modulus)
        if self.kind == "cyclic":
            return GammaGroup.trivial_action(self.group, quot)
        rows = []
        for gamma in range(quot.group.order):
            u = quot.chi(gamma)
            rows.append(tuple(self.encode(tuple(u * r for r in self.decode(j))) for j in range(self.group.order)))
        return GammaGroup(self.group, quot, tuple(rows))

    @cached_property
    def star(self) -> StarSet:
        return build_star(self.gamma)

    def frob(self, p: int) -> int:
        return self.gamma.quotient.group.labels.index(p % self.modulus)

    def bad_primes(self, extra=()) -> tuple:
        return tuple(sorted(set(factorize(self.modulus)) | {int(p) for p in extra}))

    def local_mass(self, p: int) -> Fraction:
        """#H^1(Q_p, G) / #G(Q_p)."""
        out = 1
        for m in self.factors:
            if self.kind == "cyclic":
                out *= hom_count_padic_units(p, m)
            else:
                out *= m * p ** (valuation(m, p) if m % p == 0 else 0)
        return Fraction(out)

    def mass_infinity(self) -> Fraction:
        out = Fraction(1)
        for m in self.factors:
            if self.kind == "cyclic":
                out *= Fraction(gcd(2, m), m)
        return out

    @property
    def g_F(self) -> int:
        """#G(Q)."""
        out = 1
        for m in self.factors:
            out *= m if self.kind == "cyclic" else gcd(2, m)
        return out

    @property
    def g_star_F(self) -> int:
        """#G*(Q) for the Cartier dual."""
        out = 1
        for m in self.factors:
            out *= gcd(2, m) if self.kind == "cyclic" else m
        return out

    def good_residues(self, p: int) -> tuple:
        """Nonzero residues realisable at a tame prime p (the Frobenius-fixed star points)."""
        out = []
        for j in range(1, self.group.order):
            res = self.decode(j)
            if self.kind == "cyclic" and any((p - 1) * r % m for r, m in zip(res, self.factors)):
                continue
            out.append(res)
        return tuple(out)

    def bad_part_count(self, bad: tuple) -> int:
        """Number of torsors with every ramified place inside the bad set."""
        out = 1
        for m in self.factors:
            if self.kind == "cyclic":
                for p in bad:
                    out *= hom_count_padic_units(p, m)
            else:
                out *= gcd(2, m) * m ** len(bad)
        return out


def discriminant_function(family: QFamily) -> CountingFunction:
    return c_discriminant(family.star)


def constant_function(family: QFamily, value=1) -> CountingFunction:
    return c_constant(family.star, value)


@dataclass(frozen=True)
class HeightSpec:
    family: QFamily
    counting: CountingFunction
    bad: tuple = ()
    normalized: bool = False

    def __post_init__(self):
        if not self.counting.star.same_as(self.family.star):
            raise ValueError("counting function must live on the family's star-set")
        object.__setattr__(self, "bad", self.family.bad_primes(self.bad))

    @cached_property
    def scale(self) -> Fraction:
        return invariants(self.counting).a if self.normalized else Fraction(1)

    def exponent(self, residues) -> Fraction:
        return self.counting.at_element(self.family.encode(residues)) * self.scale

    @cached_property
    def root(self) -> int:
        """d with every local height a power of p^(1/d)."""
        d = 1
        for v in self.counting.values:
            d = lcm(d, (v * self.scale).denominator)
        return d

    def exponent_int(self, residues) -> int:
        return int(self.exponent(residues) * self.root)

    @cached_property
    def min_exponent(self) -> Fraction:
        return min(self.counting.values[1:]) * self.scale


def default_spec(family: QFamily, counting: str = "discriminant", bad=(), normalized: bool = False) -> HeightSpec:
    if counting == "discriminant":
        c = discriminant_function(family)
    elif counting in ("one", "constant"):
        c = constant_function(family)
    else:
        raise ValueError(f"unknown counting function {counting!r}")
    return HeightSpec(family, c, tuple(bad), normalized)


# torsor classes


@dataclass(frozen=True, order=True)
class KummerClass:
    """Class of sign * prod p^e in Q^x / Q^x^m; the sign bit is kept only for even m."""

    m: int
    sign: int = 0
    exponents: tuple = ()  # sorted (p, e) with 0 < e < m

    def __post_init__(self):
        exps = tuple(sorted((int(p), int(e) % self.m) for p, e in self.exponents if int(e) % self.m))
        object.__setattr__(self, "exponents", exps)
        object.__setattr__(self, "sign", self.sign % 2 if self.m % 2 == 0 else 0)

    @classmethod
    def of(cls, x: int, m: int) -> "KummerClass":
        if x == 0:
            raise ValueError("zero has no Kummer class")
        return cls(m, 1 if x < 0 else 0, tuple(factorize(x).items()))

    def exponent(self, p: int) -> int:
        for q, e in self.exponents:
            if q == p:
                return e
        return 0

    @property
    def support(self) -> tuple:
        return tuple(p for p, _ in self.exponents)

    def value(self) -> int:
        out = -1 if self.sign else 1
        for p, e in self.exponents:
            out *= p**e
        return out

    def descriptor(self) -> str:
        return str(self.value())


@dataclass(frozen=True, order=True)
class CyclicTorsor:
    """Character of Gal(Q^ab/Q) with values in Z/m, stored by local components.

    `tame` holds (p, r) with r the value at the smallest primitive root mod p;
    `wild` holds (p, values) with values on the fixed generators of (Z/p^k)^x
    (see `unit_generators`).
    """

    m: int
    conductor: int = 1
    tame: tuple = ()
    wild: tuple = ()

    def component(self, p: int):
        for q, r in self.tame:
            if q == p:
                return r
        return 0

    def descriptor(self) -> str:
        parts = [f"{p}:{r}" for p, r in self.tame]
        parts += [f"{p}:{'/'.join(str(v) for v in vals)}" for p, vals in self.wild if any(vals)]
        return ";".join(parts) or "1"


def unit_generators(p: int, k: int) -> tuple:
    """Fixed generators of (Z/p^k)^x: (-1, 5) for p = 2, a primitive root mod p^2 lifted otherwise."""
    mod = p**k
    if p == 2:
        if k == 1:
            return ()
        if k == 2:
            return (mod - 1,)
        return (mod - 1, 5)
    g = primitive_root(p)
    if k > 1 and pow(g, p - 1, p * p) == 1:
        g += p
    return (g,)


def _generator_orders(p: int, k: int) -> tuple:
    if p == 2:
        if k == 1:
            return ()
        if k == 2:
            return (2,)
        return (2, 2 ** (k - 2))
    return ((p - 1) * p ** (k - 1),)


def wild_components(p: int, m: int) -> list:
    """All characters of Z_p^x with values in Z/m as tuples of values on `unit_generators`."""
    k = hensel_level(p, m) if m % p == 0 else 1
    orders = _generator_orders(p, k)
    out = [()]
    for n in orders:
        out = [t + (v,) for t in out for v in range(m) if (n * v) % m == 0]
    return [(k, t) for t in out]


def _wild_conductor_exponent(p: int, k: int, values: tuple, m: int) -> int:
    """Smallest f with the character trivial on units congruent to 1 mod p^f."""
    if not any(values):
        return 0
    gens = unit_generators(p, k)
    orders = _generator_orders(p, k)
    mod = p**k

    def chi(u):
        # brute-force discrete log over the generator exponents
        for exps in _exponent_tuples(orders):
            x = 1
            for g, e in zip(gens, exps):
                x = x * pow(g, e, mod) % mod
            if x == u % mod:
                return sum(v * e for v, e in zip(values, exps)) % m
        raise ValueError("not a unit")

    for f in range(1, k + 1):
        step = p**f
        if all(chi(u) == 0 for u in range(1, mod, step)):
            return f
    return k


def _exponent_tuples(orders):
    out = [()]
    for n in orders:
        out = [t + (e,) for t in out for e in range(n)]
    return out


@dataclass(frozen=True)
class Torsor:
    """One torsor of a (possibly product) family: a tuple of per-factor components."""

    family: QFamily
    parts: tuple  # KummerClass or CyclicTorsor per factor
    height_power: int  # H^d
    root: int  # d

    def residue(self, p: int) -> tuple:
        if self.family.kind == "mu":
            return tuple(k.exponent(p) % k.m for k in self.parts)
        return tuple(t.component(p) for t in self.parts)

    @property
    def height(self) -> float:
        return self.height_power ** (1.0 / self.root)

    def descriptor(self) -> str:
        return "|".join(x.descriptor() for x in self.parts)

    def sort_key(self):
        cond = 1
        if self.family.kind == "cyclic":
            for t in self.parts:
                cond = lcm(cond, t.conductor)
        else:
            for k in self.parts:
                cond = lcm(cond, abs(k.value()))
        return (self.height_power, cond, self.descriptor())


def residue_of_kummer(x: KummerClass, p: int, spec: HeightSpec | None = None) -> int:
    """Valuation of x at p mod m, as a point of (mu_m)_* = Z/m."""
    bad = spec.bad if spec is not None else tuple(factorize(x.m))
    if p in bad or x.m % p == 0:
        raise ValueError(f"{p} is in the bad set")
    return x.exponent(p) % x.m


def residue_of_character(t: CyclicTorsor, p: int, spec: HeightSpec | None = None) -> int:
    """Value at the smallest primitive root of the p-component, a point of (Z/m)_* = Z/m."""
    bad = spec.bad if spec is not None else tuple(factorize(t.m))
    if p in bad or t.m % p == 0:
        raise ValueError(f"{p} is in the bad set")
    return t.component(p)


# enumeration


def _check_bound(B) -> None:
    if B < 1:
        raise ValueError("height bound must be at least 1")


def _bound_power(B, d: int) -> int:
    """floor(B^d) for integer or rational B."""
    B = Fraction(B)
    return (B.numerator**d) // (B.denominator**d)


def iroot(n: int, k: int) -> int:
    """floor(n^(1/k))."""
    if n < 1:
        return 0
    if k == 1:
        return n
    # integer Newton from above: decreases monotonically to the floor
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def _good_prime_list(spec: HeightSpec, Bd: int, excluded=()) -> list:
    emin = int(spec.min_exponent * spec.root)
    pmax = iroot(Bd, emin)
    skip = set(spec.bad) | set(excluded)
    return [p for p in primes_up_to(pmax) if p not in skip]


def _options(spec: HeightSpec) -> dict:
    """residue class of p mod M -> list of (residues, integer exponent), sorted by exponent."""
    fam = spec.family
    M = fam.modulus
    out = {}
    for r in range(M):
        if gcd(r, M) != 1:
            continue
        p_like = r if r > 1 else M + 1
        opts = [(res, spec.exponent_int(res)) for res in fam.good_residues(p_like)]
        opts.sort(key=lambda t: (t[1], t[0]))
        out[r] = opts
    return out


def good_height_multiset(spec: HeightSpec, B, excluded=()) -> list:
    """Sorted H^d values of all good parts with height <= B (with multiplicity)."""
    _check_bound(B)
    return _good_heights(spec, _bound_power(B, spec.root), excluded)


def _good_heights(spec: HeightSpec, Bd: int, excluded=()) -> list:
    d = spec.root
    primes = _good_prime_list(spec, Bd, excluded)
    M = spec.family.modulus
    opts = _options(spec)
    grouped = {}
    for r, lst in opts.items():
        agg: dict = {}
        for _, e in lst:
            agg[e] = agg.get(e, 0) + 1
        grouped[r] = sorted(agg.items())
    emin = int(spec.min_exponent * d)
    out = []

    def dfs(start, h, mult):
        out.extend([h] * mult)
        for i in range(start, len(primes)):
            p = primes[i]
            if h * p**emin > Bd:
                break
            for e, k in grouped[p % M]:
                hp = h * p**e
                if hp > Bd:
                    break
                dfs(i + 1, hp, mult * k)

    dfs(0, 1, 1)
    out.sort()
    return out


@dataclass(frozen=True)
class CountSeries:
    spec: HeightSpec
    bounds: tuple
    counts: tuple  # unweighted
    weight: Fraction  # 1/#G(Q)

    def weighted(self) -> tuple:
        return tuple(self.weight * n for n in self.counts)


def _apply_conditions(spec: HeightSpec, conditions: dict | None):
    conditions = {int(p): set(v) for p, v in (conditions or {}).items()}
    for p in conditions:
        if p in spec.bad:
            raise ValueError(f"no tabulated local data for the condition at bad place {p}")
    return conditions


def height_multiset(spec: HeightSpec, B, conditions: dict | None = None) -> list:
    """Sorted H^d over all torsors with H <= B satisfying residue conditions at good primes.

    Conditions map a prime to its allowed residues (tuples for product families, or ints).
    """
    _check_bound(B)
    conditions = _apply_conditions(spec, conditions)
    fam = spec.family
    d = spec.root
    Bd = _bound_power(B, d)
    local = [((), 1)]
    for p, allowed in sorted(conditions.items()):
        allowed_t = {a if isinstance(a, tuple) else (a,) for a in allowed}
        choices = []
        zero = tuple(0 for _ in fam.factors)
        if zero in allowed_t:
            choices.append(1)
        for res in fam.good_residues(p):
            if res in allowed_t:
                choices.append(p ** spec.exponent_int(res))
        local = [(c + (x,), h * x) for c, h in local for x in choices]
    bad_count = fam.bad_part_count(spec.bad)
    out = []
    for _, h0 in local:
        if h0 > Bd:
            continue
        sub = _good_heights(spec, Bd // h0, excluded=tuple(conditions))
        out.extend(h * h0 for h in sub for _ in range(bad_count))
    out.sort()
    return out


def count_series(spec: HeightSpec, bounds, conditions: dict | None = None) -> CountSeries:
    bounds = tuple(bounds)
    if list(bounds) != sorted(set(bounds)):
        raise ValueError("schedule must be strictly increasing")
    top = height_multiset(spec, bounds[-1], conditions)
    d = spec.root
    counts = tuple(bisect.bisect_right(top, _bound_power(B, d)) for B in bounds)
    return CountSeries(spec, bounds, counts, Fraction(1, spec.family.g_F))


def count_with_condition(torsors, conditions: dict | None, B, bad=None, weighted: bool = False) -> Fraction:
    """Number of listed torsors with height <= B whose residues meet every condition.

    With `weighted` each torsor counts 1/#G(Q).
    """
    conditions = conditions or {}
    total = 0
    weight = Fraction(1)
    for t in torsors:
        weight = Fraction(1, t.family.g_F) if weighted else Fraction(1)
        if t.height_power > _bound_power(B, t.root):
            continue
        ok = True
        bad_set = tuple(factorize(t.family.modulus)) if bad is None else tuple(bad)
        for p, allowed in conditions.items():
            if p in bad_set or t.family.modulus % p == 0:
                raise ValueError(f"no tabulated local data for the condition at bad place {p}")
            res = t.residue(p)
            allowed_t = {a if isinstance(a, tuple) else (a,) for a in allowed}
            if res not in allowed_t:
                ok = False
                break
        total += ok
    return Fraction(total) * weight


def _bad_components(fam: QFamily, bad: tuple, m: int) -> list:
    if fam.kind == "mu":
        signs = (0, 1) if m % 2 == 0 else (0,)
        exps = [()]
        for p in bad:
            exps = [t + ((p, e),) for t in exps for e in range(m)]
        return [(s, e) for s in signs for e in exps]
    comps = [()]
    for p in bad:
        comps = [t + ((p, k, vals),) for t in comps for k, vals in wild_components(p, m)]
    return comps


def _make_part(fam: QFamily, m: int, good: list, bad_comp) -> object:
    if fam.kind == "mu":
        sign, exps = bad_comp
        return KummerClass(m, sign, tuple(exps) + tuple((p, r) for p, r in good if r))
    conductor = 1
    wild = []
    for p, k, vals in bad_comp:
        f = _wild_conductor_exponent(p, k, vals, m)
        conductor *= p**f
        wild.append((p, vals))
    tame = tuple((p, r) for p, r in good if r)
    for p, _ in tame:
        conductor *= p
    return CyclicTorsor(m, conductor, tame, tuple(wild))


def enumerate_family(spec: HeightSpec, B) -> list:
    """All torsors with H <= B, in nondecreasing height (ties by conductor, then descriptor)."""
    _check_bound(B)
    fam = spec.family
    d = spec.root
    Bd = _bound_power(B, d)
    primes = _good_prime_list(spec, Bd)
    opts = _options(spec)
    emin = int(spec.min_exponent * d)
    goods = []

    def dfs(start, h, chosen):
        goods.append((h, list(chosen)))
        for i in range(start, len(primes)):
            p = primes[i]
            if h * p**emin > Bd:
                break
            for res, e in opts[p % fam.modulus]:
                hp = h * p**e
                if hp > Bd:
                    break
                chosen.append((p, res))
                dfs(i + 1, hp, chosen)
                chosen.pop()

    dfs(0, 1, [])
    per_factor_bad = [_bad_components(fam, spec.bad, m) for m in fam.factors]
    out = []
    for h, chosen in goods:
        combos = [()]
        for comps in per_factor_bad:
            combos = [c + (x,) for c in combos for x in comps]
        for combo in combos:
            parts = tuple(
                _make_part(fam, m, [(p, res[i]) for p, res in chosen], combo[i]) for i, m in enumerate(fam.factors)
            )
            out.append(Torsor(fam, parts, h, d))
    out.sort(key=Torsor.sort_key)
    return out


def enumerate_mu_m(m: int, spec: HeightSpec, B) -> list:
    if spec.family != QFamily("mu", (m,)):
        raise ValueError("height spec belongs to another family")
    return enumerate_family(spec, B)


def enumerate_cyclic_m(m: int, spec: HeightSpec, B) -> list:
    if spec.family != QFamily("cyclic", (m,)):
        raise ValueError("height spec belongs to another family")
    return enumerate_family(spec, B)


def torsor_csv_lines(torsors, places=()) -> list:
    head = "family,m,descriptor,height_power,height_root"
    head += "".join(f",residue_{p}" for p in places)
    out = [head]
    for t in torsors:
        row = f"{t.family.kind},{'x'.join(map(str, t.family.factors))},{t.descriptor()},{t.height_power},{t.root}"
        for p in places:
            row += "," + "/".join(map(str, t.residue(p)))
        out.append(row)
    return out


# independent brute-force enumerators


def bruteforce_mu(spec: HeightSpec, B) -> list:
    """Scan integers n up to the largest possible support and keep m-th-power-free ones.

    Returns sorted (H^d, class value) pairs for a single-factor mu family.
    """
    fam = spec.family
    if fam.kind != "mu" or len(fam.factors) != 1:
        raise ValueError("single-factor mu family expected")
    m = fam.factors[0]
    d = spec.root
    Bd = _bound_power(B, d)
    emin = int(spec.min_exponent * d)
    # n = prod p^e with p^emin <= p^{c(e) d}; so n <= (B^d)^((m-1)/emin)
    limit = iroot(Bd ** (m - 1), emin)
    spf = smallest_prime_factors(limit)
    goods = []
    for n in range(1, limit + 1):
        x, fac = n, {}
        while x > 1:
            p = spf[x]
            fac[p] = fac.get(p, 0) + 1
            x //= p
        if any(e >= m for e in fac.values()) or any(p in spec.bad for p in fac):
            continue
        h = 1
        for p, e in fac.items():
            h *= p ** spec.exponent_int((e,))
            if h > Bd:
                break
        if h <= Bd:
            goods.append((h, n))
    out = []
    signs = (1, -1) if m % 2 == 0 else (1,)
    bad_vals = [1]
    for p in spec.bad:
        bad_vals = [v * p**e for v in bad_vals for e in range(m)]
    for h, n in goods:
        for s in signs:
            for v in bad_vals:
                out.append((h, s * v * n))
    out.sort()
    return out


def _local_characters_bruteforce(p: int, m: int) -> list:
    """Values at the least primitive root of all characters (Z/p)^x -> Z/m, by exhaustive check."""
    # find a generator by order computation, independent of the primitive_root helper
    g = next(a for a in range(1, p) if len({pow(a, k, p) for k in range(1, p)}) == p - 1) if p > 2 else 1
    dlog = {}
    x = 1
    for k in range(p - 1):
        dlog[x] = k
        x = x * g % p
    found = []
    for v in range(m):
        table = {a: dlog[a] * v % m for a in range(1, p)}
        if all(table[a * g % p] == (table[a] + table[g]) % m for a in range(1, p)):
            found.append(table[g])
    return found


def bruteforce_cyclic(spec: HeightSpec, B) -> list:
    """Loop over squarefree tame moduli and check candidate local characters directly.

    Returns sorted (H^d, tame residue tuple) pairs, each repeated by the number of
    choices at the bad places, for a single-factor cyclic family.
    """
    from .galois_core import homomorphisms

    fam = spec.family
    if fam.kind != "cyclic" or len(fam.factors) != 1:
        raise ValueError("single-factor cyclic family expected")
    m = fam.factors[0]
    d = spec.root
    Bd = _bound_power(B, d)
    emin = int(spec.min_exponent * d)
    limit = iroot(Bd, emin)
    spf = smallest_prime_factors(limit)
    cache: dict = {}
    goods = []
    for n in range(1, limit + 1):
        x, ps = n, []
        ok = True
        while x > 1:
            p = spf[x]
            x //= p
            if ps and ps[-1] == p:
                ok = False
                break
            ps.append(p)
        if not ok or any(p in spec.bad for p in ps):
            continue
        combos = [((), 1)]
        for p in ps:
            if p not in cache:
                cache[p] = [r for r in _local_characters_bruteforce(p, m) if r]
            combos = [(c + ((p, r),), h * p ** spec.exponent_int((r,))) for c, h in combos for r in cache[p]]
        for c, h in combos:
            if h <= Bd:
                goods.append((h, c))
    bad_count = 1
    for p in spec.bad:
        k = hensel_level(p, m) if m % p == 0 else 1
        units = FiniteGroup.units_mod(p**k)
        bad_count *= len(homomorphisms(units, FiniteGroup.cyclic(m)))
    out = [g for g in goods for _ in range(bad_count)]
    out.sort()
    return out


def loglog_slope(bounds, counts) -> float:
    xs = [log(b) for b in bounds]
    ys = [log(c) for c in counts]
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sum((x - mx) ** 2 for x in xs)


@dataclass(frozen=True)
class FitReport:
    bounds: tuple
    normalized: tuple  # N(B) / (B^a log^{b-1} B)
    last_decade_mean: float
    last_decade_spread: float
    slope: float


def empirical_fit(bounds, counts, a, b) -> FitReport:
    bounds = [float(x) for x in bounds]
    counts = [float(x) for x in counts]
    if len(bounds) < 10 or bounds[-1] < 100 * bounds[0]:
        raise ValueError("need at least 10 samples spanning two decades")
    a = float(a)
    norm = tuple(c / (B**a * log(B) ** (b - 1)) for B, c in zip(bounds, counts))
    top = bounds[-1]
    last = [v for B, v in zip(bounds, norm) if B >= top / 10]
    mean = sum(last) / len(last)
    spread = (max(last) - min(last)) / mean if mean else float("inf")
    return FitReport(tuple(bounds), norm, mean, spread, loglog_slope(bounds, counts))
