"""Star representations, Artin L-factors, Euler products and leading constants over Q.

The leading constant of the height zeta function at s = 1 is computed character by
character as

    (bad-place integrals) * lim (s-1)^b L^S(s, rho) * R(1),

with R(s) = prod_{p not in S} H_p(s) L_p(s, rho)^-1 absolutely convergent at s = 1.
L^S(s, rho) is split into Dirichlet L-functions mod N; their values at 1 come from
the digamma formula.  R(1) is an explicit product over p <= P times a tail obtained
from the expansion log(H_p L_p^-1) = sum_t c_t(p mod N) p^-t and prime zeta sums
sum_p psi(p) p^-t, themselves obtained from log L(nt, psi^n) by Moebius inversion.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np
from scipy import special

from .arith import factorize, hensel_level, is_padic_power, jacobi, lcm, mobius, primes_up_to, totient
from .galois_core import (
    CapabilityError,
    Cocycle,
    FiniteGroup,
    GaloisQuotient,
    GammaGroup,
    homomorphisms,
)
from .local_tame import (
    LocalCohomology,
    LocalPlace,
    local_classes,
    root_of_unity,
    tate_pairing_value,
)
from .star import CountingFunction, StarSet, build_star, invariants, min_locus
from .torsors_q import HeightSpec, KummerClass, QFamily


class TruncationError(RuntimeError):
    """The Euler product truncation leaves a tail above tolerance."""


# dual group and star representations


@dataclass(frozen=True, eq=False)
class DualGroup:
    """Hom(J, Z/e) with (gamma f)(j) = chi(gamma) f(gamma^-1 j)."""

    gamma: GammaGroup
    homs: tuple
    owner: GammaGroup

    def index(self, hom) -> int:
        return self.homs.index(tuple(hom))


@lru_cache(maxsize=256)
def dual_group(g: GammaGroup) -> DualGroup:
    J, quot = g.base, g.quotient
    e = quot.modulus
    homs = tuple(sorted(homomorphisms(J, FiniteGroup.cyclic(e))))
    index = {h: i for i, h in enumerate(homs)}
    table = tuple(
        tuple(index[tuple((x + y) % e for x, y in zip(h1, h2))] for h2 in homs) for h1 in homs
    )
    D = FiniteGroup(table, f"Hom({J.name},Z{e})")
    G = quot.group
    rows = []
    for gamma in range(G.order):
        ginv = G.inv(gamma)
        u = quot.chi(gamma)
        rows.append(tuple(index[tuple(u * h[g.act(ginv, j)] % e for j in range(J.order))] for h in homs))
    return DualGroup(GammaGroup(D, quot, tuple(rows)), homs, g)


@dataclass(frozen=True, eq=False)
class StarRepresentation:
    """rho(gamma)_{phi, phi'} = zeta^{chi(gamma)(phi)} if phi = gamma * phi', else 0."""

    star: StarSet
    W: tuple
    chi: Cocycle

    def __post_init__(self):
        W = tuple(sorted(set(self.W)))
        object.__setattr__(self, "W", W)
        s = set(W)
        if any(row[p] not in s for row in self.star.action for p in W):
            raise ValueError("W must be Galois invariant")
        if self.chi.owner != self.dual.gamma:
            raise ValueError("chi must be a cocycle of the dual group")

    @cached_property
    def dual(self) -> DualGroup:
        return dual_group(self.star.owner)

    @property
    def e(self) -> int:
        return self.star.owner.quotient.modulus

    @property
    def dim(self) -> int:
        return len(self.W)

    def entry(self, gamma: int, phi: int) -> int:
        """Exponent k of the entry zeta_e^k at row phi of rho(gamma)."""
        return self.dual.homs[self.chi(gamma)][self.star.element(phi)] % self.e

    def entries(self, gamma: int) -> list:
        """(row, column, k) for the nonzero entries of rho(gamma)."""
        pos = {p: i for i, p in enumerate(self.W)}
        out = []
        for j, p in enumerate(self.W):
            img = self.star.act(gamma, p)
            out.append((pos[img], j, self.entry(gamma, img)))
        return out

    def matrix(self, gamma: int) -> np.ndarray:
        mat = np.zeros((self.dim, self.dim), dtype=complex)
        for i, j, k in self.entries(gamma):
            mat[i, j] = root_of_unity(k, self.e)
        return mat

    def trace_exponents(self, gamma: int) -> dict:
        """Trace of rho(gamma) as a formal sum {k: multiplicity}."""
        out: dict = {}
        for p in self.W:
            if self.star.act(gamma, p) == p:
                k = self.entry(gamma, p)
                out[k] = out.get(k, 0) + 1
        return out

    def trace(self, gamma: int) -> complex:
        return sum(n * root_of_unity(k, self.e) for k, n in self.trace_exponents(gamma).items())


def star_representation(g: GammaGroup, W, chi_values=None) -> StarRepresentation:
    """Representation on W for the cocycle with the given hom indices (trivial by default)."""
    dual = dual_group(g)
    n = g.quotient.group.order
    vals = tuple(chi_values) if chi_values is not None else (0,) * n
    return StarRepresentation(build_star(g), tuple(W), Cocycle(dual.gamma, vals))


def rho_matrix(rep: StarRepresentation, gamma: int) -> np.ndarray:
    return rep.matrix(gamma)


def orbit_products(rep: StarRepresentation, gamma: int) -> list:
    """(length, k) for each cycle of gamma on W, zeta_e^k the product of entries around it."""
    seen: set = set()
    out = []
    for p in rep.W:
        if p in seen:
            continue
        length, k, x = 0, 0, p
        while True:
            seen.add(x)
            x = rep.star.act(gamma, x)
            k += rep.entry(gamma, x)
            length += 1
            if x == p:
                break
        out.append((length, k % rep.e))
    return out


def _place_args(place):
    if isinstance(place, LocalPlace):
        return place.q, place.frob
    q, frob = place
    return q, frob


def l_factor(rep: StarRepresentation, place, s: complex) -> complex:
    """det(1 - q^-s rho(Frob))^-1 via the cycle decomposition of Frobenius on W."""
    q, frob = _place_args(place)
    x = complex(q) ** (-s)
    out = 1 + 0j
    for length, k in orbit_products(rep, frob):
        out *= 1 - root_of_unity(k, rep.e) * x**length
    return 1 / out


def l_factor_dense(rep: StarRepresentation, place, s: complex) -> complex:
    q, frob = _place_args(place)
    mat = np.eye(rep.dim, dtype=complex) - complex(q) ** (-s) * rep.matrix(frob)
    return 1 / complex(np.linalg.det(mat)) if rep.dim else 1 + 0j


def fixed_subspace_dim(rep: StarRepresentation) -> int:
    """Number of Galois orbits of W on which chi is trivial on the stabiliser."""
    G = rep.star.owner.quotient.group
    dim = 0
    for orb in rep.star.orbits:
        p0 = orb[0]
        if p0 not in rep.W:
            continue
        stab = [x for x in range(G.order) if rep.star.act(x, p0) == p0]
        if all(rep.entry(x, p0) == 0 for x in stab):
            dim += 1
    return dim


def fixed_subspace_dim_numeric(rep: StarRepresentation) -> int:
    if rep.dim == 0:
        return 0
    G = rep.star.owner.quotient.group
    stack = np.vstack([rep.matrix(x) - np.eye(rep.dim) for x in G.generators] or [np.zeros((1, rep.dim))])
    return rep.dim - int(np.linalg.matrix_rank(stack, tol=1e-9))


def trace_identity_check(rep: StarRepresentation, lc: LocalCohomology) -> bool:
    """tr rho(Frob) equals (1/#G(F_v)) * sum of chi_v over local classes with residue in W.

    Both sides are compared as exact formal sums of e-th roots of unity; the right
    side is computed from a brute-force H^1 of the finite tame model.
    """
    if rep.star.owner != lc.owner:
        raise ValueError("representation and place belong to different groups")
    frob = lc.place.frob
    chi_frob = rep.dual.homs[rep.chi(frob)]
    lhs = {k: Fraction(n) for k, n in rep.trace_exponents(frob).items()}
    rhs: dict = {}
    W = set(rep.W)
    for _, residue in local_classes(lc.owner, lc.place):
        phi = lc.star.point_of(residue)
        if phi not in W:
            continue
        k = tate_pairing_value(lc, chi_frob, phi).k
        rhs[k] = rhs.get(k, Fraction(0)) + lc.weight
    lhs = {k: v for k, v in lhs.items() if v}
    rhs = {k: v for k, v in rhs.items() if v}
    return lhs == rhs


# arithmetic inputs


@dataclass(frozen=True)
class ArithmeticInputs:
    sha1: int
    sha2: int
    gF: int
    gStarF: int
    source: str = "user-supplied"

    def __post_init__(self):
        if min(self.sha1, self.sha2, self.gF, self.gStarF) < 1:
            raise ValueError("arithmetic inputs must be positive integers")

    @classmethod
    def default_for(cls, family: QFamily) -> "ArithmeticInputs":
        """Both Tate-Shafarevich groups vanish for these families over Q."""
        return cls(1, 1, family.g_F, family.g_star_F, "built-in default")


def tamagawa_constant(inputs: ArithmeticInputs) -> Fraction:
    return Fraction(inputs.gStarF, inputs.sha2)


# global characters of the Cartier dual


@dataclass(frozen=True)
class DirichletChar:
    """Character (Z/N)^x -> Z/m, values listed over the residues of `units_mod(N)`."""

    modulus: int
    m: int
    values: tuple

    @cached_property
    def _labels(self) -> dict:
        return {a: i for i, a in enumerate(FiniteGroup.units_mod(self.modulus).labels)}

    def __call__(self, a: int) -> int:
        return self.values[self._labels[a % self.modulus]] if self.modulus > 1 else 0

    @property
    def is_trivial(self) -> bool:
        return not any(self.values)

    def _crt(self, p: int, a: int, b: int) -> int:
        """Residue congruent to a mod p^k and to b mod N/p^k."""
        pk = p ** _vp(self.modulus, p)
        rest = self.modulus // pk
        return (a * rest * pow(rest, -1, pk) + b * pk * pow(pk, -1, rest)) % self.modulus if rest > 1 else a % pk

    def locally_trivial(self, v: int) -> bool:
        """Restriction to the decomposition group at v (0 meaning infinity) is trivial."""
        if v == 0:
            return self(self.modulus - 1) == 0
        if self.modulus % v:
            return self(v) == 0
        pk = v ** _vp(self.modulus, v)
        rest = self.modulus // pk
        units_p = [a for a in range(1, pk) if a % v]
        if any(self(self._crt(v, a, 1)) for a in units_p):
            return False
        return rest == 1 or self(self._crt(v, 1, v)) == 0

    def descriptor(self) -> str:
        return f"dirichlet(N={self.modulus};" + ",".join(map(str, self.values)) + ")"


def _vp(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


@dataclass(frozen=True)
class DualCharacter:
    """Global class of the Cartier dual: one component per factor of the family."""

    family: QFamily
    parts: tuple  # KummerClass (cyclic family) or DirichletChar (mu family)

    @property
    def is_trivial(self) -> bool:
        if self.family.kind == "cyclic":
            return all(k.sign == 0 and not k.exponents for k in self.parts)
        return all(d.is_trivial for d in self.parts)

    def inverse(self) -> "DualCharacter":
        if self.family.kind == "cyclic":
            return DualCharacter(
                self.family, tuple(KummerClass(k.m, k.sign, tuple((p, -e) for p, e in k.exponents)) for k in self.parts)
            )
        return DualCharacter(
            self.family, tuple(DirichletChar(d.modulus, d.m, tuple(-v % d.m for v in d.values)) for d in self.parts)
        )

    def locally_trivial(self, v: int) -> bool:
        if self.family.kind == "cyclic":
            for k in self.parts:
                if v == 0:
                    if k.m % 2 == 0 and k.sign:
                        return False
                elif not is_padic_power(Fraction(k.value()), v, k.m):
                    return False
            return True
        return all(d.locally_trivial(v) for d in self.parts)

    @property
    def period(self) -> int:
        """Frobenius data depend only on p modulo this number."""
        out = 1
        for part in self.parts:
            if isinstance(part, DirichletChar):
                out = lcm(out, part.modulus)
            elif part.sign or part.exponents:
                out = lcm(out, 4 * abs(part.value()))
        return out

    def frob_hom(self, r: int) -> tuple:
        """chi(Frob_p) as a hom J -> Z/e, for primes p congruent to r."""
        fam = self.family
        e = fam.modulus
        coeffs = []
        for part, m in zip(self.parts, fam.factors):
            if isinstance(part, DirichletChar):
                coeffs.append(part(r) * (e // m))
            elif not part.sign and not part.exponents:
                coeffs.append(0)
            elif m == 2:
                coeffs.append((e // 2) if jacobi(part.value(), r) == -1 else 0)
            else:
                raise CapabilityError("Frobenius values of Kummer characters are implemented for m = 2 only")
        return tuple(
            sum(c * x for c, x in zip(coeffs, fam.decode(j))) % e for j in range(fam.group.order)
        )

    def descriptor(self) -> str:
        if self.family.kind == "cyclic":
            return "kummer(" + ",".join(k.descriptor() for k in self.parts) + ")"
        return ",".join(d.descriptor() for d in self.parts)


@dataclass(frozen=True)
class CharacterSupport:
    family: QFamily
    bad: tuple
    characters: tuple

    def __len__(self):
        return len(self.characters)


def character_support(family: QFamily, spec: HeightSpec, constraints: dict | None = None) -> CharacterSupport:
    """Global dual classes unramified outside the bad set meeting the local constraints.

    `constraints` maps a bad place (prime, or 0 for infinity) to 'trivial' (the local
    height is constant there, so the character must vanish locally) or 'any'.
    Default is 'trivial' everywhere.
    """
    if spec.family != family:
        raise ValueError("height spec belongs to another family")
    constraints = dict(constraints or {})
    bad = spec.bad
    places = list(bad) + [0]
    for v in constraints:
        if v not in places:
            raise ValueError(f"{v} is not a declared bad place")
    per_factor = []
    for m in family.factors:
        cands = []
        if family.kind == "cyclic":
            signs = (0, 1) if m % 2 == 0 else (0,)
            exps = [()]
            for p in bad:
                exps = [t + ((p, e),) for t in exps for e in range(m)]
            cands = [KummerClass(m, s, ex) for s in signs for ex in exps]
        else:
            N = 1
            for p in bad:
                N *= p ** (hensel_level(p, m) if m % p == 0 else 1)
            units = FiniteGroup.units_mod(N)
            cands = [DirichletChar(N, m, h) for h in sorted(homomorphisms(units, FiniteGroup.cyclic(m)))]
        per_factor.append(cands)
    combos = [()]
    for cands in per_factor:
        combos = [c + (x,) for c in combos for x in cands]
    out = []
    for parts in combos:
        chi = DualCharacter(family, parts)
        if all(constraints.get(v, "trivial") == "any" or chi.locally_trivial(v) for v in places):
            out.append(chi)
    out.sort(key=lambda c: (not c.is_trivial, c.descriptor()))
    return CharacterSupport(family, bad, tuple(out))


# numerical layer


def _series_mul(a: dict, b: dict, top: Fraction | None = None) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            ex = ea + eb
            if top is not None and ex > top:
                continue
            out[ex] = out.get(ex, 0) + ca * cb
    return out


def _series_eval(a: dict, x: float) -> complex:
    return sum(c * x ** float(ex) for ex, c in a.items())


def _series_log(g: dict, top: Fraction) -> dict:
    """log of a series with constant term 1, truncated above `top`."""
    u = {ex: c for ex, c in g.items() if ex != 0 and abs(c) > 1e-13}
    if abs(g.get(Fraction(0), 0) - 1) > 1e-12:
        raise ValueError("series must start with 1")
    if not u:
        return {}
    low = min(u)
    out: dict = {}
    power = dict(u)
    j = 1
    while power and low * j <= top:
        for ex, c in power.items():
            if ex <= top:
                out[ex] = out.get(ex, 0) + ((-1) ** (j + 1)) * c / j
        power = _series_mul(power, u, top)
        j += 1
    return {ex: c for ex, c in out.items() if abs(c) > 1e-14}


def hurwitz_l(s: float, N: int, psi) -> complex:
    """L(s, psi) for a character psi mod N given as a callable on residues (zero off units)."""
    if s >= 30:
        return sum(psi(n) * n ** (-s) for n in range(1, 64) if math.gcd(n, N) == 1)
    return sum(psi(a) * N ** (-s) * special.zeta(s, a / N) for a in range(1, N + 1) if math.gcd(a, N) == 1)


def l_at_one(N: int, psi) -> complex:
    """L(1, psi) for a nonprincipal character mod N via the digamma function."""
    return -sum(psi(a) * special.digamma(a / N) for a in range(1, N + 1) if math.gcd(a, N) == 1) / N


@dataclass(frozen=True)
class _CharGroup:
    N: int
    labels: tuple
    homs: tuple  # exponents mod lam per unit
    lam: int

    def value(self, idx: int, a: int) -> complex:
        a %= self.N
        if math.gcd(a, self.N) != 1:
            return 0j
        return root_of_unity(self.homs[idx][self.labels.index(a)], self.lam)

    def power(self, idx: int, n: int) -> int:
        h = tuple(n * k % self.lam for k in self.homs[idx])
        return self.homs.index(h)


@lru_cache(maxsize=64)
def _dirichlet_group(N: int) -> _CharGroup:
    units = FiniteGroup.units_mod(N)
    lam = units.exponent
    homs = tuple(sorted(homomorphisms(units, FiniteGroup.cyclic(lam))))
    return _CharGroup(N, tuple(units.labels), homs, lam)


@lru_cache(maxsize=4096)
def prime_zeta(N: int, idx: int, t: float) -> complex:
    """sum over primes p not dividing N of psi(p) p^-t, psi the idx-th character mod N."""
    if t < 1.05:
        raise ValueError("prime sums are only evaluated for exponents >= 1.05")
    cg = _dirichlet_group(N)
    total = 0j
    n = 1
    while 2.0 ** (-n * t) > 1e-19:
        mu = mobius(n)
        if mu:
            j = cg.power(idx, n)
            lval = hurwitz_l(n * t, N, lambda a, j=j: cg.value(j, a))
            total += mu / n * cmath.log(lval)
        n += 1
    return total


@dataclass(frozen=True)
class Contribution:
    character: str
    fixed_dim: int
    bad_factor: float
    residue: complex
    remainder: complex
    value: complex
    note: str = ""


@dataclass(frozen=True)
class ZetaResult:
    family: str
    a: Fraction
    pole_order: int
    tau_bg: Fraction
    omega: float
    predicted: float
    truncation: int
    tail_bound: float
    raw_tail_bound: float
    contributions: tuple
    lam: Fraction

    def report_lines(self) -> list:
        return [
            f"family: {self.family}",
            f"a: {self.a}",
            f"b (pole order): {self.pole_order}",
            f"lambda: {self.lam}",
            f"tau_BG: {self.tau_bg}",
            f"omega_H: {self.omega:.12g}",
            f"predicted constant: {self.predicted:.12g}",
            f"truncation bound: {self.truncation}",
            f"tail bound: {self.tail_bound:.3g}",
            f"tail bound without tail correction: {self.raw_tail_bound:.3g}",
        ] + [f"character {c.character}: fixed dim {c.fixed_dim}, contribution {c.value.real:.12g} {c.note}".rstrip() for c in self.contributions]


class _CharacterData:
    """Per-character Euler data over Gal(Q(mu_N)/Q)."""

    def __init__(self, spec: HeightSpec, chi: DualCharacter, top: Fraction):
        fam = spec.family
        self.spec = spec
        self.chi = chi
        e = fam.modulus
        N = lcm(e, chi.period, *spec.bad) if spec.bad else lcm(e, chi.period)
        self.N = N
        units = FiniteGroup.units_mod(N)
        quot = GaloisQuotient(units, e, tuple(a % e for a in units.labels), f"Gal(Q(mu_{N})/Q)")
        action = tuple(fam.gamma.action[fam.frob(a)] for a in units.labels)
        self.gamma = GammaGroup(fam.group, quot, action)
        self.star = build_star(self.gamma)
        c = spec.counting
        a = invariants(c).a
        self.cn = tuple(c.at_element(self.star.element(p)) * a for p in range(len(self.star)))
        dual = dual_group(self.gamma)
        # the Fourier factor pairs with conj(chi), whose L-factor is that of rho for chi^-1
        inv = chi.inverse()
        vals = tuple(dual.index(inv.frob_hom(r)) for r in units.labels)
        self.rep = StarRepresentation(self.star, self._locus(), Cocycle(dual.gamma, vals))
        self.fixed_dim = fixed_subspace_dim(self.rep)
        self.labels = units.labels
        self.top = top
        self._fourier: dict = {}
        self._linv: dict = {}
        for gi, r in enumerate(self.labels):
            hom = chi.frob_hom(r)
            h = {Fraction(0): 1 + 0j}
            for p in range(1, len(self.star)):
                if self.star.act(gi, p) == p:
                    ex = self.cn[p]
                    h[ex] = h.get(ex, 0) + root_of_unity(-hom[self.star.element(p)], e)
            self._fourier[r] = h
            linv = {Fraction(0): 1 + 0j}
            for length, k in orbit_products(self.rep, gi):
                linv = _series_mul(linv, {Fraction(0): 1 + 0j, Fraction(length): -root_of_unity(k, e)})
            self._linv[r] = linv

    def _locus(self) -> tuple:
        low = min(self.cn[1:])
        return tuple(p for p in range(1, len(self.cn)) if self.cn[p] == low)

    def fourier_series(self, r: int, allowed=None) -> dict:
        if allowed is None:
            return self._fourier[r]
        e = self.spec.family.modulus
        gi = self.labels.index(r)
        hom = self.chi.frob_hom(r)
        h: dict = {}
        for p in range(len(self.star)):
            if self.star.act(gi, p) == p and self.star.element(p) in allowed:
                ex = self.cn[p]
                h[ex] = h.get(ex, 0) + root_of_unity(-hom[self.star.element(p)], e)
        return h

    def local_factor(self, p: int, allowed=None) -> complex:
        r = p % self.N
        x = 1.0 / p
        return _series_eval(self.fourier_series(r, allowed), x) * _series_eval(self._linv[r], x)

    def residue_factor(self) -> complex:
        """lim (s-1)^k L^S(s, rho) with k the multiplicity of the principal character."""
        cg = _dirichlet_group(self.N)
        n = len(self.labels)
        out = (totient(self.N) / self.N) ** self.fixed_dim + 0j
        for idx in range(len(cg.homs)):
            tot = sum(self.rep.trace(gi) * cg.value(idx, r).conjugate() for gi, r in enumerate(self.labels)) / n
            mult = round(tot.real)
            if abs(tot - mult) > 1e-8:
                raise ArithmeticError("representation does not split into Dirichlet characters")
            if not any(cg.homs[idx]):
                if mult != self.fixed_dim:
                    raise ArithmeticError("principal multiplicity differs from the fixed dimension")
                continue
            if mult:
                out *= l_at_one(self.N, lambda a, idx=idx: cg.value(idx, a)) ** mult
        return out

    def log_coefficients(self) -> dict:
        """t -> {r: c_t(r)} for the expansion of log(H_p L_p^-1)."""
        out: dict = {}
        for r in self.labels:
            g = _series_mul(self._fourier[r], self._linv[r], self.top)
            logs = _series_log(g, self.top)
            for t, c in logs.items():
                if t <= Fraction(105, 100) and abs(c) > 1e-10:
                    raise ArithmeticError(f"expansion has a term of order p^-{t}: pole order mismatch")
                out.setdefault(t, {})[r] = c
        return out

    def remainder(self, P: int, overrides: dict | None = None) -> complex:
        overrides = overrides or {}
        top_prime = max([P] + list(overrides))
        explicit = [p for p in primes_up_to(top_prime) if self.N % p]
        log_r = 0j
        for p in explicit:
            f = self.local_factor(p, overrides.get(p))
            if f == 0:
                return 0j
            log_r += cmath.log(f)
        cg = _dirichlet_group(self.N)
        n = len(self.labels)
        for t, coeffs in self.log_coefficients().items():
            full = 0j
            for idx in range(len(cg.homs)):
                chat = sum(coeffs.get(r, 0) * cg.value(idx, r).conjugate() for r in self.labels) / n
                if abs(chat) > 1e-16:
                    full += chat * prime_zeta(self.N, idx, float(t))
            partial = sum(coeffs.get(p % self.N, 0) * p ** (-float(t)) for p in explicit)
            log_r += full - partial
        return cmath.exp(log_r)


def _bad_factor(spec: HeightSpec, chi: DualCharacter) -> float:
    fam = spec.family
    out = 1.0
    for p in spec.bad:
        out *= float(fam.local_mass(p)) if chi.locally_trivial(p) else 0.0
    out *= float(fam.mass_infinity()) if chi.locally_trivial(0) else 0.0
    return out


def _tail_bounds(spec: HeightSpec, P: int, top: Fraction, lam: Fraction) -> tuple:
    size = spec.family.group.order
    C = 2.0 * size + 1
    d = spec.root * invariants(spec.counting).a.denominator
    ratio = (C / P) ** (1.0 / d)
    if ratio >= 1:
        return float("inf"), float("inf")
    tail = P * (C / P) ** float(top) / (1 - ratio)
    lamf = float(lam)
    raw = 2 * size * P ** (1 - lamf) / (lamf - 1)
    return tail, raw


def zeta_leading_constant(
    spec: HeightSpec,
    inputs: ArithmeticInputs | None = None,
    support: CharacterSupport | None = None,
    truncation: int = 1000,
    conditions: dict | None = None,
    tolerance: float = 1e-9,
    top: Fraction = Fraction(12),
) -> ZetaResult:
    """Regularised leading constant of the height zeta function at s = 1.

    `conditions` maps good primes to allowed residues (elements of J given as residue
    tuples or ints); the result then carries omega_H of that elementary open set.
    """
    fam = spec.family
    inputs = inputs or ArithmeticInputs.default_for(fam)
    support = support or character_support(fam, spec)
    if support.family != fam or support.bad != spec.bad:
        raise ValueError("character support was built for another height")
    if not support.characters or not support.characters[0].is_trivial:
        raise ValueError("character support must contain the trivial character")
    inv = invariants(spec.counting)
    b = inv.b
    allowed = {}
    for p, res in (conditions or {}).items():
        p = int(p)
        if p in spec.bad:
            raise ValueError(f"no tabulated local data for the condition at bad place {p}")
        allowed[p] = {fam.encode(r if isinstance(r, tuple) else (r,)) for r in res}
    tail, raw = _tail_bounds(spec, truncation, top, inv.lam)
    if tail > tolerance:
        raise TruncationError(f"tail bound {tail:.3g} exceeds tolerance {tolerance:.3g}; raise the truncation")
    contributions = []
    total = 0j
    for chi in support.characters:
        bad = _bad_factor(spec, chi)
        if bad == 0:
            contributions.append(Contribution(chi.descriptor(), -1, 0.0, 0j, 0j, 0j, "(vanishes at a bad place)"))
            continue
        try:
            data = _CharacterData(spec, chi, top)
        except CapabilityError:
            raise CapabilityError(f"cannot evaluate Frobenius data of {chi.descriptor()}") from None
        if data.fixed_dim < b:
            contributions.append(
                Contribution(chi.descriptor(), data.fixed_dim, bad, 0j, 0j, 0j, "(pole order below b, skipped)")
            )
            continue
        res = data.residue_factor()
        rem = data.remainder(truncation, allowed)
        val = bad * res * rem
        total += val
        contributions.append(Contribution(chi.descriptor(), data.fixed_dim, bad, res, rem, val))
    if abs(total.imag) > 1e-8 * max(1.0, abs(total.real)):
        raise ArithmeticError("character sum is not real")
    omega = total.real
    tau = tamagawa_constant(inputs)
    predicted = inputs.sha2 * omega / (inputs.gStarF * math.factorial(b - 1))
    return ZetaResult(fam.name, inv.a, b, tau, omega, predicted, truncation, tail, raw, tuple(contributions), inv.lam)


def measure_of_elementary_open(
    spec: HeightSpec,
    conditions: dict,
    inputs: ArithmeticInputs | None = None,
    support: CharacterSupport | None = None,
    truncation: int = 1000,
) -> float:
    """omega_H of the set of adelic classes whose residues at the listed primes are allowed."""
    return zeta_leading_constant(spec, inputs, support, truncation, conditions).omega


def predicted_count_constant(result: ZetaResult, normalized: bool) -> float:
    """Constant C with N(B) ~ C B^a log^(b-1) B for weighted counts.

    For unnormalised heights H = H_norm^(1/a), so log B_norm = a log B.
    """
    if normalized:
        return result.predicted
    return result.predicted * float(result.a) ** (result.pole_order - 1)
