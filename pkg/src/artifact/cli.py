"""Command-line front end: invariants, counts, predictions and their comparison.

Configuration is a sectioned key = value file (documented in `artifact --help`).
Exit codes: 0 success or PASS, 1 FAIL, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import configparser
import hashlib
import json
import math
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from .galois_core import CapabilityError, ResourceError, parse_cycles, parse_group_text
from .lfunc import (
    ArithmeticInputs,
    TruncationError,
    character_support,
    l_factor,
    predicted_count_constant,
    star_representation,
    zeta_leading_constant,
)
from .local_tame import LocalCohomology, LocalHeight, LocalPlace, local_fourier
from .star import (
    CountingFunction,
    breaking_thin_scan,
    build_star,
    c_constant,
    c_discriminant,
    c_index,
    invariants,
    min_locus,
    normalize,
    parse_counting_text,
)
from .torsors_q import HeightSpec, QFamily, count_series, enumerate_family, torsor_csv_lines
from .arith import primes_up_to

CONFIG_HELP = """\
configuration file sections (defaults in brackets):

[family]
  kind       = cyclic | mu | group       family Z/m, mu_m over Q, or a finite group file
  factors    = 2                         m, or a comma list for products (Q families)
  group_file = path                      group description (kind = group)
[height]
  counting   = discriminant | one | index:<perm file> | custom:<file>   [discriminant]
  bad        = 2, 3                      extra bad primes; primes dividing m are always bad []
  normalized = false                     bound the normalised height H^a instead of H [false]
[schedule]
  bounds     = 10, 100, 1000             explicit strictly increasing bounds, or
  decades    = 3:6                       10^3 .. 10^6 with
  per_decade = 4                         points per decade [4]
[conditions]
  3 = 0                                  allowed residues at a good prime; product
                                         families write residues as 1.0
[arithmetic]
  sha1, sha2, gF, gStarF                 [built-in values for the family]
[zeta]
  truncation = 1000                      explicit Euler product bound [1000]
  tolerance  = 1e-9                      maximal tail bound [1e-9]
  support    = 2:any, inf:any            local constraint on dual characters [trivial]
[verify]
  b          = 2                         override the pole order used for the comparison
  tolerance  = 0.05                      relative tolerance on the last-decade ratio [0.05]
  spread     = 0.2                       maximal last-decade spread of the ratios [0.2]
[output]
  dir        = out                       directory for counts.csv, manifest.json,
                                         prediction.json [.]
"""


class UsageError(Exception):
    pass


@dataclass
class ExperimentConfig:
    kind: str
    factors: tuple = ()
    group_file: str | None = None
    counting: str = "discriminant"
    bad: tuple = ()
    normalized: bool = False
    bounds: tuple = ()
    conditions: dict = field(default_factory=dict)
    arithmetic: dict = field(default_factory=dict)
    truncation: int = 1000
    zeta_tolerance: float = 1e-9
    support: dict = field(default_factory=dict)
    verify_b: int | None = None
    verify_tolerance: float = 0.05
    verify_spread: float = 0.2
    outdir: str = "."
    base_dir: str = "."
    raw: str = ""

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.raw.encode()).hexdigest()

    def path(self, name: str) -> str:
        return name if os.path.isabs(name) else os.path.join(self.base_dir, name)

    def family(self) -> QFamily:
        if self.kind == "group":
            raise UsageError("this command needs a Q family (kind = cyclic or mu)")
        return QFamily(self.kind, self.factors)

    def gamma(self):
        if self.kind == "group":
            with open(self.path(self.group_file)) as fh:
                return parse_group_text(fh.read())
        return self.family().gamma

    def counting_function(self, star) -> CountingFunction:
        spec = self.counting
        if spec == "discriminant":
            return c_discriminant(star)
        if spec in ("one", "constant"):
            return c_constant(star)
        if spec.startswith("index"):
            _, _, fname = spec.partition(":")
            perms = read_perm_file(self.path(fname)) if fname else None
            return c_index(star, perms)
        if spec.startswith("custom:"):
            with open(self.path(spec[7:])) as fh:
                return parse_counting_text(star, fh.read())
        raise UsageError(f"unknown counting function {spec!r}")

    def height(self) -> HeightSpec:
        fam = self.family()
        return HeightSpec(fam, self.counting_function(fam.star), self.bad, self.normalized)

    def inputs(self) -> ArithmeticInputs:
        fam = self.family()
        if not self.arithmetic:
            return ArithmeticInputs.default_for(fam)
        base = ArithmeticInputs.default_for(fam)
        vals = {k: self.arithmetic.get(k, getattr(base, k)) for k in ("sha1", "sha2", "gF", "gStarF")}
        return ArithmeticInputs(**vals, source="user-supplied")

    def parsed_conditions(self) -> dict:
        fam = self.family()
        out = {}
        for p, text in self.conditions.items():
            out[p] = [parse_residue(tok, len(fam.factors)) for tok in text.replace(",", " ").split()]
        return out


def parse_residue(tok: str, width: int):
    parts = tuple(int(x) for x in tok.split("."))
    if len(parts) != width:
        raise UsageError(f"residue {tok!r} needs {width} components")
    return parts if width > 1 else parts[0]


def read_perm_file(path: str) -> list:
    """Lines `degree <n>` then `<element-index> <cycles>`, one per element."""
    perms: dict = {}
    degree = None
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            head, _, rest = line.partition(" ")
            if head == "degree":
                degree = int(rest)
            else:
                if degree is None:
                    raise UsageError("permutation file must start with `degree <n>`")
                perms[int(head)] = parse_cycles(rest.strip() or "()", degree)
    if sorted(perms) != list(range(len(perms))):
        raise UsageError("permutation file must list every element index once")
    return [perms[i] for i in range(len(perms))]


def _int_list(text: str) -> tuple:
    return tuple(int(x) for x in text.replace(",", " ").split())


def _schedule(sec) -> tuple:
    if "bounds" in sec:
        out = _int_list(sec["bounds"])
    elif "decades" in sec:
        lo, _, hi = sec["decades"].partition(":")
        k = int(sec.get("per_decade", "4"))
        lo, hi = int(lo), int(hi)
        out = tuple(sorted({round(10 ** (lo + i / k)) for i in range((hi - lo) * k + 1)}))
    else:
        return ()
    if list(out) != sorted(set(out)) or (out and out[0] < 1):
        raise UsageError("schedule must be strictly increasing positive integers")
    return out


def load_config(path: str) -> ExperimentConfig:
    if not os.path.exists(path):
        raise UsageError(f"config file {path} not found")
    with open(path) as fh:
        raw = fh.read()
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(raw)
    except configparser.Error as exc:
        raise UsageError(f"cannot parse config: {exc}") from None
    if not cp.has_section("family"):
        raise UsageError("config needs a [family] section")
    fam = cp["family"]
    kind = fam.get("kind", "cyclic").strip()
    if kind not in ("cyclic", "mu", "group"):
        raise UsageError(f"unknown family kind {kind!r}")
    cfg = ExperimentConfig(kind=kind, raw=raw, base_dir=os.path.dirname(os.path.abspath(path)))
    if kind == "group":
        if "group_file" not in fam:
            raise UsageError("kind = group needs group_file")
        cfg.group_file = fam["group_file"]
        if not os.path.exists(cfg.path(cfg.group_file)):
            raise UsageError(f"group file {cfg.group_file} not found")
    else:
        cfg.factors = _int_list(fam.get("factors", fam.get("m", "2")))
    if cp.has_section("height"):
        h = cp["height"]
        cfg.counting = h.get("counting", "discriminant").strip()
        cfg.bad = _int_list(h.get("bad", ""))
        cfg.normalized = h.getboolean("normalized", fallback=False)
        for prefix in ("index:", "custom:"):
            if cfg.counting.startswith(prefix) and not os.path.exists(cfg.path(cfg.counting[len(prefix):])):
                raise UsageError(f"file {cfg.counting[len(prefix):]} not found")
    if cp.has_section("schedule"):
        cfg.bounds = _schedule(cp["schedule"])
    if cp.has_section("conditions"):
        cfg.conditions = {int(p): v for p, v in cp["conditions"].items()}
    if cp.has_section("arithmetic"):
        for k in ("sha1", "sha2", "gF", "gStarF"):
            if k.lower() in cp["arithmetic"]:
                v = int(cp["arithmetic"][k.lower()])
                if v < 1:
                    raise UsageError("arithmetic inputs must be positive")
                cfg.arithmetic[k] = v
    if cp.has_section("zeta"):
        z = cp["zeta"]
        cfg.truncation = z.getint("truncation", fallback=1000)
        cfg.zeta_tolerance = z.getfloat("tolerance", fallback=1e-9)
        for item in z.get("support", "").replace(",", " ").split():
            place, _, mode = item.partition(":")
            if mode not in ("any", "trivial"):
                raise UsageError(f"bad support constraint {item!r}")
            cfg.support[0 if place == "inf" else int(place)] = mode
    if cp.has_section("verify"):
        v = cp["verify"]
        if "b" in v:
            cfg.verify_b = v.getint("b")
        cfg.verify_tolerance = v.getfloat("tolerance", fallback=0.05)
        cfg.verify_spread = v.getfloat("spread", fallback=0.2)
    if cp.has_section("output"):
        cfg.outdir = cp["output"].get("dir", ".")
    cfg.outdir = cfg.path(cfg.outdir)
    return cfg


# commands


def cmd_invariants(cfg: ExperimentConfig, out) -> int:
    g = cfg.gamma()
    star = build_star(g)
    c = cfg.counting_function(star)
    inv = invariants(c)
    print(f"quotient: {g.quotient.describe()}", file=out)
    print(f"group: {g.base.name} (order {g.base.order})", file=out)
    for orb in star.orbits:
        elems = " ".join(str(star.element(p)) for p in orb)
        print(f"orbit [{elems}] c = {c(orb[0])}", file=out)
    print(f"minimum locus: {' '.join(str(star.element(p)) for p in min_locus(c))}", file=out)
    print(f"a = {inv.a}", file=out)
    print(f"b = {inv.b}", file=out)
    print(f"lambda = {inv.lam}", file=out)
    print(f"scan: {breaking_thin_scan(g, c).summary()}", file=out)
    return 0


def cmd_scan(cfg: ExperimentConfig, out) -> int:
    g = cfg.gamma()
    c = cfg.counting_function(build_star(g))
    report = breaking_thin_scan(g, c)
    for line in report.csv_lines():
        print(line, file=out)
    print(f"# {report.summary()}", file=out)
    return 0


def _sha(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def cmd_count(cfg: ExperimentConfig, out, fresh: bool = False) -> int:
    if not cfg.bounds:
        raise UsageError("count needs a [schedule]")
    spec = cfg.height()
    conds = cfg.parsed_conditions()
    os.makedirs(cfg.outdir, exist_ok=True)
    csv_path = os.path.join(cfg.outdir, "counts.csv")
    man_path = os.path.join(cfg.outdir, "manifest.json")
    rows: list = []
    if not fresh and os.path.exists(man_path):
        with open(man_path) as fh:
            man = json.load(fh)
        if man.get("config_sha256") == cfg.digest:
            if not os.path.exists(csv_path) or _sha(csv_path) != man.get("csv_sha256"):
                print("error: checkpoint corrupted (checksum mismatch); rerun with --fresh", file=sys.stderr)
                return 2
            with open(csv_path) as fh:
                rows = [ln.rstrip("\n") for ln in fh][1:]
    done = {int(r.split(",")[0]) for r in rows}
    for B in cfg.bounds:
        if B in done:
            continue
        series = count_series(spec, [B], conds)
        rows.append(f"{B},{series.counts[0]},{series.weighted()[0]}")
        rows.sort(key=lambda r: int(r.split(",")[0]))
        with open(csv_path, "w") as fh:
            fh.write("B,N,weighted\n" + "".join(r + "\n" for r in rows))
        with open(man_path, "w") as fh:
            json.dump(
                {
                    "config_sha256": cfg.digest,
                    "completed": sorted(int(r.split(",")[0]) for r in rows),
                    "csv_sha256": _sha(csv_path),
                },
                fh,
                indent=1,
                sort_keys=True,
            )
            fh.write("\n")
    print("B,N,weighted", file=out)
    for r in rows:
        print(r, file=out)
    return 0


def prediction(cfg: ExperimentConfig):
    spec = cfg.height()
    fam = spec.family
    support = character_support(fam, spec, cfg.support)
    return spec, zeta_leading_constant(
        spec,
        cfg.inputs(),
        support,
        cfg.truncation,
        cfg.parsed_conditions() or None,
        cfg.zeta_tolerance,
    )


def cmd_predict(cfg: ExperimentConfig, out) -> int:
    spec, res = prediction(cfg)
    inputs = cfg.inputs()
    for line in res.report_lines():
        print(line, file=out)
    const = predicted_count_constant(res, spec.normalized)
    expo = Fraction(1) if spec.normalized else res.a
    print(f"arithmetic inputs: {inputs.source}", file=out)
    print(f"weighted N(B) ~ {const:.12g} * B^{expo} * log(B)^{res.pole_order - 1}", file=out)
    os.makedirs(cfg.outdir, exist_ok=True)
    with open(os.path.join(cfg.outdir, "prediction.json"), "w") as fh:
        json.dump(
            {
                "config_sha256": cfg.digest,
                "a": str(expo),
                "b": res.pole_order,
                "omega": res.omega,
                "tau_bg": str(res.tau_bg),
                "predicted": res.predicted,
                "count_constant": const,
                "tail_bound": res.tail_bound,
                "truncation": res.truncation,
            },
            fh,
            indent=1,
            sort_keys=True,
        )
        fh.write("\n")
    return 0


@dataclass(frozen=True)
class Verdict:
    passed: bool
    ratios: tuple  # (B, ratio)
    last_mean: float
    spread: float
    b: int

    def lines(self) -> list:
        out = [f"B={B} ratio={r:.6f}" for B, r in self.ratios]
        out.append(f"last decade: mean ratio {self.last_mean:.6f}, spread {self.spread:.4f}, b = {self.b}")
        out.append("PASS" if self.passed else "FAIL")
        return out


def compare_counts(bounds, weighted, a, b, b_true, const_b_true, tolerance, spread) -> Verdict:
    """Ratios N(B) / (C B^a log^(b-1) B) with the constant rescaled to the pole order b used."""
    if b < 1:
        raise UsageError("pole order must be at least 1")
    const = const_b_true * math.factorial(b_true - 1) / math.factorial(b - 1)
    ratios = []
    for B, n in zip(bounds, weighted):
        if B <= 1:
            continue
        ratios.append((B, float(n) / (const * float(B) ** float(a) * math.log(B) ** (b - 1))))
    if not ratios:
        raise UsageError("no usable schedule points")
    top = ratios[-1][0]
    last = [r for B, r in ratios if B * 10 >= top]
    mean = sum(last) / len(last)
    spr = (max(last) - min(last)) / mean if mean else math.inf
    ok = abs(mean - 1) <= tolerance and spr <= spread
    return Verdict(ok, tuple(ratios), mean, spr, b)


def cmd_verify(cfg: ExperimentConfig, out) -> int:
    csv_path = os.path.join(cfg.outdir, "counts.csv")
    pred_path = os.path.join(cfg.outdir, "prediction.json")
    for p in (csv_path, pred_path):
        if not os.path.exists(p):
            raise UsageError(f"missing {os.path.basename(p)}; run count and predict first")
    with open(pred_path) as fh:
        pred = json.load(fh)
    bounds, weighted = [], []
    with open(csv_path) as fh:
        next(fh)
        for line in fh:
            B, _, w = line.strip().split(",")
            bounds.append(int(B))
            weighted.append(Fraction(w))
    b = cfg.verify_b if cfg.verify_b is not None else pred["b"]
    verdict = compare_counts(
        bounds, weighted, Fraction(pred["a"]), b, pred["b"], pred["count_constant"], cfg.verify_tolerance, cfg.verify_spread
    )
    for line in verdict.lines():
        print(line, file=out)
    return 0 if verdict.passed else 1


def cmd_local(cfg: ExperimentConfig, out, qmax: int, svals) -> int:
    spec = cfg.height()
    fam = spec.family
    c = normalize(spec.counting)
    h = LocalHeight(c)
    rep = star_representation(fam.gamma, min_locus(c))
    zero = (0,) * fam.group.order
    print("q,s,fourier,l_factor,product", file=out)
    for q in primes_up_to(qmax):
        if q in spec.bad:
            continue
        lc = LocalCohomology(LocalPlace(q, fam.frob(q)), fam.gamma)
        for s in svals:
            f = local_fourier(lc, h, zero, s)
            lf = l_factor(rep, lc.place, s)
            print(f"{q},{s},{f.real:.15g},{lf.real:.15g},{(f / lf).real:.15g}", file=out)
    return 0


def cmd_torsors(cfg: ExperimentConfig, out, max_height: int, conditions, weighted: bool) -> int:
    spec = cfg.height()
    fam = spec.family
    conds = dict(cfg.parsed_conditions())
    for item in conditions or ():
        p, _, allowed = item.removeprefix("p=").partition(":")
        conds[int(p)] = [parse_residue(t, len(fam.factors)) for t in allowed.replace(",", " ").split()]
    for p in conds:
        if p in spec.bad:
            raise UsageError(f"no tabulated local data for the condition at bad place {p}")
    places = tuple(sorted(conds))
    torsors = enumerate_family(spec, max_height)
    n = 0
    lines = torsor_csv_lines(torsors, places)
    print(lines[0], file=out)
    for t, line in zip(torsors, lines[1:]):
        ok = all(
            t.residue(p) in {a if isinstance(a, tuple) else (a,) for a in allowed} for p, allowed in conds.items()
        )
        if ok:
            print(line, file=out)
            n += 1
    total = Fraction(n, fam.g_F) if weighted else n
    print(f"# count {total}", file=out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="artifact",
        description="Invariants, counts and leading-constant predictions for torsors of finite etale group schemes.",
        epilog=CONFIG_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text, epilog=CONFIG_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
        p.add_argument("config", help="experiment configuration file")
        return p

    add("invariants", "star-set orbits, c values, a, b, lambda and the breaking-thin scan")
    p = add("count", "counts N(B) and weighted N(B) at each scheduled bound (resumable)")
    p.add_argument("--fresh", action="store_true", help="ignore existing checkpoints")
    add("predict", "tau_BG, omega_H, predicted constant and pole order")
    add("verify", "compare counts with the prediction; exit 1 on FAIL")
    add("scan", "breaking-thin scan as CSV")
    p = add("local", "local Fourier transforms and L-factors at good primes")
    p.add_argument("--qmax", type=int, default=50)
    p.add_argument("--s", type=float, nargs="+", default=[1.0, 2.0])
    p = add("torsors", "stream torsors of bounded height as CSV")
    p.add_argument("--max-height", type=int, required=True)
    p.add_argument("--condition", action="append", metavar="P:RESIDUES", help="e.g. 3:0, 5:1,2 or p=5:1,2")
    p.add_argument("--weighted", action="store_true", help="report the count weighted by 1/#G(Q)")
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        cfg = load_config(args.config)
        if args.command == "invariants":
            return cmd_invariants(cfg, out)
        if args.command == "scan":
            return cmd_scan(cfg, out)
        if args.command == "count":
            return cmd_count(cfg, out, args.fresh)
        if args.command == "predict":
            return cmd_predict(cfg, out)
        if args.command == "verify":
            return cmd_verify(cfg, out)
        if args.command == "local":
            return cmd_local(cfg, out, args.qmax, args.s)
        if args.command == "torsors":
            return cmd_torsors(cfg, out, args.max_height, args.condition, args.weighted)
    except (UsageError, ValueError, TruncationError, CapabilityError, ResourceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
