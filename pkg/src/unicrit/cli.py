"""Command-line front end.

Every command prints one JSON document (or a text/DOT/CSV rendering) and
exits 0 on a definite answer, 2 when the honest answer is "unknown", and 1
on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from contextlib import nullcontext
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from dataclasses import field as dc_field
from fractions import Fraction
from importlib import resources

from . import __version__
from .dynamics import UnicriticalMap, orbit
from .errors import (
    ConfigError,
    FactorizationTimeout,
    NotASolution,
    PrecisionExhausted,
    StepBudgetExhausted,
    ThresholdsNotMet,
    UnicritError,
    UnsupportedDomain,
)
from .galois import (
    SequencePrefix,
    critical_values,
    good_primitive_primes,
    maximality_certificate,
    monte_carlo_big_galois,
    new_ramified_prime,
)
from .heights import check_fermat_catalan_bound, fc_search_function_field, height, radical
from .irreducibility import (
    certify_word,
    enumerate_words,
    guard_prefix,
    semigroup_growth_exponent,
    stability_certificate,
)
from .numdom import FUNCTION_FIELD, EffectiveConstants, FieldContext, parse_field, set_factor_effort
from .portraits import UNKNOWN, build_portrait, classify_skeleton, predicted_skeleton, skeletonize
from .preper import preperiodic_points

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_UNKNOWN = 2

CONSTANT_NAMES = ("B1", "B2", "C1", "D1", "C3", "D3", "C4", "D4", "C5", "D5", "D6", "D8")
INT_CONSTANTS = {"D1", "D3", "D4", "D5", "D6", "D8"}
FORMATS = ("json", "text", "dot", "csv")


class UsageError(Exception):
    pass


# -- configuration ------------------------------------------------------------


@dataclass
class RunConfig:
    field: str = "Q"
    genus: int = 0
    constants: dict = dc_field(default_factory=dict)
    trial_limit: int = 10**6
    rho_iterations: int = 10**6
    tolerance: float = 1e-12
    seed: int = 0
    format: str = "json"
    jobs: int = 1
    N_power: int = 8

    def context(self) -> FieldContext:
        try:
            base = parse_field(self.field, genus=self.genus)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if base.kind == FUNCTION_FIELD:
            if self.constants:
                raise ConfigError(
                    f"constants {sorted(self.constants)} are fixed by formula over Q(t) and cannot be overridden"
                )
            consts = EffectiveConstants.function_field(self.genus, N_power=self.N_power)
        else:
            consts = EffectiveConstants.number_field(N_power=self.N_power, **self.constants)
        return replace(base, constants=consts)

    def as_dict(self) -> dict:
        return {
            "field": self.field,
            "genus": self.genus,
            "constants": dict(sorted(self.constants.items())),
            "trial_limit": self.trial_limit,
            "rho_iterations": self.rho_iterations,
            "tolerance": self.tolerance,
            "seed": self.seed,
            "N_power": self.N_power,
        }


def _number(text: str, integer: bool):
    try:
        return int(text) if integer else float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"not a number: {text!r}") from None


def _apply_setting(cfg: RunConfig, key: str, value: str) -> None:
    key = key.strip()
    value = value.strip()
    if key in CONSTANT_NAMES:
        cfg.constants[key] = _number(value, key in INT_CONSTANTS)
    elif key == "field":
        cfg.field = value
    elif key in ("genus", "trial_limit", "rho_iterations", "seed", "jobs", "N_power"):
        setattr(cfg, key, _number(value, True))
    elif key == "tolerance":
        cfg.tolerance = _number(value, False)
    elif key == "format":
        if value not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}")
        cfg.format = value
    else:
        raise ConfigError(f"unknown setting {key!r}")


def read_config_file(path: str, cfg: RunConfig | None = None) -> RunConfig:
    """Load key=value lines; blank lines and '#' comments are skipped."""
    cfg = cfg or RunConfig()
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key, value = line.split("=", 1)
        _apply_setting(cfg, key, value)
    return cfg


def build_config(args) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        read_config_file(args.config, cfg)
    for name in ("field", "seed", "jobs", "format", "tolerance", "genus"):
        value = getattr(args, name, None)
        if value is not None:
            setattr(cfg, name, value)
    for item in args.set or []:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        _apply_setting(cfg, *item.split("=", 1))
    if cfg.jobs < 1:
        raise ConfigError("--jobs must be at least 1")
    return cfg


# -- parsing helpers ----------------------------------------------------------


def _element(ctx: FieldContext, text: str):
    try:
        return ctx.parse(text)
    except (ValueError, ZeroDivisionError, UnicritError) as exc:
        raise UsageError(f"cannot parse {text!r} as an element of {ctx.name}: {exc}") from None


def _map(ctx: FieldContext, d: int, c_text: str) -> UnicriticalMap:
    if d < 2:
        raise UsageError("--d must be at least 2")
    return UnicriticalMap(d, _element(ctx, c_text), ctx)


def parse_map_list(ctx: FieldContext, spec: str) -> list[UnicriticalMap]:
    """Parse 'd:c,d:c,...' into maps."""
    maps = []
    for item in spec.split(","):
        item = item.strip()
        if ":" not in item:
            raise UsageError(f"map {item!r} should look like d:c, e.g. 2:-1")
        d_text, c_text = item.split(":", 1)
        try:
            d = int(d_text)
        except ValueError:
            raise UsageError(f"degree {d_text!r} is not an integer") from None
        maps.append(_map(ctx, d, c_text))
    if not maps:
        raise UsageError("empty map list")
    return maps


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of integers, got {text!r}") from None


def _pmap(func, items, jobs: int, cfg: RunConfig) -> list:
    """Order-preserving map, optionally over worker processes."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs, initializer=set_factor_effort,
                             initargs=(cfg.trial_limit, cfg.rho_iterations)) as pool:
        return list(pool.map(func, items))


# -- commands -----------------------------------------------------------------
# Each returns (status, result, criteria); status "unknown" maps to exit 2.


def _height_item(args):
    ctx, text, tol = args
    out = {"element": text}
    try:
        alpha = ctx.parse(text)
    except (ValueError, ZeroDivisionError, UnicritError) as exc:
        return {**out, "error": f"parse: {exc}"}
    out["element"] = ctx.format(alpha)
    try:
        h = height(alpha, ctx, tol)
        out["height"] = h.as_dict()
        out["exactness"] = h.exactness
    except (PrecisionExhausted, FactorizationTimeout) as exc:
        out["height"] = None
        out["exactness"] = "unknown"
        out["error"] = str(exc)
    try:
        out["radical"] = radical(alpha, ctx).as_dict() if alpha != 0 else None
    except (UnsupportedDomain, FactorizationTimeout) as exc:
        out["radical"] = None
        out["radical_note"] = str(exc)
    return out


def cmd_heights(args, cfg, ctx):
    if args.elements:
        texts = args.elements
    else:
        stream = open(args.input, encoding="utf-8") if args.input else nullcontext(sys.stdin)
        with stream as fh:
            texts = [line.strip() for line in fh if line.strip()]
    items = _pmap(_height_item, [(ctx, t, cfg.tolerance) for t in texts], cfg.jobs, cfg)
    status = "unknown" if any("error" in it for it in items) else "ok"
    return status, {"elements": items}, ["Weil height via valuations, degree, or Mahler measure enclosure"]


def cmd_orbit(args, cfg, ctx):
    phi = _map(ctx, args.d, args.c)
    alpha = _element(ctx, args.alpha)
    try:
        res = orbit(phi, alpha, max_steps=args.max_steps)
    except StepBudgetExhausted as exc:
        return "unknown", {"classification": "unknown", "reason": str(exc)}, []
    out = {
        "classification": res.kind,
        "orbit": [ctx.format(x) for x in res.orbit],
        "tail": res.tail,
        "period": res.period,
        "escape_index": res.escape_index,
        "certificate": res.certificate,
        "exactness": "exact",
    }
    crit = ["repeated point in an exact orbit"] if res.is_preperiodic else ["height exceeds the escape window"]
    return "ok", out, crit


def _box_reason(box) -> str:
    if box is None or not box.empty:
        return ""
    return "denominator valuation obstruction: " + box.reason


def cmd_preper(args, cfg, ctx):
    c = _element(ctx, args.c)
    if args.d < 2:
        raise UsageError("--d must be at least 2")
    hints = [_element(ctx, h) for h in args.hint or []]
    pset = preperiodic_points(args.d, c, ctx, hints)
    out = {
        "points": [ctx.format(p) for p in pset.points],
        "completeness": pset.completeness,
        "box": pset.box.as_dict() if pset.box else None,
        "notes": pset.notes,
    }
    if pset.box is not None and pset.box.empty:
        out["reason"] = _box_reason(pset.box)
    crit = {
        "Q": ["local denominator condition and archimedean bound via rho_d"],
        "Qt": ["fixed-point fiber classification over function fields"],
    }.get(ctx.kind, ["height-zero points and fixed-point fiber"])
    return "ok", out, crit


def cmd_portrait(args, cfg, ctx):
    c = _element(ctx, args.c)
    if args.d < 2:
        raise UsageError("--d must be at least 2")
    hints = [_element(ctx, h) for h in args.hint or []]
    phi = UnicriticalMap(args.d, c, ctx)
    pset = preperiodic_points(args.d, c, ctx, hints)
    portrait = build_portrait(phi, pset.points)
    skel = skeletonize(portrait)
    label = classify_skeleton(skel)
    out = {
        "vertices": portrait.labels(),
        "edges": [list(e) for e in portrait.edges],
        "skeleton": {"vertices": skel.labels(), "kinds": skel.kinds, "succ": skel.succ},
        "skeleton_label": label,
        "completeness": pset.completeness,
    }
    crit = ["skeleton matched against the reference graphs up to isomorphism"]
    if args.predict:
        if c == 0:
            out["prediction"] = None
            out["prediction_note"] = "no prediction for c = 0"
        else:
            pred = predicted_skeleton(args.d, c, ctx, hints)
            out["prediction"] = {"label": pred.label, "notes": pred.notes}
            out["certificate"] = pred.certificate
            out["prediction_agrees"] = pred.label == label
            crit.append("decision tree on roots of unity: " + pred.certificate.get("criterion", ""))
    if args.dot_file:
        with open(args.dot_file, "w", encoding="utf-8") as fh:
            fh.write(portrait.to_dot())
    status = "unknown" if label == UNKNOWN else "ok"
    return status, out, crit, portrait


def cmd_stability(args, cfg, ctx):
    phi = _map(ctx, args.d, args.c)
    cert = stability_certificate(phi, args.N)
    out = cert.as_dict(ctx)
    label = {"StableUpTo": f"StableUpTo({cert.N})"}.get(cert.verdict, cert.verdict)
    out["label"] = label
    crit = {
        "Stable": ["function-field stability above the degree and height thresholds"],
        "StableUpTo": ["power criterion for compositions, applied to each iterate"],
        "BaseReducible": ["binomial irreducibility criterion"],
        "PowerAtIterate": ["power criterion inconclusive"],
    }[cert.verdict]
    status = "unknown" if cert.verdict == "PowerAtIterate" else "ok"
    return status, out, crit


def _certify_item(args):
    word, maps, method = args
    v = certify_word([maps[i] for i in word], method)
    return [list(word), v.status]


def cmd_semigroup(args, cfg, ctx):
    degrees = _int_list(args.degrees)
    coeffs = [c.strip() for c in args.coeffs.split(",")] if args.coeffs else []
    if not degrees:
        raise UsageError("--degrees is empty")
    if any(d < 2 for d in degrees):
        raise UsageError("degrees must be at least 2")
    growth = semigroup_growth_exponent(degrees)
    words = enumerate_words(degrees, args.bound)
    out = {
        "degrees": degrees,
        "bound": args.bound,
        "growth_exponent": {"lo": growth.lo, "hi": growth.hi, "exactness": "interval"},
        "word_count": len(words),
    }
    if not growth.single_generator:
        out["normalized_count"] = {"value": len(words) / args.bound**growth.value, "exactness": "float"}
    if coeffs:
        if len(coeffs) != len(degrees):
            raise UsageError("--coeffs must list one parameter per degree")
        maps = [_map(ctx, d, c) for d, c in zip(degrees, coeffs)]
        rows = _pmap(_certify_item, [(w, maps, args.method) for w in words], cfg.jobs, cfg)
        tally = {"irreducible": 0, "reducible": 0, "inconclusive": 0}
        for _, st in rows:
            tally[st] += 1
        out["maps"] = [str(m) for m in maps]
        out["verdicts"] = rows
        out["tally"] = tally
    return "ok", out, ["growth exponent of word counts", "power criterion along each word"]


def cmd_guard(args, cfg, ctx):
    maps = parse_map_list(ctx, args.set_spec)
    consts = ctx.constants
    if consts.C3 is None or consts.D3 is None:
        raise UsageError("guard needs the thresholds C3 and D3; pass --set C3=... --set D3=... or a config file")
    hints = [_element(ctx, h) for h in args.hint or []]
    try:
        g = guard_prefix(maps, args.N, args.strengthened, hints)
    except ThresholdsNotMet as exc:
        return "unknown", {"status": "not-applicable", "reason": str(exc)}, []
    out = {
        "status": g.status,
        "prefix": [list(p) for p in g.prefix],
        "alternatives": [[list(p) for p in alt] for alt in g.alternatives],
        "rationale": g.rationale,
        "exceptional": g.exceptional,
    }
    return "ok", out, ["guard prefix forcing irreducibility of every extension: " + g.rationale]


def cmd_galois_certify(args, cfg, ctx):
    base = parse_map_list(ctx, args.sequence)
    n = args.n
    if n < 1:
        raise UsageError("--n must be positive")
    maps = [base[i % len(base)] for i in range(n)]
    seq = SequencePrefix(maps)
    try:
        values = critical_values(seq, n)
        primes = good_primitive_primes(seq, n)
        cert = maximality_certificate(seq, n)
        ramified = new_ramified_prime(seq, n, value_only=args.value_only)
    except FactorizationTimeout as exc:
        return "unknown", {"status": "unknown", "reason": str(exc)}, []
    out = {
        "critical_values": [ctx.format(v) for v in values],
        "primes": [r.as_dict() for r in primes],
        "maximality": cert.as_dict() if cert else None,
        "new_ramified": [r if isinstance(r, dict) else r.as_dict() for r in ramified],
        "status": "maximal" if cert else "unknown",
    }
    crit = []
    if cert:
        crit.append("good primitive prime divisor with d-th roots of unity in the base")
    if any(not isinstance(r, dict) for r in ramified):
        crit.append("Newton polygon with a first segment of non-integral slope")
    return ("ok" if cert else "unknown"), out, crit


def cmd_galois_sim(args, cfg, ctx):
    maps = parse_map_list(ctx, args.set_spec)
    if args.weights:
        try:
            weights = [Fraction(w) for w in args.weights.split(",")]
        except (ValueError, ZeroDivisionError):
            raise UsageError("--weights must be numbers") from None
        if len(weights) != len(maps) or any(w <= 0 for w in weights):
            raise UsageError("--weights needs one positive weight per map")
    else:
        weights = [Fraction(1)] * len(maps)
    total = sum(weights)
    weights = [float(w / total) for w in weights]
    rep = monte_carlo_big_galois(maps, weights, args.trials, args.horizon, args.k, seed=cfg.seed, jobs=cfg.jobs)
    out = {
        "summary": rep.summary,
        "guard": _jsonable(rep.guard),
        "trials": rep.trials,
        "horizon": rep.horizon,
        "k": rep.k,
        "seed": rep.seed,
    }
    return "ok", out, ["power criterion along each sampled prefix", "good primitive prime divisors per level"]


def cmd_fc_check(args, cfg, ctx):
    if args.search:
        a, b = _element(ctx, args.a), _element(ctx, args.b)
        try:
            sols = fc_search_function_field(a, b, args.m, args.n, args.deg_bound, args.coeff_bound, ctx)
        except (ValueError, UnsupportedDomain) as exc:
            raise UsageError(str(exc)) from None
        reports = []
        for x, y in sols:
            rep = check_fermat_catalan_bound(a, b, args.m, args.n, x, y, ctx)
            reports.append({"x": ctx.format(x), "y": ctx.format(y), **rep.as_dict()})
        status = "unknown" if any(r["passes"] is None for r in reports) else "ok"
        return status, {"solutions": reports}, ["uniform height bound for generalized Fermat-Catalan equations"]
    for name in ("x", "y"):
        if getattr(args, name) is None:
            raise UsageError(f"--{name} is required unless --search is given")
    vals = [_element(ctx, getattr(args, k)) for k in ("a", "b", "x", "y")]
    try:
        rep = check_fermat_catalan_bound(vals[0], vals[1], args.m, args.n, vals[2], vals[3], ctx)
    except NotASolution as exc:
        raise UsageError(str(exc)) from None
    out = rep.as_dict()
    status = "unknown" if rep.passes is None else "ok"
    return status, out, ["uniform height bound for generalized Fermat-Catalan equations"]


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    return str(obj)


# -- parser -------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--field", help="Q, Qt, or cyclotomic:N (default Q)")
    p.add_argument("--genus", type=int, help="genus for function-field constants")
    p.add_argument("--config", help="key=value file with defaults")
    p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a setting or constant")
    p.add_argument("--seed", type=int)
    p.add_argument("--jobs", type=int)
    p.add_argument("--tolerance", type=float)
    p.add_argument("--format", choices=FORMATS)


def _map_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--d", type=int, required=True, help="degree")
    p.add_argument("--c", required=True, help="parameter c")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="unicrit", description="Arithmetic dynamics of x^d + c.")
    parser.add_argument("--version", action="version", version=f"unicrit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    h = sub.add_parser("heights", help="heights and radicals of field elements")
    hsub = h.add_subparsers(dest="action", required=True, parser_class=_Parser)
    he = hsub.add_parser("eval", help="one element per line from --input or stdin")
    he.add_argument("elements", nargs="*")
    he.add_argument("--input")
    _common(he)
    he.set_defaults(handler=cmd_heights)

    o = sub.add_parser("orbit", help="classify the orbit of a point")
    _map_args(o)
    o.add_argument("--alpha", required=True)
    o.add_argument("--max-steps", type=int, default=1_000_000)
    _common(o)
    o.set_defaults(handler=cmd_orbit)

    pp = sub.add_parser("preper", help="preperiodic points")
    _map_args(pp)
    pp.add_argument("--hint", action="append", help="candidate fixed point (cyclotomic fields)")
    _common(pp)
    pp.set_defaults(handler=cmd_preper)

    po = sub.add_parser("portrait", help="preperiodic portrait and skeleton label")
    _map_args(po)
    po.add_argument("--predict", action="store_true", help="also run the decision tree on (d, c)")
    po.add_argument("--dot", dest="dot_file", help="write the portrait in DOT format to this file")
    po.add_argument("--hint", action="append")
    _common(po)
    po.set_defaults(handler=cmd_portrait)

    st = sub.add_parser("stability", help="certify irreducible iterates")
    _map_args(st)
    st.add_argument("--N", type=int, default=None)
    _common(st)
    st.set_defaults(handler=cmd_stability)

    sg = sub.add_parser("semigroup", help="word counts and irreducibility in a semigroup")
    sgsub = sg.add_subparsers(dest="action", required=True, parser_class=_Parser)
    sc = sgsub.add_parser("scan")
    sc.add_argument("--degrees", required=True, help="comma-separated degrees")
    sc.add_argument("--coeffs", help="comma-separated parameters, one per degree")
    sc.add_argument("--bound", type=int, required=True)
    sc.add_argument("--method", choices=("capelli", "factor", "hybrid"), default="capelli")
    _common(sc)
    sc.set_defaults(handler=cmd_semigroup)

    gd = sub.add_parser("guard", help="guard prefix for a generating set")
    gd.add_argument("--set-spec", required=True, help="maps as d:c,d:c,...")
    gd.add_argument("--N", type=int, default=None)
    gd.add_argument("--strengthened", action="store_true")
    gd.add_argument("--hint", action="append")
    _common(gd)
    gd.set_defaults(handler=cmd_guard)

    ga = sub.add_parser("galois", help="Galois certificates and sampling")
    gasub = ga.add_subparsers(dest="action", required=True, parser_class=_Parser)
    gc = gasub.add_parser("certify")
    gc.add_argument("--sequence", required=True, help="maps d:c,...; repeated cyclically to length n")
    gc.add_argument("--n", type=int, required=True)
    gc.add_argument("--value-only", action="store_true", help="skip the polygon when expansion is too large")
    _common(gc)
    gc.set_defaults(handler=cmd_galois_certify)
    gs = gasub.add_parser("sim")
    gs.add_argument("--set-spec", required=True)
    gs.add_argument("--weights")
    gs.add_argument("--trials", type=int, default=100)
    gs.add_argument("--horizon", type=int, default=6)
    gs.add_argument("--k", type=int, default=1, help="maximal levels required per trial")
    _common(gs)
    gs.set_defaults(handler=cmd_galois_sim)

    fc = sub.add_parser("fc-check", help="height bound for a*x^m + b*y^n = 1")
    fc.add_argument("--a", required=True)
    fc.add_argument("--b", required=True)
    fc.add_argument("--m", type=int, required=True)
    fc.add_argument("--n", type=int, required=True)
    fc.add_argument("--x")
    fc.add_argument("--y")
    fc.add_argument("--search", action="store_true", help="search polynomial solutions in a box")
    fc.add_argument("--deg-bound", type=int, default=1)
    fc.add_argument("--coeff-bound", type=int, default=2)
    _common(fc)
    fc.set_defaults(handler=cmd_fc_check)
    return parser


def load_schema(name: str) -> dict:
    """Shipped JSON schema: 'envelope' or a command name."""
    return json.loads(resources.files("unicrit").joinpath("schemas", f"{name}.json").read_text(encoding="utf-8"))


# -- rendering ----------------------------------------------------------------


def _render_text(doc: dict) -> str:
    lines = []

    def walk(prefix, obj):
        if isinstance(obj, dict):
            for k in sorted(obj):
                walk(f"{prefix}.{k}" if prefix else k, obj[k])
        elif isinstance(obj, list) and obj and any(isinstance(x, (dict, list)) for x in obj):
            for i, x in enumerate(obj):
                walk(f"{prefix}[{i}]", x)
        else:
            lines.append(f"{prefix}: {json.dumps(obj, sort_keys=True)}")

    walk("", doc)
    return "\n".join(lines) + "\n"


def _render_csv(command: str, result: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if command == "heights":
        w.writerow(["element", "height", "lo", "hi", "exactness", "radical"])
        for it in result["elements"]:
            h = it.get("height") or {}
            r = it.get("radical") or {}
            w.writerow([it["element"], h.get("value"), h.get("lo"), h.get("hi"), it.get("exactness"), r.get("value")])
    elif command in ("preper", "portrait"):
        w.writerow(["point"])
        for p in result.get("points") or result.get("vertices"):
            w.writerow([p])
    elif command == "semigroup" and "verdicts" in result:
        w.writerow(["word", "status"])
        for word, status in result["verdicts"]:
            w.writerow([" ".join(map(str, word)), status])
    else:
        raise UsageError(f"csv output is not available for {command}")
    return buf.getvalue()


def render(cfg: RunConfig, command: str, status: str, result: dict, criteria: list, ctx, portrait=None) -> str:
    if cfg.format == "dot":
        if portrait is None:
            raise UsageError("dot output is only available for portrait")
        return portrait.to_dot()
    if cfg.format == "csv":
        return _render_csv(command, result)
    doc = {
        "command": command,
        "field": ctx.name,
        "status": status,
        "result": _jsonable(result),
        "provenance": {
            "package": "unicrit",
            "version": __version__,
            "criteria": criteria,
            "constants": _jsonable(ctx.constants.as_dict()),
            "constants_effective": ctx.constants.exact,
            "config": cfg.as_dict(),
        },
    }
    if cfg.format == "text":
        return _render_text(doc)
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


# options whose values are field elements and may start with '-', e.g. --c -3/4
ELEMENT_OPTIONS = {"--c", "--alpha", "--a", "--b", "--x", "--y", "--hint"}


def _join_negative_values(argv: list[str]) -> list[str]:
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if tok in ELEMENT_OPTIONS and nxt is not None and nxt.startswith("-") and not nxt.startswith("--"):
            out.append(f"{tok}={nxt}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_join_negative_values(argv))
    try:
        cfg = build_config(args)
        ctx = cfg.context()
        set_factor_effort(cfg.trial_limit, cfg.rho_iterations)
        outcome = args.handler(args, cfg, ctx)
        status, result, criteria = outcome[:3]
        portrait = outcome[3] if len(outcome) > 3 else None
        command = args.command
        sys.stdout.write(render(cfg, command, status, result, criteria, ctx, portrait))
    except (UsageError, ConfigError) as exc:
        print(f"unicrit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FactorizationTimeout, PrecisionExhausted, StepBudgetExhausted) as exc:
        print(f"unicrit: unknown: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN
    except UnicritError as exc:
        print(f"unicrit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_UNKNOWN if status == "unknown" else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
