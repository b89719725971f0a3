"""Command-line interface: ``python -m tensorcat <command> ...``.

Exit codes: 0 success, 1 a checked property failed, 2 usage or parse
error, 3 a budget or cap was exceeded.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field

from . import groups as _groups
from .catalog import GroupSpec, build, load_corpus, parse_spec, standard_corpus
from .actions import conjugation_pair, normal_subgroup_pair, trivial_pair
from .errors import (CapExceeded, InvalidAction, InvalidSpec, KappaNotWellDefined, LimitExceeded,
                     NotACocycle, ParseError, TensorcatError, UnknownSuite)
from .fp.enumeration import DEFAULT_MAX_COSETS, Limits
from .groups import (abelian_invariants, abelianization, center, derived_length, exponent,
                     is_nilpotent, is_solvable, is_supersolvable, nilpotency_class, normal_subgroups)
from .tensor import (GENERATOR_CAP, SQUARE_CAP, derivative_subgroup, m0_and_bogomolov,
                     tensor_product, tensor_square)
from .verify import (REQUIRED_SUITES, SUITES, Caps, explore_summary, run_suite)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

# hard limits; TENSORCAT_CAPS raises them for stretch runs
HARD_CAPS = {"max_order": 64, "square_cap": SQUARE_CAP, "generator_cap": GENERATOR_CAP,
             "max_cosets": DEFAULT_MAX_COSETS, "timeout_secs": 3600.0}


class UsageError(Exception):
    pass


def hard_caps(env: str | None = None) -> dict:
    """Hard caps, updated from ``TENSORCAT_CAPS`` (JSON object or ``key=value,...``)."""
    caps = dict(HARD_CAPS)
    text = os.environ.get("TENSORCAT_CAPS", "") if env is None else env
    text = text.strip()
    if not text:
        return caps
    if text.startswith("{"):
        try:
            pairs = json.loads(text).items()
        except (json.JSONDecodeError, AttributeError) as e:
            raise UsageError(f"TENSORCAT_CAPS is not a JSON object: {e}") from None
    else:
        pairs = []
        for item in text.split(","):
            if "=" not in item:
                raise UsageError(f"TENSORCAT_CAPS entry {item!r} is not key=value")
            k, v = item.split("=", 1)
            pairs.append((k.strip(), v.strip()))
    for k, v in pairs:
        if k not in caps:
            raise UsageError(f"TENSORCAT_CAPS: unknown cap {k!r} (known: {', '.join(caps)})")
        try:
            caps[k] = type(HARD_CAPS[k])(v)
        except (TypeError, ValueError):
            raise UsageError(f"TENSORCAT_CAPS: {k} must be a number, got {v!r}") from None
    return caps


@dataclass
class CliConfig:
    command: str
    specs: list[str] = field(default_factory=list)
    fmt: str = "text"
    max_order: int | None = None
    max_cosets: int = DEFAULT_MAX_COSETS
    timeout_secs: float = 120.0
    threads: int = 1
    suites: list[str] = field(default_factory=list)
    corpus: str | None = None
    seed: int = 0
    action: str | None = None
    normal: list[int] | None = None
    timings: bool = False

    def caps(self, hard: dict) -> Caps:
        def within(name, value, limit):
            if value > limit:
                raise UsageError(f"--{name.replace('_', '-')} {value} exceeds the hard cap {limit} "
                                 "(raise it with TENSORCAT_CAPS)")
            return value
        if self.command == "verify":
            max_order = within("max_order", self.max_order or 32, hard["max_order"])
            square_cap = hard["square_cap"]
        else:
            max_order = hard["max_order"]
            square_cap = within("max_order", self.max_order or SQUARE_CAP, hard["square_cap"])
        return Caps(max_order=max_order,
                    max_cosets=within("max_cosets", self.max_cosets, hard["max_cosets"]),
                    timeout_secs=within("timeout_secs", self.timeout_secs, hard["timeout_secs"]),
                    square_cap=square_cap, generator_cap=hard["generator_cap"])


def _read_spec(text: str) -> GroupSpec:
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as fh:
            return parse_spec(fh.read())
    return parse_spec(text)


def _limits(caps: Caps) -> Limits:
    return Limits(max_cosets=caps.max_cosets, max_time=caps.timeout_secs)


def _inv(x):
    return None if x is None else x.to_list()


def cmd_info(cfg: CliConfig, caps: Caps) -> tuple[dict, int]:
    spec = _read_spec(cfg.specs[0])
    G = build(spec)
    _, _, ab = abelianization(G)
    rep = {"spec": spec.to_json(), "label": spec.label(), "order": G.order,
           "abelian": G.is_abelian(), "nilpotent": is_nilpotent(G), "class": nilpotency_class(G),
           "solvable": is_solvable(G), "derived_length": derived_length(G),
           "supersolvable": is_supersolvable(G), "abelianization": ab.to_list(),
           "exponent": exponent(G), "center_order": center(G).order}
    return rep, EXIT_OK


def _pair(cfg: CliConfig, caps: Caps):
    specs = [_read_spec(s) for s in cfg.specs]
    if cfg.normal is not None:
        if len(specs) != 1:
            raise UsageError("--normal takes exactly one group spec")
        X = build(specs[0])
        if X.order > caps.square_cap:
            raise CapExceeded("|X| for normal-subgroup pairs", X.order, caps.square_cap)
        subs = normal_subgroups(X)
        try:
            A, B = (subs[i] for i in cfg.normal)
        except IndexError:
            raise UsageError(f"normal subgroup index out of range (0..{len(subs) - 1})") from None
        return specs, normal_subgroup_pair(A, B)
    if len(specs) == 1:
        if cfg.action not in (None, "conjugation"):
            raise UsageError("a single spec means the conjugation square; give two specs for other actions")
        G = build(specs[0])
        if G.order > caps.square_cap:
            raise CapExceeded("|G| for a tensor square", G.order, caps.square_cap)
        return specs, conjugation_pair(G)
    if len(specs) != 2:
        raise UsageError("tensor takes one or two group specs")
    if cfg.action not in (None, "trivial"):
        raise UsageError("two different groups support --action trivial only (or use --normal)")
    return specs, trivial_pair(build(specs[0]), build(specs[1]))


def cmd_tensor(cfg: CliConfig, caps: Caps) -> tuple[dict, int]:
    specs, pair = _pair(cfg, caps)
    res = tensor_product(pair, limits=_limits(caps), cap=caps.generator_cap)
    dg, dh = derivative_subgroup(pair, "left"), derivative_subgroup(pair, "right")
    rep = {"specs": [s.to_json() for s in specs], "G_order": pair.G.order, "H_order": pair.H.order,
           "tensor_order": res.order, "route": res.route,
           "D_H(G)_order": dg.order, "D_G(H)_order": dh.order}
    if res.materialized:
        ker = res.phi.kernel()
        rep["ker_phi"] = abelian_invariants(ker).to_list()
        rep["tensor_abelian"] = res.group.is_abelian()
        rep["tensor_class"] = nilpotency_class(res.group)
    else:
        rep["tensor_invariants"] = res.invariants.to_list()
    if cfg.normal is not None:
        rep["normal"] = list(cfg.normal)
    return rep, EXIT_OK


def cmd_square(cfg: CliConfig, caps: Caps) -> tuple[dict, int]:
    spec = _read_spec(cfg.specs[0])
    G = build(spec)
    ts = tensor_square(G, cap=caps.square_cap, generator_cap=caps.generator_cap, limits=_limits(caps))
    rep = {"spec": spec.to_json(), "label": spec.label(), "order": G.order,
           "tensor_order": ts.order, "route": ts.route}
    if not ts.materialized:
        rep["tensor_invariants"] = ts.invariants.to_list()
        return rep, EXIT_OK
    mr = m0_and_bogomolov(G, ts=ts, cap=caps.square_cap, generator_cap=caps.generator_cap,
                          limits=_limits(caps))
    d = mr.to_dict()
    rep.update({"wedge_order": d["wedge_order"], "commutator_order": d["commutator_order"],
                "J": d.get("J"), "nabla": d.get("nabla"), "schur": d["schur"],
                "m0_order": d["m0_order"], "bogomolov": d["bogomolov"],
                "tensor_abelian": ts.group.is_abelian(), "tensor_class": nilpotency_class(ts.group)})
    return rep, EXIT_OK


def cmd_verify(cfg: CliConfig, caps: Caps, out) -> int:
    names = cfg.suites or list(SUITES)
    for n in names:
        if n not in SUITES:
            raise UnknownSuite(f"unknown suite {n!r}; known: {', '.join(SUITES)}")
    corpus = load_corpus(cfg.corpus) if cfg.corpus else standard_corpus(caps.max_order)
    code = EXIT_OK
    summaries = []
    for n in names:
        rep = run_suite(n, corpus, caps, cfg.threads)
        s = rep.summary()
        if n == "explore-solvable-length":
            s.update(explore_summary(rep))
        summaries.append(s)
        if cfg.fmt == "json":
            if rep.records:
                print(rep.to_jsonl(timings=cfg.timings), file=out)
        else:
            print(rep.table(), file=out)
            print(file=out)
        if n in REQUIRED_SUITES and not rep.ok:
            code = EXIT_FAIL
    if cfg.fmt == "json":
        print(json.dumps({"summary": summaries, "exit": code}, sort_keys=True), file=out)
    else:
        for s in summaries:
            extra = ""
            if "max_derived_length_square" in s:
                extra = f"  max derived length of G(x)G: {s['max_derived_length_square']}"
            print(f"{s['suite']:<26} {s['pass']:>4} pass {s['fail']:>3} fail "
                  f"{s['skipped (budget)']:>3} skipped {s['observed']:>3} observed{extra}", file=out)
    return code


def cmd_corpus(cfg: CliConfig, caps: Caps) -> tuple[dict, int]:
    corpus = load_corpus(cfg.corpus) if cfg.corpus else standard_corpus(cfg.max_order or 32)
    return {"specs": [s.label() for s in corpus], "count": len(corpus)}, EXIT_OK


def _emit(rep: dict, fmt: str, out):
    if fmt == "json":
        print(json.dumps(rep, sort_keys=True), file=out)
        return
    for k, v in rep.items():
        if isinstance(v, (dict, list)) and k in ("spec", "specs"):
            v = json.dumps(v, sort_keys=True)
        print(f"{k}: {v}", file=out)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--max-order", type=int, default=None,
                        help="corpus order bound for verify; |G| cap for tensor/square")
    common.add_argument("--max-cosets", type=int, default=DEFAULT_MAX_COSETS)
    common.add_argument("--timeout-secs", type=float, default=120.0)
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    common.add_argument("--seed", type=int, default=0, help="seed for sampled associativity checks")
    common.add_argument("-v", "--verbose", action="store_true")
    p = argparse.ArgumentParser(prog="tensorcat", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("info", parents=[common], help="group facts")
    s.add_argument("spec")
    s = sub.add_parser("tensor", parents=[common], help="G (x) H for a compatible pair")
    s.add_argument("specs", nargs="+")
    s.add_argument("--action", choices=("conjugation", "trivial"))
    s.add_argument("--normal", type=int, nargs=2, metavar=("I", "J"),
                   help="pair of normal subgroups (indices in the sorted lattice) of one group")
    s = sub.add_parser("square", parents=[common], help="tensor square, exterior square, multipliers")
    s.add_argument("spec")
    s = sub.add_parser("verify", parents=[common], help="run property suites")
    s.add_argument("--suite", action="append", default=[], choices=list(SUITES))
    s.add_argument("--corpus", help="corpus file (JSON list or one inline spec per line)")
    s.add_argument("--timings", action="store_true", help="include per-instance seconds in JSON")
    s = sub.add_parser("corpus", parents=[common], help="list the corpus specs")
    s.add_argument("--corpus", help="corpus file to parse instead of the standard corpus")
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    cfg = CliConfig(command=args.command, fmt=args.format, max_order=args.max_order,
                    max_cosets=args.max_cosets, timeout_secs=args.timeout_secs,
                    threads=max(1, args.threads), seed=args.seed)
    if args.command in ("info", "square"):
        cfg.specs = [args.spec]
    elif args.command == "tensor":
        cfg.specs, cfg.action, cfg.normal = args.specs, args.action, args.normal
    elif args.command == "verify":
        cfg.suites, cfg.corpus, cfg.timings = args.suite, args.corpus, args.timings
    elif args.command == "corpus":
        cfg.corpus = args.corpus
    _groups.ASSOC_SEED = cfg.seed
    try:
        caps = cfg.caps(hard_caps())
        if cfg.command == "verify":
            return cmd_verify(cfg, caps, out)
        handler = {"info": cmd_info, "tensor": cmd_tensor, "square": cmd_square,
                   "corpus": cmd_corpus}[cfg.command]
        rep, code = handler(cfg, caps)
        _emit(rep, cfg.fmt, out)
        return code
    except (UsageError, ParseError, InvalidSpec, UnknownSuite, InvalidAction, NotACocycle,
            OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (CapExceeded, LimitExceeded) as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (AssertionError, KappaNotWellDefined) as e:
        print(f"check failed: {e}", file=sys.stderr)
        return EXIT_FAIL
    except TensorcatError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
