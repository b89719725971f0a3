"""Property suites that check the tensor-product theorems over a corpus of groups.

Each suite picks its instances from the corpus, computes the relevant
objects and records whether the asserted property holds.  Records are
plain dictionaries so they serialise directly as JSON lines.
"""
from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import ceil
from typing import Callable, Iterable, Sequence

import numpy as np

from .abelian import exterior_invariants, tensor_invariants
from .actions import normal_subgroup_pair, trivial_pair
from .catalog import (GroupSpec, build, is_metacyclic_extension_spec, is_metacyclic_spec,
                      standard_corpus)
from .errors import CapExceeded, LimitExceeded, UnknownSuite
from .fp.enumeration import DEFAULT_MAX_COSETS, Limits, enumerate_cosets, presentation_of
from .groups import (FiniteGroup, Subgroup, abelian_invariants, abelianization, commutator_subgroup,
                     derived_length, is_nilpotent, is_solvable, is_supersolvable, nilpotency_class,
                     normal_subgroups, quotient, subgroup_generated)
from .tensor import (GENERATOR_CAP, SQUARE_CAP, TensorResult, derivative_subgroup, exterior_square,
                     kappa_and_J, m0_and_bogomolov, nabla_consistency, phi_crossed_module,
                     tensor_product, tensor_square)

log = logging.getLogger(__name__)

PASS, FAIL, SKIP, OBSERVED = "pass", "fail", "skipped (budget)", "observed"


@dataclass(frozen=True)
class Caps:
    """Budgets shared by every instance of a run."""

    max_order: int = 32
    max_cosets: int = DEFAULT_MAX_COSETS
    timeout_secs: float = 120.0
    square_cap: int = SQUARE_CAP
    generator_cap: int = GENERATOR_CAP


class Budget:
    """Per-instance deadline handed to every enumeration an instance runs."""

    def __init__(self, caps: Caps):
        self.caps = caps
        self.deadline = time.monotonic() + caps.timeout_secs

    def limits(self) -> Limits:
        left = self.deadline - time.monotonic()
        if left <= 0:
            raise LimitExceeded("instance time budget exhausted")
        return Limits(max_cosets=self.caps.max_cosets, max_time=left)

    def kw(self) -> dict:
        return {"limits": self.limits(), "cap": self.caps.generator_cap}

    def square(self, G: FiniteGroup, **extra) -> TensorResult:
        return tensor_square(G, cap=self.caps.square_cap, generator_cap=self.caps.generator_cap,
                             limits=self.limits(), **extra)

    def wedge(self, G: FiniteGroup, **extra):
        return exterior_square(G, cap=self.caps.square_cap, generator_cap=self.caps.generator_cap,
                               limits=self.limits(), **extra)


@dataclass(frozen=True)
class Instance:
    specs: tuple[GroupSpec, ...]
    key: str
    extra: tuple = ()

    def to_json(self) -> dict:
        return {"instance": self.key, "specs": [s.to_json() for s in self.specs]}


@dataclass
class Outcome:
    values: dict
    assertion: str
    passed: bool | None  # None: nothing asserted (exploration)


@dataclass
class SuiteReport:
    suite: str
    records: list[dict] = field(default_factory=list)

    @property
    def counts(self) -> dict[str, int]:
        out = {PASS: 0, FAIL: 0, SKIP: 0, OBSERVED: 0}
        for r in self.records:
            out[r["status"]] = out.get(r["status"], 0) + 1
        return out

    @property
    def ok(self) -> bool:
        return self.counts[FAIL] == 0

    @property
    def completed(self) -> int:
        c = self.counts
        return c[PASS] + c[FAIL] + c[OBSERVED]

    def to_jsonl(self, timings: bool = False) -> str:
        lines = []
        for r in self.records:
            rec = dict(r)
            if not timings:
                rec.pop("seconds", None)
            lines.append(json.dumps(rec, sort_keys=True))
        return "\n".join(lines)

    def summary(self) -> dict:
        return {"suite": self.suite, "instances": len(self.records), **self.counts}

    def table(self) -> str:
        rows = [("instance", "status", "seconds", "assertion")]
        for r in self.records:
            rows.append((r["instance"], r["status"], f"{r['seconds']:.2f}", r["assertion"]))
        w0 = max(len(r[0]) for r in rows)
        w1 = max(len(r[1]) for r in rows)
        out = [f"{a:<{w0}}  {b:<{w1}}  {c:>7}  {d}" for a, b, c, d in rows]
        c = self.counts
        out.append(f"{self.suite}: {c[PASS]} pass, {c[FAIL]} fail, {c[SKIP]} skipped, "
                   f"{c[OBSERVED]} observed")
        return "\n".join(out)


# --- helpers ------------------------------------------------------------------

def _inv(x) -> list[int]:
    return x.to_list()


def _members(S: Subgroup) -> list[int]:
    return S.members.tolist()


def _class_of(result: TensorResult) -> int:
    if result.materialized:
        return nilpotency_class(result.group)
    return 0 if result.order == 1 else 1


def cyclic_normal_series(G: FiniteGroup) -> tuple[int, Subgroup] | None:
    """A cyclic normal ``N = <g>`` with cyclic ``G/N`` and ``|N|`` largest.

    Ties go to the smallest element index ``g``.  None if G is not metacyclic.
    """
    orders = G.element_orders
    best = None
    for g in np.argsort(-orders, kind="stable").tolist():
        if best is not None and orders[g] < best[1].order:
            break
        N = subgroup_generated(G, [g])
        if best is not None and N == best[1]:
            continue
        if not N.is_normal():
            continue
        Q, _ = quotient(G, N)
        if Q.element_orders.max() == Q.order and (best is None or g < best[0]):
            best = (g, N)
    return best


def metacyclic_witness(ws, N: Subgroup, M: Subgroup) -> tuple[int | None, int, list[int]]:
    """First ``s`` (in element order) mapping to a generator of ``G/N`` with ``M = {x ^ s : x in N, [x, s] = 1}``.

    Returns ``(s, candidates tried, realised set)``; ``s`` is None when no candidate works.
    """
    G = ws.pair.G
    Q, pi = quotient(G, N)
    gens_q = np.flatnonzero(Q.element_orders == Q.order)
    target = set(_members(M))
    tried = 0
    realised: list[int] = []
    for s in range(G.order):
        if not np.isin(pi.images[s], gens_q):
            continue
        tried += 1
        xs = N.members
        comm = G.commutator_many(xs, np.full(xs.size, s)) == G.identity
        realised = sorted(set(ws.gen[xs[comm], s].tolist()))
        if set(realised) == target:
            return s, tried, realised
    return None, tried, realised


# --- suites ----------------------------------------------------------------------

def _square_instances(bound: int, pred: Callable[[GroupSpec, FiniteGroup], bool] = lambda s, G: True):
    def select(corpus: Sequence[GroupSpec], caps: Caps) -> list[Instance]:
        out = []
        for s in corpus:
            G = build(s)
            if G.order <= min(bound, caps.max_order) and pred(s, G):
                out.append(Instance((s,), s.label()))
        return out
    return select


def _crossed_module(inst: Instance, budget: Budget) -> Outcome:
    G = build(inst.specs[0])
    ts = budget.square(G)
    cm, rep = phi_crossed_module(ts)
    ker, img = ts.phi.kernel(), ts.phi.image()
    D = derivative_subgroup(ts.pair)
    values = {"tensor_order": ts.order, "kernel_order": ker.order, "image_order": img.order,
              "peiffer_mode": "all pairs" if rep.exhaustive else "generators of A",
              "equivariance_violations": len(rep.equivariance),
              "peiffer_violations": len(rep.peiffer), "kernel_central": ker.is_central(),
              "image_normal": img.is_normal(), "image_is_derivative": _members(img) == _members(D)}
    # the generator mode decides the identity for all pairs (both sides are homomorphisms in a)
    ok = rep.ok and values["kernel_central"] and values["image_normal"] and values["image_is_derivative"]
    return Outcome(values, "phi is a crossed module; Ker phi central; Im phi = D_H(G) normal", ok)


def _kappa_j(inst: Instance, budget: Budget) -> Outcome:
    G = build(inst.specs[0])
    ts = budget.square(G)
    kappa, J = kappa_and_J(ts)
    D = commutator_subgroup(G.whole(), G.whole())
    img = kappa.image()
    values = {"tensor_order": ts.order, "J_order": J.order, "commutator_order": D.order,
              "J_invariants": _inv(abelian_invariants(J)), "image_is_commutator": _members(img) == _members(D),
              "J_central": J.is_central()}
    ok = values["image_is_commutator"] and values["J_central"] and ts.order == J.order * D.order
    return Outcome(values, "Im kappa = [G,G]; J(G) central; |G(x)G| = |J(G)| |[G,G]|", ok)


def _class_bound_select(corpus, caps):
    out = []
    for s in corpus:
        G = build(s)
        if G.order > min(32, caps.max_order) or not is_nilpotent(G):
            continue
        n = nilpotency_class(G)
        if n > 3:
            continue
        out.append(Instance((s,), s.label()))
        if 1 < G.order <= min(16, caps.max_order):
            for i, N in enumerate(normal_subgroups(G)):
                if 1 < N.order < G.order:
                    out.append(Instance((s,), f"{s.label()} (x) N{i}", ("normal", i)))
    return out


def _class_bound(inst: Instance, budget: Budget) -> Outcome:
    G = build(inst.specs[0])
    n = nilpotency_class(G)
    if not inst.extra:
        ts = budget.square(G)
        c = _class_of(ts)
        bound = ceil(n / 2)
        values = {"class_G": n, "class_square": c, "bound": bound, "tensor_order": ts.order,
                  "route": ts.route}
        return Outcome(values, "class(G(x)G) <= ceil(class(G)/2)", c <= bound)
    N = normal_subgroups(G)[inst.extra[1]]
    pair = normal_subgroup_pair(G.whole(), N)
    res = tensor_product(pair, **budget.kw())
    c = _class_of(res)
    bound = max(n, nilpotency_class(pair.H))
    values = {"class_G": n, "class_H": nilpotency_class(pair.H), "H_order": N.order,
              "class_tensor": c, "bound": bound, "tensor_order": res.order}
    return Outcome(values, "class(G(x)H) <= n for compatible pairs of class <= n", c <= bound)


def _strategy(inst: Instance, budget: Budget) -> Outcome:
    G = build(inst.specs[0])
    values: dict = {}
    ok = True
    # presentations of G itself
    pres = [("cayley", presentation_of(G))]
    for name, P in pres:
        orders = [enumerate_cosets(P, st, budget.limits()).index for st in ("hlt", "felsch")]
        values[f"{name}_orders"] = orders
        ok &= orders[0] == orders[1] == G.order
    results = {}
    for what in ("tensor", "wedge"):
        got = []
        for st in ("hlt", "felsch"):
            # the auto route enumerates unless a certified abelian result is too large to cross-check
            r = budget.square(G, strategy=st) if what == "tensor" else budget.wedge(G, strategy=st)
            got.append(r)
        values[f"{what}_orders"] = [r.order for r in got]
        values[f"{what}_enumerated"] = all("strategy" in r.stats for r in got)
        ok &= got[0].order == got[1].order
        results[what] = got[1]
    ts = results["tensor"]
    D = commutator_subgroup(G.whole(), G.whole())
    closure = {"D_abelian": D.is_abelian(), "D_solvable": is_solvable(D), "D_nilpotent": is_nilpotent(D)}
    if ts.materialized:
        X = ts.group
        closure.update(tensor_derived_length=derived_length(X), tensor_solvable=is_solvable(X),
                       tensor_nilpotent=is_nilpotent(X))
    else:
        closure.update(tensor_derived_length=1, tensor_solvable=True, tensor_nilpotent=True)
    values.update(closure)
    if closure["D_abelian"]:
        ok &= closure["tensor_derived_length"] is not None and closure["tensor_derived_length"] <= 2
    if closure["D_solvable"]:
        ok &= closure["tensor_solvable"]
    if closure["D_nilpotent"]:
        ok &= closure["tensor_nilpotent"]
    return Outcome(values, "HLT and Felsch agree on every presentation; D_H(G) abelian/solvable/"
                           "nilpotent passes to G(x)H", bool(ok))


def _supersolvable(inst: Instance, budget: Budget) -> Outcome:
    G = build(inst.specs[0])
    ts = budget.square(G)
    ss, sol = is_supersolvable(G), is_solvable(G)
    values = {"G_supersolvable": ss, "G_solvable": sol, "tensor_order": ts.order}
    ok = True
    if ts.materialized:
        values["tensor_supersolvable"] = is_supersolvable(ts.group)
        values["tensor_solvable"] = is_solvable(ts.group)
    else:
        values["tensor_supersolvable"] = values["tensor_solvable"] = True  # abelian
    if ss:
        ok &= values["tensor_supersolvable"]
    if sol:
        ok &= values["tensor_solvable"]
    return Outcome(values, "G supersolvable => G(x)G supersolvable; G solvable => G(x)G solvable", ok)


def _abelian_oracle(inst: Instance, budget: Budget) -> Outcome:
    G = build(inst.specs[0])
    inv = abelian_invariants(G)
    ts = budget.square(G)
    ws = budget.wedge(G)
    got_t = abelian_invariants(ts.group) if ts.materialized else ts.invariants
    got_w = abelian_invariants(ws.group) if ws.materialized else ws.invariants
    want_t, want_w = tensor_invariants(inv, inv), exterior_invariants(inv)
    values = {"G": _inv(inv), "tensor": _inv(got_t), "tensor_expected": _inv(want_t),
              "exterior": _inv(got_w), "exterior_expected": _inv(want_w), "route": ts.route}
    return Outcome(values, "tensor and exterior squares match the gcd formulas",
                   got_t == want_t and got_w == want_w)


def _gamma_nabla(inst: Instance, budget: Budget) -> Outcome:
    G = build(inst.specs[0])
    ts = budget.square(G)
    rep = nabla_consistency(G, ts=ts, cap=budget.caps.square_cap, limits=budget.limits())
    values = {"tensor_order": rep.tensor_order, "wedge_order": rep.wedge_order,
              "nabla_order": rep.nabla_order, "gamma": _inv(rep.gamma)}
    return Outcome(values, "|nabla(G)| divides |Gamma(G^ab)|; |G(x)G| = |nabla(G)| |G^G|", rep.ok)


def _b0_select(corpus, caps):
    out = []
    for s in corpus:
        G = build(s)
        if G.order > caps.max_order:
            continue
        if (G.order <= 32 and (G.is_abelian() or is_metacyclic_spec(s))) or (
                G.order <= 64 and is_metacyclic_extension_spec(s) and build(s["base"]).order <= 32):
            out.append(Instance((s,), s.label()))
    return out


def _b0_values(G: FiniteGroup, budget: Budget) -> tuple[dict, bool]:
    ws = budget.wedge(G)
    rep = m0_and_bogomolov(G, ws=ws)
    values = {"schur": _inv(rep.schur), "m0_order": rep.m0_order, "bogomolov": _inv(rep.bogomolov),
              "wedge_order": rep.wedge_order}
    ok = rep.bogomolov.is_trivial and rep.schur.order % rep.bogomolov.order == 0
    return values, ok


def _b0_trivial(inst: Instance, budget: Budget) -> Outcome:
    G = build(inst.specs[0])
    values, ok = _b0_values(G, budget)
    return Outcome(values, "B0(G) trivial; M0 central in G^G; |B0| divides |M|", ok)


B0_TENSOR_CAP = 32


def _b0_tensor_select(corpus, caps):
    out = []
    meta = [s for s in corpus if is_metacyclic_spec(s) and 1 < build(s).order <= min(16, caps.max_order)]
    small = [s for s in corpus if 1 < build(s).order <= min(8, caps.max_order)]
    for s in meta:
        G = build(s)
        if G.order <= 8:
            out.append(Instance((s,), f"{s.label()} (x) {s.label()}", ("square",)))
        for i, N in enumerate(normal_subgroups(G)):
            if 1 < N.order <= 8 and N.order < G.order:
                out.append(Instance((s,), f"{s.label()} (x) N{i}", ("normal", i)))
        for h in small:
            # trivial actions give G_ab (x) H_ab, so oversized products are known up front
            t = tensor_invariants(abelianization(G)[2], abelianization(build(h))[2])
            if t.order > B0_TENSOR_CAP:
                continue
            out.append(Instance((s, h), f"{s.label()} (x) {h.label()} trivial", ("trivial",)))
    return out


def _b0_tensor(inst: Instance, budget: Budget) -> Outcome:
    G = build(inst.specs[0])
    how = inst.extra[0]
    if how == "square":
        res = budget.square(G)
    elif how == "normal":
        res = tensor_product(normal_subgroup_pair(G.whole(), normal_subgroups(G)[inst.extra[1]]),
                             **budget.kw())
    else:
        res = tensor_product(trivial_pair(G, build(inst.specs[1])), **budget.kw())
    if res.order > B0_TENSOR_CAP:
        raise CapExceeded("|G(x)H| for the B0 corollary", res.order, B0_TENSOR_CAP)
    values, ok = _b0_values(res.require_group(), budget)
    values["tensor_order"] = res.order
    return Outcome(values, "B0(G(x)H) trivial for metacyclic G", ok)


def _metacyclic_m_select(corpus, caps):
    return [Instance((s,), s.label()) for s in corpus
            if is_metacyclic_spec(s) and build(s).order <= min(32, caps.max_order)]


def _metacyclic_m(inst: Instance, budget: Budget) -> Outcome:
    G = build(inst.specs[0])
    found = cyclic_normal_series(G)
    if found is None:
        return Outcome({"metacyclic": False}, "G has a cyclic normal N with cyclic G/N", False)
    g, N = found
    ws = budget.wedge(G)
    M = ws.kappa.kernel()
    s, tried, realised = metacyclic_witness(ws, N, M)
    values = {"N_generator": g, "N_order": N.order, "witness": s, "candidates_tried": tried,
              "schur_order": M.order, "realised": len(realised)}
    return Outcome(values, "M(G) = {x ^ s : x in N, [x, s] = 1} for the witness s", s is not None)


def _explore_select(corpus, caps):
    out = []
    for s in corpus:
        G = build(s)
        if G.order <= min(32, caps.max_order) and derived_length(G) == 2:
            out.append(Instance((s,), s.label()))
    return out


def _explore(inst: Instance, budget: Budget) -> Outcome:
    G = build(inst.specs[0])
    ts = budget.square(G)
    dl = derived_length(ts.group) if ts.materialized else (0 if ts.order == 1 else 1)
    return Outcome({"derived_length_G": 2, "derived_length_square": dl, "tensor_order": ts.order},
                   "observation only: derived length of G(x)G for metabelian G", None)


@dataclass(frozen=True)
class Suite:
    name: str
    select: Callable
    run: Callable
    summary_key: str | None = None


SUITES: dict[str, Suite] = {s.name: s for s in (
    Suite("crossed-module", _square_instances(16), _crossed_module),
    Suite("kappa-J", _square_instances(32), _kappa_j),
    Suite("class-bound", _class_bound_select, _class_bound),
    Suite("strategy", _square_instances(16), _strategy),
    Suite("supersolvable", _square_instances(24, lambda s, G: is_solvable(G)), _supersolvable),
    Suite("abelian-oracle", _square_instances(32, lambda s, G: G.is_abelian()), _abelian_oracle),
    Suite("gamma-nabla", _square_instances(24), _gamma_nabla),
    Suite("b0-trivial", _b0_select, _b0_trivial),
    Suite("b0-tensor", _b0_tensor_select, _b0_tensor),
    Suite("metacyclic-M", _metacyclic_m_select, _metacyclic_m),
    Suite("explore-solvable-length", _explore_select, _explore, "derived_length_square"),
)}
REQUIRED_SUITES = tuple(n for n in SUITES if n != "explore-solvable-length")


def _run_instance(suite: Suite, inst: Instance, caps: Caps) -> dict:
    t0 = time.monotonic()
    rec = {"suite": suite.name, **inst.to_json()}
    try:
        out = suite.run(inst, Budget(caps))
        rec.update(values=out.values, assertion=out.assertion,
                   status=OBSERVED if out.passed is None else (PASS if out.passed else FAIL))
    except (LimitExceeded, CapExceeded) as e:
        rec.update(values={}, assertion="", status=SKIP, reason=str(e))
    except Exception as e:  # a crash is a failed instance, with the spec kept for replay
        log.exception("instance %s of %s crashed", inst.key, suite.name)
        rec.update(values={}, assertion="", status=FAIL, error=f"{type(e).__name__}: {e}")
    rec["seconds"] = round(time.monotonic() - t0, 3)
    return rec


def select_instances(name: str, corpus: Sequence[GroupSpec] | None = None,
                     caps: Caps | None = None) -> list[Instance]:
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    caps = caps or Caps()
    corpus = list(corpus) if corpus is not None else standard_corpus(min(caps.max_order, 64))
    return SUITES[name].select(corpus, caps)


def run_suite(name: str, corpus: Sequence[GroupSpec] | None = None, caps: Caps | None = None,
              thread_count: int = 1, *, progress: Callable[[dict], None] | None = None) -> SuiteReport:
    """Run one registered suite; records come back in corpus order whatever the thread count."""
    caps = caps or Caps()
    suite = SUITES.get(name)
    if suite is None:
        raise UnknownSuite(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    instances = select_instances(name, corpus, caps)
    report = SuiteReport(name)
    if thread_count <= 1:
        for inst in instances:
            rec = _run_instance(suite, inst, caps)
            if progress:
                progress(rec)
            report.records.append(rec)
        return report
    with ThreadPoolExecutor(max_workers=thread_count) as pool:
        futures = [pool.submit(_run_instance, suite, inst, caps) for inst in instances]
        for f in futures:
            rec = f.result()
            if progress:
                progress(rec)
            report.records.append(rec)
    return report


def explore_summary(report: SuiteReport) -> dict:
    """Largest derived length of ``G (x) G`` seen over the metabelian instances."""
    seen = [r["values"]["derived_length_square"] for r in report.records if r["status"] == OBSERVED]
    return {"instances": len(seen), "max_derived_length_square": max(seen, default=None)}


def cross_check(G: FiniteGroup, caps: Caps | None = None) -> dict:
    """Tensor and exterior squares by HLT and by Felsch, plus closed forms for abelian G."""
    budget = Budget(caps or Caps())
    rec: dict = {"order": G.order}
    try:
        sq = [budget.square(G, route="enumeration", strategy=st) for st in ("hlt", "felsch")]
        wd = [budget.wedge(G, route="enumeration", strategy=st) for st in ("hlt", "felsch")]
    except (LimitExceeded, CapExceeded) as e:
        rec.update(status=SKIP, reason=str(e))
        return rec
    schur = [_inv(abelian_invariants(w.kappa.kernel())) for w in wd]
    rec.update(tensor_orders=[t.order for t in sq], wedge_orders=[w.order for w in wd], schur=schur)
    ok = sq[0].order == sq[1].order and wd[0].order == wd[1].order and schur[0] == schur[1]
    if G.is_abelian():
        inv = abelian_invariants(G)
        rec["tensor_oracle"] = _inv(tensor_invariants(inv, inv))
        rec["exterior_oracle"] = _inv(exterior_invariants(inv))
        ok &= _inv(abelian_invariants(sq[1].group)) == rec["tensor_oracle"]
        ok &= _inv(abelian_invariants(wd[1].group)) == rec["exterior_oracle"]
    rec["status"] = PASS if ok else FAIL
    return rec


def run_suites(names: Iterable[str], corpus=None, caps: Caps | None = None,
               thread_count: int = 1) -> list[SuiteReport]:
    return [run_suite(n, corpus, caps, thread_count) for n in names]
