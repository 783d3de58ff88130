"""The one-shot verification suite behind `sl2lab verify` and the test gate.

Each criterion is a standalone function returning a CriterionResult whose
`details` dict is fully deterministic (no timings; those go in `elapsed` and
never into serialized output).  `run_suite` executes the whole battery and
additionally checks that two independent computations of the suite serialize
to byte-identical JSON.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import finring, groups, norms, quadfields, sandwich
from .config import Config
from .errors import LevelZeroError
from .finring import parse_ring_spec
from .groups import derived_subgroup, enumerate_sl2, reduction_hom
from .norms import construct_generators, delta_k, level_sum, pi_set
from .sl2 import Mat2, comm, selfrep_shift_check

ORDER_TABLE = {
    "F2": 6, "F3": 24, "F4": 60, "Z/4": 48,
    "F2[T]/(T^2)": 48, "Z/9": 648, "Z/12": 1152,
}

ABELIANIZATION_TABLE = {
    "F2": [2], "F3": [3], "Z/4": [4], "F2[T]/(T^2)": [2, 2],
    "Z/12": [12], "F4": [], "F5": [],
}
ABELIANIZATION_SLOW = {"Z/25": []}

IDENTITY_RINGS = ["F2", "F3", "F4", "F5", "Z/4", "Z/6", "Z/9", "Z/12",
                  "F2[T]/(T^2)"]
RANDOM_T_RINGS = ["F3", "Z/4", "Z/6", "Z/9", "F2[T]/(T^2)"]


@dataclass
class CriterionResult:
    cid: int
    name: str
    passed: bool
    budget_seconds: float
    elapsed: float
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"id": self.cid, "name": self.name, "passed": self.passed,
                "details": self.details}

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return (f"[{mark}] criterion {self.cid} ({self.name}) "
                f"in {self.elapsed:.2f}s / budget {self.budget_seconds:.0f}s")


def _result(cid, name, budget, t0, ok, details) -> CriterionResult:
    elapsed = time.perf_counter() - t0
    return CriterionResult(cid, name, bool(ok) and elapsed < budget,
                           budget, elapsed, details)


def criterion_1(cfg: Config) -> CriterionResult:
    t0 = time.perf_counter()
    got = {spec: enumerate_sl2(parse_ring_spec(spec, cfg.ring_order_cap),
                               cfg.group_order_cap).size
           for spec in ORDER_TABLE}
    ok = got == ORDER_TABLE
    return _result(1, "group-orders", 5.0, t0, ok,
                   {"expected": ORDER_TABLE, "got": got})


def criterion_2(cfg: Config, fast: bool = False) -> CriterionResult:
    t0 = time.perf_counter()
    table = dict(ABELIANIZATION_TABLE)
    if not fast:
        table.update(ABELIANIZATION_SLOW)
    got = {}
    for spec, want in table.items():
        group = enumerate_sl2(parse_ring_spec(spec, cfg.ring_order_cap),
                              cfg.group_order_cap)
        got[spec] = list(groups.abelianization(group).factors)
    ok = got == table
    return _result(2, "abelianizations", 60.0, t0, ok,
                   {"expected": table, "got": got})


def criterion_3(cfg: Config) -> CriterionResult:
    t0 = time.perf_counter()
    dual = parse_ring_spec("F2[T]/(T^2)", cfg.ring_order_cap)
    z4r = parse_ring_spec("Z/4", cfg.ring_order_cap)
    f3r = parse_ring_spec("F3", cfg.ring_order_cap)
    homs = [sandwich.q_hom(dual), sandwich.hq_hom(dual),
            sandwich.z4_hom(z4r), sandwich.f3_hom(f3r)]
    details = {}
    ok = True
    for hom in homs:
        mult = hom.is_multiplicative()
        surj = hom.is_surjective()
        ker = set(int(i) for i in hom.kernel_indices())
        ker_ok = ker == derived_subgroup(hom.group).members
        details[hom.name] = {"multiplicative": mult, "surjective": surj,
                             "kernel_is_derived": ker_ok}
        # q alone is one coordinate of hq, so only multiplicativity is pinned
        ok &= mult if hom.name == "q" else (mult and surj and ker_ok)
    hq = homs[1]
    spots = {
        "hq(E12(1))": list(hq.of_mat(Mat2.e12(dual, dual.one))),
        "hq(E12(T))": list(hq.of_mat(Mat2.e12(dual, dual.factors[0].uniformizer))),
    }
    ok &= spots["hq(E12(1))"] == [1, 0] and spots["hq(E12(T))"] == [0, 1]
    details["spots"] = spots
    return _result(3, "homomorphism-suite", 5.0, t0, ok, details)


def criterion_4(cfg: Config) -> CriterionResult:
    t0 = time.perf_counter()
    dual = parse_ring_spec("F2[T]/(T^2)", cfg.ring_order_cap)
    group = enumerate_sl2(dual, cfg.group_order_cap)
    red = reduction_hom(group, dual.maximal_ideals()[0], cfg.group_order_cap)
    kernel = red.kernel()
    kmembers = kernel.as_array()
    elem_ab = bool(len(kernel) == 8) and all(
        int(group.mul(i, i)) == group.identity for i in kmembers)
    sums = group.mul(kmembers[:, None], kmembers[None, :])
    abelian = bool(np.array_equal(np.asarray(sums), np.asarray(sums).T))
    # complementary copy of the residue group via constant entries
    _, surj = dual.quotient_by(dual.maximal_ideals()[0])
    lift = np.array([dual.zero, dual.one], dtype=np.int32)
    comp = np.unique(np.asarray(group.index_of_entries(
        lift[surj[group.a]], lift[surj[group.b]],
        lift[surj[group.c]], lift[surj[group.d]])))
    trivial_meet = bool(len(np.intersect1d(comp, kmembers)) == 1)
    joint = groups.subgroup_closure(group, np.concatenate([comp, kmembers]))
    details = {"kernel_order": len(kernel), "kernel_elementary_abelian":
               elem_ab and abelian, "complement_order": int(len(comp)),
               "trivial_intersection": trivial_meet,
               "jointly_generate": joint.is_whole()}
    ok = (elem_ab and abelian and len(comp) == 6 and trivial_meet
          and joint.is_whole())
    return _result(4, "semidirect-structure", 1.0, t0, ok, details)


def criterion_5(cfg: Config) -> CriterionResult:
    t0 = time.perf_counter()
    g_f2 = enumerate_sl2(parse_ring_spec("F2", cfg.ring_order_cap))
    g_f3 = enumerate_sl2(parse_ring_spec("F3", cfg.ring_order_cap))
    g_dual = enumerate_sl2(parse_ring_spec("F2[T]/(T^2)", cfg.ring_order_cap))
    d1_f2 = delta_k(g_f2, 1, cfg.delta_budget, cfg.parallelism)
    d1_f3 = delta_k(g_f3, 1, cfg.delta_budget, cfg.parallelism)
    d1_dual = delta_k(g_dual, 1, cfg.delta_budget, cfg.parallelism)
    d2_dual = delta_k(g_dual, 2, cfg.delta_budget, cfg.parallelism)
    details = {
        "delta1_SL2_F2": norms._json_num(d1_f2.value),
        "delta1_SL2_F3": norms._json_num(d1_f3.value),
        "delta1_SL2_dual": norms._json_num(d1_dual.value),
        "delta2_SL2_dual": norms._json_num(d2_dual.value),
        "note_delta1_F3": ("stated expected value is 2; exhaustive search over "
                           "all normally generating classes measures the value "
                           "reported here"),
    }
    ok = (d1_f2.value == 2 and d1_f3.value == 2
          and d1_dual.value == norms.MINUS_INFINITY
          and d2_dual.value != norms.MINUS_INFINITY and d2_dual.value >= 3)
    return _result(5, "delta-values", 30.0, t0, ok, details)


def criterion_6(cfg: Config, fast: bool = False) -> CriterionResult:
    t0 = time.perf_counter()
    ring = parse_ring_spec("Z/9", cfg.ring_order_cap)
    group = enumerate_sl2(ring, cfg.group_order_cap)
    reps = group.conjugacy_classes().reps
    if fast:
        reps = reps[:8]
    checked = skipped = 0
    failures = []
    for rep in reps:
        try:
            report = sandwich.sandwich_check(ring, group.mat(rep))
        except LevelZeroError:
            skipped += 1
            continue
        checked += 1
        if not report.all_ok:
            failures.append(str(group.mat(rep)))
    ok = not failures and checked > 0
    return _result(6, "sandwich-verification", 600.0, t0, ok,
                   {"class_reps_checked": checked, "central_skipped": skipped,
                    "failures": failures})


def criterion_7(cfg: Config, fast: bool = False) -> CriterionResult:
    t0 = time.perf_counter()
    details = {}
    shift_ok = True
    for spec in ("Z/9", "F3"):
        ring = parse_ring_spec(spec, cfg.ring_order_cap)
        good = all(selfrep_shift_check(ring, x, y)
                   for x in ring.elements() for y in ring.elements())
        details[f"selfrep_shift[{spec}]"] = good
        shift_ok &= good

    comm_ok = True
    for spec in IDENTITY_RINGS:
        ring = parse_ring_spec(spec, cfg.ring_order_cap)
        good = True
        for u in ring.units():
            hu = Mat2.h(ring, u)
            u2m1 = ring.sub(ring.mul(u, u), ring.one)
            for a in ring.elements():
                want = Mat2.e12(ring, int(ring.mul(u2m1, a)))
                if comm(hu, Mat2.e12(ring, a)) != want:
                    good = False
                    break
            if not good:
                break
        details[f"comm_identity[{spec}]"] = good
        comm_ok &= good

    trials = 250 if fast else 1000
    equiv_ok = True
    for spec in RANDOM_T_RINGS:
        ring = parse_ring_spec(spec, cfg.ring_order_cap)
        group = enumerate_sl2(ring, cfg.group_order_cap)
        rng = np.random.default_rng(20_240_801 + ring.order)
        good = True
        for _ in range(trials):
            size = int(rng.integers(1, 4))
            mats = [group.mat(int(i))
                    for i in rng.integers(0, group.size, size=size)]
            if (not pi_set(ring, mats)) != level_sum(mats).is_whole():
                good = False
                break
        details[f"pi_level_equiv[{spec}]"] = good
        equiv_ok &= good
    details["random_T_per_ring"] = trials
    ok = shift_ok and comm_ok and equiv_ok
    return _result(7, "identity-suites", 60.0, t0, ok, details)


def criterion_8(cfg: Config) -> CriterionResult:
    t0 = time.perf_counter()
    mismatches = [d for d in range(2, 501)
                  if finring.squarefree(d)
                  and quadfields.v_profile(d).v != quadfields.corollary_case(d)]
    spots = {d: quadfields.v_profile(d).v for d in (5, 21, 13, 2)}
    verdict = quadfields.delta_verdict(13, 1)
    ok = (not mismatches and spots == {5: 0, 21: 1, 13: 2, 2: 2}
          and verdict.lower_bound == -math.inf)
    return _result(8, "quadratic-table", 1.0, t0, ok,
                   {"mismatches": mismatches, "spots": {str(k): v for k, v in spots.items()},
                    "verdict_13_1": verdict.to_json()})


def criterion_9(cfg: Config) -> CriterionResult:
    t0 = time.perf_counter()
    r12 = parse_ring_spec("Z/12", cfg.ring_order_cap)
    rmix = parse_ring_spec("F2[T]/(T^2) x F3", cfg.ring_order_cap)
    rdual = parse_ring_spec("F2[T]/(T^2)", cfg.ring_order_cap)
    g12 = construct_generators(r12, 1)
    gmix = construct_generators(rmix, 2)
    refusal = construct_generators(rdual, 1)
    details = {"Z/12_k1": g12.to_json(), "mix_k2": gmix.to_json(),
               "dual_k1_refusal": refusal.to_json()}
    ok = (g12.ok and g12.verified and gmix.ok and gmix.verified
          and not refusal.ok and refusal.v_required == 2)
    return _result(9, "generating-set-demo", 30.0, t0, ok, details)


CRITERIA = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4,
    5: criterion_5, 6: criterion_6, 7: criterion_7, 8: criterion_8,
    9: criterion_9,
}
_FAST_AWARE = {2, 6, 7}


@dataclass
class SuiteResult:
    suite: str
    results: list[CriterionResult]
    determinism_checked: bool = False
    determinism_ok: bool = True

    @property
    def all_pass(self) -> bool:
        return all(r.passed for r in self.results) and \
            (not self.determinism_checked or self.determinism_ok)

    def to_json(self) -> dict:
        doc = {
            "suite": self.suite,
            "criteria": [r.to_json() for r in self.results],
            "all_pass": self.all_pass,
        }
        if self.determinism_checked:
            doc["criteria"].append({
                "id": 10, "name": "determinism", "passed": self.determinism_ok,
                "details": {"byte_identical": self.determinism_ok}})
        return doc

    def lines(self) -> list[str]:
        out = [r.line() for r in self.results]
        if self.determinism_checked:
            mark = "PASS" if self.determinism_ok else "FAIL"
            out.append(f"[{mark}] criterion 10 (determinism)")
        return out


def _run_criteria(cfg: Config, fast: bool) -> list[CriterionResult]:
    results = []
    for cid in sorted(CRITERIA):
        fn = CRITERIA[cid]
        results.append(fn(cfg, fast) if cid in _FAST_AWARE else fn(cfg))
    return results


def serialized(results: list[CriterionResult]) -> bytes:
    return json.dumps([r.to_json() for r in results],
                      sort_keys=True, separators=(",", ":")).encode()


def run_suite(suite: str = "full", cfg: Config | None = None,
              check_determinism: bool = True) -> SuiteResult:
    """Run the battery; for the determinism criterion the computation is done
    a second time from cleared caches (and forced-serial config) and the two
    serializations must agree byte for byte."""
    cfg = cfg or Config()
    fast = suite == "fast"
    results = _run_criteria(cfg, fast)
    out = SuiteResult(suite, results)
    if check_determinism:
        first = serialized(results)
        groups.clear_caches()
        serial_cfg = Config(ring_order_cap=cfg.ring_order_cap,
                            group_order_cap=cfg.group_order_cap,
                            delta_budget=cfg.delta_budget,
                            output_format=cfg.output_format, parallelism=1)
        second = serialized(_run_criteria(serial_cfg, fast))
        out.determinism_checked = True
        out.determinism_ok = first == second
    return out
