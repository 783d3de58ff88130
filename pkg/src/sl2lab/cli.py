"""Single command exposing the workbench as subcommands.

All reports go to standard output, diagnostics to standard error.  Exit codes:
0 success, 1 verification failure, 2 usage error (including parse errors and
cap refusals).  Output is deterministic for a given configuration.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import acceptance, groups, norms, quadfields, sandwich
from .config import CONFIG_ENV_VAR, Config, load_config
from .errors import CapExceeded, ParseError, Sl2LabError
from .finring import parse_ring_spec
from .groups import enumerate_sl2
from .norms import construct_generators, delta_k, level_sum, norm_and_diameter, \
    normally_generates, pi_set
from .sl2 import parse_matrix, parse_matrix_list

USAGE_ERROR = 2


def _emit(payload: dict, cfg: Config, text_lines=None, tsv=None):
    if cfg.output_format == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    elif cfg.output_format == "tsv" and tsv is not None:
        sys.stdout.write(tsv)
    else:
        for line in (text_lines or [json.dumps(payload, sort_keys=True, indent=2)]):
            print(line)


def _ring(args, cfg: Config):
    return parse_ring_spec(args.ring, cfg.ring_order_cap)


def cmd_ring_info(args, cfg: Config) -> int:
    ring = parse_ring_spec(args.spec, cfg.ring_order_cap)
    doc = ring.to_json()
    lines = [f"ring {doc['spec']}",
             f"order {doc['order']}",
             f"units {doc['units_count']}",
             "factors " + "; ".join(
                 f"Z/{f['p']}^{f['k']}" if f["kind"] == "int"
                 else f"F{f['p']}[T]/(({f['g']})^{f['e']})"
                 for f in doc["factors"])]
    _emit(doc, cfg, lines)
    return 0


def cmd_sl2_enumerate(args, cfg: Config) -> int:
    group = enumerate_sl2(parse_ring_spec(args.spec, cfg.ring_order_cap),
                          cfg.group_order_cap)
    doc = group.to_json()
    lines = [f"SL2({doc['ring_spec']}): order {doc['group_order']}",
             f"conjugacy class sizes: {doc['class_sizes']}",
             f"abelian invariants: {doc['abelian_invariants']}",
             f"perfect: {doc['perfect']}"]
    _emit(doc, cfg, lines)
    return 0


def cmd_sl2_abelianization(args, cfg: Config) -> int:
    group = enumerate_sl2(parse_ring_spec(args.spec, cfg.ring_order_cap),
                          cfg.group_order_cap)
    ab = groups.abelianization(group)
    doc = {"ring_spec": group.ring.spec,
           "abelian_invariants": list(ab.factors)}
    _emit(doc, cfg, [f"abelian invariants: {list(ab.factors)}"])
    return 0


def cmd_norm(args, cfg: Config) -> int:
    ring = _ring(args, cfg)
    group = enumerate_sl2(ring, cfg.group_order_cap)
    mats = parse_matrix_list(args.set, ring)
    if not mats:
        raise ParseError("empty matrix list")
    idx = [group.index_of(m) for m in mats]
    prof = norm_and_diameter(group, idx)
    verdict = normally_generates(group, idx)
    doc = prof.to_json()
    doc["pi_set"] = [p.to_json() for p in pi_set(ring, mats)]
    doc["level_sum"] = level_sum(mats).to_json()
    doc["verdict"] = verdict.to_json()
    lines = [f"T = {doc['T']}",
             f"diameter = {doc['diameter']}",
             f"ball sizes = {doc['ball_sizes']}",
             f"pi(T) = {[str(p) for p in pi_set(ring, mats)]}",
             f"normally generates = {verdict.closure_is_whole} "
             f"(pi empty: {verdict.pi_empty}, abelianization image generates: "
             f"{verdict.ab_generates})"]
    _emit(doc, cfg, lines)
    return 0


def cmd_delta(args, cfg: Config) -> int:
    group = enumerate_sl2(_ring(args, cfg), cfg.group_order_cap)
    rep = delta_k(group, args.k, cfg.delta_budget, cfg.parallelism)
    doc = rep.to_json()
    lines = [f"delta_{args.k}(SL2({group.ring.spec})) = {doc['value']}"
             + (" (partial lower bound, budget hit)" if rep.partial else ""),
             f"witness classes: {doc['witness_reps']}",
             f"candidate sets: {rep.search_space} (evaluated {rep.evaluated})"]
    _emit(doc, cfg, lines)
    return 0


def cmd_pi(args, cfg: Config) -> int:
    ring = _ring(args, cfg)
    mats = parse_matrix_list(args.set, ring)
    if not mats:
        raise ParseError("empty matrix list")
    ideals = pi_set(ring, mats)
    doc = {"ring_spec": ring.spec,
           "pi_set": [p.to_json() for p in ideals],
           "level_sum": level_sum(mats).to_json(),
           "pi_empty": not ideals}
    _emit(doc, cfg, [f"pi(T) = {[str(p) for p in ideals]}",
                     f"level sum = {level_sum(mats)}"])
    return 0


def cmd_sandwich(args, cfg: Config) -> int:
    ring = _ring(args, cfg)
    gen = parse_matrix(args.gen, ring)
    report = sandwich.sandwich_check(ring, gen)
    doc = report.to_json()
    lines = [f"N = <<{args.gen}>> in SL2({ring.spec}): order {doc['N_order']}",
             f"level ideal {doc['level_ideal']['generator']}, "
             f"rho subgroup size {doc['rho_subgroup_size']}, "
             f"G(N) order {doc['G_N_order']}",
             f"[E(2,R),G(N)] <= N: {doc['chain_left_ok']}; "
             f"N <= G(N): {doc['chain_right_ok']}",
             f"rho(N) is a radix: {doc['radix_ok']}; "
             f"C(x^3 b) family inside N: {doc['selfrep_cor_ok']}"]
    _emit(doc, cfg, lines)
    return 0


_HOMS = {
    "q": ("F2[T]/(T^2)", sandwich.q_hom),
    "hq": ("F2[T]/(T^2)", sandwich.hq_hom),
    "z4": ("Z/4", sandwich.z4_hom),
    "f3": ("F3", sandwich.f3_hom),
}


def cmd_hom(args, cfg: Config) -> int:
    spec, builder = _HOMS[args.which]
    hom = builder(parse_ring_spec(spec, cfg.ring_order_cap))
    if args.table:
        sys.stdout.write(hom.table_tsv())
        return 0
    doc = hom.to_json()
    lines = [f"{doc['name']}: SL2({doc['ring_spec']}) -> "
             + " x ".join(f"Z{m}" for m in doc["mods"]),
             f"multiplicative: {doc['multiplicative']}, "
             f"surjective: {doc['surjective']}, kernel order {doc['kernel_order']}"]
    _emit(doc, cfg, lines)
    return 0


def cmd_quad(args, cfg: Config) -> int:
    if args.quadcmd == "v":
        prof = quadfields.v_profile(args.D)
        doc = prof.to_json()
        _emit(doc, cfg, [f"D = {args.D}: v = {prof.v} "
                         f"(2 {prof.split2}, 3 {prof.split3}; "
                         f"r1={prof.r1}, r2={prof.r2}, q={prof.q})"])
        return 0
    if args.quadcmd == "verdict":
        verdict = quadfields.delta_verdict(args.D, args.k)
        doc = verdict.to_json()
        txt = (f"delta_{args.k} over Q(sqrt {args.D}): no generating set (-inf)"
               if not verdict.attainable else
               f"delta_{args.k} over Q(sqrt {args.D}): >= {verdict.lower_bound} "
               f"(improved >= {verdict.improved_bound})")
        _emit(doc, cfg, [txt])
        return 0
    rows, skipped, hist = quadfields.scan_range(args.lo, args.hi)
    doc = {"rows": [r.to_json() for r in rows], "skipped": skipped,
           "histogram": {str(k): v for k, v in sorted(hist.items())}}
    header = "D\tsplit2\tsplit3\tr1\tr2\tq\tv"
    tsv_lines = [header] + [
        f"{r.d}\t{r.split2}\t{r.split3}\t{r.r1}\t{r.r2}\t{r.q}\t{r.v}"
        for r in rows]
    _emit(doc, cfg, tsv_lines, tsv="\n".join(tsv_lines) + "\n")
    return 0


def cmd_gens(args, cfg: Config) -> int:
    ring = _ring(args, cfg)
    result = construct_generators(ring, args.k)
    doc = result.to_json()
    if result.ok:
        lines = [f"T = {doc['set']}", f"verified normally generating: {result.verified}"]
    else:
        lines = [f"refused: {result.reason}"]
    _emit(doc, cfg, lines)
    return 0


def cmd_verify(args, cfg: Config) -> int:
    suite = acceptance.run_suite(args.suite, cfg)
    doc = suite.to_json()
    if cfg.output_format == "json":
        # pass/fail lines (with timings) are diagnostics; keep stdout byte-stable
        for line in suite.lines():
            print(line, file=sys.stderr)
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        for line in suite.lines():
            print(line)
        print(f"suite {suite.suite}: "
              + ("all criteria passed" if suite.all_pass else "FAILURES present"))
    return 0 if suite.all_pass else 1


def build_parser() -> argparse.ArgumentParser:
    # shared flags are accepted before or after the subcommand; SUPPRESS keeps
    # the subparser from clobbering a value given at the top level
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "tsv", "text"],
                        default=argparse.SUPPRESS,
                        help="output format (default text, or config file via "
                             f"${CONFIG_ENV_VAR})")
    common.add_argument("--ring-order-cap", type=int, default=argparse.SUPPRESS)
    common.add_argument("--group-order-cap", type=int, default=argparse.SUPPRESS)
    common.add_argument("--delta-budget", type=int, default=argparse.SUPPRESS)
    common.add_argument("--parallelism", type=int, default=argparse.SUPPRESS)

    top = argparse.ArgumentParser(
        prog="sl2lab", parents=[common],
        description="SL2 over small finite rings: word norms, normal closures, "
                    "abelianizations, sandwich subgroups, quadratic invariants.")
    sub = top.add_subparsers(dest="command", required=True)

    ring = sub.add_parser("ring", help="finite ring utilities")
    ringsub = ring.add_subparsers(dest="ringcmd", required=True)
    info = ringsub.add_parser("info", parents=[common],
                              help="parse a ring spec and report it")
    info.add_argument("spec")
    info.set_defaults(func=cmd_ring_info)

    sl2 = sub.add_parser("sl2", help="group-level reports")
    sl2sub = sl2.add_subparsers(dest="sl2cmd", required=True)
    enum = sl2sub.add_parser("enumerate", parents=[common],
                             help="orders, classes, invariants")
    enum.add_argument("spec")
    enum.set_defaults(func=cmd_sl2_enumerate)
    ab = sl2sub.add_parser("abelianization", parents=[common],
                           help="invariant factors")
    ab.add_argument("spec")
    ab.set_defaults(func=cmd_sl2_abelianization)

    norm = sub.add_parser("norm", parents=[common],
                          help="word norm and diameter of a set")
    norm.add_argument("--ring", required=True)
    norm.add_argument("--set", required=True,
                      help='e.g. "E12(1),h(3),[[1,0],[2,1]]"')
    norm.set_defaults(func=cmd_norm)

    delta = sub.add_parser("delta", parents=[common],
                           help="exact Delta_k by exhaustive search")
    delta.add_argument("--ring", required=True)
    delta.add_argument("-k", type=int, required=True)
    delta.set_defaults(func=cmd_delta)

    pi = sub.add_parser("pi", parents=[common],
                        help="primes where the set turns scalar")
    pi.add_argument("--ring", required=True)
    pi.add_argument("--set", required=True)
    pi.set_defaults(func=cmd_pi)

    sand = sub.add_parser("sandwich", parents=[common],
                          help="normal-subgroup sandwich check")
    sand.add_argument("--ring", required=True)
    sand.add_argument("--gen", required=True)
    sand.set_defaults(func=cmd_sandwich)

    hom = sub.add_parser("hom", parents=[common],
                         help="the explicit small-target homomorphisms")
    hom.add_argument("which", choices=sorted(_HOMS))
    hom.add_argument("--table", action="store_true",
                     help="dump the element-to-image table as TSV")
    hom.set_defaults(func=cmd_hom)

    quad = sub.add_parser("quad", help="quadratic-ring splitting invariants")
    quadsub = quad.add_subparsers(dest="quadcmd", required=True)
    qv = quadsub.add_parser("v", parents=[common], help="v invariant for one D")
    qv.add_argument("--D", type=int, required=True)
    qv.set_defaults(func=cmd_quad)
    qs = quadsub.add_parser("scan", parents=[common],
                            help="profiles over a range of D")
    qs.add_argument("--from", dest="lo", type=int, required=True)
    qs.add_argument("--to", dest="hi", type=int, required=True)
    qs.set_defaults(func=cmd_quad)
    qd = quadsub.add_parser("verdict", parents=[common],
                            help="lower-bound verdict for (D, k)")
    qd.add_argument("--D", type=int, required=True)
    qd.add_argument("-k", type=int, required=True)
    qd.set_defaults(func=cmd_quad)

    gens = sub.add_parser("generators", parents=[common],
                          help="CRT generating-set construction (or refusal)")
    gens.add_argument("--ring", required=True)
    gens.add_argument("-k", type=int, required=True)
    gens.set_defaults(func=cmd_gens)

    verify = sub.add_parser("verify", parents=[common],
                            help="run the verification suite")
    verify.add_argument("--suite", choices=["full", "fast"], default="full")
    verify.set_defaults(func=cmd_verify)
    return top


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config()
        for flag, name in (("format", "output_format"),
                           ("ring_order_cap", "ring_order_cap"),
                           ("group_order_cap", "group_order_cap"),
                           ("delta_budget", "delta_budget"),
                           ("parallelism", "parallelism")):
            if hasattr(args, flag):
                setattr(cfg, name, getattr(args, flag))
        cfg = Config(**cfg.__dict__)  # re-validate
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    try:
        return args.func(args, cfg)
    except (ParseError, CapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except Sl2LabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
