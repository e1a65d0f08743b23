"""Command-line workbench.

    walkslab walk    --alpha A --beta B [--provider FILE]
    walkslab rho0    --alpha A --beta B [--provider FILE]
    walkslab rho2    --alpha A --beta B [--provider FILE]
    walkslab lambda  --alpha A --beta B [--provider FILE]
    walkslab rhophi  --scenario FILE --alpha A --beta B
    walkslab twowalk --set NAME --alpha A --scenario FILE
    walkslab xyz     --x X --y Y --z Z --scenario FILE
    walkslab list-levels --scenario FILE --block NAME [--out FILE.csv]
    walkslab branch  --scenario FILE --block NAME [--out FILE.csv]
    walkslab fip     --scenario FILE --block NAME [--max-subfamily N]
                     [--out FILE.csv]
    walkslab check   --scenario FILE [--suite NAME] [--seed N] [--report OUT.json]
    walkslab export  --table {walks|rhophi-table|xyz-table} --grid SPEC
                     --out FILE [--scenario FILE] [--plot]

Providers and scenario data come from scenario files (JSON); without one the
walk commands use the canonical fundamental-sequence assignment bounded just
above beta.  The WALKSLAB_BUDGET environment variable caps search sizes.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

import itertools

from .cseq import canonical_provider
from .errors import WalkslabError
from .grid import GridSpec
from .lists import branch_search, fip_witness, levels
from .ordinal import ONE, Ordinal, ord_add, ord_cmp, parse_ordinal
from .rhophi import rho_phi
from .scenario import SUITE_NAMES, Scenario, load_scenario
from .suites import run_scenario
from .tables import build_rhophi_table, build_walks_table, build_xyz_table, write_csv
from .twowalks import triple_min, two_walk
from .walks import walk_trace


def _provider_for(args) -> tuple:
    if getattr(args, "provider", None):
        scn = load_scenario(args.provider)
        return scn.provider, scn.bound
    beta = parse_ordinal(args.beta)
    bound = ord_add(beta, ONE)
    return canonical_provider(bound), bound


def _cmd_walk(args) -> int:
    provider, _ = _provider_for(args)
    alpha, beta = parse_ordinal(args.alpha), parse_ordinal(args.beta)
    wt = walk_trace(provider, alpha, beta)
    print("trace:     ", " > ".join(str(t) for t in wt.trace))
    print("rho2:      ", wt.steps)
    print("rho0:      ", ";".join(str(c) for c in wt.code))
    print("lambda:    ", wt.lam)
    print("lambda_bar:", wt.lam_bar)
    return 0


def _cmd_measure(args) -> int:
    provider, _ = _provider_for(args)
    alpha, beta = parse_ordinal(args.alpha), parse_ordinal(args.beta)
    wt = walk_trace(provider, alpha, beta)
    if args.measure == "rho0":
        print(";".join(str(c) for c in wt.code))
    elif args.measure == "rho2":
        print(wt.steps)
    else:
        print(wt.lam)
    return 0


def _cmd_rhophi(args) -> int:
    scn = load_scenario(args.scenario)
    if scn.phi is None:
        raise WalkslabError("scenario has no phi block")
    alpha, beta = parse_ordinal(args.alpha), parse_ordinal(args.beta)
    print(rho_phi(scn.provider, scn.phi, alpha, beta))
    return 0


def _cmd_twowalk(args) -> int:
    scn = load_scenario(args.scenario)
    if args.set not in scn.fpsets:
        raise WalkslabError(f"scenario declares no set named {args.set!r}")
    wt = two_walk(scn.fpsets[args.set], parse_ordinal(args.alpha), scn.set_cseq)
    print("trace:    ", " > ".join(str(t) for t in wt.trace))
    print("pre-steps:", " ".join(str(t) for t in wt.pre_steps))
    print("rho2:     ", wt.rho2)
    print("rho0:     ", ";".join(str(c) for c in wt.code))
    print("lambda:   ", wt.lam)
    return 0


def _cmd_xyz(args) -> int:
    scn = load_scenario(args.scenario)
    sets = []
    for name in (args.x, args.y, args.z):
        if name not in scn.fpsets:
            raise WalkslabError(f"scenario declares no set named {name!r}")
        sets.append(scn.fpsets[name])
    print(triple_min(sets[0], sets[1], sets[2], scn.set_cseq))
    return 0


def _fmt_oset(values) -> str:
    return "{" + ";".join(str(v) for v in sorted(values)) + "}"


def _lists_block(args):
    scn = load_scenario(args.scenario)
    if args.block not in scn.lists:
        raise WalkslabError(f"scenario declares no lists block named {args.block!r}")
    return scn.lists[args.block]


def _cmd_list_levels(args) -> int:
    ctx = _lists_block(args).context
    rows = []
    seen = []
    for x in ctx.family:
        hull = ctx.hulls.get(x, x)
        if hull in seen:
            continue
        seen.append(hull)
        level = levels(ctx, hull)
        joined = "|".join(sorted(_fmt_oset(d) for d in level))
        print(f"hull {_fmt_oset(hull)}: {len(level)} level element(s) {joined or '-'}")
        rows.append([_fmt_oset(hull), str(len(level)), joined])
    if args.out:
        write_csv(args.out, ["hull", "size", "level"], rows)
        print(f"wrote {len(rows)} data rows to {args.out}")
    return 0


def _cmd_branch(args) -> int:
    ctx = _lists_block(args).context
    support = frozenset().union(*ctx.family) if ctx.family else frozenset()
    result = branch_search(ctx, support)
    if result.branch is not None:
        print(f"branch {_fmt_oset(result.branch)} found"
              f" (searched {result.space} candidates)")
        rows = [["branch", _fmt_oset(result.branch)], ["space", str(result.space)]]
    else:
        print(f"no branch; exhaustive certificate over {result.space} candidates")
        rows = [["branch", "none"], ["space", str(result.space)]]
    if args.out:
        write_csv(args.out, ["key", "value"], rows)
        print(f"wrote {len(rows)} data rows to {args.out}")
    return 0


def _cmd_fip(args) -> int:
    block = _lists_block(args)
    ctx, fam, pool = block.context, block.indexed_family, block.pool
    if fam is None or pool is None:
        raise WalkslabError("fip needs an indexed family and a pool in the block")
    rows = []
    for size in range(0, args.max_subfamily + 1):
        for xs in itertools.combinations(ctx.family, size):
            result = fip_witness(list(xs), ctx, fam, frozenset(), pool)
            label = "|".join(_fmt_oset(x) for x in xs) or "(empty)"
            if result.witness is None:
                verdict, witness = "exhausted", ""
            else:
                verdict = "witness"
                witness = (repr(result.witness)
                           if not isinstance(result.witness, frozenset)
                           else _fmt_oset(result.witness))
            print(f"{label}: {verdict} {witness} ({result.examined} examined)")
            rows.append([label, verdict, witness, str(result.examined)])
    if args.out:
        write_csv(args.out, ["subfamily", "verdict", "witness", "examined"], rows)
        print(f"wrote {len(rows)} data rows to {args.out}")
    return 0


def _cmd_check(args) -> int:
    scn = load_scenario(args.scenario)
    report = run_scenario(scn, only=args.suite, seed=args.seed)
    payload = report.to_json()
    if args.report:
        with open(args.report, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    for suite in report.suites:
        verdict = "PASS" if suite.failed == 0 else "FAIL"
        print(f"[{verdict}] {suite.name}: {suite.passed} passed,"
              f" {suite.failed} failed, {suite.vacuous} vacuous,"
              f" {suite.exhausted} exhausted")
        for failure in suite.failures[:5]:
            print(f"    counterexample {failure['check']}: {failure['inputs']}")
        for note in suite.notes:
            print(f"    note: {note}")
    return 0 if report.ok else 1


def _cmd_export(args) -> int:
    scn: Optional[Scenario] = load_scenario(args.scenario) if args.scenario else None
    if args.table == "walks":
        if args.grid is None:
            raise WalkslabError("export walks needs --grid")
        spec = GridSpec.parse(args.grid)
        provider = scn.provider if scn else canonical_provider(spec.bound)
        grid = spec.ordinals()
        header, rows = build_walks_table(provider, grid)
    elif args.table == "rhophi-table":
        if scn is None or scn.phi is None:
            raise WalkslabError("export rhophi-table needs --scenario with a phi block")
        spec = GridSpec.parse(args.grid) if args.grid else scn.grid
        if spec is None:
            raise WalkslabError("export rhophi-table needs --grid or a scenario grid")
        grid = spec.ordinals()
        header, rows = build_rhophi_table(scn.provider, scn.phi, grid)
    else:
        if scn is None:
            raise WalkslabError("export xyz-table needs --scenario")
        family = args.family or next(iter(sorted(scn.families)), None)
        if family is None:
            raise WalkslabError("scenario declares no family")
        header, rows = build_xyz_table(scn, family, args.partition)
        grid = []
    write_csv(args.out, header, rows)
    print(f"wrote {len(rows)} data rows to {args.out}")
    if args.plot:
        from . import plotting

        png = args.out.rsplit(".", 1)[0] + ".png"
        labels = [str(v) for v in grid]
        if args.table == "walks":
            plotting.render_walks_png(png, labels, rows)
        elif args.table == "rhophi-table":
            plotting.render_rhophi_png(png, labels, rows)
        else:
            plotting.render_xyz_png(png, rows)
        print(f"wrote figure to {png}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="walkslab",
        description="minimal-walk workbench over ordinal notations")
    sub = parser.add_subparsers(dest="command", required=True)

    def walk_args(p):
        p.add_argument("--alpha", required=True, help="target ordinal expression")
        p.add_argument("--beta", required=True, help="start ordinal expression")
        p.add_argument("--provider", help="scenario file supplying the provider")

    p = sub.add_parser("walk", help="full walk record from beta to alpha")
    walk_args(p)
    p.set_defaults(func=_cmd_walk)

    for measure in ("rho0", "rho2", "lambda"):
        p = sub.add_parser(measure, help=f"{measure} of the walk")
        walk_args(p)
        p.set_defaults(func=_cmd_measure, measure=measure)

    p = sub.add_parser("rhophi", help="graded coloring value")
    p.add_argument("--scenario", required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.set_defaults(func=_cmd_rhophi)

    p = sub.add_parser("twowalk", help="two-cardinal walk inside a named set")
    p.add_argument("--set", required=True, help="fpset name from the scenario")
    p.add_argument("--alpha", required=True)
    p.add_argument("--scenario", required=True)
    p.set_defaults(func=_cmd_twowalk)

    p = sub.add_parser("xyz", help="triple minimum of a named chain")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--z", required=True)
    p.add_argument("--scenario", required=True)
    p.set_defaults(func=_cmd_xyz)

    p = sub.add_parser("list-levels", help="restriction levels at every hull")
    p.add_argument("--scenario", required=True)
    p.add_argument("--block", required=True, help="lists block name")
    p.add_argument("--out", help="also write the rows as CSV")
    p.set_defaults(func=_cmd_list_levels)

    p = sub.add_parser("branch", help="exhaustive branch search over a block")
    p.add_argument("--scenario", required=True)
    p.add_argument("--block", required=True)
    p.add_argument("--out", help="also write the result as CSV")
    p.set_defaults(func=_cmd_branch)

    p = sub.add_parser("fip", help="finite-intersection witnesses per subfamily")
    p.add_argument("--scenario", required=True)
    p.add_argument("--block", required=True)
    p.add_argument("--max-subfamily", type=int, default=3)
    p.add_argument("--out", help="also write the rows as CSV")
    p.set_defaults(func=_cmd_fip)

    p = sub.add_parser("check", help="run scenario suites")
    p.add_argument("--scenario", required=True)
    p.add_argument("--suite", choices=SUITE_NAMES)
    p.add_argument("--seed", type=int)
    p.add_argument("--report", help="write the JSON report here")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("export", help="write a CSV table (and optionally a figure)")
    p.add_argument("--table", required=True,
                   choices=("walks", "rhophi-table", "xyz-table"))
    p.add_argument("--grid", help="grid spec BOUND:MAX_EXP:MAX_COEFF")
    p.add_argument("--out", required=True)
    p.add_argument("--scenario")
    p.add_argument("--family", help="family name for xyz-table")
    p.add_argument("--partition", help="partition name for xyz-table")
    p.add_argument("--plot", action="store_true",
                   help="render a PNG figure alongside the CSV")
    p.set_defaults(func=_cmd_export)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (WalkslabError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
