"""Command-line entry point.

Examples::

    mubforge count d=6:5,4^2,2
    mubforge search d=5:4,4,4,2 --trials 100 --seed 7 --out runs/442
    mubforge sweep d=6:5,5,5,5 --trials 100 --out runs/d6
    mubforge construct tensor 2 3 --out t23.json
    mubforge verify t23.json --tol 1e-10
    mubforge dephase t23.json --out t23_dephased.json
    mubforge hist runs/442/records.ndjson --out hist.csv
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .constellation import classify, enumerate_subspecs, parse_spec
from .constructions import prime_complete_set, qubit_complete_set, tensor_triple
from .equivalence import dephase
from .formats import read_ndjson, read_state_set, write_csv, write_state_set
from .objective import f_upper_bound, verify_mu
from .optimizer import LmConfig
from .search import (
    TABLE_HEADER,
    CampaignConfig,
    Histogram,
    TrialRecord,
    default_workers,
    lattice_tally,
    run_campaign,
    sweep,
    table_row,
)

log = logging.getLogger("mubforge")


class UsageError(Exception):
    pass


def _spec(text):
    try:
        return parse_spec(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _lm(args) -> LmConfig:
    cfg = LmConfig()
    if getattr(args, "lm_max_iter", None) is not None:
        cfg = replace(cfg, max_iterations=args.lm_max_iter)
    return cfg


def cmd_count(args) -> int:
    spec = args.spec
    try:
        cl = classify(spec)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    fb = f_upper_bound(spec)
    print(f"spec {spec}  ({spec.label()})")
    print(f"p={cl.p} c={cl.c} s={cl.s} S={cl.S} kind={cl.kind}")
    print(f"F_max={fb.value:.6f} F_max_printed={fb.printed:.6f}")
    return 0


def _campaign_cfg(args, spec):
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    return CampaignConfig(spec, args.trials, args.seed, _lm(args), args.workers, args.objective)


def cmd_search(args) -> int:
    cfg = _campaign_cfg(args, args.spec)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rep = run_campaign(cfg, out / "records.ndjson")
    (out / "report.json").write_text(json.dumps(rep.to_dict(), indent=1) + "\n")
    print(f"{rep.spec}: p={rep.p} {rep.kind}  {rep.successes}/{rep.trials} successes "
          f"rate={rep.success_rate:.2f}%  min_F={rep.min_F:.3e}")
    return 0


def cmd_sweep(args) -> int:
    top = args.spec
    try:
        classify(top)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    specs = enumerate_subspecs(top)
    print(f"sweeping {len(specs)} specs below {top}, {args.trials} trials each")

    def progress(rep):
        print(f"  {rep.spec!s:18} p={rep.p:<4} {rep.kind:16} rate={rep.success_rate:7.2f}  min_F={rep.min_F:.3e}",
              flush=True)

    reports = sweep(top, args.trials, args.seed, _lm(args), args.workers, out / "records",
                    args.objective, progress=progress)
    write_csv(out / "table.csv", TABLE_HEADER, [table_row(r) for r in reports])
    entries, negatives = lattice_tally(reports)
    write_csv(out / "tally.csv", ["spec", "direct", "implied", "total", "trials"],
              [[e.spec.label(), e.direct, e.implied, e.total, e.trials] for e in entries])
    doc = {"top": top.label(), "seed": args.seed, "trials": args.trials,
           "implied_negatives": negatives, "reports": [r.to_dict() for r in reports]}
    (out / "reports.json").write_text(json.dumps(doc, indent=1) + "\n")
    print(f"implied negatives for {top}: {negatives}")
    return 0


def cmd_construct(args) -> int:
    kind, rest = args.kind, args.args
    try:
        if kind == "prime" and len(rest) == 1:
            mub = qubit_complete_set() if int(rest[0]) == 2 else prime_complete_set(int(rest[0]))
        elif kind == "qubit" and not rest:
            mub = qubit_complete_set()
        elif kind == "tensor" and len(rest) == 2:
            mub = tensor_triple(int(rest[0]), int(rest[1]))
        else:
            raise UsageError("usage: construct prime P | qubit | tensor D1 D2")
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    states = mub.as_state_set()
    chk = verify_mu(states, 1e-10)
    write_state_set(states, args.out)
    print(f"{mub.provenance}: d={mub.d}, {len(mub.bases)} bases, verify_mu "
          f"{'pass' if chk.ok else 'FAIL'} (max deviation {chk.max_deviation:.2e}) -> {args.out}")
    return 0 if chk.ok else 1


def cmd_verify(args) -> int:
    states = read_state_set(args.file)
    if not states.vectors().size:
        print("warning: state set is empty; nothing to check", file=sys.stderr)
    chk = verify_mu(states, args.tol)
    verdict = "PASS" if chk.ok else "FAIL"
    print(f"{verdict}: max deviation {chk.max_deviation:.3e} (tol {args.tol:g})")
    if chk.worst_pair is not None:
        b, j, b2, j2 = chk.worst_pair
        print(f"worst pair: group {b} member {j} vs group {b2} member {j2}")
    return 0 if chk.ok else 1


def cmd_dephase(args) -> int:
    states = read_state_set(args.file)
    try:
        res = dephase(states)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    extra = {}
    if res.point is not None:
        extra = {"spec": res.point.spec.label(), "angles": [float(a) for a in res.point.angles]}
    write_state_set(res.states, args.out, extra)
    print(f"dephased {states.d}-dimensional set with group sizes {list(res.states.sizes)} -> {args.out}")
    return 0


def cmd_hist(args) -> int:
    recs = [TrialRecord.from_dict(doc) for doc in read_ndjson(args.records)]
    hist = Histogram.of([r.final_f for r in recs])
    write_csv(args.out, ["lo", "hi", "count"], hist.rows())
    print(f"{len(recs)} records binned -> {args.out}")
    for lo, hi, c in hist.rows():
        if c:
            print(f"  [{lo:.0e}, {hi:.0e}): {c}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mubforge", description=__doc__.split("\n")[0],
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="parameter/constraint counts for a spec")
    p.add_argument("spec", type=_spec)
    p.set_defaults(func=cmd_count)

    def campaign_flags(p, out_default):
        p.add_argument("spec", type=_spec)
        p.add_argument("--trials", type=int, default=100)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--workers", type=int, default=default_workers())
        p.add_argument("--lm-max-iter", type=int, default=None)
        p.add_argument("--objective", choices=["abs", "squared"], default="abs")
        p.add_argument("--out", default=out_default)

    p = sub.add_parser("search", help="random-restart campaign for one spec")
    campaign_flags(p, "runs/search")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("sweep", help="campaigns for every table cell below a top spec")
    campaign_flags(p, "runs/sweep")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("construct", help="emit a known MU base set as state-set JSON")
    p.add_argument("kind", choices=["prime", "qubit", "tensor"])
    p.add_argument("args", nargs="*")
    p.add_argument("--out", default="states.json")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="check the MU conditions on a state-set file")
    p.add_argument("file")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dephase", help="bring a state-set file into dephased form")
    p.add_argument("file")
    p.add_argument("--out", default="dephased.json")
    p.set_defaults(func=cmd_dephase)

    p = sub.add_parser("hist", help="decade histogram of final F values from trial records")
    p.add_argument("records")
    p.add_argument("--out", default="hist.csv")
    p.set_defaults(func=cmd_hist)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
