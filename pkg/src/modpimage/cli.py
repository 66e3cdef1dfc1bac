"""Command line: ``modpimage {tables,census,infer,ingest,synth,verify}``.

Exit codes: 0 success, 2 unrealizable input or contract failure, 3 capacity.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .config import DEFAULT_SEED
from .errors import CapacityError, ModpImageError
from .ffield import full_unit_group, gf, trivial_subgroup
from .imageinfer import ext_degrees, infer
from .tracecensus import census_bruteforce, census_formula, generate_table

EXIT_OK, EXIT_ERROR, EXIT_CAPACITY = 0, 2, 3


def _emit(obj, out=None):
    text = json.dumps(obj, indent=2, ensure_ascii=False)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _unit_group(F, which: str):
    return full_unit_group(F) if which == "full" else trivial_subgroup(F)


# -- subcommands ---------------------------------------------------------------

def cmd_tables(args) -> int:
    tables = [generate_table(2, d, m, verify=args.verify)
              for m in args.m for d in args.d]
    if args.json:
        _emit({"tables": [dict(t.to_json(), grid=t.grid()) for t in tables]})
    else:
        print("\n\n".join(t.render() for t in tables))
    return EXIT_OK


def cmd_census(args) -> int:
    from .modlat import default_embedding

    F = gf(args.p, args.d)
    out = {"p": args.p, "d": args.d, "m": args.m, "alpha": args.alpha, "beta": args.beta}
    if args.p == 2:
        out["formula"] = census_formula(args.p, args.d, args.m, args.alpha, args.beta)
        emb = default_embedding(F, args.m, args.alpha, args.beta)
    else:
        out["formula"] = census_formula(args.p, args.d, args.m)
        emb = default_embedding(F, args.m, args.m, 0)
    if args.bruteforce:
        t0 = time.perf_counter()
        res = census_bruteforce(emb, _unit_group(F, args.D), cap=args.cap, workers=args.workers)
        out["bruteforce"] = res.t
        out["evaluations"] = res.total
        out["seconds"] = round(time.perf_counter() - t0, 3)
        out["agree"] = res.t == out["formula"]
    _emit(out)
    return EXIT_OK if out.get("agree", True) else EXIT_ERROR


def cmd_infer(args) -> int:
    hyp = infer(args.p, args.d, args.m, args.t, args.det_order)
    _emit({"hypothesis": hyp.to_json(), "extension": ext_degrees(args.p, args.d, args.m, hyp.alpha, hyp.beta).to_json()})
    return EXIT_OK


def _ingest_one(path: str) -> dict:
    from .heckeio import analyze, load_dataset

    return dict(analyze(load_dataset(path)), file=path)


def cmd_ingest(args) -> int:
    # independent files run concurrently; each analysis keeps its own state
    with ThreadPoolExecutor(max_workers=min(4, len(args.files))) as pool:
        reports = list(pool.map(_ingest_one, args.files))
    _emit(reports[0] if len(reports) == 1 else reports, args.report)
    return EXIT_OK


def cmd_synth(args) -> int:
    from .heckeio import serialize, synth_dataset
    from .modlat import default_embedding

    F = gf(args.p, args.d)
    alpha = args.alpha if args.p == 2 else args.m
    beta = args.beta if args.p == 2 else 0
    D = _unit_group(F, args.D) if args.D == "full" else None
    ds = synth_dataset(default_embedding(F, args.m, alpha, beta), D, args.count, args.seed, level=args.level)
    data = serialize(ds)
    if args.out:
        Path(args.out).write_bytes(data)
    else:
        sys.stdout.write(data.decode("utf-8"))
    return EXIT_OK


def cmd_verify(args) -> int:
    from . import suites

    report = suites.SUITES[args.suite](q=args.q, seed=args.seed, count=args.count)
    _emit(report, args.report)
    return EXIT_OK if report["passed"] else EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="modpimage", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    t = sub.add_parser("tables", help="trace-count tables for p=2")
    t.add_argument("--d", type=int, nargs="+", default=[2, 3, 4])
    t.add_argument("--m", type=int, nargs="+", default=[1, 2, 3])
    t.add_argument("--json", action="store_true")
    t.add_argument("--verify", action="store_true", help="brute-force the cheap cells too")
    t.set_defaults(func=cmd_tables)

    c = sub.add_parser("census", help="distinct-trace count of one module")
    c.add_argument("--p", type=int, default=2)
    c.add_argument("--d", type=int, required=True)
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--alpha", type=int, default=0)
    c.add_argument("--beta", type=int, default=0)
    c.add_argument("--D", choices=["trivial", "full"], default="trivial")
    c.add_argument("--bruteforce", action="store_true")
    c.add_argument("--workers", type=int, default=1)
    c.add_argument("--cap", type=int, default=None)
    c.set_defaults(func=cmd_census)

    i = sub.add_parser("infer", help="image group from a trace count")
    i.add_argument("--p", type=int, default=2)
    i.add_argument("--d", type=int, required=True)
    i.add_argument("--m", type=int, required=True)
    i.add_argument("--t", type=int, required=True)
    i.add_argument("--det-order", type=int, default=1)
    i.set_defaults(func=cmd_infer)

    g = sub.add_parser("ingest", help="analyze Hecke trace datasets")
    g.add_argument("files", nargs="+")
    g.add_argument("--report", default=None)
    g.set_defaults(func=cmd_ingest)

    s = sub.add_parser("synth", help="synthetic dataset from a known module")
    s.add_argument("--p", type=int, default=2)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--alpha", type=int, default=0)
    s.add_argument("--beta", type=int, default=0)
    s.add_argument("--D", choices=["trivial", "full"], default="trivial")
    s.add_argument("--count", type=int, required=True)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--level", type=int, default=1)
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_synth)

    v = sub.add_parser("verify", help="desk-scale checks of the structural results")
    v.add_argument("--suite", required=True, choices=["nonsplit", "corollary", "modules", "normal", "appendix"])
    v.add_argument("--q", type=int, default=4)
    v.add_argument("--seed", type=int, default=DEFAULT_SEED)
    v.add_argument("--count", type=int, default=None, help="number of random trials")
    v.add_argument("--report", default=None)
    v.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as exc:
        print(json.dumps({"error": "capacity", "message": str(exc), "required": exc.required, "cap": exc.cap}),
              file=sys.stderr)
        return EXIT_CAPACITY
    except ModpImageError as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        for key in ("below", "above", "code"):
            if hasattr(exc, key):
                err[key] = getattr(exc, key)
        print(json.dumps(err), file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
