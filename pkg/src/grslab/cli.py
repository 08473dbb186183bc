"""Command-line front end: simulate, bounds, table1, compare, code gen.

Exit code 0 on success, 2 on configuration errors.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .bounds import (
    DmcModel,
    approx_ub_bec,
    e0,
    ensemble_union_bound,
    er,
    mutual_information,
    rcu_bound_grs,
)
from .errors import ConfigError, GrslabError
from .gf import field_new, parse_poly
from .grs import grs_new, weight_class_bound
from .harness import (
    COMPARE_PAIRINGS,
    ExperimentSpec,
    TrialPolicy,
    compare_sources,
    make_code,
    run,
    table1,
    write_table1_csv,
)

BOUND_COLUMNS = ["kind", "param", "value", "ci_lo", "ci_hi"]


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ConfigError(path, "spec file not found") from None
    except json.JSONDecodeError as e:
        raise ConfigError(path, f"invalid JSON: {e}") from None


def _cmd_simulate(args) -> int:
    doc = _load_json(args.spec)
    if args.seed is not None:
        doc["seed"] = args.seed
    if args.workers is not None:
        doc["workers"] = args.workers
    spec = ExperimentSpec.from_dict(doc)
    result = run(spec, trace_path=args.trace)
    result.write_csv(args.out)
    for pt in result.points:
        print(f"param={pt['channel_param']} trials={pt['trials']} fer={pt['fer']:.4g}")
    return 0


def _write_bound_csv(path: str, rows):
    with open(path, "w") as fh:
        fh.write(",".join(BOUND_COLUMNS) + "\n")
        for r in rows:
            fh.write(",".join(str(x) for x in r) + "\n")


def _cmd_bounds(args) -> int:
    doc = _load_json(args.spec)
    kind = doc.get("kind")
    rows = []
    if kind == "approx-ub":
        code = make_code(doc["code"])
        for eps in doc["grid"]:
            v = approx_ub_bec(code.N, code.K_full, code.n, code.k, eps)
            rows.append(("approx-ub", eps, v, "", ""))
    elif kind == "union":
        code = make_code(doc["code"])
        q, n, k, m = code.field.q, code.n, code.k, code.field.m
        spectrum = [weight_class_bound(n, k, q, w) for w in range(n + 1)]
        for eps in doc["grid"]:
            model = DmcModel.erasure(code.field.p, eps)
            rows.append(("union", eps, ensemble_union_bound(spectrum, n, k, q, m, model), "", ""))
    elif kind == "rcu":
        code = make_code(doc["code"])
        for param in doc["grid"]:
            mean, lo, hi = rcu_bound_grs(
                code, doc.get("channel", "bpsk-awgn"), param,
                trials=doc.get("trials", 200), seed=doc.get("seed", 0),
                cw_samples=doc.get("cw_samples", 200),
            )
            rows.append(("rcu", param, mean, lo, hi))
    elif kind in ("e0", "er", "mutual-information"):
        model = _model_from_doc(doc)
        for x in doc["grid"]:
            if kind == "e0":
                rows.append(("e0", x, e0(model, x), "", ""))
            elif kind == "er":
                rows.append(("er", x, er(model, x), "", ""))
            else:
                rows.append(("mutual-information", x, mutual_information(model), "", ""))
    else:
        raise ConfigError("kind", f"unknown bound kind {kind!r}")
    _write_bound_csv(args.out, rows)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def _model_from_doc(doc: dict) -> DmcModel:
    ch = doc.get("model", {})
    mk = ch.get("kind", "bec")
    if mk == "bec":
        return DmcModel.bec(ch.get("eps", 0.5))
    if mk == "erasure":
        return DmcModel.erasure(ch.get("p", 3), ch.get("eps", 0.5))
    if mk == "bpsk-awgn":
        return DmcModel.bpsk_awgn(ch.get("sigma", 1.0))
    if mk == "pam3-awgn":
        return DmcModel.pam3_awgn(ch.get("sigma", 1.0))
    raise ConfigError("model.kind", f"unknown model {mk!r}")


def _cmd_table1(args) -> int:
    rows = table1(
        K_list=[int(x) for x in args.k.split(",")],
        eps_list=[float(x) for x in args.eps.split(",")],
        trials=args.trials, seed=args.seed or 0, workers=args.workers or 1,
    )
    write_table1_csv(rows, args.out)
    for r in rows:
        print(
            f"K={r['K']} eps={r['eps']}: change-of-basis "
            f"{r['mean_iters_change_of_basis']:.2f}, original GE "
            f"{r['mean_iters_original_ge']:.2f}"
        )
    return 0


def _cmd_compare(args) -> int:
    grid = [float(x) for x in args.grid.split(",")]
    policy = TrialPolicy(
        min_trials=args.min_trials, min_errors=args.min_errors, max_trials=args.max_trials
    )
    res_a, res_b = compare_sources(
        args.pairing, grid, policy=policy, seed=args.seed or 0, workers=args.workers or 1
    )
    a, b = COMPARE_PAIRINGS[args.pairing][0], COMPARE_PAIRINGS[args.pairing][2]
    res_a.write_csv(f"{args.out_prefix}_{a}.csv")
    res_b.write_csv(f"{args.out_prefix}_{b}.csv")
    print(f"wrote {args.out_prefix}_{a}.csv and {args.out_prefix}_{b}.csv")
    return 0


def _cmd_code_gen(args) -> int:
    f = parse_poly(args.f) if args.f else None
    field = field_new(args.p, args.m, f)
    code = grs_new(
        field, args.n, args.k, j=args.mult, a=args.shift, seed=args.seed or 0,
        extend_zero=args.extend_zero, shorten=args.shorten,
    )
    with open(args.out, "w") as fh:
        fh.write(code.to_json())
    print(f"wrote {args.out}: {code}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="grslab", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="Monte Carlo FER sweep from a spec file")
    sim.add_argument("--spec", required=True)
    sim.add_argument("--seed", type=int)
    sim.add_argument("--workers", type=int)
    sim.add_argument("--out", required=True)
    sim.add_argument("--trace", help="optional per-trial CSV")
    sim.set_defaults(fn=_cmd_simulate)

    bnd = sub.add_parser("bounds", help="evaluate analytical bounds to CSV")
    bnd.add_argument("--spec", required=True)
    bnd.add_argument("--out", required=True)
    bnd.set_defaults(fn=_cmd_bounds)

    t1 = sub.add_parser("table1", help="mean change-of-basis vs original GE iterations")
    t1.add_argument("--k", default="256,512,768")
    t1.add_argument("--eps", default="0.1,0.2,0.3")
    t1.add_argument("--trials", type=int, default=10_000)
    t1.add_argument("--seed", type=int)
    t1.add_argument("--workers", type=int)
    t1.add_argument("--out", required=True)
    t1.set_defaults(fn=_cmd_table1)

    cmp_ = sub.add_parser("compare", help="paired source/code comparison")
    cmp_.add_argument("--pairing", required=True, choices=sorted(COMPARE_PAIRINGS))
    cmp_.add_argument("--grid", required=True, help="comma-separated E_b/N0 dB values")
    cmp_.add_argument("--min-trials", type=int, default=1000)
    cmp_.add_argument("--min-errors", type=int, default=100)
    cmp_.add_argument("--max-trials", type=int, default=1_000_000)
    cmp_.add_argument("--seed", type=int)
    cmp_.add_argument("--workers", type=int)
    cmp_.add_argument("--out-prefix", required=True)
    cmp_.set_defaults(fn=_cmd_compare)

    code = sub.add_parser("code", help="code utilities")
    code_sub = code.add_subparsers(dest="code_command", required=True)
    gen = code_sub.add_parser("gen", help="emit a pinned code JSON document")
    gen.add_argument("--p", type=int, required=True)
    gen.add_argument("--m", type=int, required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--k", type=int, required=True)
    gen.add_argument("--f", help="comma-separated ascending coefficients incl. leading 1")
    gen.add_argument("--mult", default="random", help="'random', 'zero'")
    gen.add_argument("--shift", default="zero", help="'random', 'zero'")
    gen.add_argument("--seed", type=int)
    gen.add_argument("--extend-zero", action="store_true")
    gen.add_argument("--shorten", type=int, default=0)
    gen.add_argument("--out", required=True)
    gen.set_defaults(fn=_cmd_code_gen)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except GrslabError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
