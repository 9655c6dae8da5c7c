"""Command-line frontend: every lab operation, machine-readable output.

Results go to stdout in CSV (default) or JSON; diagnostics go to
stderr.  Exit codes: 0 success; 1 precondition/capacity/cache problem;
2 a checked mathematical property actually failed (nonempty sandwich
difference, Brun-Titchmarsh violation, broken chain inequality, failed
partition check) so CI can tell bugs from bad invocations; 64 usage.

CSV output carries scalar results as leading `# key=value` comment
lines followed by one table; JSON carries the same values as an object
(plus a "rows" array when there is a table).  The numeric content of
the two encodings is identical.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import aggregate, analytic, arith, egypt, report, types
from .errors import EgyfracError, PreconditionError

USAGE_EXIT = 64


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would sys.exit(2); we want 64
        raise _UsageError(f"{self.prog}: {message}")


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {v}")
    return v


def _checkpoints(text: str) -> list[int]:
    try:
        vals = [int(t) for t in text.split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad checkpoint list {text!r}")
    if not vals or any(b <= a for a, b in zip(vals, vals[1:])) or vals[0] < 2:
        raise argparse.ArgumentTypeError(
            f"checkpoints must be ascending integers >= 2, got {text!r}"
        )
    return vals


@dataclass(frozen=True)
class RunConfig:
    """A parsed invocation: subcommand, its parameters, and global flags."""

    subcommand: str
    params: dict
    fmt: str
    threads: int
    cache_path: str | None


@dataclass
class Output:
    """What a subcommand produced: scalar meta plus an optional table.

    json_payload, when set, is emitted verbatim in JSON mode (used where
    a schema is pinned, e.g. the growth report); CSV always renders
    meta as comments and rows as the table.
    """

    meta: dict
    rows: list = field(default_factory=list)
    columns: list | None = None
    json_payload: dict | None = None


def _norm(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.floating):
        return float(v)
    if isinstance(v, (list, tuple)):
        return [_norm(i) for i in v]
    if isinstance(v, dict):
        return {k: _norm(x) for k, x in v.items()}
    return v


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, tuple)):
        return ";".join(_cell(i) for i in v)
    return str(v)


def _emit(out: Output, fmt: str, fh) -> None:
    if fmt == "json":
        payload = out.json_payload
        if payload is None:
            payload = dict(out.meta)
            if out.rows:
                payload["rows"] = out.rows
        json.dump(_norm(payload), fh, indent=2)
        fh.write("\n")
        return
    for k, v in out.meta.items():
        fh.write(f"# {k}={_cell(_norm(v))}\n")
    if out.rows:
        cols = out.columns or list(out.rows[0])
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(cols)
        for row in out.rows:
            w.writerow([_cell(_norm(row.get(c))) for c in cols])


# ---------------------------------------------------------------------------
# subcommands


def _witness_cols(w: types.TypeWitness | None, prefix: str) -> dict:
    keys = ("a", "b", "c", "u", "t")
    if w is None:
        return {f"{prefix}_{k}": None for k in keys}
    return {f"{prefix}_{k}": getattr(w, k) for k in keys}


def _cmd_a3(cfg: RunConfig) -> tuple[Output, int]:
    p = cfg.params["p"]
    res = egypt.a3_exact(p, distinct=cfg.params["distinct"])
    ts = types.type_sets(p)
    t1, t2 = set(ts.type1), set(ts.type2)
    rows = []
    for m in res.members:
        rows.append(
            {
                "m": m,
                "type1": m in t1,
                "type2": m in t2,
                **_witness_cols(ts.witnesses1.get(m), "w1"),
                **_witness_cols(ts.witnesses2.get(m), "w2"),
            }
        )
    meta = {
        "command": "a3",
        "p": p,
        "distinct": cfg.params["distinct"],
        "a3": res.value,
        "n_type1": len(t1),
        "n_type2": len(t2),
        "overlap12": len(t1 & t2),
    }
    return Output(meta, rows), 0


def _cmd_types(cfg: RunConfig) -> tuple[Output, int]:
    p = cfg.params["p"]
    ts = types.type_sets(p)
    rows = [
        {"kind": w.kind, "m": w.m, "a": w.a, "b": w.b, "c": w.c, "u": w.u, "t": w.t}
        for w in list(ts.witnesses1.values()) + list(ts.witnesses2.values())
    ]
    meta = {
        "command": "types",
        "p": p,
        "n_type1": len(ts.type1),
        "n_type2": len(ts.type2),
        "overlap12": len(ts.overlap),
    }
    return Output(meta, rows), 0


def _cmd_sandwich(cfg: RunConfig) -> tuple[Output, int]:
    pmax = cfg.params["pmax"]
    rows = []
    violations = 0
    for p in arith.sieve_primes(pmax):
        p = int(p)
        if p < 5:
            continue
        rep = types.sandwich_check(p)
        if not rep.ok:
            violations += 1
        rows.append(
            {
                "p": p,
                "a3": rep.a3,
                "union_size": rep.union_size,
                "ok": rep.ok,
                "extra": rep.extra,
                "missing": rep.missing,
            }
        )
    meta = {
        "command": "sandwich",
        "pmax": pmax,
        "checked": len(rows),
        "violations": violations,
    }
    return Output(meta, rows), 2 if violations else 0


def _default_checkpoints(x: int) -> list[int]:
    cps = [1 << e for e in range(1, x.bit_length()) if (1 << e) <= x]
    if not cps or cps[-1] != x:
        cps.append(x)
    return cps


def _cmd_sum(cfg: RunConfig) -> tuple[Output, int]:
    x = cfg.params["x"]
    full_oracle = not cfg.params["types_only"]
    distinct = cfg.params["distinct"]
    flags = aggregate.flags_string(full_oracle, distinct)
    path = cfg.cache_path
    if path is None and os.environ.get("EGYFRAC_CACHE_DIR"):
        path = os.path.join(
            os.environ["EGYFRAC_CACHE_DIR"], f"records-x{x}-{flags}.csv"
        )
    if path and os.path.exists(path):
        records = aggregate.cache_load(path, expect_x=x, expect_flags=flags).records
        print(f"loaded {len(records)} records from {path}", file=sys.stderr)
    else:
        records = aggregate.build_records(
            x, full_oracle=full_oracle, distinct=distinct, threads=cfg.threads
        )
        if path:
            aggregate.cache_store(
                records, path, x=x, full_oracle=full_oracle, distinct=distinct
            )
            print(f"stored {len(records)} records to {path}", file=sys.stderr)
    cps = cfg.params["checkpoints"] or _default_checkpoints(x)
    if cps[-1] > x:
        raise PreconditionError(
            f"checkpoints beyond computed range: {cps[-1]} > {x}"
        )
    growth = aggregate.fit_growth(records, cps)
    payload = growth.as_json_dict()
    payload["meta"].update({"x": x, "flags": flags})
    rows = payload["checkpoints"]
    return (
        Output(meta=payload["meta"], rows=rows, json_payload=payload),
        0,
    )


def _cmd_tausum(cfg: RunConfig) -> tuple[Output, int]:
    A, B, k = cfg.params["A"], cfg.params["B"], cfg.params["k"]
    s = analytic.tau_sum(A, B, k)
    meta = {"command": "tausum", "A": A, "B": B, "k": k, "sum": s}
    if k <= A:
        row = analytic.tau_sum_ratio(A, B, k)
        meta.update(
            {
                "envelope": row.envelope,
                "ratio": row.ratio,
                "prop_envelope": row.extras["prop_envelope"],
                "prop_ratio": row.extras["prop_ratio"],
            }
        )
    return Output(meta), 0


def _cmd_charsum(cfg: RunConfig) -> tuple[Output, int]:
    q, N, H = cfg.params["q"], cfg.params["n"], cfg.params["h"]
    meta = {"command": "charsum", "q": q, "N": N, "H": H, "sum": analytic.char_sum(q, N, H)}
    if cfg.params["burgess"]:
        row = analytic.burgess_ratio(q, N, H, r=cfg.params["r"], eps=cfg.params["eps"])
        meta.update(
            {
                "r": cfg.params["r"],
                "eps": cfg.params["eps"],
                "envelope": row.envelope,
                "ratio": row.ratio,
                "pv_envelope": row.extras["pv_envelope"],
            }
        )
    return Output(meta), 0


def _cmd_btcheck(cfg: RunConfig) -> tuple[Output, int]:
    x, qmax = cfg.params["x"], cfg.params["qmax"]
    violations = analytic.bt_check(x, qmax)
    rows = [
        {"q": v.q, "a": v.a, "count": v.count, "bound": v.bound} for v in violations
    ]
    meta = {"command": "btcheck", "x": x, "qmax": qmax, "violations": len(rows)}
    return Output(meta, rows), 2 if rows else 0


def _cmd_tcount(cfg: RunConfig) -> tuple[Output, int]:
    x = cfg.params["x"]
    tc = analytic.t_count(x)
    lhs = analytic.type2_size_sum(x)
    chain_ok = lhs <= tc.tuples <= tc.tupr_rhs
    meta = {
        "command": "tcount",
        "x": x,
        "type2_sum": lhs,
        "tuples": tc.tuples,
        "tupr_rhs": tc.tupr_rhs,
        "phi_envelope": tc.phi_envelope,
        "chain_ok": chain_ok,
    }
    return Output(meta), 0 if chain_ok else 2


def _cmd_dyadic(cfg: RunConfig) -> tuple[Output, int]:
    x = cfg.params["x"]
    bands = analytic.dyadic_sum_table(x)
    cells = {r.params["N"]: r for r in analytic.dyadic_cell_table(max(x, 4))}
    rows = []
    for band in bands:
        N = band.params["N"]
        rows.append(
            {
                "N": N,
                "cells": cells[N].raw_sum,
                "cells_ratio": cells[N].ratio,
                "band_sum": band.raw_sum,
                "band_sum_float": float(band.raw_sum),
                "band_ratio": band.ratio,
            }
        )
    meta = {"command": "dyadic", "x": x}
    code = 0
    if cfg.params["partition"]:
        rep = analytic.dyadic_partition_check(x)
        meta["partition_ok"] = rep.ok
        meta["triples"] = rep.triples_global
        if not rep.ok:
            code = 2
    return Output(meta, rows), code


def _cmd_tailsum(cfg: RunConfig) -> tuple[Output, int]:
    row = analytic.tail_sum(cfg.params["x"])
    meta = {
        "command": "tailsum",
        "x": cfg.params["x"],
        "L": row.params["L"],
        "sum": row.raw_sum,
        "envelope": row.envelope,
        "ratio": row.ratio,
    }
    return Output(meta), 0


def _cmd_cache(cfg: RunConfig) -> tuple[Output, int]:
    bundle = aggregate.cache_load(cfg.params["inspect"])
    meta = {
        "command": "cache",
        "path": cfg.params["inspect"],
        "x": bundle.x,
        "flags": bundle.flags,
        "records": len(bundle.records),
        "p_first": bundle.records[0].p if bundle.records else None,
        "p_last": bundle.records[-1].p if bundle.records else None,
    }
    return Output(meta), 0


def _cmd_report(cfg: RunConfig) -> tuple[Output, int]:
    paths = report.render_report(
        x=cfg.params["x"], outdir=cfg.params["outdir"], threads=cfg.threads
    )
    meta = {"command": "report", "x": cfg.params["x"], "outdir": cfg.params["outdir"]}
    rows = [{"file": p} for p in paths]
    return Output(meta, rows), 0


_COMMANDS = {
    "a3": _cmd_a3,
    "types": _cmd_types,
    "sandwich": _cmd_sandwich,
    "sum": _cmd_sum,
    "tausum": _cmd_tausum,
    "charsum": _cmd_charsum,
    "btcheck": _cmd_btcheck,
    "tcount": _cmd_tcount,
    "dyadic": _cmd_dyadic,
    "tailsum": _cmd_tailsum,
    "cache": _cmd_cache,
    "report": _cmd_report,
}


def build_parser() -> _Parser:
    parser = _Parser(prog="egyfrac", description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    # also accepted after the subcommand; SUPPRESS keeps the top-level
    # value when the trailing flag is absent
    fmt_parent = _Parser(add_help=False)
    fmt_parent.add_argument(
        "--format", choices=("csv", "json"), default=argparse.SUPPRESS
    )
    sub = parser.add_subparsers(
        dest="command", required=True, parser_class=_Parser
    )

    def add_parser(name, **kw):
        return sub.add_parser(name, parents=[fmt_parent], **kw)

    p = add_parser("a3", help="A3(p) with members, type flags, witnesses")
    p.add_argument("--p", type=_positive, required=True)
    p.add_argument("--distinct", action="store_true")

    p = add_parser("types", help="Type I / Type II witness tables for one prime")
    p.add_argument("--p", type=_positive, required=True)

    p = add_parser("sandwich", help="oracle vs structured union, p up to pmax")
    p.add_argument("--pmax", type=_positive, required=True)

    p = add_parser("sum", help="growth report for S(x) = sum of A3(p)")
    p.add_argument("--x", type=_positive, required=True)
    p.add_argument("--checkpoints", type=_checkpoints, default=None)
    p.add_argument("--types-only", action="store_true", dest="types_only")
    p.add_argument("--distinct", action="store_true")
    p.add_argument("--threads", type=_positive, default=1)
    p.add_argument("--cache", default=None)

    p = add_parser("tausum", help="exact sum of tau(k*a*b^2+1) over a grid")
    p.add_argument("--A", type=_positive, required=True)
    p.add_argument("--B", type=_positive, required=True)
    p.add_argument("--k", type=_positive, default=1)

    p = add_parser("charsum", help="Jacobi-symbol interval sum")
    p.add_argument("--q", type=_positive, required=True)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--h", type=_positive, required=True)
    p.add_argument("--burgess", action="store_true")
    p.add_argument("--r", type=_positive, default=2)
    p.add_argument("--eps", type=float, default=0.01)

    p = add_parser("btcheck", help="Brun-Titchmarsh scan over all moduli")
    p.add_argument("--x", type=_positive, required=True)
    p.add_argument("--qmax", type=_positive, required=True)

    p = add_parser("tcount", help="tuple count vs progression majorant")
    p.add_argument("--x", type=_positive, required=True)

    p = add_parser("dyadic", help="dyadic band sums and cell counts")
    p.add_argument("--x", type=_positive, required=True)
    p.add_argument("--partition", action="store_true")

    p = add_parser("tailsum", help="tail sum S(L) vs (log2 L)^2")
    p.add_argument("--x", type=_positive, required=True)

    p = add_parser("cache", help="inspect a record cache file")
    p.add_argument("--inspect", required=True)

    p = add_parser("report", help="render tables and figures to a directory")
    p.add_argument("--x", type=_positive, default=1 << 13)
    p.add_argument("--outdir", default="report")
    p.add_argument("--threads", type=_positive, default=1)

    return parser


def dispatch(argv: list[str], stdout=None, stderr=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as e:
        print(f"usage error: {e}", file=stderr)
        return USAGE_EXIT
    ns = vars(args)
    cfg = RunConfig(
        subcommand=ns.pop("command"),
        fmt=ns.pop("format"),
        threads=ns.pop("threads", 1),
        cache_path=ns.pop("cache", None),
        params=ns,
    )
    try:
        out, code = _COMMANDS[cfg.subcommand](cfg)
    except EgyfracError as e:
        print(f"error: {e}", file=stderr)
        return 1
    _emit(out, cfg.fmt, stdout)
    return code


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
