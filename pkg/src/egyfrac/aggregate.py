"""Per-prime sweeps, growth-ratio tables, and the versioned result cache.

build_records computes one A3Record per prime p <= x.  Two modes:

  full-oracle (default): a3 comes from the exact representability scan
    and sandwich_ok records whether the structured union reproduced it.
  types-only: a3 is the size of {1,2,3} + {p,2p,3p} + TypeI + TypeII
    (the identity the full-oracle mode verifies), which reaches much
    larger x since no per-numerator oracle runs.

Aggregation is a deterministic ordered reduction (records sorted by p,
integer sums), so any thread count produces byte-identical output;
caches are written atomically and carry (version, x, flags, sha256) in
the header, and a mismatched or corrupted cache is always rejected,
never silently reused.
"""

from __future__ import annotations

import hashlib
import math
import multiprocessing
import os
import tempfile
from dataclasses import dataclass

import numpy as np

from . import arith, egypt
from ._kernels import (
    DIVBUF_LEN,
    TYPE_KERNEL_CAP,
    oracle_mask,
    spf_table,
    type1_mask,
    type2_mask,
)
from .errors import CacheIntegrityError, CapacityError, PreconditionError, StaleCacheError

FULL_ORACLE_CAP = 1 << 14
TYPES_ONLY_CAP = TYPE_KERNEL_CAP  # 1 << 17
#: the pairwise-distinct oracle is pure Python and much slower
DISTINCT_CAP = 1 << 10

_CACHE_MAGIC = "# egyfrac-cache"
_CACHE_VERSION = "v1"
_CACHE_COLUMNS = "p,a3,a3_type1,a3_type2,overlap12,sandwich_ok"


@dataclass(frozen=True)
class A3Record:
    """Counts for one prime: oracle (or union) size, family sizes, overlap."""

    p: int
    a3: int
    a3_type1: int
    a3_type2: int
    overlap12: int
    sandwich_ok: bool | None


def flags_string(full_oracle: bool, distinct: bool) -> str:
    return ("full-oracle" if full_oracle else "types-only") + (
        "+distinct" if distinct else ""
    )


# per-process scratch for the sweep workers (set up by _init_worker; under
# multiprocessing each worker process initializes its own copy)
_scratch: dict = {}


def _init_worker(x: int) -> None:
    _scratch["spf"] = spf_table(3 * x)
    _scratch["divbuf"] = np.zeros(DIVBUF_LEN, dtype=np.int64)


def _build_one(args: tuple[int, bool, bool]) -> A3Record:
    p, full_oracle, distinct = args
    t1 = type1_mask(p)
    t2 = type2_mask(p)
    n1 = int(t1.sum())
    n2 = int(t2.sum())
    ov = int((t1 & t2).sum())
    sandwich: bool | None = None
    if distinct:
        a3 = egypt.a3_exact(p, distinct=True).value
    elif full_oracle:
        om = oracle_mask(p, _scratch["spf"], _scratch["divbuf"])
        a3 = int(om.sum())
        if p >= 5:
            union = t1 | t2
            for m in (1, 2, 3, p, 2 * p, 3 * p):
                union[m] = 1
            sandwich = bool(np.array_equal(om, union))
    elif p >= 5:
        union = t1 | t2
        for m in (1, 2, 3, p, 2 * p, 3 * p):
            union[m] = 1
        a3 = int(union.sum())
    else:
        a3 = egypt.a3_exact(p).value
    return A3Record(p, a3, n1, n2, ov, sandwich)


def build_records(
    x: int,
    full_oracle: bool = True,
    distinct: bool = False,
    threads: int = 1,
) -> list[A3Record]:
    """One A3Record per prime p <= x, ascending."""
    if x < 2:
        raise PreconditionError(f"need x >= 2, got {x}")
    if distinct and x > DISTINCT_CAP:
        raise CapacityError(f"x={x} beyond distinct-mode cap {DISTINCT_CAP}")
    cap = FULL_ORACLE_CAP if full_oracle else TYPES_ONLY_CAP
    if x > cap:
        raise CapacityError(
            f"x={x} beyond {flags_string(full_oracle, distinct)} cap {cap}"
        )
    tasks = [(int(p), full_oracle, distinct) for p in arith.sieve_primes(x)]
    if threads > 1 and len(tasks) > 1:
        with multiprocessing.Pool(
            threads, initializer=_init_worker, initargs=(x,)
        ) as pool:
            records = pool.map(_build_one, tasks, chunksize=16)
    else:
        _init_worker(x)
        records = [_build_one(t) for t in tasks]
    return sorted(records, key=lambda r: r.p)


# ---------------------------------------------------------------------------
# growth ratios


@dataclass(frozen=True)
class Checkpoint:
    x: int
    s: int
    s1: int
    s2: int
    ratio3: float
    ratio3ll: float | None
    ratio5: float


@dataclass(frozen=True)
class GrowthReport:
    checkpoints: list[Checkpoint]
    meta: dict

    def as_json_dict(self) -> dict:
        return {
            "checkpoints": [
                {
                    "x": c.x,
                    "s": c.s,
                    "s1": c.s1,
                    "s2": c.s2,
                    "ratio3": c.ratio3,
                    "ratio3ll": c.ratio3ll,
                    "ratio5": c.ratio5,
                }
                for c in self.checkpoints
            ],
            "meta": dict(self.meta),
        }


def fit_growth(records: list[A3Record], checkpoints: list[int]) -> GrowthReport:
    """Cumulative S(x), S_I(x), S_II(x) and normalized growth ratios.

    checkpoints must be ascending, each >= 2, and within the x the
    records were built for (primes between max(p) and that x contribute
    nothing, so checkpoints up to the build x are exact).
    ratio3ll is None at x = 2, where the log2 log2 factor vanishes.
    """
    if not checkpoints:
        raise PreconditionError("need at least one checkpoint")
    if any(b <= a for a, b in zip(checkpoints, checkpoints[1:])):
        raise PreconditionError(f"checkpoints must be ascending: {checkpoints}")
    if checkpoints[0] < 2:
        raise PreconditionError(f"checkpoints must be >= 2: {checkpoints}")
    recs = sorted(records, key=lambda r: r.p)
    out = []
    i = 0
    s = s1 = s2 = 0
    for cx in checkpoints:
        while i < len(recs) and recs[i].p <= cx:
            s += recs[i].a3
            s1 += recs[i].a3_type1
            s2 += recs[i].a3_type2
            i += 1
        lg = math.log2(cx)
        ratio3 = s / (cx * lg**3)
        ratio5 = s / (cx * lg**5)
        ratio3ll = None if cx <= 2 else s / (cx * lg**3 * math.log2(lg) ** 2)
        out.append(Checkpoint(cx, s, s1, s2, ratio3, ratio3ll, ratio5))
    meta = {
        "log_base": 2,
        "ratio3": "s / (x * log2(x)^3)",
        "ratio3ll": "s / (x * log2(x)^3 * log2(log2(x))^2), null at x=2",
        "ratio5": "s / (x * log2(x)^5)",
    }
    return GrowthReport(out, meta)


# ---------------------------------------------------------------------------
# cache


@dataclass(frozen=True)
class CacheBundle:
    x: int
    flags: str
    records: list[A3Record]


def _record_line(r: A3Record) -> str:
    sw = "" if r.sandwich_ok is None else ("1" if r.sandwich_ok else "0")
    return f"{r.p},{r.a3},{r.a3_type1},{r.a3_type2},{r.overlap12},{sw}\n"


def cache_store(
    records: list[A3Record],
    path: str,
    x: int,
    full_oracle: bool = True,
    distinct: bool = False,
) -> str:
    """Write the versioned record CSV atomically; returns the path."""
    flags = flags_string(full_oracle, distinct)
    body = _CACHE_COLUMNS + "\n" + "".join(
        _record_line(r) for r in sorted(records, key=lambda r: r.p)
    )
    digest = hashlib.sha256(body.encode()).hexdigest()
    header = f"{_CACHE_MAGIC} {_CACHE_VERSION}; x={x}; flags={flags}; sha256={digest}\n"
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(header + body)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def cache_load(
    path: str,
    expect_x: int | None = None,
    expect_flags: str | None = None,
) -> CacheBundle:
    """Read a record CSV back, verifying version, checksum, and key.

    Version or key mismatch -> StaleCacheError; anything structurally
    wrong with the bytes (unreadable, bad magic, checksum, row order,
    field count) -> CacheIntegrityError.
    """
    try:
        with open(path, "r", newline="") as fh:
            text = fh.read()
    except OSError as e:
        raise CacheIntegrityError(f"{path}: cannot read cache: {e}")
    nl = text.find("\n")
    if nl < 0 or not text.startswith(_CACHE_MAGIC):
        raise CacheIntegrityError(f"{path}: not an egyfrac cache file")
    header, body = text[: nl + 1], text[nl + 1:]
    fields = header[len(_CACHE_MAGIC):].strip().split("; ")
    if len(fields) != 4:
        raise CacheIntegrityError(f"{path}: malformed cache header")
    version = fields[0]
    kv = {}
    for f in fields[1:]:
        k, _, v = f.partition("=")
        kv[k] = v
    if set(kv) != {"x", "flags", "sha256"}:
        raise CacheIntegrityError(f"{path}: malformed cache header")
    if version != _CACHE_VERSION:
        raise StaleCacheError(
            f"{path}: cache version {version!r} != {_CACHE_VERSION!r}"
        )
    digest = hashlib.sha256(body.encode()).hexdigest()
    if digest != kv["sha256"]:
        raise CacheIntegrityError(f"{path}: checksum mismatch")
    try:
        x = int(kv["x"])
    except ValueError:
        raise CacheIntegrityError(f"{path}: bad x in header: {kv['x']!r}")
    flags = kv["flags"]
    if expect_x is not None and x != expect_x:
        raise StaleCacheError(f"{path}: cache has x={x}, wanted x={expect_x}")
    if expect_flags is not None and flags != expect_flags:
        raise StaleCacheError(
            f"{path}: cache has flags={flags!r}, wanted {expect_flags!r}"
        )
    lines = body.splitlines()
    if not lines or lines[0] != _CACHE_COLUMNS:
        raise CacheIntegrityError(f"{path}: missing column header")
    records = []
    last_p = 0
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 6:
            raise CacheIntegrityError(f"{path}: bad row {ln!r}")
        try:
            p, a3, n1, n2, ov = (int(v) for v in parts[:5])
        except ValueError:
            raise CacheIntegrityError(f"{path}: bad row {ln!r}")
        if parts[5] == "":
            sw: bool | None = None
        elif parts[5] in ("0", "1"):
            sw = parts[5] == "1"
        else:
            raise CacheIntegrityError(f"{path}: bad sandwich flag in {ln!r}")
        if p <= last_p:
            raise CacheIntegrityError(f"{path}: rows not in increasing p at {ln!r}")
        last_p = p
        records.append(A3Record(p, a3, n1, n2, ov, sw))
    return CacheBundle(x, flags, records)
