"""Render a run summary: delimited tables plus matplotlib figures.

The report directory ends up with

    records.csv        per-prime counts (same versioned format the cache uses)
    growth.csv/.json   checkpoint sums and normalized ratios
    analytic.csv       dyadic band / cell / tail scaling rows
    growth_ratios.png  the three growth normalizations vs x
    per_prime.png      A3(p) and the two family sizes, per prime
    scaling_panel.png  dyadic sums, cell counts, tail sums vs envelopes

Figures are rendered with the Agg backend (no display needed).
"""

from __future__ import annotations

import csv
import json
import math
import os

from . import aggregate, analytic


def _pow2_checkpoints(x: int) -> list[int]:
    cps = [1 << e for e in range(1, x.bit_length()) if (1 << e) <= x]
    if cps[-1] != x:
        cps.append(x)
    return cps


def render_report(
    x: int = 1 << 13,
    outdir: str = "report",
    threads: int = 1,
    records: list[aggregate.A3Record] | None = None,
) -> list[str]:
    """Build (or reuse) records for x, write tables and figures; returns paths."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    os.makedirs(outdir, exist_ok=True)
    if records is None:
        records = aggregate.build_records(x, full_oracle=True, threads=threads)
    growth = aggregate.fit_growth(records, _pow2_checkpoints(x))
    paths = []

    def out(name: str) -> str:
        paths.append(os.path.join(outdir, name))
        return paths[-1]

    aggregate.cache_store(records, out("records.csv"), x=x)

    with open(out("growth.json"), "w") as fh:
        json.dump(growth.as_json_dict(), fh, indent=2)
        fh.write("\n")
    with open(out("growth.csv"), "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "s", "s1", "s2", "ratio3", "ratio3ll", "ratio5"])
        for c in growth.checkpoints:
            w.writerow([c.x, c.s, c.s1, c.s2, c.ratio3, c.ratio3ll, c.ratio5])

    band_x = min(x, 1 << 14)
    bands = analytic.dyadic_sum_table(1 << (band_x.bit_length() - 1))
    cells = analytic.dyadic_cell_table(1 << 20)
    tails = analytic.tail_table(64)
    with open(out("analytic.csv"), "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["table", "size", "raw_sum", "envelope", "ratio"])
        for r in bands:
            w.writerow(["dyadic_sum", r.params["N"], float(r.raw_sum), r.envelope, r.ratio])
        for r in cells:
            w.writerow(["dyadic_cells", r.params["N"], r.raw_sum, r.envelope, r.ratio])
        for r in tails:
            w.writerow(["tail_sum", r.params["L"], r.raw_sum, r.envelope, r.ratio])

    # growth ratios
    fig, ax = plt.subplots(figsize=(7, 4.5))
    xs = [c.x for c in growth.checkpoints]
    ax.semilogx(xs, [c.ratio3 for c in growth.checkpoints], "o-", base=2, label="S/(x lg^3 x)")
    ll = [(c.x, c.ratio3ll) for c in growth.checkpoints if c.ratio3ll is not None]
    if ll:
        ax.semilogx(*zip(*ll), "s-", base=2, label="S/(x lg^3 x (lg lg x)^2)")
    ax.semilogx(xs, [c.ratio5 for c in growth.checkpoints], "^-", base=2, label="S/(x lg^5 x)")
    ax.set_yscale("log")
    ax.set_xlabel("x")
    ax.set_ylabel("normalized sum")
    ax.set_title(f"Growth of S(x) = sum of A3(p) for p <= x (x = {x})")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(out("growth_ratios.png"), dpi=120)
    plt.close(fig)

    # per-prime scatter
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ps = [r.p for r in records]
    ax.plot(ps, [r.a3 for r in records], ".", ms=2.5, label="A3(p)")
    ax.plot(ps, [r.a3_type1 for r in records], ".", ms=1.5, alpha=0.6, label="|Type I|")
    ax.plot(ps, [r.a3_type2 for r in records], ".", ms=1.5, alpha=0.6, label="|Type II|")
    ax.set_xlabel("p")
    ax.set_ylabel("count")
    ax.set_title("Per-prime counts")
    ax.legend(markerscale=4)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out("per_prime.png"), dpi=120)
    plt.close(fig)

    # scaling panel
    fig, axes = plt.subplots(1, 3, figsize=(12, 3.8))
    axes[0].semilogx([r.params["N"] for r in bands], [r.ratio for r in bands], "o-", base=2)
    axes[0].set_title("dyadic band sums / lg^3 x")
    axes[0].set_xlabel("N")
    axes[1].semilogx([r.params["N"] for r in cells], [r.ratio for r in cells], "o-", base=2)
    axes[1].set_title("dyadic cell counts / lg^2 x")
    axes[1].set_xlabel("N")
    axes[2].plot([r.params["L"] for r in tails], [r.ratio for r in tails], "o-")
    axes[2].set_title("tail sums / lg^2 L")
    axes[2].set_xlabel("L")
    for ax in axes:
        ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out("scaling_panel.png"), dpi=120)
    plt.close(fig)

    return paths
