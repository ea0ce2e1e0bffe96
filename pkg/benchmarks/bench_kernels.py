"""Time the polymorphism kernels on both backends.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--json]

Each workload is a full check that passes (no early exit), so both backends
walk the same amount of work.
"""

import argparse
import json
import time

from pcsp_lab import _kernels
from pcsp_lab.polymorphisms import (
    alternating_threshold_block,
    family_member,
    is_block_polymorphism,
    is_polymorphism,
)
from pcsp_lab.structures import boolean
from pcsp_lab.templates import nae, odd_k, t_in_k


def workloads():
    odd4 = boolean(odd_k(4))
    one3, nae3 = boolean(t_in_k(1, 3)), boolean(nae(3))
    one5, nae5 = boolean(t_in_k(1, 5)), boolean(nae(5))
    for m in (5, 7):
        f = family_member("XOR", m)
        yield f"sequence XOR_{m} on odd-in-4", lambda b, f=f: is_polymorphism(f, odd4, odd4, b)
    for m in (10, 20, 40):
        g = alternating_threshold_block(m)
        yield f"block AT_{2 * m + 1} on (1-in-3, NAE)", lambda b, g=g: is_block_polymorphism(g, one3, nae3, b)
    g = alternating_threshold_block(12)
    yield "block AT_25 on (1-in-5, NAE)", lambda b, g=g: is_block_polymorphism(g, one5, nae5, b)


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        ok = fn()
        times.append(time.perf_counter() - t0)
    return min(times), ok


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()

    backends = _kernels.available_backends()
    rows = []
    for name, run in workloads():
        row = {"workload": name}
        for b in backends:
            run(b)  # warm-up, includes numba compilation
            secs, ok = best_of(lambda: run(b), args.repeat)
            row[b] = secs
            row[f"{b}_result"] = ok
        if len({row[f"{b}_result"] for b in backends}) != 1:
            raise SystemExit(f"backends disagree on {name}")
        rows.append(row)

    if args.json:
        print(json.dumps(rows, indent=2))
        return
    header = f"{'workload':40s}" + "".join(f"{b:>12s}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10s}"
    print(header)
    for row in rows:
        line = f"{row['workload']:40s}" + "".join(f"{row[b]:11.4f}s" for b in backends)
        if len(backends) == 2:
            line += f"{row['numpy'] / max(row['numba'], 1e-9):9.1f}x"
        print(line)
    if len(backends) == 1:
        print("numba unavailable or disabled; only the numpy path was timed")


if __name__ == "__main__":
    main()
