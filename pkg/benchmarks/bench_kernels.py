"""Time the numba kernels against the pure fallback (KNOTHETA_NUMBA=0).

Each backend runs in its own interpreter because the backend is chosen at
import time.  The first call is excluded so numba compilation is not timed.

    python3 benchmarks/bench_kernels.py [--repeat N] [--braid 1,-2,1,-2,...]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

PROBE = r"""
import json, sys, time
from knotheta import _kernels as K
from knotheta.diagram import from_braid
from knotheta.kauffman import jones_unreduced
from knotheta.theta import theta_jones

word, repeat = json.loads(sys.argv[1]), int(sys.argv[2])
d = from_braid(word)
jobs = {"jones_unreduced": lambda: jones_unreduced(d, 1), "theta_jones": lambda: theta_jones(d, 1)}
out = {"backend": K.BACKEND, "crossings": d.n}
for name, job in jobs.items():
    ref = job()
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        assert job() == ref
        best = min(best, time.perf_counter() - t0)
    out[name] = best
print(json.dumps(out))
"""


def run_backend(numba: bool, word: list[int], repeat: int) -> dict:
    env = dict(os.environ, KNOTHETA_NUMBA="1" if numba else "0")
    proc = subprocess.run([sys.executable, "-c", PROBE, json.dumps(word), str(repeat)],
                          env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--braid", default="1,-2,1,-2,1,-2,3,-2,3,1,-3,2",
                    help="comma-separated braid word for the benchmark diagram")
    args = ap.parse_args(argv)
    word = [int(x) for x in args.braid.split(",")]
    fast = run_backend(True, word, args.repeat)
    slow = run_backend(False, word, args.repeat)
    print(f"{fast['crossings']} crossings, best of {args.repeat}")
    print(f"{'kernel':<18}{fast['backend']:>10}{slow['backend']:>10}{'speedup':>10}")
    for name in ("jones_unreduced", "theta_jones"):
        print(f"{name:<18}{fast[name]:>9.3f}s{slow[name]:>9.3f}s{slow[name] / fast[name]:>9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
