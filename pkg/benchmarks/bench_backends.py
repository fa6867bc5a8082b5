"""Compare the numba and pure-numpy kernel backends.

Each backend runs in its own interpreter because the backend is chosen
once at import time from CIPHERBENCH_BACKEND.

    python3 benchmarks/bench_backends.py [--min-duration 1.0] [--payload 1048576]
"""
import argparse
import json
import os
import subprocess
import sys

CHILD = r"""
import json, sys, time
import numpy as np
from cipherbench import bench, cracker
from cipherbench._backend import BACKEND

payload, min_duration = int(sys.argv[1]), float(sys.argv[2])
out = {"backend": BACKEND, "bench": {}}
for algo in ("des", "tdes", "aes128"):
    r = bench.measure(algo, "ctr", payload, min_duration)
    out["bench"][algo] = {"throughput": r.throughput, "checksum": r.checksum}

# warm the search kernel, then time a fixed 2^18-candidate miss
job, _ = cracker.plant(np.random.default_rng(1), cracker.low_free_positions(10))
cracker.crack(job)
job, _ = cracker.plant(np.random.default_rng(2), cracker.low_free_positions(18))
miss = cracker.CrackJob(job.known_plaintext, job.known_ciphertext,
                        job.template ^ (1 << 40), job.free_positions)
res = cracker.crack(miss)
out["crack_rate"] = res.measured_rate
print(json.dumps(out))
"""


def run(backend, payload, min_duration):
    env = dict(os.environ, CIPHERBENCH_BACKEND=backend)
    proc = subprocess.run(
        [sys.executable, "-c", CHILD, str(payload), str(min_duration)],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--payload", type=int, default=1 << 20)
    ap.add_argument("--min-duration", type=float, default=1.0)
    args = ap.parse_args()

    runs = {b: run(b, args.payload, args.min_duration) for b in ("numba", "numpy")}
    nb, npy = runs["numba"], runs["numpy"]
    if nb["backend"] != "numba":
        print("numba is not importable here; both runs used the numpy backend")

    print(f"{'workload':<14} {'numba':>12} {'numpy':>12} {'speedup':>8}")
    for algo in ("des", "tdes", "aes128"):
        a = nb["bench"][algo]["throughput"] / 1e6
        b = npy["bench"][algo]["throughput"] / 1e6
        print(f"{algo + ' ctr MB/s':<14} {a:>12.2f} {b:>12.2f} {a / b:>7.1f}x")
    a, b = nb["crack_rate"], npy["crack_rate"]
    print(f"{'crack keys/s':<14} {a:>12,} {b:>12,} {a / b:>7.1f}x")

    # Timed runs cover different iteration counts, so equality of the work
    # itself is checked on a fixed workload.
    code = ("from cipherbench import bench;"
            "print(' '.join(bench.run_workload(a, 'ctr', 4096, 3)[:16] "
            "for a in ('des', 'tdes', 'aes128')))")
    sums = {}
    for backend in ("numba", "numpy"):
        env = dict(os.environ, CIPHERBENCH_BACKEND=backend)
        sums[backend] = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                                       text=True, check=True).stdout.strip()
    verdict = "identical" if sums["numba"] == sums["numpy"] else "MISMATCH"
    print(f"fixed-workload checksums: {verdict} ({sums['numba']})")
    return 0 if verdict == "identical" else 1


if __name__ == "__main__":
    sys.exit(main())
