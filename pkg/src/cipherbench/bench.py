"""Single-threaded throughput measurement for the block ciphers."""
import csv
import hashlib
import io
import json
import time
from dataclasses import asdict, dataclass

import numpy as np

from .errors import ContractError
from .modes import ALGORITHMS, CipherSuite, ModeSpec, mode_encrypt

KEY_OCTETS = {"des": 8, "tdes": 24, "aes128": 16, "aes192": 24, "aes256": 32}
DEFAULT_SEED = 20_100_101
WARMUP_SECONDS = 0.1

# Band for the DES/3DES ratio: three DES passes per 3DES block plus shared
# per-call overhead.
TDES_RATIO_BAND = (2.0, 5.0)


@dataclass(frozen=True)
class BenchResult:
    algorithm: str
    mode: str
    payload_octets: int
    iterations: int
    elapsed: float
    checksum: str

    @property
    def throughput(self):
        return self.payload_octets * self.iterations / self.elapsed


def _setup(algorithm, mode, payload_octets, seed):
    if algorithm not in ALGORITHMS:
        raise ContractError(f"unknown algorithm {algorithm!r}")
    rng = np.random.default_rng(seed)
    suite = CipherSuite.from_octets(algorithm, rng.bytes(KEY_OCTETS[algorithm]))
    if payload_octets < suite.block_octets:
        raise ContractError(f"payload must be at least one {suite.block_octets}-octet block")
    if mode != "ctr" and payload_octets % suite.block_octets:
        raise ContractError(f"{mode} payload must be a multiple of {suite.block_octets} octets")
    spec = ModeSpec(mode, None if mode == "ecb" else rng.bytes(suite.block_octets))
    return suite, spec, rng.bytes(payload_octets)


def _step(suite, spec, buf):
    # Ciphertext feeds the next iteration, so the final buffer depends on
    # every pass.
    return mode_encrypt(suite, spec, buf, padding=False)


def run_workload(algorithm, mode, payload_octets, iterations, seed=DEFAULT_SEED):
    """SHA-256 of the buffer after ``iterations`` chained encryptions."""
    suite, spec, buf = _setup(algorithm, mode, payload_octets, seed)
    for _ in range(iterations):
        buf = _step(suite, spec, buf)
    return hashlib.sha256(buf).hexdigest()


def measure(algorithm, mode="ctr", payload_octets=1 << 20, min_duration=1.0, seed=DEFAULT_SEED):
    suite, spec, buf = _setup(algorithm, mode, payload_octets, seed)
    warm = _step(suite, spec, buf)
    t_end = time.perf_counter() + WARMUP_SECONDS
    while time.perf_counter() < t_end:
        warm = _step(suite, spec, warm)

    iterations = 0
    start = time.perf_counter()
    while True:
        buf = _step(suite, spec, buf)
        iterations += 1
        elapsed = time.perf_counter() - start
        if elapsed >= min_duration:
            break
    return BenchResult(algorithm, mode, payload_octets, iterations, elapsed,
                       hashlib.sha256(buf).hexdigest())


def _pick(results, *names):
    for name in names:
        for r in results:
            if r.algorithm == name:
                return r
    return None


def claims(results):
    """Check the two published software-performance claims against results.

    Returns a list of ``(label, ratio, holds)``; a claim whose algorithms were
    not measured is left out.
    """
    out = []
    des = _pick(results, "des")
    tdes = _pick(results, "tdes")
    aes = _pick(results, "aes128", "aes192", "aes256")
    if des and tdes:
        ratio = des.throughput / tdes.throughput
        lo, hi = TDES_RATIO_BAND
        out.append(("DES/3DES throughput ratio (claimed about 3x)", ratio, lo <= ratio <= hi))
    if aes and tdes:
        ratio = aes.throughput / tdes.throughput
        out.append((f"{aes.algorithm.upper()}/3DES throughput ratio (AES claimed faster)",
                    ratio, ratio > 1.0))
    return out


def bench_report(results, fmt="text"):
    if not results:
        raise ContractError("bench_report needs at least one result")
    if fmt not in ("text", "csv", "json"):
        raise ContractError(f"unknown report format {fmt!r}")
    ordered = sorted(results, key=lambda r: r.throughput, reverse=True)

    if fmt == "json":
        rows = []
        for r in ordered:
            row = asdict(r)
            row["octets_per_second"] = r.throughput
            rows.append(row)
        checks = [{"claim": c, "ratio": ratio, "reproduced": ok} for c, ratio, ok in claims(ordered)]
        return json.dumps({"results": rows, "claims": checks}, indent=2) + "\n"

    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(["algorithm", "mode", "payload", "iterations", "seconds", "octets_per_second"])
        for r in ordered:
            w.writerow([r.algorithm, r.mode, r.payload_octets, r.iterations,
                        f"{r.elapsed:.6f}", f"{r.throughput:.1f}"])
        return buf.getvalue()

    lines = [f"{'algorithm':<10} {'mode':<5} {'payload':>10} {'iters':>6} {'seconds':>9} {'MB/s':>9}"]
    for r in ordered:
        lines.append(f"{r.algorithm:<10} {r.mode:<5} {r.payload_octets:>10} {r.iterations:>6} "
                     f"{r.elapsed:>9.3f} {r.throughput / 1e6:>9.2f}")
    lines.append("")
    for label, ratio, ok in claims(ordered):
        verdict = "reproduced" if ok else "claim NOT reproduced on this machine"
        lines.append(f"{label}: {ratio:.2f} -> {verdict}")
    return "\n".join(lines) + "\n"
