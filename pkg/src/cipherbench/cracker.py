"""Exhaustive DES key search over a restricted keyspace.

A job fixes all but ``f`` of the 56 effective key bits. Candidate ``i``
deposits the bits of ``i`` into the free positions, most significant first,
so candidate order equals numeric key order and the first hit is the
smallest matching key. Workers take contiguous index ranges; a worker only
abandons chunks that start above the best hit so far, which keeps the
smallest-match answer independent of scheduling.
"""
import json
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .des import DesKey, des_encrypt_block, effective_key, key_from_effective
from .errors import CipherBenchError, ContractError
from .factors import brute_force_time
from .kernels import des as kdes

MAX_FREE_BITS = 28
CHUNK = 1 << 14


class CrackRefused(CipherBenchError, ValueError):
    pass


@dataclass(frozen=True)
class CrackJob:
    known_plaintext: bytes
    known_ciphertext: bytes
    template: int  # 56-bit effective key; bits at free positions are ignored
    free_positions: tuple  # 1-based, 1 = most significant effective key bit
    workers: int = 1

    def __post_init__(self):
        for name in ("known_plaintext", "known_ciphertext"):
            value = bytes(getattr(self, name))
            if len(value) != 8:
                raise ContractError(f"{name} must be one 8-octet block, got {len(value)}")
            object.__setattr__(self, name, value)
        if not 0 <= self.template < (1 << 56):
            raise ContractError("template must be a 56-bit effective key")
        positions = tuple(sorted(set(self.free_positions)))
        if len(positions) != len(self.free_positions):
            raise ContractError("free bit positions repeat")
        if any(not 1 <= p <= 56 for p in positions):
            raise ContractError("free bit positions must lie in 1..56")
        if len(positions) > MAX_FREE_BITS:
            raise CrackRefused(
                f"{len(positions)} free bits requested; the search is capped at "
                f"{MAX_FREE_BITS} (2^{MAX_FREE_BITS} candidates) to stay at desk scale"
            )
        if self.workers < 1:
            raise ContractError("workers must be >= 1")
        object.__setattr__(self, "free_positions", positions)

    @property
    def free_bits(self):
        return len(self.free_positions)

    @property
    def candidates(self):
        return 1 << self.free_bits

    @property
    def shifts(self):
        return [56 - p for p in self.free_positions]

    @property
    def base(self):
        mask = 0
        for s in self.shifts:
            mask |= 1 << s
        return self.template & ~mask

    def candidate_key(self, index):
        key = self.base
        shifts = self.shifts
        for b in range(self.free_bits):
            if (index >> b) & 1:
                key |= 1 << shifts[self.free_bits - 1 - b]
        return key

    @classmethod
    def from_json(cls, doc):
        if isinstance(doc, str):
            doc = json.loads(doc)
        return cls(
            known_plaintext=bytes.fromhex(doc["plaintext"]),
            known_ciphertext=bytes.fromhex(doc["ciphertext"]),
            template=parse_template(doc["template_hex"]),
            free_positions=tuple(doc["free_bit_positions"]),
            workers=int(doc.get("workers", 1)),
        )


def parse_template(text):
    """16 hex digits as an 8-octet key (parity ignored) or 14 as 56 bits."""
    raw = bytes.fromhex(text)
    if len(raw) == 8:
        return effective_key(raw)
    if len(raw) == 7:
        return int.from_bytes(raw, "big")
    raise ContractError(f"template must be 7 or 8 octets of hex, got {len(raw)}")


def low_free_positions(n):
    """The ``n`` least significant effective key bits."""
    return tuple(range(57 - n, 57)) if n else ()


@dataclass(frozen=True)
class CrackResult:
    found: bytes  # parity-adjusted key octets, or None
    keys_tested: int
    candidates_evaluated: int
    elapsed: float
    measured_rate: int
    extrapolation: object

    @property
    def found_effective(self):
        return None if self.found is None else effective_key(self.found)


def extrapolate(measured_rate, bits=56):
    return brute_force_time(bits, measured_rate, 1)


def crack(job, search=None):
    """Search the job's candidate set; ``search`` overrides the kernel backend."""
    search = search or kdes.search
    pt = int.from_bytes(job.known_plaintext, "big")
    ct = int.from_bytes(job.known_ciphertext, "big")
    base, shifts, total = job.base, job.shifts, job.candidates

    lock = threading.Lock()
    state = {"best": total, "evaluated": 0}

    def worker(lo, hi):
        evaluated = 0
        for start in range(lo, hi, CHUNK):
            if start > state["best"]:
                break
            count = min(CHUNK, hi - start)
            hit = search(pt, ct, base, shifts, start, count)
            if hit >= 0:
                evaluated += hit - start + 1
                with lock:
                    state["best"] = min(state["best"], hit)
                break
            evaluated += count
        with lock:
            state["evaluated"] += evaluated

    bounds = [total * w // job.workers for w in range(job.workers + 1)]
    t0 = time.perf_counter()
    if job.workers == 1:
        worker(0, total)
    else:
        with ThreadPoolExecutor(max_workers=job.workers) as pool:
            list(pool.map(worker, bounds[:-1], bounds[1:]))
    elapsed = time.perf_counter() - t0

    best = state["best"]
    found = None
    if best < total:
        found = key_from_effective(job.candidate_key(best))
        if des_encrypt_block(DesKey(found), job.known_plaintext) != job.known_ciphertext:
            raise AssertionError("search kernel reported a key that does not verify")
    keys_tested = best + 1 if found is not None else total
    rate = max(1, int(state["evaluated"] / max(elapsed, 1e-9)))
    return CrackResult(found, keys_tested, state["evaluated"], elapsed, rate, extrapolate(rate))


def plant(rng, free_positions, workers=1):
    """A job whose template hides a random key; returns ``(job, planted key octets)``."""
    key_eff = int.from_bytes(rng.bytes(7), "big")
    key = key_from_effective(key_eff)
    pt = rng.bytes(8)
    ct = des_encrypt_block(DesKey(key), pt)
    job = CrackJob(pt, ct, key_eff, tuple(free_positions), workers)
    return job, key


def render(result, job):
    lines = [f"free bits: {job.free_bits} ({job.candidates} candidates), workers: {job.workers}"]
    if result.found is None:
        lines.append("key: not found in the candidate set")
    else:
        lines.append(f"key: {result.found.hex()}")
    lines += [
        f"keys tested: {result.keys_tested} (evaluated {result.candidates_evaluated})",
        f"elapsed: {result.elapsed:.3f} s, rate: {result.measured_rate:,} keys/s",
        f"full 56-bit keyspace at this rate (single desk-scale process): "
        f"{result.extrapolation.human}",
    ]
    return "\n".join(lines) + "\n"
