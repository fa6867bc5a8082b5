"""Command-line front end: ``cipherbench <subcommand> ...``.

Exit status: 0 success, 1 data errors (bad padding or length, KAT
failures), 2 usage errors (bad flags, key lengths, missing files).
"""
import argparse
import json
import os
import sys
from decimal import InvalidOperation

import numpy as np

from . import bench, cracker, factors, kat
from ._backend import BACKEND
from .bitops import hex_decode
from .errors import CipherBenchError, ContractError, HexParseError, InvalidKeyError
from .modes import ALGORITHMS, MODES, CipherSuite, ModeSpec, mode_decrypt, mode_encrypt

FORMAT_ENV = "CIPHERBENCH_FORMAT"
FORMATS = ("text", "csv", "json")


class UsageError(Exception):
    pass


def _hex_arg(value, what):
    try:
        return hex_decode(value)
    except HexParseError as exc:
        raise UsageError(f"{what}: {exc}") from None


def _read_input(path):
    if path in (None, "-"):
        return sys.stdin.buffer.read()
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except FileNotFoundError:
        raise UsageError(f"input file not found: {path}") from None


def _write_output(path, data):
    if path in (None, "-"):
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        with open(path, "wb") as fh:
            fh.write(data)


def _emit(text):
    sys.stdout.write(text)
    sys.stdout.flush()


def cmd_crypt(args, encrypt):
    key = _hex_arg(args.key, "key")
    try:
        suite = CipherSuite.from_octets(args.algo, key)
    except (InvalidKeyError, ContractError) as exc:
        raise UsageError(str(exc)) from None
    iv = None
    random_iv = getattr(args, "random_iv", False)
    if args.iv and random_iv:
        raise UsageError("--iv and --random-iv are mutually exclusive")
    if args.iv:
        iv = _hex_arg(args.iv, "iv")
    elif random_iv:
        iv = os.urandom(suite.block_octets)
        print(f"iv: {iv.hex()}", file=sys.stderr)
    try:
        spec = ModeSpec(args.mode, iv)
        spec.check(suite)
    except ContractError as exc:
        raise UsageError(str(exc)) from None
    data = _read_input(args.input)
    fn = mode_encrypt if encrypt else mode_decrypt
    _write_output(args.output, fn(suite, spec, data))
    return 0


def _parse_rate(text):
    try:
        return factors.exact_rate(text)
    except (InvalidOperation, ContractError, ValueError) as exc:
        raise UsageError(f"bad --rate {text!r}: {exc}") from None


def _split(text, allowed, flag):
    items = [a.strip().lower() for a in text.split(",") if a.strip()]
    bad = [a for a in items if a not in allowed]
    if bad or not items:
        raise UsageError(f"{flag}: expected a comma list from {', '.join(allowed)}")
    return items


def cmd_compare(args):
    algos = _split(args.algos, factors.ALGORITHM_IDS, "--algos")
    _emit(factors.compare_report(algos, _parse_rate(args.rate), args.format))
    return 0


def cmd_kat(args):
    if args.paths:
        files = []
        for p in args.paths:
            if not os.path.exists(p):
                raise UsageError(f"KAT file not found: {p}")
            files.append(kat.load_kat(p))
    else:
        files = kat.shipped_corpus()
    summaries = [kat.run_kats(f) for f in files]
    if args.format == "json":
        doc = [{
            "source": s.source,
            "passed": s.passed,
            "failed": s.failed,
            "cases": [{
                "id": r.case.id,
                "algorithm": r.case.algorithm,
                "mode": r.case.mode,
                "passed": r.passed,
                "checks": [dict(zip(("direction", "passed", "expected", "actual"), c))
                           for c in r.checks],
            } for r in s.results],
        } for s in summaries]
        _emit(json.dumps(doc, indent=2) + "\n")
    elif args.format == "csv":
        lines = ["source,case,algorithm,mode,passed"]
        for s in summaries:
            lines += [f"{s.source},{r.case.id},{r.case.algorithm},{r.case.mode},{r.passed}"
                      for r in s.results]
        _emit("\r\n".join(lines) + "\r\n")
    else:
        for s in summaries:
            _emit(s.render(verbose=args.verbose > 0))
    return 0 if all(s.ok for s in summaries) else 1


def cmd_bench(args):
    algos = _split(args.algos, ALGORITHMS, "--algos")
    if args.payload < 1:
        raise UsageError("--payload must be positive")
    results = []
    for a in algos:
        try:
            results.append(bench.measure(a, args.mode, args.payload, args.min_duration, args.seed))
        except ContractError as exc:
            raise UsageError(str(exc)) from None
    if args.format == "text":
        _emit(f"backend: {BACKEND}\n")
    _emit(bench.bench_report(results, args.format))
    return 0


def _crack_job(args):
    if args.job:
        try:
            with open(args.job, encoding="utf-8") as fh:
                doc = json.load(fh)
        except FileNotFoundError:
            raise UsageError(f"job file not found: {args.job}") from None
        if args.workers is not None:
            doc["workers"] = args.workers
        return cracker.CrackJob.from_json(doc), None
    workers = args.workers or 1
    if args.free_positions:
        positions = tuple(int(p) for p in args.free_positions.split(","))
    elif args.free_bits is not None:
        if not 0 <= args.free_bits <= 56:
            raise UsageError("--free-bits must lie in 0..56")
        positions = cracker.low_free_positions(args.free_bits)
    else:
        raise UsageError("give --free-bits or --free-positions (or --job)")
    if args.plant is not None:
        return cracker.plant(np.random.default_rng(args.plant), positions, workers)
    if not (args.plaintext and args.ciphertext and args.template):
        raise UsageError("--plaintext, --ciphertext and --template are required without --plant")
    job = cracker.CrackJob(
        _hex_arg(args.plaintext, "plaintext"),
        _hex_arg(args.ciphertext, "ciphertext"),
        cracker.parse_template(args.template),
        positions,
        workers,
    )
    return job, None


def cmd_crack(args):
    try:
        job, planted = _crack_job(args)
    except cracker.CrackRefused as exc:
        raise UsageError(str(exc)) from None
    except (ContractError, KeyError, ValueError) as exc:
        raise UsageError(f"invalid crack job: {exc}") from None
    result = cracker.crack(job)
    if args.format == "json":
        doc = {
            "found": result.found.hex() if result.found else None,
            "keys_tested": result.keys_tested,
            "candidates_evaluated": result.candidates_evaluated,
            "elapsed": result.elapsed,
            "measured_rate": result.measured_rate,
            "extrapolation": result.extrapolation.to_json(),
        }
        if planted is not None:
            doc["planted"] = planted.hex()
        _emit(json.dumps(doc, indent=2) + "\n")
    else:
        if planted is not None:
            _emit(f"planted key: {planted.hex()}\n")
        _emit(cracker.render(result, job))
    return 0


def build_parser():
    default_format = os.environ.get(FORMAT_ENV, "text")
    if default_format not in FORMATS:
        default_format = "text"
    fmt_help = f"report format (default from ${FORMAT_ENV}, else text)"
    # Global flags may also follow the subcommand; SUPPRESS keeps the
    # subparser from overwriting a value given before it.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=argparse.SUPPRESS, help=fmt_help)
    common.add_argument("-v", "--verbose", action="count", default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="cipherbench",
                                description="DES / 3DES / AES library and comparison workbench")
    p.add_argument("--format", choices=FORMATS, default=default_format, help=fmt_help)
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    for name in ("encrypt", "decrypt"):
        s = sub.add_parser(name, parents=[common], help=f"{name} a file or stdin")
        s.add_argument("--algo", required=True, choices=ALGORITHMS + ("aes",))
        s.add_argument("--mode", default="cbc", choices=MODES)
        s.add_argument("--key", required=True, help="key as hex")
        s.add_argument("--iv", help="IV as hex (cbc, ctr)")
        if name == "encrypt":
            s.add_argument("--random-iv", action="store_true",
                           help="generate an IV and print it to stderr")
        s.add_argument("-i", "--input", help="input path (default stdin)")
        s.add_argument("-o", "--output", help="output path (default stdout)")

    s = sub.add_parser("compare", parents=[common], help="nine-factor comparison table")
    s.add_argument("--algos", default="aes,tdes,des")
    s.add_argument("--rate", default=str(factors.DEFAULT_RATE), help="keys per second, e.g. 5e10")

    s = sub.add_parser("kat", parents=[common], help="run known-answer test files")
    s.add_argument("paths", nargs="*", help="KAT files (default: the bundled corpus)")

    s = sub.add_parser("bench", parents=[common], help="throughput benchmark")
    s.add_argument("--algos", default="des,tdes,aes128")
    s.add_argument("--mode", default="ctr", choices=MODES)
    s.add_argument("--payload", type=int, default=1 << 20, help="octets per iteration")
    s.add_argument("--min-duration", type=float, default=1.0, help="seconds per algorithm")
    s.add_argument("--seed", type=int, default=bench.DEFAULT_SEED)

    s = sub.add_parser("crack", parents=[common], help="restricted-keyspace DES key search")
    s.add_argument("--job", help="JSON job document")
    s.add_argument("--plaintext")
    s.add_argument("--ciphertext")
    s.add_argument("--template", help="8-octet key or 7-octet effective key, hex")
    s.add_argument("--free-bits", type=int, help="search the N lowest effective key bits")
    s.add_argument("--free-positions", help="comma list of effective bit positions (1..56)")
    s.add_argument("--workers", type=int)
    s.add_argument("--plant", type=int, metavar="SEED",
                   help="plant a random key from SEED and search for it")
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "encrypt": lambda a: cmd_crypt(a, True),
        "decrypt": lambda a: cmd_crypt(a, False),
        "compare": cmd_compare,
        "kat": cmd_kat,
        "bench": cmd_bench,
        "crack": cmd_crack,
    }
    try:
        return handlers[args.command](args)
    except UsageError as exc:
        print(f"cipherbench {args.command}: {exc}", file=sys.stderr)
        return 2
    except CipherBenchError as exc:
        print(f"cipherbench {args.command}: {exc}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 1


if __name__ == "__main__":
    sys.exit(main())
