"""Known-answer test files: parsing, serialisation and execution.

File format (UTF-8, line oriented)::

    # comment
    [ALGO=aes128] [MODE=cbc]
    COUNT = 0
    KEY = 000102...
    IV = ...              (cbc/ctr only)
    PLAINTEXT = ...
    CIPHERTEXT = ...
    DIRECTION = both      (encrypt | decrypt | both, default both)
    <blank line ends the case>

Cases run without padding, so ECB/CBC texts must be block aligned.
"""
import re
from dataclasses import dataclass, field
from importlib import resources

from .bitops import hex_decode
from .errors import CipherBenchError, HexParseError
from .modes import ALGORITHMS, MODES, CipherSuite, ModeSpec, mode_decrypt, mode_encrypt

DIRECTIONS = ("encrypt", "decrypt", "both")
_KEY_OCTETS = {"des": (8,), "tdes": (8, 16, 24), "aes128": (16,), "aes192": (24,), "aes256": (32,)}
_FIELDS = ("COUNT", "KEY", "IV", "PLAINTEXT", "CIPHERTEXT", "DIRECTION")
_HEADER = re.compile(r"^\[\s*(\w+)\s*=\s*(\w+)\s*\](?:\s*\[\s*(\w+)\s*=\s*(\w+)\s*\])?$")


class KatParseError(CipherBenchError, ValueError):
    def __init__(self, message, line):
        super().__init__(f"line {line}: {message}")
        self.line = line


class KatValidationError(CipherBenchError, ValueError):
    def __init__(self, message, line=None):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


@dataclass(frozen=True)
class KatCase:
    id: int
    algorithm: str
    mode: str
    key: bytes
    plaintext: bytes
    ciphertext: bytes
    iv: bytes = None
    direction: str = "both"
    count: int = None

    @property
    def block_octets(self):
        return 8 if self.algorithm in ("des", "tdes") else 16

    def validate(self, line=None):
        if self.algorithm not in ALGORITHMS:
            raise KatValidationError(f"unknown algorithm {self.algorithm!r}", line)
        if self.mode not in MODES:
            raise KatValidationError(f"unknown mode {self.mode!r}", line)
        if self.direction not in DIRECTIONS:
            raise KatValidationError(f"unknown direction {self.direction!r}", line)
        allowed = _KEY_OCTETS[self.algorithm]
        if len(self.key) not in allowed:
            want = "/".join(map(str, allowed))
            raise KatValidationError(
                f"{self.algorithm} key is {len(self.key)} octets, expected {want}", line
            )
        if self.mode == "ecb" and self.iv is not None:
            raise KatValidationError("ECB case must not carry an IV", line)
        if self.mode != "ecb" and (self.iv is None or len(self.iv) != self.block_octets):
            got = "none" if self.iv is None else f"{len(self.iv)} octets"
            raise KatValidationError(
                f"{self.mode} IV must be {self.block_octets} octets, got {got}", line
            )
        if len(self.plaintext) != len(self.ciphertext):
            raise KatValidationError("plaintext and ciphertext lengths differ", line)
        if self.mode != "ctr" and len(self.plaintext) % self.block_octets:
            raise KatValidationError(
                f"{self.mode} text length {len(self.plaintext)} is not a multiple of "
                f"{self.block_octets}", line
            )


@dataclass
class KatFile:
    source: str
    cases: list = field(default_factory=list)

    def __post_init__(self):
        ids = [c.id for c in self.cases]
        if len(ids) != len(set(ids)):
            raise KatValidationError(f"{self.source}: duplicate case ids")


def _finish(pending, algo, mode, next_id, line):
    missing = [f for f in ("KEY", "PLAINTEXT", "CIPHERTEXT") if f not in pending]
    if missing:
        raise KatParseError(f"case is missing {', '.join(missing)}", line)
    if algo is None or mode is None:
        raise KatParseError("case appears before an [ALGO=..] [MODE=..] header", line)
    case = KatCase(
        id=next_id,
        algorithm=algo,
        mode=mode,
        key=pending["KEY"],
        plaintext=pending["PLAINTEXT"],
        ciphertext=pending["CIPHERTEXT"],
        iv=pending.get("IV"),
        direction=pending.get("DIRECTION", "both"),
        count=pending.get("COUNT"),
    )
    case.validate(line)
    return case


def parse_kat(text, source="<string>"):
    cases = []
    algo = mode = None
    pending = {}
    start_line = None
    lines = text.splitlines()
    for lineno, raw in enumerate(lines + [""], start=1):
        line = raw.strip()
        if not line:
            if pending:
                cases.append(_finish(pending, algo, mode, len(cases), start_line))
                pending = {}
            continue
        if line.startswith("#"):
            continue
        if line.startswith("["):
            m = _HEADER.match(line)
            if not m:
                raise KatParseError(f"malformed section header {line!r}", lineno)
            pairs = [(m.group(1), m.group(2)), (m.group(3), m.group(4))]
            for name, value in pairs:
                if name is None:
                    continue
                if name.upper() == "ALGO":
                    algo = value.lower()
                elif name.upper() == "MODE":
                    mode = value.lower()
                else:
                    raise KatParseError(f"unknown header field {name!r}", lineno)
            continue
        name, sep, value = line.partition("=")
        name, value = name.strip().upper(), value.strip()
        if not sep or name not in _FIELDS:
            raise KatParseError(f"unrecognised line {line!r}", lineno)
        if name in pending:
            raise KatParseError(f"duplicate {name} in one case", lineno)
        if not pending:
            start_line = lineno
        if name == "COUNT":
            if not value.isdigit():
                raise KatParseError(f"COUNT must be a non-negative integer, got {value!r}", lineno)
            pending[name] = int(value)
        elif name == "DIRECTION":
            if value.lower() not in DIRECTIONS:
                raise KatParseError(f"DIRECTION must be one of {DIRECTIONS}", lineno)
            pending[name] = value.lower()
        else:
            try:
                pending[name] = hex_decode(value)
            except HexParseError as exc:
                raise KatParseError(f"{name}: {exc}", lineno) from None
    return KatFile(source, cases)


def serialize_kat(kat):
    out = [f"# {kat.source}"]
    section = None
    for case in kat.cases:
        if (case.algorithm, case.mode) != section:
            section = (case.algorithm, case.mode)
            out += ["", f"[ALGO={case.algorithm}] [MODE={case.mode}]"]
        out.append("")
        if case.count is not None:
            out.append(f"COUNT = {case.count}")
        out.append(f"KEY = {case.key.hex()}")
        if case.iv is not None:
            out.append(f"IV = {case.iv.hex()}")
        out.append(f"PLAINTEXT = {case.plaintext.hex()}")
        out.append(f"CIPHERTEXT = {case.ciphertext.hex()}")
        out.append(f"DIRECTION = {case.direction}")
    return "\n".join(out) + "\n"


def load_kat(path):
    with open(path, encoding="utf-8") as fh:
        return parse_kat(fh.read(), source=str(path))


def shipped_corpus():
    """The vector files bundled with the package, as parsed KatFiles."""
    root = resources.files("cipherbench") / "vectors"
    files = sorted(p for p in root.iterdir() if p.name.endswith(".kat"))
    return [parse_kat(p.read_text(encoding="utf-8"), source=p.name) for p in files]


@dataclass(frozen=True)
class KatResult:
    case: KatCase
    checks: tuple  # (direction, passed, expected_hex, actual_hex)

    @property
    def passed(self):
        return all(ok for _, ok, _, _ in self.checks)


@dataclass
class KatSummary:
    source: str
    results: list

    @property
    def passed(self):
        return sum(r.passed for r in self.results)

    @property
    def failed(self):
        return len(self.results) - self.passed

    @property
    def ok(self):
        return self.failed == 0

    def render(self, verbose=False):
        lines = []
        for r in self.results:
            c = r.case
            if r.passed and not verbose:
                continue
            lines.append(f"{self.source} case {c.id} ({c.algorithm}/{c.mode}): "
                         f"{'PASS' if r.passed else 'FAIL'}")
            for direction, ok, expected, actual in r.checks:
                if not ok:
                    lines.append(f"  {direction}: expected {expected}")
                    lines.append(f"  {direction}:   actual {actual}")
        lines.append(f"{self.source}: {self.passed}/{len(self.results)} cases passed")
        return "\n".join(lines) + "\n"


def run_case(case):
    checks = []
    try:
        suite = CipherSuite.from_octets(case.algorithm, case.key)
        spec = ModeSpec(case.mode, case.iv)
        if case.direction in ("encrypt", "both"):
            got = mode_encrypt(suite, spec, case.plaintext, padding=False)
            checks.append(("encrypt", got == case.ciphertext, case.ciphertext.hex(), got.hex()))
        if case.direction in ("decrypt", "both"):
            got = mode_decrypt(suite, spec, case.ciphertext, padding=False)
            checks.append(("decrypt", got == case.plaintext, case.plaintext.hex(), got.hex()))
    except CipherBenchError as exc:
        checks.append(("setup", False, "no error", str(exc)))
    return KatResult(case, tuple(checks))


def run_kats(kat):
    results = sorted((run_case(c) for c in kat.cases), key=lambda r: r.case.id)
    return KatSummary(kat.source, results)
