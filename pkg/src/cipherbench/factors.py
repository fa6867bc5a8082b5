"""Nine-factor comparison of DES, Triple-DES and AES.

Key-space figures are exact integers and brute-force times exact
fractions; floats never enter a stored value, only rendered text. Every
cell also carries the published table string, and a cell is flagged when
the published value disagrees with the computed one.
"""
import csv
import io
import json
import re
import textwrap
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction

from .errors import ContractError, UndefinedFactorError

DEFAULT_RATE = 50 * 10**9
SECONDS_PER_YEAR = 31_557_600  # Julian year

UNITS = (
    ("years", SECONDS_PER_YEAR),
    ("days", 86_400),
    ("hours", 3_600),
    ("minutes", 60),
    ("seconds", 1),
)

ALGORITHM_IDS = ("aes", "tdes", "des")
DISPLAY_NAMES = {"aes": "AES", "tdes": "3DES", "des": "DES"}

# (factor id, row label) in published row order.
ROWS = (
    ("key_length", "Key Length"),
    ("cipher_type", "Cipher Type"),
    ("block_size", "Block Size"),
    ("developed", "Developed"),
    ("cryptanalysis_resistance", "Cryptanalysis resistance"),
    ("security", "Security"),
    ("possible_keys", "Possible Keys"),
    ("printable_ascii_keys", "Possible ASCII printable character keys"),
    ("brute_force_time",
     "Time required to check all possible keys at 50 billion keys per second**"),
)

# Published comparison table, cell text kept character for character.
TABLE_1 = {
    "key_length": {
        "aes": "128, 192, or 256 bits",
        "tdes": "(k1, k2 and k3) 168 bits (k1 and k2 is same) 112 bits",
        "des": "56 bits",
    },
    "cipher_type": {
        "aes": "Symmetric block cipher",
        "tdes": "Symmetric block cipher",
        "des": "Symmetric block cipher",
    },
    "block_size": {
        "aes": "128, 192, or 256 bits",
        "tdes": "64 bits",
        "des": "64 bits",
    },
    "developed": {"aes": "2000", "tdes": "1978", "des": "1977"},
    "cryptanalysis_resistance": {
        "aes": "Strong against differential, truncated differential, linear, "
               "interpolation and square attacks",
        "tdes": "Vulnerable to differential, Brute Force attacker could be analyze "
                "plaint text using differential cryptanalysis.",
        "des": "Vulnerable to differential and linear cryptanalysis; "
               "weak substitution tables",
    },
    "security": {
        "aes": "Considered secure",
        "tdes": "one only weak which is Exit in DES.",
        "des": "Proven inadequate",
    },
    "possible_keys": {
        "aes": "2^{128} , 2^{192} , or 2^{256}",
        "tdes": "2^{112} or 2^{168}",
        "des": "2^{56}",
    },
    "printable_ascii_keys": {
        "aes": "95^{16} , 95^{24} , or 95^{32}",
        "tdes": "95^{14} or 95^{21}",
        "des": "95^7",
    },
    "brute_force_time": {
        "aes": "For a 128-bit key: 5×10^{21} years",
        "tdes": "For a 112-bit key: 800 Days",
        "des": "For a 56-bit key: 400 Days",
    },
}

_STATIC = {
    "des": {"key_lengths": (56,), "block_sizes": (64,), "developed": 1977},
    "tdes": {"key_lengths": (112, 168), "block_sizes": (64,), "developed": 1978},
    "aes": {"key_lengths": (128, 192, 256), "block_sizes": (128,), "developed": 2000},
}
CIPHER_TYPE = "Symmetric block cipher"


def possible_keys(bits):
    if not 0 <= bits <= 4096:
        raise ContractError(f"key length {bits} outside 0..4096")
    return 1 << bits


def printable_ascii_keys(bits):
    """Keys typed as bits/8 printable ASCII characters (95 symbols each)."""
    if bits <= 0 or bits % 8:
        raise UndefinedFactorError(f"printable-key count needs a positive multiple of 8, got {bits}")
    return 95 ** (bits // 8)


def exact_rate(rate):
    """Coerce a keys/second figure to an exact integer >= 1."""
    if isinstance(rate, str):
        rate = Decimal(rate.replace("_", ""))
    if isinstance(rate, float):
        rate = Fraction(rate)
    value = Fraction(rate)
    if value.denominator != 1 or value < 1:
        raise ContractError(f"rate must be an integer >= 1 keys/second, got {rate}")
    return int(value)


def _decimal(frac, prec=40):
    with localcontext() as ctx:
        ctx.prec = prec
        return Decimal(frac.numerator) / Decimal(frac.denominator)


def format_sig(frac, digits=3):
    """Round to ``digits`` significant figures; scientific notation from 1e6 up."""
    d = _round_sig(Fraction(frac), digits)
    if d == 0 or Decimal("1e-3") <= abs(d) < Decimal("1e6"):
        return format(d, "f")
    return format(d, f".{digits - 1}e")


def _with_unit(value, name):
    text = format_sig(value)
    return f"{text} {name[:-1] if text == '1' else name}"


def render_duration(seconds):
    seconds = Fraction(seconds)
    for name, size in UNITS:
        if seconds >= size:
            return _with_unit(seconds / size, name)
    return _with_unit(seconds, "seconds")


@dataclass(frozen=True)
class BruteForceEstimate:
    key_count: int
    rate_keys_per_second: int
    fraction: Fraction
    seconds: Fraction
    human: str

    def in_unit(self, unit):
        return self.seconds / dict(UNITS)[unit]

    def to_json(self):
        return {
            "key_count": str(self.key_count),
            "rate_keys_per_second": self.rate_keys_per_second,
            "fraction": str(self.fraction),
            "seconds": str(self.seconds),
            "human": self.human,
        }


def brute_force_time(bits, rate=DEFAULT_RATE, fraction=Fraction(1)):
    rate = exact_rate(rate)
    fraction = Fraction(fraction)
    if not 0 < fraction <= 1:
        raise ContractError(f"fraction must lie in (0, 1], got {fraction}")
    count = possible_keys(bits)
    seconds = Fraction(count) * fraction / rate
    return BruteForceEstimate(count, rate, fraction, seconds, render_duration(seconds))


@dataclass(frozen=True)
class FactorProfile:
    algorithm: str
    key_length_bits: tuple
    cipher_type: str
    block_size_bits: tuple
    developed_year: int
    cryptanalysis_resistance: str
    security_status: str
    possible_keys: dict
    printable_ascii_keys: dict
    brute_force: dict
    paper_reported: dict

    def computed(self, factor):
        """Computed value for a factor, or None where only metadata exists."""
        return {
            "key_length": list(self.key_length_bits),
            "cipher_type": self.cipher_type,
            "block_size": list(self.block_size_bits),
            "developed": self.developed_year,
            "cryptanalysis_resistance": None,
            "security": None,
            "possible_keys": self.possible_keys,
            "printable_ascii_keys": self.printable_ascii_keys,
            "brute_force_time": self.brute_force,
        }[factor]

    def discrepancy(self, factor):
        return _discrepant(self, factor)


def factor_profile(algorithm, rate=DEFAULT_RATE):
    if algorithm not in _STATIC:
        raise ContractError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHM_IDS}")
    info = _STATIC[algorithm]
    lengths = info["key_lengths"]
    return FactorProfile(
        algorithm=algorithm,
        key_length_bits=lengths,
        cipher_type=CIPHER_TYPE,
        block_size_bits=info["block_sizes"],
        developed_year=info["developed"],
        cryptanalysis_resistance=TABLE_1["cryptanalysis_resistance"][algorithm],
        security_status=TABLE_1["security"][algorithm],
        possible_keys={n: possible_keys(n) for n in lengths},
        printable_ascii_keys={n: printable_ascii_keys(n) for n in lengths},
        brute_force={n: brute_force_time(n, rate) for n in lengths},
        paper_reported={factor: TABLE_1[factor][algorithm] for factor, _ in ROWS},
    )


# --- comparing published cells against computed values ---------------------

_NUM = r"\{?(\d+)\}?"


def _sig_digits(mantissa):
    if "." in mantissa:
        return len(mantissa.replace(".", "").lstrip("0"))
    return max(1, len(mantissa.lstrip("0").rstrip("0")))


def _unit_seconds(unit):
    unit = unit.lower()
    return dict(UNITS)[unit if unit.endswith("s") else unit + "s"]


def parse_published_duration(text):
    """``(bits, seconds, significant digits, unit size)`` from a published time cell."""
    m = re.search(r"(\d+)-bit key:\s*([\d.]+)(?:\s*×\s*10\^" + _NUM + r")?\s*(\w+)", text)
    if not m:
        raise ValueError(f"unrecognised duration cell {text!r}")
    bits, mantissa, exponent, unit = m.groups()
    size = _unit_seconds(unit)
    value = Fraction(mantissa) * 10 ** int(exponent or 0)
    return int(bits), value * size, _sig_digits(mantissa), size


def _round_sig(frac, digits):
    d = _decimal(frac)
    if d == 0:
        return d
    with localcontext() as ctx:
        ctx.prec = digits
        return +d


def _discrepant(profile, factor):
    published = profile.paper_reported[factor]
    if factor in ("key_length", "block_size"):
        stated = sorted(int(x) for x in re.findall(r"(?<!\w)(\d+)(?!\w)", published))
        return stated != sorted(profile.computed(factor))
    if factor == "developed":
        return int(published) != profile.developed_year
    if factor == "cipher_type":
        return published != profile.cipher_type
    if factor == "possible_keys":
        stated = sorted(2 ** int(x) for x in re.findall(r"2\^" + _NUM, published))
        return stated != sorted(profile.possible_keys.values())
    if factor == "printable_ascii_keys":
        stated = sorted(95 ** int(x) for x in re.findall(r"95\^" + _NUM, published))
        return stated != sorted(profile.printable_ascii_keys.values())
    if factor == "brute_force_time":
        bits, seconds, digits, size = parse_published_duration(published)
        est = profile.brute_force.get(bits)
        if est is None:
            return True
        return _round_sig(est.seconds / size, digits) != _round_sig(seconds / size, digits)
    return False


# --- report rendering -------------------------------------------------------


def _approx(n):
    return format_sig(Fraction(n))


def _cell(profile, factor):
    if factor in ("key_length", "block_size"):
        return ", ".join(map(str, profile.computed(factor))) + " bits"
    if factor == "developed":
        return str(profile.developed_year)
    if factor == "cipher_type":
        return profile.cipher_type
    if factor in ("cryptanalysis_resistance", "security"):
        return profile.paper_reported[factor]
    if factor == "possible_keys":
        return "; ".join(f"2^{n} ≈ {_approx(v)}" for n, v in profile.possible_keys.items())
    if factor == "printable_ascii_keys":
        return "; ".join(
            f"95^{n // 8} ≈ {_approx(v)}" for n, v in profile.printable_ascii_keys.items()
        )
    return "; ".join(f"{n}-bit: {e.human}" for n, e in profile.brute_force.items())


def _rate_label(rate):
    if rate == DEFAULT_RATE:
        return ROWS[-1][1]
    return f"Time required to check all possible keys at {rate:,} keys per second"


def _json_value(profile, factor):
    value = profile.computed(factor)
    if factor in ("possible_keys", "printable_ascii_keys"):
        return {str(n): str(v) for n, v in value.items()}
    if factor == "brute_force_time":
        return {str(n): e.to_json() for n, e in value.items()}
    return value


def compare_report(algorithms=ALGORITHM_IDS, rate=DEFAULT_RATE, fmt="text"):
    algorithms = list(algorithms)
    if not algorithms:
        raise ContractError("compare_report needs at least one algorithm")
    if fmt not in ("text", "csv", "json"):
        raise ContractError(f"unknown report format {fmt!r}")
    rate = exact_rate(rate)
    profiles = [factor_profile(a, rate) for a in algorithms]

    if fmt == "json":
        doc = {
            p.algorithm: {
                factor: {
                    "computed": _json_value(p, factor),
                    "paper_reported": p.paper_reported[factor],
                    "discrepancy": p.discrepancy(factor),
                }
                for factor, _ in ROWS
            }
            for p in profiles
        }
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"

    labels = [label for _, label in ROWS[:-1]] + [_rate_label(rate)]
    header = ["Factor"] + [DISPLAY_NAMES[p.algorithm] for p in profiles]
    body = [[label] + [_cell(p, factor) for p in profiles]
            for (factor, _), label in zip(ROWS, labels)]

    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, quoting=csv.QUOTE_ALL, lineterminator="\r\n")
        writer.writerow(header)
        writer.writerows(body)
        return buf.getvalue()

    notes = []
    for r, (factor, _) in enumerate(ROWS):
        for c, p in enumerate(profiles, start=1):
            if p.discrepancy(factor):
                notes.append(
                    f"[{len(notes) + 1}] {DISPLAY_NAMES[p.algorithm]} / {labels[r]}: "
                    f"computed \"{body[r][c]}\"; published \"{p.paper_reported[factor]}\""
                )
                body[r][c] += f" [{len(notes)}]"
    return _text_table(header, body) + _footnotes(notes, rate)


def _text_table(header, body, width=30):
    widths = [max(len(header[0]), 24)] + [width] * (len(header) - 1)
    wrapped = [
        [textwrap.wrap(cell, w) or [""] for cell, w in zip(row, widths)]
        for row in [header] + body
    ]
    rule = "+" + "+".join("-" * (w + 2) for w in widths) + "+"
    lines = [rule]
    for i, row in enumerate(wrapped):
        for k in range(max(len(c) for c in row)):
            parts = [(c[k] if k < len(c) else "").ljust(w) for c, w in zip(row, widths)]
            lines.append("| " + " | ".join(parts) + " |")
        if i == 0:
            lines.append(rule.replace("-", "="))
        else:
            lines.append(rule)
    return "\n".join(lines) + "\n"


def _footnotes(notes, rate):
    out = [f"\nRate: {rate:,} keys/second; year = {SECONDS_PER_YEAR:,} s."]
    if rate != DEFAULT_RATE:
        out.append(f"Published time figures assume {DEFAULT_RATE:,} keys/second.")
    if notes:
        out.append("Cells where the published value disagrees with the computed one:")
        out.extend(notes)
    return "\n".join(out) + "\n"
