import csv
import io
import json
import subprocess
import sys

import pytest

from cipherbench.cli import main

KEY32 = "11" * 32
IV16 = "22" * 16


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_file_round_trip_aes256_cbc(tmp_path, capsys):
    src = tmp_path / "in.bin"
    src.write_bytes(bytes(range(256)) * 40)  # 10 KiB
    enc, dec = tmp_path / "x.enc", tmp_path / "x.dec"
    assert run(capsys, "encrypt", "--algo", "aes256", "--mode", "cbc", "--key", KEY32,
               "--iv", IV16, "-i", str(src), "-o", str(enc))[0] == 0
    assert run(capsys, "decrypt", "--algo", "aes256", "--mode", "cbc", "--key", KEY32,
               "--iv", IV16, "-i", str(enc), "-o", str(dec))[0] == 0
    assert dec.read_bytes() == src.read_bytes()
    assert enc.read_bytes() != src.read_bytes()


def test_encrypt_is_reproducible(tmp_path, capsys):
    src = tmp_path / "in.bin"
    src.write_bytes(b"attack at dawn")
    outs = []
    for n in range(2):
        dst = tmp_path / f"o{n}"
        run(capsys, "encrypt", "--algo", "tdes", "--mode", "ctr", "--key", "ab" * 24,
            "--iv", "00" * 8, "-i", str(src), "-o", str(dst))
        outs.append(dst.read_bytes())
    assert outs[0] == outs[1] and len(outs[0]) == 14


def test_short_aes_key_is_usage_error(tmp_path, capsys):
    src = tmp_path / "in.bin"
    src.write_bytes(b"x")
    code, _, err = run(capsys, "encrypt", "--algo", "aes128", "--mode", "ecb",
                       "--key", "11" * 15, "-i", str(src))
    assert code == 2 and "16/24/32" in err


def test_misaligned_ecb_decrypt_is_data_error(tmp_path, capsys):
    src = tmp_path / "in.bin"
    src.write_bytes(bytes(13))
    code, _, err = run(capsys, "decrypt", "--algo", "des", "--mode", "ecb",
                       "--key", "0123456789abcdef", "-i", str(src))
    assert code == 1 and "multiple" in err


def test_bad_padding_is_data_error(tmp_path, capsys):
    src = tmp_path / "in.bin"
    src.write_bytes(bytes(16))
    code, _, err = run(capsys, "decrypt", "--algo", "aes128", "--mode", "ecb",
                       "--key", "00" * 16, "-i", str(src))
    assert code == 1


@pytest.mark.parametrize("argv", [
    ["encrypt", "--algo", "des", "--mode", "cbc", "--key", "00" * 8],  # missing IV
    ["encrypt", "--algo", "des", "--mode", "cbc", "--key", "00" * 8, "--iv", "00" * 16],
    ["encrypt", "--algo", "des", "--mode", "ecb", "--key", "0g" * 8],
    ["encrypt", "--algo", "des", "--mode", "ecb", "--key", "00" * 8, "-i", "/no/such/file"],
    ["compare", "--rate", "fast"],
    ["compare", "--algos", "rc4"],
    ["kat", "/no/such/file.kat"],
    ["crack", "--free-bits", "29", "--plant", "1"],
    ["crack"],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_random_iv_printed(tmp_path, capsys):
    src = tmp_path / "in.bin"
    src.write_bytes(b"hello")
    dst = tmp_path / "out"
    code, _, err = run(capsys, "encrypt", "--algo", "aes128", "--mode", "cbc", "--key",
                       "00" * 16, "--random-iv", "-i", str(src), "-o", str(dst))
    assert code == 0
    iv = err.strip().split("iv: ")[1]
    back = tmp_path / "back"
    run(capsys, "decrypt", "--algo", "aes128", "--mode", "cbc", "--key", "00" * 16,
        "--iv", iv, "-i", str(dst), "-o", str(back))
    assert back.read_bytes() == b"hello"


def test_compare_default_table(capsys):
    code, out, _ = run(capsys, "compare")
    assert code == 0
    assert "16.7 days" in out and "400 Days" in out
    assert out == run(capsys, "compare")[1]


def test_compare_json_at_custom_rate(capsys):
    code, out, _ = run(capsys, "compare", "--rate", "1e6", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["des"]["brute_force_time"]["computed"]["56"]["human"] == "2280 years"
    assert doc["des"]["brute_force_time"]["computed"]["56"]["rate_keys_per_second"] == 10**6


def test_compare_single_column_and_global_format(capsys):
    _, out, _ = run(capsys, "--format", "csv", "compare", "--algos", "des")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["Factor", "DES"] and len(rows) == 10


def test_format_env_default(monkeypatch, capsys):
    monkeypatch.setenv("CIPHERBENCH_FORMAT", "json")
    _, out, _ = run(capsys, "compare", "--algos", "aes")
    assert list(json.loads(out)) == ["aes"]


def test_kat_shipped_and_failing(tmp_path, capsys):
    code, out, _ = run(capsys, "kat")
    assert code == 0 and "aes.kat: 21/21" in out
    bad = tmp_path / "bad.kat"
    bad.write_text("[ALGO=des] [MODE=ecb]\nKEY = 133457799bbcdff1\n"
                   "PLAINTEXT = 0123456789abcdef\nCIPHERTEXT = 0000000000000000\n")
    code, out, _ = run(capsys, "kat", str(bad))
    assert code == 1 and "FAIL" in out
    code, out, _ = run(capsys, "kat", "--format", "json", str(bad))
    assert json.loads(out)[0]["failed"] == 1


def test_kat_shipped_file_by_path(capsys):
    from importlib import resources
    path = resources.files("cipherbench") / "vectors" / "aes.kat"
    assert run(capsys, "kat", str(path))[0] == 0


def test_bench_report_shape(capsys):
    code, out, _ = run(capsys, "bench", "--algos", "des,tdes,aes128", "--payload", "65536",
                       "--min-duration", "0.1")
    assert code == 0
    assert sum("ratio" in line for line in out.splitlines()) == 2


def test_crack_planted(capsys):
    code, out, _ = run(capsys, "crack", "--free-bits", "16", "--plant", "11")
    planted = out.split("planted key: ")[1].split()[0]
    assert code == 0 and f"key: {planted}" in out


def test_crack_from_flags_and_json(tmp_path, capsys):
    args = ["crack", "--plaintext", "0123456789abcdef", "--ciphertext", "85e813540f0ab405",
            "--template", "133457799bbcdf00", "--free-bits", "10", "--workers", "2",
            "--format", "json"]
    code, out, _ = run(capsys, *args)
    doc = json.loads(out)
    assert code == 0 and doc["found"] is not None
    job = tmp_path / "job.json"
    job.write_text(json.dumps({
        "plaintext": "0123456789abcdef", "ciphertext": "85e813540f0ab405",
        "template_hex": "133457799bbcdf00", "free_bit_positions": list(range(47, 57)),
    }))
    code, out2, _ = run(capsys, "crack", "--job", str(job), "--format", "json")
    assert code == 0 and json.loads(out2)["found"] == doc["found"]


def test_module_entry_point_pipes_binary():
    data = bytes(range(256))
    base = [sys.executable, "-m", "cipherbench"]
    enc = subprocess.run(base + ["encrypt", "--algo", "des", "--mode", "ecb",
                                 "--key", "0123456789abcdef"], input=data, capture_output=True)
    assert enc.returncode == 0 and len(enc.stdout) == 264
    dec = subprocess.run(base + ["decrypt", "--algo", "des", "--mode", "ecb",
                                 "--key", "0123456789abcdef"], input=enc.stdout,
                         capture_output=True)
    assert dec.returncode == 0 and dec.stdout == data
