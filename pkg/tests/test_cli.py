import re
import shutil
import subprocess
import sys
from fractions import Fraction

import pytest

from qrr.cli import Report, cmd_recognize, cmd_sweep, cmd_verify, grid_values, label_key, main
from qrr.powerseries import InsufficientPrecision
from qrr.productrec import NoPeriodicity, ProductPresentation
from qrr.qobjects import Monomial, ZERO
from qrr.registry import default_catalog_text, eval_product_side, eval_sum_side, parse_catalog


def records():
    """Label -> record text of the shipped catalog."""
    out = {}
    for block in re.split(r"\n\s*\n", default_catalog_text()):
        m = re.search(r"^id: (\S+)", block, re.M)
        if m:
            out[m.group(1)] = block.strip() + "\n"
    return out


def expected_mismatch(bad, order):
    """First exponent where the corrupted sides disagree, from plain coefficient lists."""
    e = bad[0]
    s = eval_sum_side(e, order).integer_coeffs(order)
    p = eval_product_side(e, order).integer_coeffs(order)
    for k, (x, y) in enumerate(zip(s, p)):
        if x != y:
            return k, x, y
    return None


def corrupt_qexp(block):
    """Bump the linear part of the sum's q-exponent, keeping it integral."""
    def bump(m):
        A, B, C, D = (int(x) for x in m.groups())
        return f"qexp=({A},{B + D},{C})/{D}"
    return re.sub(r"qexp=\((-?\d+),(-?\d+),(-?\d+)\)/(\d+)", bump, block, count=1)


def test_verify_single_label(capsys):
    assert main(["verify", "--id", "S.18", "--order", "50"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 2
    assert lines[0].startswith("S.18") and " OK " in lines[0] and "order=50" in lines[0]
    assert lines[1] == "1 identities: 1 OK, 0 FAIL, 0 ERROR"


def test_verify_alias_and_order(capsys):
    rep, status = cmd_verify(ids=["S.23", "S.3", "S.18"], order=40)
    assert status == 0
    assert [r.label for r in rep.records] == ["S.3", "S.18"]


def test_machine_format(capsys):
    assert main(["verify", "--id", "S.2", "--id", "S.5", "--order", "30", "--machine"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[-1] == "#summary\t2\t2\t0\t0"
    for line in lines[:-1]:
        cols = line.split("\t")
        assert cols[1] == "OK" and cols[2] == "30"
        float(cols[3])


def strip_timing(text):
    return re.sub(r"\s*\d+\.\d+ ms", " ms", re.sub(r"\t\d+\.\d+", "\t", text))


def test_determinism(capsys):
    ids = ["--id", "S.9", "--id", "S.18", "--id", "new.1", "--id", "S.2"]
    main(["verify", *ids, "--order", "60", "--jobs", "2"])
    a = capsys.readouterr().out
    main(["verify", *ids, "--order", "60"])
    b = capsys.readouterr().out
    assert strip_timing(a) == strip_timing(b)
    labels = [line.split()[0] for line in a.splitlines()[:-1]]
    assert labels == sorted(labels, key=label_key)


def test_label_key():
    assert sorted(["S.10", "S.9", "R.1.7.13", "S.100"], key=label_key) == ["R.1.7.13", "S.9", "S.10", "S.100"]


def test_report_counts():
    rep, _ = cmd_verify(ids=["S.18"], order=20)
    c = rep.counts
    assert sum(c.values()) == len(rep.records) == 1
    assert Report([]).ok


@pytest.mark.parametrize("label", ["S.18", "S.9", "new.1", "S.58"])
def test_corrupted_qexp_fails_at_first_bad_exponent(label):
    block = records()[label]
    bad_text = corrupt_qexp(block)
    assert bad_text != block
    order = 60
    want = expected_mismatch(parse_catalog(bad_text), order + 1)
    assert want is not None
    rep, status = cmd_verify(text=bad_text, order=order)
    assert status == 1
    (rec,) = rep.records
    assert rec.status == "FAIL"
    e, a, b = rec.mismatch
    assert (e, a, b) == want


def test_corrupted_product_coefficient():
    block = records()["ext.rogers.q2"]
    bad_text = block.replace("term=[1;", "term=[2;", 1)
    assert bad_text != block
    rep, status = cmd_verify(text=bad_text, order=40)
    assert status == 1 and rep.records[0].mismatch == (0, 1, 2)


def test_catalog_syntax_error_exit(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("id: X.1\nsum: sign=+ qexp=(1,0,0)/1 num=[] den=[poch(q;q;n)]\nprod: wat\n")
    assert main(["--catalog", str(path), "verify"]) == 2
    assert "catalog error" in capsys.readouterr().err


def test_unknown_label_exit(capsys):
    assert main(["verify", "--id", "S.999"]) == 2
    assert "S.999" in capsys.readouterr().err


def test_custom_catalog_file(tmp_path, capsys):
    path = tmp_path / "cat.txt"
    path.write_text(records()["S.18"])
    assert main(["--catalog", str(path), "verify", "--order", "30"]) == 0
    assert main(["--catalog", str(path), "list"]) == 0
    out = capsys.readouterr().out
    assert "S.18" in out and "1 identities: 1 OK" in out


def test_list(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    assert "S.3 (= S.23)\tCHU_REDUCED" in out
    assert len(out.strip().splitlines()) == len(records())


def test_recognize_s18(capsys):
    text, res = cmd_recognize("S.18", kmax=60, max_modulus=24)
    assert isinstance(res, ProductPresentation) and res.modulus == 5
    assert "clipped to 20" in text
    assert text.splitlines()[-1] == "1 / (q,q^4;q^5)_oo"
    assert main(["recognize", "S.18", "--kmax", "60", "--max-modulus", "24"]) == 0
    assert capsys.readouterr().out.strip().endswith("1 / (q,q^4;q^5)_oo")


def test_recognize_constant_file(tmp_path):
    path = tmp_path / "one.txt"
    path.write_text("1" + " 0" * 40)
    text, res = cmd_recognize(str(path), kmax=30, max_modulus=10)
    assert res.modulus == 1 and res.entries == ()
    assert text == "1"


def test_recognize_short_file(tmp_path, capsys):
    path = tmp_path / "short.txt"
    path.write_text("1, 1, 2, 3, 5")
    with pytest.raises(InsufficientPrecision):
        cmd_recognize(str(path), kmax=30, max_modulus=10)
    assert main(["recognize", str(path), "--kmax", "30", "--max-modulus", "10"]) == 2
    assert "InsufficientPrecision" in capsys.readouterr().err


def test_recognize_two_theta_prints_profile():
    text, res = cmd_recognize("S.13", kmax=60, max_modulus=20, two_term=True)
    assert isinstance(res, NoPeriodicity)
    assert "profile" in text
    assert "two-term: (-q;q)_oo / (q;q)_oo * ((q,q^3,q^4;q^4)_oo + (q^2,q^2,q^4;q^4)_oo)" in text


def test_theorem_command(capsys):
    assert main(["theorem", "CHU_REDUCED", "alpha=-1", "c=-q^2", "a=0", "b=0"]) == 0
    assert capsys.readouterr().out.startswith("OK   CHU_REDUCED")
    assert main(["theorem", "WHIPPLE_B", "a=0"]) == 2
    assert "missing parameter" in capsys.readouterr().err
    assert main(["theorem", "NOPE", "a=0"]) == 2


def test_theorem_random_liu_5phi4(capsys):
    from test_transforms import admissible_cases
    from qrr.transforms import TheoremId
    (p, _, _, _), = admissible_cases(TheoremId.LIU_5PHI4, 1)
    assert main(["theorem", "LIU_5PHI4", *str(p).split(), "--order", "60"]) == 0
    assert capsys.readouterr().out.startswith("OK")


def test_theorem_liu_master_sequence(capsys):
    assert main(["theorem", "LIU_MASTER", "alpha=q", "a=q^2", "b=q^3", "--order", "40",
                 "--sequence", "1,-q,q^2"]) == 0


def test_sweep_rediscovers_chu_products():
    lines = cmd_sweep("CHU_REDUCED", "alpha=-1 c=-q^2", grid_values(extra=[Monomial(-1, 1)]),
                      kmax=60, max_modulus=20)
    assert lines[0] == "a=0 b=0: candidate (q^2;q^4)_oo"
    assert lines[1] == "a=0 b=-q: candidate (q,q^2,q^3;q^4)_oo"
    assert all("candidate" in line or "error" in line for line in lines)


def test_sweep_empty_grid(capsys):
    assert cmd_sweep("CHU_REDUCED", "alpha=-1 c=-q^2", []) == []
    assert main(["sweep", "CHU_REDUCED", "alpha=-1", "c=-q^2"]) == 0
    assert capsys.readouterr().out == ""


def test_sweep_isolates_errors():
    vals = [ZERO, Monomial(1, -1)]
    lines = cmd_sweep("CHU_REDUCED", "alpha=-1 c=-q^2", vals, kmax=60, max_modulus=20, jobs=2)
    assert lines[0] == "a=0 b=0: candidate (q^2;q^4)_oo"
    assert "error DivergentProduct" in lines[1]
    assert len(lines) == 3


def test_grid_values():
    vals = grid_values([1, 2])
    assert vals == [ZERO, Monomial(1, Fraction(1, 2)), Monomial(-1, Fraction(1, 2)), Monomial(1, 1), Monomial(-1, 1)]


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "qrr.cli", "verify", "--id", "S.18", "--order", "20"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "1 OK" in out.stdout


@pytest.mark.skipif(shutil.which("qrr") is None, reason="console script not installed")
def test_console_script_help():
    out = subprocess.run(["qrr", "--help"], capture_output=True, text=True)
    assert out.returncode == 0
    for cmd in ("verify", "list", "recognize", "theorem", "sweep"):
        assert cmd in out.stdout
