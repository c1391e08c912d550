import json
import os
from pathlib import Path

import pytest

from msrecovery.cli import main

GOLDEN = Path(__file__).parent / "golden"
VOLATILE = {"seconds", "rate"}

CASES = {
    "sums_ss": ["sums", "1^5,-5", "--s", "3"],
    "equiv_ik": ["equiv", "1^2,4,6,7,8^2,9,10,12,15^2", "0,3,4,5,6,7,9,10,11,12,13,16", "--s", "4"],
    "equiv_false": ["equiv", "0,1", "0,2", "--s", "1"],
    "mirror_a27": ["mirror", "0,1^16,2^10"],
    "roots_3_9": ["roots", "--s", "3", "--k", "9"],
    "table_3_14": ["table", "--s", "3..14", "--k-limit", "auto"],
    "kmax_4_8": ["kmax", "--s", "4..8"],
    "cert_5_6": ["cert", "--s", "5", "--k", "6", "--p", "13"],
    "cert_5_7": ["cert", "--s", "5", "--k", "7", "--p", "23", "--strip", "10"],
    "chain_4": ["chain", "--k", "4", "--length", "10"],
    "chain_5": ["chain", "--k", "5", "--length", "13"],
    "verify": ["verify"],
    "search_4_2_5": ["search", "--n", "4", "--s", "2", "--m", "5"],
    "thue_morse_4": ["thue-morse", "--p", "4"],
}


def scrub(obj):
    if isinstance(obj, dict):
        return {k: scrub(v) for k, v in obj.items() if k not in VOLATILE}
    if isinstance(obj, list):
        return [scrub(v) for v in obj]
    return obj


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden_json(name, capsys):
    code, out, _ = run(capsys, CASES[name] + ["--output", "json"])
    got = scrub(json.loads(out))
    path = GOLDEN / f"{name}.json"
    if os.environ.get("UPDATE_GOLDEN"):
        path.write_text(json.dumps({"exit": code, "output": got}, indent=2) + "\n")
    want = json.loads(path.read_text())
    assert code == want["exit"]
    assert got == want["output"]


def test_text_outputs(capsys):
    assert run(capsys, ["sums", "1^5,-5", "--s", "3"])[:2] == (0, "-3^10,3^10\n")
    code, out, _ = run(capsys, ["roots", "--s", "3", "--k", "9"])
    assert [line.split("\t")[0] for line in out.splitlines()[1:]] == ["27", "486"]
    code, out, _ = run(capsys, ["chain", "--k", "4", "--length", "10"])
    assert out.startswith("!(2,1) -s-> !(3,1)")
    assert run(capsys, ["cert", "--s", "5", "--k", "6", "--p", "13"])[1] == "certified\n"


def test_exit_codes(capsys):
    assert run(capsys, ["equiv", "0,1", "0,2", "--s", "1"])[0] == 1
    assert run(capsys, ["cert", "--s", "3", "--k", "5", "--p", "13"])[0] == 1
    code, _, err = run(capsys, ["sums", "1,2^x", "--s", "1"])
    assert code == 2 and "position 2" in err
    code, _, err = run(capsys, ["roots", "--s", "5", "--k", "6", "--bound", "3"])
    assert code == 2 and "bound" in err
    assert run(capsys, ["cert", "--s", "5", "--k", "6", "--p", "13", "--strip", "7"])[0] == 2


def test_usage_errors_exit_2():
    for argv in (["sums"], ["roots", "--s", "3", "--k", "9", "--bogus"], ["table", "--s", "9..3"], ["nope"]):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2


def test_search_budget_exit_3_and_resume(tmp_path, capsys):
    ck = tmp_path / "s.json"
    base = ["search", "--n", "6", "--s", "3", "--m", "9", "--output", "json"]
    code, out, _ = run(capsys, base + ["--memory-budget", "10K", "--checkpoint", str(ck)])
    assert code == 3 and json.loads(out)["partial"] and ck.exists()
    code, out, _ = run(capsys, base + ["--resume", str(ck)])
    assert code == 0
    full = run(capsys, base)[1]
    assert json.loads(out)["classes"] == json.loads(full)["classes"]


def test_corpus_export(tmp_path, capsys):
    path = tmp_path / "c.txt"
    assert run(capsys, ["corpus", str(path)])[0] == 0
    assert path.read_text().startswith("ss-6-3|6|3|")
    assert run(capsys, ["verify", "--corpus", str(path), "--no-families"])[0] == 0
