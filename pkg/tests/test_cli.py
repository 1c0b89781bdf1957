import io
import json
import subprocess
import sys

import pytest

from helpers import EXAMPLE_MODEL_PATH
from teamlogic.cli import run
from teamlogic.kripke import model_from_json
from teamlogic.proof_fixtures import FIXTURE_DIR
from teamlogic.semantics import eval_team
from teamlogic.syntax import parse_any

MODEL = str(EXAMPLE_MODEL_PATH)


def tl(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_eval_true_and_false():
    assert tl("eval", "--model", MODEL, "--team", "u,v", "--formula", "<>(top<=p)") == (0, "true\n", "")
    code, out, _ = tl("eval", "--model", MODEL, "--team", "u", "--formula", "<>(top<=p)")
    assert (code, out) == (1, "false\n")


def test_entail_search_finds_a_countermodel():
    premise = "(p|!p) & top<=p"
    conclusion = "(p & top<=p)|(!p & top<=p)"
    code, out, _ = tl(
        "entail", "--mode", "search", "--max-worlds", "3", "--premise", premise, "--conclusion", conclusion,
        "--format", "structured",
    )
    assert code == 1
    verdict = json.loads(out)
    assert verdict["status"] == "CounterModel"
    m = model_from_json(verdict["model"])
    assert len(m.worlds) <= 3
    assert eval_team(m, verdict["team"], parse_any(premise))
    assert not eval_team(m, verdict["team"], parse_any(conclusion))


def test_entail_exact_and_exhausted():
    code, out, _ = tl("entail", "--premise", "<>(top<=p)", "--conclusion", "[](top<=p)")
    assert (code, out.splitlines()[0]) == (0, "Entails")
    code, out, _ = tl("entail", "--mode", "search", "--max-worlds", "2", "--premise", "p", "--conclusion", "p | q")
    assert (code, out.splitlines()[0]) == (2, "BoundExhausted")


def test_entail_with_explicit_signature():
    code, out, _ = tl("entail", "--premise", "p", "--conclusion", "p | q", "--props", "p,q")
    assert (code, out.splitlines()[0]) == (0, "Entails")


def test_check_fixture():
    code, out, _ = tl("check", "--proof", str(FIXTURE_DIR / "subid.json"), "--system", "mlinc")
    assert code == 0
    assert out.startswith("accepted: p, q <= p, q")


def test_check_rejects(tmp_path):
    data = json.loads((FIXTURE_DIR / "subid.json").read_text())
    data["nodes"][0]["conclusion"] = "p, q <= q, p"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    code, out, _ = tl("check", "--proof", str(path), "--format", "structured")
    assert code == 1
    assert json.loads(out)["error"] == "SchemaMismatch"
    code, out, _ = tl("check", "--proof", str(FIXTURE_DIR / "subid.json"), "--system", "mlmight")
    assert code == 1 and "RuleNotInSystem" in out


def test_parse_and_translate():
    assert tl("parse", "--formula", "p&q<=r") == (0, "p & q <= r\n", "")
    code, out, _ = tl("translate", "--formula", "<>p")
    assert (code, out) == (0, "Exists(y1, And(R(x,y1), P(y1)))\n")
    code, out, _ = tl("parse", "--formula", "<>p", "--format", "structured")
    assert json.loads(out) == {"classical": True, "depth": 1, "formula": "<>p", "logic": "mlclassical"}


def test_bisim_and_hintikka():
    assert tl("bisim", "--model", MODEL, "--left", "u'", "--right", "w'", "--k", "3")[0] == 0
    assert tl("bisim", "--model", MODEL, "--left", "u'", "--right", "v'", "--k", "0")[0] == 1
    assert tl("hintikka", "--model", MODEL, "--world", "u", "--k", "1") == (0, "!p & <>!p & []!p\n", "")


def test_nf():
    code, out, _ = tl("nf", "--formula", "top <= p", "--depth", "0")
    assert code == 0
    assert parse_any(out) == parse_any("(p & top<=p) | ((p | !p) & top<=p & top<=!p)")
    code, out, _ = tl("nf", "--formula", "<><>p")
    assert (code, out.splitlines()[0]) == (2, "BoundExhausted")


@pytest.mark.parametrize(
    "argv",
    [
        ["eval", "--model", MODEL, "--team", "u,zz", "--formula", "p"],
        ["eval", "--model", "/nonexistent/model.json", "--team", "u", "--formula", "p"],
        ["eval", "--model", MODEL, "--team", "u", "--formula", "p &"],
        ["eval", "--model", MODEL, "--team", "u", "--formula", "q"],
        ["parse", "--formula", "might p", "--logic", "mlinc"],
        ["hintikka", "--model", MODEL, "--world", "zz", "--k", "1"],
        ["translate", "--formula", "might p"],
    ],
)
def test_data_errors(argv):
    code, out, err = tl(*argv)
    assert code == 65 and out == ""
    assert err.startswith("data error:")


def test_data_error_names_the_offending_world():
    _, _, err = tl("eval", "--model", MODEL, "--team", "u,zz", "--formula", "p")
    assert "zz" in err


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["eval", "--model", MODEL],
        ["bisim", "--model", MODEL, "--left", "u", "--right", "v", "--k", "-1"],
        ["entail", "--conclusion", "p", "--mode", "magic"],
        ["parse", "--formula", "p", "--format", "xml"],
    ],
)
def test_usage_errors(argv):
    code, _, err = tl(*argv)
    assert code == 64 and err.startswith("usage error:")


def test_malformed_model_file(tmp_path):
    path = tmp_path / "m.json"
    path.write_text("{not json")
    assert tl("eval", "--model", str(path), "--team", "", "--formula", "p")[0] == 65
    path.write_text(json.dumps({"worlds": ["a"], "relation": [["a", "b"]], "valuation": {}}))
    assert tl("eval", "--model", str(path), "--team", "", "--formula", "top")[0] == 65


def test_structured_output_is_stable():
    argv = ["entail", "--mode", "search", "--premise", "smight p", "--premise", "smight q",
            "--conclusion", "smight(smight p & smight q)", "--max-worlds", "2", "--format", "structured"]
    first = tl(*argv)
    assert first == tl(*argv)
    assert first[0] == 1


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "teamlogic", "eval", "--model", MODEL, "--team", "u,v", "--formula", "[](top<=p)"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout == "true\n"
