import io
import json
import subprocess
import sys

import pytest

from cdkernel.cli import main
from cdkernel.parser import parse

from conftest import CORPUS


def run(*args, env=None):
    out, err = io.StringIO(), io.StringIO()
    if env:
        with pytest.MonkeyPatch.context() as mp:
            for k, v in env.items():
                mp.setenv(k, v)
            code = main(list(args), out, err)
    else:
        code = main(list(args), out, err)
    return code, out.getvalue(), err.getvalue()


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_check_corpus_files_exit_zero():
    for path in sorted(CORPUS.glob("*.cd")):
        code, out, _ = run("check", str(path))
        assert code == 0, out


def test_check_reports_rejections_and_errors(tmp_path):
    code, out, _ = run("check", str(CORPUS / "rejections.cd"))
    assert code == 0
    assert "rejected eigen_forall: EigenvariableViolation (expected)" in out
    bad = write(tmp_path, "bad.cd", "predicate P/0, Q/0\ndef wrong : P -> Q := fun (x : P) => x\n")
    code, out, _ = run("check", bad)
    assert code == 1
    assert "error wrong: root: Mismatch: expected P -> Q, got P -> P" in out
    surprise = write(tmp_path, "s.cd", "predicate P/0\ndef fine : P -> P := fun (x : P) => x\n"
                                       "#reject fine Mismatch\n")
    assert run("check", surprise)[0] == 1


def test_parse_errors_exit_two(tmp_path):
    bad = write(tmp_path, "bad.cd", "predicate P/0\ndef d : P -> P := inl x\n")
    code, _, err = run("check", bad)
    assert code == 2
    assert "expected '['" in err
    assert run("check", str(tmp_path / "missing.cd"))[0] == 2


def test_fuel_exhaustion_exits_three(tmp_path):
    f = str(CORPUS / "propositional.cd")
    code, out, _ = run("normalize", f, "--fuel", "1")
    assert code == 3 and "fuel exhausted" in out
    assert run("normalize", f)[0] == 0
    code, _, _ = run("normalize", f, env={"CDKERNEL_MAX_FUEL": "2"})
    assert code == 3
    # the cap wins over a larger request
    code, out, _ = run("normalize", f, "--fuel", "100", "--json", env={"CDKERNEL_MAX_FUEL": "2"})
    assert json.loads(out)["fuel"] == 2


def test_normalize_trace_lines():
    code, out, _ = run("normalize", str(CORPUS / "constant_domain.cd"), "--trace")
    assert code == 0
    assert "  step 4: CDInj0 at root" in out
    assert "  step 1: CDInj1 at root" in out


def test_normalize_json_shape():
    code, out, _ = run("normalize", str(CORPUS / "quantifiers.cd"), "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["mode"] == "cd"
    by_name = {d["name"]: d for d in doc["definitions"]}
    d = by_name["exists_reflexive"]
    assert d["normal"] and not d["fuel_exhausted"]
    assert d["steps"] == [{"step": 1, "rule": "ExElimIntro", "path": "root",
                           "term": "pack[exists a. (P(a) -> P(a))](c, fun (x : P(c)) => x)"}]
    assert d["result"] == d["steps"][-1]["term"]


def test_normalize_refuses_ill_typed_selection(tmp_path):
    f = write(tmp_path, "t.cd", "predicate P/0, Q/0\ndef w : P -> Q := fun (x : P) => x\n#normalize w\n")
    assert run("normalize", f)[0] == 1


def test_translate_round_trips_through_check(tmp_path):
    out_file = tmp_path / "out.cd"
    code, _, _ = run("translate", str(CORPUS / "constant_domain.cd"), "-o", str(out_file))
    assert code == 0
    text = out_file.read_text()
    assert text.startswith("#mode il-bot\n")
    assert "D[" not in text
    src = parse(text)
    assert len(src.definitions) == len(parse((CORPUS / "constant_domain.cd").read_text()).definitions)
    code, out, _ = run("check", str(out_file))
    assert code == 0, out


def test_translate_requires_cd_mode():
    assert run("translate", str(CORPUS / "il_bot.cd"))[0] == 1


def test_extract_output():
    code, out, _ = run("extract", str(CORPUS / "constant_domain.cd"))
    assert code == 0
    assert "em_uniform_yes: left disjunct" in out
    assert "em_uniform_no: right disjunct" in out
    code, out, _ = run("extract", str(CORPUS / "quantifiers.cd"))
    assert "exists_reflexive: witness c" in out
    assert "exists_via_forall: witness f(c)" in out


def test_selftest_passes_on_corpus():
    code, out, _ = run("selftest", str(CORPUS), "--random", "20")
    assert code == 0, out
    assert out.strip().endswith("selftest passed")


def test_selftest_fails_on_a_broken_corpus(tmp_path):
    write(tmp_path, "x.cd", "predicate P/0, Q/0\ndef w : P -> Q := fun (x : P) => x\n")
    code, out, _ = run("selftest", str(tmp_path), "--random", "0")
    assert code == 1 and "FAIL typing" in out


def test_module_entry_point_and_json_determinism():
    cmd = [sys.executable, "-m", "cdkernel", "normalize", str(CORPUS / "constant_domain.cd"), "--json"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and first


def test_usage_errors_exit_two():
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2
