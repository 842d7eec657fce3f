import io
import json
import logging

import pytest

from app.cli import EXIT_BOUNDED, EXIT_INPUT, EXIT_NEGATIVE, EXIT_OK, exit_code, main
from tests.conftest import READER, RECURSIVE_READER


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_parse_check(capsys):
    code, body = run_json(capsys, "parse-check", READER)
    assert code == EXIT_OK
    assert body["schema"] == 1
    assert body["term"] == READER


def test_program_from_file(capsys, tmp_path):
    program = tmp_path / "array.pafas"
    program.write_text("P <= a |> b.P\nmain = P |[]| c.0\n")
    code, body = run_json(capsys, "parse-check", str(program))
    assert code == EXIT_OK
    assert body["equations"] == ["P"]


def test_program_from_stdin(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO("{a} |> b.0"))
    code, body = run_json(capsys, "parse-check", "-")
    assert code == EXIT_OK
    assert body["language"] == "s"


def test_rejected_input_exits_with_two(capsys):
    code, body = run_json(capsys, "steps", "a.((")
    assert code == EXIT_INPUT
    assert body["error"]["kind"] == "syntax_error"


def test_improper_term_is_a_negative_verdict(capsys):
    code, body = run_json(capsys, "proper", "{a} |> {b} |> c.0")
    assert code == EXIT_NEGATIVE
    assert body["violation"]["path"] == ""


def test_improper_start_term_is_warned_about(capsys, caplog):
    with caplog.at_level(logging.WARNING, logger="app.services.workbench"):
        code, body = run_json(capsys, "steps", "{a} |> {b} |> c.0")
    assert code == EXIT_OK
    assert body["steps"]
    assert any("is not proper" in record.getMessage() for record in caplog.records)

    caplog.clear()
    with caplog.at_level(logging.WARNING, logger="app.services.workbench"):
        run_json(capsys, "steps", "{a,b} |> c.0")
    assert not [record for record in caplog.records if "is not proper" in record.getMessage()]


def test_fair_member(capsys):
    code, body = run_json(capsys, "fair", "member", "--word", "aab", READER)
    assert code == EXIT_OK
    assert body["verdict"] == "yes"


def test_fair_lasso_search(capsys):
    code, body = run_json(capsys, "fair", "lasso", RECURSIVE_READER)
    assert code == EXIT_OK
    assert body["loop"] == "a"


def test_bisim_witness(capsys):
    code, body = run_json(capsys, "bisim", "a.0 |[]| b.0", "a.b.0 + b.a.0")
    assert code == EXIT_NEGATIVE
    assert body["witness"]["path"] == ["1", "a"]


def test_bounded_exploration(capsys):
    code, body = run_json(capsys, "explore", "--max-states", "5", "rec x. a.(x |[]| b.0)")
    assert code == EXIT_BOUNDED
    assert body["truncated"] is True


def test_dot_output(capsys):
    code, out = run(capsys, "explore", "--format", "dot", READER)
    assert code == EXIT_OK
    assert out.startswith("digraph lts {")


def test_time_with_refusal(capsys):
    code, body = run_json(capsys, "time", "--refusal=-{b}", READER)
    assert code == EXIT_OK
    assert body["possible"] is True


def test_translate_and_normalize(capsys):
    _, body = run_json(capsys, "translate", "s2r", "{b,a} |> c.0")
    assert body["term"] == "a |> b |> c.0"
    _, body = run_json(capsys, "normalize", "a |> (b.0 |[]| c.0)")
    assert body["term"].endswith("[e1->a]")


def test_laws(capsys):
    code, body = run_json(capsys, "laws", "list")
    assert code == EXIT_OK
    assert "DetChoice" in [law["id"] for law in body["laws"]]
    code, body = run_json(capsys, "laws", "apply", "--law", "L7", "rec x. a.x")
    assert body["term"] == "a.rec x. a.x"
    code, body = run_json(capsys, "laws", "apply", "--law", "L4", "--at", "", "a |> (a.0 |[]| b.0)")
    assert code == EXIT_INPUT
    assert body["error"]["kind"] == "side_condition_violated"


def test_trace_comparison(capsys):
    code, body = run_json(capsys, "traces", "--max-len", "4", "--against", RECURSIVE_READER, READER)
    assert code == EXIT_NEGATIVE
    assert "1a1a" in body["right_only"]


def test_import_net(capsys, tmp_path, net_text):
    net = tmp_path / "place.net"
    net.write_text(net_text)
    code, body = run_json(capsys, "import-pn", str(net))
    assert code == EXIT_OK
    assert body["proper"] is True
    code, body = run_json(capsys, "import-pn", "--check", str(net))
    assert code == EXIT_OK
    assert body["verdict"] == "equivalent"


def test_validate(capsys):
    code, body = run_json(capsys, "validate-paper")
    assert code == EXIT_OK
    assert body["failed"] == 0


def test_unknown_command():
    with pytest.raises(SystemExit):
        main(["frobnicate"])


@pytest.mark.parametrize(
    "document, expected",
    [
        ({"verdict": "yes"}, EXIT_OK),
        ({"verdict": "equivalent"}, EXIT_OK),
        ({"verdict": "no"}, EXIT_NEGATIVE),
        ({"verdict": "distinguished"}, EXIT_NEGATIVE),
        ({"verdict": "bounded-unknown"}, EXIT_BOUNDED),
        ({"words": [], "truncated": True}, EXIT_BOUNDED),
        ({"term": "0"}, EXIT_OK),
    ],
)
def test_exit_codes(document, expected):
    assert exit_code(document) == expected
