# test_cell_ledger.py
from collections import Counter
import json
import re

import pytest

from algebra.cartan_matrix import format_gcm_text, named
from cell_ledger import (
    EXIT_DOMAIN_ERROR,
    EXIT_OK,
    EXIT_USAGE_ERROR,
    emit,
    load_commands,
    main,
    parse_request,
    run,
    usage_epilog,
)
from utils.report_utils import dump_json, format_table, load_report, rows_to_csv

COMMANDS = load_commands()


def _run(argv):
    request = parse_request(argv, COMMANDS)
    report, code = run(request, COMMANDS)
    return request, report, code


def _json(argv):
    request, report, code = _run(argv)
    return json.loads(emit(report, request, COMMANDS)), code


def test_every_command_is_discovered():
    assert sorted(COMMANDS) == ["bott", "cells", "compare", "countable", "cosets", "growth", "homotopy-en", "tower"]


def test_growth_csv():
    request, report, code = _run(["growth", "A3", "--max-len", "6", "--format", "csv"])
    assert code == EXIT_OK
    assert emit(report, request, COMMANDS) == "1,3,5,6,5,3,1\n"


def test_json_report_is_byte_identical_across_runs():
    argv = ["cells", "E10", "--sub", "1-9", "--max-dim", "8", "--format", "json"]
    first_request, first, _ = _run(argv)
    second_request, second, _ = _run(argv)
    first_text = emit(first, first_request, COMMANDS)
    assert first_text == emit(second, second_request, COMMANDS)
    data = json.loads(first_text)
    assert data["schema"] == 1
    assert data["status"] == "ok"
    assert data["payload"]["counts"] == [1, 1, 1, 1, 1, 1, 1, 1, 2]
    assert "timing_ms" not in data
    assert data["provenance"]["input"]["sub"] == "1-9"


def test_timing_is_opt_in():
    data, _ = _json(["bott", "--max-k", "3", "--format", "json", "--with-timing"])
    assert "timing_ms" in data


def test_cosets_words():
    data, code = _json(["cosets", "A2", "--sub", "2", "--max-len", "2", "--format", "json"])
    assert code == EXIT_OK
    assert data["payload"]["levels"] == [[[]], [["1"]], [["2", "1"]]]
    assert data["payload"]["parabolic"] == ["2"]


def test_compare_operands():
    data, code = _json(["compare", "E10", "A9", "--sub", "1-9", "--sub", "1-8", "--max-dim", "7",
                        "--format", "json"])
    assert code == EXIT_OK
    assert data["payload"]["verdict"] == "MatchThrough"
    assert data["payload"]["dimension"] == 7

    data, _ = _json(["compare", "E9", "A8", "--sub", "1-8", "--sub", "1-7", "--max-dim", "8",
                     "--format", "json"])
    assert (data["payload"]["verdict"], data["payload"]["dimension"]) == ("DivergeAt", 7)


def test_homotopy_en_report_carries_trace():
    data, code = _json(["homotopy-en", "--n", "10", "--max-k", "6", "--format", "json"])
    assert code == EXIT_OK
    texts = [g["text"] for g in data["payload"]["profile"]["groups"]]
    assert texts == ["1", "C2", "1", "Z", "1", "1", "1"]
    assert all(line["citation"] for line in data["trace"])


def test_tower_on_orthogonal_group():
    data, _ = _json(["tower", "--space", "O16", "--max-k", "6", "--format", "json"])
    assert [s["killed_degree"] for s in data["payload"]["stages"]] == [0, 1, 3]
    assert data["payload"]["chain"] == "String-stage → Spin-stage → connected cover → O(16)"


def test_gcm_file_input(tmp_path):
    path = tmp_path / "a3.gcm"
    path.write_text(format_gcm_text(named("A3")), encoding="utf-8")
    request, report, code = _run(["growth", "--file", str(path), "--max-len", "6", "--format", "csv"])
    assert code == EXIT_OK
    assert emit(report, request, COMMANDS) == "1,3,5,6,5,3,1\n"


@pytest.mark.parametrize("argv, flag", [
    (["growth", "A3", "--max-len", "-1"], "--max-len"),
    (["growth", "E5"], "type"),
    (["growth"], "--file"),
    (["cosets", "A3", "--sub", "7"], "--sub"),
    (["compare", "A3", "A3", "--sub", "1", "--sub", "2", "--sub", "3"], "--sub"),
    (["cells", "A3", "--group", "K", "--sub", "1"], "--group"),
    (["tower", "--space", "Sp8"], "--space"),
])
def test_usage_errors_name_the_flag(argv, flag):
    _, report, code = _run(argv)
    assert code == EXIT_USAGE_ERROR
    assert report.error["type"] == "UsageError"
    assert report.error["details"]["flag"] == flag


def test_argparse_rejects_unknown_format():
    with pytest.raises(SystemExit) as excinfo:
        parse_request(["growth", "A3", "--format", "xml"], COMMANDS)
    assert excinfo.value.code == 2


def test_domain_errors_exit_with_one():
    _, report, code = _run(["homotopy-en", "--n", "10", "--max-k", "7"])
    assert code == EXIT_DOMAIN_ERROR
    assert report.error["type"] == "KmaxCapError"

    _, report, code = _run(["growth", "E10", "--max-len", "6", "--budget", "50"])
    assert code == EXIT_DOMAIN_ERROR
    assert report.error["type"] == "EnumerationBudgetExceeded"
    assert report.error["details"]["depth_reached"] == 1


def test_main_writes_json_and_output_file(tmp_path, capsys):
    target = tmp_path / "bott.json"
    code = main(["bott", "--max-k", "3", "--format", "json", "--output", str(target)])
    assert code == EXIT_OK
    printed = capsys.readouterr().out
    data = json.loads(printed)
    assert [v["group"] for v in data["payload"]["values"]] == ["C2", "C2", "1", "Z"]
    assert data["payload"]["unstable_exceptions"][0]["group"] == "Z⊕Z"
    assert load_report(str(target)) == data
    assert printed == dump_json(data)


def test_main_reports_errors_on_stderr_for_tables(capsys):
    code = main(["homotopy-en", "--max-k", "7"])
    captured = capsys.readouterr()
    assert code == EXIT_DOMAIN_ERROR
    assert captured.out == ""
    assert "KmaxCapError" in captured.err


def test_table_output_includes_trace():
    request, report, _ = _run(["countable", "E10", "--max-k", "2"])
    text = emit(report, request, COMMANDS)
    assert "degree" in text
    assert "STEP: " in text


def test_rows_to_csv():
    assert rows_to_csv([[1, 2], ["a", "b"]]) == "1,2\na,b\n"


USAGE_EXAMPLES = [
    (name, example["argv"])
    for name in sorted(COMMANDS)
    for example in COMMANDS[name]().get_usage_examples()
]


@pytest.mark.parametrize("name, argv", USAGE_EXAMPLES, ids=[" ".join(argv) for _, argv in USAGE_EXAMPLES])
def test_usage_examples_run_and_appear_in_help(name, argv):
    assert " ".join(argv) in usage_epilog(COMMANDS[name]())
    _, report, code = _run(argv)
    assert code == EXIT_OK, report.error
    assert report.status == "ok"


def test_every_command_has_usage_examples():
    assert {name for name, _ in USAGE_EXAMPLES} == set(COMMANDS)


def _numbers(text):
    return [int(n) for n in re.findall(r"\d+", text)]


def _payload_numbers(value):
    if isinstance(value, dict):
        return [n for v in value.values() for n in _payload_numbers(v)]
    if isinstance(value, list):
        # 行号取自列表下标
        return list(range(len(value))) + [n for v in value for n in _payload_numbers(v)]
    if isinstance(value, bool) or value is None:
        return []
    return _numbers(str(value))


@pytest.mark.parametrize("argv, csv_rows", [
    (["growth", "A3", "--max-len", "6"], lambda p: [p["coefficients"]]),
    (["cells", "E10", "--sub", "1-9", "--max-dim", "8"], lambda p: [p["counts"]]),
    (["cosets", "A3", "--sub", "1", "--max-len", "4"], lambda p: [[i, s] for i, s in enumerate(p["sizes"])]),
    (["compare", "E9", "A8", "--sub", "1-8", "--sub", "1-7", "--max-dim", "8"], lambda p: p["detail"]),
], ids=["growth", "cells", "cosets", "compare"])
def test_table_and_csv_only_show_numbers_from_the_payload(argv, csv_rows):
    outputs = {}
    for output_format in ("json", "table", "csv"):
        request, report, code = _run(argv + ["--format", output_format])
        assert code == EXIT_OK
        outputs[output_format] = emit(report, request, COMMANDS)
    payload = json.loads(outputs["json"])["payload"]

    parsed_csv = [[int(v) for v in line.split(",")] for line in outputs["csv"].splitlines()]
    assert parsed_csv == [list(row) for row in csv_rows(payload)]

    table_numbers = _numbers(outputs["table"])
    assert set(table_numbers) <= set(_payload_numbers(payload))
    assert not Counter(n for row in parsed_csv for n in row) - Counter(table_numbers)


def test_table_lines_have_no_trailing_spaces():
    text = format_table(["dimension", "left", ""], [[0, 1, ""], [1, 2, "≠"]])
    assert all(line == line.rstrip() for line in text.splitlines())
    assert text.splitlines()[1] == "---------  ----  -"

    request, report, _ = _run(["compare", "E9", "A8", "--sub", "1-8", "--sub", "1-7", "--max-dim", "8"])
    assert all(line == line.rstrip() for line in emit(report, request, COMMANDS).splitlines())


def test_bott_report_cites_periodicity_and_the_unstable_exception():
    data, _ = _json(["bott", "--max-k", "7", "--format", "json"])
    rules = [line["rule"] for line in data["trace"]]
    assert rules.count("bott-periodicity") == 8
    assert "unstable-exception" in rules
    assert all(line["citation"] for line in data["trace"])


def test_covers_cite_the_sheet_lifting():
    data, _ = _json(["cells", "A2", "--sheets", "2", "--max-dim", "3", "--format", "json"])
    assert data["payload"]["counts"] == [2, 4, 4, 2]
    assert [line["rule"] for line in data["trace"]] == ["finite-cover"]

    data, _ = _json(["cells", "A2", "--max-dim", "3", "--format", "json"])
    assert data["trace"] is None
