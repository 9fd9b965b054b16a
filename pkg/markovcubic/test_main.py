import json

import pytest

from .__main__ import main
from .multiparser import MultiParser


def test_multiparser_precedence(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "markovcubic.json").write_text('{"level": 2, "t": "4/3"}')
    extra = tmp_path / "extra.json"
    extra.write_text('{"t": "3"}')
    parser = MultiParser(["model", "-c", str(extra), "--level", "3"])
    assert parser.argumentOrConfig("level") == 3
    assert parser.argumentOrConfig("t") == "3"
    assert parser.argumentOrConfig("seed", 0) == 0
    assert parser.output_format() == "json"
    assert MultiParser(["model", "--out", "x.csv"]).output_format() == "csv"


def test_missing_config_aborts(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    with pytest.raises(SystemExit) as err:
        MultiParser(["model", "-c", "missing.json"])
    assert err.value.code == 1


def test_main_hausdorff(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    out = tmp_path / "h.json"
    assert main(["hausdorff", "--max-level", "3", "--out", str(out)]) == 0
    assert len(json.loads(out.read_text())["rows"]) == 3
    assert "Wrote json output" in capsys.readouterr().out


def test_main_model_csv_to_stdout(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    assert main(["model", "--level", "1", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "section,source,cycles,weight"
    assert len(lines) == 4


def test_main_exit_codes(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(["group", "--level", "10"]) == 2
    assert main(["model", "--prime-bound", "3"]) == 2


def test_main_report_from_config(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    config = tmp_path / "report.json"
    config.write_text(
        json.dumps(
            {
                "title": "Level one",
                "sections": [
                    {"provider": "model", "config": {"level": 1}},
                    {"provider": "hausdorff", "config": {"max_level": 2}},
                ],
            }
        )
    )
    out = tmp_path / "report.json.out"
    assert main(["report", "-c", str(config), "--out", str(out), "--format", "json"]) == 0
    payload = json.loads(out.read_text())
    assert payload["title"] == "Level one"
    assert len(payload["sections"]) == 2
