import json

from app import main
from src.components.words import window
from src.generators.families import staircase
from src.integrations.sequence_io import read_sequence


def test_list_prints_catalog(capsys):
    # Act
    code = main(["list"])

    # Assert
    out = capsys.readouterr().out
    assert code == 0
    assert "recurrent-bounds" in out
    assert "generic-extraction" in out
    assert "defaults:" not in out


def test_list_with_defaults(capsys):
    # Act
    code = main(["list", "--defaults"])

    # Assert
    assert code == 0
    assert '"horizon": 4096' in capsys.readouterr().out


def test_verify_writes_bundle(tmp_path, capsys):
    # Act
    code = main(["--out-dir", str(tmp_path), "verify", "morse-hedlund"])

    # Assert
    assert code == 0
    assert "morse-hedlund: pass (6 checks)" in capsys.readouterr().out
    with open(tmp_path / "morse-hedlund" / "summary.json", encoding="utf-8") as f:
        summary = json.load(f)
    assert summary["verdict"] == "pass"
    assert summary["params"]["words"] == ["01", "0011"]


def test_list_shows_tags_and_anchors(capsys):
    # Act
    code = main(["list"])

    # Assert
    out = capsys.readouterr().out
    assert code == 0
    assert "T1.1" in out
    assert '"the following bounds hold and are sharp"' in out
    assert "T1.4-extract" in out


def test_verify_by_tag(tmp_path, capsys):
    # Act
    code = main(["--out-dir", str(tmp_path), "verify", "T2.2"])

    # Assert
    assert code == 0
    assert "T2.2 morse-hedlund: pass" in capsys.readouterr().out
    with open(tmp_path / "morse-hedlund" / "summary.json", encoding="utf-8") as f:
        assert json.load(f)["tag"] == "T2.2"


def test_verify_tag_variant(tmp_path):
    # Act
    code = main(["--out-dir", str(tmp_path), "verify", "T4.1-i1", "--param", "N=[5]", "--param", "n_max=40"])

    # Assert
    assert code == 0
    with open(tmp_path / "nonrecurrent-exact" / "summary.json", encoding="utf-8") as f:
        params = json.load(f)["params"]
    assert params["cases"] == ["i1"]
    assert params["N"] == [5]


def test_verify_with_param_override(tmp_path):
    # Act
    code = main(["--out-dir", str(tmp_path), "verify", "sturmian-exact", "--param", "n_max=30"])

    # Assert
    assert code == 0
    with open(tmp_path / "sturmian-exact" / "summary.json", encoding="utf-8") as f:
        assert json.load(f)["params"]["n_max"] == 30


def test_verify_unknown_experiment(tmp_path, capsys):
    # Act
    code = main(["--out-dir", str(tmp_path), "verify", "collatz"])

    # Assert
    assert code == 2
    assert "Invalid argument" in capsys.readouterr().err


def test_verify_unknown_param(tmp_path, capsys):
    # Act
    code = main(["--out-dir", str(tmp_path), "verify", "morse-hedlund", "--param", "depth=3"])

    # Assert
    assert code == 2
    assert "no parameter 'depth'" in capsys.readouterr().err


def test_analyze_profile(capsys):
    # Act
    code = main(["analyze", "--family", "sturmian", "--nmax", "10"])

    # Assert
    lines = capsys.readouterr().out.splitlines()
    assert code == 0
    assert lines[0] == "n\tc\tsaturated\trs\tls"
    assert len(lines) == 11
    assert lines[3].split("\t")[:2] == ["3", "4"]


def test_analyze_bounds_exit_codes(capsys):
    # Act
    passing = main(["analyze", "--family", "sturmian", "--nmax", "10", "--report", "bounds", "--bound", "2,0,ceiling"])
    failing = main(["analyze", "--family", "sturmian", "--nmax", "10", "--report", "bounds", "--bound", "1,0,ceiling"])

    # Assert
    assert passing == 0
    assert failing == 1


def test_analyze_bounds_needs_spec(capsys):
    # Act
    code = main(["analyze", "--family", "staircase", "--report", "bounds", "--nmax", "5"])

    # Assert
    assert code == 2
    assert "needs --bound" in capsys.readouterr().err


def test_gen_writes_sequence_and_sidecar(tmp_path, capsys):
    # Arrange
    path = tmp_path / "stair.txt"

    # Act
    code = main(["gen", "--family", "staircase", "--out", str(path), "--lo", "-3", "--hi", "9"])

    # Assert
    assert code == 0
    assert "Wrote 13 symbols" in capsys.readouterr().out
    assert window(read_sequence(str(path)), -3, 9) == window(staircase(), -3, 9)
    with open(str(path) + ".json", encoding="utf-8") as f:
        assert json.load(f)["window"] == [-3, 9]


def test_map_reduction_on_periodic_point(tmp_path):
    # Arrange
    path = tmp_path / "image.txt"

    # Act
    code = main(
        ["map", "reduction", "--family", "periodic", "--word", "012", "--marker", "1", "--out", str(path), "--hi", "5"]
    )

    # Assert
    assert code == 0
    assert read_sequence(str(path)).last_index == 5


def test_missing_input_file(tmp_path, capsys):
    # Act
    code = main(["analyze", "--input", str(tmp_path / "nothing.txt")])

    # Assert
    assert code == 2
    assert "cannot read" in capsys.readouterr().err


def test_gen_positional_family_with_length_and_origin(tmp_path, capsys):
    # Arrange
    path = tmp_path / "stair.txt"

    # Act
    code = main(["gen", "staircase", "--length", "13", "--origin", "3", "--out", str(path)])

    # Assert
    assert code == 0
    assert "Wrote 13 symbols" in capsys.readouterr().out
    seq = read_sequence(str(path))
    assert (seq.first_index, seq.last_index) == (-3, 9)
    assert window(seq, -3, 9) == window(staircase(), -3, 9)


def test_gen_needs_a_source(tmp_path, capsys):
    # Act
    missing = main(["gen", "--out", str(tmp_path / "x.txt")])
    twice = main(["gen", "staircase", "--family", "sturmian", "--out", str(tmp_path / "y.txt")])

    # Assert
    assert missing == 2
    assert twice == 2
    assert "name the source once" in capsys.readouterr().err


def test_in_reads_a_generated_file(tmp_path, capsys):
    # Arrange
    path = tmp_path / "sturmian.txt"
    main(["gen", "sturmian", "--length", "4096", "--out", str(path)])
    capsys.readouterr()

    # Act
    main(["analyze", "--in", str(path), "--nmax", "6"])

    # Assert
    lines = capsys.readouterr().out.splitlines()
    assert [line.split("\t")[1] for line in lines[1:]] == ["2", "3", "4", "5", "6", "7"]


def test_analyze_writes_verdict_block(tmp_path):
    # Arrange
    out = tmp_path / "bounds.tsv"

    # Act
    code = main(
        ["analyze", "--family", "sturmian", "--nmax", "10", "--report", "bounds", "--bound", "1,0,ceiling",
         "--out", str(out)]
    )

    # Assert
    assert code == 1
    with open(str(out) + ".verdict.json", encoding="utf-8") as f:
        block = json.load(f)
    assert block["report"] == "bounds"
    assert block["saturated"] == 10
    assert block["verdict"] == "fail"
    assert [c["verdict"] for c in block["checks"]] == ["pass", "fail"]
    assert block["checks"][0]["check"] == "counting identity"


def test_analyze_verdict_block_on_stderr(capsys):
    # Act
    code = main(["analyze", "--family", "periodic", "--word", "011", "--nmax", "8"])

    # Assert
    captured = capsys.readouterr()
    assert code == 0
    block = json.loads(captured.err[captured.err.index("{"):])
    assert block["verdict"] == "pass"
    assert block["n_max"] == 8


def test_measure_lengths_report_distances(capsys):
    # Act
    code = main(["measure", "--family", "periodic", "--word", "01", "--lengths", "100,1000,10000"])

    # Assert
    captured = capsys.readouterr()
    assert code == 0
    assert "consecutive estimates: pass" in captured.err
    assert captured.out.splitlines()[0] == "n\tdistance"


def test_measure_extract_form(capsys):
    # Act
    code = main(["measure", "extract", "--family", "staircase", "--g", "3", "--nmax", "30"])

    # Assert
    lines = capsys.readouterr().out.splitlines()
    assert code == 0
    assert lines[0] == "cluster\tn\tword"
    assert {line.split("\t")[0] for line in lines[1:]} == {"0", "1"}


def test_measure_extract_needs_g(capsys):
    # Act
    code = main(["measure", "extract", "--family", "staircase"])

    # Assert
    assert code == 2
    assert "needs --g" in capsys.readouterr().err
