import json

import pandas as pd
import pytest

from src.components.block_maps import apply_to_word
from src.components.language import build_language
from src.components.words import Alphabet, SequenceKind, Word, window
from src.generators.families import staircase
from src.integrations.sequence_io import (
    SequenceFormatError,
    atomic_write,
    frame_text,
    read_rule,
    read_sequence,
    table_frame,
    table_words,
    write_sequence,
)


def test_read_single_char_sequence(tmp_path):
    # Arrange
    path = tmp_path / "x.txt"
    path.write_text("#alphabet: a b\n#kind: bi-infinite\n#origin: 2\nabba\nab\n", encoding="utf-8")

    # Act
    seq = read_sequence(str(path))

    # Assert
    assert seq.kind is SequenceKind.BI_INFINITE
    assert (seq.first_index, seq.last_index) == (-2, 3)
    assert window(seq, -2, 3) == Word.of(0, 1, 1, 0, 0, 1)
    assert seq.provenance.generated is False


def test_read_token_per_line(tmp_path):
    # Arrange
    path = tmp_path / "tokens.txt"
    path.write_text("#alphabet: 10 11 12\n10\n12\n\n11\n", encoding="utf-8")

    # Act
    seq = read_sequence(str(path))

    # Assert
    assert seq.kind is SequenceKind.RIGHT_INFINITE
    assert window(seq, 0, 2) == Word.of(0, 2, 1)


@pytest.mark.parametrize(
    "text, message",
    [
        ("0101\n", "missing '#alphabet:'"),
        ("#alphabet: 0 1\n0121\n", "not in the alphabet"),
        ("#alphabet: 0 1\n#kind: sideways\n01\n", "unknown kind"),
        ("#alphabet: 0 1\n01\n#origin: 1\n", "header after data"),
        ("#alphabet: 0 1\n#origin: x\n01\n", "origin must be an integer"),
    ],
)
def test_malformed_sequence_files(tmp_path, text, message):
    # Arrange
    path = tmp_path / "bad.txt"
    path.write_text(text, encoding="utf-8")

    # Act / Assert
    with pytest.raises(SequenceFormatError, match=message):
        read_sequence(str(path))


def test_write_then_read_keeps_origin_and_provenance(tmp_path):
    # Arrange
    path = str(tmp_path / "stair.txt")

    # Act
    write_sequence(staircase(), path, -3, 9, schedule={"note": "none"})
    seq = read_sequence(path)
    with open(path + ".json", encoding="utf-8") as f:
        meta = json.load(f)

    # Assert
    assert window(seq, -3, 9) == window(staircase(), -3, 9)
    assert meta["window"] == [-3, 9]
    assert meta["schedule"] == {"note": "none"}
    assert seq.provenance.family == "file:staircase"


def test_read_rule_with_fresh_symbols(tmp_path):
    # Arrange
    path = tmp_path / "rule.tsv"
    path.write_text("window\timage\n00\tx\n01\t1\n10\t1\n11\t0\n", encoding="utf-8")
    source = Alphabet.from_renderings(["0", "1"])

    # Act
    f = read_rule(str(path), source)

    # Assert
    assert f.width == 2
    assert f.target.renderings == ("0", "1", "x")
    assert apply_to_word(f, Word.of(0, 0, 1, 1)) == Word.of(2, 1, 0)


def test_read_rule_needs_columns(tmp_path):
    # Arrange
    path = tmp_path / "rule.tsv"
    path.write_text("from\tto\n0\t1\n", encoding="utf-8")

    # Act / Assert
    with pytest.raises(SequenceFormatError, match="'window' and 'image'"):
        read_rule(str(path), Alphabet.from_renderings(["0", "1"]))


def test_table_exports():
    # Arrange
    table = build_language(staircase(), 3)

    # Act
    frame = table_frame(table)
    words = table_words(table)

    # Assert
    assert frame["count"].tolist()[:2] == [2, 4]
    assert words["levels"]["1"]["0"] == {"right": ["0", "1"], "left": ["0", "1"]}
    assert words["n_max"] == 3


def test_frame_text_formats():
    # Arrange
    frame = pd.DataFrame({"n": [1, 2], "c": [2, 3]})

    # Act / Assert
    assert frame_text(frame, "tsv") == "n\tc\n1\t2\n2\t3\n"
    assert json.loads(frame_text(frame, "json")) == [{"n": 1, "c": 2}, {"n": 2, "c": 3}]
    with pytest.raises(ValueError):
        frame_text(frame, "xml")


def test_atomic_write_creates_folders(tmp_path):
    # Arrange
    path = tmp_path / "deep" / "er" / "out.txt"

    # Act
    atomic_write(str(path), "hello\n")

    # Assert
    assert path.read_text(encoding="utf-8") == "hello\n"
    assert [p.name for p in path.parent.iterdir()] == ["out.txt"]
