"""
Sequence files, provenance sidecars, rule tables and report exports.

Sequence file format (UTF-8):

#alphabet: 0 1
#kind: bi-infinite
#origin: 5
0110100110010110

Data is either one line of single-character symbols or one token per line.
Index 0 is the first data symbol unless ``#origin`` moves it.
"""
from __future__ import annotations

import json
import logging
import os
import tempfile
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from ..components.block_maps import BlockMap, table_map
from ..components.language import LanguageTable
from ..components.words import (
    Alphabet,
    ArraySequence,
    DomainError,
    Provenance,
    SequenceKind,
    SymbolicSequence,
)

logger = logging.getLogger(__name__)

SIDECAR_SUFFIX = ".json"


class SequenceFormatError(DomainError):
    """Raised for malformed sequence or rule files."""


def atomic_write(path: str, text: str) -> None:
    """Write ``text`` to ``path`` through a temporary file in the same directory."""
    folder = os.path.dirname(os.path.abspath(path))
    os.makedirs(folder, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=folder)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def dump_json(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _parse_header(lines: List[str]) -> Tuple[Dict[str, str], List[str]]:
    header: Dict[str, str] = {}
    body: List[str] = []
    for number, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if body:
                raise SequenceFormatError(f"line {number}: header after data")
            key, sep, value = line[1:].partition(":")
            if not sep:
                raise SequenceFormatError(f"line {number}: header lines look like '#key: value'")
            header[key.strip().lower()] = value.strip()
        else:
            body.append(line)
    return header, body


def read_sequence(path: str) -> ArraySequence:
    """
    Load an external sequence.

    Args:
        path: sequence file

    Returns:
        ArraySequence: the data with its declared alphabet, kind and origin
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            lines = f.read().splitlines()
    except OSError as e:
        raise SequenceFormatError(f"cannot read {path}: {e}") from e
    header, body = _parse_header(lines)
    if "alphabet" not in header:
        raise SequenceFormatError(f"{path}: missing '#alphabet:' header")
    try:
        alphabet = Alphabet.from_renderings(header["alphabet"].split())
    except DomainError as e:
        raise SequenceFormatError(f"{path}: {e}") from e
    kind_text = header.get("kind", SequenceKind.RIGHT_INFINITE.value)
    try:
        kind = SequenceKind(kind_text)
    except ValueError:
        raise SequenceFormatError(f"{path}: unknown kind {kind_text!r}") from None
    try:
        origin = int(header.get("origin", "0"))
    except ValueError:
        raise SequenceFormatError(f"{path}: origin must be an integer") from None

    if alphabet.single_char:
        tokens = list("".join(body))
    else:
        tokens = body
    lookup = {token: symbol for token, symbol in zip(alphabet.renderings, alphabet.symbols)}
    try:
        data = np.array([lookup[t] for t in tokens], dtype=np.uint8)
    except KeyError as e:
        raise SequenceFormatError(f"{path}: token {e.args[0]!r} is not in the alphabet") from None

    provenance = _read_sidecar(path)
    try:
        return ArraySequence(data, alphabet, origin=origin, kind=kind, provenance=provenance)
    except DomainError as e:
        raise SequenceFormatError(f"{path}: {e}") from e


def _read_sidecar(path: str) -> Provenance:
    sidecar = path + SIDECAR_SUFFIX
    if not os.path.exists(sidecar):
        return Provenance.build("external", {"file": os.path.basename(path)}, generated=False)
    with open(sidecar, "r", encoding="utf-8") as f:
        meta = json.load(f)
    source = meta.get("provenance", {})
    params = dict(source.get("params", {}), file=os.path.basename(path))
    return Provenance.build(f"file:{source.get('family', 'external')}", params, generated=False)


def write_sequence(
    seq: SymbolicSequence,
    path: str,
    lo: int,
    hi: int,
    schedule: Optional[Dict[str, Any]] = None,
) -> None:
    """
    Write seq[lo..hi] and its provenance sidecar ``<path>.json``.

    Index ``lo`` becomes the first data symbol; a bi-infinite sequence keeps its
    origin when ``lo`` <= 0.
    """
    data = seq.block(lo, hi)
    alphabet = seq.alphabet
    header = [f"#alphabet: {' '.join(alphabet.renderings)}"]
    if seq.kind is SequenceKind.BI_INFINITE and lo <= 0 <= hi:
        header += [f"#kind: {SequenceKind.BI_INFINITE.value}", f"#origin: {-lo}"]
    rendered = [alphabet.render(int(s)) for s in data.tolist()]
    body = "".join(rendered) + "\n" if alphabet.single_char else "\n".join(rendered) + "\n"
    atomic_write(path, "\n".join(header) + "\n" + body)
    meta: Dict[str, Any] = {
        "provenance": seq.provenance.as_dict(),
        "window": [lo, hi],
        "kind": seq.kind.value,
    }
    if schedule is not None:
        meta["schedule"] = schedule
    atomic_write(path + SIDECAR_SUFFIX, dump_json(meta))
    logger.info("wrote %d symbols to %s", data.size, path)


def read_rule(path: str, source: Alphabet, memory: int = 0, name: str = "custom") -> BlockMap:
    """
    Load a block map from a TSV with columns ``window`` and ``image``.

    Windows are rendered words over ``source``; image tokens missing from the
    source alphabet become fresh target symbols.
    """
    try:
        frame = pd.read_csv(path, sep="\t", dtype=str, keep_default_na=False, comment="#")
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise SequenceFormatError(f"cannot read rule table {path}: {e}") from e
    if not {"window", "image"} <= set(frame.columns):
        raise SequenceFormatError(f"{path}: rule tables need 'window' and 'image' columns")
    fresh = sorted({t for t in frame["image"] if t not in source.renderings})
    target, _ = source.extended(fresh) if fresh else (source, ())
    table: Dict[bytes, int] = {}
    for window_text, image_text in zip(frame["window"], frame["image"]):
        tokens = list(window_text) if source.single_char else window_text.split()
        try:
            key = bytes(source.parse(t) for t in tokens)
        except DomainError as e:
            raise SequenceFormatError(f"{path}: {e}") from e
        table[key] = target.parse(image_text)
    try:
        return table_map(table, memory, source, target, name=name)
    except DomainError as e:
        raise SequenceFormatError(f"{path}: {e}") from e


def table_frame(table: LanguageTable) -> pd.DataFrame:
    levels = range(1, table.n_max + 2)
    return pd.DataFrame(
        {
            "n": list(levels),
            "count": [table.count(n) for n in levels],
            "saturated": [table.is_saturated(n) for n in levels],
        }
    )


def table_words(table: LanguageTable) -> Dict[str, Any]:
    """Words and extension sets of every level, rendered."""
    render = table.alphabet.render_word
    out: Dict[str, Any] = {"window": list(table.window), "n_max": table.n_max, "levels": {}}
    for n in range(1, table.n_max + 1):
        out["levels"][str(n)] = {
            render(w.symbols): {
                "right": [table.alphabet.render(s) for s in sorted(table.right_extensions(w))],
                "left": [table.alphabet.render(s) for s in sorted(table.left_extensions(w))],
            }
            for w in table.sorted_words(n)
        }
    return out


def frame_text(frame: pd.DataFrame, fmt: str) -> str:
    """Serialise a trace as TSV or as JSON records."""
    if fmt == "json":
        return frame.to_json(orient="records", indent=2) + "\n"
    if fmt != "tsv":
        raise DomainError(f"unknown output format {fmt!r}")
    return frame.to_csv(sep="\t", index=False)


def write_frame(frame: pd.DataFrame, path: str, fmt: str = "tsv") -> None:
    atomic_write(path, frame_text(frame, fmt))
