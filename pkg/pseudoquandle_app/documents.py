from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any

import pandas as pd

from pseudoquandle_app.errors import ParseError

logger = logging.getLogger(__name__)

_DOCUMENT_CACHE_MAX_ENTRIES = 32
_DOCUMENT_CACHE: dict[tuple[str, str], tuple[int, dict]] = {}

_KEYS = {
    "group": ("order", "table"),
    "magma": ("size", "op"),
}


def _read_file_to_dataframe(path: Path) -> pd.DataFrame:
    suffix = path.suffix.lower()
    if suffix == ".csv":
        return pd.read_csv(path, header=None, dtype=str)
    if suffix in {".xlsx", ".xls"}:
        return pd.read_excel(path, header=None, dtype=str)
    raise ParseError(f"Unsupported document type '{suffix}'; use JSON, CSV or XLSX/XLS.")


def _frame_to_document(frame: pd.DataFrame, kind: str) -> dict:
    size_key, table_key = _KEYS[kind]
    frame = frame.dropna(how="all").fillna("")
    rows = [[str(value).strip() for value in row] for row in frame.to_numpy().tolist()]
    if not rows:
        raise ParseError("Document is empty.")

    labels = None
    if not all(value.lstrip("-").isdigit() for value in rows[0]):
        labels, rows = rows[0], rows[1:]

    try:
        table = [[int(value) for value in row] for row in rows]
    except ValueError as exc:
        raise ParseError(f"Table contains non-integer values: {exc}") from exc

    document: dict[str, Any] = {size_key: len(table), table_key: table}
    if labels is not None:
        document["labels"] = labels
    return document


def _load_uncached(path: Path, kind: str) -> dict:
    if path.suffix.lower() == ".json":
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ParseError(f"Invalid JSON in {path}: {exc.msg}") from exc
    return _frame_to_document(_read_file_to_dataframe(path), kind)


def load_document(file_path: str | Path, kind: str = "group") -> dict:
    """Read a table document (``kind`` is ``group`` or ``magma``) from JSON, CSV or XLSX."""
    if kind not in _KEYS:
        raise ValueError(f"Unknown document kind '{kind}'.")
    path = Path(file_path).expanduser()
    if not path.exists():
        raise ParseError(f"Document not found: {path}")

    resolved_path = str(path.resolve())
    modified_ns = path.stat().st_mtime_ns
    cached = _DOCUMENT_CACHE.get((resolved_path, kind))
    if cached and cached[0] == modified_ns:
        return json.loads(json.dumps(cached[1]))

    document = _load_uncached(path, kind)
    logger.debug("Loaded %s document from %s", kind, resolved_path)
    if len(_DOCUMENT_CACHE) >= _DOCUMENT_CACHE_MAX_ENTRIES:
        oldest_key = next(iter(_DOCUMENT_CACHE))
        _DOCUMENT_CACHE.pop(oldest_key, None)
    _DOCUMENT_CACHE[(resolved_path, kind)] = (modified_ns, document)
    return json.loads(json.dumps(document))


def dump_json(data: Any, indent: int | None = None) -> str:
    return json.dumps(data, ensure_ascii=False, indent=indent)


def write_document(document: dict, file_path: str | Path) -> Path:
    target = Path(file_path).expanduser()
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(dump_json(document, indent=2), encoding="utf-8")
    return target
