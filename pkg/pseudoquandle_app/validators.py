from __future__ import annotations

from typing import Any

TABLE_DOCUMENT_KEYS = ("order", "table")
MAGMA_DOCUMENT_KEYS = ("size", "op")


def _validate_square(table: Any, size: int, table_key: str) -> list[str]:
    errors: list[str] = []
    if not isinstance(table, list) or len(table) != size:
        return [f"'{table_key}' must be a list of {size} rows."]

    for row_index, row in enumerate(table):
        if not isinstance(row, list) or len(row) != size:
            errors.append(f"Row {row_index} of '{table_key}' must have {size} entries.")
            continue
        for column_index, value in enumerate(row):
            if isinstance(value, bool) or not isinstance(value, int):
                errors.append(f"Entry ({row_index},{column_index}) of '{table_key}' is not an integer.")
            elif not 0 <= value < size:
                errors.append(
                    f"Entry ({row_index},{column_index}) of '{table_key}' is {value}, outside 0..{size - 1}."
                )
    return errors


def _validate_labels(document: dict, size: int) -> list[str]:
    labels = document.get("labels")
    if labels is None:
        return []
    if not isinstance(labels, list) or len(labels) != size:
        return [f"'labels' must be a list of {size} strings."]
    if len({str(label) for label in labels}) != size:
        return ["'labels' must be distinct."]
    return []


def _validate_document(document: Any, size_key: str, table_key: str) -> list[str]:
    if not isinstance(document, dict):
        return ["Document must be a JSON object."]

    missing = [key for key in (size_key, table_key) if key not in document]
    if missing:
        return [f"Missing required keys: {', '.join(missing)}"]

    size = document[size_key]
    if isinstance(size, bool) or not isinstance(size, int) or size <= 0:
        return [f"'{size_key}' must be a positive integer."]

    errors = _validate_labels(document, size)
    errors.extend(_validate_square(document[table_key], size, table_key))
    return errors


def validate_table_document(document: Any) -> list[str]:
    """Shape checks for a Cayley-table document; group axioms are checked by ``build_group``."""
    return _validate_document(document, *TABLE_DOCUMENT_KEYS)


def validate_magma_document(document: Any) -> list[str]:
    return _validate_document(document, *MAGMA_DOCUMENT_KEYS)
