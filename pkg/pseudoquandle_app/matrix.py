from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np
import pandas as pd

from pseudoquandle_app.errors import TheoremViolation
from pseudoquandle_app.pseudoquandle import FiniteMagma

SIMPLE_FORM = ((1, 2), (2, 2))


@dataclass(frozen=True)
class PQMatrix:
    """Multiplication table written with 1-based subscripts."""

    n: int
    entries: tuple[tuple[int, ...], ...]

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64).reshape(self.n, self.n)


@dataclass(frozen=True)
class MatrixReport:
    symmetric: bool
    trace: int
    expected_trace: int
    trace_ok: bool
    simple_form: bool

    def as_dict(self) -> dict[str, Any]:
        return {
            "symmetric": self.symmetric,
            "trace": self.trace,
            "expected_trace": self.expected_trace,
            "trace_ok": self.trace_ok,
            "simple_form": self.simple_form,
        }


def matrix_of(m: FiniteMagma) -> PQMatrix:
    entries = m.op + 1
    return PQMatrix(n=m.size, entries=tuple(tuple(int(value) for value in row) for row in entries.tolist()))


def matrix_report(m: PQMatrix, source_is_pg: bool = False) -> MatrixReport:
    array = m.as_array()
    symmetric = bool((array == array.T).all())
    trace = int(np.trace(array))
    expected = m.n * (m.n + 1) // 2
    if source_is_pg and not symmetric:
        # P_G is commutative, so an asymmetric matrix means a broken table.
        raise TheoremViolation("Matrix of a normal-subgroup pseudoquandle is not symmetric.")
    return MatrixReport(
        symmetric=symmetric,
        trace=trace,
        expected_trace=expected,
        trace_ok=trace == expected,
        simple_form=m.entries == SIMPLE_FORM,
    )


def render_matrix_text(m: PQMatrix) -> str:
    width = len(str(m.n))
    return "\n".join(" ".join(str(value).rjust(width) for value in row) for row in m.entries)


def matrix_to_frame(m: PQMatrix, labels: tuple[str, ...] | None = None) -> pd.DataFrame:
    index = [f"x{i}" for i in range(1, m.n + 1)]
    frame = pd.DataFrame(m.as_array(), index=index, columns=index)
    if labels is not None:
        frame.insert(0, "label", list(labels))
    return frame
