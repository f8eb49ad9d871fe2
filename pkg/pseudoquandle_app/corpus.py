from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable

import pandas as pd

from pseudoquandle_app.classification import (
    GcdSegment,
    abelian_corpus,
    theorem1_applies,
    verify_coprime_splitting,
    verify_theorem1,
)
from pseudoquandle_app.config import (
    CORPUS_ABELIAN_MAX_ORDER,
    CORPUS_DIHEDRAL_QUANDLES,
    CORPUS_EXTRA_ABELIAN,
    CORPUS_GCD_BOUNDS,
    CORPUS_MAX_CHAINS,
    CORPUS_NONABELIAN_GROUPS,
    CORPUS_TRIVIAL_QUANDLES,
    Limits,
    resolve_limits,
)
from pseudoquandle_app.errors import PseudoquandleError, TheoremViolation
from pseudoquandle_app.group_core import build_group, enumerate_normal_subgroups
from pseudoquandle_app.kernels import detect_chain, kernel_table, verify_properties
from pseudoquandle_app.matrix import matrix_of, matrix_report
from pseudoquandle_app.pseudoquandle import FiniteMagma, build_example, build_pg, check_axioms, max_chain

logger = logging.getLogger(__name__)

THEOREM_OK = "ok"
THEOREM_SPLIT_ONLY = "split-only"
THEOREM_NOT_ABELIAN = "n/a"


@dataclass
class CorpusRow:
    spec: str
    kind: str
    size: int = 0
    classification: str = ""
    commutative: bool = False
    chain: bool = False
    claims_ok: bool = False
    matrix_ok: bool = True
    simple_form: bool = False
    theorem1: str = THEOREM_NOT_ABELIAN
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict[str, Any]:
        return {
            "spec": self.spec,
            "kind": self.kind,
            "size": self.size,
            "classification": self.classification,
            "commutative": self.commutative,
            "chain": self.chain,
            "claims_ok": self.claims_ok,
            "matrix_ok": self.matrix_ok,
            "simple_form": self.simple_form,
            "theorem1": self.theorem1,
            "ok": self.ok,
            "failures": list(self.failures),
        }


def corpus_groups() -> list[str]:
    specs = abelian_corpus(CORPUS_ABELIAN_MAX_ORDER)
    specs.extend(CORPUS_EXTRA_ABELIAN)
    specs.extend(CORPUS_NONABELIAN_GROUPS)
    return specs


def corpus_structures() -> list[tuple[str, Callable[[], FiniteMagma]]]:
    items: list[tuple[str, Callable[[], FiniteMagma]]] = []
    for n in CORPUS_DIHEDRAL_QUANDLES:
        items.append((f"dihedral:{n}", lambda n=n: build_example("dihedral", n)))
    for n in CORPUS_TRIVIAL_QUANDLES:
        items.append((f"trivial:{n}", lambda n=n: build_example("trivial", n)))
    for k in CORPUS_MAX_CHAINS:
        items.append((f"[{k}]", lambda k=k: max_chain(k)))
    for bound in CORPUS_GCD_BOUNDS:
        items.append((GcdSegment(bound).name, lambda bound=bound: GcdSegment(bound).realize()))
    return items


def _check_structure(row: CorpusRow, m: FiniteMagma) -> None:
    axioms = check_axioms(m)
    row.size = m.size
    row.classification = axioms.classification
    row.commutative = axioms.commutative.holds
    row.chain = detect_chain(kernel_table(m)).chain_found
    properties = verify_properties(m)
    row.claims_ok = properties.ok
    for check in properties.asserted_failures():
        row.failures.append(f"claim {check.name} failed at {check.counterexample}")


def _check_group(row: CorpusRow, limits: Limits) -> None:
    g = build_group(row.spec, limits)
    m = build_pg(g, limits)
    _check_structure(row, m)

    axioms = check_axioms(m)
    for name in ("idempotent", "commutative", "right_self_distributive", "left_self_distributive"):
        check = getattr(axioms, name)
        if not check.holds:
            row.failures.append(f"P_G not {name} at {check.witness}")

    report = matrix_report(matrix_of(m), source_is_pg=True)
    row.matrix_ok = report.symmetric and report.trace_ok
    row.simple_form = report.simple_form
    if not row.matrix_ok:
        row.failures.append("matrix not symmetric or trace law broken")
    if report.simple_form != (len(enumerate_normal_subgroups(g, limits)) == 2):
        row.failures.append("simple form disagrees with simplicity")

    if not g.is_abelian():
        return
    if theorem1_applies(row.spec):
        verify_theorem1(row.spec, limits=limits)
        row.theorem1 = THEOREM_OK
    else:
        try:
            verify_theorem1(row.spec, limits=limits)
        except TheoremViolation:
            row.theorem1 = THEOREM_SPLIT_ONLY
        else:
            row.failures.append("chain normal form matched despite a repeated prime")
        verify_coprime_splitting(row.spec, limits)


def _run_item(spec: str, kind: str, build: Callable[[], FiniteMagma] | None, limits: Limits) -> CorpusRow:
    row = CorpusRow(spec=spec, kind=kind)
    try:
        if build is None:
            _check_group(row, limits)
        else:
            _check_structure(row, build())
    except PseudoquandleError as exc:
        row.failures.append(f"{type(exc).__name__}: {exc}")
    logger.info("Corpus item %s: %s", spec, "ok" if row.ok else "; ".join(row.failures))
    return row


def run_corpus(limits: Limits | None = None, jobs: int = 1) -> list[CorpusRow]:
    """Check every built-in group and structure; rows come back sorted by spec."""
    limits = resolve_limits(limits)
    items: list[tuple[str, str, Callable[[], FiniteMagma] | None]] = [
        (spec, "group", None) for spec in corpus_groups()
    ]
    items.extend((spec, "structure", build) for spec, build in corpus_structures())

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(lambda item: _run_item(*item, limits), items))
    else:
        rows = [_run_item(*item, limits) for item in items]
    return sorted(rows, key=lambda row: row.spec)


def corpus_frame(rows: list[CorpusRow]) -> pd.DataFrame:
    frame = pd.DataFrame([row.as_dict() for row in rows])
    if not frame.empty:
        frame["failures"] = frame["failures"].map("; ".join)
    return frame
