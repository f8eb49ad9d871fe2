"""Text renderings of command reports; JSON output uses the ``as_dict`` forms directly."""

from __future__ import annotations

from typing import Any

import pandas as pd

from pseudoquandle_app.classification import AbelianClassification
from pseudoquandle_app.corpus import CorpusRow, corpus_frame
from pseudoquandle_app.group_core import ConjugacyPartition, GroupTable, Subgroup
from pseudoquandle_app.kernels import ChainReport, ClassEquationReport, KernelTable, PropertyReport
from pseudoquandle_app.matrix import MatrixReport, PQMatrix, render_matrix_text
from pseudoquandle_app.pseudoquandle import AxiomReport, FiniteMagma, IsomorphismWitness


def subscript_set(indices: Any) -> str:
    return "{" + ",".join(f"x{index + 1}" for index in sorted(indices)) + "}"


def group_report(g: GroupTable, classes: ConjugacyPartition, subgroups: list[Subgroup]) -> dict[str, Any]:
    return {
        "spec": g.spec,
        "order": g.order,
        "abelian": g.is_abelian(),
        "conjugacy_classes": [[g.labels[element] for element in block] for block in classes.blocks],
        "normal_subgroups": [
            {"index": index + 1, "size": subgroup.size, "members": [g.labels[e] for e in subgroup.members]}
            for index, subgroup in enumerate(subgroups)
        ],
    }


def render_group_text(report: dict[str, Any]) -> str:
    lines = [
        f"Group {report['spec']}: order {report['order']}, {'abelian' if report['abelian'] else 'non-abelian'}",
        f"Conjugacy classes ({len(report['conjugacy_classes'])}):",
    ]
    lines.extend("  {" + ",".join(block) + "}" for block in report["conjugacy_classes"])
    lines.append(f"Normal subgroups ({len(report['normal_subgroups'])}):")
    for entry in report["normal_subgroups"]:
        lines.append(f"  x{entry['index']} (order {entry['size']}): {{{','.join(entry['members'])}}}")
    return "\n".join(lines)


def axioms_report(m: FiniteMagma, report: AxiomReport) -> dict[str, Any]:
    return {
        "source": m.provenance,
        "size": m.size,
        "labels": list(m.labels),
        **report.as_dict(),
        "magma": m.to_document(),
    }


def render_axioms_text(m: FiniteMagma, report: AxiomReport) -> str:
    lines = [f"Source {m.provenance}: {m.size} elements", f"Classification: {report.classification}"]
    names = (
        ("idempotent", "(i) idempotent"),
        ("right_self_distributive", "(ii) right self-distributive"),
        ("right_translations_bijective", "(iii) right translations bijective"),
        ("left_self_distributive", "left self-distributive"),
        ("commutative", "commutative"),
    )
    for attribute, title in names:
        check = getattr(report, attribute)
        if check.holds:
            lines.append(f"  {title}: yes")
            continue
        witness = ", ".join(f"x{index + 1}" for index in check.witness)
        lines.append(f"  {title}: no, at ({witness})")
    witness = report.right_translations_bijective.witness
    if witness is not None:
        p, q = witness
        solutions = report.bijectivity_solutions
        lines.append(f"  p = x{p + 1} = {m.labels[p]}, q = x{q + 1} = {m.labels[q]}")
        if not solutions:
            lines.append("  no r satisfies p = r*q")
        else:
            lines.append("  r with p = r*q: " + ", ".join(f"x{r + 1}" for r in solutions))
    return "\n".join(lines)


def matrix_payload(m: FiniteMagma, matrix: PQMatrix, report: MatrixReport) -> dict[str, Any]:
    return {
        "source": m.provenance,
        "n": matrix.n,
        "entries": [list(row) for row in matrix.entries],
        **report.as_dict(),
        "magma": m.to_document(),
    }


def render_matrix_report(matrix: PQMatrix, report: MatrixReport) -> str:
    return "\n".join(
        [
            render_matrix_text(matrix),
            f"symmetric={str(report.symmetric).lower()} trace={report.trace} "
            f"expected={report.expected_trace} simple_form={str(report.simple_form).lower()}",
        ]
    )


def kernels_payload(
    m: FiniteMagma, kt: KernelTable, chain: ChainReport, equation: ClassEquationReport | None
) -> dict[str, Any]:
    return {
        "source": m.provenance,
        **kt.as_dict(),
        "chain": chain.as_dict(),
        "class_equation": equation.as_dict() if equation is not None else None,
        "magma": m.to_document(),
    }


def render_kernels_text(
    m: FiniteMagma, kt: KernelTable, chain: ChainReport, equation: ClassEquationReport | None
) -> str:
    lines = [f"Kernels of {m.provenance} (commutative={str(kt.commutative_source).lower()}):"]
    for p in range(kt.size):
        lines.append(f"  ker(x{p + 1}) = {subscript_set(kt.ker(p))}  coker(x{p + 1}) = {subscript_set(kt.coker(p))}")
    if chain.chain_found:
        lines.append("Ascending chain: " + " <= ".join(f"ker(x{p + 1})" for p in chain.ordering))
    else:
        lines.append("no ascending chain")
    if equation is not None:
        lines.append(f"Class equation: {equation.render()}")
    return "\n".join(lines)


def verify_payload(m: FiniteMagma, report: PropertyReport) -> dict[str, Any]:
    return {"source": m.provenance, "size": m.size, **report.as_dict(), "magma": m.to_document()}


def render_verify_text(m: FiniteMagma, report: PropertyReport) -> str:
    lines = [f"Claims on {m.provenance} (tier={report.tier}, commutative={str(report.commutative).lower()}):"]
    for check in report.checks:
        line = f"  {check.name}: {check.status}"
        if check.counterexample is not None:
            line += " at (" + ", ".join(f"x{index + 1}" for index in check.counterexample) + ")"
        if check.note:
            line += f" [{check.note}]"
        lines.append(line)
    lines.append("OK" if report.ok else "FAILED")
    return "\n".join(lines)


def render_classification_text(result: AbelianClassification) -> str:
    mapping = ", ".join(
        f"x{source + 1}->x{target + 1}" for source, target in enumerate(result.witness.mapping)
    )
    return "\n".join(
        [
            f"{result.group_spec}: primary decomposition {result.spec.as_dict()['prime_powers']}"
            + (f", free rank {result.spec.free_rank}" if result.spec.free_rank else ""),
            f"P_G ≅ {result.structure.name}",
            f"witness: {mapping}",
        ]
    )


def iso_payload(a: FiniteMagma, b: FiniteMagma, witness: IsomorphismWitness | None) -> dict[str, Any]:
    return {
        "left": a.provenance,
        "right": b.provenance,
        "isomorphic": witness is not None,
        "witness": witness.as_dict() if witness is not None else None,
    }


def render_iso_text(a: FiniteMagma, b: FiniteMagma, witness: IsomorphismWitness | None) -> str:
    if witness is None:
        return f"{a.provenance} and {b.provenance} are not isomorphic"
    if witness.mapping == tuple(range(a.size)):
        return f"{a.provenance} ≅ {b.provenance} via the identity"
    pairs = ", ".join(f"x{source + 1}->x{target + 1}" for source, target in enumerate(witness.mapping))
    return f"{a.provenance} ≅ {b.provenance} via {pairs}"


def corpus_payload(rows: list[CorpusRow]) -> dict[str, Any]:
    return {"ok": all(row.ok for row in rows), "rows": [row.as_dict() for row in rows]}


def render_corpus_text(rows: list[CorpusRow]) -> str:
    frame: pd.DataFrame = corpus_frame(rows)
    columns = ["spec", "kind", "size", "classification", "chain", "claims_ok", "theorem1", "ok"]
    failed = [row for row in rows if not row.ok]
    lines = [frame[columns].to_string(index=False)]
    for row in failed:
        lines.append(f"{row.spec}: " + "; ".join(row.failures))
    lines.append(f"{len(rows) - len(failed)}/{len(rows)} corpus items passed")
    return "\n".join(lines)
