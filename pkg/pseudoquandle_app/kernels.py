from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from pseudoquandle_app.errors import NoChain, NotAHomomorphism
from pseudoquandle_app.pseudoquandle import (
    FiniteMagma,
    check_axioms,
    check_homomorphism,
    kernel_matrix,
)

logger = logging.getLogger(__name__)

TIER_ASSERTED = "asserted"
TIER_EMPIRICAL = "empirical"

STATUS_PASS = "pass"
STATUS_FAIL = "fail"
STATUS_SKIPPED = "skipped"

CLAIMS = (
    "kernel_closure",
    "intersection_inclusion",
    "membership_inclusion",
    "kernel_idempotence",
    "translate_closure",
    "disjointness_lemma",
    "cardinality_bound",
    "phi_bijective",
    "lagrange_identity",
    "coker_chain_closure",
    "homomorphism_inclusion",
)

# Bounds the (rows x k x k) scratch array used by the translate check.
_TRANSLATE_CHUNK_CELLS = 1 << 22


def _subscripts(indices: Iterable[int]) -> list[int]:
    return sorted(int(index) + 1 for index in indices)


@dataclass(frozen=True)
class KernelTable:
    size: int
    kernels: tuple[frozenset[int], ...]
    cokernels: tuple[frozenset[int], ...]
    commutative_source: bool

    def ker(self, p: int) -> frozenset[int]:
        return self.kernels[p]

    def coker(self, p: int) -> frozenset[int]:
        return self.cokernels[p]

    def as_dict(self) -> dict[str, Any]:
        return {
            "size": self.size,
            "commutative_source": self.commutative_source,
            "kernels": [_subscripts(kernel) for kernel in self.kernels],
            "cokernels": [_subscripts(cokernel) for cokernel in self.cokernels],
        }


@dataclass(frozen=True)
class ChainReport:
    chain_found: bool
    ordering: tuple[int, ...] = ()

    def as_dict(self) -> dict[str, Any]:
        return {"chain_found": self.chain_found, "ordering": [index + 1 for index in self.ordering]}


@dataclass(frozen=True)
class ClassEquationReport:
    base: int
    increments: tuple[int, ...]
    total: int
    ordering: tuple[int, ...]

    def as_dict(self) -> dict[str, Any]:
        return {
            "base": self.base,
            "increments": list(self.increments),
            "total": self.total,
            "ordering": [index + 1 for index in self.ordering],
        }

    def render(self) -> str:
        summands = " + ".join(str(value) for value in (self.base, *self.increments))
        return f"{self.total} = {summands}"


@dataclass(frozen=True)
class PropertyCheck:
    name: str
    tier: str
    status: str
    counterexample: tuple[int, ...] | None = None
    note: str = ""

    def as_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "tier": self.tier,
            "status": self.status,
            "counterexample": [index + 1 for index in self.counterexample] if self.counterexample is not None else None,
            "note": self.note,
        }


@dataclass(frozen=True)
class PropertyReport:
    commutative: bool
    tier: str
    checks: tuple[PropertyCheck, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.asserted_failures()

    def asserted_failures(self) -> list[PropertyCheck]:
        return [check for check in self.checks if check.tier == TIER_ASSERTED and check.status == STATUS_FAIL]

    def by_name(self) -> dict[str, PropertyCheck]:
        return {check.name: check for check in self.checks}

    def as_dict(self) -> dict[str, Any]:
        return {
            "commutative": self.commutative,
            "tier": self.tier,
            "ok": self.ok,
            "claims": {check.name: check.as_dict() for check in self.checks},
        }


def kernel(m: FiniteMagma, p: int) -> frozenset[int]:
    """Every q with p*q = q*p = p."""
    row = (m.op[p] == p) & (m.op[:, p] == p)
    return frozenset(int(q) for q in np.flatnonzero(row))


def cokernel(m: FiniteMagma, p: int) -> frozenset[int]:
    return frozenset(range(m.size)) - kernel(m, p)


def relative_cokernel(m: FiniteMagma, q: int, p: int) -> frozenset[int]:
    """ker(p) - ker(q), or the empty set when q is outside ker(p)."""
    outer = kernel(m, p)
    if q not in outer:
        return frozenset()
    return outer - kernel(m, q)


def kernel_table(m: FiniteMagma) -> KernelTable:
    matrix = kernel_matrix(m)
    carrier = frozenset(range(m.size))
    kernels = tuple(frozenset(int(q) for q in np.flatnonzero(row)) for row in matrix)
    return KernelTable(
        size=m.size,
        kernels=kernels,
        cokernels=tuple(carrier - kernel_set for kernel_set in kernels),
        commutative_source=m.is_commutative(),
    )


def kernel_subset_product(m: FiniteMagma, a: Iterable[int], b: Iterable[int]) -> frozenset[int]:
    left = np.fromiter(a, dtype=np.int64)
    right = np.fromiter(b, dtype=np.int64)
    if not left.size or not right.size:
        return frozenset()
    return frozenset(int(value) for value in np.unique(m.op[np.ix_(left, right)]))


def detect_chain(kt: KernelTable) -> ChainReport:
    ordering = sorted(range(kt.size), key=lambda p: (len(kt.kernels[p]), p))
    for current, following in zip(ordering, ordering[1:]):
        if not kt.kernels[current] <= kt.kernels[following]:
            return ChainReport(chain_found=False)
    if ordering and len(kt.kernels[ordering[-1]]) != kt.size:
        return ChainReport(chain_found=False)
    return ChainReport(chain_found=True, ordering=tuple(ordering))


def class_equation(m: FiniteMagma) -> ClassEquationReport:
    kt = kernel_table(m)
    chain = detect_chain(kt)
    if not chain.chain_found:
        raise NoChain(f"{m.provenance} has no ascending chain of kernels.")
    ordering = chain.ordering
    increments = tuple(
        len(relative_cokernel(m, lower, upper)) for lower, upper in zip(ordering, ordering[1:])
    )
    base = len(kt.kernels[ordering[0]])
    total = base + sum(increments)
    if total != m.size:
        raise NoChain(f"Kernel chain of {m.provenance} does not telescope: {total} != {m.size}.")
    return ClassEquationReport(base=base, increments=increments, total=total, ordering=ordering)


def _first_index(mask: np.ndarray) -> int | None:
    found = np.flatnonzero(mask)
    return int(found[0]) if found.size else None


def _closure_violation(op: np.ndarray, members: np.ndarray) -> tuple[int, int] | None:
    if not members.size:
        return None
    inside = np.zeros(op.shape[0], dtype=bool)
    inside[members] = True
    products = op[np.ix_(members, members)]
    found = np.argwhere(~inside[products])
    if not found.size:
        return None
    i, j = found[0]
    return int(members[i]), int(members[j])


def _check_kernel_closure(op: np.ndarray, kernels: np.ndarray) -> tuple[int, ...] | None:
    for p in range(op.shape[0]):
        violation = _closure_violation(op, np.flatnonzero(kernels[p]))
        if violation is not None:
            return (p, *violation)
    return None


def _check_intersection(op: np.ndarray, kernels: np.ndarray) -> tuple[int, ...] | None:
    for p in range(op.shape[0]):
        shared = kernels[p][None, :] & kernels
        violation = np.argwhere(shared & ~kernels[op[p]])
        if violation.size:
            q, x = violation[0]
            return p, int(q), int(x)
    return None


def _check_membership(op: np.ndarray, kernels: np.ndarray) -> tuple[int, ...] | None:
    for q in range(op.shape[0]):
        members = np.flatnonzero(kernels[q])
        if not members.size:
            continue
        violation = np.argwhere(kernels[members] & ~kernels[q][None, :])
        if violation.size:
            row, x = violation[0]
            return int(members[row]), q, int(x)
    return None


def _check_idempotence(m: FiniteMagma, kernels: np.ndarray) -> tuple[int, ...] | None:
    for p in range(m.size):
        members = np.flatnonzero(kernels[p])
        expected = frozenset(int(x) for x in members)
        if kernel_subset_product(m, expected, expected) != expected:
            return (p,)
    return None


def _check_translates(op: np.ndarray, kernels: np.ndarray) -> tuple[int, ...] | None:
    size = op.shape[0]
    for p in range(size):
        members = np.flatnonzero(kernels[p])
        k = members.size
        if not k:
            continue
        translates = op[:, members]
        inside = np.zeros((size, size), dtype=bool)
        inside[np.arange(size)[:, None], translates] = True
        step = max(1, _TRANSLATE_CHUNK_CELLS // (k * k))
        for start in range(0, size, step):
            rows = np.arange(start, min(size, start + step))
            block = translates[rows]
            products = op[block[:, :, None], block[:, None, :]]
            violation = np.argwhere(~inside[rows[:, None, None], products])
            if violation.size:
                row, i, j = violation[0]
                return p, int(rows[row]), int(block[row, i]), int(block[row, j])
    return None


def _disjoint_pairs(kernels: np.ndarray) -> np.ndarray:
    overlap = kernels.astype(np.int64) @ kernels.T.astype(np.int64)
    return np.argwhere(overlap == 0)


def _check_disjointness(m: FiniteMagma, table: KernelTable) -> tuple[int, ...] | None:
    """Disjoint kernels sit inside each other's cokernels."""
    kernels = kernel_matrix(m)
    for p, q in _disjoint_pairs(kernels):
        p, q = int(p), int(q)
        if not (table.ker(q) <= cokernel(m, p) and table.ker(p) <= cokernel(m, q)):
            return p, q
    return None


def _check_cardinality_bound(kernels: np.ndarray) -> tuple[int, ...] | None:
    size = kernels.shape[0]
    sizes = kernels.sum(axis=1)
    for p, q in _disjoint_pairs(kernels):
        if sizes[p] == sizes[q] and size < 2 * int(sizes[p]):
            return int(p), int(q)
    return None


def _check_phi(kernels: np.ndarray) -> tuple[int, ...] | None:
    seen: dict[bytes, int] = {}
    for p, row in enumerate(kernels):
        key = np.packbits(row).tobytes()
        if key in seen:
            return seen[key], p
        seen[key] = p
    return None


def _check_lagrange(kernels: np.ndarray) -> tuple[int, ...] | None:
    size = kernels.shape[0]
    sizes = kernels.sum(axis=1)
    for p in range(size):
        for q in np.flatnonzero(kernels[p]):
            relative = int((kernels[p] & ~kernels[q]).sum())
            if int(sizes[q]) + (size - int(sizes[p])) + relative != size:
                return p, int(q)
    return None


def _check_coker_chain(op: np.ndarray, kernels: np.ndarray) -> tuple[int, ...] | None:
    for p in range(op.shape[0]):
        violation = _closure_violation(op, np.flatnonzero(~kernels[p]))
        if violation is not None:
            return (p, *violation)
    return None


def _kernel_image_violation(a: FiniteMagma, b: FiniteMagma, f: Sequence[int]) -> tuple[int, int] | None:
    images = np.asarray(list(f), dtype=np.int64)
    source = kernel_matrix(a)
    target = kernel_matrix(b)[images[:, None], images[None, :]]
    violation = np.argwhere(source & ~target)
    if violation.size:
        p, x = violation[0]
        return int(p), int(x)
    if len(set(images.tolist())) == b.size == a.size:
        violation = np.argwhere(source != target)
        if violation.size:
            p, x = violation[0]
            return int(p), int(x)
    return None


def verify_hom_kernel_inclusion(a: FiniteMagma, b: FiniteMagma, f: Sequence[int]) -> bool:
    """theta(ker p) lies in ker(theta p) for every p; equality when theta is bijective."""
    homomorphic, witness = check_homomorphism(a, b, f)
    if not homomorphic:
        raise NotAHomomorphism(f"Map is not a homomorphism at pair {witness}.", witness=witness)
    return _kernel_image_violation(a, b, f) is None


def _endomorphisms_to_try(m: FiniteMagma) -> list[tuple[int, ...]]:
    maps = [tuple(range(m.size))]
    for q in range(m.size):
        translation = tuple(int(value) for value in m.op[q])
        if translation not in maps and check_homomorphism(m, m, translation)[0]:
            maps.append(translation)
    return maps


def _check_homomorphisms(m: FiniteMagma) -> tuple[int, ...] | None:
    for mapping in _endomorphisms_to_try(m):
        violation = _kernel_image_violation(m, m, mapping)
        if violation is not None:
            return violation
    return None


def verify_properties(m: FiniteMagma) -> PropertyReport:
    axioms = check_axioms(m)
    commutative = axioms.commutative.holds
    hypothesis = axioms.idempotent.holds and axioms.right_self_distributive.holds and commutative
    tier = TIER_ASSERTED if hypothesis else TIER_EMPIRICAL
    op = m.op
    kernels = kernel_matrix(m)
    table = kernel_table(m)
    chain = detect_chain(table)

    runners: list[tuple[str, Callable[[], tuple[int, ...] | None]]] = [
        ("kernel_closure", lambda: _check_kernel_closure(op, kernels)),
        ("intersection_inclusion", lambda: _check_intersection(op, kernels)),
        ("membership_inclusion", lambda: _check_membership(op, kernels)),
        ("kernel_idempotence", lambda: _check_idempotence(m, kernels)),
        ("translate_closure", lambda: _check_translates(op, kernels)),
        ("disjointness_lemma", lambda: _check_disjointness(m, table)),
        ("cardinality_bound", lambda: _check_cardinality_bound(kernels)),
        ("phi_bijective", lambda: _check_phi(kernels)),
        ("lagrange_identity", lambda: _check_lagrange(kernels)),
    ]
    checks: list[PropertyCheck] = []
    for name, runner in runners:
        counterexample = runner()
        checks.append(
            PropertyCheck(
                name=name,
                tier=tier,
                status=STATUS_PASS if counterexample is None else STATUS_FAIL,
                counterexample=counterexample,
            )
        )

    if chain.chain_found:
        counterexample = _check_coker_chain(op, kernels)
        checks.append(
            PropertyCheck(
                name="coker_chain_closure",
                tier=tier,
                status=STATUS_PASS if counterexample is None else STATUS_FAIL,
                counterexample=counterexample,
            )
        )
    else:
        checks.append(
            PropertyCheck(
                name="coker_chain_closure",
                tier=tier,
                status=STATUS_SKIPPED,
                note="no ascending chain of kernels",
            )
        )

    counterexample = _check_homomorphisms(m)
    checks.append(
        PropertyCheck(
            name="homomorphism_inclusion",
            tier=tier,
            status=STATUS_PASS if counterexample is None else STATUS_FAIL,
            counterexample=counterexample,
            note="identity and endomorphic left translations",
        )
    )

    report = PropertyReport(commutative=commutative, tier=tier, checks=tuple(checks))
    logger.debug("Verified %d claims on %s (tier=%s, ok=%s)", len(checks), m.provenance, tier, report.ok)
    return report
