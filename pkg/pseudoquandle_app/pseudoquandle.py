from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass
from functools import reduce
from typing import Any, Hashable, Iterable, Sequence

import numpy as np

from pseudoquandle_app.config import Limits, resolve_limits
from pseudoquandle_app.documents import load_document
from pseudoquandle_app.errors import BadMap, BadParameter, ParseError, SizeLimit, TheoremViolation
from pseudoquandle_app.formulas import FAMILY_FORMULAS, FORMULA_VARIABLES, formula_table, validate_formula_expression
from pseudoquandle_app.group_core import (
    GroupTable,
    build_group,
    combine_tables,
    enumerate_normal_subgroups,
    mask_bits,
    members_mask,
)
from pseudoquandle_app.validators import validate_magma_document

logger = logging.getLogger(__name__)

QUANDLE = "quandle"
RACK = "rack"
PSEUDOQUANDLE = "pseudoquandle"
MAGMA_ONLY = "magma-only"


@dataclass(frozen=True, eq=False)
class FiniteMagma:
    """A closed binary operation on 0..n-1, with display labels and a provenance tag."""

    op: np.ndarray
    labels: tuple[str, ...]
    provenance: str

    @property
    def size(self) -> int:
        return int(self.op.shape[0])

    def product(self, a: int, b: int) -> int:
        return int(self.op[a, b])

    def is_commutative(self) -> bool:
        return bool((self.op == self.op.T).all())

    def to_document(self) -> dict[str, Any]:
        return {
            "size": self.size,
            "labels": list(self.labels),
            "op": self.op.tolist(),
            "provenance": self.provenance,
        }

    @classmethod
    def from_document(cls, document: dict, provenance: str | None = None) -> "FiniteMagma":
        # CLI reports carry the table under "magma".
        if isinstance(document, dict) and "op" not in document and isinstance(document.get("magma"), dict):
            document = document["magma"]
        errors = validate_magma_document(document)
        if errors:
            raise ParseError("; ".join(errors))
        return make_magma(
            document["op"],
            labels=document.get("labels"),
            provenance=provenance or str(document.get("provenance", "document")),
        )


@dataclass(frozen=True)
class AxiomCheck:
    holds: bool
    witness: tuple[int, ...] | None = None

    def as_dict(self) -> dict[str, Any]:
        witness = [index + 1 for index in self.witness] if self.witness is not None else None
        return {"holds": self.holds, "witness": witness}


@dataclass(frozen=True)
class AxiomReport:
    idempotent: AxiomCheck
    right_self_distributive: AxiomCheck
    left_self_distributive: AxiomCheck
    commutative: AxiomCheck
    right_translations_bijective: AxiomCheck
    # Every r with p = r*q for the bijectivity witness (p, q); empty means none exists.
    bijectivity_solutions: tuple[int, ...]
    classification: str

    def as_dict(self) -> dict[str, Any]:
        return {
            "idempotent": self.idempotent.as_dict(),
            "right_self_distributive": self.right_self_distributive.as_dict(),
            "left_self_distributive": self.left_self_distributive.as_dict(),
            "commutative": self.commutative.as_dict(),
            "right_translations_bijective": self.right_translations_bijective.as_dict(),
            "bijectivity_solutions": [index + 1 for index in self.bijectivity_solutions],
            "classification": self.classification,
        }


@dataclass(frozen=True)
class IsomorphismWitness:
    mapping: tuple[int, ...]
    verified: bool

    def inverse(self) -> "IsomorphismWitness":
        inverted = [0] * len(self.mapping)
        for source, target in enumerate(self.mapping):
            inverted[target] = source
        return IsomorphismWitness(mapping=tuple(inverted), verified=self.verified)

    def as_dict(self) -> dict[str, Any]:
        return {"mapping": [index + 1 for index in self.mapping], "verified": self.verified}


def make_magma(
    op: Any,
    labels: Iterable[str] | None = None,
    provenance: str = "table",
    limits: Limits | None = None,
) -> FiniteMagma:
    limits = resolve_limits(limits)
    table = np.array(op, dtype=np.int64)
    if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
        raise ParseError("Operation table must be a non-empty square table.")
    size = int(table.shape[0])
    if size > limits.max_magma_size:
        raise SizeLimit(f"Magma size {size} exceeds the cap of {limits.max_magma_size}.")
    if ((table < 0) | (table >= size)).any():
        raise ParseError(f"Operation table is not closed on 0..{size - 1}.")
    label_tuple = tuple(str(label) for label in labels) if labels is not None else tuple(str(i + 1) for i in range(size))
    if len(label_tuple) != size:
        raise ParseError(f"Expected {size} labels, got {len(label_tuple)}.")
    table.setflags(write=False)
    return FiniteMagma(op=table, labels=label_tuple, provenance=provenance)


def kernel_matrix(m: FiniteMagma) -> np.ndarray:
    """``K[p, q]`` is true iff p*q = q*p = p."""
    grid = np.arange(m.size)[:, None]
    return (m.op == grid) & (m.op.T == grid)


def _first(mismatch: np.ndarray) -> tuple[int, ...] | None:
    found = np.argwhere(mismatch)
    if not found.size:
        return None
    return tuple(int(value) for value in found[0])


def _check_idempotent(op: np.ndarray) -> AxiomCheck:
    witness = _first(np.diagonal(op) != np.arange(op.shape[0]))
    return AxiomCheck(witness is None, witness)


def _check_commutative(op: np.ndarray) -> AxiomCheck:
    witness = _first(op != op.T)
    return AxiomCheck(witness is None, witness)


def _check_right_distributive(op: np.ndarray) -> AxiomCheck:
    """(p*q)*r = (p*r)*(q*r) for every triple."""
    for p in range(op.shape[0]):
        left = op[op[p]]
        right = op[op[p][None, :], op]
        witness = _first(left != right)
        if witness is not None:
            return AxiomCheck(False, (p,) + witness)
    return AxiomCheck(True)


def _check_left_distributive(op: np.ndarray) -> AxiomCheck:
    """p*(q*r) = (p*q)*(p*r) for every triple."""
    for p in range(op.shape[0]):
        row = op[p]
        left = row[op]
        right = op[row[:, None], row[None, :]]
        witness = _first(left != right)
        if witness is not None:
            return AxiomCheck(False, (p,) + witness)
    return AxiomCheck(True)


def translation_counts(op: np.ndarray) -> np.ndarray:
    """``counts[p, q]`` is the number of r with r*q = p."""
    size = op.shape[0]
    counts = np.zeros((size, size), dtype=np.int64)
    np.add.at(counts, (op, np.broadcast_to(np.arange(size), op.shape)), 1)
    return counts


def right_translation(m: FiniteMagma, q: int) -> tuple[int, ...]:
    return tuple(int(value) for value in m.op[:, q])


def translation_solutions(m: FiniteMagma, p: int, q: int) -> tuple[int, ...]:
    """Every r with p = r*q."""
    return tuple(int(r) for r in np.flatnonzero(m.op[:, q] == p))


def _check_bijective(op: np.ndarray) -> tuple[AxiomCheck, tuple[int, ...]]:
    failures = np.argwhere(translation_counts(op) != 1)
    if not failures.size:
        return AxiomCheck(True), ()
    chosen = failures[0]
    for p, q in failures:
        if op[p, q] != p and op[p, q] != q:
            chosen = (p, q)
            break
    p, q = int(chosen[0]), int(chosen[1])
    solutions = tuple(int(r) for r in np.flatnonzero(op[:, q] == p))
    return AxiomCheck(False, (p, q)), solutions


def classify(idempotent: bool, right_distributive: bool, bijective: bool) -> str:
    if right_distributive and bijective:
        return QUANDLE if idempotent else RACK
    if right_distributive and idempotent:
        return PSEUDOQUANDLE
    return MAGMA_ONLY


def check_axioms(m: FiniteMagma) -> AxiomReport:
    idempotent = _check_idempotent(m.op)
    right = _check_right_distributive(m.op)
    left = _check_left_distributive(m.op)
    commutative = _check_commutative(m.op)
    bijective, solutions = _check_bijective(m.op)
    return AxiomReport(
        idempotent=idempotent,
        right_self_distributive=right,
        left_self_distributive=left,
        commutative=commutative,
        right_translations_bijective=bijective,
        bijectivity_solutions=solutions,
        classification=classify(idempotent.holds, right.holds, bijective.holds),
    )


def build_pg(g: GroupTable, limits: Limits | None = None) -> FiniteMagma:
    """Normal subgroups of ``g`` in canonical order under setwise product."""
    limits = resolve_limits(limits)
    subgroups = enumerate_normal_subgroups(g, limits)
    size = len(subgroups)
    if size > limits.max_magma_size:
        raise SizeLimit(f"P_G of {g.spec} has {size} elements, above the cap of {limits.max_magma_size}.")

    position = {subgroup.bits: index for index, subgroup in enumerate(subgroups)}
    members = [np.array(subgroup.members, dtype=np.int64) for subgroup in subgroups]
    op = np.empty((size, size), dtype=np.int64)
    for i in range(size):
        for j in range(i, size):
            products = g.cayley[np.ix_(members[i], members[j])].ravel()
            key = mask_bits(members_mask(g, products))
            if key not in position:
                raise TheoremViolation(f"Product of normal subgroups {i} and {j} of {g.spec} is not normal.")
            op[i, j] = op[j, i] = position[key]

    labels = [g.describe(subgroup.members) for subgroup in subgroups]
    return make_magma(op, labels=labels, provenance=f"P_G of {g.spec}", limits=limits)


def require_magma_size(size: int, limits: Limits | None = None) -> None:
    """Raise SizeLimit before a table of ``size`` rows is allocated."""
    limits = resolve_limits(limits)
    if size > limits.max_magma_size:
        raise SizeLimit(f"Magma size {size} exceeds the cap of {limits.max_magma_size}.")


def max_chain(k: int, limits: Limits | None = None) -> FiniteMagma:
    require_magma_size(k, limits)
    grid = np.arange(k)
    return make_magma(np.maximum.outer(grid, grid), provenance=f"[{k}]", limits=limits)


def min_chain(k: int, limits: Limits | None = None) -> FiniteMagma:
    require_magma_size(k, limits)
    grid = np.arange(k)
    return make_magma(np.minimum.outer(grid, grid), provenance=f"[{k}]min", limits=limits)


def trivial_magma(limits: Limits | None = None) -> FiniteMagma:
    return make_magma([[0]], provenance="[1]", limits=limits)


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise BadParameter(message)


def _check_family_size(size: int, limits: Limits) -> None:
    if size > limits.max_magma_size:
        raise SizeLimit(f"Family carrier of size {size} exceeds the cap of {limits.max_magma_size}.")


def _modular_labels(n: int) -> list[str]:
    return [str(i) for i in range(n)]


def _formula_family(kind: str, n: int, limits: Limits, **extra: int) -> FiniteMagma:
    _check_family_size(n, limits)
    spec = FAMILY_FORMULAS[kind]
    table = formula_table(spec["expression"], n, extra=extra)
    suffix = ":".join(str(value) for value in (n, *extra.values()))
    return make_magma(table, labels=_modular_labels(n), provenance=f"{kind}:{suffix}", limits=limits)


def _symplectic(n: int, limits: Limits) -> FiniteMagma:
    _check_family_size(n * n, limits)
    carrier = np.arange(n * n)
    first, second = carrier // n, carrier % n
    form = first[:, None] * second[None, :] - second[:, None] * first[None, :]
    image_first = (first[:, None] + form * first[None, :]) % n
    image_second = (second[:, None] + form * second[None, :]) % n
    labels = [f"({x},{y})" for x, y in zip(first.tolist(), second.tolist())]
    return make_magma(image_first * n + image_second, labels=labels, provenance=f"symplectic:{n}", limits=limits)


def _power_table(g: GroupTable, exponent: int) -> np.ndarray:
    powers = np.full(g.order, g.identity, dtype=np.int64)
    base = np.arange(g.order) if exponent >= 0 else g.inverses.copy()
    for _ in range(abs(exponent)):
        powers = g.cayley[powers, base]
    return powers


def _conjugation(g: GroupTable, exponent: int, limits: Limits) -> FiniteMagma:
    _check_family_size(g.order, limits)
    powers = _power_table(g, exponent)
    inverse_powers = g.inverses[powers]
    grid = np.arange(g.order)
    # g*h = h^{-n} g h^{n}
    op = g.cayley[g.cayley[inverse_powers[None, :], grid[:, None]], powers[None, :]]
    return make_magma(op, labels=g.labels, provenance=f"conj:{g.spec}:{exponent}", limits=limits)


def build_example(kind: str, *params: Any, limits: Limits | None = None) -> FiniteMagma:
    """Quandle families: trivial(n), dihedral(n), alexander(n, t), symplectic(n), conj(group, exponent)."""
    limits = resolve_limits(limits)
    if kind in ("trivial", "dihedral"):
        (n,) = params
        _require(n >= 1, f"{kind} needs n >= 1, got {n}.")
        return _formula_family(kind, n, limits)
    if kind == "alexander":
        n, t = params
        _require(n >= 1, f"alexander needs n >= 1, got {n}.")
        _require(math.gcd(t, n) == 1, f"t={t} is not a unit modulo {n}.")
        return _formula_family(kind, n, limits, t=t)
    if kind == "symplectic":
        (n,) = params
        _require(n >= 1 and n % 2 == 1, f"symplectic needs an odd modulus (characteristic not 2), got {n}.")
        return _symplectic(n, limits)
    if kind == "conj":
        group, exponent = params if len(params) == 2 else (params[0], 1)
        return _conjugation(group, int(exponent), limits)
    if kind == "formula":
        n, expression = params
        _require(n >= 1, f"formula needs n >= 1, got {n}.")
        errors = validate_formula_expression(expression, FORMULA_VARIABLES)
        _require(not errors, "; ".join(errors))
        _check_family_size(n, limits)
        try:
            with np.errstate(divide="raise", invalid="raise"):
                table = formula_table(expression, n)
        except (ArithmeticError, ValueError) as exc:
            raise BadParameter(f"Formula '{expression}' cannot be evaluated on Z/{n}: {exc}") from exc
        return make_magma(table, labels=_modular_labels(n), provenance=f"formula:{n}:{expression}", limits=limits)
    raise ParseError(f"Unknown family '{kind}'.")


def _parse_int(text: str, what: str) -> int:
    try:
        return int(text.strip())
    except ValueError as exc:
        raise ParseError(f"{what} must be an integer, got '{text}'.") from exc


def build_source(text: str, limits: Limits | None = None) -> FiniteMagma:
    """Resolve ``trivial:3``, ``pg:Q8``, ``conj:S3:1``, ``file:m.json`` and friends into a magma."""
    limits = resolve_limits(limits)
    kind, separator, rest = str(text).strip().partition(":")
    if not separator or not rest:
        raise ParseError(f"Source '{text}' must look like <family>:<parameters>.")

    if kind in ("trivial", "dihedral", "symplectic"):
        return build_example(kind, _parse_int(rest, "modulus"), limits=limits)
    if kind == "alexander":
        parts = rest.split(":")
        if len(parts) != 2:
            raise ParseError("alexander source must be alexander:<n>:<t>.")
        return build_example(kind, _parse_int(parts[0], "modulus"), _parse_int(parts[1], "t"), limits=limits)
    if kind == "conj":
        group_spec, exponent = rest, 1
        head, _, tail = rest.rpartition(":")
        if head and tail.lstrip("-").isdigit():
            group_spec, exponent = head, int(tail)
        return build_example(kind, build_group(group_spec, limits), exponent, limits=limits)
    if kind == "pg":
        return build_pg(build_group(rest, limits), limits)
    if kind == "formula":
        modulus, _, expression = rest.partition(":")
        if not expression:
            raise ParseError("formula source must be formula:<n>:<expression>.")
        return build_example(kind, _parse_int(modulus, "modulus"), expression, limits=limits)
    if kind == "file":
        return FiniteMagma.from_document(load_document(rest, kind="magma"), provenance=text)
    raise ParseError(f"Unknown source family '{kind}'.")


def _sum_labels(magmas: Sequence[FiniteMagma]) -> list[str]:
    combos: list[tuple[str, ...]] = [()]
    for magma in magmas:
        combos = [combo + (label,) for combo in combos for label in magma.labels]
    return ["(" + ",".join(combo) + ")" for combo in combos]


def direct_sum_all(magmas: Sequence[FiniteMagma], limits: Limits | None = None) -> FiniteMagma:
    limits = resolve_limits(limits)
    if not magmas:
        return trivial_magma(limits)
    if len(magmas) == 1:
        return magmas[0]
    size = math.prod(magma.size for magma in magmas)
    if size > limits.max_magma_size:
        raise SizeLimit(f"Direct sum of size {size} exceeds the cap of {limits.max_magma_size}.")
    op = reduce(combine_tables, [magma.op for magma in magmas])
    provenance = "⊕".join(magma.provenance for magma in magmas)
    return make_magma(op, labels=_sum_labels(magmas), provenance=provenance, limits=limits)


def direct_sum(a: FiniteMagma, b: FiniteMagma, limits: Limits | None = None) -> FiniteMagma:
    return direct_sum_all([a, b], limits)


def check_homomorphism(
    a: FiniteMagma, b: FiniteMagma, f: Sequence[int]
) -> tuple[bool, tuple[int, int] | None]:
    """True iff f(x*y) = f(x)*f(y) for all pairs; otherwise the first failing pair."""
    images = np.asarray(list(f), dtype=np.int64)
    if images.shape != (a.size,):
        raise BadMap(f"Map must assign an image to each of the {a.size} elements.")
    if ((images < 0) | (images >= b.size)).any():
        raise BadMap(f"Map images must lie in 0..{b.size - 1}.")
    witness = _first(images[a.op] != b.op[images[:, None], images[None, :]])
    if witness is None:
        return True, None
    return False, (witness[0], witness[1])


def element_invariants(m: FiniteMagma) -> list[Hashable]:
    """Per-element keys preserved by every isomorphism."""
    kernels = kernel_matrix(m)
    occurrences = np.bincount(m.op.ravel(), minlength=m.size)
    keys: list[Hashable] = []
    for x in range(m.size):
        keys.append(
            (
                int(m.op[x, x]) == x,
                int(kernels[x].sum()),
                int(occurrences[x]),
                tuple(sorted(Counter(m.op[x].tolist()).values())),
                tuple(sorted(Counter(m.op[:, x].tolist()).values())),
            )
        )
    return keys


class _IsomorphismSearch:
    def __init__(self, a: FiniteMagma, b: FiniteMagma, prune: bool) -> None:
        self.source = a
        self.target = b
        self.a = a.op.tolist()
        self.b = b.op.tolist()
        self.size = a.size
        self.prune = prune
        if prune:
            self.keys_a = element_invariants(a)
            self.keys_b = element_invariants(b)
        else:
            self.keys_a = [0] * self.size
            self.keys_b = [0] * self.size
        # producers[c] lists every pair (u, v) with u*v = c.
        self.producers: list[list[tuple[int, int]]] = [[] for _ in range(self.size)]
        for u, row in enumerate(self.a):
            for v, c in enumerate(row):
                self.producers[c].append((u, v))
        self.mapping: list[int | None] = [None] * self.size
        self.used: list[int | None] = [None] * self.size
        self.nodes = 0

    def invariants_match(self) -> bool:
        return sorted(map(repr, self.keys_a)) == sorted(map(repr, self.keys_b))

    def order(self) -> list[int]:
        if not self.prune:
            return list(range(self.size))
        class_sizes = Counter(self.keys_a)
        return sorted(range(self.size), key=lambda x: (class_sizes[self.keys_a[x]], x))

    def _pair_ok(self, c: int, d: int) -> bool:
        image = self.mapping[c]
        if image is not None:
            return image == d
        if self.used[d] is not None:
            return False
        return self.keys_a[c] == self.keys_b[d]

    def consistent(self, x: int, y: int, assigned: list[int]) -> bool:
        a, b, mapping = self.a, self.b, self.mapping
        for other in assigned:
            image = mapping[other]
            if not self._pair_ok(a[x][other], b[y][image]):
                return False
            if not self._pair_ok(a[other][x], b[image][y]):
                return False
        # Products that land on x were only checked against free targets before x had an image.
        for u, v in self.producers[x]:
            image_u, image_v = mapping[u], mapping[v]
            if image_u is not None and image_v is not None and b[image_u][image_v] != y:
                return False
        return True

    def run(self) -> list[int] | None:
        order = self.order()
        assigned: list[int] = []

        def extend(depth: int) -> bool:
            if depth == self.size:
                homomorphic, _ = check_homomorphism(self.source, self.target, self.mapping)  # type: ignore[arg-type]
                return homomorphic
            x = order[depth]
            for y in range(self.size):
                if self.used[y] is not None or self.keys_a[x] != self.keys_b[y]:
                    continue
                self.nodes += 1
                self.mapping[x] = y
                self.used[y] = x
                assigned.append(x)
                if self.consistent(x, y, assigned) and extend(depth + 1):
                    return True
                assigned.pop()
                self.mapping[x] = None
                self.used[y] = None
            return False

        if extend(0):
            return [int(value) for value in self.mapping]  # type: ignore[arg-type]
        return None


def find_isomorphism(
    a: FiniteMagma,
    b: FiniteMagma,
    prune: bool = True,
    limits: Limits | None = None,
) -> IsomorphismWitness | None:
    """Exact backtracking search; invariant keys only prune candidates that no isomorphism could use.

    A returned witness is always a verified bijective homomorphism.
    """
    limits = resolve_limits(limits)
    if a.size != b.size:
        return None
    if a.size > limits.max_iso_size:
        raise SizeLimit(f"Isomorphism search on {a.size} elements exceeds the cap of {limits.max_iso_size}.")

    search = _IsomorphismSearch(a, b, prune)
    if prune and not search.invariants_match():
        logger.debug("Invariants differ between %s and %s", a.provenance, b.provenance)
        return None
    mapping = search.run()
    logger.debug("Isomorphism search %s -> %s visited %d nodes", a.provenance, b.provenance, search.nodes)
    if mapping is None or len(set(mapping)) != a.size:
        return None
    return IsomorphismWitness(mapping=tuple(mapping), verified=True)
