from __future__ import annotations

import logging
import re
from collections import deque
from dataclasses import dataclass
from functools import reduce
from typing import Any, Iterable

import numpy as np
from sympy.combinatorics import Permutation
from sympy.utilities.iterables import multiset_permutations

from pseudoquandle_app.config import Limits, resolve_limits
from pseudoquandle_app.documents import load_document
from pseudoquandle_app.errors import NotAGroup, NotNormal, ParseError, SizeLimit
from pseudoquandle_app.validators import validate_table_document

logger = logging.getLogger(__name__)

MAX_PERMUTATION_DEGREE = 5

_TOKEN_PATTERNS = (
    ("cyclic", re.compile(r"^Z(\d+)$")),
    ("dihedral", re.compile(r"^D(\d+)$")),
    ("quaternion", re.compile(r"^Q8$")),
    ("symmetric", re.compile(r"^S(\d+)$")),
    ("alternating", re.compile(r"^A(\d+)$")),
)

_QUATERNION_LABELS = ("1", "-1", "i", "-i", "j", "-j", "k", "-k")
# Unit products in the order 1, i, j, k as (sign, unit).
_QUATERNION_UNITS = (
    ((1, 0), (1, 1), (1, 2), (1, 3)),
    ((1, 1), (-1, 0), (1, 3), (-1, 2)),
    ((1, 2), (-1, 3), (-1, 0), (1, 1)),
    ((1, 3), (1, 2), (-1, 1), (-1, 0)),
)


@dataclass(frozen=True, eq=False)
class GroupTable:
    """A finite group as a validated Cayley table on element indices 0..n-1."""

    cayley: np.ndarray
    identity: int
    labels: tuple[str, ...]
    spec: str
    inverses: np.ndarray
    conjugation: np.ndarray

    @property
    def order(self) -> int:
        return int(self.cayley.shape[0])

    def multiply(self, a: int, b: int) -> int:
        return int(self.cayley[a, b])

    def inverse(self, a: int) -> int:
        return int(self.inverses[a])

    def is_abelian(self) -> bool:
        return bool((self.cayley == self.cayley.T).all())

    def describe(self, members: Iterable[int]) -> str:
        return "{" + ",".join(self.labels[index] for index in members) + "}"


@dataclass(frozen=True)
class Subgroup:
    members: tuple[int, ...]
    is_normal: bool

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def bits(self) -> int:
        return sum(1 << index for index in self.members)

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        return (self.size, self.members)

    def __contains__(self, element: object) -> bool:
        return element in self.members


@dataclass(frozen=True)
class ConjugacyPartition:
    blocks: tuple[tuple[int, ...], ...]

    def block_of(self, element: int) -> tuple[int, ...]:
        for block in self.blocks:
            if element in block:
                return block
        raise KeyError(element)


def _freeze(array: np.ndarray) -> np.ndarray:
    frozen = np.ascontiguousarray(array, dtype=np.int64)
    frozen.setflags(write=False)
    return frozen


def _find_identity(table: np.ndarray) -> int | None:
    grid = np.arange(table.shape[0])
    for candidate in range(table.shape[0]):
        if (table[candidate] == grid).all() and (table[:, candidate] == grid).all():
            return candidate
    return None


def _check_associative(table: np.ndarray) -> tuple[int, int, int] | None:
    """Return the lexicographically first triple with (ab)c != a(bc), if any."""
    for a in range(table.shape[0]):
        left = table[table[a]]
        right = table[a][table]
        mismatch = np.argwhere(left != right)
        if mismatch.size:
            b, c = (int(value) for value in mismatch[0])
            return a, b, c
    return None


def validate_cayley_table(
    table: Any,
    labels: Iterable[str] | None = None,
    spec: str = "table",
    limits: Limits | None = None,
) -> GroupTable:
    limits = resolve_limits(limits)
    array = np.asarray(table, dtype=np.int64)
    if array.ndim != 2 or array.shape[0] != array.shape[1] or array.shape[0] == 0:
        raise NotAGroup("Cayley table must be a non-empty square table.")

    order = int(array.shape[0])
    if order > limits.max_order:
        raise SizeLimit(f"Group order {order} exceeds the cap of {limits.max_order}.")

    outside = np.argwhere((array < 0) | (array >= order))
    if outside.size:
        x, y = (int(value) for value in outside[0])
        raise NotAGroup(f"Closure fails: {x}*{y} = {int(array[x, y])} is outside 0..{order - 1}.", (x, y))

    identity = _find_identity(array)
    if identity is None:
        raise NotAGroup("No two-sided identity element.")

    triple = _check_associative(array)
    if triple is not None:
        a, b, c = triple
        raise NotAGroup(f"Associativity fails for ({a}, {b}, {c}).", triple)

    is_identity = array == identity
    inverses = np.empty(order, dtype=np.int64)
    for element in range(order):
        candidates = np.flatnonzero(is_identity[element] & is_identity[:, element])
        if candidates.size == 0:
            raise NotAGroup(f"Element {element} has no two-sided inverse.", (element,))
        inverses[element] = candidates[0]

    label_tuple = tuple(str(label) for label in labels) if labels is not None else tuple(str(i) for i in range(order))
    if len(label_tuple) != order:
        raise NotAGroup(f"Expected {order} labels, got {len(label_tuple)}.")

    conjugation = array[array, inverses[:, None]]
    logger.debug("Validated group %s of order %d", spec, order)
    return GroupTable(
        cayley=_freeze(array),
        identity=identity,
        labels=label_tuple,
        spec=spec,
        inverses=_freeze(inverses),
        conjugation=_freeze(conjugation),
    )


def cyclic_table(n: int) -> tuple[np.ndarray, list[str]]:
    grid = np.arange(n)
    return np.add.outer(grid, grid) % n, [str(i) for i in range(n)]


def dihedral_table(order: int) -> tuple[np.ndarray, list[str]]:
    """Dihedral group of the given (even) order: r^k at index k, s r^k at index n + k."""
    n = order // 2
    elements = [(flip, k) for flip in (0, 1) for k in range(n)]
    table = np.empty((order, order), dtype=np.int64)
    for x, (f1, k1) in enumerate(elements):
        for y, (f2, k2) in enumerate(elements):
            k = ((-k1 if f2 else k1) + k2) % n
            table[x, y] = (f1 ^ f2) * n + k

    def label(flip: int, k: int) -> str:
        rotation = "" if k == 0 else ("r" if k == 1 else f"r^{k}")
        if flip:
            return f"s{rotation}"
        return rotation or "e"

    return table, [label(flip, k) for flip, k in elements]


def quaternion_table() -> tuple[np.ndarray, list[str]]:
    table = np.empty((8, 8), dtype=np.int64)
    for x in range(8):
        ux, sx = divmod(x, 2)
        for y in range(8):
            uy, sy = divmod(y, 2)
            sign, unit = _QUATERNION_UNITS[ux][uy]
            if (sx + sy) % 2:
                sign = -sign
            table[x, y] = 2 * unit + (0 if sign > 0 else 1)
    return table, list(_QUATERNION_LABELS)


def _cycle_label(permutation: Permutation) -> str:
    cycles = permutation.cyclic_form
    if not cycles:
        return "e"
    return "".join("(" + " ".join(str(point + 1) for point in cycle) + ")" for cycle in cycles)


def permutation_table(degree: int, even_only: bool = False) -> tuple[np.ndarray, list[str]]:
    """Symmetric (or alternating) group on ``degree`` points; identity is index 0."""
    elements = [Permutation(list(images)) for images in multiset_permutations(list(range(degree)))]
    if even_only:
        elements = [element for element in elements if element.is_even]
    index = {tuple(element.array_form): position for position, element in enumerate(elements)}
    images = np.array([element.array_form for element in elements], dtype=np.int64).reshape(len(elements), degree)
    # x*y applies x first, then y (sympy's convention for Permutation.__mul__).
    composed = images[np.arange(len(elements))[None, :, None], images[:, None, :]]
    table = np.array(
        [[index[tuple(row)] for row in block] for block in composed.tolist()],
        dtype=np.int64,
    )
    return table, [_cycle_label(element) for element in elements]


def combine_tables(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Componentwise product table; element (i, j) has index i * |right| + j."""
    size_right = right.shape[0]
    combined = left[:, None, :, None] * size_right + right[None, :, None, :]
    size = left.shape[0] * size_right
    return combined.reshape(size, size)


def _product_labels(factor_labels: list[list[str]]) -> list[str]:
    combos: list[tuple[str, ...]] = [()]
    for labels in factor_labels:
        combos = [combo + (label,) for combo in combos for label in labels]
    return ["(" + ",".join(combo) + ")" for combo in combos]


def _token_table(token: str) -> tuple[np.ndarray, list[str]]:
    for kind, pattern in _TOKEN_PATTERNS:
        match = pattern.match(token)
        if not match:
            continue
        if kind == "quaternion":
            return quaternion_table()
        value = int(match.group(1))
        if kind == "cyclic":
            if value < 1:
                raise ParseError("Cyclic order must be at least 1.")
            return cyclic_table(value)
        if kind == "dihedral":
            if value < 2 or value % 2:
                raise ParseError(f"Dihedral spec D{value} needs an even order of at least 2.")
            return dihedral_table(value)
        if not 1 <= value <= MAX_PERMUTATION_DEGREE:
            raise ParseError(f"Permutation degree must be in 1..{MAX_PERMUTATION_DEGREE}, got {value}.")
        return permutation_table(value, even_only=kind == "alternating")
    raise ParseError(f"Unrecognized group token '{token}'.")


def _estimated_order(token: str) -> int | None:
    match = re.match(r"^[ZD](\d+)$", token)
    return int(match.group(1)) if match else None


def build_group(spec: str | dict, limits: Limits | None = None) -> GroupTable:
    """Build a validated group from a mini-language spec string or a table document."""
    limits = resolve_limits(limits)
    if isinstance(spec, dict):
        return _group_from_document(spec, "document", limits)

    text = str(spec).strip()
    if not text:
        raise ParseError("Empty group spec.")
    if text.startswith("file:"):
        path = text[len("file:"):]
        return _group_from_document(load_document(path, kind="group"), text, limits)

    tokens = [token.strip() for token in text.split("x")]
    if any(not token for token in tokens):
        raise ParseError(f"Malformed product spec '{text}'.")

    estimate = 1
    for token in tokens:
        estimate *= _estimated_order(token) or 1
    if estimate > limits.max_order:
        raise SizeLimit(f"Group order {estimate} exceeds the cap of {limits.max_order}.")

    factors = [_token_table(token) for token in tokens]
    if len(factors) == 1:
        table, labels = factors[0]
    else:
        order = int(np.prod([table.shape[0] for table, _ in factors]))
        if order > limits.max_order:
            raise SizeLimit(f"Group order {order} exceeds the cap of {limits.max_order}.")
        table = reduce(combine_tables, [table for table, _ in factors])
        labels = _product_labels([labels for _, labels in factors])
    return validate_cayley_table(table, labels, spec=text, limits=limits)


def _group_from_document(document: dict, spec: str, limits: Limits) -> GroupTable:
    errors = validate_table_document(document)
    if errors:
        raise ParseError("; ".join(errors))
    return validate_cayley_table(document["table"], document.get("labels"), spec=spec, limits=limits)


def direct_product(groups: list[GroupTable], limits: Limits | None = None) -> GroupTable:
    if not groups:
        raise ParseError("Direct product needs at least one factor.")
    table = reduce(combine_tables, [group.cayley for group in groups])
    labels = _product_labels([list(group.labels) for group in groups])
    spec = "x".join(group.spec for group in groups)
    return validate_cayley_table(table, labels, spec=spec, limits=limits)


def conjugacy_classes(g: GroupTable) -> ConjugacyPartition:
    seen = np.zeros(g.order, dtype=bool)
    blocks: list[tuple[int, ...]] = []
    for element in range(g.order):
        if seen[element]:
            continue
        block = np.unique(g.conjugation[:, element])
        seen[block] = True
        blocks.append(tuple(int(value) for value in block))
    return ConjugacyPartition(blocks=tuple(blocks))


def mask_bits(mask: np.ndarray) -> int:
    return int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little")


def members_mask(g: GroupTable, members: Iterable[int]) -> np.ndarray:
    mask = np.zeros(g.order, dtype=bool)
    mask[list(members)] = True
    return mask


def subgroup_closure(g: GroupTable, mask: np.ndarray) -> np.ndarray:
    """Smallest subset containing ``mask`` and closed under products (a subgroup, as g is finite)."""
    closed = mask.copy()
    closed[g.identity] = True
    while True:
        indices = np.flatnonzero(closed)
        grown = closed.copy()
        grown[g.cayley[np.ix_(indices, indices)].ravel()] = True
        if grown.sum() == closed.sum():
            return closed
        closed = grown


def is_normal_members(g: GroupTable, members: Iterable[int]) -> bool:
    indices = list(members)
    mask = members_mask(g, indices)
    return bool(mask[g.conjugation[:, indices]].all())


def _as_subgroup(g: GroupTable, mask: np.ndarray, is_normal: bool | None = None) -> Subgroup:
    members = tuple(int(index) for index in np.flatnonzero(mask))
    normal = is_normal_members(g, members) if is_normal is None else is_normal
    return Subgroup(members=members, is_normal=normal)


def _close_lattice(
    g: GroupTable,
    generator_masks: list[np.ndarray],
    cap: int,
    what: str,
) -> list[np.ndarray]:
    """Every subgroup generated by a union of the given generator sets, by breadth-first joins."""
    trivial = members_mask(g, [g.identity])
    found: dict[int, np.ndarray] = {mask_bits(trivial): trivial}
    tried: set[int] = set()
    queue = deque([trivial])
    while queue:
        current = queue.popleft()
        for generators in generator_masks:
            if not (generators & ~current).any():
                continue
            candidate = current | generators
            candidate_key = mask_bits(candidate)
            if candidate_key in tried:
                continue
            tried.add(candidate_key)
            joined = subgroup_closure(g, candidate)
            key = mask_bits(joined)
            if key in found:
                continue
            found[key] = joined
            if len(found) > cap:
                raise SizeLimit(f"More than {cap} {what} in {g.spec}.")
            queue.append(joined)
    return list(found.values())


def enumerate_normal_subgroups(g: GroupTable, limits: Limits | None = None) -> list[Subgroup]:
    """All normal subgroups, ordered by size then member list (trivial first, G last)."""
    limits = resolve_limits(limits)
    class_masks = [members_mask(g, block) for block in conjugacy_classes(g).blocks]
    masks = _close_lattice(g, class_masks, limits.max_subgroups, "normal subgroups")
    subgroups = sorted((_as_subgroup(g, mask) for mask in masks), key=Subgroup.sort_key)
    logger.debug("%s has %d normal subgroups", g.spec, len(subgroups))
    return subgroups


def enumerate_subgroups(g: GroupTable, limits: Limits | None = None) -> list[Subgroup]:
    """All subgroups by joins of cyclic subgroups; normality by the direct conjugation test."""
    limits = resolve_limits(limits)
    cyclic_masks: dict[int, np.ndarray] = {}
    for element in range(g.order):
        mask = subgroup_closure(g, members_mask(g, [element]))
        cyclic_masks.setdefault(mask_bits(mask), mask)
    masks = _close_lattice(g, list(cyclic_masks.values()), limits.max_subgroups, "subgroups")
    return sorted((_as_subgroup(g, mask) for mask in masks), key=Subgroup.sort_key)


def subgroup_product(g: GroupTable, h: Subgroup, k: Subgroup) -> Subgroup:
    for name, subgroup in (("first", h), ("second", k)):
        if not is_normal_members(g, subgroup.members):
            raise NotNormal(f"The {name} factor {g.describe(subgroup.members)} is not normal in {g.spec}.")
    products = g.cayley[np.ix_(list(h.members), list(k.members))]
    return _as_subgroup(g, members_mask(g, products.ravel()), is_normal=True)
