"""Normal forms L for abelian groups and their verification against computed P_G."""

from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass
from typing import Any, Iterator, Union

import numpy as np
from sympy import divisors, factorint, isprime

from pseudoquandle_app.config import Limits, default_gcd_bound, resolve_limits
from pseudoquandle_app.errors import BadParameter, NotAbelian, ParseError, TheoremViolation
from pseudoquandle_app.group_core import build_group
from pseudoquandle_app.pseudoquandle import (
    FiniteMagma,
    IsomorphismWitness,
    build_pg,
    check_homomorphism,
    direct_sum_all,
    find_isomorphism,
    make_magma,
    max_chain,
    require_magma_size,
)

logger = logging.getLogger(__name__)

_CYCLIC_TOKEN = re.compile(r"^Z(\d+)$")
_FREE_TOKEN = "Z"


@dataclass(frozen=True)
class AbelianSpec:
    free_rank: int
    prime_powers: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.free_rank < 0:
            raise BadParameter("free_rank must be non-negative.")
        for p, m in self.prime_powers:
            if not isprime(p) or m < 1:
                raise BadParameter(f"({p}, {m}) is not a prime power factor.")
        if list(self.prime_powers) != sorted(self.prime_powers):
            raise BadParameter("Prime powers must be listed ascending by prime, then exponent.")

    @property
    def finite_order(self) -> int:
        order = 1
        for p, m in self.prime_powers:
            order *= p**m
        return order

    def finite_spec(self) -> str:
        if not self.prime_powers:
            return "Z1"
        return "x".join(f"Z{p ** m}" for p, m in self.prime_powers)

    def as_dict(self) -> dict[str, Any]:
        return {"free_rank": self.free_rank, "prime_powers": [list(pair) for pair in self.prime_powers]}


@dataclass(frozen=True)
class MaxChain:
    size: int

    @property
    def name(self) -> str:
        return f"[{self.size}]"

    def realize(self, limits: Limits | None = None) -> FiniteMagma:
        return max_chain(self.size, limits)

    def as_dict(self) -> dict[str, Any]:
        return {"kind": "max", "size": self.size}


@dataclass(frozen=True)
class GcdSegment:
    bound: int

    @property
    def name(self) -> str:
        return f"Z+[1..{self.bound}]"

    def realize(self, limits: Limits | None = None) -> FiniteMagma:
        require_magma_size(self.bound, limits)
        values = np.arange(1, self.bound + 1)
        # gcd(a, b) <= min(a, b), so the segment is closed.
        op = np.gcd.outer(values, values) - 1
        return make_magma(op, labels=[str(value) for value in values], provenance=self.name, limits=limits)

    def as_dict(self) -> dict[str, Any]:
        return {"kind": "gcd", "bound": self.bound}


Factor = Union[MaxChain, GcdSegment]


def _factor_size(factor: Factor) -> int:
    return factor.size if isinstance(factor, MaxChain) else factor.bound


@dataclass(frozen=True)
class LStructure:
    factors: tuple[Factor, ...]
    realized: FiniteMagma

    @property
    def name(self) -> str:
        if not self.factors:
            return "[1]"
        return "⊕".join(factor.name for factor in self.factors)

    def as_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "factors": [factor.as_dict() for factor in self.factors],
            "op": self.realized.op.tolist(),
        }


@dataclass(frozen=True)
class AbelianClassification:
    group_spec: str
    spec: AbelianSpec
    structure: LStructure
    computed: FiniteMagma
    witness: IsomorphismWitness

    def as_dict(self) -> dict[str, Any]:
        return {
            "group": self.group_spec,
            "decomposition": self.spec.as_dict(),
            "structure": self.structure.as_dict(),
            "computed_size": self.computed.size,
            "witness": self.witness.as_dict(),
        }


def _abelian_tokens(g_spec: str) -> list[str]:
    text = str(g_spec).strip()
    if not text:
        raise ParseError("Empty abelian spec.")
    if text.startswith("file:"):
        raise ParseError("Abelian specs are products of Z<n> and Z factors, not documents.")
    tokens = [token.strip() for token in text.split("x")]
    for token in tokens:
        if token == _FREE_TOKEN or _CYCLIC_TOKEN.match(token):
            continue
        if re.match(r"^(D\d+|Q8|S\d+|A\d+)$", token):
            raise NotAbelian(f"'{token}' is not a cyclic factor.")
        raise ParseError(f"Unrecognized abelian factor '{token}'.")
    return tokens


def primary_decomposition(g_spec: str) -> AbelianSpec:
    free_rank = 0
    prime_powers: list[tuple[int, int]] = []
    for token in _abelian_tokens(g_spec):
        if token == _FREE_TOKEN:
            free_rank += 1
            continue
        n = int(_CYCLIC_TOKEN.match(token).group(1))  # type: ignore[union-attr]
        if n < 1:
            raise ParseError(f"Cyclic factor '{token}' needs a positive order.")
        prime_powers.extend((int(p), int(m)) for p, m in factorint(n).items())
    return AbelianSpec(free_rank=free_rank, prime_powers=tuple(sorted(prime_powers)))


def theorem1_applies(spec: AbelianSpec | str) -> bool:
    """The chain normal form needs pairwise distinct primes in the finite part."""
    if isinstance(spec, str):
        spec = primary_decomposition(spec)
    primes = [p for p, _ in spec.prime_powers]
    return len(primes) == len(set(primes))


def build_L(spec: AbelianSpec, bound: int | None = None, limits: Limits | None = None) -> LStructure:
    bound = default_gcd_bound() if bound is None else bound
    if bound < 1:
        raise BadParameter("Gcd segment bound must be positive.")
    factors: list[Factor] = [GcdSegment(bound) for _ in range(spec.free_rank)]
    factors.extend(MaxChain(m + 1) for _, m in spec.prime_powers)
    require_magma_size(math.prod(_factor_size(factor) for factor in factors), limits)
    realized = direct_sum_all([factor.realize(limits) for factor in factors], limits)
    return LStructure(factors=tuple(factors), realized=realized)


def _lift_witness(free: FiniteMagma | None, finite: IsomorphismWitness, finite_size: int) -> tuple[int, ...]:
    if free is None:
        return finite.mapping
    return tuple(
        segment * finite_size + finite.mapping[element]
        for segment in range(free.size)
        for element in range(finite_size)
    )


def _classify(g_spec: str, bound: int | None, limits: Limits | None) -> AbelianClassification:
    limits = resolve_limits(limits)
    bound = default_gcd_bound() if bound is None else bound
    spec = primary_decomposition(g_spec)
    finite_spec = AbelianSpec(free_rank=0, prime_powers=spec.prime_powers)
    finite_structure = build_L(finite_spec, bound, limits)
    finite_pg = build_pg(build_group(spec.finite_spec(), limits), limits)

    if finite_pg.size != finite_structure.realized.size:
        raise TheoremViolation(
            f"P_G of {g_spec} has {finite_pg.size} elements but {finite_structure.name} has "
            f"{finite_structure.realized.size}."
        )
    finite_witness = find_isomorphism(finite_pg, finite_structure.realized, limits=limits)
    if finite_witness is None or not finite_witness.verified:
        raise TheoremViolation(f"P_G of {g_spec} is not isomorphic to {finite_structure.name}.")

    # Free summands cannot be materialized; they contribute identical gcd segments on both sides.
    free = None
    if spec.free_rank:
        free = direct_sum_all([GcdSegment(bound).realize(limits) for _ in range(spec.free_rank)], limits)
    computed = direct_sum_all([free, finite_pg] if free is not None else [finite_pg], limits)
    structure = build_L(spec, bound, limits)
    mapping = _lift_witness(free, finite_witness, finite_pg.size)
    homomorphic, _ = check_homomorphism(computed, structure.realized, mapping)
    if not homomorphic:
        raise TheoremViolation(f"Lifted witness for {g_spec} is not a homomorphism.")
    witness = IsomorphismWitness(mapping=mapping, verified=True)
    logger.debug("Classified %s as %s", g_spec, structure.name)
    return AbelianClassification(
        group_spec=g_spec, spec=spec, structure=structure, computed=computed, witness=witness
    )


def verify_theorem1(g_spec: str, bound: int | None = None, limits: Limits | None = None) -> IsomorphismWitness:
    return _classify(g_spec, bound, limits).witness


def classify_abelian(g_spec: str, bound: int | None = None, limits: Limits | None = None) -> AbelianClassification:
    return _classify(g_spec, bound, limits)


def verify_coprime_splitting(g_spec: str, limits: Limits | None = None) -> IsomorphismWitness:
    """P_G of a finite abelian group is the direct sum of P_G of its Sylow components."""
    limits = resolve_limits(limits)
    spec = primary_decomposition(g_spec)
    if spec.free_rank:
        raise BadParameter("Coprime splitting needs a finite abelian group.")
    whole = build_pg(build_group(spec.finite_spec(), limits), limits)

    by_prime: dict[int, list[int]] = {}
    for p, m in spec.prime_powers:
        by_prime.setdefault(p, []).append(p**m)
    if len(by_prime) <= 1:
        return IsomorphismWitness(mapping=tuple(range(whole.size)), verified=True)

    components = [
        build_pg(build_group("x".join(f"Z{order}" for order in orders), limits), limits)
        for _, orders in sorted(by_prime.items())
    ]
    split = direct_sum_all(components, limits)
    if split.size != whole.size:
        raise TheoremViolation(f"P_G of {g_spec} has {whole.size} elements, its Sylow split has {split.size}.")
    witness = find_isomorphism(whole, split, limits=limits)
    if witness is None or not witness.verified:
        raise TheoremViolation(f"P_G of {g_spec} does not split over its Sylow components.")
    return witness


def divisor_gcd(n: int) -> FiniteMagma:
    if n < 1:
        raise BadParameter("divisor_gcd needs n >= 1.")
    values = np.array(divisors(n), dtype=np.int64)
    position = {int(value): index for index, value in enumerate(values)}
    gcds = np.gcd.outer(values, values)
    op = np.vectorize(position.__getitem__, otypes=[np.int64])(gcds)
    return make_magma(op, labels=[str(value) for value in values], provenance=f"div({n})")


def _invariant_factors(n: int, multiple_of: int = 1) -> Iterator[tuple[int, ...]]:
    if n == 1:
        yield ()
        return
    for d in divisors(n):
        if d > 1 and d % multiple_of == 0:
            for rest in _invariant_factors(n // d, d):
                yield (d,) + rest


def abelian_corpus(max_order: int) -> list[str]:
    """Every abelian group of order up to ``max_order``, written by invariant factors."""
    specs = ["Z1"]
    for n in range(2, max_order + 1):
        for factors in _invariant_factors(n):
            specs.append("x".join(f"Z{d}" for d in factors))
    return specs
