from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from pathlib import Path

logger = logging.getLogger(__name__)

BASE_DIR = Path(__file__).resolve().parent.parent

DEFAULT_MAX_ORDER = 256
DEFAULT_MAX_SUBGROUPS = 4096
DEFAULT_MAX_MAGMA_SIZE = 4096
DEFAULT_MAX_ISO_SIZE = 64
DEFAULT_GCD_BOUND = 30

SUPPORTED_FAMILIES = (
    "trivial",
    "dihedral",
    "alexander",
    "symplectic",
    "conj",
    "pg",
    "formula",
    "file",
)

# Non-abelian part of the built-in corpus; abelian groups are generated.
CORPUS_NONABELIAN_GROUPS = ("D6", "D8", "D10", "D12", "D14", "D16", "Q8", "S3", "S4", "A4", "A5")
CORPUS_ABELIAN_MAX_ORDER = 32
CORPUS_EXTRA_ABELIAN = ("Z8xZ9",)
CORPUS_DIHEDRAL_QUANDLES = tuple(range(1, 8))
CORPUS_TRIVIAL_QUANDLES = tuple(range(1, 9))
CORPUS_MAX_CHAINS = tuple(range(1, 9))
CORPUS_GCD_BOUNDS = (6, 12, 30)


def _safe_int(env_key: str, fallback: int) -> int:
    raw = os.getenv(env_key, "").strip()
    if not raw:
        return fallback
    try:
        value = int(raw)
    except ValueError:
        logger.warning("Ignoring %s=%r: not an integer.", env_key, raw)
        return fallback
    if value <= 0:
        logger.warning("Ignoring %s=%r: must be positive.", env_key, raw)
        return fallback
    return value


@dataclass(frozen=True)
class Limits:
    max_order: int = DEFAULT_MAX_ORDER
    max_subgroups: int = DEFAULT_MAX_SUBGROUPS
    max_magma_size: int = DEFAULT_MAX_MAGMA_SIZE
    max_iso_size: int = DEFAULT_MAX_ISO_SIZE

    def __post_init__(self) -> None:
        for name in ("max_order", "max_subgroups", "max_magma_size", "max_iso_size"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive.")

    @classmethod
    def from_env(cls) -> "Limits":
        return cls(
            max_order=_safe_int("PQ_MAX_ORDER", DEFAULT_MAX_ORDER),
            max_subgroups=_safe_int("PQ_MAX_SUBGROUPS", DEFAULT_MAX_SUBGROUPS),
            max_magma_size=_safe_int("PQ_MAX_MAGMA", DEFAULT_MAX_MAGMA_SIZE),
            max_iso_size=_safe_int("PQ_MAX_ISO", DEFAULT_MAX_ISO_SIZE),
        )


def resolve_limits(limits: Limits | None) -> Limits:
    return limits if limits is not None else Limits.from_env()


def default_gcd_bound() -> int:
    return _safe_int("PQ_GCD_BOUND", DEFAULT_GCD_BOUND)
