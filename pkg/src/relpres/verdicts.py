from __future__ import annotations

from enum import Enum


class Verdict(str, Enum):
    """Three-valued answer to an equality question."""

    EQUAL = "EQUAL"
    DISTINCT = "DISTINCT"
    UNKNOWN = "UNKNOWN"

    def __and__(self, other: "Verdict") -> "Verdict":
        # conjunction of "is trivial" style answers
        if Verdict.DISTINCT in (self, other):
            return Verdict.DISTINCT
        if Verdict.UNKNOWN in (self, other):
            return Verdict.UNKNOWN
        return Verdict.EQUAL


class Provenance(str, Enum):
    THEOREM = "THEOREM"
    EXACT = "EXACT"
    CHECKED = "CHECKED"
    UNKNOWN = "UNKNOWN"


def checked_at(depth: int) -> str:
    return f"CHECKED_AT_DEPTH_{depth}"


def holds_at(depth: int) -> str:
    return f"HOLDS_AT_DEPTH_{depth}"
