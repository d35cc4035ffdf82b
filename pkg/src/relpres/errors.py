"""Exception hierarchy.

Every error carries a stable ``code`` string so the CLI can put it in JSON
reports without inspecting exception types.
"""

from __future__ import annotations


class RelPresError(Exception):
    code = "ERROR"

    def __init__(self, message: str = "", **details):
        super().__init__(message)
        self.details = details

    def to_json(self) -> dict:
        out = {"code": self.code, "message": str(self)}
        out.update({k: v for k, v in self.details.items() if _jsonable(v)})
        return out


def _jsonable(v) -> bool:
    return isinstance(v, (str, int, float, bool, list, dict, type(None)))


class ParseError(RelPresError):
    code = "PARSE_ERROR"

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})", line=line, column=column)
        self.line = line
        self.column = column


class UndeclaredGenerator(RelPresError):
    code = "UNDECLARED_GENERATOR"


class NotCyclicallyReduced(RelPresError):
    code = "NOT_CYCLICALLY_REDUCED"


class OracleUnknown(RelPresError):
    code = "ORACLE_UNKNOWN"


class InconsistentWitness(RelPresError):
    code = "INCONSISTENT_WITNESS"


class InconsistentDescriptor(RelPresError):
    code = "INCONSISTENT_DESCRIPTOR"


class SubgroupNotProper(RelPresError):
    code = "SUBGROUP_NOT_PROPER"


class NotStrict(RelPresError):
    code = "NOT_STRICT"


class ConditionsFail(RelPresError):
    code = "CONDITIONS_FAIL"


class IdentityViolation(RelPresError):
    code = "IDENTITY_VIOLATION"


class ConsistencyFail(RelPresError):
    code = "CONSISTENCY_FAIL"


class RejectedRelator(RelPresError):
    code = "REJECTED_RELATOR"


class UnknownCoset(RelPresError):
    code = "UNKNOWN_COSET"


class KernelMembershipUnknown(RelPresError):
    code = "KERNEL_MEMBERSHIP_UNKNOWN"


class Malformed(RelPresError):
    code = "MALFORMED"


class HypothesisUnverified(RelPresError):
    code = "HYPOTHESIS_UNVERIFIED"
