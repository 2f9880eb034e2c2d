from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from ucycles.core.models import Alphabet, Word


class DefectKind(enum.Enum):
    LENGTH_MISMATCH = "LengthMismatch"
    NON_MEMBER_WINDOW = "NonMemberWindow"
    DUPLICATE_WINDOW = "DuplicateWindow"
    INCOMPLETE = "Incomplete"


@dataclass(frozen=True)
class Defect:
    """First defect of a candidate cycle, in window-index order."""

    kind: DefectKind
    index: Optional[int] = None
    other_index: Optional[int] = None
    window: Optional[Word] = None
    missing: Optional[int] = None

    def describe(self, alphabet: Alphabet) -> str:
        window = alphabet.format(self.window) if self.window is not None else None
        if self.kind is DefectKind.NON_MEMBER_WINDOW:
            return f"{self.kind.value} index={self.index} window={window}"
        if self.kind is DefectKind.DUPLICATE_WINDOW:
            return (
                f"{self.kind.value} index={self.index} "
                f"other_index={self.other_index} window={window}"
            )
        if self.kind is DefectKind.INCOMPLETE:
            return f"{self.kind.value} missing={self.missing}"
        return self.kind.value

    def dump(self, alphabet: Alphabet) -> dict:
        return {
            "kind": self.kind.value,
            "index": self.index,
            "other_index": self.other_index,
            "window": alphabet.format(self.window) if self.window is not None else None,
            "missing": self.missing,
        }


@dataclass(frozen=True)
class VerificationResult:
    valid: bool
    reason: Optional[Defect]
    expected_size: int
    actual_size: int

    def __repr__(self) -> str:
        reason = self.reason.kind.value if self.reason else None
        return (
            f"<{self.__class__.__name__} valid='{self.valid}' reason='{reason}' "
            f"expected_size='{self.expected_size}' actual_size='{self.actual_size}'>"
        )

    def dump(self, alphabet: Alphabet) -> dict:
        return {
            "valid": self.valid,
            "reason": self.reason.dump(alphabet) if self.reason else None,
            "expected_size": self.expected_size,
            "actual_size": self.actual_size,
        }
