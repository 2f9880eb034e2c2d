"""Independent check that a cyclic string is a U-cycle of a class.

Nothing here touches the digraph or the circuit code; membership comes
from the class predicates and the expected size from enumeration.
"""

import logging
from collections import Counter
from typing import Dict, List, Optional, Sequence

from ucycles.core.models import EmptyCandidate, Word, WordClass
from ucycles.core.module import encode, member_codes

from .models import Defect, DefectKind, VerificationResult

log = logging.getLogger("ucycles.verifier")


def windows(letters: Sequence[int], n: int) -> List[Word]:
    """All cyclic n-windows of ``letters``, window ``i`` starting at letter ``i``.

    :raises EmptyCandidate: ``letters`` is empty.
    """
    size = len(letters)
    if size == 0:
        raise EmptyCandidate("A cyclic sequence needs at least one letter.")
    if n < 1:
        raise ValueError(f"Window length must be positive, got {n}.")
    return [tuple(letters[(i + j) % size] for j in range(n)) for i in range(size)]


def verify_ucycle(
    letters: Sequence[int], word_class: WordClass, *, cap: Optional[int] = None
) -> VerificationResult:
    """Certify ``letters`` as a U-cycle of ``word_class``.

    Windows are scanned in index order and the first defect wins. When every
    window is a distinct member but some members are never reached, the
    defect is ``Incomplete``.

    :raises EnumerationCapExceeded: The class is too large to enumerate.
    """
    expected = len(member_codes(word_class, cap=cap))
    actual = len(letters)

    if actual == 0:
        return VerificationResult(
            False, Defect(DefectKind.LENGTH_MISMATCH), expected, actual
        )

    n, k = word_class.n, word_class.k
    seen: Dict[int, int] = {}
    for index, window in enumerate(windows(letters, n)):
        if not all(0 <= letter < k for letter in window) or not word_class.contains(
            window
        ):
            reason = Defect(DefectKind.NON_MEMBER_WINDOW, index=index, window=window)
            return _reject(word_class, reason, expected, actual)
        code = encode(window, k)
        if code in seen:
            reason = Defect(
                DefectKind.DUPLICATE_WINDOW,
                index=seen[code],
                other_index=index,
                window=window,
            )
            return _reject(word_class, reason, expected, actual)
        seen[code] = index

    if actual != expected:
        reason = Defect(DefectKind.INCOMPLETE, missing=expected - actual)
        return _reject(word_class, reason, expected, actual)
    return VerificationResult(True, None, expected, actual)


def _reject(
    word_class: WordClass, reason: Defect, expected: int, actual: int
) -> VerificationResult:
    log.debug(
        f"Rejected candidate for {word_class.label}: "
        f"{reason.describe(word_class.alphabet)}."
    )
    return VerificationResult(False, reason, expected, actual)


def same_windows(first: Sequence[int], second: Sequence[int], n: int) -> bool:
    """Two cyclic strings carry the same multiset of n-windows."""
    if not first or not second:
        return len(first) == len(second)
    return Counter(windows(first, n)) == Counter(windows(second, n))
