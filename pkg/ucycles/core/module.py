import dataclasses
import importlib
import logging
import time
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, Optional, Sequence, Tuple

import numpy as np

from .models import (
    Alphabet,
    CategoryPartition,
    CountMismatch,
    EnumerationCapExceeded,
    InvalidClassSpec,
    Mask,
    Predicate,
    TheoremVerdict,
    Word,
    WordClass,
)

log = logging.getLogger("ucycles.core")

ENUMERATION_CAP = 10**7
# Codes filtered per numpy batch.
ENUMERATION_CHUNK = 2**18

# How a class consumes the category parameters.
PARTITION_NONE = None
PARTITION_ALTERNATING = "alternating"
PARTITION_CATEGORIES = "categories"


@dataclass(frozen=True)
class ClassBinder:
    """Registry entry describing how to bind one named class."""

    name: str
    bind: Callable[[int, Alphabet], Tuple[Predicate, Mask, Optional[int]]]
    verdict: Callable[[WordClass], TheoremVerdict]
    degree: Callable[[WordClass, Word], Optional[int]]
    partition: Optional[str] = PARTITION_NONE
    ranking: bool = False
    summary: str = ""


_REGISTRY: Dict[str, ClassBinder] = {}


def register(binder: ClassBinder) -> ClassBinder:
    if binder.name in _REGISTRY:
        raise ValueError(f"Class '{binder.name}' is already registered.")
    _REGISTRY[binder.name] = binder
    return binder


def registry() -> Dict[str, ClassBinder]:
    """Registered class binders, keyed by name."""
    # The class definitions register themselves on import.
    importlib.import_module("ucycles.classes.module")
    return dict(_REGISTRY)


def get_binder(name: str) -> ClassBinder:
    binders = registry()
    if name not in binders:
        raise InvalidClassSpec(
            f"Unknown class '{name}'. Known classes: {', '.join(sorted(binders))}."
        )
    return binders[name]


def make_class(
    name: str,
    n: int,
    k: Optional[int] = None,
    *,
    kv: Optional[int] = None,
    kc: Optional[int] = None,
    categories: Optional[Sequence[int]] = None,
    symbols: Optional[str] = None,
) -> WordClass:
    """Bind a registered class to its parameters.

    :param name: Registered class name, e.g. ``noninjective``.
    :param n: Word length.
    :param k: Alphabet size; derived from ``kv + kc``, ``categories``
        or ``n`` (rankings) when omitted.
    :param symbols: Display symbols, defaults to ``A..Z a..z 0..9``.
    :raises InvalidClassSpec: Unknown name, n < 1, missing or inconsistent
        parameters.
    """
    binder = get_binder(name)

    if not isinstance(n, int) or n < 1:
        raise InvalidClassSpec(f"Word length must be a positive integer, got {n}.")

    partition: Optional[CategoryPartition] = None
    params: Tuple[Tuple[str, object], ...] = ()

    if binder.partition == PARTITION_ALTERNATING:
        if kv is None or kc is None:
            raise InvalidClassSpec(f"Class '{name}' requires both kv and kc.")
        if categories is not None:
            raise InvalidClassSpec(f"Class '{name}' takes kv and kc, not categories.")
        partition = CategoryPartition.from_sizes((kv, kc))
        k = _derive_size(name, k, kv + kc)
        params = (("kv", kv), ("kc", kc))
    elif binder.partition == PARTITION_CATEGORIES:
        if not categories:
            raise InvalidClassSpec(f"Class '{name}' requires category sizes.")
        if kv is not None or kc is not None:
            raise InvalidClassSpec(f"Class '{name}' takes categories, not kv/kc.")
        partition = CategoryPartition.from_sizes(categories)
        k = _derive_size(name, k, sum(categories))
        params = (("categories", tuple(categories)),)
    else:
        if kv is not None or kc is not None or categories is not None:
            raise InvalidClassSpec(f"Class '{name}' takes no category parameters.")
        if binder.ranking:
            k = _derive_size(name, k, n)
        elif k is None:
            raise InvalidClassSpec(f"Class '{name}' requires the alphabet size k.")

    if k < 1:
        raise InvalidClassSpec(f"Alphabet size must be positive, got {k}.")

    if symbols is None:
        alphabet = Alphabet.default(k, partition, ranking=binder.ranking)
    else:
        alphabet = Alphabet(k, symbols, partition)

    predicate, mask, closed_count = binder.bind(n, alphabet)
    word_class = WordClass(
        name=name,
        n=n,
        alphabet=alphabet,
        predicate=predicate,
        mask=mask,
        closed_count=closed_count,
        params=params,
    )
    verdict = binder.verdict(word_class)
    log.debug(f"Bound {word_class.label}: theorem {verdict.verdict.value}.")
    return dataclasses.replace(word_class, theorem_verdict=verdict)


def _derive_size(name: str, k: Optional[int], expected: int) -> int:
    if k is not None and k != expected:
        raise InvalidClassSpec(
            f"Class '{name}' implies k={expected}, but k={k} was given."
        )
    return expected


def check_cap(word_class: WordClass, cap: Optional[int] = None) -> int:
    """Return k^n or raise if it exceeds the enumeration cap."""
    cap = ENUMERATION_CAP if cap is None else cap
    size = word_class.k**word_class.n
    if size > cap:
        raise EnumerationCapExceeded(size, cap)
    return size


def letter_matrix(codes: np.ndarray, n: int, k: int) -> np.ndarray:
    """Vectorised ``decode``: one row of n letters per base-k code."""
    powers = k ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return (np.asarray(codes, dtype=np.int64)[:, None] // powers) % k


def _member_chunks(word_class: WordClass) -> Iterator[np.ndarray]:
    n, k = word_class.n, word_class.k
    size = k**n
    for start in range(0, size, ENUMERATION_CHUNK):
        codes = np.arange(start, min(start + ENUMERATION_CHUNK, size), dtype=np.int64)
        words = letter_matrix(codes, n, k)
        if word_class.mask is not None:
            keep = word_class.mask(words)
        else:
            predicate = word_class.predicate
            keep = np.fromiter(
                (predicate(tuple(row)) for row in words.tolist()),
                dtype=bool,
                count=len(codes),
            )
        yield codes[keep]


def member_codes(word_class: WordClass, *, cap: Optional[int] = None) -> np.ndarray:
    """Sorted base-k codes of every member, filtered in numpy batches.

    :raises EnumerationCapExceeded: k^n above the cap.
    """
    check_cap(word_class, cap)
    now = time.time()
    codes = np.concatenate([np.zeros(0, dtype=np.int64), *_member_chunks(word_class)])
    log.debug(
        f"{word_class.label}: {len(codes)} members of {word_class.k ** word_class.n} "
        f"words ({time.time() - now:.3f} s)."
    )
    return codes


def enumerate_class(
    word_class: WordClass, *, cap: Optional[int] = None
) -> Iterator[Word]:
    """Members of the class in lexicographic order.

    The cap is checked before the stream is returned, so an oversized class
    fails at the call site rather than at the first ``next()``.
    """
    check_cap(word_class, cap)
    return _stream(word_class)


def _stream(word_class: WordClass) -> Iterator[Word]:
    n, k = word_class.n, word_class.k
    for codes in _member_chunks(word_class):
        for row in letter_matrix(codes, n, k).tolist():
            yield tuple(row)


def count_class(word_class: WordClass, *, cap: Optional[int] = None) -> int:
    """Class size; formula and enumeration must agree when both are available.

    :raises EnumerationCapExceeded: The cap is exceeded and no formula exists.
    :raises CountMismatch: Formula and enumeration disagree.
    """
    try:
        enumerated = len(member_codes(word_class, cap=cap))
    except EnumerationCapExceeded:
        if word_class.closed_count is None:
            raise
        log.debug(f"{word_class.label}: above cap, using the closed form only.")
        return word_class.closed_count

    if word_class.closed_count is not None and word_class.closed_count != enumerated:
        raise CountMismatch(word_class.name, word_class.closed_count, enumerated)
    return enumerated


def encode(word: Sequence[int], k: int) -> int:
    """Base-k integer of a word, most significant letter first."""
    code = 0
    for letter in word:
        code = code * k + letter
    return code


def decode(code: int, n: int, k: int) -> Word:
    letters = [0] * n
    for position in range(n - 1, -1, -1):
        code, letters[position] = divmod(code, k)
    return tuple(letters)


def encode_words(words: Sequence[Word], n: int, k: int) -> np.ndarray:
    """Vectorised ``encode``; lexicographic order of words is numeric order."""
    if not words:
        return np.zeros(0, dtype=np.int64)
    powers = k ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return np.asarray(words, dtype=np.int64) @ powers
