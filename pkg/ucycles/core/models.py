from __future__ import annotations

import enum
import string
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, Optional, Sequence, Tuple

import numpy as np

Letter = int
Word = Tuple[Letter, ...]
Predicate = Callable[[Word], bool]
# Rows of a letter matrix to one membership flag per row.
Mask = Callable[[np.ndarray], np.ndarray]

DEFAULT_SYMBOLS: str = string.ascii_uppercase + string.ascii_lowercase + string.digits
RANKING_SYMBOLS: str = "123456789" + string.ascii_uppercase + string.ascii_lowercase


class UCycleError(Exception):
    """Base class of every error raised by the toolkit."""


class InvalidClassSpec(UCycleError, ValueError):
    pass


class AlphabetError(UCycleError, ValueError):
    pass


class EnumerationCapExceeded(UCycleError):
    def __init__(self, size: int, cap: int):
        super().__init__(
            f"Enumeration of {size} words exceeds the configured cap of {cap}."
        )
        self.size = size
        self.cap = cap


class CountMismatch(UCycleError):
    def __init__(self, name: str, formula: int, enumerated: int):
        super().__init__(
            f"Closed-form count {formula} of '{name}' disagrees "
            f"with enumeration ({enumerated})."
        )
        self.formula = formula
        self.enumerated = enumerated


class UnsupportedWordLength(UCycleError, ValueError):
    pass


class VertexLengthMismatch(UCycleError, ValueError):
    pass


class EmptyCandidate(UCycleError, ValueError):
    pass


class Verdict(enum.Enum):
    EXISTS = "Exists"
    NOT_EXISTS = "NotExists"
    UNSETTLED = "Unsettled"


@dataclass(frozen=True)
class TheoremVerdict:
    """Existence verdict of the published result covering a class.

    ``proof_level`` marks verdicts that follow from an obstruction inside
    a proof rather than from a stated result.
    """

    verdict: Verdict
    citation: str
    proof_level: bool = False

    def dump(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "citation": self.citation,
            "proof_level": self.proof_level,
        }


@dataclass(frozen=True)
class CategoryPartition:
    """Partition of the letters ``0..k-1`` into labeled blocks."""

    blocks: Tuple[FrozenSet[Letter], ...]
    _block_of: Tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.blocks:
            raise InvalidClassSpec("A category partition needs at least one block.")
        if any(not block for block in self.blocks):
            raise InvalidClassSpec("Category blocks must be nonempty.")

        letters = sorted(letter for block in self.blocks for letter in block)
        if letters != list(range(len(letters))):
            raise InvalidClassSpec(
                "Category blocks must be disjoint and cover the letters 0..k-1."
            )

        block_of = [0] * len(letters)
        for index, block in enumerate(self.blocks):
            for letter in block:
                block_of[letter] = index
        object.__setattr__(self, "_block_of", tuple(block_of))

    @staticmethod
    def from_sizes(sizes: Iterable[int]) -> CategoryPartition:
        """Build contiguous blocks: sizes (2, 1) give {0, 1} and {2}."""
        blocks = []
        start = 0
        for size in sizes:
            if size < 1:
                raise InvalidClassSpec(f"Category size must be positive, got {size}.")
            blocks.append(frozenset(range(start, start + size)))
            start += size
        return CategoryPartition(tuple(blocks))

    @property
    def L(self) -> int:
        return len(self.blocks)

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(len(block) for block in self.blocks)

    @property
    def k(self) -> int:
        return len(self._block_of)

    @property
    def block_of(self) -> Tuple[int, ...]:
        """Block index of every letter."""
        return self._block_of

    def missing(self, word: Sequence[Letter]) -> Tuple[int, ...]:
        """Indices of the blocks with no letter in ``word``."""
        present = {self._block_of[letter] for letter in word}
        return tuple(index for index in range(self.L) if index not in present)

    def __repr__(self) -> str:
        return f"<{self.__class__.__name__} sizes='{self.sizes}'>"

    def dump(self) -> dict:
        return {"blocks": [sorted(block) for block in self.blocks]}


@dataclass(frozen=True)
class Alphabet:
    """Letters ``0..size-1`` with their display symbols."""

    size: int
    symbols: str
    categories: Optional[CategoryPartition] = None
    _index: Dict[str, Letter] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.size < 1:
            raise AlphabetError(f"Alphabet size must be positive, got {self.size}.")
        if len(self.symbols) != self.size:
            raise AlphabetError(
                f"Alphabet of size {self.size} needs exactly {self.size} symbols, "
                f"got {len(self.symbols)}."
            )
        if len(set(self.symbols)) != len(self.symbols):
            raise AlphabetError("Alphabet symbols must be pairwise distinct.")
        if self.categories is not None and self.categories.k != self.size:
            raise InvalidClassSpec(
                f"Category sizes {self.categories.sizes} do not sum "
                f"to the alphabet size {self.size}."
            )
        object.__setattr__(
            self, "_index", {symbol: i for i, symbol in enumerate(self.symbols)}
        )

    @staticmethod
    def default(
        size: int,
        categories: Optional[CategoryPartition] = None,
        ranking: bool = False,
    ) -> Alphabet:
        pool = RANKING_SYMBOLS if ranking else DEFAULT_SYMBOLS
        if size > len(pool):
            raise AlphabetError(
                f"Default symbols cover at most {len(pool)} letters; "
                f"pass explicit symbols for k={size}."
            )
        return Alphabet(size, pool[:size], categories)

    def format(self, word: Sequence[Letter]) -> str:
        return "".join(self.symbols[letter] for letter in word)

    def parse(self, text: str) -> Word:
        try:
            return tuple(self._index[symbol] for symbol in text)
        except KeyError as exc:
            raise AlphabetError(
                f"Symbol {exc.args[0]!r} is not in the alphabet '{self.symbols}'."
            ) from None

    def dump(self) -> dict:
        return {
            "size": self.size,
            "symbols": self.symbols,
            "categories": self.categories.dump() if self.categories else None,
        }


@dataclass(frozen=True)
class WordClass:
    """A fully bound class of n-letter words."""

    name: str
    n: int
    alphabet: Alphabet
    predicate: Predicate = field(repr=False, compare=False)
    mask: Optional[Mask] = field(default=None, repr=False, compare=False)
    closed_count: Optional[int] = field(default=None, compare=False)
    params: Tuple[Tuple[str, object], ...] = ()
    theorem_verdict: Optional[TheoremVerdict] = field(default=None, compare=False)

    @property
    def k(self) -> int:
        return self.alphabet.size

    @property
    def partition(self) -> Optional[CategoryPartition]:
        return self.alphabet.categories

    @property
    def label(self) -> str:
        extra = "".join(f", {key}={value}" for key, value in self.params)
        return f"{self.name}(n={self.n}, k={self.k}{extra})"

    def contains(self, word: Word) -> bool:
        return self.predicate(word)

    def __repr__(self) -> str:
        return f"<{self.__class__.__name__} {self.label}>"

    def dump(self) -> dict:
        params = {}
        for key, value in self.params:
            params[key] = list(value) if isinstance(value, tuple) else value
        return {
            "class": self.name,
            "n": self.n,
            "k": self.k,
            "params": params,
        }
