"""Word classes: membership predicates, existence verdicts and degree formulas.

Every class registers a :class:`~ucycles.core.module.ClassBinder` on import.
Letters are stored 0-based; rank ``r`` of a ranking word is letter ``r - 1``.
"""

import itertools
from collections import Counter
from functools import partial
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from ucycles.core import module as core
from ucycles.core.models import (
    Alphabet,
    CategoryPartition,
    InvalidClassSpec,
    TheoremVerdict,
    Verdict,
    VertexLengthMismatch,
    Word,
    WordClass,
)

from . import numbers

EXISTS = Verdict.EXISTS
NOT_EXISTS = Verdict.NOT_EXISTS
UNSETTLED = Verdict.UNSETTLED

DE_BRUIJN = "de Bruijn: all k^n words admit a U-cycle"


# Predicates


def is_all_words(word: Word) -> bool:
    return True


def is_injective(word: Word) -> bool:
    return len(set(word)) == len(word)


def is_noninjective(word: Word) -> bool:
    """Some letter occurs at least twice."""
    return len(set(word)) < len(word)


def is_surjective(word: Word, k: int) -> bool:
    return len(set(word)) == k


def is_nonsurjective(word: Word, k: int) -> bool:
    """Some letter of the alphabet does not occur."""
    return len(set(word)) < k


def is_alternating(word: Word, partition: CategoryPartition) -> bool:
    """Adjacent letters always come from different categories."""
    if partition.L != 2:
        raise InvalidClassSpec(
            f"Alternating words need exactly 2 categories, got {partition.L}."
        )
    block_of = partition.block_of
    return all(block_of[a] != block_of[b] for a, b in zip(word, word[1:]))


def is_legal_ranking(word: Word) -> bool:
    """Standard competition ranking.

    Every rank present must have exactly as many strictly better entries
    as its 0-based value, so ties consume the following ranks.
    """
    better = 0
    for rank, ties in sorted(Counter(word).items()):
        if rank != better:
            return False
        better += ties
    return True


def is_illegal_ranking(word: Word) -> bool:
    return not is_legal_ranking(word)


def is_password(word: Word, partition: CategoryPartition) -> bool:
    """Strong password: every category is represented."""
    return not partition.missing(word)


def is_nonpassword(word: Word, partition: CategoryPartition) -> bool:
    return bool(partition.missing(word))


# Array predicates: one row per word, one flag per row.


def _distinct_letters(words: np.ndarray) -> np.ndarray:
    ordered = np.sort(words, axis=1)
    return 1 + np.count_nonzero(np.diff(ordered, axis=1), axis=1)


def all_words_mask(words: np.ndarray) -> np.ndarray:
    return np.ones(len(words), dtype=bool)


def injective_mask(words: np.ndarray) -> np.ndarray:
    return _distinct_letters(words) == words.shape[1]


def noninjective_mask(words: np.ndarray) -> np.ndarray:
    return _distinct_letters(words) < words.shape[1]


def surjective_mask(words: np.ndarray, k: int) -> np.ndarray:
    return _distinct_letters(words) == k


def nonsurjective_mask(words: np.ndarray, k: int) -> np.ndarray:
    return _distinct_letters(words) < k


def alternating_mask(words: np.ndarray, partition: CategoryPartition) -> np.ndarray:
    blocks = np.asarray(partition.block_of)[words]
    return np.all(blocks[:, 1:] != blocks[:, :-1], axis=1)


def legal_ranking_mask(words: np.ndarray) -> np.ndarray:
    """Every rank present has as many strictly better entries as its value."""
    ranks = np.arange(words.shape[1])
    ties = np.count_nonzero(words[:, :, None] == ranks, axis=1)
    better = np.cumsum(ties, axis=1) - ties
    return np.all((ties == 0) | (better == ranks), axis=1)


def illegal_ranking_mask(words: np.ndarray) -> np.ndarray:
    return ~legal_ranking_mask(words)


def password_mask(words: np.ndarray, partition: CategoryPartition) -> np.ndarray:
    blocks = np.asarray(partition.block_of)[words]
    return np.all(
        [np.any(blocks == block, axis=1) for block in range(partition.L)], axis=0
    )


def nonpassword_mask(words: np.ndarray, partition: CategoryPartition) -> np.ndarray:
    return ~password_mask(words, partition)


def legal_extensions(vertex: Word, n: int) -> int:
    """Number of letters that complete ``vertex`` to a legal ranking of length n."""
    return sum(is_legal_ranking(vertex + (letter,)) for letter in range(n))


# Existence verdicts


def _verdict(verdict: Verdict, citation: str, proof_level: bool = False):
    return TheoremVerdict(verdict, citation, proof_level)


def _all_words_verdict(word_class: WordClass) -> TheoremVerdict:
    return _verdict(EXISTS, DE_BRUIJN)


def _injective_verdict(word_class: WordClass) -> TheoremVerdict:
    n, k = word_class.n, word_class.k
    if k < 3:
        return _verdict(UNSETTLED, "injective words: result stated for k >= 3 only")
    if k > n:
        return _verdict(EXISTS, "injective words, k >= 3: exists iff k > n")
    if k == n:
        return _verdict(
            NOT_EXISTS,
            "injective words, n = k >= 3: permutations split into disjoint cycles",
        )
    return _verdict(NOT_EXISTS, "injective words, k >= 3: exists iff k > n")


def _surjective_verdict(word_class: WordClass) -> TheoremVerdict:
    n, k = word_class.n, word_class.k
    if k < 3:
        return _verdict(UNSETTLED, "onto words: result stated for k >= 3 only")
    if n > k:
        return _verdict(EXISTS, "onto words, k >= 3: exists iff n > k")
    if n == k:
        return _verdict(
            NOT_EXISTS,
            "onto words, n = k >= 3: permutations split into disjoint cycles",
        )
    return _verdict(NOT_EXISTS, "onto words, k >= 3: exists iff n > k")


def _noninjective_verdict(word_class: WordClass) -> TheoremVerdict:
    n, k = word_class.n, word_class.k
    if n >= 4:
        return _verdict(EXISTS, "non-injective words: exists for n >= 4")
    if n == 1:
        return _verdict(NOT_EXISTS, "non-injective words: false for n = 1")
    if n == 3 and k >= 2:
        return _verdict(
            UNSETTLED, "non-injective words: the general proof needs n >= 4"
        )
    if n > k:
        return _verdict(EXISTS, "non-injective words, n > k: all words, " + DE_BRUIJN)
    # n == 2 and k >= 2
    return _verdict(NOT_EXISTS, "non-injective words, n = 2: requires k = 1")


def _nonsurjective_verdict(word_class: WordClass) -> TheoremVerdict:
    n, k = word_class.n, word_class.k
    if n < k:
        return _verdict(
            EXISTS, "non-surjective words, n < k: all words, " + DE_BRUIJN
        )
    if k == 2:
        return _verdict(
            NOT_EXISTS,
            "non-surjective words, k = 2: only the two constant words remain",
        )
    if k > 2:
        return _verdict(EXISTS, "non-surjective words: exists for n >= k > 2")
    return _verdict(UNSETTLED, "non-surjective words: k = 1 is not covered")


def _alternating_verdict(word_class: WordClass) -> TheoremVerdict:
    n = word_class.n
    kv, kc = word_class.partition.sizes
    if n == 1:
        return _verdict(UNSETTLED, "class-alternating words: n = 1 is not covered")
    if n % 2 == 0:
        return _verdict(EXISTS, "class-alternating words: exists for even n")
    if kv == kc:
        return _verdict(EXISTS, "class-alternating words: exists for odd n, kv = kc")
    return _verdict(
        NOT_EXISTS,
        "class-alternating words, odd n, kv != kc: vertices starting and ending "
        "in different categories have in-degree != out-degree",
        proof_level=True,
    )


def _legal_ranking_verdict(word_class: WordClass) -> TheoremVerdict:
    return _verdict(
        UNSETTLED, "legal rankings: not covered by the complementary results"
    )


def _illegal_ranking_verdict(word_class: WordClass) -> TheoremVerdict:
    n = word_class.n
    if n == 1:
        return _verdict(
            NOT_EXISTS, "illegal rankings, n = 1: the only ranking is legal"
        )
    if n == 3:
        return _verdict(
            NOT_EXISTS,
            "illegal rankings, n = 3: 112, 121, 211 form a closed three-cycle",
        )
    return _verdict(EXISTS, "illegal rankings: exists for n not in {1, 3}")


def _password_verdict(word_class: WordClass) -> TheoremVerdict:
    return _verdict(
        UNSETTLED, "strong passwords: not covered by the complementary results"
    )


def _nonpassword_verdict(word_class: WordClass) -> TheoremVerdict:
    L = word_class.partition.L
    if L >= 3:
        return _verdict(EXISTS, "non-passwords: exists for L >= 3 categories")
    if L == 2:
        return _verdict(NOT_EXISTS, "non-passwords: false for L = 2 categories")
    return _verdict(UNSETTLED, "non-passwords: a single category is not covered")


def theorem_exists(word_class: WordClass) -> TheoremVerdict:
    """Published existence verdict for the class parameters."""
    return core.get_binder(word_class.name).verdict(word_class)


# Degree formulas


def _no_degree(word_class: WordClass, vertex: Word) -> Optional[int]:
    return None


def _noninjective_degree(word_class: WordClass, vertex: Word) -> Optional[int]:
    if is_noninjective(vertex):
        return word_class.k
    # every letter of the vertex can create the repeat
    return word_class.n - 1


def _nonsurjective_degree(word_class: WordClass, vertex: Word) -> Optional[int]:
    k = word_class.k
    absent = k - len(set(vertex))
    if absent == 1:
        return k - 1
    if absent >= 2:
        return k
    return None


def _illegal_ranking_degree(word_class: WordClass, vertex: Word) -> Optional[int]:
    n = word_class.n
    return n - legal_extensions(vertex, n)


def _nonpassword_degree(word_class: WordClass, vertex: Word) -> Optional[int]:
    partition = word_class.partition
    missing = partition.missing(vertex)
    if len(missing) == 1:
        return word_class.k - partition.sizes[missing[0]]
    if len(missing) >= 2:
        return word_class.k
    return None


def _alternating_degree(word_class: WordClass, vertex: Word) -> Optional[int]:
    partition = word_class.partition
    kv, kc = partition.sizes
    if not vertex or not is_alternating(vertex, partition):
        return None
    if word_class.n % 2 == 0:
        # odd-length vertex: first and last letter share a category
        return kc if partition.block_of[vertex[0]] == 0 else kv
    if kv == kc:
        return kv
    return None


def predicted_degree(word_class: WordClass, vertex: Word) -> Optional[int]:
    """Common in/out degree predicted for ``vertex``, or None if not analyzed.

    :raises VertexLengthMismatch: ``vertex`` is not n - 1 letters long.
    """
    if len(vertex) != word_class.n - 1:
        raise VertexLengthMismatch(
            f"Vertex of {word_class.label} must have {word_class.n - 1} letters, "
            f"got {len(vertex)}."
        )
    return core.get_binder(word_class.name).degree(word_class, vertex)


# Binding


def _bind_all_words(n: int, alphabet: Alphabet):
    return is_all_words, all_words_mask, numbers.all_words(n, alphabet.size)


def _bind_injective(n: int, alphabet: Alphabet):
    return is_injective, injective_mask, numbers.falling_factorial(alphabet.size, n)


def _bind_noninjective(n: int, alphabet: Alphabet):
    k = alphabet.size
    return is_noninjective, noninjective_mask, k**n - numbers.falling_factorial(k, n)


def _bind_surjective(n: int, alphabet: Alphabet):
    k = alphabet.size
    return (
        partial(is_surjective, k=k),
        partial(surjective_mask, k=k),
        numbers.surjections(n, k),
    )


def _bind_nonsurjective(n: int, alphabet: Alphabet):
    k = alphabet.size
    return (
        partial(is_nonsurjective, k=k),
        partial(nonsurjective_mask, k=k),
        k**n - numbers.surjections(n, k),
    )


def _bind_alternating(n: int, alphabet: Alphabet):
    partition = alphabet.categories
    if partition.L != 2:
        raise InvalidClassSpec("Alternating words need exactly 2 categories.")
    kv, kc = partition.sizes
    return (
        partial(is_alternating, partition=partition),
        partial(alternating_mask, partition=partition),
        numbers.alternating(n, kv, kc),
    )


def _bind_legal_ranking(n: int, alphabet: Alphabet):
    return is_legal_ranking, legal_ranking_mask, numbers.ordered_bell(n)


def _bind_illegal_ranking(n: int, alphabet: Alphabet):
    return is_illegal_ranking, illegal_ranking_mask, n**n - numbers.ordered_bell(n)


def _bind_password(n: int, alphabet: Alphabet):
    partition = alphabet.categories
    return (
        partial(is_password, partition=partition),
        partial(password_mask, partition=partition),
        numbers.strong_passwords(n, partition.sizes),
    )


def _bind_nonpassword(n: int, alphabet: Alphabet):
    partition = alphabet.categories
    return (
        partial(is_nonpassword, partition=partition),
        partial(nonpassword_mask, partition=partition),
        alphabet.size**n - numbers.strong_passwords(n, partition.sizes),
    )


core.register(
    core.ClassBinder(
        name="all_words",
        bind=_bind_all_words,
        verdict=_all_words_verdict,
        degree=_no_degree,
        summary="every word (de Bruijn)",
    )
)
core.register(
    core.ClassBinder(
        name="injective",
        bind=_bind_injective,
        verdict=_injective_verdict,
        degree=_no_degree,
        summary="no letter repeats",
    )
)
core.register(
    core.ClassBinder(
        name="noninjective",
        bind=_bind_noninjective,
        verdict=_noninjective_verdict,
        degree=_noninjective_degree,
        summary="at least one letter repeats",
    )
)
core.register(
    core.ClassBinder(
        name="surjective",
        bind=_bind_surjective,
        verdict=_surjective_verdict,
        degree=_no_degree,
        summary="every letter occurs",
    )
)
core.register(
    core.ClassBinder(
        name="nonsurjective",
        bind=_bind_nonsurjective,
        verdict=_nonsurjective_verdict,
        degree=_nonsurjective_degree,
        summary="at least one letter is missing",
    )
)
core.register(
    core.ClassBinder(
        name="alternating",
        bind=_bind_alternating,
        verdict=_alternating_verdict,
        degree=_alternating_degree,
        partition=core.PARTITION_ALTERNATING,
        summary="adjacent letters from different categories (kv vowels, kc consonants)",
    )
)
core.register(
    core.ClassBinder(
        name="legal_ranking",
        bind=_bind_legal_ranking,
        verdict=_legal_ranking_verdict,
        degree=_no_degree,
        ranking=True,
        summary="competition rankings of n contestants",
    )
)
core.register(
    core.ClassBinder(
        name="illegal_ranking",
        bind=_bind_illegal_ranking,
        verdict=_illegal_ranking_verdict,
        degree=_illegal_ranking_degree,
        ranking=True,
        summary="rank words that are not competition rankings",
    )
)
core.register(
    core.ClassBinder(
        name="password",
        bind=_bind_password,
        verdict=_password_verdict,
        degree=_no_degree,
        partition=core.PARTITION_CATEGORIES,
        summary="every category represented",
    )
)
core.register(
    core.ClassBinder(
        name="nonpassword",
        bind=_bind_nonpassword,
        verdict=_nonpassword_verdict,
        degree=_nonpassword_degree,
        partition=core.PARTITION_CATEGORIES,
        summary="at least one category missing",
    )
)


# Parameter grids


def compositions(total: int, parts: int) -> Iterator[Sequence[int]]:
    """Ordered ways to write ``total`` as ``parts`` positive integers."""
    for cuts in itertools.combinations(range(1, total), parts - 1):
        bounds = (0,) + cuts + (total,)
        yield tuple(b - a for a, b in zip(bounds, bounds[1:]))


def parameter_grid(
    names: Iterable[str],
    n_values: Iterable[int],
    k_values: Iterable[int],
    *,
    cap: int,
    category_counts: Sequence[int] = (2, 3),
) -> Iterator[WordClass]:
    """Bound classes for every admissible parameter tuple with k^n <= cap."""
    n_values = list(n_values)
    k_values = list(k_values)
    for name in names:
        binder = core.get_binder(name)
        for n in n_values:
            if binder.ranking:
                if n**n <= cap:
                    yield core.make_class(name, n)
                continue
            for k in k_values:
                if k**n > cap:
                    continue
                if binder.partition == core.PARTITION_ALTERNATING:
                    for kv in range(1, k):
                        yield core.make_class(name, n, k, kv=kv, kc=k - kv)
                elif binder.partition == core.PARTITION_CATEGORIES:
                    for parts in category_counts:
                        for sizes in compositions(k, parts):
                            yield core.make_class(name, n, k, categories=sizes)
                else:
                    yield core.make_class(name, n, k)
