from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from ucycles.core.models import UCycleError, Word, WordClass
from ucycles.core.module import decode


class NotEulerianError(UCycleError):
    def __init__(self, report: ExistenceReport):
        super().__init__(
            f"{report.word_class.label} is not Eulerian: {', '.join(report.reasons)}."
        )
        self.report = report


class MalformedCircuit(UCycleError):
    pass


@dataclass(frozen=True, eq=False)
class TransitionDigraph:
    """Vertices are (n-1)-letter windows, edges are class members.

    Words are stored as base-k codes. Vertex codes are sorted, edges are
    sorted by label, and the out-edges of vertex ``v`` are the contiguous
    range ``offsets[v]:offsets[v + 1]``.
    """

    word_class: WordClass
    vertices: np.ndarray
    labels: np.ndarray
    tails: np.ndarray
    heads: np.ndarray
    offsets: np.ndarray
    in_degrees: np.ndarray
    out_degrees: np.ndarray

    def __post_init__(self):
        for name in (
            "vertices",
            "labels",
            "tails",
            "heads",
            "offsets",
            "in_degrees",
            "out_degrees",
        ):
            getattr(self, name).flags.writeable = False

    @property
    def n(self) -> int:
        return self.word_class.n

    @property
    def k(self) -> int:
        return self.word_class.k

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def edge_count(self) -> int:
        return len(self.labels)

    def vertex_word(self, index: int) -> Word:
        return decode(int(self.vertices[index]), self.n - 1, self.k)

    def edge_word(self, index: int) -> Word:
        return decode(int(self.labels[index]), self.n, self.k)

    def out_edges(self, index: int) -> range:
        return range(int(self.offsets[index]), int(self.offsets[index + 1]))

    def __repr__(self) -> str:
        return (
            f"<{self.__class__.__name__} class='{self.word_class.label}' "
            f"vertices='{self.vertex_count}' edges='{self.edge_count}'>"
        )

    def dump(self) -> dict:
        return {
            **self.word_class.dump(),
            "vertices": self.vertex_count,
            "edges": self.edge_count,
        }


@dataclass(frozen=True)
class DegreeViolation:
    vertex: Word
    in_degree: int
    out_degree: int

    def dump(self, word_class: WordClass) -> dict:
        return {
            "vertex": word_class.alphabet.format(self.vertex),
            "in": self.in_degree,
            "out": self.out_degree,
        }


@dataclass(frozen=True)
class DegreeMismatch:
    vertex: Word
    in_degree: int
    out_degree: int
    predicted: int

    def dump(self, word_class: WordClass) -> dict:
        return {
            "vertex": word_class.alphabet.format(self.vertex),
            "in": self.in_degree,
            "out": self.out_degree,
            "predicted": self.predicted,
        }


@dataclass(frozen=True)
class DegreeAudit:
    """Actual degrees against the predicted degree formula."""

    word_class: WordClass
    mismatches: Tuple[DegreeMismatch, ...]
    checked: int
    skipped: int

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def dump(self) -> dict:
        return {
            **self.word_class.dump(),
            "checked": self.checked,
            "skipped": self.skipped,
            "mismatches": [m.dump(self.word_class) for m in self.mismatches],
        }


@dataclass(frozen=True)
class ComponentSummary:
    """One weakly connected component, words kept as sorted base-k codes."""

    index: int
    vertices: Tuple[int, ...]
    edges: Tuple[int, ...]

    def edge_words(self, n: int, k: int) -> List[Word]:
        return [decode(code, n, k) for code in self.edges]

    def dump(self, word_class: WordClass, edge_limit: Optional[int] = None) -> dict:
        n, k, fmt = word_class.n, word_class.k, word_class.alphabet.format
        edges = self.edges if edge_limit is None else self.edges[:edge_limit]
        return {
            "index": self.index,
            "vertex_count": len(self.vertices),
            "edge_count": len(self.edges),
            "edges": [fmt(decode(code, n, k)) for code in edges],
            "truncated": len(edges) < len(self.edges),
        }


@dataclass(frozen=True)
class ExistenceReport:
    """Evidence for the Eulerian verdict of a transition digraph."""

    word_class: WordClass
    verdict: bool
    degree_violations: Tuple[DegreeViolation, ...]
    nontrivial_component_count: int
    edge_count: int
    components: Tuple[ComponentSummary, ...] = field(default=(), repr=False)

    @property
    def reasons(self) -> List[str]:
        reasons = []
        if self.edge_count == 0:
            reasons.append("empty_class")
        if self.degree_violations:
            reasons.append("degree_imbalance")
        if self.nontrivial_component_count > 1:
            reasons.append("disconnected")
        return reasons

    def dump(self, edge_limit: Optional[int] = None) -> dict:
        return {
            **self.word_class.dump(),
            "verdict": self.verdict,
            "reasons": self.reasons,
            "edge_count": self.edge_count,
            "degree_violations": [
                v.dump(self.word_class) for v in self.degree_violations
            ],
            "components": [
                c.dump(self.word_class, edge_limit) for c in self.components
            ],
        }


def least_rotation(letters: Tuple[int, ...]) -> int:
    """Start index of the lexicographically least rotation, in linear time."""
    size = len(letters)
    doubled = letters + letters
    i, j, offset = 0, 1, 0
    while i < size and j < size and offset < size:
        a, b = doubled[i + offset], doubled[j + offset]
        if a == b:
            offset += 1
            continue
        if a > b:
            i += offset + 1
        else:
            j += offset + 1
        if i == j:
            j += 1
        offset = 0
    return min(i, j)


@dataclass(frozen=True)
class UCycle:
    """A cyclic letter sequence whose n-windows are the class, once each."""

    letters: Tuple[int, ...]
    word_class: WordClass
    start_vertex: Word
    edge_order: str
    engine_version: str

    def __len__(self) -> int:
        return len(self.letters)

    def format(self) -> str:
        return self.word_class.alphabet.format(self.letters)

    def canonical(self) -> UCycle:
        """The same cycle rotated to its lexicographically least rotation."""
        shift = least_rotation(self.letters)
        letters = self.letters[shift:] + self.letters[:shift]
        return UCycle(
            letters=letters,
            word_class=self.word_class,
            start_vertex=tuple(
                letters[i % len(letters)] for i in range(self.word_class.n - 1)
            ),
            edge_order=self.edge_order,
            engine_version=self.engine_version,
        )

    def __repr__(self) -> str:
        return (
            f"<{self.__class__.__name__} class='{self.word_class.label}' "
            f"length='{len(self)}'>"
        )

    def dump(self) -> dict:
        fmt = self.word_class.alphabet.format
        return {
            **self.word_class.dump(),
            "length": len(self.letters),
            "cycle": self.format(),
            "start_vertex": fmt(self.start_vertex),
            "edge_order": self.edge_order,
            "engine_version": self.engine_version,
        }
