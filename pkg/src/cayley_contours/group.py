"""Group words for tree vertices and periodic configurations from finite quotients.

The vertices of the Cayley tree of order k are in bijection with the free
product of ``k+1`` copies of Z/2, with generators ``a_1 .. a_{k+1}``.  A word
is a tuple of generator indices; it is reduced when no two consecutive
entries coincide (each generator squares to the identity).

Periodic configurations come from a homomorphism of that group onto a finite
group given by its multiplication table; the kernel is a normal subgroup whose
cosets are the elements of the image.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import DomainError, ValidationError
from .tree import TreeVolume

ReducedWord = tuple[int, ...]


def reduce_word(word: Sequence[int]) -> ReducedWord:
    """Cancel adjacent equal generators until the word is reduced."""
    out: list[int] = []
    for g in word:
        if out and out[-1] == g:
            out.pop()
        else:
            out.append(int(g))
    return tuple(out)


def is_reduced(word: Sequence[int]) -> bool:
    return all(a != b for a, b in zip(word, word[1:]))


def multiply_words(w1: Sequence[int], w2: Sequence[int]) -> ReducedWord:
    return reduce_word(tuple(w1) + tuple(w2))


def vertex_word(vol: TreeVolume, x: int) -> ReducedWord:
    """Edge labels read along the path from the root to ``x``."""
    vol.check_vertex(x)
    labels = []
    x = int(x)
    while x != 0:
        labels.append(int(vol.label[x]))
        x = int(vol.parent[x])
    return tuple(reversed(labels))


def word_vertex(vol: TreeVolume, word: Sequence[int]) -> int:
    """Inverse of :func:`vertex_word`."""
    if not is_reduced(word):
        raise DomainError(f"word {tuple(word)} is not reduced")
    if len(word) > vol.n + 1:
        raise DomainError(f"word of length {len(word)} leaves V_{vol.n + 1}")
    x = 0
    for g in word:
        if not 1 <= g <= vol.k + 1:
            raise DomainError(f"generator index {g} outside 1..{vol.k + 1}")
        for c in vol.children(x):
            if vol.label[c] == g:
                x = c
                break
    return x


@dataclass(frozen=True, eq=False)
class FiniteQuotient:
    """Homomorphism from the tree group onto a finite group.

    ``table[a, b]`` is the product ``a * b``; element 0 is the identity.
    ``generator_images[i - 1]`` is the image of generator ``a_i``.  Coset
    labels are the elements of the generated subgroup, renumbered
    ``0..r-1`` in breadth-first order from the identity.
    """

    table: np.ndarray
    generator_images: tuple[int, ...]
    coset_of_element: dict
    r: int

    @classmethod
    def from_table(cls, table: Sequence[Sequence[int]], generator_images: Sequence[int]) -> "FiniteQuotient":
        t = np.asarray(table, dtype=np.int64)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise ValidationError(f"multiplication table must be square, got shape {t.shape}")
        m = t.shape[0]
        if t.min() < 0 or t.max() >= m:
            raise ValidationError("multiplication table entries must be element indices 0..m-1")
        ids = np.arange(m)
        if not (np.array_equal(t[0], ids) and np.array_equal(t[:, 0], ids)):
            raise ValidationError("element 0 must be the identity")
        # associativity: t[t[a,b],c] == t[a,t[b,c]]
        left = t[t[:, :, None], ids[None, None, :]]
        right = t[ids[:, None, None], t[None, :, :]]
        if not np.array_equal(left, right):
            raise ValidationError("multiplication table is not associative")
        images = tuple(int(g) for g in generator_images)
        for i, g in enumerate(images, start=1):
            if not 0 <= g < m:
                raise ValidationError(f"image of generator {i} is not an element")
            if t[g, g] != 0:
                raise ValidationError(f"image of generator {i} (element {g}) is not an involution")
        # label the generated subgroup breadth-first
        coset = {0: 0}
        queue = [0]
        for a in queue:
            for g in images:
                b = int(t[a, g])
                if b not in coset:
                    coset[b] = len(coset)
                    queue.append(b)
        return cls(t, images, coset, len(coset))

    @classmethod
    def trivial(cls, k: int) -> "FiniteQuotient":
        return cls.from_table([[0]], [0] * (k + 1))

    @classmethod
    def parity(cls, k: int) -> "FiniteQuotient":
        """Every generator maps onto the non-identity element of Z/2."""
        return cls.from_table([[0, 1], [1, 0]], [1] * (k + 1))

    @property
    def k(self) -> int:
        return len(self.generator_images) - 1

    def element(self, word: Sequence[int]) -> int:
        """Group element represented by ``word``."""
        a = 0
        for g in word:
            if not 1 <= g <= len(self.generator_images):
                raise DomainError(f"generator index {g} outside 1..{len(self.generator_images)}")
            a = int(self.table[a, self.generator_images[g - 1]])
        return a

    def multiply_labels(self, c1: int, c2: int) -> int:
        inverse = {v: e for e, v in self.coset_of_element.items()}
        return self.coset_of_element[int(self.table[inverse[c1], inverse[c2]])]


def coset_index(word: Sequence[int], quot: FiniteQuotient) -> int:
    """Coset label of ``word``; the empty word has label 0."""
    return quot.coset_of_element[quot.element(word)]


def coset_labels(vol: TreeVolume, quot: FiniteQuotient) -> np.ndarray:
    """Coset label of every vertex of the volume."""
    if len(quot.generator_images) != vol.k + 1:
        raise DomainError(f"quotient has {len(quot.generator_images)} generators, tree needs {vol.k + 1}")
    images = np.asarray((0,) + quot.generator_images)
    elem = np.zeros(vol.size, dtype=np.int64)
    for c in range(1, vol.size):
        elem[c] = quot.table[elem[vol.parent[c]], images[vol.label[c]]]
    lookup = np.zeros(quot.table.shape[0], dtype=np.int64)
    for e, c in quot.coset_of_element.items():
        lookup[e] = c
    return lookup[elem]


def periodic_configuration(
    vol: TreeVolume, quot: FiniteQuotient, assignment: Mapping[int, int] | Sequence[int]
) -> np.ndarray:
    """Configuration on ``V_{n+1}`` equal to ``assignment[c]`` on coset ``c``.

    Spins are 1-based.  ``assignment`` may be a mapping or a sequence indexed
    by coset label; it must cover every label ``0..r-1``.
    """
    if isinstance(assignment, Mapping):
        missing = [c for c in range(quot.r) if c not in assignment]
        if missing:
            raise DomainError(f"assignment does not cover coset labels {missing}")
        table = np.array([assignment[c] for c in range(quot.r)], dtype=np.int64)
    else:
        if len(assignment) < quot.r:
            raise DomainError(f"assignment covers {len(assignment)} of {quot.r} coset labels")
        table = np.asarray(assignment[: quot.r], dtype=np.int64)
    if table.min() < 1:
        raise DomainError("spin indices are 1-based")
    return table[coset_labels(vol, quot)]


def injective_assignments(r: int, q: int) -> list[tuple[int, ...]]:
    """All injective maps from ``r`` coset labels to spins ``1..q``."""
    return list(itertools.permutations(range(1, q + 1), r))
