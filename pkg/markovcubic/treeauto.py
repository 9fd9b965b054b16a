"""
Automorphisms of the ternary rooted tree, truncated at a finite level.

A level-n automorphism is stored as its portrait: one permutation of
{0, 1, 2} for each of the (3^n - 1) / 2 internal vertices, listed in
breadth-first order. Automorphisms act on the right of words, so
`a.compose(b)` means "a, then b", and the section at a vertex u is indexed
by u itself (the source), so that (uw)a == (u)a (w)a_u.

"""
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

Perm3 = Tuple[int, int, int]
Word = Tuple[int, ...]
CycleStructure = Tuple[int, ...]

IDENTITY3: Perm3 = (0, 1, 2)
# the 3-cycle (0,1,2), as images of 0, 1, 2
CYCLE3: Perm3 = (1, 2, 0)
# the transposition (0,1)
SWAP01: Perm3 = (1, 0, 2)

WordLike = Union[str, Sequence[int]]


def as_word(w: WordLike) -> Word:
    """
    Normalize a word given as a string ("201") or a sequence of letters.
    """
    letters = tuple(int(c) for c in w)
    for c in letters:
        if c not in (0, 1, 2):
            raise ValueError(f"Invalid letter {c} in word {w!r}")
    return letters


def word_index(w: Word) -> int:
    index = 0
    for c in w:
        index = 3 * index + c
    return index


def index_word(index: int, length: int) -> Word:
    letters = []
    for _ in range(length):
        index, c = divmod(index, 3)
        letters.append(c)
    return tuple(reversed(letters))


def vertex_offset(k: int) -> int:
    """Breadth-first number of the first vertex at level k."""
    return (3**k - 1) // 2


def perm3_compose(p: Perm3, q: Perm3) -> Perm3:
    return (q[p[0]], q[p[1]], q[p[2]])


def perm3_inverse(p: Perm3) -> Perm3:
    inv = [0, 0, 0]
    for c, image in enumerate(p):
        inv[image] = c
    return tuple(inv)


def perm3_sign(p: Perm3) -> int:
    inversions = sum(1 for i in range(3) for j in range(i + 1, 3) if p[i] > p[j])
    return -1 if inversions % 2 else 1


def cycle_type(lengths: Iterable[int]) -> CycleStructure:
    """Canonical form of a multiset of cycle lengths: sorted, largest first."""
    return tuple(sorted(lengths, reverse=True))


def _check_perm3(p: Sequence[int]) -> Perm3:
    p = tuple(int(c) for c in p)
    if sorted(p) != [0, 1, 2]:
        raise ValueError(f"{p} is not a permutation of (0, 1, 2)")
    return p


class TreeAut:
    """
    An automorphism of the 3-ary rooted tree truncated at `level`.

    Instances are immutable; every operation returns a new TreeAut.

    """

    __slots__ = ("level", "portrait", "_leaves")

    def __init__(self, level: int, portrait: Iterable[Sequence[int]]):
        """
        Create a new TreeAut from its portrait.

        Arguments:
            level: The depth n of the truncated tree
            portrait: One permutation per internal vertex, breadth-first

        """
        if level < 0:
            raise ValueError(f"Invalid level {level}")
        portrait = tuple(_check_perm3(p) for p in portrait)
        if len(portrait) != vertex_offset(level):
            raise ValueError(
                f"A level {level} portrait has {vertex_offset(level)} entries, "
                f"got {len(portrait)}"
            )
        self.level = level
        self.portrait = portrait
        self._leaves = None

    @classmethod
    def identity(cls, level: int) -> "TreeAut":
        return cls(level, [IDENTITY3] * vertex_offset(level))

    @classmethod
    def from_root(cls, perm: Sequence[int]) -> "TreeAut":
        return cls(1, [perm])

    @classmethod
    def from_leaf_permutation(cls, perm: Sequence[int], level: int) -> "TreeAut":
        """
        Recover the portrait of an automorphism from its action on leaves.

        Raises ValueError if `perm` does not preserve the tree structure.

        """
        perm = [int(i) for i in perm]
        if len(perm) != 3**level:
            raise ValueError(
                f"A level {level} leaf permutation has {3**level} points, got {len(perm)}"
            )
        portrait = []
        for k in range(level):
            below = 3 ** (level - k - 1)
            for i in range(3**k):
                images = [
                    (perm[(3 * i + c) * below] // below) % 3 for c in range(3)
                ]
                if sorted(images) != [0, 1, 2]:
                    raise ValueError("Leaf permutation is not a tree automorphism")
                portrait.append(tuple(images))
        aut = cls(level, portrait)
        if list(aut.leaf_permutation()) != perm:
            raise ValueError("Leaf permutation is not a tree automorphism")
        return aut

    @classmethod
    def from_text(cls, text: str) -> "TreeAut":
        """
        Parse the canonical text form, e.g. "2 120 012 012 120".
        """
        tokens = text.split()
        if not tokens:
            raise ValueError("Empty automorphism text")
        level = int(tokens[0])
        return cls(level, [tuple(int(c) for c in tok) for tok in tokens[1:]])

    def to_text(self) -> str:
        return " ".join(
            [str(self.level)] + ["".join(str(c) for c in p) for p in self.portrait]
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, TreeAut):
            return NotImplemented
        return self.level == other.level and self.portrait == other.portrait

    def __hash__(self) -> int:
        return hash((self.level, self.portrait))

    def __repr__(self) -> str:
        return f"TreeAut({self.to_text()!r})"

    def __mul__(self, other: "TreeAut") -> "TreeAut":
        return self.compose(other)

    def __invert__(self) -> "TreeAut":
        return self.inverse()

    def __pow__(self, exponent: int) -> "TreeAut":
        base = self if exponent >= 0 else self.inverse()
        result = TreeAut.identity(self.level)
        for _ in range(abs(exponent)):
            result = result.compose(base)
        return result

    def is_identity(self) -> bool:
        return all(p == IDENTITY3 for p in self.portrait)

    def root(self) -> Perm3:
        if self.level == 0:
            raise ValueError("A level 0 automorphism has no root permutation")
        return self.portrait[0]

    def _portrait_array(self) -> np.ndarray:
        return np.array(self.portrait, dtype=np.int64).reshape(-1, 3)

    def _level_images(self) -> List[np.ndarray]:
        """
        Images of every vertex, level by level: entry k maps the base-3
        index of each level-k vertex to the index of its image.
        """
        table = self._portrait_array()
        images = [np.zeros(1, dtype=np.int64)]
        for k in range(self.level):
            rows = table[vertex_offset(k) : vertex_offset(k + 1)]
            images.append((3 * images[-1][:, None] + rows).reshape(-1))
        return images

    def leaf_permutation(self) -> np.ndarray:
        """
        The permutation of the 3^n leaves, as an array of leaf indices.
        """
        if self._leaves is None:
            leaves = self._level_images()[-1]
            leaves.setflags(write=False)
            self._leaves = leaves
        return self._leaves

    def apply(self, w: WordLike) -> Word:
        """
        Image of a word of length at most `level`, letter by letter.
        """
        w = as_word(w)
        if len(w) > self.level:
            raise ValueError(
                f"Word of length {len(w)} is longer than level {self.level}"
            )
        out = []
        vertex = 0
        for k, c in enumerate(w):
            out.append(self.portrait[vertex_offset(k) + vertex][c])
            vertex = 3 * vertex + c
        return tuple(out)

    def compose(self, other: "TreeAut") -> "TreeAut":
        """
        The automorphism "self, then other".
        """
        if self.level != other.level:
            raise ValueError(
                f"Cannot compose automorphisms of levels {self.level} and {other.level}"
            )
        images = self._level_images()
        portrait = []
        for k in range(self.level):
            off = vertex_offset(k)
            for i, target in enumerate(images[k]):
                portrait.append(
                    perm3_compose(self.portrait[off + i], other.portrait[off + int(target)])
                )
        return TreeAut(self.level, portrait)

    def inverse(self) -> "TreeAut":
        images = self._level_images()
        portrait: List[Optional[Perm3]] = [None] * len(self.portrait)
        for k in range(self.level):
            off = vertex_offset(k)
            for i, target in enumerate(images[k]):
                portrait[off + int(target)] = perm3_inverse(self.portrait[off + i])
        return TreeAut(self.level, portrait)

    def conjugate(self, g: "TreeAut") -> "TreeAut":
        """The conjugate g^-1 self g."""
        return g.inverse().compose(self).compose(g)

    def section(self, u: WordLike) -> "TreeAut":
        """
        The automorphism induced on the subtree below vertex u.
        """
        u = as_word(u)
        if len(u) >= self.level:
            raise ValueError(
                f"Vertex of length {len(u)} has no section at level {self.level}"
            )
        j, start = len(u), word_index(u)
        portrait = []
        for r in range(self.level - j):
            off = vertex_offset(j + r) + start * 3**r
            portrait.extend(self.portrait[off : off + 3**r])
        return TreeAut(self.level - j, portrait)

    def restrict(self, k: int) -> "TreeAut":
        if not 0 <= k <= self.level:
            raise ValueError(f"Cannot restrict a level {self.level} element to level {k}")
        return TreeAut(k, self.portrait[: vertex_offset(k)])

    def cycle_decomposition(self) -> List[Tuple[int, ...]]:
        """
        Disjoint leaf cycles. Each cycle starts at its smallest leaf and the
        cycles are sorted by that leaf, so the last entry of a cycle is the
        leaf mapped onto its smallest one.
        """
        perm = self.leaf_permutation()
        seen = np.zeros(len(perm), dtype=bool)
        cycles = []
        for start in range(len(perm)):
            if seen[start]:
                continue
            cycle = [start]
            seen[start] = True
            nxt = int(perm[start])
            while nxt != start:
                cycle.append(nxt)
                seen[nxt] = True
                nxt = int(perm[nxt])
            cycles.append(tuple(cycle))
        return cycles

    def cycle_structure(self) -> CycleStructure:
        return cycle_type(len(c) for c in self.cycle_decomposition())


def embed(a: TreeAut, n: int) -> TreeAut:
    """
    Iterate a -> (a, id, id) until the result has level n.
    """
    if n < a.level:
        raise ValueError(f"Cannot embed a level {a.level} element at level {n}")
    depth = n - a.level
    portrait = [IDENTITY3] * vertex_offset(depth)
    for r in range(a.level):
        row = list(a.portrait[vertex_offset(r) : vertex_offset(r + 1)])
        portrait.extend(row + [IDENTITY3] * (3 ** (depth + r) - 3**r))
    return TreeAut(n, portrait)


def wreath_decompose(a: TreeAut) -> Tuple[TreeAut, TreeAut, TreeAut, Perm3]:
    if a.level == 0:
        raise ValueError("A level 0 automorphism has no wreath decomposition")
    return a.section((0,)), a.section((1,)), a.section((2,)), a.root()


def wreath_compose(sections: Sequence[TreeAut], root: Sequence[int]) -> TreeAut:
    """
    Build (a0, a1, a2)root, which sends j*c to (j)root * (c)a_j.

    Arguments:
        sections: The three automorphisms acting below the children 0, 1, 2
        root: The permutation of the three children

    """
    if len(sections) != 3:
        raise ValueError("A wreath element needs exactly three sections")
    level = sections[0].level
    if any(s.level != level for s in sections):
        raise ValueError("Wreath sections must share a level")
    portrait = [_check_perm3(root)]
    for r in range(level):
        for s in sections:
            portrait.extend(s.portrait[vertex_offset(r) : vertex_offset(r + 1)])
    return TreeAut(level + 1, portrait)


def i_map(assignments: Dict[WordLike, Sequence[int]], a: TreeAut) -> TreeAut:
    """
    Extend `a` one level down: the leaf v*c goes to (v)a * (c)s_v, where s_v
    is the permutation assigned to the level-n vertex v (identity if absent).
    """
    bottom = [IDENTITY3] * 3**a.level
    for v, perm in assignments.items():
        v = as_word(v)
        if len(v) != a.level:
            raise ValueError(
                f"Assignment at vertex {v} is not on level {a.level}"
            )
        bottom[word_index(v)] = _check_perm3(perm)
    return TreeAut(a.level + 1, list(a.portrait) + bottom)


def _extend_cycles(a: TreeAut, perm: Perm3) -> TreeAut:
    assignments = {
        index_word(cycle[-1], a.level): perm for cycle in a.cycle_decomposition()
    }
    return i_map(assignments, a)


def splitting(a: TreeAut) -> TreeAut:
    return i_map({}, a)


def doubling(a: TreeAut) -> TreeAut:
    return _extend_cycles(a, SWAP01)


def tripling(a: TreeAut) -> TreeAut:
    return _extend_cycles(a, CYCLE3)


def random_aut(level: int, rng: np.random.Generator) -> TreeAut:
    """A uniformly random level-n automorphism."""
    return TreeAut(
        level,
        [tuple(int(c) for c in rng.permutation(3)) for _ in range(vertex_offset(level))],
    )
