"""Rooted binary trees, forests and marked forests.

Marked forests with ``n`` leaves are the vertices of the finite subgraphs of
the left Cayley graph of F studied in this package.  The generators act on
them partially; :func:`apply_generator` returns ``None`` where an action is
not defined.
"""

from __future__ import annotations

import enum
import math
import struct
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Sequence


class Tree:
    """Immutable rooted binary tree.

    ``Tree()`` is the trivial tree (a single leaf); ``Tree(left, right)`` is a
    caret over two subtrees.  Leaf count and height are cached.
    """

    __slots__ = ("left", "right", "leaves", "height", "_hash")

    def __init__(self, left: Optional["Tree"] = None, right: Optional["Tree"] = None):
        if (left is None) != (right is None):
            raise ValueError("a caret needs both subtrees")
        self.left = left
        self.right = right
        if left is None:
            self.leaves = 1
            self.height = 0
            self._hash = 0x51ED
        else:
            self.leaves = left.leaves + right.leaves
            self.height = max(left.height, right.height) + 1
            self._hash = hash((left._hash, right._hash))

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    @property
    def carets(self) -> int:
        return self.leaves - 1

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Tree) or self._hash != other._hash:
            return False
        if self.leaves != other.leaves or self.height != other.height:
            return False
        if self.left is None:
            return other.left is None
        return self.left == other.left and self.right == other.right

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Tree") -> bool:
        return self.sort_key() < other.sort_key()

    def sort_key(self) -> tuple:
        if self.left is None:
            return (1,)
        return (self.leaves, self.left.sort_key(), self.right.sort_key())

    def __repr__(self) -> str:
        return f"Tree.parse({str(self)!r})"

    def __str__(self) -> str:
        if self.left is None:
            return "."
        return f"({self.left}^{self.right})"

    @staticmethod
    def parse(text: str) -> "Tree":
        """Parse the ``str`` form: ``.`` is a leaf, ``(L^R)`` a caret."""
        text = text.replace(" ", "")
        tree, pos = _parse_tree(text, 0)
        if pos != len(text):
            raise ValueError(f"trailing characters in tree {text!r}")
        return tree

    def bits(self) -> list[int]:
        """Preorder bit encoding: caret = 1, then left, then right; leaf = 0."""
        out: list[int] = []
        stack = [self]
        while stack:
            t = stack.pop()
            if t.left is None:
                out.append(0)
            else:
                out.append(1)
                stack.append(t.right)
                stack.append(t.left)
        return out


def _parse_tree(text: str, pos: int) -> tuple[Tree, int]:
    if pos >= len(text):
        raise ValueError("unexpected end of tree text")
    if text[pos] == ".":
        return LEAF, pos + 1
    if text[pos] != "(":
        raise ValueError(f"unexpected {text[pos]!r} at {pos}")
    left, pos = _parse_tree(text, pos + 1)
    if text[pos : pos + 1] != "^":
        raise ValueError(f"expected '^' at {pos}")
    right, pos = _parse_tree(text, pos + 1)
    if text[pos : pos + 1] != ")":
        raise ValueError(f"expected ')' at {pos}")
    return Tree(left, right), pos + 1


LEAF = Tree()
CARET = Tree(LEAF, LEAF)


def height(t: Tree) -> int:
    return t.height


def catalan(n: int) -> int:
    """The n-th Catalan number (2n)! / (n! (n+1)!)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return math.comb(2 * n, n) // (n + 1)


@lru_cache(maxsize=None)
def _trees(leaves: int, max_height: int) -> tuple[Tree, ...]:
    if leaves == 1:
        return (LEAF,)
    if max_height == 0:
        return ()
    out = []
    for left_leaves in range(1, leaves):
        rights = _trees(leaves - left_leaves, max_height - 1)
        if not rights:
            continue
        for left in _trees(left_leaves, max_height - 1):
            for right in rights:
                out.append(Tree(left, right))
    return tuple(out)


def enumerate_trees(leaves: int, max_height: Optional[int] = None) -> tuple[Tree, ...]:
    """All trees with exactly ``leaves`` leaves and height at most ``max_height``.

    Ordered by the leaf count of the left subtree, then recursively by left
    and right subtrees.  ``max_height=None`` means unbounded.
    """
    if leaves < 1:
        return ()
    if max_height is None or max_height >= leaves - 1:
        max_height = leaves - 1
    return _trees(leaves, max_height)


def tree_counts(max_leaves: int, max_height: Optional[int]) -> list[int]:
    """``counts[s]`` = number of trees with ``s`` leaves and bounded height."""
    return [0] + [len(enumerate_trees(s, max_height)) for s in range(1, max_leaves + 1)]


class Forest(tuple):
    """Nonempty ordered tuple of trees."""

    __slots__ = ()

    def __new__(cls, trees: Iterable[Tree]):
        self = super().__new__(cls, trees)
        if not self:
            raise ValueError("a forest has at least one tree")
        return self

    @property
    def leaves(self) -> int:
        return sum(t.leaves for t in self)

    def __repr__(self) -> str:
        return "Forest[" + ", ".join(str(t) for t in self) + "]"


class MarkedForest:
    """A forest together with the index of its marked tree."""

    __slots__ = ("trees", "marker", "_hash")

    def __init__(self, trees: Sequence[Tree], marker: int = 0):
        trees = tuple(trees)
        if not trees:
            raise ValueError("a forest has at least one tree")
        if not 0 <= marker < len(trees):
            raise ValueError(f"marker {marker} out of range for {len(trees)} trees")
        self.trees = trees
        self.marker = marker
        self._hash = hash((trees, marker))

    @classmethod
    def identity(cls, n: int) -> "MarkedForest":
        """``n`` trivial trees, marker on the leftmost one."""
        if n < 1:
            raise ValueError("width must be positive")
        return cls((LEAF,) * n, 0)

    @classmethod
    def parse(cls, text: str) -> "MarkedForest":
        """Parse whitespace-separated trees; the marked one carries a ``*`` suffix."""
        trees, marker = [], None
        for i, tok in enumerate(text.split()):
            if tok.endswith("*"):
                if marker is not None:
                    raise ValueError("more than one marked tree")
                marker = i
                tok = tok[:-1]
            trees.append(Tree.parse(tok))
        return cls(trees, 0 if marker is None else marker)

    @property
    def forest(self) -> Forest:
        return Forest(self.trees)

    @property
    def leaves(self) -> int:
        return sum(t.leaves for t in self.trees)

    @property
    def marked_tree(self) -> Tree:
        return self.trees[self.marker]

    def __len__(self) -> int:
        return len(self.trees)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MarkedForest):
            return NotImplemented
        return self._hash == other._hash and self.marker == other.marker and self.trees == other.trees

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return " ".join(str(t) + ("*" if i == self.marker else "") for i, t in enumerate(self.trees))

    def __repr__(self) -> str:
        return f"MarkedForest.parse({str(self)!r})"


class GenLabel(enum.Enum):
    X0 = "x0"
    X0_INV = "X0"
    X1 = "x1"
    X1_INV = "X1"
    X2 = "x2"
    X2_INV = "X2"

    @property
    def inverse(self) -> "GenLabel":
        return _INVERSES[self]

    @property
    def index(self) -> int:
        return int(self.value[1:])

    @property
    def is_inverse(self) -> bool:
        return self.value[0] == "X"

    @classmethod
    def from_token(cls, token: str) -> "GenLabel":
        return cls(token)

    def __str__(self) -> str:
        return self.value


_INVERSES = {
    GenLabel.X0: GenLabel.X0_INV,
    GenLabel.X0_INV: GenLabel.X0,
    GenLabel.X1: GenLabel.X1_INV,
    GenLabel.X1_INV: GenLabel.X1,
    GenLabel.X2: GenLabel.X2_INV,
    GenLabel.X2_INV: GenLabel.X2,
}


def apply_generator(v: MarkedForest, g: GenLabel, height_cap: Optional[int] = None) -> Optional[MarkedForest]:
    """Follow the edge labelled ``g`` from ``v`` in the left Cayley graph.

    Returns ``None`` when the move is not defined.  ``height_cap = k`` restricts
    the caret-adding moves (``x1^-1``, ``x2^-1``) to trees of height at most
    ``k - 1`` so the result stays in BB(n, k).
    """
    trees, i = v.trees, v.marker
    if g is GenLabel.X0:
        return MarkedForest(trees, i - 1) if i > 0 else None
    if g is GenLabel.X0_INV:
        return MarkedForest(trees, i + 1) if i + 1 < len(trees) else None
    if g is GenLabel.X1:
        t = trees[i]
        if t.left is None:
            return None
        return MarkedForest(trees[:i] + (t.left, t.right) + trees[i + 1 :], i)
    if g is GenLabel.X1_INV:
        return _merge(trees, i, i, height_cap)
    if g is GenLabel.X2:
        if i + 1 >= len(trees):
            return None
        t = trees[i + 1]
        if t.left is None:
            return None
        return MarkedForest(trees[: i + 1] + (t.left, t.right) + trees[i + 2 :], i)
    if g is GenLabel.X2_INV:
        return _merge(trees, i + 1, i, height_cap)
    raise TypeError(f"not a generator label: {g!r}")


def _merge(trees: tuple, j: int, marker: int, height_cap: Optional[int]) -> Optional[MarkedForest]:
    if j + 1 >= len(trees):
        return None
    a, b = trees[j], trees[j + 1]
    if height_cap is not None and (a.height >= height_cap or b.height >= height_cap):
        return None
    return MarkedForest(trees[:j] + (Tree(a, b),) + trees[j + 2 :], marker)


def enumerate_forests(n: int, k: Optional[int] = None) -> Iterator[tuple[Tree, ...]]:
    """Unmarked forests with ``n`` leaves whose trees have height at most ``k``.

    The first tree varies slowest: by leaf count ascending, then in
    :func:`enumerate_trees` order.
    """
    if n < 1:
        return
    yield from _forests(n, k)


def _forests(n: int, k: Optional[int]) -> Iterator[tuple[Tree, ...]]:
    if n == 0:
        yield ()
        return
    for size in range(1, n + 1):
        firsts = enumerate_trees(size, k)
        if not firsts:
            continue
        for rest in _forests(n - size, k):
            for t in firsts:
                yield (t,) + rest


def enumerate_marked_forests(n: int, k: Optional[int] = None) -> Iterator[MarkedForest]:
    """Stream the Belk-Brown set BB(n, k), markers ascending within each forest."""
    for trees in enumerate_forests(n, k):
        for i in range(len(trees)):
            yield MarkedForest(trees, i)


def count_forests(n: int, k: Optional[int] = None) -> int:
    return sum(1 for _ in enumerate_forests(n, k))


def count_marked_forests(n: int, k: Optional[int] = None) -> int:
    return sum(len(trees) for trees in enumerate_forests(n, k))


# canonical_key layout (all integers unsigned big-endian):
#   u32 tree count | u32 marker | u32 body bit length | body
# The body concatenates Tree.bits() of every tree left to right, packed
# MSB-first and zero-padded to a whole byte.
_HEADER = struct.Struct(">III")


def canonical_key(v: MarkedForest) -> bytes:
    bits: list[int] = []
    for t in v.trees:
        bits.extend(t.bits())
    nbits = len(bits)
    value = 0
    for b in bits:
        value = (value << 1) | b
    pad = (-nbits) % 8
    body = (value << pad).to_bytes((nbits + pad) // 8, "big") if nbits else b""
    return _HEADER.pack(len(v.trees), v.marker, nbits) + body


def decode_key(key: bytes) -> MarkedForest:
    count, marker, nbits = _HEADER.unpack_from(key)
    body = key[_HEADER.size :]
    if len(body) != (nbits + 7) // 8:
        raise ValueError("key body length does not match header")
    value = int.from_bytes(body, "big") >> (len(body) * 8 - nbits) if nbits else 0
    bits = [(value >> (nbits - 1 - i)) & 1 for i in range(nbits)]
    pos = 0

    def read() -> Tree:
        nonlocal pos
        if pos >= nbits:
            raise ValueError("truncated key body")
        b = bits[pos]
        pos += 1
        if b == 0:
            return LEAF
        left = read()
        return Tree(left, read())

    trees = [read() for _ in range(count)]
    if pos != nbits:
        raise ValueError("trailing bits in key body")
    return MarkedForest(trees, marker)
