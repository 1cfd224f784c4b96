"""Positive words over x0, x1, x2, ... and their marked-forest representation.

Letters of a positive word are plain integers (``i`` stands for ``x_i``).
Words in the standard generators are sequences of :class:`GenLabel`.

A group element ``g`` is represented at width ``n`` by the marked forest
reached from :meth:`MarkedForest.identity` ``(n)``: following the edge
labelled ``a`` from the vertex ``a*h`` leads to ``h``, so
``forest(a*h) = act(a^-1)(forest(h))``.
"""

from __future__ import annotations

import re
from itertools import product
from typing import Iterable, Optional, Sequence

from .forest import GenLabel, MarkedForest, apply_generator

PositiveWord = Sequence[int]
NormalForm = tuple  # non-decreasing tuple of ints
GroupLetterWord = tuple  # tuple of GenLabel

_TOKEN = re.compile(r"^([xX])(\d+)$")


def parse_word(text: str) -> list[tuple[int, int]]:
    """Parse ``x<i>``/``X<i>`` tokens into ``(index, exponent)`` pairs."""
    out = []
    for tok in text.split():
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError(f"bad letter {tok!r}; expected x<i> or X<i>")
        out.append((int(m.group(2)), 1 if m.group(1) == "x" else -1))
    return out


def parse_positive_word(text: str) -> list[int]:
    letters = parse_word(text)
    if any(e < 0 for _, e in letters):
        raise ValueError("inverse letters are not allowed in a positive word")
    return [i for i, _ in letters]


def format_word(w: Iterable[int]) -> str:
    return " ".join(f"x{i}" for i in w)


def format_group_word(w: Iterable[GenLabel]) -> str:
    return " ".join(g.value for g in w)


def rewrite_step(w: Sequence[int], pos: int) -> Optional[tuple]:
    """Apply ``x_j x_i -> x_i x_{j+1}`` (``i < j``) at ``pos``, or return None."""
    j, i = w[pos], w[pos + 1]
    if i >= j:
        return None
    return tuple(w[:pos]) + (i, j + 1) + tuple(w[pos + 2 :])


def normalize(w: PositiveWord) -> NormalForm:
    """Normal form of a positive word: the non-decreasing equivalent word.

    Implemented as an insertion sort in which moving ``x_i`` left past a
    larger ``x_j`` shifts that letter to ``x_{j+1}``.
    """
    out: list[int] = []
    for letter in w:
        if letter < 0:
            raise ValueError("generator indices are nonnegative")
        pos = len(out)
        while pos > 0 and out[pos - 1] > letter:
            pos -= 1
            out[pos] += 1
        out.insert(pos, letter)
    return tuple(out)


def all_normal_forms_by_rewriting(w: Sequence[int]) -> set[tuple]:
    """Every irreducible word reachable by the rewriting rules, in any order."""
    seen = {tuple(w)}
    frontier = [tuple(w)]
    finals = set()
    while frontier:
        cur = frontier.pop()
        reducible = False
        for pos in range(len(cur) - 1):
            nxt = rewrite_step(cur, pos)
            if nxt is None:
                continue
            reducible = True
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
        if not reducible:
            finals.add(cur)
    return finals


def free_reduce(w: Iterable[GenLabel]) -> GroupLetterWord:
    out: list[GenLabel] = []
    for g in w:
        if out and out[-1] is g.inverse:
            out.pop()
        else:
            out.append(g)
    return tuple(out)


def expand_to_standard(w: PositiveWord) -> GroupLetterWord:
    """Rewrite ``x_i`` (i >= 2) as ``x0^-(i-1) x1 x0^(i-1)`` and freely reduce."""
    letters: list[GenLabel] = []
    for i in w:
        if i == 0:
            letters.append(GenLabel.X0)
        elif i == 1:
            letters.append(GenLabel.X1)
        else:
            letters.extend([GenLabel.X0_INV] * (i - 1))
            letters.append(GenLabel.X1)
            letters.extend([GenLabel.X0] * (i - 1))
    return free_reduce(letters)


def act_word(v: Optional[MarkedForest], word: Iterable[GenLabel], height_cap: Optional[int] = None) -> Optional[MarkedForest]:
    """Follow the path labelled ``word`` from ``v``; None if any step is undefined.

    Following the path of ``u`` from ``forest(g)`` lands on ``forest(u^-1 g)``.
    """
    for g in word:
        if v is None:
            return None
        v = apply_generator(v, g, height_cap)
    return v


def word_to_marked_forest(w: PositiveWord, n: int) -> Optional[MarkedForest]:
    """Marked forest with ``n`` leaves representing the positive element ``w``.

    None if ``n`` is too small for the element to be represented.
    """
    letters = expand_to_standard(w)
    v: Optional[MarkedForest] = MarkedForest.identity(n)
    # forest(a1 a2 ... am) = act(a1^-1)(... act(am^-1)(identity))
    inverse_path = tuple(g.inverse for g in reversed(letters))
    return act_word(v, inverse_path)


def peel(v: MarkedForest) -> list[int]:
    """Positive letters whose paths take ``v`` back to the identity forest.

    Emits ``x0`` once per step the marker sits right of the leftmost tree,
    then ``x_{j+1}`` to split the leftmost nontrivial tree ``T_j``.
    """
    letters = [0] * v.marker
    trees = list(v.trees)
    j = 0
    while j < len(trees):
        t = trees[j]
        if t.left is None:
            j += 1
            continue
        letters.append(j + 1)
        trees[j : j + 1] = [t.left, t.right]
    return letters


def marked_forest_to_word(v: MarkedForest) -> NormalForm:
    """Normal form of the positive element represented by ``v``."""
    return normalize(peel(v))


def positive_action_path(i: int) -> GroupLetterWord:
    """Path in standard letters whose effect is acting by ``x_i``."""
    return expand_to_standard([i])


# x1^(x0^2) = x1^(x0 x1) and x1^(x0^3) = x1^(x0^2 x1), with a^b = b^-1 a b
_X0, _X0i, _X1, _X1i = GenLabel.X0, GenLabel.X0_INV, GenLabel.X1, GenLabel.X1_INV
DEFINING_RELATIONS: tuple[tuple[GroupLetterWord, GroupLetterWord], ...] = (
    ((_X0i, _X0i, _X1, _X0, _X0), (_X1i, _X0i, _X1, _X0, _X1)),
    ((_X0i, _X0i, _X0i, _X1, _X0, _X0, _X0), (_X1i, _X0i, _X0i, _X1, _X0, _X0, _X1)),
)


def verify_defining_relations(n: int) -> bool:
    """Both sides of each defining relation act identically at width ``n``.

    Checked on every marked forest with ``n`` leaves where both paths are
    defined.
    """
    from .forest import enumerate_marked_forests

    for v in enumerate_marked_forests(n):
        for lhs, rhs in DEFINING_RELATIONS:
            a = act_word(v, lhs)
            b = act_word(v, rhs)
            if a is not None and b is not None and a != b:
                return False
    return True


def words_up_to(length: int, max_index: int) -> Iterable[tuple[int, ...]]:
    for L in range(length + 1):
        yield from product(range(max_index + 1), repeat=L)
