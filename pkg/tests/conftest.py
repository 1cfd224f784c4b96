from hypothesis import strategies as st

from thompson_density.forest import LEAF, MarkedForest, Tree


def _trees(max_leaves: int):
    return st.recursive(st.just(LEAF), lambda sub: st.builds(Tree, sub, sub), max_leaves=max_leaves)


trees = _trees(12)


@st.composite
def marked_forests(draw, max_trees: int = 8):
    ts = draw(st.lists(trees, min_size=1, max_size=max_trees))
    marker = draw(st.integers(0, len(ts) - 1))
    return MarkedForest(ts, marker)


def nested(t: Tree):
    """Tree as nested tuples, for oracles that should not trust Tree itself."""
    return () if t.is_leaf else (nested(t.left), nested(t.right))
