from pathlib import Path

from tree_arden.langset import FiniteTreeSet
from tree_arden.trees import parse_tree

DATA = Path(__file__).parent / "data"


def T(text):
    """A tree from its text form."""
    return parse_tree(text)


def S(*texts, bound=None):
    """A tree set from the text forms of its members."""
    return FiniteTreeSet((parse_tree(t) for t in texts), bound=bound)
