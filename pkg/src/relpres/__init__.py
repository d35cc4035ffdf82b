"""Toolkit for one-relator relative presentations over torsion-free groups."""

from .rewriting import GroupDescriptor, Limits, complete
from .verdicts import Verdict
from .words import Alphabet, CyclicWord, FreeWord, RelativeWord

__all__ = ["Alphabet", "CyclicWord", "FreeWord", "GroupDescriptor", "Limits", "RelativeWord", "Verdict", "complete"]
__version__ = "0.1.0"
