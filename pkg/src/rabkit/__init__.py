"""Universal groups of semiregular right-angled buildings, computed on finite balls."""
from .chambers import BASE, Building
from .colouring import LegalColouring
from .diagram import INF, Diagram
from .permgroups import PermGroup
from .universal import LocalData

__all__ = ["BASE", "Building", "Diagram", "INF", "LegalColouring", "LocalData", "PermGroup"]
