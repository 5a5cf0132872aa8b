"""Angle-constrained planar random walks.

Thin re-export of the compiled extension: simulation of the three walk
constructions and their limit processes, closed-form evaluators, and the
Monte Carlo helpers. See the project README for the full surface.
"""

from ._anglewalk import *  # noqa: F401,F403
from ._anglewalk import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"
