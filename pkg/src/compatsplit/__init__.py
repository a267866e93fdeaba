"""compatsplit: exact computation of compatible-splitting obstructions.

Computes Ext groups of finite-dimensional modules over finite-dimensional
algebras over prime fields, the obstruction groups that decide when maps of
split short exact sequences can be split compatibly, and the supporting
relative-homological machinery (bar resolutions, relative Ext, the
collapse spectral sequence, six-term duality).
"""

__version__ = "0.1.0"

from .kernels import BACKEND

__all__ = ["BACKEND", "__version__"]
