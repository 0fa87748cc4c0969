"""Exact BSD data for 2-isogenous elliptic curves over Q and their quadratic twists."""

from .model import WeierstrassModel, quadratic_twist
from .report import verify_pair

__all__ = ["WeierstrassModel", "quadratic_twist", "verify_pair"]
__version__ = "0.1.0"
