"""
Weighted Brunn-Minkowski Toolkit.

Evaluates first- and second-order mixed measures of convex bodies under
weighted measures and numerically verifies (or falsifies) Minkowski-type,
Fenchel-type, supermodularity and log-submodularity inequalities.
"""

__version__ = "0.1.0"
__title__ = "Weighted Brunn-Minkowski Toolkit"
__description__ = "Mixed measures and inequality verification for weighted convex geometry"
