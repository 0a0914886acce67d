"""Exact deformation quantization toolkit for the solvable chart of the
complex unit ball.

All arithmetic is exact (rational or Gaussian rational); every check in
the package either passes identically or reports a nonzero residual.
"""

__version__ = "0.1.0"
