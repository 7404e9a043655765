"""Murmuration densities for elliptic curves ordered by naive height.

Computes empirical windowed averages of eps(E) a_n(E) over curves and the
predicted density built from local factors and a Bessel series.
"""

import os

# the TBB layer shipped with some numba builds is too old and warns on import;
# workqueue is always available
os.environ.setdefault("NUMBA_THREADING_LAYER", "workqueue")

__version__ = "0.1.0"
