"""scoremap: parametric algorithmic composition engine.

Parameterized fractal generators (Julia orbits and plots, iterated
function systems, Lindenmayer systems) produce piano-roll scores.  An
N-dimensional Hilbert index flattens each generator's parameter space
onto 2-D feature-colored maps that can be zoomed and queried, and a
coordinate-wise A/B search descends to sweet spots in that space.
"""

# Stamped into map-tile cache keys: bump whenever generator or indexing
# semantics change, so stale tiles are never served.
ENGINE_VERSION = "scoremap-0.1.0"

__version__ = "0.1.0"
