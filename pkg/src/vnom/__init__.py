"""Vertex nomination on attributed graph pairs.

Exact small-instance ranking oracles (``oracle``) over enumerable pair
distributions (``models``), and a spectral-embedding + GMM nomination
pipeline (``spectral``, ``nominate``) with an experiment harness
(``harness``, ``cli``).
"""

__version__ = "0.1.0"
