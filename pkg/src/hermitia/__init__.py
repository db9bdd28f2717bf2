"""Left-invariant Hermitian geometry: structure constants, the canonical connections D^r_s and their curvature."""

__version__ = "0.1.0"
