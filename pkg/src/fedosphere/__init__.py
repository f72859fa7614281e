"""Exact verification engine for deformation quantization of T*S^2."""

__version__ = "0.1.0"
