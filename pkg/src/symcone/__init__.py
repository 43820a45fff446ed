"""Symmetric cones, their holomorphic function spaces, and a verification CLI."""

__version__ = "0.1.0"
