"""Exact and numeric toolkit for planar pentapod classification and
Duporcq self-motion construction."""

__version__ = "0.1.0"

__all__ = ["exactpoly", "geometry", "moebius", "study", "selfmotion", "cli"]
