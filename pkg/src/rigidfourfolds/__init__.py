"""Recompute the classification of rigid hyperelliptic fourfolds with exact arithmetic."""

__version__ = "0.1.0"
