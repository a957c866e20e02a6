"""Deque and parallel-stack sorting: exact enumeration and series analysis."""

__version__ = "0.1.0"
