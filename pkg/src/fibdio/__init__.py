"""Exact and certified tools for Diophantine equations in Fibonacci numbers."""

from .sequences import KBonacciGenerator, dominant_root, fib, kbona_decompose, kfib, lucas

__version__ = "0.1.0"

__all__ = ["KBonacciGenerator", "dominant_root", "fib", "kbona_decompose", "kfib", "lucas"]
