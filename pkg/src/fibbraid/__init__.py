"""Fibonacci-anyon braiding, gate synthesis and coset CFT checks."""

__version__ = "0.1.0"
