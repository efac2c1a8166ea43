"""Quantum opinion games: classical GM I/II/III and their Marinatto-Weber quantization."""

__version__ = "0.1.0"
