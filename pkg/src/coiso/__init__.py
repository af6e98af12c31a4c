"""Exact constructions and checks for coisotropic triples of finite-dimensional algebras."""
from .report import CoisoError, Report

__version__ = "0.1.0"

__all__ = ["CoisoError", "Report", "__version__"]
