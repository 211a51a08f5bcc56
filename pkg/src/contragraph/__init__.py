"""Contradiction graphs of finite binary concept classes and cube-trace certificates."""

__version__ = "0.1.0"
