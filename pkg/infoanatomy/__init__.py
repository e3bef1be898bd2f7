"""infoanatomy - Information anatomy of single observations in stationary processes."""

__version__ = "0.1.0"
