"""Exact circle-method computations over F_q[t] and Morgenstern Ramanujan graphs."""

__version__ = "0.1.0"
