"""Exact computations for nilpotent orbits, closed double cosets and
unramified Whittaker functions attached to the pair (GL_n, GL_p x GL_q)."""

__version__ = "0.1.0"
