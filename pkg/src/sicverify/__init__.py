"""Exact verification of the sporadic SICs (qubit, Hesse, Hoggar) and their
links to the Eisenstein, Hurwitz and Cayley integers."""

__version__ = "0.1.0"
