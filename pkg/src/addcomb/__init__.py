"""Exact searches and verifiers for distinct-sum orderings, Latin cube
transversals, determinant/permanent identities, Nullstellensatz certificates
and restricted sumsets over prime fields."""

__version__ = "0.1.0"
