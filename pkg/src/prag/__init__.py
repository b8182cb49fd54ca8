"""Compositional semantics for a controlled English fragment.

Phrases denote effectful computations; a discourse handler discharges the
anaphora, presupposition and scope effects into first-order formulas that
can be checked against finite models.
"""

__version__ = "0.1.0"
