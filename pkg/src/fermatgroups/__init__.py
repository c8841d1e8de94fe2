"""Fundamental groups of Fermat line arrangement complements.

Finitely presented groups for the complements of the arrangements
x^n = y^n, y^n = z^n, z^n = x^n (all 3n lines together), built exactly from
the braid-monodromy derivation, plus an independent numerical verification
pipeline (puncture tracking -> braid word -> induced free automorphism) and
computable group invariants for comparing the results.
"""

__version__ = "0.1.0"
