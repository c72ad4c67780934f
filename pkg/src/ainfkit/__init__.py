"""Exact-arithmetic kernel for curved strictly unital A-infinity algebras,
their adjoint algebras, module functors, and homotopy obstruction theory.

All verdicts are relative to explicit weight/arity caps and all arithmetic is
exact (integers, rationals, modular integers, polynomials); there are no
floating point numbers and no tolerances anywhere.
"""

__version__ = "0.1.0"
