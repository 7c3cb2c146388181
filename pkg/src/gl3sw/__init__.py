"""Exact Serre-weight combinatorics for GL3.

Subpackage map:
  weyl       extended affine Weyl group, lengths, Bruhat orders, admissible sets
  laurent    Laurent polynomials/matrices and the matrix embedding
  alcove     p-alcove geometry, presentations, extension-graph coordinates
  weightsets Jordan-Holder sets of Deligne-Lusztig reductions, covering order
  classify   specialization pairs, simple-walk engine, six-case classification
  shapes     Iwahori double-coset decomposition and chart matrices
  algebra    polynomials over F_p, Groebner engine, chart-table verification
  cli        batch command-line front end
"""

__version__ = "0.1.0"
