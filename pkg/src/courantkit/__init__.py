"""courantkit — exact-arithmetic calculator for twisted Courant algebroids.

Submodules:
  exact       rationals, sparse multivariate polynomials, exact linear algebra
  structure   algebroid data model: pairing, anchor, derivations, brackets
  kerforms    forms in the kernel of the anchor and the covariant derivative
  axioms      executable axiom suites with failure witnesses
  twist       constructors: standard bundle, point algebras, twists by 3-forms
  linfty      two-term homotopy Lie algebra packaging and verification
  cohomology  naive cochain complexes and Betti numbers
  dirac       isotropic/Lagrangean/integrable subbundles and induced algebroids
  fileio      JSON structure files and text syntax for forms
  cli         command-line front end
"""

from courantkit.exact import Scalar, Matrix, parse_scalar

__all__ = ["Scalar", "Matrix", "parse_scalar"]
__version__ = "0.1.0"
