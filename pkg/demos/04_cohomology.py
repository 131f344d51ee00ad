"""Naive cohomology over a point, and an honest ambiguity report.

Over a point the cochain complex is finite-dimensional: cochains are the
kernel forms annihilating the twist, the differential is the covariant
derivative, and Betti numbers come from exact rational elimination.

There are two inequivalent readings of "annihilating the twist" once the
rank reaches 5; the package computes both, reports disagreement, and hard-
fails (rather than projecting) if the differential leaves the chosen space.
"""

import random

from courantkit.cohomology import (
    CochainEscapeError,
    betti,
    cochain_basis,
    complex_summary,
    differential_matrix,
    readings_agree,
    weak_kernel_dimension,
)
from courantkit.exact import Matrix, ONE, Scalar, ZERO
from courantkit.kerforms import KerForm, basis_wedge_form
from courantkit.rand import rand_wedge_coeffs
from courantkit.structure import Section
from courantkit.twist import make_point, twist_bracket

print("== so(3): the classical answer ==")
e = lambda k: Section.basis(k, 3)
table = {}
for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    table[(i, j)] = e(k)
    table[(j, i)] = e(k).scale(Scalar.rational(-1))
so3 = make_point(3, Matrix.identity(3), table)
print("  dims:", [len(cochain_basis(so3, p)) for p in range(4)])
print("  betti:", betti(so3, 3), "   (one class at the bottom, one at the top)")

print("\n== abelian rank 4: binomial coefficients ==")
gram = Matrix([[ONE if i == j and i < 2 else
                (Scalar.rational(-1) if i == j else ZERO)
                for j in range(4)] for i in range(4)])
split4 = make_point(4, gram, {})
print("  betti:", betti(split4, 4))

print("\n== a twist with zero curvature still changes the bracket ==")
twisted = twist_bracket(split4, basis_wedge_form(split4, (0, 1, 2)))
print("  summary:", complex_summary(twisted, 4))

print("\n== rank 5: the two readings of the cochain condition ==")
g5 = Matrix([[ONE if i == j and i < 3 else
              (Scalar.rational(-1) if i == j else ZERO)
              for j in range(5)] for i in range(5)])
ab5 = make_point(5, g5, {})
rng = random.Random(0)
b = KerForm(ab5, 3, rand_wedge_coeffs(rng, ab5, 3))
tw5 = twist_bracket(ab5, b)
print("  twist is nonzero:", not tw5.twist.is_zero())
for p in range(4):
    strict = len(cochain_basis(tw5, p))
    weak = weak_kernel_dimension(tw5, p)
    marker = "" if readings_agree(tw5, p) else "   <-- readings differ"
    print(f"  degree {p}: slotwise dim {strict}, insertion-kernel dim {weak}{marker}")
print("  the differential refuses to project when the slotwise space")
print("  is not preserved:")
try:
    differential_matrix(tw5, 1)
except CochainEscapeError as exc:
    print("   ", exc)
