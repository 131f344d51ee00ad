"""The covariant derivative on kernel forms and its square.

Forms in the kernel of the anchor carry a degree-1 derivative D defined
through the pairing.  It satisfies the graded Leibniz rule, commutes with
pullback (D∘ρ* = ρ*∘d), and its square is not zero but exactly the
insertion of the twist — degree by degree.
"""

from courantkit.exact import Scalar
from courantkit.kerforms import (
    KerForm,
    basis_wedge_form,
    cov_derivative,
    d_squared,
    ins_h,
    kerform_basis,
    leibniz_defect,
)
from courantkit.twist import base_form, c_twist, de_rham, make_standard, pullback

x = Scalar.variable

print("== pullback compatibility on the standard bundle ==")
std2 = make_standard(2)
omega = base_form({(1,): x(0)})            # x1 dx2
lhs = cov_derivative(std2, pullback(std2, omega, 1))
rhs = pullback(std2, de_rham(omega, 2), 2)
print("  D(ρ* x1·dx2) =", lhs)
print("  ρ*(d x1·dx2) =", rhs)
print("  equal:", lhs == rhs)

print("\n== the twisted square ==")
spec = c_twist(4, base_form({(1, 2, 3): x(0)}))
f = KerForm(spec, 0, {(): x(0) * x(1)})
print("  D²(x1x2) =", d_squared(spec, f), "(functions always square to zero)")
dx4 = basis_wedge_form(spec, (7,))
print("  D²(dx4)     =", d_squared(spec, dx4))
print("  ins_H(dx4)  =", ins_h(spec, dx4))
print("  equal:", d_squared(spec, dx4) == ins_h(spec, dx4))

print("\n== D² is an even derivation, checked on a wedge ==")
one_forms = kerform_basis(spec, 1, max_degree=0)
a = one_forms[0].wedge(one_forms[1])
b = one_forms[2]
lhs = d_squared(spec, a.wedge(b))
rhs = d_squared(spec, a).wedge(b) + a.wedge(d_squared(spec, b))
print("  D²(α∧β) == D²α∧β + α∧D²β:", lhs == rhs)

print("\n== graded Leibniz rule for D itself ==")
print("  defect is zero:", leibniz_defect(spec, a, b).is_zero())
