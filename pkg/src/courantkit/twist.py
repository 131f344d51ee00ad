"""Constructors: standard split bundle, point algebras, and twists by 3-forms.

The twist ansatz replaces the bracket by [φ,ψ]_B = [φ,ψ]₀ + B̃(φ,ψ) for a
certified 3-form B.  Its Jacobiator is governed by the curvature 4-form
H = D₀B − B̃² (the second summand reconstructed from the tilde-squared values
through the Λ⁴ Gram system; see curvature_H for the sign), and the twisted
structure is admissible exactly when D_B H = 0 — automatic whenever ker ρ
has rank at most 4, since B̃² and the relevant 5-forms both vanish there.

Base differential forms on ℚ[x1..xn] (used for pullbacks and the exact
twist family) are plain dictionaries {increasing variable tuple: Scalar}.
"""

from __future__ import annotations

from courantkit.exact import Matrix, ONE, Scalar, ZERO, wedge_indices
from courantkit.kerforms import (
    KerForm,
    _accumulate,
    eval_covariant,
    cov_derivative,
    tilde_split_basis,
    zero_form,
)
from courantkit.structure import (
    AlgebroidSpec,
    Section,
    SpecInvariantError,
    d0_generator,
    pairing,
)

BaseForm = dict[tuple[int, ...], Scalar]


# -- base differential forms ---------------------------------------------------


def base_form(entries: dict | None = None) -> BaseForm:
    out: BaseForm = {}
    for key, value in (entries or {}).items():
        _accumulate(out, key, value)
    return out


def de_rham(form: BaseForm, nvars: int) -> BaseForm:
    """Exterior derivative of a base form: d(f·dx_I) = Σⱼ ∂ⱼf·dxⱼ∧dx_I."""
    out: BaseForm = {}
    for key, value in form.items():
        for j in range(nvars):
            df = value.partial(j)
            if not df.is_zero():
                _accumulate(out, (j,) + key, df)
    return out


def base_contract(form: BaseForm, j: int) -> BaseForm:
    """Interior product ι_{∂ⱼ} of a base form."""
    out: BaseForm = {}
    for key, value in form.items():
        for pos, idx in enumerate(key):
            if idx == j:
                _accumulate(out, key[:pos] + key[pos + 1:],
                            value if pos % 2 == 0 else -value)
    return out


def pullback(spec: AlgebroidSpec, form: BaseForm, degree: int) -> KerForm:
    """Λ^p ρ* applied coefficientwise; lands in ker ρ̃ on valid structures."""
    if spec.is_point() or spec.anchor is None:
        if form:
            raise SpecInvariantError(
                "no nonzero base forms exist over this base")
        return zero_form(spec, degree)
    one_forms = [KerForm(spec, 1,
                         {(i,): c for i, c in enumerate(d0_generator(spec, j).coeffs)})
                 for j in range(spec.nvars)]
    total = zero_form(spec, degree)
    for key, value in form.items():
        if len(key) != degree:
            raise ValueError(f"base form term {key} has degree {len(key)}, "
                             f"expected {degree}")
        term = KerForm(spec, 0, {(): value})
        for j in key:
            term = term.wedge(one_forms[j])
        total = total + term
    return total


def pullback_4form(spec: AlgebroidSpec, h: BaseForm) -> KerForm:
    """Pull a base 4-form back to a twist candidate in Ω⁴(ker ρ)."""
    result = pullback(spec, h, 4)
    result.require_certified("pullback of the base 4-form")
    return result


def pullback_lemma_defect(spec: AlgebroidSpec, omega: BaseForm,
                          degree: int) -> KerForm:
    """D(ρ*ω) − ρ*(dω); zero on valid structures for every base p-form."""
    if degree + 1 > spec.rank:
        raise ValueError("degree + 1 exceeds the rank")
    lhs = cov_derivative(spec, pullback(spec, omega, degree))
    rhs = pullback(spec, de_rham(omega, spec.nvars), degree + 1)
    return lhs - rhs


# -- constructors ----------------------------------------------------------------


def make_standard(n: int) -> AlgebroidSpec:
    """The split bundle over ℚ[x1..xn]: basis ∂_1..∂_n, dx_1..dx_n.

    Pairing ⟨X+ξ, Y+η⟩ = η(X) + ξ(Y); all brackets of the constant basis
    sections vanish, and the extension rules generate the usual bracket
    [X+ξ, Y+η] = [X,Y] + L_X η − ι_Y dξ on polynomial sections.
    """
    if n < 1:
        raise ValueError("make_standard needs n >= 1")
    rank = 2 * n
    gram = Matrix([[ONE if abs(i - j) == n else ZERO for j in range(rank)]
                   for i in range(rank)])
    anchor = Matrix([[ONE if i == j else ZERO for j in range(n)]
                     for i in range(rank)])
    return AlgebroidSpec("polynomial", n, rank, gram, anchor, {}, None, "courant")


def make_point(rank: int, gram: Matrix,
               brackets: dict[tuple[int, int], Section],
               twist: KerForm | dict | None = None,
               kind: str = "courant") -> AlgebroidSpec:
    """A structure-constant algebra over a point.

    Over a point the symmetric part of the bracket must vanish, so the table
    is required to be skew ([eᵢ,eⱼ] = −[eⱼ,eᵢ], [eᵢ,eᵢ] = 0); non-skew
    tables are rejected.
    """
    table: dict[tuple[int, int], Section] = {}
    for (i, j), sec in brackets.items():
        if not isinstance(sec, Section):
            sec = Section.make(sec)
        table[(i, j)] = sec
    for (i, j), sec in table.items():
        if i == j and not sec.is_zero():
            raise SpecInvariantError(f"[e{i},e{i}] must vanish over a point")
        mirror = table.get((j, i), Section.zero(rank))
        if not (sec + mirror).is_zero():
            raise SpecInvariantError(
                f"bracket table is not skew at ({i},{j}) over a point")
    spec = AlgebroidSpec("point", 0, rank, gram, None, table, None, kind)
    if twist is not None:
        if isinstance(twist, dict):
            twist = KerForm(spec, 4, twist)
        else:
            twist = KerForm(spec, 4, twist.coeffs)
        spec.twist = twist
        spec.kind = "h-twisted"
    return spec


# -- the twist ansatz --------------------------------------------------------------


def btilde_table(spec: AlgebroidSpec, b: KerForm) -> list[list[Section]]:
    """B̃(eᵢ,eⱼ) on all basis pairs (skew in (i,j))."""
    r = spec.rank
    return [[tilde_split_basis(spec, b, (i, j)) for j in range(r)]
            for i in range(r)]


def btilde_apply(spec: AlgebroidSpec, table: list[list[Section]],
                 phi: Section, psi: Section) -> Section:
    """B̃(φ,ψ) by bilinear expansion over the cached basis table."""
    out = Section.zero(spec.rank)
    for i, fi in enumerate(phi.coeffs):
        if fi.is_zero():
            continue
        for j, gj in enumerate(psi.coeffs):
            if gj.is_zero():
                continue
            entry = table[i][j]
            if not entry.is_zero():
                out = out + entry.scale(fi * gj)
    return out


def btilde_squared_form(spec: AlgebroidSpec, b: KerForm) -> KerForm:
    """The 4-form whose splitting is B̃²(ψ₁,ψ₂,ψ₃) = B̃(B̃(ψ₁,ψ₂),ψ₃) + cycl.

    Values W(a,b,c,d) = ⟨B̃²(e_a,e_b,e_c), e_d⟩ are evaluated on increasing
    basis 4-tuples and solved back through the Λ⁴ Gram system.
    """
    table = btilde_table(spec, b)

    def w(a: int, b_: int, c: int, d: int) -> Scalar:
        total = ZERO
        for x, y, z in ((a, b_, c), (b_, c, a), (c, a, b_)):
            inner = table[x][y]
            outer = btilde_apply(spec, table, inner, Section.basis(z, spec.rank))
            total = total + pairing(spec, outer, Section.basis(d, spec.rank))
        return total

    values = {}
    target = wedge_indices(spec.rank, 4)
    for J in target:
        val = w(*J)
        if not val.is_zero():
            values[J] = val
    coeffs = {}
    for I in target:
        total = ZERO
        for J, val in values.items():
            weight = spec.inv_gram_minor(I, J)
            if not weight.is_zero():
                total = total + weight * val
        if not total.is_zero():
            coeffs[I] = total
    return KerForm(spec, 4, coeffs)


def curvature_H(spec0: AlgebroidSpec, b: KerForm) -> KerForm:
    """The Jacobiator 4-form of the twisted bracket: H = D₀B − B̃².

    The relative sign is forced by the Jacobiator identity: with the
    outer-first cyclic convention for B̃² the quadratic part of the twisted
    Jacobiator is −B̃² (expand [x,B̃(y,z)] − [B̃(x,y),z] − [y,B̃(x,z)] with
    all brackets replaced by B̃ and use skewness).  B̃² vanishes identically
    when the rank is at most 4, so the sign only matters from rank 5 up.
    """
    b.require_certified("twisting 3-form")
    return cov_derivative(spec0, b) - btilde_squared_form(spec0, b)


def twist_bracket(spec0: AlgebroidSpec, b: KerForm) -> AlgebroidSpec:
    """New structure with bracket [eᵢ,eⱼ]₀ + B̃(eᵢ,eⱼ) and twist H = D₀B + B̃²."""
    b.require_certified("twisting 3-form")
    if b.degree != 3:
        raise ValueError("the twisting form must have degree 3")
    table = btilde_table(spec0, b)
    new_table: dict[tuple[int, int], Section] = {}
    for i in range(spec0.rank):
        for j in range(spec0.rank):
            entry = spec0.table_bracket(i, j) + table[i][j]
            if not entry.is_zero():
                new_table[(i, j)] = entry
    h = curvature_H(spec0, b)
    twisted = AlgebroidSpec(spec0.ring, spec0.nvars, spec0.rank, spec0.gram,
                            spec0.anchor, new_table, None, "h-twisted")
    twisted.twist = KerForm(twisted, 4, h.coeffs)
    return twisted


def iota_btilde(spec: AlgebroidSpec, b: KerForm, form: KerForm) -> KerForm:
    """Degree-+1 insertion of B̃ into a form: the bracket-sum of the
    covariant-derivative formula with B̃ in place of the bracket and no
    anchor terms."""
    table = btilde_table(spec, b)
    return eval_covariant(spec, form, lambda i, j: table[i][j], use_anchor=False)


def integrability_defect(spec0: AlgebroidSpec, b: KerForm) -> KerForm:
    """D_B H, the covariant derivative of the curvature in the twisted
    structure; zero iff the twist ansatz yields an admissible structure."""
    twisted = twist_bracket(spec0, b)
    return cov_derivative(twisted, twisted.twist)


def integrability_expansion(spec0: AlgebroidSpec, b: KerForm) -> KerForm:
    """Three-term expansion of D_B H, assembled from the insertion machinery
    independently of the direct evaluation.

    With D_B = D₀ + ι_B̃ on forms, D₀² = 0, and H = D₀B − B̃²:
    D_B H = ι_B̃(D₀B) − D₀(B̃²) − ι_B̃(B̃²).
    """
    b2 = btilde_squared_form(spec0, b)
    d0b = cov_derivative(spec0, b)
    return (iota_btilde(spec0, b, d0b)
            - cov_derivative(spec0, b2)
            - iota_btilde(spec0, b, b2))


def c_twist(n: int, c3: BaseForm) -> AlgebroidSpec:
    """The exact twist family: the standard bundle twisted by B = Λ³ρ*(C).

    The bracket gains ι_Y ι_X C on vector parts and the twist is the pullback
    of dC; for closed C the twist vanishes and the structure stays untwisted.
    """
    if n < 3:
        raise ValueError("c_twist needs n >= 3 for a base 3-form")
    spec0 = make_standard(n)
    b = pullback(spec0, c3, 3)
    return twist_bracket(spec0, b)
