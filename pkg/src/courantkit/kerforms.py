"""Forms in the kernel of the anchor and the exterior covariant derivative.

A KerForm of degree p is an element of Λ^p of the module, stored as Scalar
coefficients on strictly increasing basis wedges e_{i1}∧…∧e_{ip}.  Membership
in Ω^p (the kernel of the alternating anchor extension ρ̃) is certified by a
symbolic check, lazily, and cached.

Forms evaluate through the Gram pairing (multivector convention): the value
of α on a wedge of sections is the determinant pairing ⟨α, ψ1∧…∧ψp⟩.  The
covariant derivative is defined by its pairings with all basis wedges,

  ⟨Dα, ψ0∧…∧ψp⟩ = Σᵢ (−1)ⁱ ρ(ψᵢ)⟨α, …ψ̂ᵢ…⟩ + Σ_{i<j} (−1)^{i+j} ⟨α, [ψᵢ,ψⱼ]∧…⟩

and solved back through the Λ-Gram system, whose inverse is the compound
matrix of gram⁻¹ (Cauchy–Binet), so no large matrix inversions occur.

D² is generally nonzero; on twisted structures it equals the degree-2
derivation ins_h built from slotwise insertion of the twist.
"""

from __future__ import annotations

import itertools
from typing import Callable, Sequence

from courantkit.exact import Matrix, ONE, Scalar, ZERO, wedge_indices
from courantkit.structure import (
    AlgebroidSpec,
    Section,
    SpecInvariantError,
    apply_vector_field,
)

Wedge = tuple[int, ...]


class UncertifiedFormError(ValueError):
    """An operation required a form certified to lie in ker ρ̃."""


def _sort_wedge(indices: Sequence[int]) -> tuple[Wedge, int]:
    """Sort indices, returning (sorted tuple, sign); sign 0 on duplicates."""
    idx = list(indices)
    sign = 1
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(idx, idx[1:]):
        if a == b:
            return tuple(idx), 0
    return tuple(idx), sign


def _accumulate(acc: dict[Wedge, Scalar], indices: Sequence[int], value: Scalar) -> None:
    if value.is_zero():
        return
    key, sign = _sort_wedge(indices)
    if sign == 0:
        return
    term = value if sign > 0 else -value
    prev = acc.get(key)
    acc[key] = term if prev is None else prev + term


class KerForm:
    """Degree-p multivector with coefficients on increasing basis wedges."""

    __slots__ = ("spec", "degree", "coeffs", "_certified")

    def __init__(self, spec: AlgebroidSpec, degree: int,
                 coeffs: dict[Wedge, Scalar] | None = None):
        if degree < 0:
            raise ValueError("form degree must be >= 0")
        canonical: dict[Wedge, Scalar] = {}
        for key in sorted(coeffs or {}):
            value = coeffs[key]
            if value.is_zero():
                continue
            if len(key) != degree or any(a >= b for a, b in zip(key, key[1:])):
                raise ValueError(f"wedge indices {key} are not strictly "
                                 f"increasing of length {degree}")
            if key and (key[0] < 0 or key[-1] >= spec.rank):
                raise ValueError(f"wedge indices {key} out of range for rank {spec.rank}")
            if value.max_var_index >= spec.nvars:
                raise SpecInvariantError(
                    "form coefficient uses more variables than the base ring has")
            canonical[key] = value
        self.spec = spec
        self.degree = degree
        self.coeffs = canonical
        self._certified: bool | None = None

    # -- membership ------------------------------------------------------

    @property
    def certified(self) -> bool:
        """True iff ρ̃(form) = 0, checked symbolically (cached)."""
        if self._certified is None:
            if self.degree == 0:
                self._certified = True
            else:
                image = rho_tilde(self.spec, self)
                self._certified = not image
        return self._certified

    def require_certified(self, what: str = "form") -> None:
        if not self.certified:
            raise UncertifiedFormError(
                f"{what} of degree {self.degree} is not in ker ρ̃")

    # -- algebra -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        if not isinstance(other, KerForm):
            return NotImplemented
        return self.degree == other.degree and self.coeffs == other.coeffs

    def __add__(self, other: "KerForm") -> "KerForm":
        self._check_mate(other)
        out = dict(self.coeffs)
        for key, value in other.coeffs.items():
            prev = out.get(key)
            out[key] = value if prev is None else prev + value
        return KerForm(self.spec, self.degree, out)

    def __sub__(self, other: "KerForm") -> "KerForm":
        return self + other.scale(Scalar.rational(-1))

    def __neg__(self) -> "KerForm":
        return self.scale(Scalar.rational(-1))

    def scale(self, f: Scalar) -> "KerForm":
        return KerForm(self.spec, self.degree,
                       {k: f * v for k, v in self.coeffs.items()})

    def wedge(self, other: "KerForm") -> "KerForm":
        if other.spec is not self.spec:
            raise ValueError("wedge of forms over different structures")
        out: dict[Wedge, Scalar] = {}
        for ka, va in self.coeffs.items():
            for kb, vb in other.coeffs.items():
                _accumulate(out, ka + kb, va * vb)
        return KerForm(self.spec, self.degree + other.degree, out)

    def _check_mate(self, other: "KerForm") -> None:
        if other.spec is not self.spec:
            raise ValueError("forms belong to different structures")
        if other.degree != self.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")

    def as_section(self) -> Section:
        """View a degree-1 form as the section with the same coefficients."""
        if self.degree != 1:
            raise ValueError("only degree-1 forms are sections")
        out = [ZERO] * self.spec.rank
        for (i,), value in self.coeffs.items():
            out[i] = value
        return Section(tuple(out))

    def as_scalar(self) -> Scalar:
        if self.degree != 0:
            raise ValueError("only degree-0 forms are scalars")
        return self.coeffs.get((), ZERO)

    def to_entries(self) -> list[dict]:
        return [{"indices": list(key), "coeff": value.to_text()}
                for key, value in self.coeffs.items()]

    def __repr__(self) -> str:
        if not self.coeffs:
            return f"KerForm(0; degree {self.degree})"
        body = " + ".join(
            f"({v.to_text()})·e{'∧e'.join(str(i) for i in k)}" if k
            else f"({v.to_text()})"
            for k, v in self.coeffs.items())
        return f"KerForm({body})"


def zero_form(spec: AlgebroidSpec, degree: int) -> KerForm:
    return KerForm(spec, degree, {})


def scalar_form(spec: AlgebroidSpec, value: Scalar) -> KerForm:
    return KerForm(spec, 0, {(): value})


def basis_wedge_form(spec: AlgebroidSpec, indices: Sequence[int],
                     coeff: Scalar = ONE) -> KerForm:
    key, sign = _sort_wedge(indices)
    if sign == 0:
        return zero_form(spec, len(indices))
    return KerForm(spec, len(indices), {key: coeff if sign > 0 else -coeff})


def section_form(spec: AlgebroidSpec, sec: Section) -> KerForm:
    return KerForm(spec, 1, {(i,): c for i, c in enumerate(sec.coeffs)})


# -- the anchor extension ρ̃ -------------------------------------------------


def rho_tilde(spec: AlgebroidSpec, form: KerForm) -> dict[tuple[int, Wedge], Scalar]:
    """ρ̃(form) ∈ (base vector fields) ⊗ Λ^{p-1}, as a sparse dictionary.

    On decomposables: ψ0∧…∧ψp ↦ Σᵢ (−1)ⁱ ρ(ψᵢ) ⊗ ψ0∧…ψ̂ᵢ…∧ψp.  Keys are
    (base variable index, remaining wedge); only nonzero entries appear.
    """
    if form.degree < 1:
        raise ValueError("ρ̃ is defined on forms of degree >= 1")
    if spec.anchor is None:
        return {}
    out: dict[tuple[int, Wedge], Scalar] = {}
    for key, value in form.coeffs.items():
        for pos, idx in enumerate(key):
            row = spec.anchor.entries[idx]
            rest = key[:pos] + key[pos + 1:]
            for j in range(spec.nvars):
                if row[j].is_zero():
                    continue
                term = value * row[j]
                if pos % 2:
                    term = -term
                slot = (j, rest)
                prev = out.get(slot)
                total = term if prev is None else prev + term
                if total.is_zero():
                    out.pop(slot, None)
                else:
                    out[slot] = total
    return out


def monomials(nvars: int, max_total: int) -> list[tuple[int, ...]]:
    """All exponent tuples with total degree <= max_total, in a fixed order."""
    out: list[tuple[int, ...]] = []

    def rec(prefix: tuple[int, ...], remaining: int, slots: int) -> None:
        if slots == 0:
            out.append(prefix)
            return
        for d in range(remaining + 1):
            rec(prefix + (d,), remaining - d, slots - 1)

    rec((), max_total, nvars)
    return out


def kerform_basis(spec: AlgebroidSpec, degree: int,
                  max_degree: int | None = None) -> list[KerForm]:
    """Spanning independent set of ker ρ̃ in the given degree.

    Over a point this is all of Λ^p.  Over a polynomial base the module is
    not finitely generated, so a monomial truncation bound is required and
    the kernel is computed over ℚ on (wedge, monomial) coordinates.
    """
    if degree == 0:
        return [scalar_form(spec, ONE)]
    if degree > spec.rank:
        return []
    all_wedges = wedge_indices(spec.rank, degree)
    if spec.is_point() or spec.anchor is None:
        return [basis_wedge_form(spec, I) for I in all_wedges]
    if max_degree is None:
        raise ValueError(
            "a monomial truncation bound is required over a polynomial base")
    monos = monomials(spec.nvars, max_degree)
    domain = [(I, m) for I in all_wedges for m in monos]
    col_of = {key: c for c, key in enumerate(domain)}
    rows: dict[tuple[int, Wedge, tuple[int, ...]], dict[int, Scalar]] = {}
    for (I, m), col in col_of.items():
        mono = Scalar.monomial(m)
        form = KerForm(spec, degree, {I: mono})
        for (j, rest), value in rho_tilde(spec, form).items():
            for exp, coeff in value.terms.items():
                row_key = (j, rest, exp)
                rows.setdefault(row_key, {})[col] = Scalar.rational(coeff)
    if rows:
        matrix = Matrix([[rows[k].get(c, ZERO) for c in range(len(domain))]
                         for k in sorted(rows)])
    else:
        matrix = Matrix.zeros(1, len(domain))
    from courantkit.exact import kernel_basis as _kernel
    basis = []
    for vec in _kernel(matrix):
        coeffs: dict[Wedge, Scalar] = {}
        for (I, m), c in col_of.items():
            if not vec[c].is_zero():
                prev = coeffs.get(I, ZERO)
                coeffs[I] = prev + Scalar.monomial(m, vec[c].as_fraction())
        basis.append(KerForm(spec, degree, coeffs))
    return basis


# -- pairings -----------------------------------------------------------------


def pair_basis(spec: AlgebroidSpec, form: KerForm, cols: Sequence[int]) -> Scalar:
    """⟨form, e_{cols}⟩; the column tuple may be unsorted (sign-normalised)."""
    key, sign = _sort_wedge(cols)
    if sign == 0:
        return ZERO
    total = ZERO
    for I, value in form.coeffs.items():
        minor = spec.gram_minor(I, key)
        if not minor.is_zero():
            total = total + value * minor
    return total if sign > 0 else -total


def pair_sections(spec: AlgebroidSpec, form: KerForm,
                  sections: Sequence[Section]) -> Scalar:
    """⟨form, ψ1∧…∧ψp⟩ for arbitrary sections, via determinant pairings."""
    if len(sections) != form.degree:
        raise ValueError("wrong number of sections for this degree")
    if form.degree == 0:
        return form.as_scalar()
    gram_cols = [spec.gram.matvec(list(sec.coeffs)) for sec in sections]
    total = ZERO
    for I, value in form.coeffs.items():
        grid = Matrix([[gram_cols[b][a] for b in range(len(sections))] for a in I])
        det = grid.det()
        if not det.is_zero():
            total = total + value * det
    return total


def pair_prefixed(spec: AlgebroidSpec, form: KerForm, prefix: Section,
                  rest: Sequence[int]) -> Scalar:
    """⟨form, prefix ∧ e_{rest}⟩ with a general section in the first slot."""
    total = ZERO
    for m, cm in enumerate(prefix.coeffs):
        if cm.is_zero() or m in rest:
            continue
        value = pair_basis(spec, form, (m,) + tuple(rest))
        if not value.is_zero():
            total = total + cm * value
    return total


def contract(spec: AlgebroidSpec, form: KerForm,
             chi: "Section | KerForm") -> KerForm:
    """Partial pairing: the (p−k)-form with ⟨contract(α,χ), η⟩ = ⟨α, χ∧η⟩.

    χ may be a Section (k = 1) or a KerForm of degree k ≤ p; full contraction
    returns the Scalar as a degree-0 form.
    """
    if isinstance(chi, Section):
        chi = section_form(spec, chi)
    if chi.degree > form.degree:
        raise ValueError(
            f"cannot contract a degree-{form.degree} form by degree {chi.degree}")

    def insert_one(current: KerForm, gram_vec: Sequence[Scalar]) -> KerForm:
        out: dict[Wedge, Scalar] = {}
        for I, value in current.coeffs.items():
            for pos, a in enumerate(I):
                g = gram_vec[a]
                if g.is_zero():
                    continue
                term = value * g
                if pos % 2:
                    term = -term
                _accumulate(out, I[:pos] + I[pos + 1:], term)
        return KerForm(spec, current.degree - 1, out)

    total = zero_form(spec, form.degree - chi.degree)
    for J, d in chi.coeffs.items():
        current = form.scale(d)
        for j in J:
            gram_vec = [spec.gram.entries[a][j] for a in range(spec.rank)]
            current = insert_one(current, gram_vec)
        total = total + current
    return total


# -- the exterior covariant derivative ----------------------------------------


BracketFn = Callable[[int, int], Section]


def eval_covariant(spec: AlgebroidSpec, form: KerForm,
                   bracket_fn: BracketFn | None,
                   use_anchor: bool) -> KerForm:
    """Shared evaluator for D-like degree-+1 operators.

    Evaluates Σᵢ (−1)ⁱ ρ(e_{Jᵢ})⟨α, …⟩ (if use_anchor) plus
    Σ_{i<j} (−1)^{i+j} ⟨α, bracket_fn(Jᵢ,Jⱼ)∧…⟩ on every basis wedge J of
    degree p+1, then solves the coefficients back through the Λ-Gram system.
    """
    p = form.degree
    target = wedge_indices(spec.rank, p + 1)
    if not target:
        return zero_form(spec, p + 1)
    values: dict[Wedge, Scalar] = {}
    anchored = use_anchor and spec.anchor is not None
    for J in target:
        val = ZERO
        if anchored:
            for pos, idx in enumerate(J):
                rest = J[:pos] + J[pos + 1:]
                inner = pair_basis(spec, form, rest)
                if inner.is_rational():
                    continue
                row = spec.anchor.entries[idx]
                term = apply_vector_field(row, inner)
                if term.is_zero():
                    continue
                val = val + term if pos % 2 == 0 else val - term
        if bracket_fn is not None:
            for a, b in itertools.combinations(range(p + 1), 2):
                sec = bracket_fn(J[a], J[b])
                if sec.is_zero():
                    continue
                rest = tuple(J[c] for c in range(p + 1) if c != a and c != b)
                term = pair_prefixed(spec, form, sec, rest)
                if term.is_zero():
                    continue
                val = val + term if (a + b) % 2 == 0 else val - term
        if not val.is_zero():
            values[J] = val
    coeffs: dict[Wedge, Scalar] = {}
    for I in target:
        total = ZERO
        for J, val in values.items():
            w = spec.inv_gram_minor(I, J)
            if not w.is_zero():
                total = total + w * val
        if not total.is_zero():
            coeffs[I] = total
    return KerForm(spec, p + 1, coeffs)


def cov_derivative(spec: AlgebroidSpec, form: KerForm) -> KerForm:
    """The exterior covariant derivative D: Ω^p(ker ρ) → Ω^{p+1}(ker ρ)."""
    form.require_certified("cov_derivative input")
    return eval_covariant(spec, form, spec.table_bracket, use_anchor=True)


def leibniz_defect(spec: AlgebroidSpec, alpha: KerForm, beta: KerForm) -> KerForm:
    """D(α∧β) − (Dα)∧β − (−1)^{|α|} α∧Dβ; vanishes on valid structures."""
    alpha.require_certified("leibniz_defect left input")
    beta.require_certified("leibniz_defect right input")
    both = cov_derivative(spec, alpha.wedge(beta))
    da_b = cov_derivative(spec, alpha).wedge(beta)
    a_db = alpha.wedge(cov_derivative(spec, beta))
    if alpha.degree % 2:
        return both - da_b + a_db
    return both - da_b - a_db


# -- splitting and insertion ---------------------------------------------------


def tilde_split(spec: AlgebroidSpec, form: KerForm) -> Callable[..., Section]:
    """The canonical splitting α̃ through the Gram system.

    Returns the multilinear map with ⟨α̃(ψ1,…,ψ_{p−1}), χ⟩ = ⟨α, ψ1∧…∧ψ_{p−1}∧χ⟩
    for all χ.  For degree 1 the map has no arguments and returns the form's
    own section (the Gram solve is the identity under the multivector
    convention).
    """
    if form.degree < 1:
        raise ValueError("splitting is defined for degree >= 1")
    p = form.degree
    gram_inv = spec.gram_inverse()

    def split(*sections: Section) -> Section:
        if len(sections) != p - 1:
            raise ValueError(f"expected {p - 1} sections, got {len(sections)}")
        w = [pair_sections(spec, form, list(sections) + [Section.basis(j, spec.rank)])
             for j in range(spec.rank)]
        return Section(gram_inv.matvec(w))

    return split


def tilde_split_basis(spec: AlgebroidSpec, form: KerForm,
                      indices: Sequence[int]) -> Section:
    """α̃ evaluated on basis sections, via cached Gram minors (fast path)."""
    p = form.degree
    if len(indices) != p - 1:
        raise ValueError(f"expected {p - 1} indices, got {len(indices)}")
    w = [pair_basis(spec, form, tuple(indices) + (j,)) for j in range(spec.rank)]
    return Section(spec.gram_inverse().matvec(w))


def d_squared(spec: AlgebroidSpec, form: KerForm) -> KerForm:
    """D² — generally nonzero; equals ins_h on twisted structures."""
    return cov_derivative(spec, cov_derivative(spec, form))


def _insertion_forms(spec: AlgebroidSpec) -> list[KerForm]:
    cached = getattr(spec, "_ins1_cache", None)
    if cached is None or cached[0] is not spec.twist:
        forms = [contract(spec, spec.twist, Section.basis(i, spec.rank))
                 for i in range(spec.rank)]
        cached = (spec.twist, forms)
        spec._ins1_cache = cached
    return cached[1]


def ins_h(spec: AlgebroidSpec, form: KerForm) -> KerForm:
    """The degree-2 derivation with ins_h(f) = 0 and ins_h(φ) = ⟨twist, φ∧·⟩.

    On a basis wedge each slot is replaced in place by the 3-form obtained
    by contracting the twist with that basis vector; coefficients pass
    through unchanged (an even derivation has no Koszul signs).  The result
    satisfies d_squared(α) = ins_h(α) on twisted structures.
    """
    if spec.twist is None:
        raise SpecInvariantError("ins_h needs a twist on the structure")
    form.require_certified("ins_h input")
    ins1 = _insertion_forms(spec)
    out: dict[Wedge, Scalar] = {}
    for I, value in form.coeffs.items():
        for pos in range(len(I)):
            replacement = ins1[I[pos]]
            for J, w in replacement.coeffs.items():
                _accumulate(out, I[:pos] + J + I[pos + 1:], value * w)
    return KerForm(spec, form.degree + 2, out)
