"""Algebroid data model: pairing, anchor, derivations, and the bracket.

An AlgebroidSpec is the single source of truth for one structure: the rank,
the base ring (a point or ℚ[x1..xn]), the Gram matrix of the pairing ⟨.,.⟩,
the anchor matrix, the bracket structure functions on basis sections, and an
optional degree-4 twist form.  Sections are coefficient vectors over the
scalar ring in the module basis e_0..e_{r-1}.

The bracket on arbitrary sections is generated from the basis table by two
extension rules:

    right:  [φ, f·ψ] = ρ(φ)[f]·ψ + f·[φ,ψ]
    left:   [f·φ, ψ] = f·[φ,ψ] − (ρ(ψ)f)·φ + ⟨φ,ψ⟩·d0(f)

so a finite table determines the bracket on all polynomial sections.  d0 is
the derivation f ↦ ρ*(df), with ρ* defined through the Gram system by
⟨ρ*ξ, ψ⟩ = ξ(ρψ).

Pairing convention for split-type structures: ⟨X+ξ, Y+η⟩ = η(X) + ξ(Y),
with no 1/2 factor, so ρ*ξ = ξ on the standard bundle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

from courantkit.exact import Matrix, ONE, Scalar, ZERO

if TYPE_CHECKING:  # pragma: no cover
    from courantkit.kerforms import KerForm


class SpecInvariantError(ValueError):
    """A structure violates one of the AlgebroidSpec invariants."""


KINDS = ("almost", "strongly-anchored", "courant", "h-twisted")


@dataclass(frozen=True)
class Section:
    """Element of the module: a coefficient vector in the e_i basis."""

    coeffs: tuple[Scalar, ...]

    @classmethod
    def make(cls, coeffs: Sequence) -> "Section":
        return cls(tuple(c if isinstance(c, Scalar) else Scalar.rational(c)
                         for c in coeffs))

    @classmethod
    def zero(cls, rank: int) -> "Section":
        return cls((ZERO,) * rank)

    @classmethod
    def basis(cls, index: int, rank: int) -> "Section":
        return cls(tuple(ONE if i == index else ZERO for i in range(rank)))

    @property
    def rank(self) -> int:
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __add__(self, other: "Section") -> "Section":
        return Section(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "Section") -> "Section":
        return Section(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "Section":
        return Section(tuple(-a for a in self.coeffs))

    def scale(self, f: Scalar) -> "Section":
        return Section(tuple(f * a for a in self.coeffs))

    def to_text(self) -> list[str]:
        return [c.to_text() for c in self.coeffs]

    def __repr__(self) -> str:
        return f"Section[{', '.join(self.to_text())}]"


class AlgebroidSpec:
    """Rank, base ring, pairing, anchor, bracket table, and optional twist."""

    def __init__(
        self,
        ring: str,
        nvars: int,
        rank: int,
        gram: Matrix,
        anchor: Matrix | None,
        bracket_table: dict[tuple[int, int], Section],
        twist: "KerForm | None" = None,
        kind: str = "courant",
    ):
        if ring not in ("point", "polynomial"):
            raise SpecInvariantError(f"unknown base ring type {ring!r}")
        if ring == "point" and nvars:
            raise SpecInvariantError("a point base has no variables")
        if rank <= 0:
            raise SpecInvariantError("rank must be a positive integer")
        if kind not in KINDS:
            raise SpecInvariantError(
                f"kind must be one of {KINDS}, got {kind!r}")
        self.ring = ring
        self.nvars = nvars
        self.rank = rank
        self.gram = gram
        self.anchor = anchor
        self.kind = kind
        self.twist = twist
        self._validate_gram()
        self._validate_anchor()
        table: dict[tuple[int, int], Section] = {}
        for (i, j), sec in bracket_table.items():
            if not (0 <= i < rank and 0 <= j < rank):
                raise SpecInvariantError(f"bracket index ({i},{j}) out of range")
            if sec.rank != rank:
                raise SpecInvariantError(
                    f"bracket entry ({i},{j}) has length {sec.rank}, want {rank}")
            self.validate_section(sec, f"bracket entry ({i},{j})")
            if not sec.is_zero():
                table[(i, j)] = sec
        self.bracket_table = table
        if twist is not None and twist.degree != 4:
            raise SpecInvariantError("the twist must be a degree-4 form")
        self._zero_section = Section.zero(rank)
        self._gram_inv: Matrix | None = None
        self._minor_cache: dict = {}
        self._inv_minor_cache: dict = {}
        self._d0_cache: dict[int, Section] = {}

    # -- invariants -----------------------------------------------------

    def _validate_gram(self) -> None:
        g = self.gram
        if g.rows != self.rank or g.cols != self.rank:
            raise SpecInvariantError(
                f"gram must be {self.rank}x{self.rank}, got {g.rows}x{g.cols}")
        if not g.is_symmetric():
            raise SpecInvariantError("gram matrix is not symmetric")
        det = g.det()
        if not det.is_rational() or det.is_zero():
            raise SpecInvariantError(
                "gram determinant must be a nonzero rational constant "
                f"(a unit of the base ring), got {det}")
        for row in g.entries:
            for e in row:
                if e.max_var_index >= self.nvars:
                    raise SpecInvariantError(
                        "gram entry uses more variables than the base ring has")

    def _validate_anchor(self) -> None:
        if self.is_point():
            if self.anchor is not None:
                raise SpecInvariantError("a point base admits no anchor matrix")
            return
        if self.anchor is None:
            return  # anchorless polynomial spec: ρ ≡ 0, d0 ≡ 0
        a = self.anchor
        if a.rows != self.rank or a.cols != self.nvars:
            raise SpecInvariantError(
                f"anchor must be {self.rank}x{self.nvars}, got {a.rows}x{a.cols}")
        for row in a.entries:
            for e in row:
                if e.max_var_index >= self.nvars:
                    raise SpecInvariantError(
                        "anchor entry uses more variables than the base ring has")

    def is_point(self) -> bool:
        return self.ring == "point"

    def validate_section(self, sec: Section, what: str = "section") -> None:
        if sec.rank != self.rank:
            raise SpecInvariantError(f"{what} has length {sec.rank}, want {self.rank}")
        for c in sec.coeffs:
            if c.max_var_index >= self.nvars:
                raise SpecInvariantError(
                    f"{what} uses variable x{c.max_var_index + 1}, but the "
                    f"base ring has {self.nvars} variable(s)")

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebroidSpec):
            return NotImplemented
        twists_equal = (
            (self.twist is None and other.twist is None)
            or (self.twist is None and other.twist.is_zero())
            or (other.twist is None and self.twist.is_zero())
            or (self.twist is not None and other.twist is not None
                and self.twist.coeffs == other.twist.coeffs)
        )
        return (self.ring == other.ring and self.nvars == other.nvars
                and self.rank == other.rank and self.gram == other.gram
                and self.anchor == other.anchor
                and self.bracket_table == other.bracket_table
                and twists_equal)

    def __repr__(self) -> str:
        base = "point" if self.is_point() else f"Q[x1..x{self.nvars}]"
        return (f"AlgebroidSpec(rank={self.rank}, base={base}, kind={self.kind}, "
                f"twist={'yes' if self.twist is not None else 'no'})")

    # -- cached linear algebra -------------------------------------------

    def gram_inverse(self) -> Matrix:
        if self._gram_inv is None:
            self._gram_inv = self.gram.inverse()
        return self._gram_inv

    def gram_minor(self, rows: tuple[int, ...], cols: tuple[int, ...]) -> Scalar:
        """det(gram[rows, cols]) — the Λ-pairing of two basis wedges."""
        key = (rows, cols)
        cached = self._minor_cache.get(key)
        if cached is None:
            cached = _subdet(self.gram, rows, cols)
            self._minor_cache[key] = cached
        return cached

    def inv_gram_minor(self, rows: tuple[int, ...], cols: tuple[int, ...]) -> Scalar:
        """det(gram⁻¹[rows, cols]) — entries of the inverse Λ-Gram matrix."""
        key = (rows, cols)
        cached = self._inv_minor_cache.get(key)
        if cached is None:
            cached = _subdet(self.gram_inverse(), rows, cols)
            self._inv_minor_cache[key] = cached
        return cached

    def table_bracket(self, i: int, j: int) -> Section:
        return self.bracket_table.get((i, j), self._zero_section)

    def basis_sections(self) -> list[Section]:
        return [Section.basis(i, self.rank) for i in range(self.rank)]


def _subdet(m: Matrix, rows: tuple[int, ...], cols: tuple[int, ...]) -> Scalar:
    if len(rows) != len(cols):
        raise ValueError("minor must be square")
    if not rows:
        return ONE
    sub = Matrix([[m.entries[r][c] for c in cols] for r in rows])
    return sub.det()


# -- pairing and anchor ------------------------------------------------------


def pairing(spec: AlgebroidSpec, phi: Section, psi: Section) -> Scalar:
    """⟨φ,ψ⟩ = φᵀ·gram·ψ; symmetric and R-bilinear."""
    total = ZERO
    for i, fi in enumerate(phi.coeffs):
        if fi.is_zero():
            continue
        row = spec.gram.entries[i]
        for j, gj in enumerate(psi.coeffs):
            if gj.is_zero() or row[j].is_zero():
                continue
            total = total + fi * row[j] * gj
    return total


def lambda_pairing(spec: AlgebroidSpec, left: Sequence[Section],
                   right: Sequence[Section]) -> Scalar:
    """Determinant pairing det(⟨aᵢ,bⱼ⟩) of two section wedges of equal degree."""
    if len(left) != len(right):
        raise ValueError(
            f"lambda_pairing degree mismatch: {len(left)} vs {len(right)}")
    if not left:
        return ONE
    grid = Matrix([[pairing(spec, a, b) for b in right] for a in left])
    return grid.det()


def anchor_apply(spec: AlgebroidSpec, psi: Section) -> tuple[Scalar, ...]:
    """ρ(ψ) as a base vector field: n polynomial coefficients on ∂_1..∂_n."""
    spec.validate_section(psi)
    if spec.anchor is None:
        return tuple([ZERO] * spec.nvars)
    out = [ZERO] * spec.nvars
    for i, ci in enumerate(psi.coeffs):
        if ci.is_zero():
            continue
        row = spec.anchor.entries[i]
        for j in range(spec.nvars):
            if not row[j].is_zero():
                out[j] = out[j] + ci * row[j]
    return tuple(out)


def apply_vector_field(vf: Sequence[Scalar], f: Scalar) -> Scalar:
    """Derivative of f along the base vector field Σ vf_j ∂_j."""
    total = ZERO
    for j, coeff in enumerate(vf):
        if not coeff.is_zero():
            df = f.partial(j)
            if not df.is_zero():
                total = total + coeff * df
    return total


def rho_apply(spec: AlgebroidSpec, psi: Section, f: Scalar) -> Scalar:
    """ρ(ψ)[f], the anchor acting as a derivation on the base ring."""
    if spec.anchor is None:
        return ZERO
    return apply_vector_field(anchor_apply(spec, psi), f)


def rho_star(spec: AlgebroidSpec, xi: Sequence[Scalar]) -> Section:
    """ρ*ξ, defined by ⟨ρ*ξ, ψ⟩ = ξ(ρψ) for all ψ, solved through gram."""
    if spec.is_point() or spec.anchor is None:
        if any(not c.is_zero() for c in xi):
            raise SpecInvariantError(
                "no nonzero one-forms exist over this base; only ξ=0 is allowed")
        return Section.zero(spec.rank)
    if len(xi) != spec.nvars:
        raise ValueError(f"one-form needs {spec.nvars} coefficients")
    w = spec.anchor.matvec(list(xi))
    return Section(spec.gram_inverse().matvec(w))


def d0(spec: AlgebroidSpec, f: Scalar) -> Section:
    """The derivation D₀: f ↦ ρ*(df).  Zero over a point."""
    if spec.is_point() or spec.anchor is None or f.is_rational():
        return Section.zero(spec.rank)
    df = tuple(f.partial(j) for j in range(spec.nvars))
    return rho_star(spec, df)


def d0_generator(spec: AlgebroidSpec, j: int) -> Section:
    """Cached D₀(x_{j+1}) = ρ*(dx_{j+1})."""
    cached = spec._d0_cache.get(j)
    if cached is None:
        cached = d0(spec, Scalar.variable(j))
        spec._d0_cache[j] = cached
    return cached


# -- the bracket -------------------------------------------------------------


def bracket(spec: AlgebroidSpec, phi: Section, psi: Section) -> Section:
    """[φ,ψ], extending the basis table by the Leibniz rules.

    Expanding φ = Σ fᵢeᵢ and ψ = Σ gⱼeⱼ:

        [φ,ψ] = Σⱼ ρ(φ)[gⱼ]·eⱼ − Σᵢ ρ(ψ)[fᵢ]·eᵢ
                + Σᵢⱼ fᵢgⱼ·[eᵢ,eⱼ] + Σᵢ ⟨eᵢ,ψ⟩·d0(fᵢ)
    """
    spec.validate_section(phi)
    spec.validate_section(psi)
    rank = spec.rank
    out = [ZERO] * rank
    point = spec.is_point() or spec.anchor is None
    if not point:
        rho_phi = anchor_apply(spec, phi)
        rho_psi = anchor_apply(spec, psi)
        for j, gj in enumerate(psi.coeffs):
            if not gj.is_rational():
                out[j] = out[j] + apply_vector_field(rho_phi, gj)
        for i, fi in enumerate(phi.coeffs):
            if not fi.is_rational():
                out[i] = out[i] - apply_vector_field(rho_psi, fi)
    for i, fi in enumerate(phi.coeffs):
        if fi.is_zero():
            continue
        for j, gj in enumerate(psi.coeffs):
            if gj.is_zero():
                continue
            entry = spec.bracket_table.get((i, j))
            if entry is not None:
                fg = fi * gj
                for k, ck in enumerate(entry.coeffs):
                    if not ck.is_zero():
                        out[k] = out[k] + fg * ck
        if not point and not fi.is_rational():
            gram_pair = ZERO
            row = spec.gram.entries[i]
            for j, gj in enumerate(psi.coeffs):
                if not gj.is_zero() and not row[j].is_zero():
                    gram_pair = gram_pair + row[j] * gj
            if not gram_pair.is_zero():
                dfi = d0(spec, fi)
                for k, ck in enumerate(dfi.coeffs):
                    if not ck.is_zero():
                        out[k] = out[k] + gram_pair * ck
    return Section(tuple(out))


def tangent_bracket(nvars: int, x_field: Sequence[Scalar],
                    y_field: Sequence[Scalar]) -> tuple[Scalar, ...]:
    """[X,Y] of two base vector fields, componentwise X(Y_j) − Y(X_j)."""
    return tuple(
        apply_vector_field(x_field, y_field[j]) - apply_vector_field(y_field, x_field[j])
        for j in range(nvars))


def anchor_morphism_defect(spec: AlgebroidSpec, phi: Section,
                           psi: Section) -> tuple[Scalar, ...]:
    """ρ[φ,ψ] − [ρφ, ρψ]_TM; vanishes on every valid twisted structure."""
    lhs = anchor_apply(spec, bracket(spec, phi, psi))
    rhs = tangent_bracket(spec.nvars, anchor_apply(spec, phi),
                          anchor_apply(spec, psi))
    return tuple(a - b for a, b in zip(lhs, rhs))


def jacobiator(spec: AlgebroidSpec, phi: Section, psi1: Section,
               psi2: Section) -> Section:
    """[φ,[ψ₁,ψ₂]] − [[φ,ψ₁],ψ₂] − [ψ₁,[φ,ψ₂]] (zero iff Jacobi holds)."""
    return (bracket(spec, phi, bracket(spec, psi1, psi2))
            - bracket(spec, bracket(spec, phi, psi1), psi2)
            - bracket(spec, psi1, bracket(spec, phi, psi2)))

