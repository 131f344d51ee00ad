"""Isotropic/Lagrangean/integrable subbundles, Dirac structures, and the
twisted Lie algebroid a Dirac structure inherits.

A Subbundle is a list of generator sections.  Over a polynomial base the
generator matrix must contain an invertible square block in columns whose
entries are rational constants; membership of a section in the R-span is
then decided exactly through that block (graphs of two-forms and coordinate
subbundles all have one).  General module membership is out of scope.

The inherited structure on a Dirac subbundle L carries the restricted
bracket and anchor and the restriction of the twist's splitting as an
L-three-form with values in ker ρ ∩ L.  Its closedness is measured by the
connection-based derivative: the usual covariant-derivative formula with the
anchor terms replaced by ∇_ψ v = [ψ, v].
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from courantkit.axioms import AxiomCheck, CheckReport, witness
from courantkit.exact import Matrix, Scalar, ZERO, rref
from courantkit.kerforms import tilde_split
from courantkit.rand import rand_scalar
from courantkit.structure import (
    AlgebroidSpec,
    Section,
    SpecInvariantError,
    anchor_apply,
    bracket,
    jacobiator,
    pairing,
    rho_apply,
)

_GENERIC_POINT = [Fraction(p) for p in
                  (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53)]


class MembershipError(ValueError):
    """Span membership is undecidable without a constant invertible block."""


@dataclass
class Subbundle:
    """Generator sections spanning a subbundle of the module."""

    spec: AlgebroidSpec
    generators: list[Section]

    def __post_init__(self):
        for g in self.generators:
            self.spec.validate_section(g, "subbundle generator")
        if not self.generators:
            raise SpecInvariantError("a subbundle needs at least one generator")
        point = _GENERIC_POINT[: self.spec.nvars]
        grid = [[Scalar.rational(c.substitute(point)) for c in g.coeffs]
                for g in self.generators]
        _, rank, _ = rref(Matrix(grid))
        if rank != len(self.generators):
            raise SpecInvariantError(
                "subbundle generators are dependent at a generic point")

    @property
    def dim(self) -> int:
        return len(self.generators)

    def to_json(self) -> dict:
        return {"generators": [g.to_text() for g in self.generators]}


def graph_of_two_form(spec: AlgebroidSpec, b: dict) -> Subbundle:
    """The graph {X + ι_X b} of a base two-form inside a split-type bundle."""
    n = spec.nvars
    if spec.rank != 2 * n or n == 0:
        raise ValueError("graphs of two-forms need the rank-2n split layout")
    gens = []
    for i in range(n):
        coeffs = [ZERO] * spec.rank
        coeffs[i] = Scalar.rational(1)
        for key, value in b.items():
            if len(key) != 2:
                raise ValueError("graph construction needs a two-form")
            if key[0] == i:
                coeffs[n + key[1]] = coeffs[n + key[1]] + value
            elif key[1] == i:
                coeffs[n + key[0]] = coeffs[n + key[0]] - value
        gens.append(Section(tuple(coeffs)))
    return Subbundle(spec, gens)


# -- pointwise predicates -------------------------------------------------------


def is_isotropic(spec: AlgebroidSpec, sub: Subbundle) -> bool:
    """⟨L,L⟩ ≡ 0, checked identically on all generator pairs."""
    gens = sub.generators
    for i in range(len(gens)):
        for j in range(i, len(gens)):
            if not pairing(spec, gens[i], gens[j]).is_zero():
                return False
    return True


def gram_signature(gram: Matrix) -> tuple[int, int]:
    """(positive, negative) inertia of a constant symmetric matrix, exact."""
    grid = [row[:] for row in gram.fraction_grid()]
    n = gram.rows
    pos = neg = 0
    for k in range(n):
        if grid[k][k] == 0:
            pivot = next((j for j in range(k + 1, n) if grid[j][j] != 0), None)
            if pivot is not None:
                grid[k], grid[pivot] = grid[pivot], grid[k]
                for row in grid:
                    row[k], row[pivot] = row[pivot], row[k]
            else:
                mate = next((j for j in range(k + 1, n) if grid[k][j] != 0), None)
                if mate is None:
                    continue
                for c in range(n):
                    grid[k][c] += grid[mate][c]
                for r in range(n):
                    grid[r][k] += grid[r][mate]
        d = grid[k][k]
        if d == 0:
            continue
        if d > 0:
            pos += 1
        else:
            neg += 1
        for j in range(k + 1, n):
            if grid[j][k] != 0:
                f = grid[j][k] / d
                for c in range(n):
                    grid[j][c] -= f * grid[k][c]
                for r in range(n):
                    grid[r][j] -= f * grid[r][k]
    return pos, neg


def is_lagrangean(spec: AlgebroidSpec, sub: Subbundle) -> bool:
    """Isotropic of half rank; demands a split-signature constant pairing."""
    if not spec.gram.is_rational():
        raise SpecInvariantError(
            "the Lagrangean test needs a constant Gram matrix")
    pos, neg = gram_signature(spec.gram)
    if pos != neg:
        raise SpecInvariantError(
            f"the Lagrangean test needs split signature, got ({pos},{neg})")
    return is_isotropic(spec, sub) and 2 * sub.dim == spec.rank


# -- span membership --------------------------------------------------------------


def _constant_block(sub: Subbundle) -> tuple[tuple[int, ...], Matrix]:
    """Columns with constant entries forming an invertible block, and the
    inverse of that block."""
    g = sub.dim
    constant_cols = [c for c in range(sub.spec.rank)
                     if all(gen.coeffs[c].is_rational() for gen in sub.generators)]
    for cols in itertools.combinations(constant_cols, g):
        block = Matrix([[gen.coeffs[c] for c in cols] for gen in sub.generators])
        if not block.det().is_zero():
            return cols, block.inverse()
    raise MembershipError(
        "no invertible constant-column block: span membership over the "
        "polynomial ring is undecidable for this generator matrix")


def express_in_generators(spec: AlgebroidSpec, sub: Subbundle,
                          sec: Section) -> tuple[tuple[Scalar, ...], Section]:
    """Solve sec = Σ c_a·gen_a through the constant block.

    Returns (coefficients, residual); the residual is zero exactly when sec
    lies in the R-span of the generators.
    """
    cols, block_inv = _constant_block(sub)
    restricted = [sec.coeffs[c] for c in cols]
    coeffs = block_inv.transpose().matvec(restricted)
    recombined = Section.zero(spec.rank)
    for c, gen in zip(coeffs, sub.generators):
        recombined = recombined + gen.scale(c)
    return tuple(coeffs), sec - recombined


def integrability_defect(spec: AlgebroidSpec,
                         sub: Subbundle) -> list[tuple[tuple[int, int], Section]]:
    """Residuals of [lᵢ,lⱼ] outside the span, for every ordered generator pair."""
    out = []
    for i, gi in enumerate(sub.generators):
        for j, gj in enumerate(sub.generators):
            br = bracket(spec, gi, gj)
            _, residual = express_in_generators(spec, sub, br)
            if not residual.is_zero():
                out.append(((i, j), residual))
    return out


def check_dirac(spec: AlgebroidSpec, sub: Subbundle) -> CheckReport:
    """Isotropic + Lagrangean + integrable, with witnesses."""
    report = CheckReport(suite="dirac")
    iso = is_isotropic(spec, sub)
    report.checks.append(AxiomCheck(
        "isotropic", "pass" if iso else "fail",
        None if iso else witness(
            {"generators": [g.to_text() for g in sub.generators]},
            "a generator pair has nonzero pairing")))
    lag = is_lagrangean(spec, sub)
    report.checks.append(AxiomCheck(
        "lagrangean", "pass" if lag else "fail",
        None if lag else witness(
            {"dim": str(sub.dim), "rank": str(spec.rank)},
            "not isotropic of half rank")))
    defects = integrability_defect(spec, sub)
    report.checks.append(AxiomCheck(
        "integrable", "pass" if not defects else "fail",
        None if not defects else witness(
            {"pair": str(defects[0][0])}, defects[0][1])))
    return report


# -- the inherited twisted Lie algebroid -------------------------------------------


def _restricted_twist_values(spec: AlgebroidSpec,
                             sub: Subbundle) -> dict[tuple[int, int, int], Section]:
    if spec.twist is None or spec.twist.is_zero():
        return {}
    out = {}
    split = tilde_split(spec, spec.twist)
    for a, b, c in itertools.combinations(range(sub.dim), 3):
        value = split(sub.generators[a], sub.generators[b], sub.generators[c])
        out[(a, b, c)] = value
    return out


def induced_htla(spec: AlgebroidSpec, sub: Subbundle,
                 seed: int = 0, degree: int = 2) -> tuple[dict, CheckReport]:
    """The twisted Lie algebroid structure a Dirac subbundle inherits.

    Returns (structure data, report).  The data holds the restricted anchor,
    the bracket structure functions over the generators, and the restricted
    three-form values; the report checks, with witnesses:

      twist-values-in-kernel   H̃|L lands in ker ρ ∩ L (a claim under test)
      antisymmetry             the restricted bracket is skew
      jacobi                   Jacobi up to the restricted three-form
      leibniz                  the anchor Leibniz rule along L
      twist-closed             the connection derivative of H̃|L vanishes
    """
    dirac = check_dirac(spec, sub)
    if not dirac.passed:
        raise SpecInvariantError(
            f"induced structure needs a Dirac subbundle; failing: {dirac.failing()}")
    rng = random.Random(seed)
    gens = sub.generators
    g = sub.dim
    report = CheckReport(suite="induced-twisted-lie-algebroid")

    # restricted data
    struct: dict[tuple[int, int], tuple[Scalar, ...]] = {}
    for i, j in itertools.product(range(g), repeat=2):
        coeffs, _ = express_in_generators(spec, sub, bracket(spec, gens[i], gens[j]))
        struct[(i, j)] = coeffs
    twist_vals = _restricted_twist_values(spec, sub)

    fail = None
    for key, value in twist_vals.items():
        _, residual = express_in_generators(spec, sub, value)
        in_l = residual.is_zero()
        in_ker = all(c.is_zero() for c in anchor_apply(spec, value))
        if not (in_l and in_ker):
            fail = witness({"triple": str(key), "value": value},
                           "restricted twist value escapes ker ρ ∩ L")
            break
    report.checks.append(AxiomCheck(
        "twist-values-in-kernel", "fail" if fail else "pass", fail))

    fail = None
    for i, j in itertools.combinations(range(g), 2):
        defect = bracket(spec, gens[i], gens[j]) + bracket(spec, gens[j], gens[i])
        if not defect.is_zero():
            fail = witness({"pair": str((i, j))}, defect)
            break
    for i in range(g):
        defect = bracket(spec, gens[i], gens[i])
        if fail is None and not defect.is_zero():
            fail = witness({"generator": str(i)}, defect)
    report.checks.append(AxiomCheck(
        "antisymmetry", "fail" if fail else "pass", fail))

    # random L-sections: polynomial combinations of the generators
    def random_l_section() -> Section:
        total = Section.zero(spec.rank)
        for gen in gens:
            total = total + gen.scale(rand_scalar(rng, spec.nvars,
                                                  degree if spec.nvars else 0))
        return total

    randoms = [random_l_section() for _ in range(3)]
    split = (tilde_split(spec, spec.twist)
             if spec.twist is not None and not spec.twist.is_zero() else None)

    def h_of(x: Section, y: Section, z: Section) -> Section:
        if split is None:
            return Section.zero(spec.rank)
        return split(x, y, z)

    fail = None
    triples = list(itertools.combinations(gens, 3))
    triples += [(randoms[0], randoms[1], randoms[2]),
                (randoms[0], gens[0], gens[-1])]
    for x, y, z in triples:
        defect = jacobiator(spec, x, y, z) - h_of(x, y, z)
        if not defect.is_zero():
            fail = witness({"x": x, "y": y, "z": z}, defect)
            break
    report.checks.append(AxiomCheck("jacobi", "fail" if fail else "pass", fail))

    fail = None
    fns = [rand_scalar(rng, spec.nvars, degree if spec.nvars else 0)
           for _ in range(2)]
    for x in gens:
        for y in gens + randoms[:1]:
            for f in fns:
                defect = (bracket(spec, x, y.scale(f))
                          - y.scale(rho_apply(spec, x, f))
                          - bracket(spec, x, y).scale(f))
                if not defect.is_zero():
                    fail = witness({"x": x, "f": f, "y": y}, defect)
                    break
    report.checks.append(AxiomCheck("leibniz", "fail" if fail else "pass", fail))

    fail = None
    for quad in itertools.combinations(range(g), 4):
        total = Section.zero(spec.rank)
        qgens = [gens[q] for q in quad]
        for k in range(4):
            rest = [qgens[m] for m in range(4) if m != k]
            value = bracket(spec, qgens[k], h_of(*rest))
            total = total + (value if k % 2 == 0 else -value)
        for k, l in itertools.combinations(range(4), 2):
            rest = [qgens[m] for m in range(4) if m != k and m != l]
            value = h_of(bracket(spec, qgens[k], qgens[l]), rest[0], rest[1])
            total = total + (value if (k + l) % 2 == 0 else -value)
        if not total.is_zero():
            fail = witness({"quad": str(quad)}, total)
            break
    report.checks.append(AxiomCheck("twist-closed", "fail" if fail else "pass", fail))

    data = {
        "kind": "h-twisted-lie",
        "ring": ({"type": "point"} if spec.is_point()
                 else {"type": "polynomial", "vars": spec.nvars}),
        "rank": g,
        "anchor": [[c.to_text() for c in anchor_apply(spec, gen)] for gen in gens]
        if not spec.is_point() else None,
        "bracket": {f"{i},{j}": [c.to_text() for c in struct[(i, j)]]
                    for (i, j) in sorted(struct) if any(
                        not s.is_zero() for s in struct[(i, j)])},
        "h3": [{"indices": list(key),
                "value": [c.to_text() for c in
                          express_in_generators(spec, sub, value)[0]]}
               for key, value in sorted(twist_vals.items())
               if not value.is_zero()],
    }
    return data, report


def search_coordinate_dirac(spec: AlgebroidSpec) -> list[Subbundle]:
    """All spans of basis subsets of size rank/2 that pass check_dirac."""
    if not spec.gram.is_rational():
        raise SpecInvariantError("the coordinate search needs a constant Gram matrix")
    if spec.rank % 2:
        return []
    half = spec.rank // 2
    found = []
    for subset in itertools.combinations(range(spec.rank), half):
        if any(not spec.gram.entries[i][j].is_zero()
               for i in subset for j in subset):
            continue
        sub = Subbundle(spec, [Section.basis(i, spec.rank) for i in subset])
        if check_dirac(spec, sub).passed:
            found.append(sub)
    return found
