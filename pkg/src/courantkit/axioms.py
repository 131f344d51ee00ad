"""Executable axiom suites with failure witnesses.

Every suite evaluates its axioms exactly: on all basis-section tuples, and
additionally on seeded random polynomial sections.  The extension rules make
the axioms that are R-multilinear determined by basis tuples, but randomised
sections guard the extension machinery itself (a corrupted Gram matrix, for
instance, only surfaces on non-constant sections).

A check passes only when the defect is identically zero as a canonical
Scalar/Section; failures carry the full input tuple and the exact defect.

Suites:
  courant               Jacobi (Leibniz form), Leibniz, symmetric part, invariance
  strongly-anchored     anchor morphism, Leibniz, symmetric part, invariance
  h-twisted             twisted Jacobi, closed twist, Leibniz, symmetric part,
                        invariance (plus twist membership in ker ρ̃)
  courant-dorfman       ring/module variant, incl. [D₀f,φ]=0 and ⟨D₀f,D₀g⟩=0
  almost-courant-dorfman    first three rules only
  sa-courant-dorfman    almost rules + the anchor-compatibility rule
  h-twisted-cd          seven-rule twisted ring/module variant
  lie-rinehart          antisymmetry, cyclic Jacobi, Leibniz, anchor representation
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from courantkit.exact import HALF, Scalar
from courantkit.kerforms import (
    KerForm,
    UncertifiedFormError,
    cov_derivative,
    rho_tilde,
    tilde_split,
    tilde_split_basis,
)
from courantkit.rand import rand_scalar, rand_section
from courantkit.structure import (
    AlgebroidSpec,
    Section,
    anchor_morphism_defect,
    bracket,
    d0,
    jacobiator,
    pairing,
    rho_apply,
)


class UnknownSuiteError(ValueError):
    """Requested suite name is not one of the known axiom suites."""


class SuiteNotApplicableError(ValueError):
    """The suite cannot run on this structure (e.g. twisted suite, no twist)."""


# -- reports -----------------------------------------------------------------


def _render(value) -> object:
    if isinstance(value, Section):
        return value.to_text()
    if isinstance(value, Scalar):
        return value.to_text()
    if isinstance(value, KerForm):
        return value.to_entries()
    if isinstance(value, tuple):
        return [_render(v) for v in value]
    return str(value)


def witness(inputs: dict, defect) -> dict:
    return {"inputs": {k: _render(v) for k, v in inputs.items()},
            "defect": _render(defect)}


@dataclass
class AxiomCheck:
    axiom: str
    status: str
    witness: dict | None = None

    def to_json(self) -> dict:
        return {"axiom": self.axiom, "status": self.status, "witness": self.witness}


@dataclass
class CheckReport:
    suite: str
    checks: list[AxiomCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.status == "pass" for c in self.checks)

    def failing(self) -> list[str]:
        return [c.axiom for c in self.checks if c.status != "pass"]

    def to_json(self) -> dict:
        return {"suite": self.suite, "passed": self.passed,
                "checks": [c.to_json() for c in self.checks]}


# -- test-section pools --------------------------------------------------------


@dataclass
class _Pool:
    """Basis and seeded random test data shared by the axiom checkers."""

    spec: AlgebroidSpec
    basis: list[Section]
    randoms: list[Section]
    functions: list[Scalar]

    def pairs(self) -> Iterable[tuple[Section, Section]]:
        for a in self.basis:
            for b in self.basis:
                yield a, b
        extra = self.randoms + self.basis[:1]
        for i, a in enumerate(self.randoms):
            yield a, extra[(i + 1) % len(extra)]
            yield extra[(i + 1) % len(extra)], a

    def triples(self) -> Iterable[tuple[Section, Section, Section]]:
        for a in self.basis:
            for b in self.basis:
                for c in self.basis:
                    yield a, b, c
        pool = self.randoms + self.basis
        for i, a in enumerate(self.randoms):
            yield a, pool[(i + 1) % len(pool)], pool[(i + 2) % len(pool)]
            yield pool[(i + 1) % len(pool)], a, pool[(i + 2) % len(pool)]

    def singles(self) -> Iterable[Section]:
        return self.basis + self.randoms


def make_pool(spec: AlgebroidSpec, sections: Sequence[Section] | None,
              seed: int, degree: int, samples: int) -> _Pool:
    rng = random.Random(seed)
    randoms = list(sections) if sections else []
    for _ in range(samples):
        randoms.append(rand_section(rng, spec, degree if spec.nvars else 0))
    functions = [rand_scalar(rng, spec.nvars, degree if spec.nvars else 0)
                 for _ in range(max(2, samples))]
    for j in range(spec.nvars):
        functions.append(Scalar.variable(j))
    return _Pool(spec, spec.basis_sections(), randoms, functions)


# -- defect helpers ------------------------------------------------------------


def _rho(spec: AlgebroidSpec, psi: Section, f: Scalar, cd: bool) -> Scalar:
    """ρ(ψ)[f]: through the anchor matrix, or as ⟨ψ, D₀f⟩ in the ring/module
    (Courant–Dorfman) reading; the two agree whenever an anchor is present."""
    if cd:
        return pairing(spec, psi, d0(spec, f))
    return rho_apply(spec, psi, f)


def _twist_split_basis(spec: AlgebroidSpec, phi: Section, psi1: Section,
                       psi2: Section) -> Section:
    """H̃(φ,ψ₁,ψ₂) via the canonical splitting of the twist."""
    args = (phi, psi1, psi2)
    if all(sum(1 for c in s.coeffs if not c.is_zero()) == 1 and
           all(c.is_zero() or c == Scalar.rational(1) for c in s.coeffs)
           for s in args):
        idx = tuple(next(i for i, c in enumerate(s.coeffs) if not c.is_zero())
                    for s in args)
        return tilde_split_basis(spec, spec.twist, idx)
    return tilde_split(spec, spec.twist)(phi, psi1, psi2)


# -- axiom checkers --------------------------------------------------------------
# Each returns a witness dict on first failure, or None.


def _ax_jacobi(spec: AlgebroidSpec, pool: _Pool) -> dict | None:
    for phi, psi1, psi2 in pool.triples():
        defect = jacobiator(spec, phi, psi1, psi2)
        if not defect.is_zero():
            return witness({"phi": phi, "psi1": psi1, "psi2": psi2}, defect)
    return None


def _ax_twisted_jacobi(spec: AlgebroidSpec, pool: _Pool) -> dict | None:
    for phi, psi1, psi2 in pool.triples():
        defect = jacobiator(spec, phi, psi1, psi2) - _twist_split_basis(
            spec, phi, psi1, psi2)
        if not defect.is_zero():
            return witness({"phi": phi, "psi1": psi1, "psi2": psi2}, defect)
    return None


def _ax_twist_membership(spec: AlgebroidSpec, pool: _Pool) -> dict | None:
    image = rho_tilde(spec, spec.twist)
    if image:
        (j, rest), value = next(iter(image.items()))
        return witness({"twist": spec.twist,
                        "component": f"d/dx{j + 1} ⊗ e{list(rest)}"}, value)
    return None


def _ax_twist_closed(spec: AlgebroidSpec, pool: _Pool) -> dict | None:
    try:
        defect = cov_derivative(spec, spec.twist)
    except UncertifiedFormError:
        return witness({"twist": spec.twist}, "twist is not in ker ρ̃")
    if not defect.is_zero():
        return witness({"twist": spec.twist}, defect)
    return None


def _make_leibniz(cd: bool):
    def check(spec: AlgebroidSpec, pool: _Pool) -> dict | None:
        for phi, psi in pool.pairs():
            for f in pool.functions:
                defect = (bracket(spec, phi, psi.scale(f))
                          - psi.scale(_rho(spec, phi, f, cd))
                          - bracket(spec, phi, psi).scale(f))
                if not defect.is_zero():
                    return witness({"phi": phi, "f": f, "psi": psi}, defect)
        return None

    return check


def _ax_symmetric_part(spec: AlgebroidSpec, pool: _Pool) -> dict | None:
    for phi, psi in pool.pairs():
        defect = (bracket(spec, phi, psi) + bracket(spec, psi, phi)
                  - d0(spec, pairing(spec, phi, psi)))
        if not defect.is_zero():
            return witness({"phi": phi, "psi": psi}, defect)
    for psi in pool.singles():
        defect = bracket(spec, psi, psi) - d0(spec, pairing(spec, psi, psi)).scale(HALF)
        if not defect.is_zero():
            return witness({"psi": psi}, defect)
    return None


def _make_invariance(cd: bool):
    def check(spec: AlgebroidSpec, pool: _Pool) -> dict | None:
        for phi, psi1, psi2 in pool.triples():
            defect = (_rho(spec, phi, pairing(spec, psi1, psi2), cd)
                      - pairing(spec, bracket(spec, phi, psi1), psi2)
                      - pairing(spec, psi1, bracket(spec, phi, psi2)))
            if not defect.is_zero():
                return witness({"phi": phi, "psi1": psi1, "psi2": psi2}, defect)
        return None

    return check


def _ax_anchor_morphism(spec: AlgebroidSpec, pool: _Pool) -> dict | None:
    for phi, psi in pool.pairs():
        defect = anchor_morphism_defect(spec, phi, psi)
        if any(not c.is_zero() for c in defect):
            return witness({"phi": phi, "psi": psi}, defect)
    return None


def _ax_derivation_bracket(spec: AlgebroidSpec, pool: _Pool) -> dict | None:
    for f in pool.functions:
        df = d0(spec, f)
        for phi in pool.singles():
            defect = bracket(spec, df, phi)
            if not defect.is_zero():
                return witness({"f": f, "phi": phi}, defect)
    return None


def _ax_derivation_isotropy(spec: AlgebroidSpec, pool: _Pool) -> dict | None:
    for f in pool.functions:
        for g in pool.functions:
            defect = pairing(spec, d0(spec, f), d0(spec, g))
            if not defect.is_zero():
                return witness({"f": f, "g": g}, defect)
    return None


def _ax_anchor_compatibility(spec: AlgebroidSpec, pool: _Pool) -> dict | None:
    # ⟨[ψ,φ],D₀f⟩ = ⟨ψ,D₀⟨φ,D₀f⟩⟩ − ⟨φ,D₀⟨ψ,D₀f⟩⟩: the ring/module form of
    # the anchor-morphism rule (the commutator orientation is forced by it)
    for psi, phi in pool.pairs():
        for f in pool.functions:
            df = d0(spec, f)
            defect = (pairing(spec, bracket(spec, psi, phi), df)
                      - pairing(spec, psi, d0(spec, pairing(spec, phi, df)))
                      + pairing(spec, phi, d0(spec, pairing(spec, psi, df))))
            if not defect.is_zero():
                return witness({"psi": psi, "phi": phi, "f": f}, defect)
    return None


def _ax_antisymmetry(spec: AlgebroidSpec, pool: _Pool) -> dict | None:
    for phi, psi in pool.pairs():
        defect = bracket(spec, phi, psi) + bracket(spec, psi, phi)
        if not defect.is_zero():
            return witness({"phi": phi, "psi": psi}, defect)
    return None


def _ax_cyclic_jacobi(spec: AlgebroidSpec, pool: _Pool) -> dict | None:
    for a, b, c in pool.triples():
        defect = (bracket(spec, a, bracket(spec, b, c))
                  + bracket(spec, b, bracket(spec, c, a))
                  + bracket(spec, c, bracket(spec, a, b)))
        if not defect.is_zero():
            return witness({"psi1": a, "psi2": b, "psi3": c}, defect)
    return None


def _ax_anchor_representation(spec: AlgebroidSpec, pool: _Pool) -> dict | None:
    for phi, psi in pool.pairs():
        for g in pool.functions:
            defect = (rho_apply(spec, bracket(spec, phi, psi), g)
                      - rho_apply(spec, phi, rho_apply(spec, psi, g))
                      + rho_apply(spec, psi, rho_apply(spec, phi, g)))
            if not defect.is_zero():
                return witness({"phi": phi, "psi": psi, "g": g}, defect)
    return None


_CD_LEIBNIZ = _make_leibniz(cd=True)
_CD_INVARIANCE = _make_invariance(cd=True)

SUITES: dict[str, list[tuple[str, Callable]]] = {
    "courant": [
        ("jacobi", _ax_jacobi),
        ("leibniz", _make_leibniz(cd=False)),
        ("symmetric-part", _ax_symmetric_part),
        ("invariance", _make_invariance(cd=False)),
    ],
    "strongly-anchored": [
        ("anchor-morphism", _ax_anchor_morphism),
        ("leibniz", _make_leibniz(cd=False)),
        ("symmetric-part", _ax_symmetric_part),
        ("invariance", _make_invariance(cd=False)),
    ],
    "h-twisted": [
        ("twist-membership", _ax_twist_membership),
        ("twisted-jacobi", _ax_twisted_jacobi),
        ("twist-closed", _ax_twist_closed),
        ("leibniz", _make_leibniz(cd=False)),
        ("symmetric-part", _ax_symmetric_part),
        ("invariance", _make_invariance(cd=False)),
    ],
    "courant-dorfman": [
        ("leibniz", _CD_LEIBNIZ),
        ("invariance", _CD_INVARIANCE),
        ("symmetric-part", _ax_symmetric_part),
        ("jacobi", _ax_jacobi),
        ("derivation-bracket", _ax_derivation_bracket),
        ("derivation-isotropy", _ax_derivation_isotropy),
    ],
    "almost-courant-dorfman": [
        ("leibniz", _CD_LEIBNIZ),
        ("invariance", _CD_INVARIANCE),
        ("symmetric-part", _ax_symmetric_part),
    ],
    "sa-courant-dorfman": [
        ("leibniz", _CD_LEIBNIZ),
        ("invariance", _CD_INVARIANCE),
        ("symmetric-part", _ax_symmetric_part),
        ("anchor-compatibility", _ax_anchor_compatibility),
    ],
    "h-twisted-cd": [
        ("leibniz", _CD_LEIBNIZ),
        ("invariance", _CD_INVARIANCE),
        ("symmetric-part", _ax_symmetric_part),
        ("twisted-jacobi", _ax_twisted_jacobi),
        ("twist-closed", _ax_twist_closed),
        ("derivation-bracket", _ax_derivation_bracket),
        ("derivation-isotropy", _ax_derivation_isotropy),
    ],
    "lie-rinehart": [
        ("antisymmetry", _ax_antisymmetry),
        ("jacobi-cyclic", _ax_cyclic_jacobi),
        ("leibniz", _make_leibniz(cd=False)),
        ("anchor-representation", _ax_anchor_representation),
    ],
}

_NEEDS_TWIST = {"h-twisted", "h-twisted-cd"}


def check_axioms(spec: AlgebroidSpec, suite: str,
                 sections: Sequence[Section] | None = None,
                 seed: int = 0, degree: int = 2,
                 samples: int = 3) -> CheckReport:
    """Run one axiom suite; deterministic for a fixed seed.

    ``sections`` are extra caller-supplied test sections; ``samples`` random
    polynomial sections of the given degree are always added.
    """
    if suite not in SUITES:
        raise UnknownSuiteError(
            f"unknown suite {suite!r}; known: {', '.join(sorted(SUITES))}")
    if suite in _NEEDS_TWIST and spec.twist is None:
        raise SuiteNotApplicableError(
            f"suite {suite!r} needs a twist, but the structure declares none")
    pool = make_pool(spec, sections, seed, degree, samples)
    report = CheckReport(suite=suite)
    for axiom, checker in SUITES[suite]:
        w = checker(spec, pool)
        report.checks.append(AxiomCheck(axiom, "pass" if w is None else "fail", w))
    return report
