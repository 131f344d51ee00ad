"""Shared fixtures: the structures every test module works with."""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from courantkit.exact import Matrix, ONE, Scalar, ZERO
from courantkit.structure import Section
from courantkit.twist import base_form, c_twist, make_point, make_standard


def sec(*values) -> Section:
    return Section.make(values)


def so3_table():
    return {(0, 1): sec(0, 0, 1), (1, 0): sec(0, 0, -1),
            (1, 2): sec(1, 0, 0), (2, 1): sec(-1, 0, 0),
            (2, 0): sec(0, 1, 0), (0, 2): sec(0, -1, 0)}


@pytest.fixture(scope="session")
def so3():
    """Quadratic Lie algebra over a point: [e1,e2]=e3 cyclic, identity form."""
    return make_point(3, Matrix.identity(3), so3_table())


@pytest.fixture(scope="session")
def split4():
    """Abelian rank-4 point structure with gram diag(1,1,-1,-1)."""
    entries = [[ONE if i == j and i < 2 else
                (Scalar.rational(-1) if i == j else ZERO)
                for j in range(4)] for i in range(4)]
    return make_point(4, Matrix(entries), {})


@pytest.fixture(scope="session")
def hyperbolic4():
    """Abelian rank-4 point structure with the off-diagonal split pairing."""
    entries = [[ONE if abs(i - j) == 2 else ZERO for j in range(4)]
               for i in range(4)]
    return make_point(4, Matrix(entries), {})


@pytest.fixture(scope="session")
def so3_plus_so3():
    table = {}
    for base in (0, 3):
        cyc = [(base, base + 1, base + 2), (base + 1, base + 2, base),
               (base + 2, base, base + 1)]
        for i, j, k in cyc:
            table[(i, j)] = Section.basis(k, 6)
            table[(j, i)] = Section.basis(k, 6).scale(Scalar.rational(-1))
    return make_point(6, Matrix.identity(6), table)


@pytest.fixture(scope="session")
def std1():
    return make_standard(1)


@pytest.fixture(scope="session")
def std2():
    return make_standard(2)


@pytest.fixture(scope="session")
def std3():
    return make_standard(3)


@pytest.fixture(scope="session")
def std4():
    return make_standard(4)


@pytest.fixture(scope="session")
def ctwist4():
    """The exact twist of the rank-8 split bundle by C = x1 dx2^dx3^dx4."""
    return c_twist(4, base_form({(1, 2, 3): Scalar.variable(0)}))


# -- single-entry corruption helpers (negative controls) ----------------------


def corrupt_bracket(spec, i, j, section):
    from courantkit.structure import AlgebroidSpec
    from courantkit.kerforms import KerForm

    table = dict(spec.bracket_table)
    table[(i, j)] = section
    out = AlgebroidSpec(spec.ring, spec.nvars, spec.rank, spec.gram,
                        spec.anchor, table, None, spec.kind)
    if spec.twist is not None:
        out.twist = KerForm(out, 4, spec.twist.coeffs)
    return out


def corrupt_gram(spec, i, value):
    """Corrupt one diagonal Gram entry (keeps symmetry, one entry changed)."""
    from courantkit.structure import AlgebroidSpec
    from courantkit.kerforms import KerForm

    entries = [list(row) for row in spec.gram.entries]
    entries[i][i] = value
    out = AlgebroidSpec(spec.ring, spec.nvars, spec.rank, Matrix(entries),
                        spec.anchor, dict(spec.bracket_table), None, spec.kind)
    if spec.twist is not None:
        out.twist = KerForm(out, 4, spec.twist.coeffs)
    return out


def corrupt_twist(spec, key, value):
    from courantkit.structure import AlgebroidSpec
    from courantkit.kerforms import KerForm

    out = AlgebroidSpec(spec.ring, spec.nvars, spec.rank, spec.gram,
                        spec.anchor, dict(spec.bracket_table), None, spec.kind)
    coeffs = dict(spec.twist.coeffs) if spec.twist is not None else {}
    coeffs[key] = coeffs.get(key, ZERO) + value
    out.twist = KerForm(out, 4, coeffs)
    return out
