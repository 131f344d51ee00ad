"""Exact scalar arithmetic and exact linear algebra over ℚ and ℚ[x1..xn].

A Scalar is either a rational number or a sparse multivariate polynomial with
rational coefficients.  Both are stored the same way: a dictionary mapping
monomial exponent tuples to Fraction coefficients,

    x1^2*x2 + 3/2   →   {(2, 1): Fraction(1), (): Fraction(3, 2)}

with two normalisation rules that make the representation *unique*:

  * no zero coefficients are stored (zero is the empty dict), and
  * exponent tuples carry no trailing zeros, so the same value has the same
    key no matter how many ring variables are nominally around.

Equal scalars therefore have identical representations and ``==`` is exact
value equality.  Term iteration order is canonicalised to graded
lexicographic (descending), which also fixes the printed form.  All
arithmetic is closed and exact; nothing is ever rounded.

Variables are named x1, x2, ... in text form (x1 is exponent position 0).
"""

from __future__ import annotations

import itertools
import re
from fractions import Fraction
from typing import Iterable, Sequence

Exponent = tuple[int, ...]

_ZERO = Fraction(0)
_ONE = Fraction(1)


class ExactError(ValueError):
    """Arithmetic request that has no exact answer in ℚ[x] (e.g. 1/x1)."""


class ParseError(ValueError):
    """Malformed polynomial/form text; carries the offending fragment."""

    def __init__(self, message: str, text: str, position: int = 0):
        super().__init__(f"{message} at position {position} in {text!r}")
        self.text = text
        self.position = position


def _trim(exp: Iterable[int]) -> Exponent:
    exp = tuple(exp)
    n = len(exp)
    while n and exp[n - 1] == 0:
        n -= 1
    return exp[:n]


def _grlex_key(exp: Exponent) -> tuple:
    return (sum(exp), exp)


class Scalar:
    """Immutable element of ℚ or ℚ[x1..xn] in canonical sparse form."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: dict[Exponent, Fraction] | None = None):
        merged: dict[Exponent, Fraction] = {}
        if terms:
            # keys may arrive untrimmed; same-monomial keys merge additively
            for exp in sorted(terms, key=_grlex_key, reverse=True):
                key = _trim(exp)
                merged[key] = merged.get(key, _ZERO) + terms[exp]
        canonical = {exp: coeff for exp, coeff in merged.items() if coeff != 0}
        object.__setattr__(self, "terms", canonical)
        object.__setattr__(self, "_hash", None)

    # -- constructors -------------------------------------------------

    @classmethod
    def rational(cls, value) -> "Scalar":
        q = Fraction(value)
        return cls({(): q} if q else {})

    @classmethod
    def variable(cls, index: int) -> "Scalar":
        """The polynomial x_{index+1} (0-based index)."""
        if index < 0:
            raise ValueError(f"variable index must be >= 0, got {index}")
        return cls({(0,) * index + (1,): _ONE})

    @classmethod
    def monomial(cls, exp: Iterable[int], coeff=1) -> "Scalar":
        return cls({tuple(exp): Fraction(coeff)})

    # -- predicates and views -----------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_rational(self) -> bool:
        return all(exp == () for exp in self.terms)

    def as_fraction(self) -> Fraction:
        if not self.terms:
            return _ZERO
        if self.is_rational():
            return self.terms[()]
        raise ExactError(f"{self} is not a rational constant")

    @property
    def max_var_index(self) -> int:
        """Largest 0-based variable index occurring, or -1 for constants."""
        return max((len(exp) for exp in self.terms), default=0) - 1

    def total_degree(self) -> int:
        return max((sum(exp) for exp in self.terms), default=0)

    # -- arithmetic ----------------------------------------------------

    @staticmethod
    def _coerce(other) -> "Scalar | None":
        if isinstance(other, Scalar):
            return other
        if isinstance(other, (int, Fraction)):
            return Scalar.rational(other)
        return None

    def __add__(self, other) -> "Scalar":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not self.terms:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for exp, coeff in other.terms.items():
            out[exp] = out.get(exp, _ZERO) + coeff
        return Scalar(out)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar({exp: -coeff for exp, coeff in self.terms.items()})

    def __sub__(self, other) -> "Scalar":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Scalar":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "Scalar":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not self.terms or not other.terms:
            return ZERO
        out: dict[Exponent, Fraction] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                if len(ea) < len(eb):
                    ea_p = ea + (0,) * (len(eb) - len(ea))
                    exp = tuple(x + y for x, y in zip(ea_p, eb))
                elif len(eb) < len(ea):
                    eb_p = eb + (0,) * (len(ea) - len(eb))
                    exp = tuple(x + y for x, y in zip(ea, eb_p))
                else:
                    exp = tuple(x + y for x, y in zip(ea, eb))
                out[exp] = out.get(exp, _ZERO) + ca * cb
        return Scalar(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Scalar":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        q = other.as_fraction()
        if q == 0:
            raise ZeroDivisionError("division of Scalar by zero")
        return self * Scalar.rational(1 / q)

    def __pow__(self, n: int) -> "Scalar":
        if not isinstance(n, int) or n < 0:
            raise ValueError("Scalar powers must be non-negative integers")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash(tuple(self.terms.items()))
            object.__setattr__(self, "_hash", h)
        return h

    # -- calculus ------------------------------------------------------

    def partial(self, var: int) -> "Scalar":
        """∂/∂x_{var+1}, exact.  Constants (and rationals) differentiate to 0."""
        out: dict[Exponent, Fraction] = {}
        for exp, coeff in self.terms.items():
            if var < len(exp) and exp[var] > 0:
                new = list(exp)
                new[var] -= 1
                out[_trim(new)] = out.get(_trim(new), _ZERO) + coeff * exp[var]
        return Scalar(out)

    def substitute(self, values: Sequence[Fraction]) -> Fraction:
        """Evaluate at a rational point (one value per variable)."""
        total = _ZERO
        for exp, coeff in self.terms.items():
            term = coeff
            for i, e in enumerate(exp):
                if e:
                    term *= values[i] ** e
            total += term
        return total

    # -- text form -------------------------------------------------------

    def to_text(self) -> str:
        """Canonical text form; round-trips through parse_scalar."""
        if not self.terms:
            return "0"
        parts: list[str] = []
        for exp, coeff in self.terms.items():
            factors = [f"x{i + 1}" + (f"^{e}" if e > 1 else "")
                       for i, e in enumerate(exp) if e]
            mag = coeff if coeff > 0 else -coeff
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            if not parts:
                parts.append(body if coeff > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(parts)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Scalar({self.to_text()!r})"


ZERO = Scalar()
ONE = Scalar.rational(1)
HALF = Scalar.rational(Fraction(1, 2))


def partial_derivative(p: Scalar, var: int) -> Scalar:
    """Exact partial derivative ∂p/∂x_{var+1}; satisfies the Leibniz rule."""
    return p.partial(var)


_RATIONAL_RE = re.compile(r"^\d+(/\d+)?$")
_VAR_RE = re.compile(r"^x(\d+)(\^(\d+))?$")


def _split_signed_terms(text: str) -> list[tuple[int, str, int]]:
    """Split ``text`` at top-level +/- into (sign, term, position) triples."""
    if not text.strip():
        raise ParseError("empty expression", text)
    out: list[tuple[int, str, int]] = []
    sign = 1
    current: list[str] = []
    start = 0
    seen_content = False
    for i, ch in enumerate(text):
        if ch in "+-" and seen_content:
            chunk = "".join(current).strip()
            if not chunk:
                raise ParseError("missing term", text, i)
            out.append((sign, chunk, start))
            sign = 1 if ch == "+" else -1
            current = []
            start = i + 1
        elif ch in "+-":
            sign *= 1 if ch == "+" else -1
            start = i + 1
        else:
            current.append(ch)
            if not ch.isspace():
                seen_content = True
    chunk = "".join(current).strip()
    if not chunk:
        raise ParseError("missing term", text, len(text))
    out.append((sign, chunk, start))
    return out


def parse_scalar(text: str) -> Scalar:
    """Parse the polynomial text syntax: terms of ``coef*x<i>^<e>*...``.

    Coefficients are rationals like ``3/2``; variables are ``x1..xn``.
    Examples: ``"x1^2 - 2*x2"``, ``"3/2*x1*x2^3"``, ``"0"``.
    """
    result = ZERO
    for sign, chunk, pos in _split_signed_terms(text):
        coeff = Fraction(sign)
        exps: dict[int, int] = {}
        for factor in chunk.split("*"):
            factor = factor.strip()
            if not factor:
                raise ParseError("empty factor", text, pos)
            if _RATIONAL_RE.match(factor):
                coeff *= Fraction(factor)
                continue
            m = _VAR_RE.match(factor)
            if not m:
                raise ParseError(f"bad factor {factor!r}", text, pos)
            idx = int(m.group(1)) - 1
            if idx < 0:
                raise ParseError("variables are named x1, x2, ...", text, pos)
            exps[idx] = exps.get(idx, 0) + (int(m.group(3)) if m.group(3) else 1)
        if exps:
            width = max(exps) + 1
            exp = tuple(exps.get(i, 0) for i in range(width))
        else:
            exp = ()
        result = result + Scalar.monomial(exp, coeff)
    return result


# ---------------------------------------------------------------------------
# Matrices


class Matrix:
    """Immutable dense matrix of Scalars with exact operations."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence[Scalar]]):
        grid = tuple(tuple(e if isinstance(e, Scalar) else Scalar.rational(e)
                           for e in row) for row in entries)
        if grid and any(len(row) != len(grid[0]) for row in grid):
            raise ValueError("ragged matrix rows")
        object.__setattr__(self, "entries", grid)
        object.__setattr__(self, "rows", len(grid))
        object.__setattr__(self, "cols", len(grid[0]) if grid else 0)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls([[ZERO] * cols for _ in range(rows)])

    def __getitem__(self, idx: tuple[int, int]) -> Scalar:
        return self.entries[idx[0]][idx[1]]

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        body = "; ".join(", ".join(e.to_text() for e in row) for row in self.entries)
        return f"Matrix[{body}]"

    def transpose(self) -> "Matrix":
        return Matrix([[self.entries[i][j] for i in range(self.rows)]
                       for j in range(self.cols)])

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self.entries[i][j] == self.entries[j][i]
            for i in range(self.rows) for j in range(i))

    def matvec(self, vec: Sequence[Scalar]) -> tuple[Scalar, ...]:
        if len(vec) != self.cols:
            raise ValueError("dimension mismatch in matvec")
        return tuple(sum((row[j] * vec[j] for j in range(self.cols)), ZERO)
                     for row in self.entries)

    def matmul(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in matmul")
        return Matrix([[sum((self.entries[i][k] * other.entries[k][j]
                             for k in range(self.cols)), ZERO)
                        for j in range(other.cols)] for i in range(self.rows)])

    def is_rational(self) -> bool:
        return all(e.is_rational() for row in self.entries for e in row)

    def fraction_grid(self) -> list[list[Fraction]]:
        """Entries as Fractions; raises ExactError on polynomial entries."""
        return [[e.as_fraction() for e in row] for row in self.entries]

    def det(self) -> Scalar:
        """Determinant by division-free Laplace expansion (memoised on
        column subsets), valid over the polynomial ring."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return ONE
        cache: dict[tuple[int, ...], Scalar] = {(): ONE}

        def minor_det(cols: tuple[int, ...]) -> Scalar:
            if cols in cache:
                return cache[cols]
            row = n - len(cols)
            total = ZERO
            for k, c in enumerate(cols):
                entry = self.entries[row][c]
                if entry.is_zero():
                    continue
                sub = minor_det(cols[:k] + cols[k + 1:])
                term = entry * sub
                total = total + term if k % 2 == 0 else total - term
            cache[cols] = total
            return total

        return minor_det(tuple(range(n)))

    def inverse(self) -> "Matrix":
        """Exact inverse.  Requires the determinant to be a nonzero rational
        (a unit of ℚ[x]); uses Gauss-Jordan over ℚ when all entries are
        rational and the adjugate otherwise."""
        if self.rows != self.cols:
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        if self.is_rational():
            grid = self.fraction_grid()
            aug = [row + [Fraction(int(i == j)) for j in range(n)]
                   for i, row in enumerate(grid)]
            for col in range(n):
                pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
                if pivot is None:
                    raise ExactError("matrix is singular")
                aug[col], aug[pivot] = aug[pivot], aug[col]
                inv = 1 / aug[col][col]
                aug[col] = [v * inv for v in aug[col]]
                for r in range(n):
                    if r != col and aug[r][col] != 0:
                        f = aug[r][col]
                        aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
            return Matrix([[Scalar.rational(aug[i][n + j]) for j in range(n)]
                           for i in range(n)])
        d = self.det()
        if not d.is_rational() or d.is_zero():
            raise ExactError("polynomial matrix inverse needs a nonzero "
                             f"rational determinant, got {d}")
        inv_d = 1 / d.as_fraction()
        cof = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                sub = Matrix([[self.entries[r][c] for c in range(n) if c != j]
                              for r in range(n) if r != i])
                sign = 1 if (i + j) % 2 == 0 else -1
                cof[j][i] = sub.det() * Fraction(sign) * inv_d
        return Matrix(cof)


def rref(m: Matrix) -> tuple[Matrix, int, tuple[int, ...]]:
    """Reduced row-echelon form of a rational matrix.

    Returns (reduced matrix, rank, pivot columns).  The RREF is unique, so
    the result is canonical.  Polynomial entries raise ExactError.
    """
    grid = m.fraction_grid()
    rows, cols = m.rows, m.cols
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if grid[i][c] != 0), None)
        if pivot is None:
            continue
        grid[r], grid[pivot] = grid[pivot], grid[r]
        inv = 1 / grid[r][c]
        grid[r] = [v * inv for v in grid[r]]
        for i in range(rows):
            if i != r and grid[i][c] != 0:
                f = grid[i][c]
                grid[i] = [v - f * w for v, w in zip(grid[i], grid[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    reduced = Matrix([[Scalar.rational(v) for v in row] for row in grid])
    return reduced, len(pivots), tuple(pivots)


def kernel_basis(m: Matrix) -> list[tuple[Scalar, ...]]:
    """Basis of the right kernel of a rational matrix.

    The returned vectors are independent, annihilated by m, and span ker m;
    their count is cols − rank.  Each vector is normalised so its first
    nonzero entry is positive.
    """
    reduced, rank, pivots = rref(m)
    grid = reduced.fraction_grid()
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    basis = []
    for f in free:
        vec = [_ZERO] * m.cols
        vec[f] = _ONE
        for r, p in enumerate(pivots):
            vec[p] = -grid[r][f]
        lead = next(v for v in vec if v != 0)
        if lead < 0:
            vec = [-v for v in vec]
        basis.append(tuple(Scalar.rational(v) for v in vec))
    return basis


def solve_rational(m: Matrix, rhs: Sequence[Scalar]) -> tuple[Scalar, ...] | None:
    """One exact solution of m·x = rhs over ℚ, or None if inconsistent."""
    grid = m.fraction_grid()
    b = [s.as_fraction() for s in rhs]
    if len(b) != m.rows:
        raise ValueError("dimension mismatch in solve_rational")
    if m.rows == 0:
        return tuple([ZERO] * m.cols)
    aug = Matrix([[Scalar.rational(v) for v in row] + [Scalar.rational(bv)]
                  for row, bv in zip(grid, b)])
    reduced, rank, pivots = rref(aug)
    if m.cols in pivots:
        return None
    sol = [ZERO] * m.cols
    rgrid = reduced.fraction_grid()
    for r, p in enumerate(pivots):
        sol[p] = Scalar.rational(rgrid[r][m.cols])
    return tuple(sol)


def wedge_indices(rank: int, degree: int) -> list[tuple[int, ...]]:
    """Strictly increasing index tuples: the basis wedges of Λ^degree."""
    return list(itertools.combinations(range(rank), degree))
