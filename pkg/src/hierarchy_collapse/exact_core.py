"""Exact rational scalars, dense matrices and the binomial/Pascal helpers.

Every number in the package is a :class:`fractions.Fraction`.  Matrices are
plain row-major lists of lists; nothing here ever rounds.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

Rational = Fraction
Vector = list[Fraction]
Matrix = list[list[Fraction]]


class SingularMatrixError(ArithmeticError):
    """Raised by :func:`solve` when the system has no unique solution."""


def Q(value) -> Fraction:
    """Coerce ints, Fractions and rational strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass a string such as '1/10'")
    return Fraction(value)


def parse_rational(token: str) -> Fraction:
    """Parse ``p``, ``-p`` or ``p/q`` (q > 0, no inner whitespace)."""
    tok = token.strip()
    if not tok or any(c.isspace() for c in tok):
        raise ValueError(f"bad rational token {token!r}")
    num, sep, den = tok.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"bad rational token {token!r}") from None
    if sep and (den.startswith(("+", "-")) or q <= 0):
        raise ValueError(f"denominator must be a positive integer in {token!r}")
    return Fraction(p, q)


def format_rational(x: Fraction) -> str:
    x = Q(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def binom(i: int, j: int) -> Fraction:
    """Binomial coefficient with C(i, j) = 0 whenever j < 0 or j > i."""
    if i < 0:
        raise ValueError("binom: upper argument must be non-negative")
    if j < 0 or j > i:
        return Fraction(0)
    return Fraction(comb(i, j))


def ibinom(i: int, j: int) -> int:
    if i < 0 or j < 0 or j > i:
        return 0
    return comb(i, j)


def to_matrix(rows: Iterable[Iterable]) -> Matrix:
    return [[Q(v) for v in row] for row in rows]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if a and len(a[0]) != len(b):
        raise ValueError("matmul: inner dimensions differ")
    cols = list(zip(*b)) if b else []
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in cols] for row in a]


def matvec(a: Matrix, x: Sequence[Fraction]) -> Vector:
    return [sum((v * w for v, w in zip(row, x)), Fraction(0)) for row in a]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)]


def _check_square(m: Matrix) -> int:
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("matrix must be square")
    return n


def det(m: Matrix) -> Fraction:
    """Determinant by Bareiss fraction-free elimination."""
    n = _check_square(m)
    if n == 0:
        return Fraction(1)
    # Clear denominators so the elimination runs on integers.
    scale = 1
    for row in m:
        for v in row:
            v = Q(v)
            scale = scale * v.denominator // _gcd(scale, v.denominator)
    a = [[int(Q(v) * scale) for v in row] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        piv = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * piv - aik * row_k[j]) // prev
        prev = piv
    return Fraction(sign * a[n - 1][n - 1], scale**n)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def solve(m: Matrix, b: Sequence) -> Vector:
    """Unique solution of ``m x = b`` by Gauss-Jordan elimination."""
    n = _check_square(m)
    if len(b) != n:
        raise ValueError("solve: right-hand side has the wrong length")
    aug = [[Q(v) for v in row] + [Q(bi)] for row, bi in zip(m, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        pr = aug[col]
        inv = 1 / pr[col]
        pr[:] = [v * inv for v in pr]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                row = aug[r]
                row[:] = [v - f * w for v, w in zip(row, pr)]
    return [row[n] for row in aug]


def nullspace(m: Matrix, ncols: int | None = None) -> list[Vector]:
    """Basis of {x : m x = 0} from the reduced row echelon form."""
    cols = ncols if ncols is not None else (len(m[0]) if m else 0)
    a = [[Q(v) for v in row] for row in m]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [v - f * w for v, w in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * cols
        v[fcol] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -a[i][fcol]
        basis.append(v)
    return basis


def rank(m: Matrix) -> int:
    if not m:
        return 0
    return len(m[0]) - len(nullspace(m))


def pascal_P(k: int) -> Matrix:
    """Upper-triangular Pascal matrix, entry (l, r) = C(k-l, r-l)."""
    if k < 0:
        raise ValueError("level must be non-negative")
    return [[binom(k - l, r - l) if l <= r else Fraction(0) for r in range(k + 1)] for l in range(k + 1)]


def pascal_Q(k: int) -> Matrix:
    """Inverse of :func:`pascal_P`: entry (l, r) = (-1)^(l+r) C(k-l, r-l)."""
    if k < 0:
        raise ValueError("level must be non-negative")
    return [
        [(-1) ** (l + r) * binom(k - l, r - l) if l <= r else Fraction(0) for r in range(k + 1)]
        for l in range(k + 1)
    ]


def dot(a: Sequence, b: Sequence) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def primitive(coeffs: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a rational vector to the unique primitive integer vector with the same direction."""
    den = 1
    for v in coeffs:
        den = den * v.denominator // _gcd(den, v.denominator)
    ints = [int(v * den) for v in coeffs]
    g = 0
    for v in ints:
        g = _gcd(g, abs(v))
    if g == 0:
        return tuple(ints)
    return tuple(v // g for v in ints)
