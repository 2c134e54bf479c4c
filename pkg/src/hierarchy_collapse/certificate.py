"""Explicit Sherali-Adams witness for symmetric polytopes meeting every k-face.

Pipeline: face points -> averaged tails Delta -> (lambda, gamma) solving the
level-symmetric system -> the vector y_I = gamma_{|I|} -> independent checks.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import lp_exact
from .errors import ConditionAFails, InternalConsistencyError, NotIntegerEmpty
from .exact_core import Q, binom, det, matvec, pascal_P, pascal_Q, solve
from .polytope import CubeFace, HPolytope, canonical_faces, restrict_face
from .sa_hierarchy import Partition2, SAVector, build_Mk, conditional_point


def _theta(t: int, theta: Sequence) -> list[Fraction]:
    th = [Q(v) for v in theta]
    if len(th) != t + 1:
        raise ValueError(f"expected {t + 1} parameters, got {len(th)}")
    return th


def matrix_A(t: int, theta: Sequence) -> list[list[Fraction]]:
    """Rows l = 0..t, columns r = 1..t+1 (stored at position r-1)."""
    th = _theta(t, theta)
    out = []
    for l in range(t + 1):
        row = []
        for r in range(1, t + 2):
            if l < r:
                row.append((-1) ** (l + r - 1) * (binom(t - l, r - l - 1) + binom(t - l, r - l) * th[l]))
            elif l == r:
                row.append(-th[l])
            else:
                row.append(Fraction(0))
        out.append(row)
    return out


def matrix_B(t: int, theta: Sequence) -> list[list[Fraction]]:
    """Closed form of the matrix whose column r is the sum of columns r..t+1 of matrix_A."""
    th = _theta(t, theta)
    out = []
    for l in range(t + 1):
        row = []
        for r in range(1, t + 2):
            if r == t + 1:
                row.append(Fraction((-1) ** (l + t)))
            elif l == t:
                row.append(1 - th[t])
            elif l < r:
                row.append((-1) ** (l + r - 1) * (binom(t - l - 1, r - l - 2) + binom(t - l - 1, r - l - 1) * th[l]))
            else:
                row.append(Fraction(0))
        out.append(row)
    return out


def column_suffix_sums(m: list[list[Fraction]]) -> list[list[Fraction]]:
    out = []
    for row in m:
        acc = Fraction(0)
        sums = []
        for v in reversed(row):
            acc += v
            sums.append(acc)
        out.append(sums[::-1])
    return out


def omega(t: int, theta: Sequence) -> Fraction:
    """sum_r C(t, r) prod_{j<r} theta_j prod_{j>r} (1 - theta_j)."""
    th = _theta(t, theta)
    total = Fraction(0)
    for r in range(t + 1):
        term = binom(t, r)
        for j in range(r):
            term *= th[j]
        for j in range(r + 1, t + 1):
            term *= 1 - th[j]
        total += term
    return total


def _omega_tail(delta: list[Fraction], i: int) -> Fraction:
    """omega^{k-i} evaluated at (delta_i, ..., delta_k)."""
    return omega(len(delta) - 1 - i, delta[i:])


def det_A_tail(delta: list[Fraction], i: int) -> Fraction:
    """det of matrix_A on (delta_i..delta_k); the empty case (i = k+1) is 1 by convention."""
    k = len(delta) - 1
    if i == k + 1:
        return Fraction(1)
    return det(matrix_A(k - i, delta[i:]))


def alternating_expansion(delta: Sequence, i: int) -> Fraction:
    """Alternating first-row expansion of det A^{k-i}(delta_i..delta_k)."""
    d = [Q(v) for v in delta]
    k = len(d) - 1
    total = Fraction(0)
    for r in range(i, k + 1):
        term = (-1) ** (r + i) * (binom(k - i, r - i) + binom(k - i, r - i + 1) * d[i])
        for j in range(i, r):
            term *= d[j + 1]
        total += term * det_A_tail(d, r + 1)
    return total


@dataclass(frozen=True)
class DeltaVector:
    values: tuple[Fraction, ...]
    points: tuple[tuple[Fraction, ...], ...]  # the averaged face points, l = 0..k
    warnings: tuple[str, ...] = ()

    @property
    def k(self) -> int:
        return len(self.values) - 1


def extract_delta(
    P: HPolytope,
    k: int,
    tail: str = "any",
    allow_not_integer_empty: bool = False,
) -> DeltaVector:
    """Average one point of each canonical face P_l over the coordinates k+1..n.

    ``tail="any"`` takes whatever point the LP returns; ``tail="min"`` takes a
    point minimizing the tail sum.  Either is valid when the acting group is
    (k+1)-transitive; the averaged point is re-checked against P regardless.
    """
    n = P.n
    if not 0 <= k < n:
        raise ValueError(f"level must lie in 0..{n - 1}")
    if tail not in ("any", "min"):
        raise ValueError("tail must be 'any' or 'min'")
    faces = canonical_faces(n, k)  # l = k..0
    raw: dict[int, tuple[Fraction, ...]] = {}
    for face in faces:
        l = len(face.S1)
        Pl = restrict_face(P, face)
        if tail == "min":
            c = [Fraction(0)] * k + [Fraction(1)] * (n - k)
            out = lp_exact.decided(lp_exact.optimize(Pl, c))
        else:
            out = lp_exact.decided(lp_exact.feasible(Pl))
        if out.status != "optimal":
            raise ConditionAFails(face)
        raw[l] = out.point
    values, points, warnings = [], [], []
    for l in range(k + 1):
        d = sum(raw[l][k:], Fraction(0)) / (n - k)
        xbar = tuple([Fraction(1)] * l + [Fraction(0)] * (k - l) + [d] * (n - k))
        if not P.contains(xbar):
            raise InternalConsistencyError(
                f"averaged point of face l={l} leaves P; the symmetry certificate is insufficient"
            )
        if d in (0, 1):
            msg = f"Delta_{l} = {d} is not strictly inside (0,1)"
            if not allow_not_integer_empty:
                raise NotIntegerEmpty(msg)
            warnings.append(msg)
        values.append(d)
        points.append(xbar)
    return DeltaVector(tuple(values), tuple(points), tuple(warnings))


@dataclass(frozen=True)
class CertSolution:
    gamma: tuple[Fraction, ...]  # gamma_0 .. gamma_{k+1}
    lam: tuple[Fraction, ...]  # lambda_0 .. lambda_k
    omega: Fraction
    rho: tuple[Fraction, ...]  # rho^1 .. rho^{k+1}
    checks: dict[str, bool] = field(default_factory=dict)


def gamma_product(delta: Sequence) -> list[Fraction]:
    """gamma_i = prod_{j<i} delta_j * omega^{k-i}(delta_i..) / omega^k(delta), i <= k; gamma_{k+1} = gamma_k delta_k."""
    d = [Q(v) for v in delta]
    k = len(d) - 1
    w = omega(k, d)
    out = []
    for i in range(k + 1):
        p = Fraction(1)
        for j in range(i):
            p *= d[j]
        out.append(p * _omega_tail(d, i) / w)
    out.append(out[k] * d[k])
    return out


def cert_solution(delta: Sequence, k: int, strict: bool = True) -> CertSolution:
    d = _theta(k, delta)
    if strict and not all(0 < v < 1 for v in d):
        raise ValueError("Delta must lie in (0,1)^{k+1}")
    w = omega(k, d)
    if w <= 0:
        raise ValueError("omega must be positive")
    lam = []
    for l in range(k + 1):
        p = Fraction(1)
        for i in range(l):
            p *= d[i]
        for i in range(l + 1, k + 1):
            p *= 1 - d[i]
        lam.append(p / w)
    rho = []
    for i in range(1, k + 2):
        if i <= k:
            rho.append(d[i - 1] * _omega_tail(d, i) / _omega_tail(d, i - 1))
        else:
            rho.append(d[k])
    gamma = [Fraction(1)]
    for r in rho:
        gamma.append(r * gamma[-1])

    checks: dict[str, bool] = {}
    checks["gamma product formula"] = gamma == gamma_product(d)
    A = matrix_A(k, d)
    rhs = [d[0]] + [Fraction(0)] * k
    checks["A gamma = Delta_0 e_1"] = matvec(A, gamma[1:]) == rhs
    try:
        checks["gamma by elimination"] = solve(A, rhs) == gamma[1:]
    except ArithmeticError:
        checks["gamma by elimination"] = False
    checks["weights sum to 1"] = sum((binom(k, l) * lam[l] for l in range(k + 1)), Fraction(0)) == 1
    if k >= 1:
        checks["singletons inside S"] = gamma[1] == sum(
            (binom(k - 1, l - 1) * lam[l] for l in range(1, k + 1)), Fraction(0)
        )
    checks["singletons outside S"] = gamma[1] == sum(
        (binom(k, l) * lam[l] * d[l] for l in range(k + 1)), Fraction(0)
    )
    checks["lambda alternating sum"] = all(
        lam[l] == sum(((-1) ** r * binom(k - l, r) * gamma[r + l] for r in range(k - l + 1)), Fraction(0))
        for l in range(k + 1)
    )
    if strict:
        bounds = all(0 < v <= 1 for v in lam + gamma)
    else:
        bounds = all(0 <= v <= 1 for v in lam + gamma)
    checks["bounds and gamma_0 = 1"] = bounds and gamma[0] == 1
    checks["lambda = Q gamma"] = matvec(pascal_Q(k), gamma[: k + 1]) == lam
    checks["gamma = P lambda"] = matvec(pascal_P(k), lam) == gamma[: k + 1]
    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        raise InternalConsistencyError(f"certificate system violated: {', '.join(failed)}")
    return CertSolution(tuple(gamma), tuple(lam), w, tuple(rho), checks)


@dataclass(frozen=True)
class CertificateReport:
    k: int
    delta: DeltaVector
    solution: CertSolution
    y: SAVector
    checks: dict[str, bool]

    @property
    def value(self) -> Fraction:
        """sum_i y_{i}, the objective 1.x of the level-1 shadow."""
        return sum(self.y.level1(), Fraction(0))


def build_certificate(
    P: HPolytope,
    k: int,
    tail: str = "any",
    allow_not_integer_empty: bool = False,
) -> CertificateReport:
    delta = extract_delta(P, k, tail=tail, allow_not_integer_empty=allow_not_integer_empty)
    sol = cert_solution(delta.values, k, strict=not allow_not_integer_empty)
    y = SAVector.from_levels(P.n, k, sol.gamma)
    checks = dict(sol.checks)
    viol = build_Mk(P, k).first_violation(y.values)
    checks["y satisfies every row of M^k"] = viol is None
    ok_parts = True
    for l in range(k + 1):
        part = Partition2(frozenset(range(l + 1, k + 1)), frozenset(range(1, l + 1)))
        w, z = conditional_point(y, part)
        lam = sol.lam[l]
        unscaled = w if w > 0 else Fraction(1)
        singles = [frozenset()] + [frozenset({i}) for i in range(1, P.n + 1)]
        got = [unscaled * z[s] for s in singles]
        expected = [lam * v for v in (Fraction(1),) + delta.points[l]]
        if w != lam or got != expected:
            ok_parts = False
    checks["canonical conditionals equal (1, xbar^l) with weight lambda_l"] = ok_parts
    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        raise InternalConsistencyError(f"certificate verification failed: {', '.join(failed)}")
    return CertificateReport(k, delta, sol, y, checks)
