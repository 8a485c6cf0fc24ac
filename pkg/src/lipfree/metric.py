"""Finite pointed metric spaces with exact rational distances.

Every distance is a `fractions.Fraction` and every predicate in this package
is an exact comparison; no floating point enters any decision path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence

from .errors import InputError, InvalidSpaceError

#: violation kinds reported by validate_space
VIOLATION_KINDS = (
    "asymmetry",
    "dup-label",
    "negative",
    "nonzero-diag",
    "triangle",
    "zero-offdiag",
)


def as_fraction(value, where: str = "value") -> Fraction:
    """Coerce an exact rational (int or Fraction) to Fraction, rejecting floats."""
    if isinstance(value, bool) or not isinstance(value, Rational):
        raise InputError(f"{where}: expected an exact rational, got {value!r}")
    return Fraction(value)


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of checking a raw labelled distance matrix.

    ``theta`` is the minimal positive distance and ``diameter`` the maximal
    one; both are computed exactly even when validation fails, and ``theta``
    is None when no positive entry exists.
    """

    ok: bool
    violations: tuple[tuple[str, tuple[int, ...]], ...]
    theta: Fraction | None
    diameter: Fraction | None


@dataclass(frozen=True)
class FiniteMetricSpace:
    """A labelled point set with exact pairwise distances and a base point."""

    labels: tuple[str, ...]
    base: int
    dist: tuple[tuple[Fraction, ...], ...]

    def __len__(self) -> int:
        return len(self.labels)

    def points(self) -> range:
        return range(len(self.labels))

    def d(self, i: int, j: int) -> Fraction:
        return self.dist[i][j]

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise InputError(f"unknown point label {label!r}") from None

    def theta(self) -> Fraction:
        """Minimal positive distance; requires at least two points."""
        if len(self.labels) < 2:
            raise InputError("theta requires a space with at least 2 points")
        return min(
            self.dist[i][j]
            for i in self.points()
            for j in self.points()
            if i != j
        )

    def diameter(self) -> Fraction:
        return max((x for row in self.dist for x in row), default=Fraction(0))


def validate_space(
    labels: Sequence[str],
    dist: Sequence[Sequence],
    base: str,
    *,
    max_violations: int = 100,
) -> ValidationReport:
    """Check a raw labelled distance matrix against the metric axioms.

    Violations are reported as (kind, index tuple), ordered lexicographically
    by index tuple then kind, capped at ``max_violations`` for deterministic
    output. Structural problems (non-square matrix, unknown base label,
    non-rational entries) raise InputError instead of being reported.
    """
    labels = [str(l) for l in labels]
    n = len(labels)
    if n == 0:
        raise InputError("space must contain at least one point")
    if base not in labels:
        raise InputError(f"base label {base!r} not among the point labels")
    if not isinstance(dist, (list, tuple)) or any(
        not isinstance(row, (list, tuple)) for row in dist
    ):
        raise InputError("distance matrix must be a list of rows")
    if len(dist) != n or any(len(row) != n for row in dist):
        raise InputError(f"distance matrix must be {n}x{n}")
    m = [
        [as_fraction(dist[i][j], f"dist[{i}][{j}]") for j in range(n)]
        for i in range(n)
    ]

    violations: list[tuple[str, tuple[int, ...]]] = []
    for i in range(n):
        for j in range(i + 1, n):
            if labels[i] == labels[j]:
                violations.append(("dup-label", (i, j)))
    for i in range(n):
        if m[i][i] != 0:
            violations.append(("nonzero-diag", (i,)))
        for j in range(n):
            if i == j:
                continue
            if m[i][j] < 0:
                violations.append(("negative", (i, j)))
            elif m[i][j] == 0:
                violations.append(("zero-offdiag", (i, j)))
    for i in range(n):
        for j in range(i + 1, n):
            if m[i][j] != m[j][i]:
                violations.append(("asymmetry", (i, j)))
    # triangle check: endpoints i < k, any intermediate j
    for i in range(n):
        for k in range(i + 1, n):
            for j in range(n):
                if j == i or j == k:
                    continue
                if m[i][k] > m[i][j] + m[j][k]:
                    violations.append(("triangle", (i, j, k)))

    ok = not violations
    violations.sort(key=lambda v: (v[1], v[0]))
    positives = [m[i][j] for i in range(n) for j in range(n) if i != j and m[i][j] > 0]
    theta = min(positives) if positives else None
    diameter = max(x for row in m for x in row) if n else Fraction(0)
    return ValidationReport(
        ok=ok,
        violations=tuple(violations[:max_violations]),
        theta=theta,
        diameter=diameter,
    )


def build_space(
    labels: Sequence[str], dist: Sequence[Sequence], base: str
) -> FiniteMetricSpace:
    """Validate raw data and construct an immutable space; raise on failure."""
    report = validate_space(labels, dist, base)
    if not report.ok:
        raise InvalidSpaceError(report)
    labels = tuple(str(l) for l in labels)
    rows = tuple(tuple(as_fraction(x) for x in row) for row in dist)
    return FiniteMetricSpace(labels=labels, base=labels.index(base), dist=rows)


def segment(space: FiniteMetricSpace, s: int, t: int) -> frozenset[int]:
    """Points z with d(s,z) + d(t,z) = d(s,t), exactly; always contains s, t."""
    if s == t:
        raise InputError("segment endpoints must be distinct")
    d = space.dist
    return frozenset(z for z in space.points() if d[s][z] + d[t][z] == d[s][t])


def segment_eps(
    space: FiniteMetricSpace, s: int, t: int, eps: Fraction
) -> frozenset[int]:
    """Points z with d(s,z) + d(t,z) < d(s,t) + eps (strict inequality)."""
    if s == t:
        raise InputError("segment endpoints must be distinct")
    eps = as_fraction(eps, "eps")
    if eps <= 0:
        raise InputError("eps must be positive")
    d = space.dist
    return frozenset(
        z for z in space.points() if d[s][z] + d[t][z] < d[s][t] + eps
    )
