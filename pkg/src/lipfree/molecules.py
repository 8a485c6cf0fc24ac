"""Weighted molecule families and their derived exact data.

A molecule family is an ordered list of point pairs (x_i, y_i), x_i != y_i,
with positive rational weights. Two derived forms drive every decision in the
package: the beta matrix beta[j][k] = d(x_j, y_k) - d(x_j, y_j), and the
expansion into signed point masses with the base point eliminated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InputError
from .metric import FiniteMetricSpace, as_fraction

Pair = tuple[int, int]


@dataclass(frozen=True)
class MoleculeSystem:
    """Ordered weighted family of molecules; order defines truncation prefixes."""

    pairs: tuple[Pair, ...]
    weights: tuple[Fraction, ...]

    @property
    def total_weight(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    @property
    def normalized(self) -> bool:
        return self.total_weight == 1

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class BetaMatrix:
    """Square rational matrix with zero diagonal, indexed by pair positions."""

    beta: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        n = len(self.beta)
        rows = tuple(
            tuple(as_fraction(x, f"beta[{i}]") for x in row)
            for i, row in enumerate(self.beta)
        )
        if any(len(row) != n for row in rows):
            raise InputError("beta matrix must be square")
        for i in range(n):
            if rows[i][i] != 0:
                raise InputError(f"beta matrix diagonal must be zero (row {i})")
        object.__setattr__(self, "beta", rows)

    @property
    def size(self) -> int:
        return len(self.beta)


@dataclass(frozen=True)
class PointMassElement:
    """Canonical finitely supported element: point index -> nonzero coefficient.

    The base point never appears (its evaluation functional is zero in the
    free space), and zero coefficients are dropped.
    """

    coeffs: dict[int, Fraction]

    def is_zero(self) -> bool:
        return not self.coeffs


def build_system(
    space: FiniteMetricSpace,
    pairs: Sequence[Pair],
    weights: Sequence,
) -> MoleculeSystem:
    """Validate and freeze a molecule family.

    Zero or negative weights are rejected outright; duplicate pairs are kept.
    """
    if len(pairs) != len(weights):
        raise InputError("pairs and weights must have equal length")
    checked: list[Pair] = []
    for i, (x, y) in enumerate(pairs):
        if not (0 <= x < len(space) and 0 <= y < len(space)):
            raise InputError(f"pair {i}: point index out of range")
        if x == y:
            raise InputError(f"pair {i}: molecule endpoints must be distinct")
        checked.append((x, y))
    ws = []
    for i, w in enumerate(weights):
        w = as_fraction(w, f"weight {i}")
        if w <= 0:
            raise InputError(f"weight {i} must be strictly positive")
        ws.append(w)
    return MoleculeSystem(pairs=tuple(checked), weights=tuple(ws))


def _pairs_of(system_or_pairs) -> tuple[Pair, ...]:
    if isinstance(system_or_pairs, MoleculeSystem):
        return system_or_pairs.pairs
    return tuple((int(x), int(y)) for x, y in system_or_pairs)


def beta_matrix(space: FiniteMetricSpace, system_or_pairs) -> BetaMatrix:
    """beta[j][k] = d(x_j, y_k) - d(x_j, y_j), exactly; zero diagonal."""
    pairs = _pairs_of(system_or_pairs)
    for i, (x, y) in enumerate(pairs):
        if x == y:
            raise InputError(f"pair {i}: molecule endpoints must be distinct")
    d = space.dist
    rows = tuple(
        tuple(d[xj][yk] - d[xj][yj] for (_, yk) in pairs)
        for (xj, yj) in pairs
    )
    return BetaMatrix(beta=rows)


def to_point_masses(
    space: FiniteMetricSpace, system: MoleculeSystem
) -> PointMassElement:
    """Expand sum of lambda_i * (delta_x - delta_y)/d(x,y) into coefficients."""
    coeffs: dict[int, Fraction] = {}
    for (x, y), w in zip(system.pairs, system.weights):
        unit = w / space.d(x, y)
        coeffs[x] = coeffs.get(x, Fraction(0)) + unit
        coeffs[y] = coeffs.get(y, Fraction(0)) - unit
    coeffs.pop(space.base, None)
    return PointMassElement(
        coeffs={p: c for p, c in sorted(coeffs.items()) if c != 0}
    )


def element_from_coeffs(space: FiniteMetricSpace, coeffs: dict) -> PointMassElement:
    """Build a canonical element from raw label-free coefficients.

    A coefficient on the base point is legal input but contributes nothing,
    so it is dropped along with zero coefficients.
    """
    out: dict[int, Fraction] = {}
    for p, c in coeffs.items():
        p = int(p)
        if not (0 <= p < len(space)):
            raise InputError(f"coefficient index {p} out of range")
        c = as_fraction(c, f"coefficient of point {p}")
        if p == space.base or c == 0:
            continue
        out[p] = out.get(p, Fraction(0)) + c
    return PointMassElement(coeffs={p: c for p, c in sorted(out.items()) if c != 0})
