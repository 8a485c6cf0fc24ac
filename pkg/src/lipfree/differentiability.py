"""Differentiability of the free-space norm at weighted molecule families.

For a normalized family over a finite space the norm is Frechet
differentiable at the element iff it is Gateaux differentiable, and the
decision reduces to three exact checks: the family attains its norm (no
negative beta cycle), the potentials are unique up to a constant (every pair
rigid), and every point of the space lies on a metric segment [s, t] between
pair points with f(t) - f(s) = d(t, s). Relaxed epsilon variants of the last
two checks and the stability constant of the Frechet property live here too.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Sequence

from .errors import (
    CertificateMismatchError,
    InputError,
    NotAttainingError,
    ResourceLimitError,
)
from .metric import FiniteMetricSpace, as_fraction
from .molecules import MoleculeSystem, Pair, beta_matrix
from .norming import (
    LipschitzFunction,
    build_on_N,
    extend_upper,
    lipschitz_constant,
    make_function,
    verify_norming,
)
from .potentials import (
    NegativeCycleWitness,
    PotentialTable,
    closure,
    recheck_witness,
)


class VerdictKind(Enum):
    FRECHET = "frechet"
    NOT_GATEAUX = "not_gateaux"


@dataclass(frozen=True)
class NotAttaining:
    """The element is not on the sphere as a weighted molecule family."""

    witness: NegativeCycleWitness


@dataclass(frozen=True)
class NonUniqueOnN:
    """Pair of indices whose potential difference is not pinned."""

    pair: tuple[int, int]


@dataclass(frozen=True)
class Uncovered:
    """Point lying on no tight segment between pair points."""

    point: int


Failure = NotAttaining | NonUniqueOnN | Uncovered


@dataclass(frozen=True)
class DiffVerdict:
    kind: VerdictKind
    norming: LipschitzFunction | None = None
    failure: Failure | None = None
    coverage: dict[int, tuple[int, int]] | None = None


@dataclass(frozen=True)
class GateauxEpsReport:
    """Failures of the epsilon-relaxed differentiability conditions.

    ``cond_i`` lists non-epsilon-rigid index pairs (j, k), j < k, with their
    closure slack B[j][k] + B[k][j] >= eps. ``cond_ii`` maps each point not
    epsilon-covered to its best candidate (s, t, slack); the slack is the
    larger of the segment excess and the function slack, and is >= eps.
    """

    cond_i: tuple[tuple[int, int], ...]
    cond_ii: dict[int, tuple[int, int, Fraction]]

    @property
    def satisfied(self) -> bool:
        return not self.cond_i and not self.cond_ii


@dataclass(frozen=True)
class StabilityBound:
    theta: Fraction
    D: Fraction
    n: int
    K: Fraction


@dataclass(frozen=True)
class L1Verdict:
    isometric: bool
    orientation: tuple[bool, ...] | None
    witness: NegativeCycleWitness | None


def _table_or_raise(space, pairs) -> PotentialTable:
    result = closure(beta_matrix(space, pairs))
    if isinstance(result, NegativeCycleWitness):
        raise NotAttainingError(result)
    return result


def decide(space: FiniteMetricSpace, system: MoleculeSystem) -> DiffVerdict:
    """Full differentiability decision for a normalized molecule family."""
    if len(space) < 2:
        raise InputError("differentiability requires a space with >= 2 points")
    if not system.normalized:
        raise InputError(
            f"system weights must sum to 1 exactly, got {system.total_weight}"
        )
    result = closure(beta_matrix(space, system.pairs))
    if isinstance(result, NegativeCycleWitness):
        return DiffVerdict(
            kind=VerdictKind.NOT_GATEAUX, failure=NotAttaining(result)
        )
    n = len(system.pairs)
    for j in range(n):
        for k in range(j + 1, n):
            if (j, k) not in result.rigid_pairs:
                return DiffVerdict(
                    kind=VerdictKind.NOT_GATEAUX, failure=NonUniqueOnN((j, k))
                )
    partial = build_on_N(space, system.pairs, result)
    f = partial.values
    N = partial.domain
    coverage: dict[int, tuple[int, int]] = {}
    for p in space.points():
        hit = None
        for s in N:
            for t in N:
                if s == t or f[t] - f[s] != space.d(t, s):
                    continue
                if space.d(s, p) + space.d(t, p) == space.d(s, t):
                    hit = (s, t)
                    break
            if hit:
                break
        if hit is None:
            return DiffVerdict(kind=VerdictKind.NOT_GATEAUX, failure=Uncovered(p))
        coverage[p] = hit
    # full coverage pins the free constant, so normalise at the base point
    g1 = extend_upper(space, partial)
    shift = g1.values[space.base]
    norming = make_function(space, [v - shift for v in g1.values])
    return DiffVerdict(kind=VerdictKind.FRECHET, norming=norming, coverage=coverage)


def check_gateaux_eps(
    space: FiniteMetricSpace, system: MoleculeSystem, eps
) -> GateauxEpsReport:
    """Epsilon-relaxed rigidity and coverage report for an attaining family."""
    eps = as_fraction(eps, "eps")
    if eps <= 0:
        raise InputError("eps must be positive")
    table = _table_or_raise(space, system.pairs)
    n = len(system.pairs)
    cond_i = tuple(
        (j, k)
        for j in range(n)
        for k in range(j + 1, n)
        if table.B[j][k] + table.B[k][j] >= eps
    )
    partial = build_on_N(space, system.pairs, table)
    f = partial.values
    N = partial.domain
    cond_ii: dict[int, tuple[int, int, Fraction]] = {}
    for p in space.points():
        best: tuple[Fraction, int, int] | None = None
        covered = False
        for s in N:
            for t in N:
                if s == t:
                    continue
                seg_excess = space.d(s, p) + space.d(t, p) - space.d(s, t)
                fun_slack = space.d(t, s) - (f[t] - f[s])
                slack = max(seg_excess, fun_slack)
                if slack < eps:
                    covered = True
                    break
                if best is None or (slack, s, t) < best:
                    best = (slack, s, t)
            if covered:
                break
        if not covered:
            assert best is not None
            cond_ii[p] = (best[1], best[2], best[0])
    return GateauxEpsReport(cond_i=cond_i, cond_ii=cond_ii)


def min_coverage_slack(
    space: FiniteMetricSpace, system: MoleculeSystem, point: int
) -> Fraction:
    """Smallest eps-defeating slack of a point over all candidate pairs.

    Zero iff the point is exactly covered; any eps at most this value keeps
    the point in the cond_ii failure set of check_gateaux_eps.
    """
    table = _table_or_raise(space, system.pairs)
    partial = build_on_N(space, system.pairs, table)
    f = partial.values
    N = partial.domain
    best: Fraction | None = None
    for s in N:
        for t in N:
            if s == t:
                continue
            seg_excess = space.d(s, point) + space.d(t, point) - space.d(s, t)
            fun_slack = space.d(t, s) - (f[t] - f[s])
            slack = max(seg_excess, fun_slack)
            if best is None or slack < best:
                best = slack
    assert best is not None
    return best


def coverage_eps_prefix(
    space: FiniteMetricSpace, system: MoleculeSystem, eps
) -> int | None:
    """Smallest prefix of the pair list whose eps-segments cover the space.

    Only pairs (s, t) of prefix points with f(s) - f(t) > d(s, t) - eps count;
    None when even the full list fails to cover.
    """
    eps = as_fraction(eps, "eps")
    if eps <= 0:
        raise InputError("eps must be positive")
    table = _table_or_raise(space, system.pairs)
    partial = build_on_N(space, system.pairs, table)
    f = partial.values
    for upto in range(1, len(system.pairs) + 1):
        points_n = sorted({p for pair in system.pairs[:upto] for p in pair})
        eligible = [
            (s, t)
            for s in points_n
            for t in points_n
            if s != t and f[s] - f[t] > space.d(s, t) - eps
        ]
        def eps_covered(p: int) -> bool:
            return any(
                space.d(s, p) + space.d(t, p) < space.d(s, t) + eps
                for s, t in eligible
            )
        if all(eps_covered(p) for p in space.points()):
            return upto
    return None


def l1_basis_check(
    space: FiniteMetricSpace, pairs: Sequence[Pair], max_pairs: int = 20
) -> L1Verdict:
    """Decide whether the molecule family is isometrically an l1 basis.

    Every orientation pattern of the pairs must remain cyclically monotone;
    flipping all pairs at once corresponds to negating the norming function,
    so only patterns fixing the first pair's orientation are enumerated. The
    first failing pattern (in lexicographic order, False < True) is returned
    with its negative-cycle witness.
    """
    pairs = tuple((int(x), int(y)) for x, y in pairs)
    n = len(pairs)
    if n == 0:
        return L1Verdict(isometric=True, orientation=None, witness=None)
    if n > max_pairs:
        raise ResourceLimitError(
            f"l1 basis check is exponential; cap is {max_pairs} pairs, got {n}"
        )
    for flips in product((False, True), repeat=n - 1):
        orientation = (False,) + flips
        oriented = [
            (y, x) if flip else (x, y)
            for (x, y), flip in zip(pairs, orientation)
        ]
        result = closure(beta_matrix(space, oriented))
        if isinstance(result, NegativeCycleWitness):
            return L1Verdict(
                isometric=False, orientation=orientation, witness=result
            )
    return L1Verdict(isometric=True, orientation=None, witness=None)


def stability_bound(
    space: FiniteMetricSpace, system: MoleculeSystem
) -> StabilityBound:
    """Constant K = (4/theta + 1) * n^2 * D controlling near-norming functions."""
    if len(system.pairs) == 0:
        raise InputError("stability bound requires a nonempty system")
    theta = space.theta()
    D = space.diameter()
    n = len(system.pairs)
    K = (Fraction(4) / theta + 1) * n * n * D
    return StabilityBound(theta=theta, D=D, n=n, K=K)


def verify_stability(
    space: FiniteMetricSpace,
    system: MoleculeSystem,
    g: LipschitzFunction,
    eps,
) -> bool:
    """Check the stability implication for one candidate function g.

    If g pairs against the element above 1 - eps/min(weights), its uniform
    distance to the norming function must be at most K * eps; the implication
    is vacuously true when the hypothesis fails.
    """
    eps = as_fraction(eps, "eps")
    if eps <= 0:
        raise InputError("eps must be positive")
    verdict = decide(space, system)
    if verdict.kind is not VerdictKind.FRECHET:
        raise InputError("stability bound applies to Frechet points only")
    lip = lipschitz_constant(space, g.values)
    if lip > 1:
        raise InputError(f"candidate function has Lipschitz constant {lip} > 1")
    if g.values[space.base] != 0:
        raise InputError("candidate function must vanish at the base point")
    g_mu = sum(
        (
            w * (g.values[x] - g.values[y]) / space.d(x, y)
            for (x, y), w in zip(system.pairs, system.weights)
        ),
        Fraction(0),
    )
    if not g_mu > 1 - eps / min(system.weights):
        return True
    f = verdict.norming
    assert f is not None
    gap = max(abs(f.values[p] - g.values[p]) for p in space.points())
    return gap <= stability_bound(space, system).K * eps


def recheck_verdict(
    space: FiniteMetricSpace, system: MoleculeSystem, verdict: DiffVerdict
) -> None:
    """Re-verify a differentiability verdict from raw inputs; raise on mismatch."""
    if verdict.kind is VerdictKind.FRECHET:
        f = verdict.norming
        cov = verdict.coverage
        if f is None or cov is None:
            raise CertificateMismatchError("Frechet verdict missing certificates")
        if f.values[space.base] != 0:
            raise CertificateMismatchError("norming function must vanish at base")
        if lipschitz_constant(space, f.values) != f.lip_constant or f.lip_constant > 1:
            raise CertificateMismatchError("norming function constant is wrong")
        if not verify_norming(space, system, f):
            raise CertificateMismatchError("function does not norm every molecule")
        if set(cov) != set(space.points()):
            raise CertificateMismatchError("coverage map must mention every point")
        for p, (s, t) in cov.items():
            if s == t or f.values[t] - f.values[s] != space.d(t, s):
                raise CertificateMismatchError(f"coverage pair for {p} is not tight")
            if space.d(s, p) + space.d(t, p) != space.d(s, t):
                raise CertificateMismatchError(f"point {p} not on its segment")
        return
    failure = verdict.failure
    if isinstance(failure, NotAttaining):
        recheck_witness(beta_matrix(space, system.pairs), failure.witness)
    elif isinstance(failure, NonUniqueOnN):
        table = closure(beta_matrix(space, system.pairs))
        if isinstance(table, NegativeCycleWitness):
            raise CertificateMismatchError("non-uniqueness claimed on a negative cycle")
        j, k = failure.pair
        if table.B[j][k] + table.B[k][j] <= 0:
            raise CertificateMismatchError(f"pair {failure.pair} is actually rigid")
    elif isinstance(failure, Uncovered):
        table = closure(beta_matrix(space, system.pairs))
        if isinstance(table, NegativeCycleWitness):
            raise CertificateMismatchError("coverage claimed on a negative cycle")
        if min_coverage_slack(space, system, failure.point) == 0:
            raise CertificateMismatchError(
                f"point {failure.point} is actually covered"
            )
    else:
        raise CertificateMismatchError("verdict carries no failure object")
