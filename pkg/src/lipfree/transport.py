"""Exact free-space norm of finitely supported elements, with certificates.

The norm is the optimal transportation cost between the positive and negative
parts of the coefficient vector, the base point absorbing the residual mass.
A successive-shortest-path min-cost flow over the complete point graph with
exact rational arithmetic yields both the optimal plan and, through its node
potentials, a 1-Lipschitz dual function realising the same value, so every
certificate carries a zero duality gap by construction.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction

from .errors import CertificateMismatchError
from .metric import FiniteMetricSpace
from .molecules import MoleculeSystem, PointMassElement, to_point_masses
from .norming import LipschitzFunction, lipschitz_constant, make_function

PlanLeg = tuple[int, int, Fraction]


@dataclass(frozen=True)
class TransportCertificate:
    """Primal plan and dual function proving the norm value exactly."""

    value: Fraction
    plan: tuple[PlanLeg, ...]
    dual: LipschitzFunction


def _balances(space: FiniteMetricSpace, element: PointMassElement) -> list[Fraction]:
    balance = [Fraction(0)] * len(space)
    for p, c in element.coeffs.items():
        balance[p] = c
    balance[space.base] = -sum(element.coeffs.values())
    return balance


def _dijkstra(space, flow, pi, source):
    """Shortest reduced-cost distances in the residual graph from ``source``.

    Residual arcs: every forward arc (u,v) at cost d(u,v) (infinite capacity),
    plus the reverse arc of each positive-flow arc at cost -d. The reverse arc
    is always the cheaper option when present.
    """
    n = len(space)
    INF = None
    dist: list[Fraction | None] = [INF] * n
    pred: list[int | None] = [None] * n
    dist[source] = Fraction(0)
    heap: list[tuple[Fraction, int]] = [(Fraction(0), source)]
    settled = [False] * n
    while heap:
        du, u = heapq.heappop(heap)
        if settled[u]:
            continue
        settled[u] = True
        for v in range(n):
            if v == u or settled[v]:
                continue
            if flow.get((v, u), 0) > 0:
                cost = -space.d(v, u)
            else:
                cost = space.d(u, v)
            rc = cost - pi[u] + pi[v]
            assert rc >= 0, "reduced costs must stay nonnegative"
            cand = du + rc
            if dist[v] is None or cand < dist[v]:
                dist[v] = cand
                pred[v] = u
                heapq.heappush(heap, (cand, v))
    return dist, pred


def _push(flow, u, v, amount):
    rev = flow.get((v, u), Fraction(0))
    if rev > 0:
        assert amount <= rev
        if rev == amount:
            del flow[(v, u)]
        else:
            flow[(v, u)] = rev - amount
    else:
        flow[(u, v)] = flow.get((u, v), Fraction(0)) + amount


def _solve_flow(space: FiniteMetricSpace, balance: list[Fraction]):
    """Return (flow dict, potentials) for the given supply/demand vector."""
    n = len(space)
    excess = list(balance)
    flow: dict[tuple[int, int], Fraction] = {}
    pi = [Fraction(0)] * n
    while True:
        sources = [i for i in range(n) if excess[i] > 0]
        if not sources:
            break
        s = sources[0]
        dist, pred = _dijkstra(space, flow, pi, s)
        sinks = [i for i in range(n) if excess[i] < 0]
        t = min(sinks, key=lambda i: (dist[i], i))
        # walk predecessors to collect the augmenting path s -> t
        arcs: list[tuple[int, int]] = []
        v = t
        while v != s:
            u = pred[v]
            arcs.append((u, v))
            v = u
        arcs.reverse()
        amount = min(excess[s], -excess[t])
        for u, v in arcs:
            rev = flow.get((v, u), Fraction(0))
            if rev > 0:
                amount = min(amount, rev)
        assert amount > 0
        for u, v in arcs:
            _push(flow, u, v, amount)
        excess[s] -= amount
        excess[t] += amount
        pi = [pi[i] - dist[i] for i in range(n)]
    return flow, pi


def _decompose(space, flow, balance) -> tuple[PlanLeg, ...]:
    """Collapse an acyclic flow into direct source-to-sink legs.

    Every decomposition path is tight under the optimal potentials, so its
    cost telescopes to exactly d(source, sink) and the collapse is exact.
    """
    x = dict(flow)
    supply = {p: b for p, b in enumerate(balance) if b > 0}
    demand = {p: -b for p, b in enumerate(balance) if b < 0}
    legs: dict[tuple[int, int], Fraction] = {}
    while supply:
        s = min(supply)
        u = s
        path: list[tuple[int, int]] = []
        seen = {s}
        while u not in demand:
            v = min(w for (a, w) in x if a == u and x[(a, w)] > 0)
            assert v not in seen, "optimal flows are acyclic"
            seen.add(v)
            path.append((u, v))
            u = v
        t = u
        amount = min(supply[s], demand[t], *(x[a] for a in path))
        for a in path:
            x[a] -= amount
            if x[a] == 0:
                del x[a]
        supply[s] -= amount
        if supply[s] == 0:
            del supply[s]
        demand[t] -= amount
        if demand[t] == 0:
            del demand[t]
        legs[(s, t)] = legs.get((s, t), Fraction(0)) + amount
    assert not x, "all flow must decompose into supply-to-demand paths"
    return tuple(
        (s, t, m) for (s, t), m in sorted(legs.items())
    )


def free_norm(
    space: FiniteMetricSpace, element: PointMassElement
) -> TransportCertificate:
    """Norm of a finitely supported element with mutually verifying certificates."""
    balance = _balances(space, element)
    if all(b == 0 for b in balance):
        dual = make_function(space, [Fraction(0)] * len(space))
        return TransportCertificate(value=Fraction(0), plan=(), dual=dual)
    flow, pi = _solve_flow(space, balance)
    plan = _decompose(space, flow, balance)
    value = sum((m * space.d(s, t) for s, t, m in plan), Fraction(0))
    base = space.base
    dual = make_function(space, [pi[i] - pi[base] for i in range(len(space))])
    cert = TransportCertificate(value=value, plan=plan, dual=dual)
    recheck_certificate(space, element, cert)
    return cert


def attains(space: FiniteMetricSpace, system: MoleculeSystem) -> bool:
    """True iff the family norm equals the total weight exactly."""
    cert = free_norm(space, to_point_masses(space, system))
    return cert.value == system.total_weight


def decompose_to_molecules(
    space: FiniteMetricSpace, element: PointMassElement
) -> MoleculeSystem:
    """Rewrite an element as a weighted molecule family attaining its norm.

    Pairs come from the optimal plan with weights mass * d(source, sink), so
    the total weight equals the norm and the family is cyclically monotone.
    """
    cert = free_norm(space, element)
    pairs = tuple((s, t) for s, t, _ in cert.plan)
    weights = tuple(m * space.d(s, t) for s, t, m in cert.plan)
    return MoleculeSystem(pairs=pairs, weights=weights)


def dual_objective(
    space: FiniteMetricSpace, element: PointMassElement, values
) -> Fraction:
    """Pairing of a function's value vector against element coefficients."""
    return sum((c * values[p] for p, c in element.coeffs.items()), Fraction(0))


def recheck_certificate(
    space: FiniteMetricSpace, element: PointMassElement, cert: TransportCertificate
) -> None:
    """Re-verify a transport certificate from raw inputs; raise on mismatch."""
    n = len(space)
    out = [Fraction(0)] * n
    for s, t, m in cert.plan:
        if not (0 <= s < n and 0 <= t < n) or s == t:
            raise CertificateMismatchError("plan leg endpoints invalid")
        if m <= 0:
            raise CertificateMismatchError("plan leg mass must be positive")
        out[s] += m
        out[t] -= m
    balance = _balances(space, element)
    if out != balance:
        raise CertificateMismatchError("plan does not balance the element")
    cost = sum((m * space.d(s, t) for s, t, m in cert.plan), Fraction(0))
    if cost != cert.value:
        raise CertificateMismatchError(
            f"plan cost {cost} differs from stated value {cert.value}"
        )
    lip = lipschitz_constant(space, cert.dual.values)
    if lip > 1 or lip != cert.dual.lip_constant:
        raise CertificateMismatchError("dual function constant is wrong")
    if cert.dual.values[space.base] != 0:
        raise CertificateMismatchError("dual function must vanish at the base")
    obj = dual_objective(space, element, cert.dual.values)
    if obj != cert.value:
        raise CertificateMismatchError(
            f"duality gap: dual objective {obj}, plan cost {cert.value}"
        )
