"""Tests for differentiability verdicts, eps reports, l1 checks, stability."""

import random
from fractions import Fraction

import pytest

from lipfree import (
    InputError,
    NonUniqueOnN,
    NotAttaining,
    NotAttainingError,
    ResourceLimitError,
    Uncovered,
    VerdictKind,
    brute_norming_uniqueness,
    build_on_N,
    build_space,
    build_system,
    check_cyclical_monotonicity,
    check_gateaux_eps,
    coverage_eps_prefix,
    decide,
    extend_lower,
    extend_upper,
    gen_c0_truncation,
    gen_line,
    gen_star,
    l1_basis_check,
    make_function,
    min_coverage_slack,
    recheck_verdict,
    stability_bound,
    verify_stability,
)
from _instances import random_space, random_system

TRI = build_space(["0", "a", "b"], [[0, 2, 1], [2, 0, 2], [1, 2, 0]], "0")
A, B = 1, 2


def normalized_weights(count, rng=None):
    if rng is None:
        weights = [Fraction(1, 2**n) for n in range(1, count + 1)]
    else:
        weights = [Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(count)]
    total = sum(weights)
    return [w / total for w in weights]


def star_system(k):
    star = gen_star(k)
    pairs = [(n, 0) for n in range(1, k + 1)]
    return star, build_system(star, pairs, normalized_weights(k))


def c0_system(k):
    space = gen_c0_truncation(k)
    pairs = [(n, 0) for n in range(1, k + 1)]
    return space, build_system(space, pairs, normalized_weights(k))


def uncovered_fixture():
    return TRI, build_system(TRI, [(A, 0)], [1])


def non_unique_fixture():
    # line 0-1-2-3 with the pairs (1,0) and (3,2): attaining but the value
    # at point 2 is free, so the potentials are not pinned
    line = gen_line(4)
    system = build_system(line, [(1, 0), (3, 2)], [Fraction(1, 2)] * 2)
    return line, system


def not_attaining_fixture():
    return TRI, build_system(TRI, [(A, 0), (0, B)], [Fraction(1, 2)] * 2)


class TestDecide:
    def test_star_is_frechet_with_unit_norming(self):
        star, system = star_system(5)
        verdict = decide(star, system)
        assert verdict.kind is VerdictKind.FRECHET
        assert verdict.norming.values[0] == 0
        assert all(verdict.norming.values[p] == 1 for p in range(1, 6))
        assert set(verdict.coverage) == set(star.points())
        recheck_verdict(star, system, verdict)

    def test_uncovered_point(self):
        space, system = uncovered_fixture()
        verdict = decide(space, system)
        assert verdict.kind is VerdictKind.NOT_GATEAUX
        assert verdict.failure == Uncovered(point=B)
        table = check_cyclical_monotonicity(space, system.pairs).table
        partial = build_on_N(space, system.pairs, table)
        gap = (
            extend_upper(space, partial).values[B]
            - extend_lower(space, partial).values[B]
        )
        assert gap == 1
        recheck_verdict(space, system, verdict)

    def test_c0_truncation_norming_is_distance_to_base(self):
        space, system = c0_system(4)
        verdict = decide(space, system)
        assert verdict.kind is VerdictKind.FRECHET
        assert all(
            verdict.norming.values[p] == space.d(p, 0) for p in space.points()
        )
        recheck_verdict(space, system, verdict)

    def test_not_attaining_reported_distinctly(self):
        space, system = not_attaining_fixture()
        verdict = decide(space, system)
        assert verdict.kind is VerdictKind.NOT_GATEAUX
        assert isinstance(verdict.failure, NotAttaining)
        recheck_verdict(space, system, verdict)

    def test_non_unique_pair_reported(self):
        space, system = non_unique_fixture()
        verdict = decide(space, system)
        assert verdict.kind is VerdictKind.NOT_GATEAUX
        assert verdict.failure == NonUniqueOnN(pair=(0, 1))
        assert not brute_norming_uniqueness(space, system)
        recheck_verdict(space, system, verdict)

    def test_unnormalized_rejected(self):
        system = build_system(TRI, [(A, 0)], [Fraction(1, 2)])
        with pytest.raises(InputError):
            decide(TRI, system)

    def test_base_outside_pair_points_is_pinned_by_coverage(self):
        # line a - 0 - b: base is interior to the only pair's segment
        line = build_space(["0", "a", "b"], [[0, 1, 1], [1, 0, 2], [1, 2, 0]], "0")
        system = build_system(line, [(1, 2)], [1])
        verdict = decide(line, system)
        assert verdict.kind is VerdictKind.FRECHET
        assert verdict.norming.values == (0, 1, -1)
        recheck_verdict(line, system, verdict)

    def test_deterministic(self):
        star, system = star_system(4)
        assert decide(star, system) == decide(star, system)

    def test_matches_extension_equality_route(self):
        rng = random.Random(500)
        checked = 0
        while checked < 40:
            space = random_space(rng)
            system = random_system(rng, space, normalized=True)
            verdict = check_cyclical_monotonicity(space, system.pairs)
            if not verdict.holds:
                continue
            checked += 1
            table = verdict.table
            n = len(system.pairs)
            rigid = len(table.rigid_pairs) == n * (n - 1) // 2
            partial = build_on_N(space, system.pairs, table)
            upper = extend_upper(space, partial)
            lower = extend_lower(space, partial)
            extensions_agree = upper.values == lower.values
            frechet = decide(space, system).kind is VerdictKind.FRECHET
            assert frechet == (rigid and extensions_agree)


class TestGateauxEps:
    @pytest.mark.parametrize("eps", [Fraction(1), Fraction(1, 2), Fraction(1, 4)])
    def test_frechet_inputs_pass_every_eps(self, eps):
        star, system = star_system(4)
        report = check_gateaux_eps(star, system, eps)
        assert report.satisfied

    def test_uncovered_point_fails_at_small_eps(self):
        space, system = uncovered_fixture()
        report = check_gateaux_eps(space, system, Fraction(1, 2))
        assert report.cond_i == ()
        assert B in report.cond_ii
        s, t, slack = report.cond_ii[B]
        assert slack == 1

    def test_uncovered_point_passes_at_large_eps(self):
        space, system = uncovered_fixture()
        report = check_gateaux_eps(space, system, Fraction(2))
        assert report.satisfied

    def test_non_rigid_pair_lands_in_cond_i(self):
        space, system = non_unique_fixture()
        report = check_gateaux_eps(space, system, Fraction(1, 2))
        assert (0, 1) in report.cond_i

    def test_not_attaining_raises(self):
        space, system = not_attaining_fixture()
        with pytest.raises(NotAttainingError):
            check_gateaux_eps(space, system, Fraction(1, 2))

    def test_bad_eps_rejected(self):
        star, system = star_system(2)
        with pytest.raises(InputError):
            check_gateaux_eps(star, system, Fraction(0))

    def test_half_min_slack_traps_uncovered_point(self):
        rng = random.Random(501)
        found = 0
        while found < 15:
            space = random_space(rng)
            system = random_system(rng, space, normalized=True)
            verdict = decide(space, system) if check_cyclical_monotonicity(
                space, system.pairs
            ).holds else None
            if verdict is None or not isinstance(verdict.failure, Uncovered):
                continue
            found += 1
            point = verdict.failure.point
            slack = min_coverage_slack(space, system, point)
            assert slack > 0
            report = check_gateaux_eps(space, system, slack / 2)
            assert point in report.cond_ii


class TestCoveragePrefix:
    def test_star_needs_every_pair(self):
        star, system = star_system(5)
        assert coverage_eps_prefix(star, system, Fraction(1, 2)) == 5

    def test_c0_prefix_is_one(self):
        space, system = c0_system(6)
        assert coverage_eps_prefix(space, system, Fraction(1)) == 1

    def test_giant_eps_needs_one_pair(self):
        star, system = star_system(3)
        eps = 2 * star.diameter() + 1
        assert coverage_eps_prefix(star, system, eps) == 1

    def test_absent_when_uncoverable(self):
        space, system = uncovered_fixture()
        assert coverage_eps_prefix(space, system, Fraction(1, 2)) is None

    def test_not_attaining_raises(self):
        space, system = not_attaining_fixture()
        with pytest.raises(NotAttainingError):
            coverage_eps_prefix(space, system, Fraction(1))


class TestL1BasisCheck:
    def test_star_family_is_isometric(self):
        star = gen_star(8)
        verdict = l1_basis_check(star, [(n, 0) for n in range(1, 9)])
        assert verdict.isometric

    def test_collinear_family_fails(self):
        line = gen_line(3)
        verdict = l1_basis_check(line, [(1, 0), (2, 0)])
        assert not verdict.isometric
        assert verdict.orientation == (False, True)
        assert verdict.witness.cycle == (0, 1)
        assert verdict.witness.sum == -2

    def test_single_pair_isometric(self):
        verdict = l1_basis_check(TRI, [(A, 0)])
        assert verdict.isometric

    def test_cap_enforced(self):
        star = gen_star(25)
        pairs = [(n, 0) for n in range(1, 22)]
        with pytest.raises(ResourceLimitError):
            l1_basis_check(star, pairs)

    def test_invariant_under_global_flip_and_permutation(self):
        rng = random.Random(502)
        for _ in range(15):
            space = random_space(rng, max_points=5)
            system = random_system(rng, space, max_pairs=4)
            pairs = list(system.pairs)
            base_verdict = l1_basis_check(space, pairs).isometric
            flipped = [(y, x) for x, y in pairs]
            assert l1_basis_check(space, flipped).isometric == base_verdict
            shuffled = pairs[:]
            rng.shuffle(shuffled)
            assert l1_basis_check(space, shuffled).isometric == base_verdict


class TestStability:
    def test_star_three_constant(self):
        star, system = star_system(3)
        bound = stability_bound(star, system)
        assert bound.theta == 1
        assert bound.D == 2
        assert bound.n == 3
        assert bound.K == 90

    def test_exact_norming_function_passes(self):
        star, system = star_system(3)
        f = decide(star, system).norming
        assert verify_stability(star, system, f, Fraction(1, 16))

    def test_far_function_fails_hypothesis_vacuously(self):
        star, system = star_system(3)
        zero = make_function(star, [0] * len(star))
        assert verify_stability(star, system, zero, Fraction(1, 1024))

    def test_perturbations_within_bound(self):
        rng = random.Random(503)
        star, system = star_system(3)
        f = decide(star, system).norming
        for _ in range(100):
            eps = Fraction(1, 2 ** rng.randint(4, 10))
            delta = eps / min(system.weights)
            # convex mix with a random feasible function keeps the pairing high
            h = make_function(
                star,
                [Fraction(0)]
                + [Fraction(rng.randint(-1, 1)) for _ in range(len(star) - 1)],
            )
            assert h.lip_constant <= 1
            s = delta / 4
            g = make_function(
                star,
                [(1 - s) * f.values[p] + s * h.values[p] for p in star.points()],
            )
            assert verify_stability(star, system, g, eps)

    def test_non_frechet_rejected(self):
        space, system = uncovered_fixture()
        f = make_function(space, [0, 2, 1])
        with pytest.raises(InputError):
            verify_stability(space, system, f, Fraction(1, 16))
