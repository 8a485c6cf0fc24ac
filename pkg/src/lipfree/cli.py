"""Command-line front end emitting byte-stable JSON certificate reports.

Exit codes: 0 positive verdict or plain success, 1 negative verdict,
2 input error (malformed documents, violated preconditions, size caps),
3 internal certificate mismatch (failed self-verification or oracle
disagreement). Every certificate is re-verified before printing.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .differentiability import (
    NonUniqueOnN,
    NotAttaining,
    Uncovered,
    VerdictKind,
    check_gateaux_eps,
    coverage_eps_prefix,
    decide,
    l1_basis_check,
    recheck_verdict,
    stability_bound,
    verify_stability,
)
from .errors import (
    CertificateMismatchError,
    InputError,
    InvalidSpaceError,
    LipfreeError,
    NotAttainingError,
    ResourceLimitError,
)
from .generators import gen_c0_truncation, gen_line, gen_random, gen_star
from .metric import validate_space
from .molecules import beta_matrix, to_point_masses
from .norming import build_on_N, extend_lower, extend_upper
from .oracles import brute_cycles, brute_dual_norm, brute_norming_uniqueness
from .potentials import (
    NegativeCycleWitness,
    check_cyclical_monotonicity,
    closure,
    recheck_witness,
)
from .serialization import (
    certificate_to_doc,
    dumps_canonical,
    function_to_doc,
    load_element_doc,
    load_space_doc,
    load_system_doc,
    parse_rational,
    partial_to_doc,
    render_rational,
    space_to_doc,
    system_to_doc,
    table_to_doc,
    witness_to_doc,
)
from .transport import decompose_to_molecules, free_norm

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_MISMATCH = 3

DEFAULT_MAX_POINTS = 512


def _max_points() -> int:
    raw = os.environ.get("LIPFREE_MAX_POINTS", "")
    if not raw:
        return DEFAULT_MAX_POINTS
    try:
        cap = int(raw)
    except ValueError:
        raise InputError(f"LIPFREE_MAX_POINTS must be an integer, got {raw!r}")
    if cap < 1:
        raise InputError("LIPFREE_MAX_POINTS must be positive")
    return cap


def _read_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as err:
        raise InputError(f"cannot read {path}: {err}") from None
    except json.JSONDecodeError as err:
        raise InputError(f"{path} is not valid JSON: {err}") from None


def _load_space(args):
    return load_space_doc(_read_json(args.space), max_points=_max_points())


def _parse_eps(text: str):
    return parse_rational(text, "eps")


def _emit(report: dict) -> None:
    sys.stdout.write(dumps_canonical(report))


# ---------------------------------------------------------------- commands


def cmd_validate(args) -> int:
    doc = _read_json(args.space)
    if not isinstance(doc, dict) or not isinstance(doc.get("labels"), list):
        raise InputError("space document needs a 'labels' list")
    if len(doc["labels"]) > _max_points():
        raise InputError("space exceeds the point cap")
    raw = doc.get("dist", [])
    if not isinstance(raw, list) or any(not isinstance(row, list) for row in raw):
        raise InputError("space dist must be a matrix (list of rows)")
    dist = [
        [parse_rational(x, f"dist[{i}][{j}]") for j, x in enumerate(row)]
        for i, row in enumerate(raw)
    ]
    report = validate_space(doc["labels"], dist, doc.get("base", ""))
    _emit(
        {
            "ok": report.ok,
            "theta": None if report.theta is None else render_rational(report.theta),
            "diameter": None
            if report.diameter is None
            else render_rational(report.diameter),
            "violations": [[kind, list(idx)] for kind, idx in report.violations],
        }
    )
    return EXIT_OK if report.ok else EXIT_NEGATIVE


def cmd_gen(args) -> int:
    if args.kind == "star":
        space = gen_star(args.size)
    elif args.kind in ("c0", "c0_truncation"):
        space = gen_c0_truncation(args.size)
    elif args.kind == "line":
        space = gen_line(args.size)
    elif args.kind == "random":
        space = gen_random(args.size, args.seed, args.profile)
    else:  # pragma: no cover - argparse restricts choices
        raise InputError(f"unknown generator kind {args.kind!r}")
    if len(space) > _max_points():
        raise InputError("generated space exceeds the point cap")
    _emit(space_to_doc(space))
    return EXIT_OK


def cmd_norm(args) -> int:
    space = _load_space(args)
    element = load_element_doc(space, _read_json(args.element))
    cert = free_norm(space, element)
    report = certificate_to_doc(space, cert)
    if args.oracle:
        reference = brute_dual_norm(space, element)
        if reference != cert.value:
            raise CertificateMismatchError(
                f"oracle disagreement: vertex sweep {reference}, solver {cert.value}"
            )
        report["oracle"] = "agree"
    _emit(report)
    return EXIT_OK


def cmd_attains(args) -> int:
    space = _load_space(args)
    system = load_system_doc(space, _read_json(args.system))
    cert = free_norm(space, to_point_masses(space, system))
    attained = cert.value == system.total_weight
    verdict = check_cyclical_monotonicity(space, system.pairs)
    if attained == (not verdict.holds):
        raise CertificateMismatchError(
            "norm attainment and cyclical monotonicity disagree"
        )
    report = {
        "attains": attained,
        "norm": render_rational(cert.value),
        "total_weight": render_rational(system.total_weight),
    }
    if not attained:
        recheck_witness(beta_matrix(space, system.pairs), verdict.witness)
        report["witness"] = witness_to_doc(space, system.pairs, verdict.witness)
    if args.oracle:
        min_sum, _ = brute_cycles(beta_matrix(space, system.pairs))
        if (min_sum >= 0) != attained:
            raise CertificateMismatchError("cycle enumeration oracle disagrees")
        report["oracle"] = "agree"
    _emit(report)
    return EXIT_OK if attained else EXIT_NEGATIVE


def cmd_decompose(args) -> int:
    space = _load_space(args)
    element = load_element_doc(space, _read_json(args.element))
    system = decompose_to_molecules(space, element)
    if system.pairs and not check_cyclical_monotonicity(space, system.pairs).holds:
        raise CertificateMismatchError("decomposition is not cyclically monotone")
    report = system_to_doc(space, system)
    report["total_weight"] = render_rational(system.total_weight)
    _emit(report)
    return EXIT_OK


def cmd_potentials(args) -> int:
    space = _load_space(args)
    system = load_system_doc(space, _read_json(args.system))
    beta = beta_matrix(space, system.pairs)
    result = closure(beta)
    if args.oracle:
        min_sum, _ = brute_cycles(beta)
        if (min_sum < 0) != isinstance(result, NegativeCycleWitness):
            raise CertificateMismatchError("cycle enumeration oracle disagrees")
    if isinstance(result, NegativeCycleWitness):
        recheck_witness(beta, result)
        report = {"holds": False, "witness": witness_to_doc(space, system.pairs, result)}
        if args.oracle:
            report["oracle"] = "agree"
        _emit(report)
        return EXIT_NEGATIVE
    report = {"holds": True, **table_to_doc(result)}
    if args.oracle:
        report["oracle"] = "agree"
    _emit(report)
    return EXIT_OK


def cmd_norming(args) -> int:
    space = _load_space(args)
    system = load_system_doc(space, _read_json(args.system))
    result = closure(beta_matrix(space, system.pairs))
    if isinstance(result, NegativeCycleWitness):
        recheck_witness(beta_matrix(space, system.pairs), result)
        _emit({"holds": False, "witness": witness_to_doc(space, system.pairs, result)})
        return EXIT_NEGATIVE
    partial = build_on_N(space, system.pairs, result)
    upper = extend_upper(space, partial)
    lower = extend_lower(space, partial)
    _emit(
        {
            "holds": True,
            "partial": partial_to_doc(space, partial),
            "upper": function_to_doc(space, upper),
            "lower": function_to_doc(space, lower),
        }
    )
    return EXIT_OK


def cmd_gateaux_eps(args) -> int:
    space = _load_space(args)
    system = load_system_doc(space, _read_json(args.system))
    report = check_gateaux_eps(space, system, _parse_eps(args.eps))
    _emit(
        {
            "eps": render_rational(_parse_eps(args.eps)),
            "cond_i_failures": [list(p) for p in report.cond_i],
            "cond_ii_failures": {
                space.labels[p]: {
                    "s": space.labels[s],
                    "t": space.labels[t],
                    "slack": render_rational(slack),
                }
                for p, (s, t, slack) in sorted(report.cond_ii.items())
            },
            "satisfied": report.satisfied,
        }
    )
    return EXIT_OK if report.satisfied else EXIT_NEGATIVE


def cmd_decide(args) -> int:
    space = _load_space(args)
    system = load_system_doc(space, _read_json(args.system))
    verdict = decide(space, system)
    recheck_verdict(space, system, verdict)
    if args.oracle:
        unique = brute_norming_uniqueness(space, system)
        if unique != (verdict.kind is VerdictKind.FRECHET):
            raise CertificateMismatchError("norming uniqueness oracle disagrees")
    if verdict.kind is VerdictKind.FRECHET:
        report = {
            "kind": "frechet",
            "norming": function_to_doc(space, verdict.norming),
            "coverage": {
                space.labels[p]: [space.labels[s], space.labels[t]]
                for p, (s, t) in sorted(verdict.coverage.items())
            },
        }
        if args.oracle:
            report["oracle"] = "agree"
        _emit(report)
        return EXIT_OK
    failure = verdict.failure
    if isinstance(failure, NotAttaining):
        detail = {
            "kind": "not_attaining",
            "witness": witness_to_doc(space, system.pairs, failure.witness),
        }
    elif isinstance(failure, NonUniqueOnN):
        detail = {"kind": "non_unique_on_n", "pair": list(failure.pair)}
    else:
        assert isinstance(failure, Uncovered)
        table = closure(beta_matrix(space, system.pairs))
        partial = build_on_N(space, system.pairs, table)
        upper = extend_upper(space, partial)
        lower = extend_lower(space, partial)
        gap = upper.values[failure.point] - lower.values[failure.point]
        detail = {
            "kind": "uncovered",
            "point": space.labels[failure.point],
            "extension_gap": render_rational(gap),
        }
    report = {"kind": "not_gateaux", "failure": detail}
    if args.oracle:
        report["oracle"] = "agree"
    _emit(report)
    return EXIT_NEGATIVE


def cmd_coverage_prefix(args) -> int:
    space = _load_space(args)
    system = load_system_doc(space, _read_json(args.system))
    prefix = coverage_eps_prefix(space, system, _parse_eps(args.eps))
    _emit({"eps": render_rational(_parse_eps(args.eps)), "prefix": prefix})
    return EXIT_OK if prefix is not None else EXIT_NEGATIVE


def cmd_l1_check(args) -> int:
    space = _load_space(args)
    doc = _read_json(args.system)
    if not isinstance(doc, dict) or not isinstance(doc.get("pairs"), list):
        raise InputError("l1-check needs a document with a 'pairs' list")
    pairs = []
    for i, entry in enumerate(doc["pairs"]):
        if not (isinstance(entry, list) and len(entry) == 2):
            raise InputError(f"pair {i} must be a two-element list of labels")
        pairs.append((space.index(str(entry[0])), space.index(str(entry[1]))))
    verdict = l1_basis_check(space, pairs, max_pairs=args.max_pairs)
    if verdict.isometric:
        _emit({"isometric_l1": True})
        return EXIT_OK
    oriented = [
        (y, x) if flip else (x, y)
        for (x, y), flip in zip(pairs, verdict.orientation)
    ]
    recheck_witness(beta_matrix(space, oriented), verdict.witness)
    _emit(
        {
            "isometric_l1": False,
            "orientation": list(verdict.orientation),
            "witness": witness_to_doc(space, oriented, verdict.witness),
        }
    )
    return EXIT_NEGATIVE


def cmd_stability(args) -> int:
    space = _load_space(args)
    system = load_system_doc(space, _read_json(args.system))
    verdict = decide(space, system)
    if verdict.kind is not VerdictKind.FRECHET:
        raise InputError("stability bound applies to Frechet points only")
    bound = stability_bound(space, system)
    report = {
        "theta": render_rational(bound.theta),
        "diameter": render_rational(bound.D),
        "pairs": bound.n,
        "bound": render_rational(bound.K),
    }
    if args.function is not None:
        if args.eps is None:
            raise InputError("--function requires --eps")
        from .serialization import load_function_doc

        g = load_function_doc(space, _read_json(args.function))
        verified = verify_stability(space, system, g, _parse_eps(args.eps))
        report["eps"] = render_rational(_parse_eps(args.eps))
        report["verified"] = verified
        _emit(report)
        return EXIT_OK if verified else EXIT_NEGATIVE
    _emit(report)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lipfree",
        description="Exact decision procedures for free-space geometry "
        "over finite metric spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, **flags):
        p = sub.add_parser(name)
        for flag, kwargs in flags.items():
            p.add_argument(flag, **kwargs)
        p.set_defaults(handler=handler)
        return p

    space_arg = {"required": True, "help": "space JSON document"}
    system_arg = {"required": True, "help": "system JSON document"}
    element_arg = {"required": True, "help": "element JSON document"}
    eps_arg = {"required": True, "help": "positive rational, e.g. 1/2"}
    oracle_arg = {"action": "store_true", "help": "cross-check with brute force"}

    add("validate", cmd_validate, **{"--space": space_arg})
    gen = add(
        "gen",
        cmd_gen,
        **{
            "--kind": {
                "choices": ["star", "c0", "c0_truncation", "line", "random"],
                "required": True,
            },
            "--size": {"type": int, "required": True},
            "--seed": {"type": int, "default": 0},
            "--profile": {
                "choices": ["generic", "near-degenerate"],
                "default": "generic",
            },
        },
    )
    del gen
    add("norm", cmd_norm, **{"--space": space_arg, "--element": element_arg, "--oracle": oracle_arg})
    add("attains", cmd_attains, **{"--space": space_arg, "--system": system_arg, "--oracle": oracle_arg})
    add("decompose", cmd_decompose, **{"--space": space_arg, "--element": element_arg})
    add("potentials", cmd_potentials, **{"--space": space_arg, "--system": system_arg, "--oracle": oracle_arg})
    add("norming", cmd_norming, **{"--space": space_arg, "--system": system_arg})
    add("gateaux-eps", cmd_gateaux_eps, **{"--space": space_arg, "--system": system_arg, "--eps": eps_arg})
    add("decide", cmd_decide, **{"--space": space_arg, "--system": system_arg, "--oracle": oracle_arg})
    add("coverage-prefix", cmd_coverage_prefix, **{"--space": space_arg, "--system": system_arg, "--eps": eps_arg})
    add(
        "l1-check",
        cmd_l1_check,
        **{
            "--space": space_arg,
            "--system": system_arg,
            "--max-pairs": {"type": int, "default": 20},
        },
    )
    add(
        "stability",
        cmd_stability,
        **{
            "--space": space_arg,
            "--system": system_arg,
            "--function": {"default": None, "help": "candidate function JSON"},
            "--eps": {"default": None, "help": "positive rational"},
        },
    )
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_INPUT if err.code else EXIT_OK
    try:
        return args.handler(args)
    except CertificateMismatchError as err:
        print(f"lipfree: certificate mismatch: {err}", file=sys.stderr)
        return EXIT_MISMATCH
    except (
        InvalidSpaceError,
        InputError,
        NotAttainingError,
        ResourceLimitError,
    ) as err:
        print(f"lipfree: {err}", file=sys.stderr)
        return EXIT_INPUT
    except LipfreeError as err:  # pragma: no cover - defensive
        print(f"lipfree: {err}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
