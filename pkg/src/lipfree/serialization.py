"""JSON document schemas with canonical exact-rational encoding.

Rationals travel as JSON integers or strings "p/q" in lowest terms with
positive denominator; no float survives parsing and none is ever emitted.
Document shapes:

    space    {"labels": [...], "base": "<label>", "dist": [[...]]}
    system   {"pairs": [["a", "0"], ...], "weights": [...]}
    element  {"coeffs": {"<label>": "p/q", ...}}
    function {"values": {"<label>": "p/q", ...}, "lip": "p/q"}
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import InputError
from .metric import FiniteMetricSpace, build_space
from .molecules import (
    MoleculeSystem,
    PointMassElement,
    build_system,
    element_from_coeffs,
)
from .norming import LipschitzFunction, PartialFunction, make_function
from .potentials import NegativeCycleWitness, PotentialTable, aligned_and_cross_sums
from .transport import TransportCertificate


def parse_rational(value, where: str = "value") -> Fraction:
    """Parse an integer or a 'p/q' / 'p' string into an exact Fraction."""
    if isinstance(value, bool):
        raise InputError(f"{where}: booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        num, sep, den = text.partition("/")
        try:
            if not sep:
                return Fraction(int(num))
            d = int(den)
            if d <= 0:
                raise InputError(f"{where}: denominator must be positive in {value!r}")
            return Fraction(int(num), d)
        except ValueError:
            raise InputError(f"{where}: cannot parse rational {value!r}") from None
    raise InputError(
        f"{where}: rationals must be integers or 'p/q' strings, got {value!r}"
    )


def render_rational(value: Fraction) -> int | str:
    """Canonical rendering: bare integer when q = 1, else 'p/q' in lowest terms."""
    value = Fraction(value)
    if value.denominator == 1:
        return int(value)
    return f"{value.numerator}/{value.denominator}"


def dumps_canonical(obj) -> str:
    """Byte-stable JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, separators=(",", ": ")) + "\n"


# ---------------------------------------------------------------- documents


def load_space_doc(doc: dict, max_points: int | None = None) -> FiniteMetricSpace:
    if not isinstance(doc, dict):
        raise InputError("space document must be a JSON object")
    try:
        labels = doc["labels"]
        base = doc["base"]
        dist = doc["dist"]
    except KeyError as missing:
        raise InputError(f"space document missing key {missing}") from None
    if not isinstance(labels, list) or not all(isinstance(l, str) for l in labels):
        raise InputError("space labels must be a list of strings")
    if max_points is not None and len(labels) > max_points:
        raise InputError(
            f"space has {len(labels)} points, exceeding the cap of {max_points}"
        )
    if not isinstance(dist, list) or any(not isinstance(row, list) for row in dist):
        raise InputError("space dist must be a matrix (list of rows)")
    parsed = [
        [parse_rational(x, f"dist[{i}][{j}]") for j, x in enumerate(row)]
        for i, row in enumerate(dist)
    ]
    return build_space(labels, parsed, base)


def space_to_doc(space: FiniteMetricSpace) -> dict:
    return {
        "labels": list(space.labels),
        "base": space.labels[space.base],
        "dist": [[render_rational(x) for x in row] for row in space.dist],
    }


def load_system_doc(space: FiniteMetricSpace, doc: dict) -> MoleculeSystem:
    if not isinstance(doc, dict):
        raise InputError("system document must be a JSON object")
    try:
        raw_pairs = doc["pairs"]
        raw_weights = doc["weights"]
    except KeyError as missing:
        raise InputError(f"system document missing key {missing}") from None
    if not isinstance(raw_pairs, list) or not isinstance(raw_weights, list):
        raise InputError("system pairs and weights must be lists")
    pairs = []
    for i, entry in enumerate(raw_pairs):
        if not (isinstance(entry, list) and len(entry) == 2):
            raise InputError(f"pair {i} must be a two-element list of labels")
        pairs.append((space.index(str(entry[0])), space.index(str(entry[1]))))
    weights = [parse_rational(w, f"weight {i}") for i, w in enumerate(raw_weights)]
    return build_system(space, pairs, weights)


def system_to_doc(space: FiniteMetricSpace, system: MoleculeSystem) -> dict:
    return {
        "pairs": [
            [space.labels[x], space.labels[y]] for x, y in system.pairs
        ],
        "weights": [render_rational(w) for w in system.weights],
    }


def load_element_doc(space: FiniteMetricSpace, doc: dict) -> PointMassElement:
    if not isinstance(doc, dict):
        raise InputError("element document must be a JSON object")
    coeffs = doc.get("coeffs")
    if not isinstance(coeffs, dict):
        raise InputError("element document needs a 'coeffs' object")
    parsed = {
        space.index(str(label)): parse_rational(value, f"coeffs[{label}]")
        for label, value in coeffs.items()
    }
    return element_from_coeffs(space, parsed)


def element_to_doc(space: FiniteMetricSpace, element: PointMassElement) -> dict:
    return {
        "coeffs": {
            space.labels[p]: render_rational(c) for p, c in element.coeffs.items()
        }
    }


def function_to_doc(space: FiniteMetricSpace, f: LipschitzFunction) -> dict:
    return {
        "values": {
            space.labels[p]: render_rational(f.values[p]) for p in space.points()
        },
        "lip": render_rational(f.lip_constant),
        "base_pinned": f.base_pinned,
    }


def load_function_doc(space: FiniteMetricSpace, doc: dict) -> LipschitzFunction:
    if not isinstance(doc, dict) or not isinstance(doc.get("values"), dict):
        raise InputError("function document needs a 'values' object")
    raw = doc["values"]
    values = [Fraction(0)] * len(space)
    seen = set()
    for label, value in raw.items():
        p = space.index(str(label))
        values[p] = parse_rational(value, f"values[{label}]")
        seen.add(p)
    if seen != set(space.points()):
        raise InputError("function document must assign a value to every point")
    out = make_function(space, values)
    if "lip" in doc:
        stated = parse_rational(doc["lip"], "lip")
        if stated != out.lip_constant:
            raise InputError(
                f"stated Lipschitz constant {stated} != recomputed {out.lip_constant}"
            )
    return out


def partial_to_doc(space: FiniteMetricSpace, partial: PartialFunction) -> dict:
    return {
        "domain": [space.labels[p] for p in partial.domain],
        "values": {
            space.labels[p]: render_rational(v) for p, v in partial.values.items()
        },
    }


def certificate_to_doc(space: FiniteMetricSpace, cert: TransportCertificate) -> dict:
    return {
        "value": render_rational(cert.value),
        "plan": [
            [space.labels[s], space.labels[t], render_rational(m)]
            for s, t, m in cert.plan
        ],
        "dual": function_to_doc(space, cert.dual),
    }


def witness_to_doc(
    space: FiniteMetricSpace, pairs, witness: NegativeCycleWitness
) -> dict:
    """Witness with the violated cycle inequality rendered on both sides."""
    aligned, cross = aligned_and_cross_sums(space, pairs, witness.cycle)
    return {
        "cycle": list(witness.cycle),
        "sum": render_rational(witness.sum),
        "aligned_sum": render_rational(aligned),
        "cross_sum": render_rational(cross),
    }


def table_to_doc(table: PotentialTable) -> dict:
    return {
        "B": [[render_rational(x) for x in row] for row in table.B],
        "alphas": [render_rational(a) for a in table.alphas],
        "anchor": table.anchor,
        "rigid_pairs": [list(p) for p in sorted(table.rigid_pairs)],
        "globally_unique": table.globally_unique,
    }
