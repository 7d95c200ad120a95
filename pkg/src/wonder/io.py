"""Structured-text (JSON-syntax) file formats.

Three kinds of files share one dialect, distinguished by a ``kind`` field:

* ``diagram``  - elements, burrows (degrees, basis_labels, mult), edges
  (pullback / pushforward matrices, chern vectors), intersections (singles
  plus the binary meet closure), nests, socle_degree, named_classes;
* ``ring``     - a graded algebra with a socle degree;
* ``oracle``   - a base ring plus a scripted sequence of construction steps.

Rational entries are written as ``"p/q"`` strings (``"p"`` when integral).
Dumps are canonical: load -> dump -> load is the identity.
"""

from __future__ import annotations

import json

from wonder.algebra import Element, GradedAlgebra, GradedMap
from wonder.diagram import (
    NESTED_OR_DISJOINT,
    BuildingElement,
    BurrowDiagram,
    BurrowEdge,
    BurrowNode,
    ChernPolynomial,
)
from wonder.errors import InputError
from wonder.exact_linalg import format_rat, parse_rat


def _dump_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=1) + "\n"


def _load_json(text: str) -> dict:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"cannot parse file: {e}") from None
    if not isinstance(payload, dict) or "kind" not in payload:
        raise InputError("file lacks a 'kind' field")
    return payload


def _element_payload(elem: Element) -> list:
    return [
        [elem.alg.label_of(g), format_rat(q)]
        for g, q in sorted(elem.coeffs.items())
    ]


def _element_from(alg: GradedAlgebra, payload) -> Element:
    return alg.from_labels({lbl: parse_rat(q) for lbl, q in payload})


def _map_payload(m: GradedMap) -> list:
    triples = []
    for k, mat in enumerate(m.mats):
        for i, row in enumerate(mat):
            for j, v in enumerate(row):
                if v:
                    triples.append([k, i, j, format_rat(v)])
    return triples


def _map_from(source, target, shift, triples) -> GradedMap:
    mats = []
    for k in range(source.top_degree + 1):
        tk = k + shift
        tdim = target.dim(tk) if tk >= 0 else 0
        mats.append([[0] * source.dim(k) for _ in range(tdim)])
    for k, i, j, v in triples:
        try:
            mats[k][i][j] = parse_rat(v)
        except IndexError:
            raise InputError(f"map entry ({k},{i},{j}) out of range") from None
    return GradedMap(source, target, shift, mats)


# -- ring files -------------------------------------------------------------


def ring_payload(alg: GradedAlgebra, socle_degree: int) -> dict:
    payload = alg.to_payload()
    payload["kind"] = "ring"
    payload["socle_degree"] = socle_degree
    return payload


def ring_from_payload(payload: dict):
    if payload.get("kind") != "ring":
        raise InputError(f"expected a ring file, got kind={payload.get('kind')!r}")
    alg = GradedAlgebra.from_payload(payload)
    return alg, int(payload["socle_degree"])


def dump_ring(alg: GradedAlgebra, socle_degree: int) -> str:
    return _dump_json(ring_payload(alg, socle_degree))


def load_ring(text: str):
    return ring_from_payload(_load_json(text))


# -- diagram files ------------------------------------------------------------


def diagram_payload(diagram: BurrowDiagram) -> dict:
    elements = []
    for e in sorted(diagram.elements.values(), key=lambda e: e.id):
        entry = {"id": e.id, "codim": e.codim}
        if e.index_set is not None:
            entry["index_set"] = sorted(e.index_set)
        elements.append(entry)
    burrows = []
    for b in sorted(diagram.burrows.values(), key=lambda b: b.id):
        entry = b.algebra.to_payload()
        entry["id"] = b.id
        entry["codim"] = b.codim
        entry["defining_set"] = sorted(b.defining_set)
        burrows.append(entry)
    edges = []
    for (small, big), e in sorted(diagram.edges.items()):
        edges.append(
            {
                "small": small,
                "big": big,
                "pullback": _map_payload(e.pullback),
                "pushforward": _map_payload(e.pushforward),
                "chern": [_element_payload(c) for c in e.chern.coeffs],
            }
        )
    meets = [
        [*sorted(key), val]
        for key, val in sorted(diagram.meets.items(), key=lambda kv: sorted(kv[0]))
    ]
    if diagram.nest_rule == NESTED_OR_DISJOINT:
        nests = NESTED_OR_DISJOINT
    else:
        nests = {"explicit": sorted(sorted(s) for s in diagram.explicit_nests)}
    payload = {
        "kind": "diagram",
        "socle_degree": diagram.socle_degree,
        "elements": elements,
        "burrows": burrows,
        "edges": edges,
        "intersections": {
            "singles": dict(sorted(diagram.singles.items())),
            "meets": meets,
        },
        "nests": nests,
    }
    if diagram.named_classes:
        payload["named_classes"] = {
            name: _element_payload(elem)
            for name, elem in sorted(diagram.named_classes.items())
        }
    return payload


def diagram_from_payload(payload: dict) -> BurrowDiagram:
    if payload.get("kind") != "diagram":
        raise InputError(
            f"expected a diagram file, got kind={payload.get('kind')!r}"
        )
    try:
        elements = [
            BuildingElement(
                e["id"],
                int(e["codim"]),
                frozenset(e["index_set"]) if "index_set" in e else None,
            )
            for e in payload["elements"]
        ]
        burrows = []
        algs = {}
        for b in payload["burrows"]:
            alg = GradedAlgebra.from_payload(b)
            algs[b["id"]] = alg
            burrows.append(
                BurrowNode(
                    b["id"], frozenset(b["defining_set"]), int(b["codim"]), alg
                )
            )
        edges = []
        for e in payload["edges"]:
            small, big = e["small"], e["big"]
            sa, ba = algs[small], algs[big]
            shift = int(
                next(
                    bb["codim"] for bb in payload["burrows"] if bb["id"] == small
                )
            ) - int(next(bb["codim"] for bb in payload["burrows"] if bb["id"] == big))
            pull = _map_from(ba, sa, 0, e["pullback"])
            push = _map_from(sa, ba, shift, e["pushforward"])
            chern = ChernPolynomial(
                len(e["chern"]),
                tuple(_element_from(ba, c) for c in e["chern"]),
            )
            edges.append(BurrowEdge(small, big, pull, push, chern))
        inter = payload["intersections"]
        meets = {
            frozenset((a, b)): val for a, b, val in inter.get("meets", [])
        }
        nests = payload["nests"]
        if nests != NESTED_OR_DISJOINT:
            nests = [frozenset(s) for s in nests["explicit"]]
        named = {
            name: _element_from(algs[_ambient_id(payload)], vec)
            for name, vec in payload.get("named_classes", {}).items()
        }
        return BurrowDiagram(
            socle_degree=int(payload["socle_degree"]),
            elements=elements,
            burrows=burrows,
            edges=edges,
            singles=dict(inter["singles"]),
            meets=meets,
            nests=nests,
            named_classes=named,
        )
    except KeyError as e:
        raise InputError(f"diagram file missing field {e}") from None


def _ambient_id(payload) -> str:
    for b in payload["burrows"]:
        if int(b["codim"]) == 0:
            return b["id"]
    raise InputError("diagram file has no codim-0 burrow")


def dump_diagram(diagram: BurrowDiagram) -> str:
    return _dump_json(diagram_payload(diagram))


def load_diagram(text: str) -> BurrowDiagram:
    return diagram_from_payload(_load_json(text))


# -- oracle fixtures ----------------------------------------------------------


def load_oracle(text: str) -> dict:
    payload = _load_json(text)
    if payload.get("kind") != "oracle":
        raise InputError(
            f"expected an oracle fixture, got kind={payload.get('kind')!r}"
        )
    if "base" not in payload or "steps" not in payload:
        raise InputError("oracle fixture needs 'base' and 'steps'")
    return payload


def dump_oracle(payload: dict) -> str:
    return _dump_json(payload)


def load_any(text: str) -> tuple[str, object]:
    """Load a file of any kind; returns (kind, parsed object/payload)."""
    payload = _load_json(text)
    kind = payload["kind"]
    if kind == "diagram":
        return kind, diagram_from_payload(payload)
    if kind == "ring":
        return kind, ring_from_payload(payload)
    if kind == "oracle":
        return kind, payload
    raise InputError(f"unknown file kind {kind!r}")
