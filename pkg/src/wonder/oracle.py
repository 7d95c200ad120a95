"""Scripted oracle fixtures: replay a sequence of blow-up / bundle steps
from a fixture payload and compare the outcome against a built ring.

Step vectors reference the current ambient by basis label, so fixtures stay
valid as earlier steps extend the ring.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from wonder.algebra import (
    GradedAlgebra,
    GradedMap,
    adjoint_pushforward,
    pd_verdict,
    socle_check,
)
from wonder.blowup import block_label, blow_up, bundle_result
from wonder.engine import WonderRing
from wonder.errors import InputError
from wonder.exact_linalg import parse_rat
from wonder.io import ring_from_payload


@dataclass
class OracleRun:
    algebra: GradedAlgebra
    socle_degree: int
    steps: list  # (name, op, result object or algebra)
    verdict: object  # PdVerdict or None
    socle_problems: list = field(default_factory=list)

    @property
    def dims(self):
        return list(self.algebra.dims)


def _decode_map(payload_entries, source, target):
    """[target_label, source_label, coeff] triples into a degree-0 map."""
    images = [target.zero() for _ in range(source.total_dim)]
    coeffs: dict[int, dict] = {}
    for tgt_label, src_label, q in payload_entries:
        g = source.global_index(src_label)
        coeffs.setdefault(g, {})[tgt_label] = parse_rat(q)
    for g, vec in coeffs.items():
        images[g] = target.from_labels(vec)
    return GradedMap.from_images(source, target, 0, images)


def run_oracle(payload: dict) -> OracleRun:
    """Apply the scripted steps to the base ring and report the final
    dimension vector and duality verdict."""
    base_alg, socle = ring_from_payload({**payload["base"], "kind": "ring"})
    current = base_alg
    steps = []
    for step in payload["steps"]:
        op = step.get("op")
        name = step.get("name", "E")
        if op == "blow_up":
            center, center_socle = ring_from_payload({**step["center"], "kind": "ring"})
            pull = _decode_map(step["pullback"], current, center)
            chern = [
                current.from_labels({lbl: parse_rat(q) for lbl, q in vec})
                for vec in step["chern"]
            ]
            push_spec = step.get("pushforward", "adjoint")
            if push_spec == "adjoint":
                sp_small = socle_check(center, center_socle).pairing
                sp_big = socle_check(current, socle).pairing
                if sp_small is None or sp_big is None:
                    raise InputError("adjoint pushforward needs perfect pairings")
                push = adjoint_pushforward(pull, sp_small, sp_big)
            else:
                raise InputError("explicit pushforward payloads are not supported")
            result = blow_up(current, center, pull, push, chern, name=name)
            current = result.algebra
            steps.append((name, op, result))
        elif op == "projective_bundle":
            chern = [
                current.from_labels({lbl: parse_rat(q) for lbl, q in vec})
                for vec in step["chern"]
            ]
            result = bundle_result(current, chern, name=name)
            socle = socle + result.rank - 1
            current = result.algebra
            steps.append((name, op, result))
        else:
            raise InputError(f"unknown oracle step op {op!r}")
    rep = socle_check(current, socle)
    verdict = pd_verdict(rep.pairing) if rep.ok else None
    return OracleRun(current, socle, steps, verdict, rep.problems)


@dataclass
class CompareReport:
    dims_ok: bool
    ring_dims: list
    oracle_dims: list
    products_checked: int
    products_ok: bool
    first_mismatch: str = ""

    @property
    def ok(self) -> bool:
        return self.dims_ok and self.products_ok

    def summary(self) -> str:
        lines = [
            f"ring dims:   {' '.join(str(x) for x in self.ring_dims)}",
            f"oracle dims: {' '.join(str(x) for x in self.oracle_dims)}",
        ]
        if self.products_checked:
            lines.append(
                f"{self.products_checked} sampled products "
                f"{'agree' if self.products_ok else 'DISAGREE'}"
            )
        if self.first_mismatch:
            lines.append(f"first mismatch: {self.first_mismatch}")
        lines.append(f"result: {'pass' if self.ok else 'fail'}")
        return "\n".join(lines)


def _correspondence_images(ring: WonderRing, run: OracleRun, entries):
    """Linear map from the ring basis into the oracle ring, declared by the
    fixture: ambient classes map by label, each listed summand maps onto one
    exceptional block."""
    alg = run.algebra
    images = {}
    block_of = {}
    for name, op, result in run.steps:
        block_of[name] = result
    for i, (deg, si, g, key, lbl) in enumerate(ring.basis):
        nest_ids, mu, _ = key
        if not nest_ids:
            amb_label = ring.diagram.ambient.algebra.label_of(g)
            images[i] = alg.from_labels({amb_label: 1})
    for entry in entries:
        nest_ids = tuple(sorted(entry["nest"]))
        mu = tuple(sorted((x, int(k)) for x, k in entry["mu"]))
        name = entry["step"]
        power = int(entry["power"])
        scale = parse_rat(entry.get("scale", "1"))
        basis_map = entry.get("basis_map", {})
        result = block_of[name]
        center = result.z_embeds[power].source if result.z_embeds else None
        for i, (deg, si, g, key, lbl) in enumerate(ring.basis):
            if key[0] != nest_ids or key[1] != mu:
                continue
            burrow_alg = ring.diagram.burrows[ring.summands[si].burrow].algebra
            blabel = burrow_alg.label_of(g)
            zlabel = basis_map.get(blabel, blabel)
            target_label = block_label(result.name, zlabel, power)
            images[i] = alg.from_labels({target_label: 1}).scale(scale)
    return images


def compare_with_oracle(
    ring: WonderRing, payload: dict, *, samples: int = 30, seed: int = 0
) -> CompareReport:
    """Dimension vectors must agree degree by degree; when the fixture
    declares a basis correspondence, it must carry sampled basis products to
    products."""
    run = run_oracle(payload)
    ring_dims = list(ring.dims)
    oracle_dims = run.dims
    dims_ok = ring_dims == oracle_dims
    first = ""
    if not dims_ok:
        for k, (a, b) in enumerate(zip(ring_dims, oracle_dims)):
            if a != b:
                first = f"dimension differs at degree {k}: {a} vs {b}"
                break
        else:
            first = "dimension vectors have different lengths"
    checked = 0
    products_ok = True
    entries = payload.get("correspondence")
    if dims_ok and entries:
        images = _correspondence_images(ring, run, entries)
        if len(images) != len(ring.basis):
            missing = [
                ring.labels_flat[i] for i in range(len(ring.basis)) if i not in images
            ]
            raise InputError(
                f"correspondence does not cover the basis: missing {missing[:4]}"
            )
        alg = run.algebra
        rnd = random.Random(seed)
        n = len(ring.basis)
        pairs = [(i, j) for i in range(n) for j in range(i, n)]
        rnd.shuffle(pairs)
        for i, j in pairs[:samples]:
            checked += 1
            lhs = alg.multiply(images[i], images[j])
            prod = ring.basis_product(i, j)
            rhs = alg.zero()
            for k, q in prod.items():
                rhs = rhs + images[k].scale(q)
            if lhs != rhs:
                products_ok = False
                first = (
                    f"product {ring.labels_flat[i]} * {ring.labels_flat[j]} "
                    f"maps to {lhs!r}, ring gives {rhs!r}"
                )
                break
    return CompareReport(dims_ok, ring_dims, oracle_dims, checked, products_ok, first)
