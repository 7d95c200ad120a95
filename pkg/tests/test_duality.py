from wonder.algebra import GradedMap, socle_check, tensor_algebra
from wonder.diagram import BurrowDiagram, BurrowNode
from wonder.duality import (
    block_structure_check,
    discrepancy_table,
    pd_equivalence_report,
    pullback_transfer_check,
)
from wonder.engine import build_ring
from wonder.models import _PowerAlg, corrupt_burrow, synthetic_broken


def test_equivalence_fm3(fm3_diagram, fm3_ring):
    report = pd_equivalence_report(fm3_diagram, fm3_ring)
    assert report.ok
    assert report.ring_verdict.is_pd
    assert report.failing_burrows == []


def test_blocks_fm3(fm3_diagram, fm3_ring):
    report = block_structure_check(fm3_diagram, fm3_ring)
    assert report.ok
    pairs = {(a, b) for (a, _), (b, _) in report.nonzero_blocks}
    empty = ((), ())
    deep = (("D123",), (("D123", 1),))
    assert pairs == {(empty, empty), (deep, deep)}


def test_blocks_empty_building_set():
    wrap = _PowerAlg(["1", "2"], 1)
    diagram = BurrowDiagram(
        socle_degree=2,
        elements=[],
        burrows=[BurrowNode("Y", frozenset(), 0, wrap.alg)],
        edges=[],
        singles={},
        meets={},
        nests=[],
    )
    ring = build_ring(diagram, validate=False)
    report = block_structure_check(diagram, ring)
    assert report.ok
    assert len(report.block_order) == 1


def test_discrepancy_all_pd(fm3_diagram, fm3_ring):
    report = discrepancy_table(fm3_diagram, fm3_ring)
    assert report.ring_discrepancies == (0, 0, 0, 0)
    assert report.sums_match and report.certified
    assert all(d == 0 for d in report.block_discrepancies.values())


def test_corrupted_burrow_equivalence(fm3_diagram):
    bad = corrupt_burrow(fm3_diagram, "12|3", 1)
    assert bad.validate().ok
    ring = build_ring(bad, validate=False)
    report = pd_equivalence_report(bad, ring)
    assert report.ok  # the equivalence itself holds
    assert not report.ring_verdict.is_pd
    assert "12|3" in report.failing_burrows
    assert "1|2|3" in report.failing_burrows


def test_corrupted_burrow_discrepancy_accounting(fm3_diagram):
    bad = corrupt_burrow(fm3_diagram, "12|3", 1)
    ring = build_ring(bad, validate=False)
    report = discrepancy_table(bad, ring)
    assert report.sums_match and report.certified
    assert report.ring_discrepancies[1] == 1


def test_two_corruptions_add(fm3_diagram):
    bad = corrupt_burrow(fm3_diagram, "12|3", 1)
    worse = corrupt_burrow(bad, "13|2", 1, label="dead2")
    assert worse.validate().ok
    ring = build_ring(worse, validate=False)
    report = discrepancy_table(worse, ring)
    assert report.ring_discrepancies[1] == 2
    assert report.sums_match


def test_empty_building_set_report():
    broken = synthetic_broken((1, 2, 1), 1, 9)
    diagram = BurrowDiagram(
        socle_degree=2,
        elements=[],
        burrows=[BurrowNode("Y", frozenset(), 0, broken)],
        edges=[],
        singles={},
        meets={},
        nests=[],
    )
    ring = build_ring(diagram, validate=False)
    report = pd_equivalence_report(diagram, ring)
    assert report.ok
    assert not report.ring_verdict.is_pd
    assert report.failing_burrows == ["Y"]


def _product_embedding(small):
    line = _PowerAlg(["L"], 1).alg
    big, pair = tensor_algebra(small, line)
    rev = {g: k for k, g in pair.items()}
    pull = GradedMap.from_images(
        small, big, 0, [big.basis_element(pair[(g, 0)]) for g in range(small.total_dim)]
    )
    push = GradedMap.from_images(
        big,
        small,
        -1,
        [
            small.basis_element(rev[g][0]) if rev[g][1] == 1 else small.zero()
            for g in range(big.total_dim)
        ],
    )
    return big, pull, push


def test_transfer_vacuous_on_pd():
    from wonder.models import synthetic_gorenstein

    small = synthetic_gorenstein((1, 2, 1), 5)
    big, pull, push = _product_embedding(small)
    report = pullback_transfer_check(
        socle_check(small, 2).pairing, socle_check(big, 3).pairing, pull, push
    )
    assert report.ok and report.kernel_dim == 0


def test_transfer_carries_kernel():
    small = synthetic_broken((1, 2, 1), 1, 3)
    big, pull, push = _product_embedding(small)
    report = pullback_transfer_check(
        socle_check(small, 2).pairing, socle_check(big, 3).pairing, pull, push
    )
    assert report.ok and report.kernel_dim == 1


def test_transfer_hypothesis_failure_reported():
    small = synthetic_broken((1, 2, 1), 1, 3)
    big, pull, push = _product_embedding(small)
    zero_push = GradedMap.from_images(big, small, -1, [small.zero()] * big.total_dim)
    report = pullback_transfer_check(
        socle_check(small, 2).pairing, socle_check(big, 3).pairing, pull, zero_push
    )
    assert not report.hypothesis_ok
    assert any("socle" in p for p in report.hypothesis_problems)
    assert not report.ok


def test_keel3_duality(keel3_diagram, keel3_ring):
    report = pd_equivalence_report(keel3_diagram, keel3_ring)
    assert report.ok and report.ring_verdict.is_pd
    blocks = block_structure_check(keel3_diagram, keel3_ring)
    assert blocks.ok
    table = discrepancy_table(keel3_diagram, keel3_ring)
    assert table.sums_match and table.certified
