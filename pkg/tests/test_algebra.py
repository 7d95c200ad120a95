from fractions import Fraction

import pytest

from wonder.algebra import (
    GradedAlgebra,
    GradedMap,
    adjoint_pushforward,
    pd_verdict,
    projection_formula_holds,
    section_of,
    socle_check,
    socle_kernel_elements,
    tensor_algebra,
)
from wonder.errors import InputError
from wonder.models import _PowerAlg, synthetic_broken

F = Fraction


def poly_line():
    """The ring of a projective line: 1, h with h^2 = 0."""
    return _PowerAlg(["x"], 1).alg


def poly_plane():
    return _PowerAlg(["x"], 2).alg


def trivial():
    return GradedAlgebra([1], [["1"]], [])


def test_unit_multiplication():
    p = poly_plane()
    h = p.basis_element(1)
    assert p.multiply(p.unit(), h) == h


def test_plane_socle_product():
    p = poly_plane()
    h, h2 = p.basis_element(1), p.basis_element(2)
    assert p.multiply(h, h2).is_zero()  # above the top degree
    assert p.multiply(h, h) == h2


def test_top_degree_truncation():
    p = poly_plane()
    top = p.basis_element(2)
    h = p.basis_element(1)
    assert p.multiply(top, h).is_zero()


def test_socle_check_plane():
    rep = socle_check(poly_plane(), 2)
    assert rep.ok
    assert rep.pairing.gram(1) == [[F(1)]]
    assert rep.pairing.gram(0) == [[F(1)]]


def test_socle_check_trivial():
    rep = socle_check(trivial(), 0)
    assert rep.ok
    assert pd_verdict(rep.pairing).is_pd


def test_socle_check_failure_dimension():
    alg = GradedAlgebra([1, 2], [["1"], ["a", "b"]], [])
    rep = socle_check(alg, 1)
    assert not rep.ok
    assert any("socle dimension 2" in p for p in rep.problems)


def test_socle_check_failure_above():
    alg = GradedAlgebra([1, 1], [["1"], ["a"]], [])
    rep = socle_check(alg, 0)
    assert not rep.ok
    assert any("above the socle" in p for p in rep.problems)


def test_pd_verdict_plane():
    v = pd_verdict(socle_check(poly_plane(), 2).pairing)
    assert v.is_pd
    assert v.discrepancies == (0, 0, 0)


def test_pd_verdict_degenerate():
    broken = synthetic_broken((1, 2, 1), 1, 0)
    sp = socle_check(broken, 2).pairing
    assert sp.gram(1) == [[F(1), F(0)], [F(0), F(0)]]
    v = pd_verdict(sp)
    assert not v.is_pd
    assert v.discrepancies[1] == 1


def test_gram_transpose_symmetry():
    alg, _ = tensor_algebra(poly_line(), _PowerAlg(["y"], 1).alg)
    sp = socle_check(alg, 2).pairing
    for k in range(3):
        g, gt = sp.gram(k), sp.gram(2 - k)
        assert g == [[gt[j][i] for j in range(len(gt))] for i in range(len(gt[0]))]


def test_verdict_invariant_under_socle_rescaling():
    # same multiplication with the socle coordinate rescaled
    base = poly_plane()
    scaled = GradedAlgebra(
        base.dims, base.labels, [(1, 1, 2, F(3))]
    )
    v1 = pd_verdict(socle_check(base, 2).pairing)
    v2 = pd_verdict(socle_check(scaled, 2).pairing)
    assert v1.is_pd == v2.is_pd
    assert v1.discrepancies == v2.discrepancies


def test_socle_kernel_elements():
    broken = synthetic_broken((1, 2, 1), 1, 1)
    sp = socle_check(broken, 2).pairing
    kernel = socle_kernel_elements(sp, 1)
    assert len(kernel) == 1
    for g in broken.global_indices(1):
        assert sp.pair(kernel[0], broken.basis_element(g)) == 0
    assert socle_kernel_elements(sp, 0) == []
    with pytest.raises(InputError):
        socle_kernel_elements(sp, 5)


def test_socle_kernel_transpose_side():
    broken = synthetic_broken((1, 2, 2, 1), 1, 2)
    sp = socle_check(broken, 3).pairing
    assert len(socle_kernel_elements(sp, 1)) == 1
    assert len(socle_kernel_elements(sp, 2)) == 1


def test_mixed_degree_element_rejected():
    p = poly_plane()
    mixed = p.element({0: F(1), 1: F(1)})
    with pytest.raises(ValueError):
        mixed.degree()


def test_elements_from_different_algebras_do_not_mix():
    a, b = poly_plane(), poly_plane()
    with pytest.raises(InputError):
        a.unit()._same(b.unit())


def test_tensor_algebra_dims_and_products():
    alg, pair = tensor_algebra(poly_line(), _PowerAlg(["y"], 1).alg)
    assert alg.dims == (1, 2, 1)
    hx = alg.basis_element(pair[(1, 0)])
    hy = alg.basis_element(pair[(0, 1)])
    assert alg.multiply(hx, hy) == alg.basis_element(pair[(1, 1)])
    assert alg.multiply(hx, hx).is_zero()
    assert alg.check_associativity() == []


def test_graded_map_ring_hom_and_kernel():
    plane = poly_plane()
    pt = trivial()
    images = [pt.unit()] + [pt.zero()] * (plane.total_dim - 1)
    f = GradedMap.from_images(plane, pt, 0, images)
    assert f.is_ring_hom()
    assert f.is_surjective()
    assert not f.is_injective()
    assert len(f.kernel_elements(1)) == 1
    assert len(f.kernel_elements(0)) == 0


def test_section_and_adjoint_projection_formula():
    plane = poly_plane()
    pt = trivial()
    images = [pt.unit()] + [pt.zero()] * (plane.total_dim - 1)
    pull = GradedMap.from_images(plane, pt, 0, images)
    sec = section_of(pull)
    for g in range(pt.total_dim):
        assert pull.apply(sec.apply_basis(g)) == pt.basis_element(g)
    push = adjoint_pushforward(pull, socle_check(pt, 0).pairing, socle_check(plane, 2).pairing)
    assert push.shift == 2
    assert projection_formula_holds(pull, push)
    assert push.apply(pt.unit()) == plane.basis_element(2)  # the point class


def test_constructed_algebra_rejects_bad_grading():
    with pytest.raises(InputError):
        GradedAlgebra([1, 1], [["1"], ["a"]], [(1, 1, 1, F(1))])
    with pytest.raises(InputError):
        GradedAlgebra([2, 1], [["1", "u"], ["a"]], [])
    with pytest.raises(InputError):
        GradedAlgebra([1, 2], [["1"], ["a", "a"]], [])
