import numpy as np
import pytest

from hopftwist import (
    DualCocycle,
    QuotientMorphism,
    catalog,
    from_bicharacter,
    induce,
    klein_four_group,
    trivial_cocycle,
    v_functional,
    verify_cocycle,
    verify_morphism,
    w_functional,
)
from hopftwist.cocycle import convolve2, dual_star2, identity2, invert2
from hopftwist.core import DualFunctional, convolve
from hopftwist.errors import (
    HostMismatch,
    InvalidBicharacter,
    InvalidInverse,
    InvalidMorphism,
)

KLEIN_BITS = ((0, 0), (0, 1), (1, 0), (1, 1))


def _klein_beta():
    return np.array(
        [[(-1.0) ** (g[1] * h[0]) for h in KLEIN_BITS] for g in KLEIN_BITS]
    )


def test_trivial_cocycle_is_valid(ctx):
    host = catalog.algebra("c-s3")
    sigma = trivial_cocycle(host)
    report = verify_cocycle(sigma, ctx)
    assert report.passed, report.failing()


def test_bicharacter_gives_valid_cocycle(ctx):
    sigma = from_bicharacter(klein_four_group(), _klein_beta(), ctx)
    report = verify_cocycle(sigma, ctx)
    assert report.passed
    assert report.max_residual <= 1e-12


def test_from_bicharacter_accepts_shared_host(ctx):
    host = catalog.algebra("g-z2z2")
    sigma = from_bicharacter(klein_four_group(), _klein_beta(), ctx, host=host)
    assert sigma.host is host


def test_from_bicharacter_rejects_nonbicharacter(ctx):
    beta = _klein_beta().copy()
    beta[1, 2] = 3.0
    with pytest.raises(InvalidBicharacter):
        from_bicharacter(klein_four_group(), beta, ctx)


def test_from_bicharacter_rejects_wrong_host(ctx):
    with pytest.raises(InvalidBicharacter):
        from_bicharacter(
            klein_four_group(), _klein_beta(), ctx, host=catalog.algebra("c-s3")
        )


def test_cocycle_inverse_is_checked(ctx):
    host = catalog.algebra("g-z2z2")
    sigma = catalog.cocycle("klein-bicharacter", ctx)
    good = DualCocycle(host, sigma.sigma, sigma_inv=sigma.sigma_inv, ctx=ctx)
    assert np.abs(good.sigma_inv - sigma.sigma_inv).max() <= 1e-12
    with pytest.raises(InvalidInverse):
        DualCocycle(host, sigma.sigma, sigma_inv=2.0 * sigma.sigma_inv, ctx=ctx)


def test_two_leg_convolution_algebra(ctx, rng):
    host = catalog.algebra("g-z2z2")
    x = rng.normal(size=(host.dim, host.dim)) + 1j * rng.normal(size=(host.dim, host.dim))
    e2 = identity2(host)
    assert np.abs(convolve2(host, e2, x) - x).max() <= 1e-10
    assert np.abs(convolve2(host, x, e2) - x).max() <= 1e-10
    inv = invert2(host, x + 3.0 * e2, ctx)
    assert np.abs(convolve2(host, x + 3.0 * e2, inv) - e2).max() <= 1e-9
    twice = dual_star2(host, dual_star2(host, x))
    assert np.abs(twice - x).max() <= 1e-10


def test_quotient_morphism_to_klein_subgroup(ctx):
    mor = catalog.d4_klein_restriction(ctx)
    report = verify_morphism(mor, ctx)
    assert report.passed, report.failing()


def test_morphism_shape_validation():
    cd4 = catalog.algebra("c-d4")
    ck4 = catalog.algebra("c-z2z2")
    with pytest.raises(InvalidMorphism):
        QuotientMorphism(source=cd4, target=ck4, pi=np.zeros((3, 8)))


def test_morphism_detects_non_homomorphism(ctx):
    cd4 = catalog.algebra("c-d4")
    ck4 = catalog.algebra("c-z2z2")
    pi = np.zeros((4, 8))
    # an arbitrary index map that is not a subgroup restriction
    for t_idx, s_idx in enumerate((0, 1, 2, 3)):
        pi[t_idx, s_idx] = 1.0
    mor = QuotientMorphism(source=cd4, target=ck4, pi=pi)
    report = verify_morphism(mor, ctx)
    assert not report.passed


def test_induced_cocycle_is_valid_and_supported_on_the_image(ctx):
    sigma8 = catalog.cocycle("klein-induced", ctx)
    report = verify_cocycle(sigma8, ctx)
    assert report.passed
    # entries away from the embedded subgroup follow the pullback pattern
    mor = catalog.d4_klein_restriction(ctx)
    sigma4 = catalog.cocycle("klein-fourier", ctx)
    pullback = mor.pi.T @ sigma4.sigma @ mor.pi
    assert np.abs(sigma8.sigma - pullback).max() <= 1e-12


def test_restriction_rejects_non_closed_subset(ctx):
    # {e, r} inside the dihedral group: r*r falls outside the pair
    with pytest.raises(InvalidMorphism):
        catalog.restriction_morphism(catalog.group_data("d4"), (0, 1), ctx)


def test_induce_requires_matching_target(ctx):
    sigma = catalog.cocycle("klein-bicharacter", ctx)
    mor = catalog.d4_klein_restriction(ctx)
    with pytest.raises(HostMismatch):
        induce(sigma, mor, ctx)


def test_w_and_v_functionals_invert_in_convolution(ctx):
    for cname in ("klein-bicharacter", "klein-induced", "order4-bicharacter"):
        sigma = catalog.cocycle(cname, ctx)
        host = sigma.host
        w, w_inv = w_functional(sigma, ctx)
        v, v_inv = v_functional(sigma, ctx)
        for a, b in ((w, w_inv), (v, v_inv)):
            left = convolve(a, b).coeffs
            right = convolve(b, a).coeffs
            assert np.abs(left - host.counit).max() <= 1e-9
            assert np.abs(right - host.counit).max() <= 1e-9


def test_v_composes_w_inverse_with_w_through_the_inverse_antipode(ctx):
    sigma = catalog.cocycle("klein-induced", ctx)
    host = sigma.host
    w, w_inv = w_functional(sigma, ctx)
    v, _ = v_functional(sigma, ctx)
    w_kappa = DualFunctional(host, host.antipode_inv.T @ w.coeffs)
    composed = convolve(w_inv, w_kappa).coeffs
    assert np.abs(v.coeffs - composed).max() <= 1e-9
