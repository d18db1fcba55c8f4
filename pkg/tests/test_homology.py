from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dualcx import builders, kernels
from dualcx.complex import EMPTY
from dualcx.group_action import antipodal_action, cyclic_action, quotient
from dualcx.homology import (
    HomologyResult,
    betti,
    chain_complex,
    euler_characteristic,
    homology_basis,
    integral_cohomology,
    integral_homology,
    is_rational_homology_sphere,
    sphere_betti,
)

from conftest import random_complex
from oracles import delta_homology, simplicial_homology


def test_boundary_squares_to_zero_on_families():
    for cx in (builders.simplex_boundary(6), builders.crosspolytope_boundary(4), builders.rp2_6(), builders.cone(builders.torus7())):
        assert chain_complex(cx).is_complex()


def test_point_and_empty():
    assert betti(builders.point()) == (1,)
    assert betti(builders.point(), reduced=True) == (0,)
    assert betti(EMPTY) == ()
    assert integral_homology(builders.sphere0()).betti == (2,)


@pytest.mark.parametrize("m", range(2, 9))
def test_simplex_boundaries_are_homology_spheres(m):
    cx = builders.simplex_boundary(m)
    assert betti(cx) == sphere_betti(m - 2)
    assert all(not t for t in integral_homology(cx).torsion)
    assert is_rational_homology_sphere(cx, m - 2)


def test_torus_and_projective_plane():
    assert integral_homology(builders.torus7()).betti == (1, 2, 1)
    h = integral_homology(builders.rp2_6())
    assert h.betti == (1, 0, 0) and h.torsion == ((), (2,), ())
    assert str(h) == "H0=Z, H1=Z/2, H2=0"
    assert builders.rp2_6() and not is_rational_homology_sphere(builders.rp2_6(), 2)


def test_quotient_torsion_matches_oracle():
    oct_ = builders.crosspolytope_boundary(3)
    q = quotient(oct_, antipodal_action(oct_)).quotient
    assert integral_homology(q).torsion[1] == (2,)
    lens = quotient(builders.simplex_boundary(5), cyclic_action(builders.simplex_boundary(5))).quotient
    h = integral_homology(lens)
    assert (h.betti, h.torsion) == delta_homology(lens.faces)
    assert h.torsion[1] == (5,)


def test_cohomology_shifts_torsion_up():
    h = integral_cohomology(builders.rp2_6())
    assert h.betti == (1, 0, 0)
    assert h.torsion == ((), (), (2,))


def test_result_rejects_bad_torsion():
    with pytest.raises(ValueError):
        HomologyResult((1,), ((1,),))
    with pytest.raises(ValueError):
        HomologyResult((1,), ((2, 3),))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_integral_homology_matches_sympy_oracle(seed):
    cx, sims = random_complex(seed, max_cells=40)
    h = integral_homology(cx)
    assert (h.betti, h.torsion) == simplicial_homology(sims)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_rational_and_integral_routes_agree(seed):
    cx, _ = random_complex(seed, max_cells=50)
    assert betti(cx) == integral_homology(cx).betti
    assert euler_characteristic(cx) == integral_homology(cx).euler


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_universal_coefficients(seed):
    cx, _ = random_complex(seed, max_cells=40)
    h, c = integral_homology(cx), integral_cohomology(cx)
    assert h.betti == c.betti
    assert c.torsion[0] == ()
    for k in range(1, len(h.betti)):
        assert c.torsion[k] == h.torsion[k - 1]


@pytest.mark.skipif(len(kernels.available_backends()) < 2, reason="single backend")
@pytest.mark.parametrize("seed", range(10))
def test_backends_agree_on_homology(seed):
    cx, _ = random_complex(seed, max_cells=50)
    assert integral_homology(cx, backend="python") == integral_homology(cx, backend="cython")


@pytest.mark.parametrize("seed", range(15))
def test_cycle_basis_has_betti_many_representatives(seed):
    cx, _ = random_complex(seed, max_cells=40)
    b = betti(cx)
    cc = chain_complex(cx)
    for k in range(cx.dim + 1):
        basis = homology_basis(cx, k)
        assert len(basis.representatives) == b[k]
        d = cc.d(k)
        for z in basis.representatives:
            if d is not None:
                image = {}
                for r, c, v in d.entries:
                    if c in z:
                        image[r] = image.get(r, 0) + v * z[c]
                assert all(x == 0 for x in image.values())
            coords = basis.coordinates(z)
            assert sum(x != 0 for x in coords) == 1 and Fraction(1) in coords


def test_result_iterates_over_degrees():
    h = integral_homology(builders.rp2_6())
    assert [str(g) for g in h] == ["Z", "Z/2", "0"]
