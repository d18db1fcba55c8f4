import pytest
from hypothesis import given, settings, strategies as st

from dualcx import builders
from dualcx.complex import CellId, ComplexError, components, isomorphic, validate
from dualcx.fundamental_group import abelianization, presentation
from dualcx.group_action import ActionError, GroupAction, antipodal_action, cyclic_action
from dualcx.homology import euler_characteristic, integral_homology
from dualcx.subdivision import SimplicialComplex, barycentric, induced_action, iterated_barycentric

from conftest import random_complex


def test_simplicial_complex_invariants():
    with pytest.raises(ComplexError):
        SimplicialComplex(("a", "b"), ((1, 0),))
    with pytest.raises(ComplexError):
        SimplicialComplex(("a",), ((0, 1),))
    sc = SimplicialComplex.from_simplices("abc", [(0, 1), (1, 0), (0,), (2,)])
    assert sc.facets == ((0, 1), (2,))
    assert sc.validate() == []
    assert SimplicialComplex("ab", ((0,), (0, 1))).validate() == ["facet (0,) is a face of (0, 1)"]


def test_to_delta_orders_simplices_lexicographically():
    cx = SimplicialComplex.from_simplices("xyz", [(0, 1, 2)]).to_delta()
    assert cx.labels[1] == ("x|y", "x|z", "y|z")
    assert cx.faces[2] == ((2, 1, 0),)


def test_barycentric_counts():
    sc, smap = barycentric(builders.simplex_boundary(4))
    assert sc.to_delta().cell_counts == (14, 36, 24)
    assert all(smap.check_chain(s) for s in sc.facets)
    assert isomorphic(barycentric(builders.cycle(3))[0].to_delta(), builders.cycle(6))


def test_chain_witness_is_strictly_increasing():
    sc, smap = barycentric(builders.simplex(2))
    top = sc.facets[0]
    chain = smap.chain(top)
    assert [c.dim for c in chain] == [0, 1, 2]
    assert chain[-1] == CellId(2, 0)


def test_iterated_subdivision():
    assert iterated_barycentric(builders.simplex(1), 2).cell_counts == (5, 4)
    assert iterated_barycentric(builders.torus7(), 0) == builders.torus7()


def _abelianizations(cx):
    return sorted(tuple(abelianization(presentation(c))) for c in components(cx))


@pytest.mark.parametrize("seed", range(20))
def test_invariants_survive_subdivision(seed):
    cx, _ = random_complex(5000 + seed, max_cells=50)
    sd = barycentric(cx)[0].to_delta()
    assert validate(sd).ok
    assert integral_homology(sd) == integral_homology(cx)
    assert euler_characteristic(sd) == euler_characteristic(cx)
    assert _abelianizations(sd) == _abelianizations(cx)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_subdivision_is_simplicial_and_flag_ordered(seed):
    cx, _ = random_complex(seed, max_cells=30)
    sc, smap = barycentric(cx)
    assert sc.validate() == []
    assert all(smap.check_chain(s) for s in sc.facets)
    assert len(sc.vertices) == cx.num_cells


def test_induced_action_is_strict():
    oct_ = builders.crosspolytope_boundary(3)
    act = antipodal_action(oct_)
    sc, smap = barycentric(oct_)
    ind = induced_action(act, smap)
    assert ind.order == 2 and ind.is_strict()
    z5 = cyclic_action(builders.simplex_boundary(5))
    assert not z5.is_strict()
    assert induced_action(z5, barycentric(z5.complex)[1]).is_strict()


def test_induced_action_rejects_mismatched_map():
    act = GroupAction.trivial(builders.cycle(3))
    with pytest.raises(ActionError):
        induced_action(act, barycentric(builders.cycle(4))[1])
