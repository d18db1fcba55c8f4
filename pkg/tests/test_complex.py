import pytest
from hypothesis import given, settings, strategies as st

from dualcx import builders
from dualcx.complex import (
    EMPTY,
    CellId,
    ComplexError,
    DeltaComplex,
    components,
    dimension_profile,
    face_poset_graph,
    is_pure,
    isomorphic,
    link,
    num_components,
    subcomplex,
    validate,
)
from dualcx.recognizer import is_circle

from conftest import random_complex


def test_trailing_empty_dimensions_are_trimmed():
    cx = DeltaComplex(())
    assert cx.is_empty and cx.dim == -1
    cx = DeltaComplex((((),), (), ()))
    assert cx.cell_counts == (1,)


def test_wrong_face_arity_rejected():
    with pytest.raises(ComplexError):
        DeltaComplex((((), ()), ((0,),)))


def test_label_count_mismatch_rejected():
    with pytest.raises(ComplexError):
        DeltaComplex((((), ()),), (("a",),))


def test_vertex_order_follows_face_chain():
    cx = builders.simplex(2)
    assert cx.vertex_indices(CellId(2, 0)) == (0, 1, 2)
    # edge v0 -> v1 stores faces (v1, v0)
    assert cx.faces[1][0] == (1, 0)
    assert cx.vertices_of(CellId(1, 0)) == (CellId(0, 0), CellId(0, 1))
    with pytest.raises(ComplexError):
        cx.vertices_of(CellId(3, 0))


def test_cofaces_and_closure():
    cx = builders.simplex(2)
    assert len(cx.cofaces[1][0]) == 1
    assert len(cx.cofaces[0][0]) == 2
    assert cx.closure[2][0] == frozenset(cx.cells())


def test_validate_accepts_standard_families():
    for cx in (builders.simplex_boundary(5), builders.crosspolytope_boundary(4), builders.torus7(), builders.rp2_6(), builders.cone(builders.cycle(4))):
        assert validate(cx).ok


def test_validate_reports_dangling_reference():
    cx = DeltaComplex((((), ()), ((1, 5),)))
    rep = validate(cx)
    assert not rep.ok and rep.violations[0].rule == "face-reference"
    assert rep.violations[0].cells == (CellId(1, 0),)


def test_validate_reports_identity_failure():
    # triangle whose edges do not meet consistently
    faces = (((), (), ()), ((1, 0), (2, 0), (2, 1)), ((2, 2, 0),))
    rep = validate(DeltaComplex(faces))
    assert [v.rule for v in rep.violations] == ["simplicial-identity"] * len(rep.violations) and rep.violations


def test_validate_reports_irregular_loop():
    # a single edge whose both ends are the same vertex
    rep = validate(DeltaComplex((((),), ((0, 0),))))
    assert [v.rule for v in rep.violations] == ["regularity"]
    assert "repeated" in rep.as_dict()["violations"][0]["message"]


def test_link_of_tetrahedron_vertex_is_hexagon():
    lk = link(builders.simplex_boundary(4), CellId(0, 0)).to_delta()
    assert lk.cell_counts == (6, 6)
    assert is_circle(lk)


def test_link_rejects_non_vertex():
    with pytest.raises(ComplexError):
        link(builders.simplex(2), CellId(1, 0))


def test_components_and_profile():
    cx = builders.disjoint_union(builders.cycle(3), builders.simplex(2))
    assert num_components(cx) == 2
    assert [c.cell_counts for c in components(cx)] == [(3, 3), (3, 3, 1)]
    mixed = builders.from_simplices("abcd", [(0, 1, 2), (2, 3)])
    assert dimension_profile(mixed) == [(2, False)]
    assert not is_pure(mixed)
    assert dimension_profile(EMPTY) == []


def test_subcomplex_requires_face_closed_set():
    cx = builders.simplex(2)
    sub, mapping = subcomplex(cx, [CellId(0, 0), CellId(0, 1), CellId(1, 0)])
    assert sub.cell_counts == (2, 1)
    assert mapping[CellId(1, 0)] == CellId(1, 0)
    with pytest.raises(ComplexError):
        subcomplex(cx, [CellId(1, 0)])


def test_isomorphism_respects_dimension_and_multiplicity():
    assert isomorphic(builders.cycle(4), builders.crosspolytope_boundary(2))
    assert not isomorphic(builders.cycle(4), builders.cycle(5))
    g = face_poset_graph(builders.simplex(1))
    assert g.number_of_nodes() == 3 and g.number_of_edges() == 2


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_random_simplicial_complexes_validate(seed):
    cx, _ = random_complex(seed, max_cells=40)
    assert validate(cx).ok
    # each component's cells partition the complex
    assert sum(c.num_cells for c in components(cx)) == cx.num_cells


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_relabel_keeps_structure(seed):
    cx, _ = random_complex(seed)
    assert cx.relabel(None) == cx
    assert isomorphic(cx, cx.relabel(None))
