import random

import pytest
from hypothesis import given, settings, strategies as st

from dualcx import builders
from dualcx.complex import EMPTY, components, num_components
from dualcx.fundamental_group import (
    CosetOverflow,
    DisconnectedError,
    Presentation,
    abelianization,
    cyclic_reduce,
    free_reduce,
    invert,
    low_index_probe,
    low_index_subgroups,
    pi1_probe,
    presentation,
    tietze_simplify,
    todd_coxeter,
)
from dualcx.group_action import antipodal_action, cyclic_action, quotient
from dualcx.homology import integral_homology

from conftest import corpus_doc, corpus_files, random_complex
from oracles import fp_order, subgroup_counts_bruteforce


def P(n, *rels):
    return Presentation(tuple(f"x{i}" for i in range(n)), tuple(rels))


GROUPS = {
    "Z5": P(1, (1,) * 5),
    "Z2xZ2": P(2, (1, 1), (2, 2), (1, 2, 1, 2)),
    "S3": P(2, (1, 1), (2, 2, 2), (1, 2, 1, 2)),
    "D5": P(2, (1,) * 5, (2, 2), (1, 2, 1, 2)),
    "A4": P(2, (1, 1), (2, 2, 2), (1, 2) * 3),
    "Q8": P(2, (1,) * 4, (1, 1, -2, -2), (-2, 1, 2, 1)),
    "Z3xZ3": P(2, (1, 1, 1), (2, 2, 2), (1, 2, -1, -2)),
    "trivial": P(2, (1,), (2,)),
    "A5": P(2, (1, 1), (2, 2, 2), (1, 2) * 5),
}


def test_word_utilities():
    assert free_reduce((1, 2, -2, -1, 3)) == (3,)
    assert cyclic_reduce((-1, 2, 3, 1)) == (2, 3)
    assert invert((1, -2)) == (2, -1)


def test_presentation_validation_and_text():
    with pytest.raises(ValueError):
        Presentation(("a",), ((2,),))
    p = Presentation(("a", "b"), ((1, -2),))
    assert str(p) == "< a, b | a*b^-1 >"
    assert Presentation.from_dict(p.as_dict()) == p


@pytest.mark.parametrize("name", sorted(GROUPS))
def test_coset_enumeration_matches_sympy(name):
    p = GROUPS[name]
    assert todd_coxeter(p) == fp_order(len(p.generators), p.relators)


@pytest.mark.parametrize("name", sorted(GROUPS))
def test_tietze_preserves_the_group(name):
    p = GROUPS[name]
    q = tietze_simplify(p)
    assert len(q.generators) <= len(p.generators)
    assert fp_order(len(q.generators), q.relators) == fp_order(len(p.generators), p.relators)


def test_subgroup_index():
    s3 = GROUPS["S3"]
    assert todd_coxeter(s3, [(1,)]) == 3
    assert todd_coxeter(s3, [(2,)]) == 2


def test_coset_cap():
    free = P(2)
    with pytest.raises(CosetOverflow):
        todd_coxeter(free, cap=100)
    probe = low_index_probe(GROUPS["A5"], max_index=2, cap=20)
    assert probe.verdict == "Unknown" and "exceeded" in probe.witness


LOW_INDEX_CASES = dict(GROUPS, Z=P(1), Z2free=P(2, (1, 2, -1, -2)), F2=P(2))
del LOW_INDEX_CASES["A5"]


@pytest.mark.parametrize("name", sorted(LOW_INDEX_CASES))
def test_low_index_counts_match_bruteforce(name):
    p = LOW_INDEX_CASES[name]
    assert low_index_subgroups(p, 4) == subgroup_counts_bruteforce(len(p.generators), p.relators, 4)


def test_known_low_index_counts():
    assert low_index_subgroups(GROUPS["A4"], 6) == {1: 1, 2: 0, 3: 1, 4: 4, 5: 0, 6: 3}
    assert low_index_subgroups(P(1), 5) == {k: 1 for k in range(1, 6)}
    assert low_index_subgroups(GROUPS["Z5"], 5) == {1: 1, 2: 0, 3: 0, 4: 0, 5: 1}


def test_probe_verdicts():
    z5 = low_index_probe(GROUPS["Z5"])
    assert (z5.verdict, z5.order) == ("ProvablyFinite", 5)
    z = low_index_probe(P(1))
    assert z.verdict == "ProvablyInfinite" and z.order is None
    assert low_index_probe(P(0)).order == 1
    with pytest.raises(ValueError):
        low_index_probe(P(1), max_index=11)


def test_presentation_of_complexes():
    assert presentation(builders.cycle(3)).generators == ("e2",)
    assert tietze_simplify(presentation(builders.simplex_boundary(4))) == Presentation((), ())
    assert tietze_simplify(P(2, (2,))) == Presentation(("x0",), ())
    with pytest.raises(DisconnectedError):
        presentation(builders.sphere0())
    with pytest.raises(DisconnectedError):
        presentation(EMPTY)


def test_pi1_of_quotients():
    oct_ = builders.crosspolytope_boundary(3)
    rp2 = pi1_probe(quotient(oct_, antipodal_action(oct_)).quotient)
    assert (rp2.verdict, rp2.order) == ("ProvablyFinite", 2)
    b4 = builders.simplex_boundary(5)
    lens = pi1_probe(quotient(b4, cyclic_action(b4)).quotient)
    assert (lens.verdict, lens.order) == ("ProvablyFinite", 5)
    assert len(lens.simplified.generators) == 1
    torus = pi1_probe(builders.torus7())
    assert torus.verdict == "ProvablyInfinite" and torus.abelianization.rank == 2


def test_subdivided_presentation_agrees():
    for cx in (builders.rp2_6(), builders.torus7()):
        assert abelianization(presentation(cx, subdivide=True)) == abelianization(presentation(cx))


@pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.stem)
def test_abelianization_is_first_homology(path):
    cx = corpus_doc(path.name).complex
    if num_components(cx) != 1:
        pytest.skip("disconnected")
    h1 = integral_homology(cx)[1]
    ab = abelianization(presentation(cx))
    assert (ab.rank, ab.torsion) == (h1.rank, h1.torsion)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_abelianization_is_h1_on_random_complexes(seed):
    cx, _ = random_complex(seed, max_cells=40)
    for comp in components(cx):
        h1 = integral_homology(comp)[1]
        assert tuple(abelianization(presentation(comp))) == (h1.rank, h1.torsion)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_tietze_preserves_invariants_of_random_presentations(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    rels = []
    for _ in range(rng.randint(0, 3)):
        rels.append(tuple(rng.choice([1, -1]) * rng.randint(1, n) for _ in range(rng.randint(1, 5))))
    p = P(n, *rels)
    q = tietze_simplify(p)
    assert abelianization(q) == abelianization(p)
    assert low_index_subgroups(q, 3) == low_index_subgroups(p, 3)
