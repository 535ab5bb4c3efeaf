import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pseudostar.configs import HyperplaneFamily, build_pseudo_star, build_star, random_family
from pseudostar.geometry import (
    AmbientMismatch,
    Arrangement,
    DegenerateSection,
    DependentForms,
    DuplicateFlat,
    DuplicateHyperplane,
    AllZeroForm,
    Flat,
    LinearForm,
    contained_in_hyperplane,
    flat_from_forms,
    general_section,
    hyperplane_section,
    intersect,
    intersection_dim,
    meets_properly,
    pseudo_star_condition,
    random_flat,
    random_hyperplane,
    span_dim,
)
from pseudostar.verification import lemma_section_case

from _data import PSEUDO_FORMS, STAR_FORMS

X, Y, Z, W = (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)


def forms(rows):
    return [LinearForm(r) for r in rows]


def test_linear_form_normalization():
    f = LinearForm((0, 3, 6, 0))
    assert f.coefficients == (0, 1, 2, 0)
    assert LinearForm((0, 2, 4, 0)) == f
    with pytest.raises(AllZeroForm):
        LinearForm((0, 0, 0))


def test_flat_from_forms_examples():
    L = flat_from_forms(3, [X, Y])
    assert L.codim == 2 and L.dim == 1
    with pytest.raises(DependentForms):
        flat_from_forms(3, [X, (2, 0, 0, 0)], strict=True)
    assert flat_from_forms(3, [X, (2, 0, 0, 0)]).codim == 1
    assert flat_from_forms(3, STAR_FORMS[:2]).codim == 2
    with pytest.raises(AllZeroForm):
        flat_from_forms(3, [X, (0, 0, 0, 0)])


def test_flat_canonical_equality():
    assert flat_from_forms(3, [(1, 1, 0, 0), (1, -1, 0, 0)]) == flat_from_forms(3, [X, Y])


def test_intersect_examples():
    assert intersect([Flat(3, (LinearForm(X),)), Flat(3, (LinearForm(Y),))]).codim == 2
    P = intersect(forms(PSEUDO_FORMS))
    assert P.codim == 3 and [list(v) for v in P.points()] == [[0, 0, 0, 1]]
    assert intersect(forms([X, Y, Z, W])) is None
    with pytest.raises(AmbientMismatch):
        intersect([flat_from_forms(3, [X]), flat_from_forms(2, [(1, 0, 0)])])


def test_span_dim_examples():
    rng = np.random.default_rng(5)
    U = random_flat(4, 2, rng)
    assert span_dim(U, U) == U.dim
    p1 = flat_from_forms(2, [(1, 0, 0), (0, 1, 0)])
    p2 = flat_from_forms(2, [(0, 1, 0), (0, 0, 1)])
    assert span_dim(p1, p2) == 1
    V = random_flat(4, 2, rng)
    assert span_dim(U, V) == 4 and intersection_dim([U, V]) == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 5), st.integers(0, 2**32 - 1), st.data())
def test_dimension_identity(N, seed, data):
    rng = np.random.default_rng(seed)
    c1, c2 = data.draw(st.integers(1, N)), data.draw(st.integers(1, N))
    U, V = random_flat(N, c1, rng), random_flat(N, c2, rng)
    assert span_dim(U, V) + intersection_dim([U, V]) == U.dim + V.dim


def test_dimension_identity_special_position():
    # two lines in P^3 through a common point
    U = flat_from_forms(3, [X, Y])
    V = flat_from_forms(3, [X, Z])
    assert span_dim(U, V) == 2 and intersection_dim([U, V]) == 0


def test_contained_in_hyperplane_examples():
    A = Arrangement(3, (flat_from_forms(3, [X, Y]), flat_from_forms(3, [X, Z])))
    assert contained_in_hyperplane(A) == LinearForm(X)
    assert contained_in_hyperplane(build_pseudo_star(2, HyperplaneFamily(3, PSEUDO_FORMS))) is None
    single = Arrangement(3, (flat_from_forms(3, STAR_FORMS[:2]),))
    h = contained_in_hyperplane(single)
    assert single.flats[0].contains_form(h)


def test_meets_properly_examples():
    assert meets_properly(forms([X, Y, Z, W]), 3)
    assert meets_properly(forms(STAR_FORMS), 3)
    assert not meets_properly(forms(PSEUDO_FORMS), 3)
    with pytest.raises(DuplicateHyperplane):
        meets_properly(forms([X, X]), 1)


def test_pseudo_star_condition_examples():
    assert pseudo_star_condition(forms(PSEUDO_FORMS), 2)
    pencil = forms([X, Y, (1, 1, 0, 0)])  # all contain the line x = y = 0
    assert not pseudo_star_condition(pencil, 2)


@pytest.mark.parametrize("seed", range(10))
def test_proper_implies_pseudo_star_condition(seed):
    rng = np.random.default_rng(seed)
    N, s = 3 + seed % 3, 4 + seed % 3
    H = random_family(N, s, "proper", rng)
    for c in range(1, min(s, N)):
        assert pseudo_star_condition(H.forms, c)


def test_section_of_star_keeps_counts():
    rng = np.random.default_rng(0)
    H = random_family(4, 5, "proper", rng)
    A = build_star(2, H)
    S, _ = general_section(A, rng)
    assert S.ambient_dim == 3 and len(S) == 10 and S.codims() == {2}


def test_section_containing_flat_is_degenerate():
    A = Arrangement(3, (flat_from_forms(3, [X, Y]),))
    with pytest.raises(DegenerateSection):
        hyperplane_section(A, LinearForm(X))


@pytest.mark.parametrize("seed", range(20))
def test_section_preserves_count_and_codim(seed):
    rng = np.random.default_rng(seed)
    N = 3 + seed % 3
    flats = []
    while len(flats) < 4:
        L = random_flat(N, 1 + int(rng.integers(N - 1)), rng)
        if L not in flats:
            flats.append(L)
    A = Arrangement(N, tuple(flats))
    H = random_hyperplane(N, rng)
    try:
        S = hyperplane_section(A, H)
    except DegenerateSection:
        return
    assert len(S) == len(A) and [L.codim for L in S] == [L.codim for L in A]


@pytest.mark.parametrize("seed", range(25))
def test_spanning_section_still_spans(seed):
    A, rng = lemma_section_case(seed, 99)
    S, _ = general_section(A, rng)
    assert contained_in_hyperplane(S) is None


def test_random_hyperplane_reproducible_and_distinct():
    a = random_hyperplane(4, np.random.default_rng(42))
    b = random_hyperplane(4, np.random.default_rng(42))
    assert a == b
    rng = np.random.default_rng(42)
    assert random_hyperplane(4, rng) != random_hyperplane(4, rng)


def test_random_hyperplane_never_zero_small_field():
    rng = np.random.default_rng(1)
    seen = {random_hyperplane(2, rng, prime=5).coefficients for _ in range(2000)}
    assert (0, 0, 0) not in seen
    # every normalized nonzero form over F_5 in three variables shows up
    expected = {f for f in itertools.product(range(5), repeat=3) if any(f) and f[next(i for i, v in enumerate(f) if v)] == 1}
    assert seen == expected


def test_arrangement_rejects_duplicates_and_mismatch():
    L = flat_from_forms(3, [X, Y])
    with pytest.raises(DuplicateFlat):
        Arrangement(3, (L, flat_from_forms(3, [(1, 1, 0, 0), Y])))
    with pytest.raises(AmbientMismatch):
        Arrangement(4, (L,))
