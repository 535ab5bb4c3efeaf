import itertools

import numpy as np
import pytest

from pseudostar.acmcheck import acm_indicator, search_non_acm_pseudo_star
from pseudostar.configs import HyperplaneFamily, build_pseudo_star, build_star, random_family
from pseudostar.geometry import Arrangement, flat_from_forms
from pseudostar.ideals import hilbert_table

from _data import PSEUDO_FORMS, STAR_FORMS


def skew_lines():
    return Arrangement(3, (flat_from_forms(3, [(1, 0, 0, 0), (0, 1, 0, 0)]), flat_from_forms(3, [(0, 0, 1, 0), (0, 0, 0, 1)])))


def skew_quotient_oracle(t):
    """HF of R/((x,y) cap (z,w)) = R/(xz, xw, yz, yw): monomials avoiding
    every product of one of x, y with one of z, w."""
    return sum(
        1
        for e in itertools.product(range(t + 1), repeat=4)
        if sum(e) == t and not ((e[0] or e[1]) and (e[2] or e[3]))
    )


def test_skew_lines_hilbert_oracle():
    T = hilbert_table(skew_lines(), 1, 6)
    assert list(T.quotient_dims) == [skew_quotient_oracle(t) for t in range(7)]
    assert list(T.quotient_dims[1:]) == [2 * (t + 1) for t in range(1, 7)]


def test_skew_lines_fail():
    r = acm_indicator(skew_lines(), rng=np.random.default_rng(0))
    assert not r.passed
    # first difference 1, 3, 2, 2, ... against two points 1, 2, 2, ...
    assert (0, 1, 3, 2) in r.mismatches
    assert r.as_dict()["indicator_pass"] is False


@pytest.mark.parametrize("build", ["star_lines", "star_points", "pseudo_lines"])
def test_worked_examples_pass(build):
    A = {
        "star_lines": lambda: build_star(2, HyperplaneFamily(3, STAR_FORMS)),
        "star_points": lambda: build_star(3, HyperplaneFamily(3, STAR_FORMS)),
        "pseudo_lines": lambda: build_pseudo_star(2, HyperplaneFamily(3, PSEUDO_FORMS)),
    }[build]()
    r = acm_indicator(A)
    assert r.passed and r.alpha_preserved
    assert r.levels[-1].arrangement.ambient_dim == A.ambient_dim - min(L.dim for L in A)


@pytest.mark.parametrize("seed", range(6))
def test_random_stars_pass(seed):
    rng = np.random.default_rng([21, seed])
    N = 3 + seed % 3
    H = random_family(N, 4 + seed % 2, "proper", rng)
    c = 2 + seed % 2
    r = acm_indicator(build_star(c, H), rng=rng)
    assert r.passed and r.alpha_preserved


@pytest.mark.parametrize("seed", range(10))
def test_pass_is_seed_independent(seed):
    A = build_pseudo_star(2, HyperplaneFamily(3, PSEUDO_FORMS))
    assert acm_indicator(A, rng=np.random.default_rng(seed)).passed


def test_t_max_bounds():
    A = build_pseudo_star(2, HyperplaneFamily(3, PSEUDO_FORMS))
    assert acm_indicator(A).t_max == 8
    assert acm_indicator(A, t_max=6).t_max == 6
    with pytest.raises(ValueError):
        acm_indicator(A, t_max=5)


def test_report_shape():
    r = acm_indicator(build_pseudo_star(2, HyperplaneFamily(3, PSEUDO_FORMS)))
    d = r.as_dict()
    assert d["kind"] == "necessary-condition indicator"
    assert len(d["levels"]) == 2 and d["levels"][0]["section_by"] is None
    assert len(r.section_hyperplanes) == 1 and list(r.degrees_checked) == list(range(9))


@pytest.mark.parametrize("N,s", [(3, 4), (4, 5)])
def test_search_finds_nothing(N, s):
    assert search_non_acm_pseudo_star(N, s, 50, seed=N * 10 + s) == []


def test_search_requires_trials():
    with pytest.raises(ValueError):
        search_non_acm_pseudo_star(3, 4, 0, seed=0)
