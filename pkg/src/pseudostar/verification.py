"""Seeded sweeps checking the theorems on generated arrangements.

Every case ``i`` of a sweep draws from ``numpy.random.default_rng([seed, i])``
so single cases can be replayed.  Each sweep returns a JSON-ready summary
with the failing cases listed in full.
"""

from __future__ import annotations

from math import comb

import numpy as np

from .acmcheck import acm_indicator
from .configs import HyperplaneFamily, build_pseudo_star, random_family, verify_main_theorem
from .exactalg import DEFAULT_PRIME
from .geometry import (
    Arrangement,
    DuplicateFlat,
    contained_in_hyperplane,
    flat_from_forms,
    general_section,
    random_flat,
    random_hyperplane,
)
from .ideals import alpha, degree_of, initial_sequence

KINDS = ("proper", "through_point")


def _rng(seed: int, i: int) -> np.random.Generator:
    return np.random.default_rng([seed, i])


def _family_rows(H: HyperplaneFamily) -> list[list[int]]:
    return [list(f.coefficients) for f in H.forms]


def pseudo_star_case(i: int, seed: int, Ns=(3, 4, 5), ss=(3, 4, 5, 6), prime: int = DEFAULT_PRIME):
    """Case ``i`` of the pseudo-star grid: cycles through every (N, s, kind)
    combination once per ``2 * len(ss) * len(Ns)`` cases."""
    N = Ns[i % len(Ns)]
    s = ss[(i // 2) % len(ss)]
    kind = KINDS[i % 2]
    rng = _rng(seed, i)
    return N, s, kind, random_family(N, s, kind, rng, prime), rng


def confined_arrangement(N: int, k: int, rng: np.random.Generator, prime: int = DEFAULT_PRIME) -> Arrangement:
    """``k`` random codimension-2 flats inside one random hyperplane."""
    h = random_hyperplane(N, rng, prime)
    flats = []
    while len(flats) < k:
        g = rng.integers(0, prime, size=N + 1)
        L = flat_from_forms(N, [h, tuple(int(v) for v in g)], prime)
        if L.codim == 2 and L not in flats:
            flats.append(L)
    return Arrangement(N, tuple(flats), prime)


def random_codim2_arrangement(N: int, k: int, rng: np.random.Generator, prime: int = DEFAULT_PRIME) -> Arrangement:
    while True:
        try:
            return Arrangement(N, tuple(random_flat(N, 2, rng, prime) for _ in range(k)), prime)
        except DuplicateFlat:
            continue


def complement_sweep(trials: int, seed: int, m_max: int = 4, prime: int = DEFAULT_PRIME) -> dict:
    """Initial sequences of pseudo-stars (s-1, s, 2s-1, 2s, ...) and of
    hyperplane-confined arrangements (1, 2, 3, ...)."""
    failures, cases = [], []
    for i in range(trials):
        N, s, kind, H, _ = pseudo_star_case(i, seed, prime=prime)
        seq = initial_sequence(build_pseudo_star(2, H), m_max).as_list()
        expected = [(m + 1) // 2 * s - (m % 2) for m in range(1, m_max + 1)]
        case = {"trial": i, "type": "pseudostar", "N": N, "s": s, "kind": kind, "sequence": seq}
        cases.append(case)
        if seq != expected:
            failures.append({**case, "expected": expected, "family": _family_rows(H)})
    for i in range(trials):
        rng = _rng(seed + 1, i)
        N, k = (3, 4, 5)[i % 3], 1 + (i // 3) % 4
        A = confined_arrangement(N, k, rng, prime)
        seq = initial_sequence(A, m_max).as_list()
        case = {"trial": i, "type": "confined", "N": N, "flats": k, "sequence": seq}
        cases.append(case)
        if seq != list(range(1, m_max + 1)):
            failures.append(case)
    return {"trials": trials, "cases": cases, "failures": failures}


def basics_sweep(trials: int, seed: int, prime: int = DEFAULT_PRIME) -> dict:
    """Degree binom(s, 2), alpha = s - 1, and a passing ACM indicator."""
    failures, cases = [], []
    for i in range(trials):
        N, s, kind, H, rng = pseudo_star_case(i, seed, prime=prime)
        A = build_pseudo_star(2, H)
        deg, a1 = degree_of(A), alpha(A, 1)
        acm = acm_indicator(A, rng=rng)
        case = {"trial": i, "N": N, "s": s, "kind": kind, "degree": deg, "alpha": a1, "acm_pass": acm.passed}
        cases.append(case)
        if deg != comb(s, 2) or a1 != s - 1 or not acm.passed:
            failures.append({**case, "family": _family_rows(H)})
    return {"trials": trials, "cases": cases, "failures": failures}


def main_theorem_case(i: int, seed: int, prime: int = DEFAULT_PRIME) -> tuple[str, Arrangement, np.random.Generator]:
    """Rotates through pseudo-stars, near misses (a pseudo-star with one flat
    dropped or one random flat added), hyperplane-confined sets and random
    flats."""
    rng = _rng(seed, i)
    kind = ("pseudostar", "near_miss", "confined", "random")[i % 4]
    j = i // 4
    N = (3, 4)[j % 2]
    if kind in ("pseudostar", "near_miss"):
        s = (3, 4, 5)[(j // 2) % 3]
        A = build_pseudo_star(2, random_family(N, s, KINDS[(j // 6) % 2], rng, prime))
        if kind == "pseudostar":
            return kind, A, rng
        if j % 2:
            drop = int(rng.integers(len(A)))
            return kind, Arrangement(N, A.flats[:drop] + A.flats[drop + 1:], prime), rng
        while True:
            try:
                return kind, Arrangement(N, A.flats + (random_flat(N, 2, rng, prime),), prime), rng
            except DuplicateFlat:
                continue
    k = 1 + (j // 2) % 5 if kind == "confined" else 2 + (j // 2) % 4
    maker = confined_arrangement if kind == "confined" else random_codim2_arrangement
    return kind, maker(N, k, rng, prime), rng


def main_theorem_sweep(trials: int, seed: int, prime: int = DEFAULT_PRIME) -> dict:
    failures, cases = [], []
    for i in range(trials):
        kind, A, rng = main_theorem_case(i, seed, prime)
        report = verify_main_theorem(A, rng=rng)
        case = {
            "trial": i,
            "type": kind,
            "N": A.ambient_dim,
            "flats": len(A),
            "alpha1": report.alpha1,
            "alpha2": report.alpha2,
            "acm_pass": report.acm_pass,
            "classification": report.classification.tag.value,
            "consistent": report.consistent,
        }
        cases.append(case)
        if not report.consistent:
            failures.append({**case, "report": report.as_dict()})
    return {"trials": trials, "cases": cases, "failures": failures}


def lemma_section_case(i: int, seed: int, prime: int = DEFAULT_PRIME) -> tuple[Arrangement, np.random.Generator]:
    """A spanning pair or triple of codimension-2 flats in P^4 or P^5."""
    rng = _rng(seed, i)
    N = (4, 5)[i % 2]
    k = (2, 3)[(i // 2) % 2]
    while True:
        A = random_codim2_arrangement(N, k, rng, prime)
        if contained_in_hyperplane(A) is None:
            return A, rng


def lemma_section_sweep(trials: int, seed: int, prime: int = DEFAULT_PRIME) -> dict:
    """General sections of spanning (N-2)-flats, N >= 4, still span."""
    failures, cases = [], []
    for i in range(trials):
        A, rng = lemma_section_case(i, seed, prime)
        section, H = general_section(A, rng)
        spans = contained_in_hyperplane(section) is None
        case = {"trial": i, "N": A.ambient_dim, "flats": len(A), "section_spans": spans}
        cases.append(case)
        if not spans:
            failures.append({**case, "hyperplane": list(H.coefficients)})
    return {"trials": trials, "cases": cases, "failures": failures}


SWEEPS = {
    "main": main_theorem_sweep,
    "complement": complement_sweep,
    "basics": basics_sweep,
    "lemma-section": lemma_section_sweep,
}
