"""Star and pseudo-star configurations: builders, recognition, classification.

Recognition works on the flats alone.  For a codimension-2 pseudo-star
P(2, H) with s >= 3 hyperplanes, each H_i is spanned by any two of the s - 1
flats it contains.  A hyperplane spanned by two flats that share no H_i
contains at most s // 2 flats, so keeping only hyperplanes that contain
exactly s - 1 flats isolates H.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations
from math import comb, isqrt

import numpy as np

from . import exactalg
from .exactalg import DEFAULT_PRIME
from .geometry import (
    AmbientMismatch,
    Arrangement,
    DuplicateHyperplane,
    ExhaustedRetries,
    Flat,
    GeometryError,
    LinearForm,
    common_forms,
    contained_in_hyperplane,
    flat_from_forms,
    intersect,
    meets_properly,
    pseudo_star_condition,
    span_dim,
)
from .ideals import initial_sequence

MAX_FAMILY_ATTEMPTS = 256


class NotProper(GeometryError):
    pass


class NotPseudoStar(GeometryError):
    pass


class WrongCodimension(GeometryError):
    pass


@dataclass(frozen=True)
class HyperplaneFamily:
    """Distinct hyperplanes H_1..H_s of P^N given by normalized forms."""

    ambient_dim: int
    forms: tuple[LinearForm, ...]
    prime: int = DEFAULT_PRIME

    def __post_init__(self):
        forms = tuple(f if isinstance(f, LinearForm) else LinearForm(tuple(f), self.prime) for f in self.forms)
        for f in forms:
            if f.num_vars != self.ambient_dim + 1:
                raise AmbientMismatch(f"form with {f.num_vars} coefficients in P^{self.ambient_dim}")
        if len(set(forms)) != len(forms):
            raise DuplicateHyperplane("family contains the same hyperplane twice")
        object.__setattr__(self, "forms", forms)

    @property
    def s(self) -> int:
        return len(self.forms)

    def matrix(self) -> np.ndarray:
        return np.array([f.coefficients for f in self.forms], dtype=np.int64)

    def same_hyperplanes(self, other: "HyperplaneFamily") -> bool:
        return self.ambient_dim == other.ambient_dim and set(self.forms) == set(other.forms)


def _colex(s: int, c: int) -> list[tuple[int, ...]]:
    return sorted(combinations(range(s), c), key=lambda S: S[::-1])


def _union_of_intersections(c: int, H: HyperplaneFamily) -> Arrangement:
    flats = tuple(flat_from_forms(H.ambient_dim, [H.forms[i] for i in S], H.prime) for S in _colex(H.s, c))
    return Arrangement(H.ambient_dim, flats, H.prime)


def build_star(c: int, H: HyperplaneFamily) -> Arrangement:
    """S(c, H): the binom(s, c) codimension-c intersections of a properly
    meeting family, listed in colexicographic order of index sets."""
    N = H.ambient_dim
    if not 1 <= c <= min(H.s, N):
        raise ValueError(f"codimension {c} outside 1..{min(H.s, N)}")
    if not meets_properly(H.forms, min(H.s, N)):
        raise NotProper("hyperplanes do not meet properly")
    return _union_of_intersections(c, H)


def build_pseudo_star(c: int, H: HyperplaneFamily) -> Arrangement:
    """P(c, H), requiring every c + 1 hyperplanes to meet in codimension c + 1."""
    if not 1 <= c <= H.ambient_dim:
        raise ValueError(f"codimension {c} outside 1..{H.ambient_dim}")
    if H.s < c:
        raise NotPseudoStar(f"{H.s} hyperplanes cannot cut codimension {c}")
    if H.s == c:
        ok = exactalg.rank(H.matrix(), H.prime) == c
    else:
        ok = pseudo_star_condition(H.forms, c)
    if not ok:
        raise NotPseudoStar(f"some {c + 1} hyperplanes do not meet in codimension {c + 1}")
    return _union_of_intersections(c, H)


def cone(A: Arrangement) -> Arrangement:
    """The same forms read in P^(N+1), with a new last coordinate."""
    flats = tuple(
        Flat(A.ambient_dim + 1, tuple(LinearForm(f.coefficients + (0,), A.prime) for f in L.forms), A.prime)
        for L in A.flats
    )
    return Arrangement(A.ambient_dim + 1, flats, A.prime)


@dataclass(frozen=True)
class PseudoStarCertificate:
    """Witness that an arrangement equals P(c, family): flat k is the
    intersection of the hyperplanes ``incidence[k]``."""

    family: HyperplaneFamily
    incidence: dict = field(hash=False)
    c: int = 2

    @property
    def s(self) -> int:
        return self.family.s

    def reconstruct(self) -> list[Flat]:
        H = self.family.forms
        return [intersect([H[i] for i in self.incidence[k]]) for k in sorted(self.incidence)]

    def as_dict(self) -> dict:
        return {
            "s": self.s,
            "c": self.c,
            "hyperplanes": [list(f.coefficients) for f in self.family.forms],
            "incidence": {str(k): list(v) for k, v in sorted(self.incidence.items())},
        }


def _check_codim2(A: Arrangement) -> None:
    bad = [i for i, L in enumerate(A.flats) if L.codim != 2]
    if bad:
        raise WrongCodimension(f"flats {bad} do not have codimension 2")


def recognize_pseudo_star(A: Arrangement) -> PseudoStarCertificate | None:
    """Recover H with A = P(2, H), or return None if no such family exists."""
    _check_codim2(A)
    N, p = A.ambient_dim, A.prime
    flats = A.flats
    t = len(flats)
    if t == 1:
        family = HyperplaneFamily(N, flats[0].forms, p)
        return PseudoStarCertificate(family, {0: (0, 1)})
    s = (1 + isqrt(1 + 8 * t)) // 2
    if comb(s, 2) != t:
        return None

    members: dict[LinearForm, frozenset[int]] = {}
    for i, j in combinations(range(t), 2):
        if span_dim(flats[i], flats[j]) != N - 1:
            continue
        (row,) = common_forms([flats[i], flats[j]])
        h = LinearForm(tuple(int(v) for v in row), p)
        if h not in members:
            members[h] = frozenset(k for k, L in enumerate(flats) if L.contains_form(h))
    hyperplanes = sorted((h for h, ks in members.items() if len(ks) == s - 1), key=lambda h: h.coefficients)
    if len(hyperplanes) != s:
        return None

    incidence: dict[int, tuple[int, int]] = {}
    for k in range(t):
        owners = tuple(i for i, h in enumerate(hyperplanes) if k in members[h])
        if len(owners) != 2:
            return None
        incidence[k] = owners
    if len(set(incidence.values())) != t:
        return None
    if not pseudo_star_condition(hyperplanes, 2):
        return None
    return PseudoStarCertificate(HyperplaneFamily(N, tuple(hyperplanes), p), incidence)


class Tag(str, enum.Enum):
    CONTAINED_IN_HYPERPLANE = "ContainedInHyperplane"
    PSEUDO_STAR = "PseudoStar"
    OTHER = "Other"


@dataclass(frozen=True)
class Classification:
    tag: Tag
    witness: LinearForm | None = None
    certificate: PseudoStarCertificate | None = None

    @property
    def d(self) -> int | None:
        return self.certificate.s if self.certificate else None

    def as_dict(self) -> dict:
        out: dict = {"tag": self.tag.value}
        if self.witness is not None:
            out["witness"] = list(self.witness.coefficients)
        if self.certificate is not None:
            out["d"] = self.d
            out["certificate"] = self.certificate.as_dict()
        return out


def classify(A: Arrangement) -> Classification:
    """Sort a codimension-2 arrangement into the two cases of the dichotomy
    (hyperplane first), or ``Other``."""
    _check_codim2(A)
    h = contained_in_hyperplane(A)
    if h is not None:
        return Classification(Tag.CONTAINED_IN_HYPERPLANE, witness=h)
    cert = recognize_pseudo_star(A)
    if cert is not None:
        return Classification(Tag.PSEUDO_STAR, certificate=cert)
    return Classification(Tag.OTHER)


def random_family(
    N: int,
    s: int,
    kind: str,
    rng: np.random.Generator,
    prime: int = DEFAULT_PRIME,
) -> HyperplaneFamily:
    """Random hyperplane family for tests and sweeps.

    ``proper``: resampled until the hyperplanes meet properly.
    ``through_point``: every form has last coefficient 0, so all hyperplanes
    pass through (0:...:0:1); resampled until any three meet in codimension 3.
    """
    if s < 2:
        raise ValueError("a family needs at least two hyperplanes")
    if kind not in ("proper", "through_point"):
        raise ValueError(f"unknown family kind {kind!r}")
    if kind == "through_point" and N < 3:
        raise ValueError("through_point families need N >= 3")
    for _ in range(MAX_FAMILY_ATTEMPTS):
        coeffs = rng.integers(0, prime, size=(s, N + 1))
        if kind == "through_point":
            coeffs[:, -1] = 0
        if not coeffs.any(axis=1).all():
            continue
        forms = [LinearForm(tuple(int(v) for v in row), prime) for row in coeffs]
        if len(set(forms)) != s:
            continue
        if kind == "proper":
            ok = meets_properly(forms, min(s, N))
        elif s == 2:
            ok = exactalg.rank(coeffs, prime) == 2
        else:
            ok = pseudo_star_condition(forms, 2)
        if ok:
            return HyperplaneFamily(N, tuple(forms), prime)
    raise ExhaustedRetries(f"no valid {kind} family after {MAX_FAMILY_ATTEMPTS} draws")


@dataclass
class TheoremReport:
    alpha1: int
    alpha2: int
    acm_pass: bool
    classification: Classification
    counterexample_candidate: bool
    d_mismatch: bool

    @property
    def gap(self) -> int:
        return self.alpha2 - self.alpha1

    @property
    def consistent(self) -> bool:
        return not (self.counterexample_candidate or self.d_mismatch)

    def as_dict(self) -> dict:
        return {
            "alpha1": self.alpha1,
            "alpha2": self.alpha2,
            "gap": self.gap,
            "acm_pass": self.acm_pass,
            "acm_note": "necessary-condition indicator, not a certificate",
            "classification": self.classification.as_dict(),
            "counterexample_candidate": self.counterexample_candidate,
            "d_mismatch": self.d_mismatch,
            "consistent": self.consistent,
        }


def verify_main_theorem(A: Arrangement, rng: np.random.Generator | None = None, t_max: int | None = None) -> TheoremReport:
    """Check one codimension-2 arrangement against the dichotomy.

    If alpha_2 = alpha_1 + 1 and the ACM indicator passes, the arrangement
    must lie in a hyperplane or be a pseudo-star; otherwise it is flagged as a
    counterexample candidate (modulo the indicator being only necessary).  A
    recognized pseudo-star must also have alpha_2 equal to its number of
    hyperplanes.
    """
    from .acmcheck import acm_indicator

    _check_codim2(A)
    rng = rng if rng is not None else np.random.default_rng(0)
    a1, a2 = initial_sequence(A, 2).values
    acm = acm_indicator(A, t_max=t_max, rng=rng)
    cls = classify(A)
    hypotheses = a2 - a1 == 1 and acm.passed
    return TheoremReport(
        alpha1=a1,
        alpha2=a2,
        acm_pass=acm.passed,
        classification=cls,
        counterexample_candidate=hypotheses and cls.tag is Tag.OTHER,
        d_mismatch=cls.tag is Tag.PSEUDO_STAR and a2 != cls.d,
    )
