"""Linear flats in projective space P^N over F_p.

A flat is stored by the forms cutting it out (the linear part of its ideal),
never by spanning points.  Spans are obtained by duality: the forms vanishing
on the span of two flats are the common forms of their ideals.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from . import exactalg
from .exactalg import DEFAULT_PRIME

MAX_SECTION_ATTEMPTS = 32


class GeometryError(ValueError):
    pass


class AllZeroForm(GeometryError):
    pass


class DependentForms(GeometryError):
    pass


class AmbientMismatch(GeometryError):
    pass


class DuplicateHyperplane(GeometryError):
    pass


class DuplicateFlat(GeometryError):
    pass


class DegenerateSection(GeometryError):
    """The hyperplane is special for the arrangement; draw another one."""


class ExhaustedRetries(RuntimeError):
    pass


def _normalize(coeffs: Sequence[int], p: int) -> tuple[int, ...]:
    vals = [int(v) % p for v in coeffs]
    lead = next((v for v in vals if v), 0)
    if not lead:
        raise AllZeroForm("linear form has no nonzero coefficient")
    inv = pow(lead, -1, p)
    return tuple(v * inv % p for v in vals)


@dataclass(frozen=True)
class LinearForm:
    """A nonzero linear form, scaled so its first nonzero coefficient is 1."""

    coefficients: tuple[int, ...]
    prime: int = DEFAULT_PRIME

    def __post_init__(self):
        object.__setattr__(self, "coefficients", _normalize(self.coefficients, self.prime))

    @property
    def num_vars(self) -> int:
        return len(self.coefficients)

    def vector(self) -> np.ndarray:
        return np.array(self.coefficients, dtype=np.int64)

    def __str__(self):
        return _format_form(self.coefficients, self.prime)


def _format_form(coeffs: Sequence[int], p: int) -> str:
    terms = []
    for i, v in enumerate(coeffs):
        if not v:
            continue
        v = v - p if v > p // 2 else v
        terms.append(f"{'' if v == 1 else '-' if v == -1 else v}x{i}")
    return " + ".join(terms).replace("+ -", "- ")


def _forms_matrix(forms: Iterable, num_vars: int, p: int) -> np.ndarray:
    rows = []
    for f in forms:
        coeffs = f.coefficients if isinstance(f, LinearForm) else tuple(f)
        if len(coeffs) != num_vars:
            raise AmbientMismatch(f"form of length {len(coeffs)} in a space with {num_vars} coordinates")
        rows.append(coeffs)
    return exactalg.as_matrix(rows, p, cols=num_vars)


@dataclass(frozen=True)
class Flat:
    """Linear subspace of P^N cut out by ``codim`` independent forms.

    ``forms`` holds the reduced echelon basis of the ideal's degree-1 part,
    so two flats are equal exactly when their fields are equal.
    """

    ambient_dim: int
    forms: tuple[LinearForm, ...]
    prime: int = DEFAULT_PRIME

    def __post_init__(self):
        n = self.ambient_dim + 1
        M = _forms_matrix(self.forms, n, self.prime)
        R, _ = exactalg.row_reduce(M, self.prime)
        if R.shape[0] != len(self.forms):
            raise DependentForms("defining forms of a flat must be independent")
        if not 1 <= R.shape[0] <= self.ambient_dim:
            raise GeometryError(f"codimension {R.shape[0]} outside 1..{self.ambient_dim}")
        canon = tuple(LinearForm(tuple(int(v) for v in row), self.prime) for row in R)
        object.__setattr__(self, "forms", canon)

    @property
    def codim(self) -> int:
        return len(self.forms)

    @property
    def dim(self) -> int:
        return self.ambient_dim - self.codim

    def matrix(self) -> np.ndarray:
        return np.array([f.coefficients for f in self.forms], dtype=np.int64)

    def points(self) -> np.ndarray:
        """Rows spanning the flat as a linear subspace of F_p^(N+1)."""
        return np.array(exactalg.kernel_basis(self.matrix(), self.prime), dtype=np.int64)

    def contains_form(self, form: LinearForm) -> bool:
        """True iff the hyperplane ``form = 0`` contains this flat."""
        M = np.vstack([self.matrix(), form.vector()[None, :]])
        return exactalg.rank(M, self.prime) == self.codim

    def __str__(self):
        return "{" + ", ".join(f"{f} = 0" for f in self.forms) + "}"


@dataclass(frozen=True)
class Arrangement:
    """A finite set of distinct flats sharing one ambient P^N."""

    ambient_dim: int
    flats: tuple[Flat, ...]
    prime: int = DEFAULT_PRIME

    def __post_init__(self):
        flats = tuple(self.flats)
        object.__setattr__(self, "flats", flats)
        seen: dict[Flat, int] = {}
        for i, L in enumerate(flats):
            if L.ambient_dim != self.ambient_dim:
                raise AmbientMismatch(f"flat {i} lives in P^{L.ambient_dim}, not P^{self.ambient_dim}")
            if L.prime != self.prime:
                raise AmbientMismatch("flats defined over different primes")
            if L in seen:
                raise DuplicateFlat(f"flats {seen[L]} and {i} coincide")
            seen[L] = i

    def __len__(self):
        return len(self.flats)

    def __iter__(self):
        return iter(self.flats)

    @property
    def num_vars(self) -> int:
        return self.ambient_dim + 1

    def codims(self) -> set[int]:
        return {L.codim for L in self.flats}

    def same_flats(self, other: "Arrangement") -> bool:
        return self.ambient_dim == other.ambient_dim and set(self.flats) == set(other.flats)


def flat_from_forms(N: int, forms, prime: int = DEFAULT_PRIME, strict: bool = False) -> Flat:
    """The flat cut out by ``forms`` (LinearForms or integer sequences).

    Dependent forms are allowed unless ``strict``; the codimension is then the
    rank of the input.
    """
    forms = list(forms)
    if not forms:
        raise GeometryError("at least one form is required")
    M = _forms_matrix(forms, N + 1, prime)
    if not M.any(axis=1).all():
        raise AllZeroForm("zero form among the defining forms")
    R, _ = exactalg.row_reduce(M, prime)
    if strict and R.shape[0] < len(forms):
        raise DependentForms(f"{len(forms)} forms span only a {R.shape[0]}-dimensional space")
    return _flat_from_rref(N, R, prime)


def _flat_from_rref(N: int, R: np.ndarray, prime: int) -> Flat:
    return Flat(N, tuple(LinearForm(tuple(int(v) for v in row), prime) for row in R), prime)


def _check_same_space(flats: Sequence[Flat]) -> None:
    dims = {L.ambient_dim for L in flats}
    if len(dims) > 1:
        raise AmbientMismatch(f"flats live in different spaces: {sorted(dims)}")


def _as_flat(x) -> Flat:
    if isinstance(x, LinearForm):
        return Flat(x.num_vars - 1, (x,), x.prime)
    return x


def intersect(flats: Sequence[Flat | LinearForm]) -> Flat | None:
    """Intersection of flats (hyperplanes may be given by their forms);
    ``None`` stands for the empty set."""
    flats = [_as_flat(L) for L in flats]
    _check_same_space(flats)
    N, p = flats[0].ambient_dim, flats[0].prime
    R, _ = exactalg.row_reduce(np.vstack([L.matrix() for L in flats]), p)
    if R.shape[0] == N + 1:
        return None
    return _flat_from_rref(N, R, p)


def intersection_dim(flats: Sequence[Flat]) -> int:
    """Projective dimension of the intersection, with dim(empty) = -1."""
    flats = list(flats)
    _check_same_space(flats)
    N, p = flats[0].ambient_dim, flats[0].prime
    return N - exactalg.rank(np.vstack([L.matrix() for L in flats]), p)


def span_dim(U: Flat, V: Flat) -> int:
    """Projective dimension of the smallest flat containing ``U`` and ``V``."""
    _check_same_space([U, V])
    p = U.prime
    joint = exactalg.rank(np.vstack([U.matrix(), V.matrix()]), p)
    common_forms = U.codim + V.codim - joint
    return U.ambient_dim - common_forms


def common_forms(flats: Sequence[Flat]) -> list[np.ndarray]:
    """RREF basis of the linear forms vanishing on every flat."""
    flats = list(flats)
    _check_same_space(flats)
    p = flats[0].prime
    pts = np.vstack([L.points() for L in flats])
    return exactalg.kernel_basis(pts, p)


def contained_in_hyperplane(A: Arrangement) -> LinearForm | None:
    """A hyperplane containing every flat of ``A``, or ``None`` if they span P^N."""
    if not len(A):
        raise GeometryError("empty arrangement")
    basis = common_forms(A.flats)
    if not basis:
        return None
    return LinearForm(tuple(int(v) for v in basis[0]), A.prime)


def _family_matrix(H: Sequence[LinearForm]) -> np.ndarray:
    forms = list(H)
    if len(set(forms)) != len(forms):
        raise DuplicateHyperplane("hyperplane family contains proportional forms")
    if len({f.num_vars for f in forms}) > 1:
        raise AmbientMismatch("forms of different lengths")
    return np.array([f.coefficients for f in forms], dtype=np.int64)


def _all_subsets_independent(M: np.ndarray, size: int, p: int) -> bool:
    return all(exactalg.rank(M[list(idx)], p) == size for idx in combinations(range(M.shape[0]), size))


def meets_properly(H: Sequence[LinearForm], up_to: int) -> bool:
    """Whether any ``c <= up_to`` of the hyperplanes meet in codimension ``c``.

    When ``up_to`` reaches N and there are more than N hyperplanes, any N+1 of
    them must also have empty intersection; a family of more than N
    hyperplanes through a common point therefore does not meet properly.
    """
    M = _family_matrix(H)
    s, n = M.shape
    p = H[0].prime
    if not 1 <= up_to <= min(s, n - 1):
        raise ValueError(f"up_to={up_to} outside 1..{min(s, n - 1)}")
    size = up_to + 1 if (up_to == n - 1 and s > up_to) else up_to
    return _all_subsets_independent(M, size, p)


def pseudo_star_condition(H: Sequence[LinearForm], c: int) -> bool:
    """Whether every ``c + 1`` of the hyperplanes meet in codimension ``c + 1``."""
    M = _family_matrix(H)
    s = M.shape[0]
    if not 1 <= c < s:
        raise ValueError(f"pseudo-star condition needs 1 <= c < s, got c={c}, s={s}")
    return _all_subsets_independent(M, c + 1, H[0].prime)


def restrict_form(coeffs: np.ndarray, H: LinearForm, p: int) -> np.ndarray:
    """Coordinates of a form's restriction to the hyperplane ``H``.

    ``H`` is normalized with leading coefficient 1 at index ``j``; on ``H`` we
    have ``x_j = -sum_{i != j} h_i x_i``, and the remaining variables in their
    original order become the coordinates of ``H``.
    """
    h = H.vector()
    j = int(np.flatnonzero(h)[0])
    coeffs = np.asarray(coeffs, dtype=np.int64)
    out = (coeffs - np.multiply.outer(coeffs[..., j], h) % p) % p
    return np.delete(out, j, axis=-1)


def hyperplane_section(A: Arrangement, H: LinearForm) -> Arrangement:
    """The arrangement ``{L cap H}`` written in coordinates on ``H``.

    Raises:
        DegenerateSection: ``H`` contains a flat, misses a point flat, or two
            sections coincide.
    """
    if H.num_vars != A.num_vars:
        raise AmbientMismatch("hyperplane and arrangement live in different spaces")
    p = A.prime
    N = A.ambient_dim
    if N < 2:
        raise DegenerateSection("cannot section an arrangement in P^1")
    sections = []
    for L in A.flats:
        if L.contains_form(H):
            raise DegenerateSection("hyperplane contains a flat")
        R, _ = exactalg.row_reduce(restrict_form(L.matrix(), H, p), p)
        if R.shape[0] != L.codim or R.shape[0] > N - 1:
            raise DegenerateSection("section changes codimension")
        sections.append(_flat_from_rref(N - 1, R, p))
    if len(set(sections)) != len(sections):
        raise DegenerateSection("two flats have the same section")
    return Arrangement(N - 1, tuple(sections), p)


def random_hyperplane(N: int, rng: np.random.Generator, prime: int = DEFAULT_PRIME) -> LinearForm:
    """Uniform random nonzero form on P^N, normalized."""
    while True:
        coeffs = rng.integers(0, prime, size=N + 1)
        if coeffs.any():
            return LinearForm(tuple(int(v) for v in coeffs), prime)


def general_section(A: Arrangement, rng: np.random.Generator) -> tuple[Arrangement, LinearForm]:
    """Section by a random hyperplane, resampling degenerate draws."""
    for _ in range(MAX_SECTION_ATTEMPTS):
        H = random_hyperplane(A.ambient_dim, rng, A.prime)
        try:
            return hyperplane_section(A, H), H
        except DegenerateSection:
            continue
    raise ExhaustedRetries(f"no nondegenerate section in {MAX_SECTION_ATTEMPTS} attempts")


def random_flat(N: int, c: int, rng: np.random.Generator, prime: int = DEFAULT_PRIME) -> Flat:
    """Random flat of codimension ``c`` (random forms, resampled until independent)."""
    while True:
        M = rng.integers(0, prime, size=(c, N + 1))
        R, _ = exactalg.row_reduce(M, prime)
        if R.shape[0] == c:
            return _flat_from_rref(N, R, prime)


def change_coordinates(A: Arrangement, T: np.ndarray) -> Arrangement:
    """Image of ``A`` under the linear change of coordinates ``x -> T x``.

    A form with coefficient row ``f`` pulls back to ``f T^{-1}``.
    """
    p = A.prime
    Tinv = exactalg.invert_linear_change(T, p)
    flats = []
    for L in A.flats:
        R, _ = exactalg.row_reduce(exactalg.matmul(L.matrix(), Tinv, p), p)
        flats.append(_flat_from_rref(A.ambient_dim, R, p))
    return Arrangement(A.ambient_dim, tuple(flats), p)
