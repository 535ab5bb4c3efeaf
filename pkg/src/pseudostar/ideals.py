"""Graded pieces of symbolic powers of ideals of flat arrangements.

For a union of flats L_1, ..., L_k the m-th symbolic power is the
intersection of the m-th powers of the (complete intersection) ideals of the
L_i, i.e. the forms vanishing to order at least m along every flat.  Its
degree-t piece is the common kernel of linear conditions on the coefficients
of a degree-t form: after a coordinate change u = M x putting a flat at
{u_0 = ... = u_{c-1} = 0}, the coefficients of every u-monomial of degree < m
in u_0..u_{c-1} must vanish.

Monomials are exponent tuples in graded-lexicographic order with
x_0 > x_1 > ... > x_N.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb
from typing import Sequence

import numpy as np

from . import exactalg
from .geometry import Arrangement, Flat


@lru_cache(maxsize=None)
def monomials(num_vars: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of degree ``degree``, graded-lex descending."""
    out = []
    for idx in combinations_with_replacement(range(num_vars), degree):
        e = [0] * num_vars
        for i in idx:
            e[i] += 1
        out.append(tuple(e))
    return tuple(out)


@dataclass(frozen=True)
class MonomialBasis:
    num_vars: int
    degree: int
    monomials: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.monomials)

    def index(self, exponent) -> int:
        return _monomial_index(self.num_vars, self.degree)[tuple(exponent)]


@lru_cache(maxsize=None)
def _monomial_index(num_vars: int, degree: int) -> dict:
    return {e: i for i, e in enumerate(monomials(num_vars, degree))}


def monomial_basis(num_vars: int, degree: int) -> MonomialBasis:
    return MonomialBasis(num_vars, degree, monomials(num_vars, degree))


def num_monomials(num_vars: int, degree: int) -> int:
    return comb(num_vars - 1 + degree, num_vars - 1) if degree >= 0 else 0


# -- expansion under a linear change of coordinates -------------------------

@lru_cache(maxsize=256)
def _low_rows(n: int, c: int, m: int, d: int) -> tuple[tuple, dict]:
    """u-monomials of degree d whose degree in u_0..u_{c-1} is below m."""
    rows = tuple(e for e in monomials(n, d) if sum(e[:c]) < m)
    return rows, {e: i for i, e in enumerate(rows)}


@lru_cache(maxsize=256)
def _shift_maps(n: int, c: int, m: int, d: int) -> tuple:
    """For each variable k, (src, dst) row indices for multiplication by u_k
    from degree d-1 to degree d, dropping targets outside the kept rows."""
    prev, _ = _low_rows(n, c, m, d - 1)
    _, index = _low_rows(n, c, m, d)
    maps = []
    for k in range(n):
        src, dst = [], []
        for i, e in enumerate(prev):
            f = list(e)
            f[k] += 1
            j = index.get(tuple(f))
            if j is not None:
                src.append(i)
                dst.append(j)
        maps.append((np.array(src, dtype=np.intp), np.array(dst, dtype=np.intp)))
    return tuple(maps)


class _Closure:
    """Monomials needed to build ``targets`` by multiplying one variable at a
    time: x^mu = x^(mu - e_j) * x_j with j the first variable present."""

    def __init__(self, targets: Sequence[tuple[int, ...]], degree: int):
        self.degree = degree
        levels: list[set] = [set() for _ in range(degree + 1)]
        for mu in targets:
            mu = list(mu)
            d = degree
            while tuple(mu) not in levels[d]:
                levels[d].add(tuple(mu))
                if d == 0:
                    break
                j = next(i for i, v in enumerate(mu) if v)
                mu[j] -= 1
                d -= 1
        self.exps = [sorted(level, reverse=True) for level in levels]
        pos = [{e: i for i, e in enumerate(level)} for level in self.exps]
        self.parent = [None]
        self.var = [None]
        for d in range(1, degree + 1):
            par, var = [], []
            for e in self.exps[d]:
                j = next(i for i, v in enumerate(e) if v)
                f = list(e)
                f[j] -= 1
                par.append(pos[d - 1][tuple(f)])
                var.append(j)
            self.parent.append(np.array(par, dtype=np.intp))
            self.var.append(np.array(var, dtype=np.intp))
        top = pos[degree]
        self.target_cols = np.array([top[tuple(mu)] for mu in targets], dtype=np.intp)


def _expand(Minv: np.ndarray, c: int, m: int, closure: _Closure, p: int) -> np.ndarray:
    """Low-order part of x^mu for the closure's targets, rewritten in u.

    With x = Minv u, column ``i`` holds the coefficients of the ``i``-th target
    on the rows of ``_low_rows(n, c, m, t)``.  Multiplying by a linear form
    never lowers the u_0..u_{c-1} degree, so truncating every intermediate
    degree to the kept rows is exact.
    """
    n = Minv.shape[0]
    V = np.ones((1, 1), dtype=np.int64)
    for d in range(1, closure.degree + 1):
        rows, _ = _low_rows(n, c, m, d)
        P = V[:, closure.parent[d]]
        A = Minv[closure.var[d], :]
        W = np.zeros((len(rows), P.shape[1]), dtype=np.int64)
        for k, (src, dst) in enumerate(_shift_maps(n, c, m, d)):
            coef = A[:, k]
            if src.size and coef.any():
                W[dst] = (W[dst] + P[src] * coef) % p
        V = W
    return V[:, closure.target_cols]


def _adapted_inverse(F: np.ndarray, p: int) -> np.ndarray:
    """Minv with x = Minv u, where u_0..u_{c-1} are the rows of ``F``."""
    return exactalg.invert_linear_change(exactalg.complete_to_basis(F, p), p)


def vanishing_conditions(flat: Flat, m: int, t: int) -> np.ndarray:
    """Conditions for a degree-t form to lie in the m-th power of ``flat``'s ideal.

    Rows are functionals on the coefficient vector (columns indexed by
    ``monomial_basis(N + 1, t)``); a form satisfies all of them iff it vanishes
    to order at least ``m`` along the flat.
    """
    if m < 1 or t < 0:
        raise ValueError("need m >= 1 and t >= 0")
    p = flat.prime
    n = flat.ambient_dim + 1
    closure = _Closure(monomials(n, t), t)
    return _expand(_adapted_inverse(flat.matrix(), p), flat.codim, m, closure, p)


def condition_count(N: int, c: int, m: int, t: int) -> int:
    return sum(comb(c - 1 + k, c - 1) * num_monomials(N - c + 1, t - k) for k in range(min(m - 1, t) + 1))


# -- dimension engine ---------------------------------------------------------

def _rref(F: np.ndarray, p: int) -> np.ndarray:
    return exactalg.row_reduce(F, p)[0]


def essentialize(blocks: Sequence[np.ndarray], p: int) -> tuple[list[np.ndarray], int]:
    """Rewrite the flats' forms in a basis of the span of all their forms.

    The ideal of the arrangement is extended from the polynomial ring on that
    span, so initial degrees are unchanged.  Returns the transformed blocks
    and the number of essential variables.
    """
    n = blocks[0].shape[1]
    span = _rref(np.vstack(blocks), p)
    r = span.shape[0]
    if r == n:
        return list(blocks), n
    Qinv = exactalg.invert_linear_change(exactalg.complete_to_basis(span, p), p)
    return [_rref(exactalg.matmul(F, Qinv, p)[:, :r], p) for F in blocks], r


def _common_forms(F: np.ndarray, G: np.ndarray, p: int) -> list[tuple[int, ...]]:
    """Normalized basis of the forms lying in both row spaces."""
    X = np.vstack([F, G])
    ker = exactalg.kernel_columns(X.T, p)
    out = []
    for j in range(ker.shape[1]):
        v = exactalg.matmul(ker[: F.shape[0], j][None, :], F, p)[0]
        lead = int(v[np.flatnonzero(v)[0]])
        out.append(tuple(int(x) for x in v * pow(lead, -1, p) % p))
    return out


def _in_span(v: np.ndarray, F: np.ndarray, p: int) -> bool:
    return exactalg.rank(np.vstack([F, v[None, :]]), p) == F.shape[0]


def _independent_of(rows: list[np.ndarray], new: np.ndarray, p: int) -> bool:
    stacked = np.vstack(rows + [new]) if rows else new
    return exactalg.rank(stacked, p) == stacked.shape[0]


@lru_cache(maxsize=128)
def _monomials_in_powers(n: int, t: int, supports: tuple[tuple[int, ...], ...], m: int) -> tuple:
    """Degree-t monomials lying in every (z_S)^m for S in ``supports``."""
    return tuple(e for e in monomials(n, t) if all(sum(e[i] for i in S) >= m for S in supports))


class PowerEngine:
    """Graded dimensions of intersections of powers of linear ideals.

    The engine picks coordinates z in which as many flats as possible are
    coordinate flats {z_i = 0, i in S}: first hyperplanes shared by several
    flats, then whole blocks of forms of flats independent of those already
    chosen.  On coordinate flats the powers are monomial ideals, so their
    intersection is spanned by monomials; every other flat then cuts that
    space down through its vanishing conditions.
    """

    def __init__(self, blocks: Sequence[np.ndarray], p: int):
        if not blocks:
            raise ValueError("no flats")
        self.p = p
        self.n = n = blocks[0].shape[1]
        blocks = [_rref(np.asarray(F, dtype=np.int64), p) for F in blocks]
        counts: dict[tuple[int, ...], int] = {}
        for i in range(len(blocks)):
            for j in range(i + 1, len(blocks)):
                for f in _common_forms(blocks[i], blocks[j], p):
                    counts[f] = 0
        for f in counts:
            v = np.array(f, dtype=np.int64)
            counts[f] = sum(_in_span(v, F, p) for F in blocks)
        basis: list[np.ndarray] = []
        for f, _ in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0])):
            if len(basis) == n:
                break
            v = np.array(f, dtype=np.int64)[None, :]
            if _independent_of(basis, v, p):
                basis.append(v)
        for F in blocks:
            if _independent_of(basis, F, p):
                basis.append(F)
        Q = exactalg.complete_to_basis(np.vstack(basis), p) if basis else exactalg.identity(n)
        Qinv = exactalg.invert_linear_change(Q, p)
        supports, others = [], []
        for F in blocks:
            G = _rref(exactalg.matmul(F, Qinv, p), p)
            if (np.count_nonzero(G, axis=1) == 1).all():
                supports.append(tuple(int(np.flatnonzero(row)[0]) for row in G))
            else:
                others.append(G)
        self.supports = tuple(sorted(set(supports)))
        self.others = others
        self._inverses = [_adapted_inverse(G, p) for G in others]

    def dim(self, m: int, t: int) -> int:
        """dim of the degree-t piece of the intersection of the m-th powers."""
        if t < m:
            return 0
        p = self.p
        basis = _monomials_in_powers(self.n, t, self.supports, m)
        if not basis or not self.others:
            return len(basis)
        closure = _Closure(basis, t)
        K = None
        for G, Minv in zip(self.others, self._inverses):
            C = _expand(Minv, G.shape[0], m, closure, p)
            D = C if K is None else exactalg.matmul(C, K, p)
            R, piv = exactalg.row_reduce(D, p)
            pivset = set(piv)
            free = [j for j in range(D.shape[1]) if j not in pivset]
            if not free:
                return 0
            if K is None:
                K = np.zeros((D.shape[1], len(free)), dtype=np.int64)
                K[free, np.arange(len(free))] = 1
                if piv:
                    K[piv, :] = (-R[:, free]) % p
            elif piv:
                K = (K[:, free] - exactalg.matmul(K[:, piv], R[:, free], p)) % p
        return K.shape[1]


def power_dim(blocks: Sequence[np.ndarray], m: int, t: int, p: int) -> int:
    """dim of the degree-t piece of the intersection of (forms of L_i)^m."""
    return PowerEngine(blocks, p).dim(m, t)


def _blocks(A: Arrangement) -> list[np.ndarray]:
    if not len(A):
        raise ValueError("empty arrangement")
    return [L.matrix() for L in A.flats]


def symbolic_power_dim(A: Arrangement, m: int, t: int) -> int:
    """dim_K I^(m)_t for the ideal I of the arrangement."""
    if m < 1 or t < 0:
        raise ValueError("need m >= 1 and t >= 0")
    return power_dim(_blocks(A), m, t, A.prime)


def stacked_power_dim(A: Arrangement, m: int, t: int) -> int:
    """Same quantity as ``symbolic_power_dim`` by ranking every flat's full
    condition matrix at once.  Slow; kept as the reference route."""
    total = num_monomials(A.num_vars, t)
    stacked = np.vstack([vanishing_conditions(L, m, t) for L in A.flats])
    return total - exactalg.rank(stacked, A.prime)


def _first_positive(engine: PowerEngine, m: int, start: int, stop: int) -> int:
    for t in range(start, stop + 1):
        if engine.dim(m, t) > 0:
            return t
    raise AssertionError(f"no nonzero form of degree <= {stop} in the symbolic power")


def alpha(A: Arrangement, m: int = 1) -> int:
    """Initial degree of the m-th symbolic power."""
    if m < 1:
        raise ValueError("m must be positive")
    blocks, _ = essentialize(_blocks(A), A.prime)
    # one form per flat, raised to m, lies in I^(m)
    return _first_positive(PowerEngine(blocks, A.prime), m, m, m * len(blocks))


@dataclass(frozen=True)
class InitialSequence:
    values: tuple[int, ...]

    def __post_init__(self):
        v = self.values
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError(f"initial sequence must be strictly increasing: {v}")
        for a in range(1, len(v) + 1):
            for b in range(1, len(v) + 1 - a):
                if v[a + b - 1] > v[a - 1] + v[b - 1]:
                    raise ValueError(f"initial sequence must be subadditive: {v}")

    def __getitem__(self, m: int) -> int:
        """alpha_m, 1-based."""
        return self.values[m - 1]

    def __len__(self):
        return len(self.values)

    def as_list(self) -> list[int]:
        return list(self.values)


def initial_sequence(A: Arrangement, m_max: int) -> InitialSequence:
    """(alpha(A, 1), ..., alpha(A, m_max)).

    Each scan starts one above the previous value (symbolic powers have
    strictly increasing initial degrees) and cannot pass alpha_a + alpha_b.
    """
    if m_max < 1:
        raise ValueError("m_max must be positive")
    p = A.prime
    blocks, _ = essentialize(_blocks(A), p)
    engine = PowerEngine(blocks, p)
    vals: list[int] = []
    for m in range(1, m_max + 1):
        start = vals[-1] + 1 if vals else 1
        bound = min((vals[a - 1] + vals[m - a - 1] for a in range(1, m)), default=len(blocks))
        vals.append(_first_positive(engine, m, start, bound))
    return InitialSequence(tuple(vals))


@dataclass(frozen=True)
class HilbertTable:
    ambient_dim: int
    m: int
    ideal_dims: tuple[int, ...]
    quotient_dims: tuple[int, ...]

    def ideal(self, t: int) -> int:
        return self.ideal_dims[t]

    def quotient(self, t: int) -> int:
        return self.quotient_dims[t]

    def first_difference(self) -> tuple[int, ...]:
        q = self.quotient_dims
        return tuple(q[t] - (q[t - 1] if t else 0) for t in range(len(q)))

    def as_dict(self) -> dict:
        return {"m": self.m, "ideal": list(self.ideal_dims), "quotient": list(self.quotient_dims)}


def hilbert_table(A: Arrangement, m: int, t_max: int) -> HilbertTable:
    """dim I^(m)_t and dim (R/I^(m))_t for t = 0..t_max.

    Computed on the essential variables and lifted: if e variables do not
    occur in any defining form, dim I_t = sum_j dim I'_j * #monomials of
    degree t - j in those e variables.
    """
    if t_max < 0:
        raise ValueError("t_max must be non-negative")
    p = A.prime
    n = A.num_vars
    blocks, r = essentialize(_blocks(A), p)
    engine = PowerEngine(blocks, p)
    ess = [engine.dim(m, t) for t in range(t_max + 1)]
    e = n - r
    if e:
        ideal = [sum(ess[j] * num_monomials(e, t - j) for j in range(t + 1)) for t in range(t_max + 1)]
    else:
        ideal = ess
    quot = [num_monomials(n, t) - ideal[t] for t in range(t_max + 1)]
    return HilbertTable(A.ambient_dim, m, tuple(ideal), tuple(quot))


def degree_of(A: Arrangement) -> int:
    """Degree of the reduced union of flats: one per component."""
    return len(A.flats)
