"""Hilbert-function indicator for arithmetically Cohen-Macaulay arrangements.

If R/I is Cohen-Macaulay of positive dimension, a general linear form h is
a non-zero-divisor on it and I + (h) is saturated, so the first difference of
the Hilbert function of R/I equals the Hilbert function of the section.  The
indicator checks this at every level of a chain of general sections down to
points.  Passing is necessary for ACM, not sufficient.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import Arrangement, LinearForm, general_section
from .ideals import HilbertTable, alpha, hilbert_table


@dataclass
class AcmLevel:
    arrangement: Arrangement
    table: HilbertTable
    hyperplane: LinearForm | None = None

    @property
    def alpha(self) -> int | None:
        return next((t for t, v in enumerate(self.table.ideal_dims) if v), None)


@dataclass
class AcmReport:
    passed: bool
    t_max: int
    levels: list[AcmLevel]
    mismatches: list[tuple[int, int, int, int]] = field(default_factory=list)

    @property
    def degrees_checked(self) -> range:
        return range(self.t_max + 1)

    @property
    def section_hyperplanes(self) -> list[LinearForm]:
        return [lvl.hyperplane for lvl in self.levels[1:]]

    @property
    def alpha_preserved(self) -> bool:
        """Whether the first section keeps the initial degree."""
        return len(self.levels) < 2 or self.levels[0].alpha == self.levels[1].alpha

    def as_dict(self) -> dict:
        return {
            "indicator_pass": self.passed,
            "kind": "necessary-condition indicator",
            "t_max": self.t_max,
            "alpha_preserved": self.alpha_preserved,
            "levels": [
                {
                    "ambient_dim": lvl.arrangement.ambient_dim,
                    "section_by": list(lvl.hyperplane.coefficients) if lvl.hyperplane else None,
                    "alpha": lvl.alpha,
                    "hilbert": list(lvl.table.quotient_dims),
                }
                for lvl in self.levels
            ],
            "mismatches": [
                {"level": lv, "t": t, "delta_hf": a, "section_hf": b} for lv, t, a, b in self.mismatches
            ],
        }


def acm_indicator(
    A: Arrangement,
    t_max: int | None = None,
    rng: np.random.Generator | None = None,
) -> AcmReport:
    """Compare first differences of Hilbert functions along general sections.

    Level ``k + 1`` is a random hyperplane section of level ``k``; sectioning
    stops once some flat is a point.  ``t_max`` defaults to alpha(A) + 5 and
    must be at least alpha(A) + 3.
    """
    a1 = alpha(A, 1)
    if t_max is None:
        t_max = a1 + 5
    elif t_max < a1 + 3:
        raise ValueError(f"t_max={t_max} is below alpha + 3 = {a1 + 3}")
    rng = rng if rng is not None else np.random.default_rng(0)

    levels = [AcmLevel(A, hilbert_table(A, 1, t_max))]
    current = A
    while min(L.dim for L in current.flats) > 0:
        current, H = general_section(current, rng)
        levels.append(AcmLevel(current, hilbert_table(current, 1, t_max), H))

    mismatches = []
    for k in range(len(levels) - 1):
        delta = levels[k].table.first_difference()
        nxt = levels[k + 1].table.quotient_dims
        for t in range(t_max + 1):
            if delta[t] != nxt[t]:
                mismatches.append((k, t, delta[t], nxt[t]))
    return AcmReport(not mismatches, t_max, levels, mismatches)


def search_non_acm_pseudo_star(N: int, s: int, trials: int, seed: int, prime: int | None = None) -> list[dict]:
    """Run the indicator on random codimension-2 pseudo-stars and return the
    failures with enough data to reproduce them.

    Trial ``i`` draws from ``default_rng([seed, i])``; even trials use
    properly meeting families, odd ones families through a common point
    (when N >= 3).
    """
    from .configs import build_pseudo_star, random_family
    from .exactalg import DEFAULT_PRIME

    if trials < 1:
        raise ValueError("trials must be at least 1")
    prime = prime or DEFAULT_PRIME
    failures = []
    for i in range(trials):
        rng = np.random.default_rng([seed, i])
        kind = "through_point" if (i % 2 and N >= 3) else "proper"
        H = random_family(N, s, kind, rng, prime)
        report = acm_indicator(build_pseudo_star(2, H), rng=rng)
        if not report.passed:
            failures.append(
                {
                    "seed": seed,
                    "trial": i,
                    "kind": kind,
                    "family": [list(f.coefficients) for f in H.forms],
                    "report": report.as_dict(),
                }
            )
    return failures
