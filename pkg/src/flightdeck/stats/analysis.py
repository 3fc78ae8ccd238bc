"""Within-subject analysis: RM-ANOVA, Tukey HSD, Cronbach's alpha, Likert handling.

The one-way repeated-measures ANOVA partitions total variation into
condition, subject and error components; the all-pairs post-hoc uses the
studentized range distribution with the ANOVA's error mean square.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from ..errors import ZeroTotalVariance
from .distributions import f_sf, studentized_range_sf, t_ppf

_DEGENERATE_REL = 1e-12


@dataclass(frozen=True)
class MeasureTable:
    """Complete subjects x conditions matrix of one measure."""

    data: np.ndarray
    conditions: tuple[str, ...]
    subjects: tuple[str, ...] = ()

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float)
        object.__setattr__(self, "data", data)
        if data.ndim != 2:
            raise ValueError("table must be 2-D (subjects x conditions)")
        n, k = data.shape
        if n < 2 or k < 2:
            raise ValueError("need at least 2 subjects and 2 conditions")
        if len(self.conditions) != k:
            raise ValueError("condition labels must match table width")
        if not self.subjects:
            object.__setattr__(self, "subjects", tuple(f"s{i+1}" for i in range(n)))
        elif len(self.subjects) != n:
            raise ValueError("subject labels must match table height")
        if not np.all(np.isfinite(data)):
            raise ValueError("table must be complete (finite, no missing cells)")

    @property
    def n_subjects(self) -> int:
        return self.data.shape[0]

    @property
    def n_conditions(self) -> int:
        return self.data.shape[1]

    @staticmethod
    def from_records(records: Iterable[tuple[str, str, float]]) -> "MeasureTable":
        """Build from long-format (subject, condition, value) rows.

        Label order follows first appearance; every cell must be present
        exactly once.
        """
        subjects: list[str] = []
        conditions: list[str] = []
        cells: dict[tuple[str, str], float] = {}
        for subj, cond, value in records:
            if subj not in subjects:
                subjects.append(subj)
            if cond not in conditions:
                conditions.append(cond)
            key = (subj, cond)
            if key in cells:
                raise ValueError(f"duplicate cell for subject {subj!r}, condition {cond!r}")
            cells[key] = float(value)
        data = np.empty((len(subjects), len(conditions)))
        for i, subj in enumerate(subjects):
            for j, cond in enumerate(conditions):
                try:
                    data[i, j] = cells[(subj, cond)]
                except KeyError:
                    raise ValueError(
                        f"missing cell for subject {subj!r}, condition {cond!r}"
                    ) from None
        return MeasureTable(data, tuple(conditions), tuple(subjects))


@dataclass(frozen=True)
class AnovaResult:
    F: float
    df1: int
    df2: int
    p: float
    condition_means: tuple[float, ...]
    ci_half_width: float  # 95% CI half-width from the within-subject error term
    ss_conditions: float
    ss_subjects: float
    ss_error: float
    ss_total: float
    ms_error: float
    degenerate: bool = False


def rm_anova(table: MeasureTable) -> AnovaResult:
    """One-way repeated-measures ANOVA.

    With zero error variance the F ratio is undefined; the result is flagged
    degenerate and p reported as 0 (or 1 when the condition effect is also
    zero) instead of dividing by zero.
    """
    x = table.data
    n, k = x.shape
    grand = float(x.mean())
    cond_means = x.mean(axis=0)
    subj_means = x.mean(axis=1)
    ss_cond = float(n * np.sum((cond_means - grand) ** 2))
    ss_subj = float(k * np.sum((subj_means - grand) ** 2))
    ss_total = float(np.sum((x - grand) ** 2))
    resid = x - cond_means[None, :] - subj_means[:, None] + grand
    ss_err = float(np.sum(resid**2))
    df1 = k - 1
    df2 = (n - 1) * (k - 1)
    ms_err = ss_err / df2
    scale = max(ss_total, 1.0)
    if ss_err <= _DEGENERATE_REL * scale:
        degenerate = True
        if ss_cond <= _DEGENERATE_REL * scale:
            f_stat, p = 0.0, 1.0
        else:
            f_stat, p = math.inf, 0.0
        ci = 0.0
    else:
        degenerate = False
        f_stat = (ss_cond / df1) / ms_err
        p = f_sf(f_stat, df1, df2)
        ci = t_ppf(0.975, df2) * math.sqrt(ms_err / n)
    return AnovaResult(
        F=f_stat,
        df1=df1,
        df2=df2,
        p=p,
        condition_means=tuple(float(m) for m in cond_means),
        ci_half_width=ci,
        ss_conditions=ss_cond,
        ss_subjects=ss_subj,
        ss_error=ss_err,
        ss_total=ss_total,
        ms_error=ms_err,
        degenerate=degenerate,
    )


@dataclass(frozen=True)
class TukeyResult:
    conditions: tuple[str, ...]
    q: np.ndarray  # studentized range statistics, zero diagonal
    p: np.ndarray  # symmetric p matrix with unit diagonal
    df: int
    ms_error: float
    degenerate: bool = False

    def pair(self, a: str, b: str) -> float:
        i = self.conditions.index(a)
        j = self.conditions.index(b)
        return float(self.p[i, j])

    def pairs(self) -> list[tuple[str, str, float, float]]:
        out = []
        k = len(self.conditions)
        for i in range(k):
            for j in range(i + 1, k):
                out.append(
                    (self.conditions[i], self.conditions[j], float(self.q[i, j]), float(self.p[i, j]))
                )
        return out


def tukey_hsd(table: MeasureTable) -> TukeyResult:
    """All-pairs Tukey HSD using the RM-ANOVA error mean square and dof."""
    anova = rm_anova(table)
    n, k = table.data.shape
    means = np.asarray(anova.condition_means)
    q = np.zeros((k, k))
    p = np.ones((k, k))
    if anova.degenerate:
        for i in range(k):
            for j in range(i + 1, k):
                same = abs(means[i] - means[j]) <= 1e-12 * max(1.0, abs(means[i]))
                q[i, j] = q[j, i] = 0.0 if same else math.inf
                p[i, j] = p[j, i] = 1.0 if same else 0.0
        return TukeyResult(table.conditions, q, p, anova.df2, anova.ms_error, degenerate=True)
    se = math.sqrt(anova.ms_error / n)
    for i in range(k):
        for j in range(i + 1, k):
            qij = abs(means[i] - means[j]) / se
            q[i, j] = q[j, i] = qij
            pij = 1.0 if qij == 0.0 else studentized_range_sf(qij, k, anova.df2)
            p[i, j] = p[j, i] = pij
    return TukeyResult(table.conditions, q, p, anova.df2, anova.ms_error)


def cronbach_alpha(items) -> float:
    """Internal consistency over a subjects x items score matrix."""
    x = np.asarray(items, dtype=float)
    if x.ndim != 2 or x.shape[0] < 2 or x.shape[1] < 2:
        raise ValueError("need at least 2 subjects and 2 items")
    k = x.shape[1]
    item_vars = x.var(axis=0, ddof=1)
    total_var = x.sum(axis=1).var(ddof=1)
    if total_var == 0.0:
        raise ZeroTotalVariance("total score does not vary across subjects")
    return k / (k - 1) * (1.0 - float(item_vars.sum()) / float(total_var))


REVERSE_CODED_ITEM = 4  # "This interface was confusing." carries inverted valence
LIKERT_MIN, LIKERT_MAX = 1, 7
USABILITY_ITEMS = 4  # items 1-4 aggregate; item 5 ("pleasant") reports separately


@dataclass(frozen=True)
class LikertResponse:
    """One participant's five 7-point ratings of one interface."""

    scores: tuple[int, int, int, int, int]

    def __post_init__(self):
        if len(self.scores) != 5:
            raise ValueError("expected exactly five item scores")
        for s in self.scores:
            if not (isinstance(s, int) and LIKERT_MIN <= s <= LIKERT_MAX):
                raise ValueError(f"scores must be integers in [1, 7], got {s!r}")

    def coded_usability_items(self) -> tuple[int, int, int, int]:
        """Items 1-4 with the reverse-coded item inverted (8 - score)."""
        out = []
        for i in range(USABILITY_ITEMS):
            s = self.scores[i]
            out.append(8 - s if i + 1 == REVERSE_CODED_ITEM else s)
        return tuple(out)

    @property
    def pleasantness(self) -> int:
        return self.scores[4]


def usability_aggregate(response: LikertResponse) -> int:
    """Sum of items 1-4 after reverse-coding; ranges 4-28."""
    return sum(response.coded_usability_items())
