"""CSV ingestion and report/plot-data emission for the analysis pipeline.

Measurement CSVs are long format (subject,condition,measure,value); survey
CSVs are one row per subject x interface (subject,interface,q1..q5).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Union

import numpy as np

from ..errors import ConfigError
from .analysis import (
    AnovaResult,
    LikertResponse,
    MeasureTable,
    TukeyResult,
    cronbach_alpha,
    rm_anova,
    tukey_hsd,
    usability_aggregate,
)

LONG_HEADER = ["subject", "condition", "measure", "value"]
SURVEY_HEADER = ["subject", "interface", "q1", "q2", "q3", "q4", "q5"]


def read_long_csv(path: Union[str, Path]) -> dict[str, MeasureTable]:
    """Load a long-format measurement CSV into one table per measure."""
    by_measure: dict[str, list[tuple[str, str, float]]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != LONG_HEADER:
            raise ConfigError(f"expected header {','.join(LONG_HEADER)}")
        for row in reader:
            try:
                value = float(row["value"])
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad value in row {row!r}") from exc
            by_measure.setdefault(row["measure"], []).append(
                (row["subject"], row["condition"], value)
            )
    try:
        return {m: MeasureTable.from_records(rows) for m, rows in by_measure.items()}
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def write_long_csv(rows: Iterable[tuple[str, str, str, float]], path: Union[str, Path]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(LONG_HEADER)
        for row in rows:
            writer.writerow(row)


@dataclass(frozen=True)
class SurveyRow:
    subject: str
    interface: str
    response: LikertResponse


def read_survey_csv(path: Union[str, Path]) -> list[SurveyRow]:
    rows: list[SurveyRow] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != SURVEY_HEADER:
            raise ConfigError(f"expected header {','.join(SURVEY_HEADER)}")
        for row in reader:
            try:
                scores = tuple(int(row[f"q{i}"]) for i in range(1, 6))
                rows.append(SurveyRow(row["subject"], row["interface"], LikertResponse(scores)))
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad survey row {row!r}: {exc}") from exc
    return rows


def usability_table(rows: Iterable[SurveyRow]) -> MeasureTable:
    """Subjects x interfaces table of usability aggregates."""
    records = [
        (r.subject, r.interface, float(usability_aggregate(r.response))) for r in rows
    ]
    try:
        return MeasureTable.from_records(records)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def survey_item_matrix(rows: Iterable[SurveyRow]) -> np.ndarray:
    """Usability items (reverse-coded item inverted) as a responses x 4 matrix."""
    return np.array([r.response.coded_usability_items() for r in rows], dtype=float)


def survey_alpha(rows: Iterable[SurveyRow]) -> float:
    return cronbach_alpha(survey_item_matrix(rows))


def format_p(p: float) -> str:
    if p < 1e-4:
        return "p < 0.0001"
    return f"p = {p:.4f}"


def render_report(
    measure: str,
    anova: AnovaResult,
    tukey: Optional[TukeyResult] = None,
    conditions: Optional[tuple[str, ...]] = None,
    alpha: Optional[float] = None,
) -> str:
    """Plain-text analysis summary for one measure."""
    out = io.StringIO()
    labels = conditions or (tukey.conditions if tukey else None)
    print(f"measure: {measure}", file=out)
    if anova.degenerate:
        print("  note: zero within-subject error variance (degenerate)", file=out)
    print(
        f"  RM-ANOVA: F({anova.df1}, {anova.df2}) = {anova.F:.4f}, {format_p(anova.p)}",
        file=out,
    )
    for i, mean in enumerate(anova.condition_means):
        label = labels[i] if labels else f"c{i+1}"
        lo = mean - anova.ci_half_width
        hi = mean + anova.ci_half_width
        print(f"  {label}: mean = {mean:.4f}, 95% CI [{lo:.4f}, {hi:.4f}]", file=out)
    if tukey is not None:
        print("  Tukey HSD pairwise:", file=out)
        for a, b, q, p in tukey.pairs():
            print(f"    {a} vs {b}: q = {q:.4f}, {format_p(p)}", file=out)
    if alpha is not None:
        print(f"  Cronbach alpha: {alpha:.4f}", file=out)
    return out.getvalue()


def plot_data(anova: AnovaResult, conditions: tuple[str, ...]) -> list[tuple[str, float, float, float]]:
    """(condition, mean, ci_low, ci_high) tuples for external plotting."""
    return [
        (cond, m, m - anova.ci_half_width, m + anova.ci_half_width)
        for cond, m in zip(conditions, anova.condition_means)
    ]


def write_plot_csv(rows: Iterable[tuple[str, float, float, float]], path: Union[str, Path]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["condition", "mean", "ci_low", "ci_high"])
        for row in rows:
            writer.writerow(row)


def analyze_measure(table: MeasureTable, measure: str, alpha: Optional[float] = None) -> tuple[str, AnovaResult, TukeyResult]:
    """Full pipeline for one table: ANOVA, post-hoc, rendered text."""
    anova = rm_anova(table)
    tukey = tukey_hsd(table)
    text = render_report(measure, anova, tukey, table.conditions, alpha)
    return text, anova, tukey
