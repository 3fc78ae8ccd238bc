"""Experiment metrics and the statistical analysis pipeline."""

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
from .distributions import (
    betainc,
    f_cdf,
    f_sf,
    norm_cdf,
    norm_pdf,
    normal_range_cdf,
    studentized_range_cdf,
    studentized_range_sf,
    t_cdf,
    t_ppf,
)
from .metrics import (
    crash_count,
    planning_time,
    succeeded,
    summary_row,
    traversal_labels,
    trial_duration,
)
from .report import (
    SurveyRow,
    analyze_measure,
    format_p,
    plot_data,
    read_long_csv,
    read_survey_csv,
    render_report,
    survey_alpha,
    survey_item_matrix,
    usability_table,
    write_long_csv,
    write_plot_csv,
)

__all__ = [
    "AnovaResult",
    "LikertResponse",
    "MeasureTable",
    "SurveyRow",
    "TukeyResult",
    "analyze_measure",
    "betainc",
    "crash_count",
    "cronbach_alpha",
    "f_cdf",
    "f_sf",
    "format_p",
    "norm_cdf",
    "norm_pdf",
    "normal_range_cdf",
    "planning_time",
    "plot_data",
    "read_long_csv",
    "read_survey_csv",
    "render_report",
    "rm_anova",
    "studentized_range_cdf",
    "studentized_range_sf",
    "succeeded",
    "summary_row",
    "survey_alpha",
    "survey_item_matrix",
    "t_cdf",
    "t_ppf",
    "traversal_labels",
    "trial_duration",
    "tukey_hsd",
    "usability_aggregate",
    "usability_table",
    "write_long_csv",
    "write_plot_csv",
]
