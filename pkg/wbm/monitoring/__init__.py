"""
Verdict logic and sweep summaries.
"""

from wbm.monitoring.verdicts import (  # noqa: F401
    InequalityReport,
    Relation,
    SweepSummary,
    Verdict,
    decide_verdict,
    summarize,
)
