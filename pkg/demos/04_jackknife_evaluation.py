"""Leave-one-out evaluation against an exponential regression baseline.

For each project the whole pipeline (universes, intervals, rules) is rebuilt
on the others and the held-out stage is predicted. The same is done with a
log-linear regression on the raw prior efforts. Bias, MMRE and MdMRE summarize
the folds, and a Wilcoxon rank-sum test compares absolute residuals.
"""

# %%
import time

from stage_effort import PipelineConfig, evaluate
from stage_effort.synthetic import generate_dataset

data = generate_dataset(34, seed=2009)
start = time.perf_counter()
report = evaluate(data, PipelineConfig())
print(f"evaluated {len(report.stages)} stages in {time.perf_counter() - start:.2f} s")

# %%
print(f"{'stage':<6}{'MMRE':>9}{'MdMRE':>9}{'MMRE reg':>10}{'MdMRE reg':>11}{'p':>8}")
for s in report.stages:
    p = f"{s.wilcoxon.p_value:.3f}" if s.wilcoxon else "n/a"
    print(f"{s.target.name:<6}{s.model.mmre:>9.3f}{s.model.mdmre:>9.3f}"
          f"{s.regression.mmre:>10.3f}{s.regression.mdmre:>11.3f}{p:>8}")

# %%
# Boxplot summaries of the absolute residuals, as drawn in a comparison plot.
first = report.stages[0]
for method, box in first.boxplots.items():
    print(method, box.to_dict() if box else None)

# %%
# The report serializes to schema-checked JSON, the same document the
# ``stage-effort evaluate`` command writes.
from stage_effort.report import dumps_report, validate_report
import json

text = dumps_report(report.to_dict())
validate_report(json.loads(text))
print(f"{len(text)} bytes of valid JSON")
