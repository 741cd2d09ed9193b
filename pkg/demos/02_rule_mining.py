"""Mining association rules between stage intervals.

Every project becomes a transaction of six items such as ``EP2`` or
``ES5``. Apriori finds the frequent itemsets, and rules are then filtered
down to those that predict one later stage from earlier ones.
"""

# %%
from stage_effort import PipelineConfig, Stage, build_model
from stage_effort.rules import format_rules
from stage_effort.synthetic import generate_dataset

data = generate_dataset(34, seed=2009)
config = PipelineConfig(min_support=0.05, min_confidence=0.8)
model = build_model(data, config)
print(f"{len(data)} projects, {len(model.rules)} rules at support >= 0.05 and confidence >= 0.8")

# %%
# One transaction per project.
for pid, items in list(zip(data.ids, model.db.transactions))[:3]:
    print(pid, " ".join(str(i.code) for i in sorted(items)))

# %%
# Rules usable for the design stage: a single design item on the right,
# only planning and specification items on the left.
design = model.rules_for(Stage.ED)
print(f"{len(design)} design rules")
print(format_rules(design[:8]))

# %%
# Loosening the confidence threshold can only add rules.
looser = build_model(data, config.with_overrides(min_confidence=0.6))
print(len(model.rules), "->", len(looser.rules))
