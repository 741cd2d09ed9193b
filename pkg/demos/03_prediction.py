"""Predicting a stage from the efforts already spent.

Matching rules each vote with the defuzzified value of their consequent,
weighted by confidence.
"""

# %%
# Three rules fire for a project whose planning effort lies in EP1.
from stage_effort import predict
from stage_effort.rules import parse_rules

rules = parse_rules(
    """
EP1 => ES4 confidence=0.932
EP1 => ES3 confidence=0.843
EP1 => ES1 confidence=0.78
"""
)
estimate = predict(rules, [20, 35, 55, 70])
for c in estimate.contributions:
    (item,) = c.rule.consequent
    print(f"{item.code}: value {c.defuzzified:g}, weight {c.confidence}")
print(f"estimate = {estimate.value:.2f}")

# %%
# On a trained model the same happens behind ``estimate``.
from stage_effort import PipelineConfig, Stage, build_model
from stage_effort.synthetic import generate_dataset

data = generate_dataset(34, seed=2009)
model = build_model(data, PipelineConfig())
known = data["P001"]
priors = {Stage.EP: known.effort(Stage.EP), Stage.ES: known.effort(Stage.ES)}
result = model.estimate(Stage.ED, priors, fallback="median")
print(f"ED for P001: predicted {result.value:.2f}, recorded {known.effort(Stage.ED):.2f}, "
      f"{len(result.contributions)} rules, fallback used: {result.fallback_used}")

# %%
# With ``fallback="error"`` an unmatched query raises instead of guessing.
from stage_effort.errors import NoApplicableRulesError

try:
    model.estimate(Stage.ED, {Stage.EP: 1e6}, rules=[])
except NoApplicableRulesError as exc:
    print("no prediction:", exc)
