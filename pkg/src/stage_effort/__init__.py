"""Stage-effort estimation with fuzzy interval discretization and association rules.

Typical use::

    from stage_effort import PipelineConfig, Stage, build_model, read_dataset, filter_complete

    data = filter_complete(read_dataset("projects.csv"))
    model = build_model(data, PipelineConfig())
    model.estimate(Stage.ES, {Stage.EP: 30.0}, fallback="median").value
"""

__version__ = "0.1.0"

from .config import PipelineConfig, load_config, parse_config
from .dataset import (
    STAGES,
    TARGET_STAGES,
    Dataset,
    IQRPolicy,
    ProjectRecord,
    Stage,
    filter_complete,
    find_outliers,
    parse_dataset,
    quartiles,
    read_dataset,
    remove_outliers,
    serialize_dataset,
)
from .discretize import (
    Explicit,
    Fraction,
    IntervalScheme,
    Universe,
    build_universe,
    defuzzify,
    locate,
    membership,
    partition,
)
from .evaluate import EvaluationReport, FoldResult, StageMetrics, StageReport, evaluate, jackknife
from .metrics import BoxplotSummary, bias, boxplot_stats, mdmre, mmre
from .pipeline import StageModel, build_model, build_schemes
from .predict import Estimate, Query, make_query, match_rules, predict
from .ranktest import WilcoxonResult, wilcoxon_rank_sum
from .regression import RegressionModel, fit_exp_regression
from .rules import (
    AssociationRule,
    Item,
    TransactionDB,
    filter_rules,
    generate_rules,
    itemize,
    mine_frequent,
    mine_rules,
    parse_rules,
)
