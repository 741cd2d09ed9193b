import pytest

from stage_effort import IQRPolicy, PipelineConfig, Stage, parse_config
from stage_effort.discretize import Explicit, Fraction
from stage_effort.errors import ConfigurationError, ParameterError


def test_defaults():
    cfg = PipelineConfig()
    assert cfg.intervals == {Stage.EP: 7, Stage.ES: 8, Stage.ED: 10, Stage.EB: 9, Stage.ET: 8, Stage.EI: 11}
    assert cfg.min_support == 0.01 and cfg.min_confidence == 0.8
    assert cfg.outlier_policy is None and cfg.fallback == "median"
    assert all(p == Fraction(0.05) for p in cfg.padding.values())


def test_parse_full_file():
    cfg = parse_config(
        """
[intervals]
ES = 4
[padding]
mode = fraction
fraction = 0.1
[padding.ES]
mode = explicit
d1 = 12
d2 = 8
[mining]
min_support = 0.05
min_confidence = 0.7   ; inline comment
[preprocessing]
outlier_policy = iqr:2
[prediction]
fallback = error
"""
    )
    assert cfg.intervals[Stage.ES] == 4 and cfg.intervals[Stage.EP] == 7
    assert cfg.padding[Stage.ES] == Explicit(12, 8) and cfg.padding[Stage.EI] == Fraction(0.1)
    assert (cfg.min_support, cfg.min_confidence) == (0.05, 0.7)
    assert cfg.outlier_policy == IQRPolicy(2.0)
    assert cfg.fallback == "error"


def test_empty_file_gives_defaults():
    assert parse_config("") == PipelineConfig()


@pytest.mark.parametrize(
    "text",
    [
        "[intervals]\nEX = 3\n",
        "[intervals]\nEP = 0\n",
        "[intervals]\nEP = three\n",
        "[mining]\nmin_confidence = 1.5\n",
        "[mining]\nlift = 2\n",
        "[padding.ES]\nmode = explicit\nd1 = 1\n",
        "[padding.ES]\nmode = gaussian\n",
        "[preprocessing]\noutlier_policy = zscore\n",
        "[prediction]\nfallback = mean\n",
        "[colours]\nred = 1\n",
        "not ini at all",
    ],
)
def test_bad_config(text):
    with pytest.raises(ConfigurationError):
        parse_config(text)


def test_constructor_validation():
    with pytest.raises(ParameterError):
        PipelineConfig(min_support=0)
    with pytest.raises(ParameterError):
        PipelineConfig(intervals={Stage.EP: 0})
