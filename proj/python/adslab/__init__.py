"""Thin Python layer over the C++ simulation core.

Configs may be given as dicts, JSON strings, or preset names.
"""

import json

from . import _adslab
from ._adslab import (  # noqa: F401
    AdslabError,
    ConfigError,
    concept_shift,
    cosine_distance,
    covariate_shift,
    exploit_count,
    kl_divergence,
    pbt_walkthrough,
    preset_names,
    rl_reward,
    sigmoid,
    softmax,
    swap_assignment,
)

STEP_COLUMNS = ("trial", "t", "learner", "env", "action", "reward", "extra")
DRIFT_COLUMNS = ("trial", "t", "learner", "accuracy", "concept_shift", "covariate_shift")


def _config_text(config, **overrides):
    if isinstance(config, str) and not config.lstrip().startswith("{"):
        config = {"preset": config}
    if isinstance(config, str):
        config = json.loads(config)
    config = dict(config)
    config.update(overrides)
    return json.dumps(config)


def canonical_config(config, **overrides):
    return json.loads(_adslab.canonical_config(_config_text(config, **overrides)))


def config_hash(config, **overrides):
    return _adslab.config_hash(_config_text(config, **overrides))


def trial_count(config, **overrides):
    return _adslab.trial_count(_config_text(config, **overrides))


def run_trial(config, index=0, **overrides):
    """Run trial `index` of the expanded config; returns arrays and a summary."""
    return _adslab.run_trial(_config_text(config, **overrides), index)


def run_experiment(config, out_dir, workers=1, **overrides):
    return _adslab.run_experiment(_config_text(config, **overrides), str(out_dir), workers)


def write_reports(run_dir, out_dir=None):
    return _adslab.write_reports(str(run_dir), str(out_dir if out_dir is not None else run_dir))
