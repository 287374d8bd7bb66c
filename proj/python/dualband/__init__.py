"""Dual-band RB and power allocation simulator."""

import json

from ._dualband import (
    ConfigError,
    ScenarioConfig,
    group_users,
    min_power_waterfill,
    parse_config,
    path_loss_db,
    proxy_power,
    run_trial,
    sweep,
    sweep_csv,
)


def config(**fields):
    """ScenarioConfig from keyword overrides of the defaults."""
    return parse_config(json.dumps(fields))


__all__ = [
    "ConfigError",
    "ScenarioConfig",
    "config",
    "group_users",
    "min_power_waterfill",
    "parse_config",
    "path_loss_db",
    "proxy_power",
    "run_trial",
    "sweep",
    "sweep_csv",
]
