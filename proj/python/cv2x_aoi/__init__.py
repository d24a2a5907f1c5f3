"""Slot-level C-V2X Mode 4 simulator with age-of-information metrics."""

from __future__ import annotations

import json
from typing import Any, Iterable, Mapping

from . import _cv2x
from ._cv2x import ConfigError, p_no_collision, sinr_threshold

__all__ = [
    "ConfigError",
    "default_config",
    "p_no_collision",
    "reference_scenario",
    "run",
    "sinr_threshold",
    "sweep",
    "validate",
]
__version__ = _cv2x.__version__


def _text(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _key_values(config: Mapping[str, Any] | None, overrides: Mapping[str, Any]) -> dict[str, str]:
    merged = dict(config or {})
    merged.update(overrides)
    return {key: _text(value) for key, value in merged.items()}


def default_config() -> dict[str, str]:
    """Every field at its default, as text."""
    return _cv2x.default_config()


def reference_scenario(num_vehicles: int, rri: int, mode: str = "oma") -> dict[str, str]:
    """The reference highway preset for one (vehicles, rri, access mode) cell."""
    return _cv2x.reference_scenario(num_vehicles, rri, mode)


def validate(config: Mapping[str, Any] | None = None, **overrides: Any) -> dict[str, str]:
    """Resolved configuration; raises ConfigError when invalid."""
    return _cv2x.validate(_key_values(config, overrides))


def run(config: Mapping[str, Any] | None = None, *, keep_series: bool = True, **overrides: Any):
    """Runs one scenario. Returns (summary dict, dict of numpy per-slot columns)."""
    summary, series = _cv2x.run(_key_values(config, overrides), keep_series)
    return json.loads(summary), series


def sweep(
    config: Mapping[str, Any] | None = None,
    axes: Mapping[str, Iterable[Any]] | None = None,
    seeds: Iterable[int] = (),
    jobs: int = 1,
    **overrides: Any,
) -> list[dict[str, Any]]:
    """Cartesian product of axes x seeds; one dict per cell in product order."""
    axis_list = [(field, [_text(v) for v in values]) for field, values in (axes or {}).items()]
    cells = _cv2x.sweep(_key_values(config, overrides), axis_list, list(seeds), jobs)
    return [
        {
            "params": params,
            "seed": seed,
            "summary": json.loads(summary) if summary else None,
            "error": error or None,
        }
        for params, seed, summary, error in cells
    ]
