"""JSON configuration trees for the command line.

A configuration file carries the experiment (``business``, ``returns``,
``grid``, ``mc``, ``capitals``, ``alphas``) and the optional sections
``novikov``, ``analytics``, ``probe`` and ``slope``. Dotted ``key=value``
overrides are applied to the tree before it is parsed.
"""

import copy
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Sequence

from ._errors import SpecError
from .analytics import DEFAULT_HORIZON, DEFAULT_P
from .bounds import NovikovConstants
from .model import ExperimentSpec

logger = logging.getLogger(__name__)

DEFAULT_PROBE_T = (50.0, 100.0, 200.0)


def load_config(path: str | Path) -> dict[str, Any]:
    """Read a JSON configuration file.

    Raises
    ------
    SpecError
        If the file cannot be read or is not a JSON object.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as err:
        raise SpecError(f"cannot read {path}: {err.strerror or err}", "config") from err
    try:
        tree = json.loads(text)
    except json.JSONDecodeError as err:
        raise SpecError(f"{path}: invalid JSON at line {err.lineno} column {err.colno}: {err.msg}", "config") from err
    if not isinstance(tree, dict):
        raise SpecError(f"{path}: top level must be an object", "config")
    logger.debug("loaded config %s", path)
    return tree


def _parse_value(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def apply_overrides(tree: Mapping[str, Any], overrides: Sequence[str]) -> dict[str, Any]:
    """Return a copy of ``tree`` with each ``"a.b.c=value"`` applied in order.

    Values are parsed as JSON and kept as strings when that fails.
    Intermediate sections are created as needed.

    Examples
    --------
    >>> apply_overrides({"mc": {"n_paths": 10}}, ["mc.n_paths=2000", "grid.T=5"])
    {'mc': {'n_paths': 2000}, 'grid': {'T': 5}}
    """
    out = copy.deepcopy(dict(tree))
    for item in overrides:
        key, sep, raw = item.partition("=")
        key = key.strip()
        if not sep or not key:
            raise SpecError(f"override must look like key=value, got {item!r}", "--set")
        parts = key.split(".")
        node = out
        for depth, part in enumerate(parts[:-1]):
            child = node.setdefault(part, {})
            if not isinstance(child, dict):
                raise SpecError("cannot descend into a non-object", ".".join(parts[: depth + 1]))
            node = child
        node[parts[-1]] = _parse_value(raw.strip())
        logger.debug("override %s = %r", key, node[parts[-1]])
    return out


def experiment_from_config(tree: Mapping[str, Any]) -> ExperimentSpec:
    return ExperimentSpec.from_dict(tree)


def novikov_from_config(tree: Mapping[str, Any]) -> NovikovConstants:
    """User constants when a ``novikov`` section is present, defaults otherwise.

    Missing entries of a partial section fall back to the default value.
    """
    section = tree.get("novikov")
    if section is None:
        return NovikovConstants()
    if not isinstance(section, Mapping):
        raise SpecError("must be an object", "novikov")
    unknown = set(section) - {"K1", "K2", "K3"}
    if unknown:
        raise SpecError(f"unknown keys {sorted(unknown)}", "novikov")
    try:
        values = {k: float(v) for k, v in section.items()}
    except (TypeError, ValueError) as err:
        raise SpecError(f"constants must be numbers ({err})", "novikov") from err
    return NovikovConstants(**values, provenance="user")


@dataclass(frozen=True)
class RunOptions:
    """Settings outside the experiment proper."""
    p: float = DEFAULT_P
    horizon: float = DEFAULT_HORIZON
    probe_T: tuple[float, ...] = DEFAULT_PROBE_T
    probe_y: float | None = None
    beta_ref: float | None = None


def options_from_config(tree: Mapping[str, Any]) -> RunOptions:
    analytics = tree.get("analytics") or {}
    probe = tree.get("probe") or {}
    slope = tree.get("slope") or {}
    try:
        options = RunOptions(
            p=float(analytics.get("p", DEFAULT_P)),
            horizon=float(analytics.get("horizon", DEFAULT_HORIZON)),
            probe_T=tuple(float(t) for t in probe.get("T_list", DEFAULT_PROBE_T)),
            probe_y=None if probe.get("y") is None else float(probe["y"]),
            beta_ref=None if slope.get("beta_ref") is None else float(slope["beta_ref"]),
        )
    except (TypeError, ValueError, AttributeError) as err:
        raise SpecError(f"malformed option ({err})", "analytics") from err
    if not 1.0 < options.p < 2.0:
        raise SpecError(f"p must lie in (1, 2), got {options.p}", "analytics.p")
    if not options.horizon > 0:
        raise SpecError(f"must be > 0, got {options.horizon}", "analytics.horizon")
    if not options.probe_T or any(not t > 0 for t in options.probe_T):
        raise SpecError("horizons must be > 0", "probe.T_list")
    return options
